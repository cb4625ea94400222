#include "msauth/term.hpp"

#include <sstream>

namespace msauth {

Term Term::atom(std::string label) {
    Term t;
    t.atoms_.insert(std::move(label));
    return t;
}

Term Term::combined(const Term& other) const {
    Term out = *this;
    for (const std::string& label : other.atoms_) {
        auto [it, inserted] = out.atoms_.insert(label);
        if (!inserted) {
            out.atoms_.erase(it);
        }
    }
    return out;
}

std::string Term::str() const {
    if (atoms_.empty()) {
        return "0";
    }
    std::ostringstream out;
    bool first = true;
    for (const std::string& label : atoms_) {
        if (!first) {
            out << " ^ ";
        }
        out << label;
        first = false;
    }
    return out.str();
}

}  // namespace msauth
