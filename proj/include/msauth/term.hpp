#pragma once

#include <compare>
#include <set>
#include <string>

namespace msauth {

// Symbolic view of a protocol value: an XOR combination of named atoms, kept
// in normal form (sorted labels, pairs cancelled). Widths and padding live in
// the concrete byte layer; this layer only names things, which keeps
// deduction witnesses and reports readable.
class Term {
public:
    static Term zero() { return Term{}; }
    static Term atom(std::string label);

    // XOR: symmetric difference of the atom sets.
    Term combined(const Term& other) const;

    bool is_zero() const { return atoms_.empty(); }
    const std::set<std::string>& atoms() const { return atoms_; }
    std::string str() const;

    friend auto operator<=>(const Term&, const Term&) = default;

private:
    std::set<std::string> atoms_;
};

}  // namespace msauth
