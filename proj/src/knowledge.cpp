#include "msauth/knowledge.hpp"

#include <algorithm>
#include <stdexcept>

namespace msauth {

namespace {

// Bit index 0 is the most significant bit of byte 0, so "leading bit" means
// the first differing position reading the value left to right.
std::size_t leading_bit(const std::bitset<8 * kDigestWidth>& bits) {
    for (std::size_t i = 0; i < bits.size(); ++i) {
        if (bits.test(i)) {
            return i;
        }
    }
    return bits.size();
}

}  // namespace

KnowledgeSet::Row KnowledgeSet::make_row(const Value& bytes, Term expr) {
    if (bytes.width() > kDigestWidth) {
        throw std::invalid_argument("knowledge row wider than a digest");
    }
    Row row{.bits = {}, .expr = std::move(expr)};
    for (std::size_t i = 0; i < bytes.width(); ++i) {
        for (int b = 0; b < 8; ++b) {
            if (bytes[i] & (0x80u >> b)) {
                row.bits.set(i * 8 + static_cast<std::size_t>(b));
            }
        }
    }
    return row;
}

KnowledgeSet::Row KnowledgeSet::reduce(Row row) const {
    for (const Row& pivot : basis_) {
        const std::size_t lead = leading_bit(pivot.bits);
        if (row.bits.test(lead)) {
            row.bits ^= pivot.bits;
            row.expr = row.expr.combined(pivot.expr);
        }
    }
    return row;
}

void KnowledgeSet::insert(Row row) {
    ++facts_;
    Row reduced = reduce(std::move(row));
    if (reduced.bits.none()) {
        return;  // dependent on existing knowledge
    }
    // Rows keep distinct leading bits in ascending order, so reduce() is a
    // single forward sweep: every pivot is all-zero before its own lead and
    // can never re-set a position an earlier pivot cleared.
    const std::size_t lead = leading_bit(reduced.bits);
    auto pos = std::find_if(basis_.begin(), basis_.end(),
                            [&](const Row& r) { return leading_bit(r.bits) > lead; });
    basis_.insert(pos, std::move(reduced));
}

void KnowledgeSet::grant(const std::string& name, const Value& bytes) {
    insert(make_row(bytes, Term::atom(name)));
}

void KnowledgeSet::add_shape(HashShape shape) {
    if (shape.digest.width() != kDigestWidth) {
        throw std::invalid_argument("hash shape digest must be digest-width");
    }
    shapes_.push_back(std::move(shape));
    fired_.push_back(false);
}

void KnowledgeSet::close() { close(Limits{}); }

void KnowledgeSet::close(const Limits& limits) {
    for (int round = 0; round < limits.rounds; ++round) {
        bool changed = false;

        for (std::size_t i = 0; i < shapes_.size(); ++i) {
            if (fired_[i] || facts_ >= limits.max_facts) {
                continue;
            }
            const HashShape& shape = shapes_[i];
            const bool ready = std::all_of(shape.args.begin(), shape.args.end(),
                                           [&](const Value& arg) { return derivable(arg); });
            if (ready) {
                grant(shape.name, shape.digest);
                fired_[i] = true;
                changed = true;
            }
        }

        // Truncation: any computable value can be cut to the id width. Only
        // rows that actually carry high bytes produce something new.
        const std::vector<Row> snapshot = basis_;
        for (const Row& row : snapshot) {
            if (facts_ >= limits.max_facts) {
                break;
            }
            std::bitset<kRowBits> head = row.bits;
            for (std::size_t bit = 8 * kIdWidth; bit < kRowBits; ++bit) {
                head.reset(bit);
            }
            if (head == row.bits || head.none()) {
                continue;
            }
            Row candidate{.bits = head, .expr = Term::atom("trunc(" + row.expr.str() + ")")};
            if (!reduce(candidate).bits.none()) {
                insert(std::move(candidate));
                changed = true;
            }
        }

        if (!changed) {
            break;
        }
    }
}

bool KnowledgeSet::derivable(const Value& bytes) const {
    return reduce(make_row(bytes, Term::zero())).bits.none();
}

std::optional<Term> KnowledgeSet::witness(const Value& bytes) const {
    Row reduced = reduce(make_row(bytes, Term::zero()));
    if (!reduced.bits.none()) {
        return std::nullopt;
    }
    return reduced.expr;
}

}  // namespace msauth
