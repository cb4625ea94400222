#pragma once

#include <bitset>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "msauth/bytes.hpp"
#include "msauth/term.hpp"

namespace msauth {

// One hash call-site the protocol exposes, instantiated with the genuine
// argument bytes from a run. The closure fires it once every argument value
// becomes derivable, at which point the digest joins the knowledge set —
// the attacker knows the protocol, so the shapes themselves are public.
struct HashShape {
    std::string name;
    std::vector<Value> args;  // natural widths, concatenated raw when hashed
    Value digest;             // 32 bytes
};

// What a passive-then-active adversary can compute from a set of observed
// values under XOR (with the zero-padding the protocol uses), truncation, and
// the protocol's hash shapes.
//
// Every fact is a concrete byte string, embedded left-aligned into a 256-bit
// row. XOR-derivability is then exact linear algebra: a target is computable
// iff its row lies in the GF(2) span of the known rows. Hash and truncation
// steps extend the row set in bounded closure rounds; hashes are uninvertible
// by construction (a digest row enters only when its shape fires or when it
// was observed directly).
class KnowledgeSet {
public:
    struct Limits {
        int rounds = 3;
        std::size_t max_facts = 100'000;
    };

    // Adds one observed value. Duplicate byte content is fine; the basis
    // simply records a dependency.
    void grant(const std::string& name, const Value& bytes);
    void add_shape(HashShape shape);

    // Runs hash/truncation closure to a fixpoint or the given bounds.
    void close(const Limits& limits);
    void close();

    // Span membership for the padded row of `bytes`.
    bool derivable(const Value& bytes) const;
    // If derivable, the XOR combination of fact names that reproduces it.
    std::optional<Term> witness(const Value& bytes) const;

    std::size_t fact_count() const { return facts_; }
    std::size_t rank() const { return basis_.size(); }
    // Number of granted/derived facts that turned out to be XOR combinations
    // of earlier ones. Guess verification rests on this: a correct guess
    // collapses the rank, a wrong one adds fresh independent digests.
    std::size_t dependency_count() const { return facts_ - basis_.size(); }

private:
    static constexpr std::size_t kRowBits = 8 * kDigestWidth;
    struct Row {
        std::bitset<kRowBits> bits;
        Term expr;
    };

    static Row make_row(const Value& bytes, Term expr);
    // Reduces against the basis; returns the remainder row.
    Row reduce(Row row) const;
    void insert(Row row);

    std::vector<Row> basis_;  // echelon form, ordered by leading bit
    std::vector<HashShape> shapes_;
    std::vector<bool> fired_;
    std::size_t facts_ = 0;
};

}  // namespace msauth
