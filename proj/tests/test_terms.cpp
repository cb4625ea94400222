#include "doctest.h"

#include "msauth/term.hpp"

using namespace msauth;

TEST_CASE("atoms combine as symmetric difference") {
    const Term a = Term::atom("a");
    const Term b = Term::atom("b");
    const Term ab = a.combined(b);
    CHECK(ab.atoms().size() == 2);
    CHECK(ab.combined(b) == a);      // b cancels
    CHECK(ab.combined(ab).is_zero());  // self-cancellation
    CHECK(a.combined(Term::zero()) == a);
}

TEST_CASE("normal form ignores construction order") {
    const Term left = Term::atom("x").combined(Term::atom("y")).combined(Term::atom("z"));
    const Term right = Term::atom("z").combined(Term::atom("x")).combined(Term::atom("y"));
    CHECK(left == right);
    CHECK(left.str() == "x ^ y ^ z");  // sorted, stable rendering
}

TEST_CASE("zero renders as zero") {
    CHECK(Term::zero().str() == "0");
    CHECK(Term::atom("a").combined(Term::atom("a")).str() == "0");
}

TEST_CASE("terms order deterministically") {
    const Term a = Term::atom("a");
    const Term b = Term::atom("b");
    CHECK(a < b);
    CHECK(Term::zero() < a);
}
