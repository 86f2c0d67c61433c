#include <doctest.h>

#include "orbatlas/rational.hpp"

using orb::Rat;

TEST_CASE("rational normalization and arithmetic") {
    CHECK(Rat(2, 4) == Rat(1, 2));
    CHECK(Rat(-2, -4) == Rat(1, 2));
    CHECK(Rat(2, -4) == Rat(-1, 2));
    CHECK(Rat(0, 7) == Rat(0));
    CHECK(Rat(1, 2) + Rat(1, 3) == Rat(5, 6));
    CHECK(Rat(1, 2) - Rat(1, 2) == Rat(0));
    CHECK(Rat(2, 3) * Rat(3, 4) == Rat(1, 2));
    CHECK(Rat(1, 2) / Rat(1, 6) == Rat(3));
    CHECK(Rat(1, 3) < Rat(1, 2));
    CHECK(Rat(5, 6).str() == "5/6");
    CHECK(Rat(3).str() == "3");
    CHECK_THROWS_AS(Rat(1, 0), std::domain_error);
    CHECK_THROWS_AS(Rat(1, 2) / Rat(0), std::domain_error);
}

TEST_CASE("rational sums stay exact") {
    Rat six(0);
    for (int i = 0; i < 6; ++i) six += Rat(1, 6);
    CHECK(six == Rat(1));
}
