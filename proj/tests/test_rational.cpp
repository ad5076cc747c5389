#include <doctest.h>

#include "gtp/errors.hpp"
#include "gtp/rational.hpp"

using namespace gtp;

TEST_CASE("rational literals parse and canonicalize") {
    CHECK(parse_rational("1/2") == Rational(1, 2));
    CHECK(parse_rational("-2/6") == Rational(-1, 3));
    CHECK(parse_rational("4/8") + parse_rational("-1/2") == 0);
    CHECK(parse_rational("-3") == Rational(-3));
    CHECK(parse_rational("0") == 0);
    CHECK(parse_rational("7/1") == Rational(7));
}

TEST_CASE("rational formatting is canonical") {
    CHECK(format_rational(Rational(1, 2)) == "1/2");
    CHECK(format_rational(Rational(4, 8)) == "1/2");
    CHECK(format_rational(Rational(-6, 4)) == "-3/2");
    CHECK(format_rational(Rational(5)) == "5");
    CHECK(format_rational(Rational(0)) == "0");
    CHECK(format_rational(parse_rational("10/-4")) == "-5/2");
}

TEST_CASE("bad literals are rejected") {
    CHECK_THROWS_AS(parse_rational(""), InputError);
    CHECK_THROWS_AS(parse_rational("1/0"), InputError);
    CHECK_THROWS_AS(parse_rational("x"), InputError);
    CHECK_THROWS_AS(parse_rational("1.5"), InputError);
    CHECK_THROWS_AS(parse_rational("1/2/3"), InputError);
    CHECK_THROWS_AS(parse_rational("1 /2"), InputError);
}

TEST_CASE("round trip on small fractions") {
    for (long num = -12; num <= 12; ++num) {
        for (long den = 1; den <= 9; ++den) {
            const Rational q(num, den);
            CHECK(parse_rational(format_rational(q)) == q);
        }
    }
}
