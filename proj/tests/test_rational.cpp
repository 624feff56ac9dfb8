#include <doctest.h>

#include "ljet/numeric.hpp"
#include "ljet/rational.hpp"

using namespace ljet;

TEST_CASE("construction and normalization")
{
    CHECK(Rational(2, 4) == Rational(1, 2));
    CHECK(Rational(-3, -6) == Rational(1, 2));
    CHECK(Rational(3, -6) == Rational(-1, 2));
    CHECK(Rational(0, 5).is_zero());
    CHECK(Rational(7).is_integer());
    CHECK_THROWS(Rational(1, 0));
}

TEST_CASE("from_string handles integers, fractions and decimals")
{
    CHECK(Rational::from_string("42") == Rational(42));
    CHECK(Rational::from_string("-6/4") == Rational(-3, 2));
    CHECK(Rational::from_string("0.25") == Rational(1, 4));
    CHECK(Rational::from_string("2.5") == Rational(5, 2));
    CHECK_THROWS(Rational::from_string("1."));
}

TEST_CASE("arithmetic matches double arithmetic on random values")
{
    Rng rng(99);
    for (int i = 0; i < 500; ++i) {
        Rational a(rng.pick(-50, 50), rng.pick(1, 9));
        Rational b(rng.pick(-50, 50), rng.pick(1, 9));
        CHECK((a + b).to_double() == doctest::Approx(a.to_double() + b.to_double()));
        CHECK((a * b).to_double() == doctest::Approx(a.to_double() * b.to_double()));
        CHECK((a - b).to_double() == doctest::Approx(a.to_double() - b.to_double()));
        if (!b.is_zero())
            CHECK((a / b).to_double() == doctest::Approx(a.to_double() / b.to_double()));
    }
}

TEST_CASE("integer powers are exact")
{
    CHECK(Rational(2).pow(10) == Rational(1024));
    CHECK(Rational(2, 3).pow(-2) == Rational(9, 4));
    CHECK(Rational(-2).pow(3) == Rational(-8));
    CHECK(Rational(5).pow(0) == Rational(1));
    CHECK_THROWS(Rational(0).pow(-1));
}

TEST_CASE("gcd, numerator, denominator")
{
    CHECK(Rational::gcd(Rational(6), Rational(4)) == Rational(2));
    CHECK(Rational::gcd(Rational(0), Rational(-5)) == Rational(5));
    CHECK(Rational::gcd(Rational(1, 2), Rational(3, 4)) == Rational(1, 4));
    CHECK(Rational(-7, 3).numerator() == Rational(-7));
    CHECK(Rational(-7, 3).denominator() == Rational(3));
}

TEST_CASE("as_int and str round trip")
{
    CHECK(*Rational(17).as_int() == 17);
    CHECK(!Rational(1, 2).as_int());
    CHECK(Rational::from_string(Rational(-22, 7).str()) == Rational(-22, 7));
    CHECK(Rational(355, 113).str() == "355/113");
}

TEST_CASE("large values stay exact")
{
    Rational big(1);
    for (int i = 1; i <= 30; ++i)
        big *= Rational(i);
    // 30! computed by repeated multiplication
    CHECK(big.str() == "265252859812191058636308480000000");
    CHECK((big / big).is_one());
}
