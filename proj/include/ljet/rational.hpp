#pragma once

#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>

#include <gmp.h>

namespace ljet {

/// Exact rational number (arbitrary precision, always normalized, den > 0).
class Rational {
  public:
    Rational() { mpq_init(q_); }
    Rational(long long n)
    {
        mpq_init(q_);
        mpq_set_si(q_, n, 1);
    }
    Rational(long long num, long long den);
    Rational(const Rational &o)
    {
        mpq_init(q_);
        mpq_set(q_, o.q_);
    }
    Rational(Rational &&o) noexcept
    {
        mpq_init(q_);
        mpq_swap(q_, o.q_);
    }
    Rational &operator=(const Rational &o)
    {
        mpq_set(q_, o.q_);
        return *this;
    }
    Rational &operator=(Rational &&o) noexcept
    {
        mpq_swap(q_, o.q_);
        return *this;
    }
    ~Rational() { mpq_clear(q_); }

    /// Parses "123", "-4/7" or a decimal literal like "0.25".
    static Rational from_string(const std::string &s);

    Rational operator+(const Rational &o) const;
    Rational operator-(const Rational &o) const;
    Rational operator*(const Rational &o) const;
    Rational operator/(const Rational &o) const; // throws on zero divisor
    Rational operator-() const;
    Rational &operator+=(const Rational &o);
    Rational &operator*=(const Rational &o);

    bool operator==(const Rational &o) const { return mpq_equal(q_, o.q_) != 0; }
    bool operator!=(const Rational &o) const { return !(*this == o); }
    int cmp(const Rational &o) const { return mpq_cmp(q_, o.q_); }
    bool operator<(const Rational &o) const { return cmp(o) < 0; }

    bool is_zero() const { return mpq_sgn(q_) == 0; }
    bool is_one() const { return mpq_cmp_si(q_, 1, 1) == 0; }
    bool is_integer() const { return mpz_cmp_si(mpq_denref(q_), 1) == 0; }
    int sign() const { return mpq_sgn(q_); }

    /// Integer value if this is an integer fitting in long long.
    std::optional<long long> as_int() const;

    /// Exact integer power; throws on 0^negative.
    Rational pow(long long e) const;

    Rational abs() const;
    Rational numerator() const;
    Rational denominator() const;
    static Rational gcd(const Rational &a, const Rational &b); // gcd of numerators / lcm of denominators

    double to_double() const { return mpq_get_d(q_); }
    std::string str() const;

  private:
    mpq_t q_;
};

} // namespace ljet
