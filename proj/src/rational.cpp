#include "ljet/rational.hpp"

namespace ljet {

Rational::Rational(long long num, long long den)
{
    if (den == 0)
        throw std::domain_error("rational with zero denominator");
    mpq_init(q_);
    mpq_set_si(q_, num, 1);
    mpq_t d;
    mpq_init(d);
    mpq_set_si(d, den, 1);
    mpq_div(q_, q_, d);
    mpq_clear(d);
}

Rational Rational::from_string(const std::string &s)
{
    Rational r;
    auto dot = s.find('.');
    if (dot == std::string::npos) {
        if (mpq_set_str(r.q_, s.c_str(), 10) != 0)
            throw std::invalid_argument("bad rational literal: " + s);
        mpq_canonicalize(r.q_);
        return r;
    }
    // decimal literal: digits '.' digits  ->  exact rational
    std::string digits = s.substr(0, dot) + s.substr(dot + 1);
    size_t frac_len = s.size() - dot - 1;
    if (digits.empty() || frac_len == 0)
        throw std::invalid_argument("bad decimal literal: " + s);
    std::string frac = digits + "/1" + std::string(frac_len, '0');
    if (mpq_set_str(r.q_, frac.c_str(), 10) != 0)
        throw std::invalid_argument("bad decimal literal: " + s);
    mpq_canonicalize(r.q_);
    return r;
}

Rational Rational::operator+(const Rational &o) const
{
    Rational r;
    mpq_add(r.q_, q_, o.q_);
    return r;
}

Rational Rational::operator-(const Rational &o) const
{
    Rational r;
    mpq_sub(r.q_, q_, o.q_);
    return r;
}

Rational Rational::operator*(const Rational &o) const
{
    Rational r;
    mpq_mul(r.q_, q_, o.q_);
    return r;
}

Rational Rational::operator/(const Rational &o) const
{
    if (o.is_zero())
        throw std::domain_error("rational division by zero");
    Rational r;
    mpq_div(r.q_, q_, o.q_);
    return r;
}

Rational Rational::operator-() const
{
    Rational r;
    mpq_neg(r.q_, q_);
    return r;
}

Rational &Rational::operator+=(const Rational &o)
{
    mpq_add(q_, q_, o.q_);
    return *this;
}

Rational &Rational::operator*=(const Rational &o)
{
    mpq_mul(q_, q_, o.q_);
    return *this;
}

std::optional<long long> Rational::as_int() const
{
    if (!is_integer())
        return std::nullopt;
    if (!mpz_fits_slong_p(mpq_numref(q_)))
        return std::nullopt;
    return mpz_get_si(mpq_numref(q_));
}

Rational Rational::pow(long long e) const
{
    if (is_zero() && e < 0)
        throw std::domain_error("zero to a negative power");
    Rational r(1);
    Rational base = *this;
    unsigned long long n = e < 0 ? static_cast<unsigned long long>(-(e + 1)) + 1ull
                                 : static_cast<unsigned long long>(e);
    while (n) {
        if (n & 1ull)
            r *= base;
        base *= base;
        n >>= 1;
    }
    if (e < 0)
        return Rational(1) / r;
    return r;
}

Rational Rational::abs() const
{
    Rational r;
    mpq_abs(r.q_, q_);
    return r;
}

Rational Rational::numerator() const
{
    Rational r;
    mpq_set_num(r.q_, mpq_numref(q_));
    return r;
}

Rational Rational::denominator() const
{
    Rational r;
    mpq_set_num(r.q_, mpq_denref(q_));
    return r;
}

Rational Rational::gcd(const Rational &a, const Rational &b)
{
    if (a.is_zero())
        return b.abs();
    if (b.is_zero())
        return a.abs();
    Rational r;
    mpz_gcd(mpq_numref(r.q_), mpq_numref(a.q_), mpq_numref(b.q_));
    mpz_lcm(mpq_denref(r.q_), mpq_denref(a.q_), mpq_denref(b.q_));
    mpq_canonicalize(r.q_);
    return r;
}

std::string Rational::str() const
{
    char *cs = mpq_get_str(nullptr, 10, q_);
    std::string s(cs);
    void (*freefn)(void *, size_t);
    mp_get_memory_functions(nullptr, nullptr, &freefn);
    freefn(cs, s.size() + 1);
    return s;
}

} // namespace ljet
