#include "ljet/parse.hpp"

#include <cctype>
#include <optional>

namespace ljet {

namespace {

std::optional<int> order_suffix(const std::string &name, const std::string &base)
{
    if (name == base)
        return 0;
    if (name.size() <= base.size() || name.compare(0, base.size(), base) != 0)
        return std::nullopt;
    std::string digits = name.substr(base.size());
    if (digits[0] == '0')
        return std::nullopt;
    int n = 0;
    for (char c : digits) {
        if (!std::isdigit(static_cast<unsigned char>(c)))
            return std::nullopt;
        n = n * 10 + (c - '0');
        if (n > 64)
            return std::nullopt;
    }
    return n;
}

bool is_elementary(const std::string &name, Fn &fn)
{
    if (name == "exp") fn = Fn::Exp;
    else if (name == "ln") fn = Fn::Ln;
    else if (name == "sin") fn = Fn::Sin;
    else if (name == "cos") fn = Fn::Cos;
    else if (name == "tan") fn = Fn::Tan;
    else return false;
    return true;
}

class Parser {
  public:
    Parser(const std::string &src, const JetContext &ctx) : src_(src), ctx_(ctx) {}

    Expr run()
    {
        Expr e;
        try {
            e = sum();
        } catch (const MathError &m) {
            // domain errors raised during canonicalization, e.g. ln(0)
            throw ParseError(m.what(), pos_);
        }
        skip_ws();
        if (pos_ != src_.size())
            throw ParseError("unexpected trailing input", pos_);
        return e;
    }

  private:
    const std::string &src_;
    const JetContext &ctx_;
    size_t pos_ = 0;

    void skip_ws()
    {
        while (pos_ < src_.size() && std::isspace(static_cast<unsigned char>(src_[pos_])))
            ++pos_;
    }

    char peek()
    {
        skip_ws();
        return pos_ < src_.size() ? src_[pos_] : '\0';
    }

    bool accept(char c)
    {
        if (peek() == c) {
            ++pos_;
            return true;
        }
        return false;
    }

    void expect(char c)
    {
        if (!accept(c))
            throw ParseError(std::string("expected '") + c + "'", pos_);
    }

    Expr sum()
    {
        Expr e = term();
        while (true) {
            if (accept('+'))
                e = e + term();
            else if (accept('-'))
                e = e - term();
            else
                return e;
        }
    }

    Expr term()
    {
        Expr e = factor();
        while (true) {
            if (accept('*'))
                e = e * factor();
            else if (accept('/')) {
                size_t at = pos_;
                Expr d = factor();
                if (is_zero(d))
                    throw ParseError("division by zero", at);
                e = e / d;
            } else
                return e;
        }
    }

    Expr factor()
    {
        if (accept('-'))
            return -factor();
        return power();
    }

    Expr power()
    {
        Expr base = atom();
        if (accept('^'))
            return make_pow(base, factor());
        return base;
    }

    Expr atom()
    {
        char c = peek();
        if (c == '(') {
            ++pos_;
            Expr e = sum();
            expect(')');
            return e;
        }
        if (std::isdigit(static_cast<unsigned char>(c)))
            return number();
        if (std::isalpha(static_cast<unsigned char>(c)))
            return identifier();
        throw ParseError("expected a number, identifier or '('", pos_);
    }

    Expr number()
    {
        size_t start = pos_;
        while (pos_ < src_.size() && std::isdigit(static_cast<unsigned char>(src_[pos_])))
            ++pos_;
        if (pos_ < src_.size() && src_[pos_] == '.') {
            ++pos_;
            size_t frac = pos_;
            while (pos_ < src_.size() && std::isdigit(static_cast<unsigned char>(src_[pos_])))
                ++pos_;
            if (pos_ == frac)
                throw ParseError("malformed number", start);
        }
        return make_num(Rational::from_string(src_.substr(start, pos_ - start)));
    }

    Expr identifier()
    {
        size_t start = pos_;
        while (pos_ < src_.size() &&
               std::isalnum(static_cast<unsigned char>(src_[pos_])))
            ++pos_;
        std::string name = src_.substr(start, pos_ - start);
        int primes = 0;
        while (pos_ < src_.size() && src_[pos_] == '\'') {
            ++primes;
            ++pos_;
        }
        if (peek() == '(') {
            Fn fn;
            if (is_elementary(name, fn)) {
                if (primes > 0)
                    throw ParseError("derivative primes are only allowed on declared functions",
                                     start);
                ++pos_;
                Expr arg = sum();
                expect(')');
                return make_call(fn, arg);
            }
            if (ctx_.is_function(name)) {
                ++pos_;
                size_t argpos = pos_;
                Expr arg = sum();
                expect(')');
                if (arg->kind != Kind::Sym || arg->sym.kind != SymKind::Independent)
                    throw ParseError("argument of " + name + "(...) must be " +
                                         ctx_.indep.name(),
                                     argpos);
                return make_uninterp(name, primes, arg);
            }
            throw ParseError("unknown function '" + name + "'", start);
        }
        if (primes > 0)
            throw ParseError("'" + name + "' is not a declared function", start);
        if (auto s = ctx_.resolve(name))
            return make_sym(*s);
        throw ParseError("undeclared symbol '" + name + "'", start);
    }
};

} // namespace

Expr parse(const std::string &text, const JetContext &ctx)
{
    return Parser(text, ctx).run();
}

std::optional<Symbol> JetContext::resolve(const std::string &name) const
{
    if (name == indep.base)
        return indep;
    for (auto &p : parameters)
        if (p == name)
            return parameter(p);
    for (auto &c : constants)
        if (c == name)
            return constant(c);
    if (auto n = order_suffix(name, jet_base))
        return jet(*n);
    if (has_nonlocal)
        if (auto n = order_suffix(name, nonlocal_base))
            return nonlocal(*n);
    return std::nullopt;
}

} // namespace ljet
