#include "ljet/expr.hpp"

#include <algorithm>

namespace ljet {

namespace {

Expr mk(Node n) { return std::make_shared<const Node>(std::move(n)); }

Expr raw_mul(std::vector<Expr> kids)
{
    Node n;
    n.kind = Kind::Mul;
    n.kids = std::move(kids);
    return mk(std::move(n));
}

Expr raw_pow(Expr base, Expr exponent)
{
    Node n;
    n.kind = Kind::Pow;
    n.kids = {std::move(base), std::move(exponent)};
    return mk(std::move(n));
}

int fn_rank(Fn f) { return static_cast<int>(f); }

const Expr &one_expr()
{
    static const Expr e = make_num(1);
    return e;
}

// term from coefficient and monomial, both canonical, coeff nonzero
Expr term_from(const Rational &c, const Expr &mono)
{
    if (is_one(mono))
        return make_num(c);
    if (c.is_one())
        return mono;
    std::vector<Expr> kids;
    kids.push_back(make_num(c));
    if (mono->kind == Kind::Mul)
        kids.insert(kids.end(), mono->kids.begin(), mono->kids.end());
    else
        kids.push_back(mono);
    return raw_mul(std::move(kids));
}

} // namespace

Expr make_num(Rational r)
{
    Node n;
    n.kind = Kind::Num;
    n.num = std::move(r);
    return mk(std::move(n));
}

Expr make_num(long long v) { return make_num(Rational(v)); }

Expr make_sym(Symbol s)
{
    Node n;
    n.kind = Kind::Sym;
    n.sym = std::move(s);
    return mk(std::move(n));
}

int cmp(const Expr &a, const Expr &b)
{
    if (a.get() == b.get())
        return 0;
    if (a->kind != b->kind)
        return static_cast<int>(a->kind) < static_cast<int>(b->kind) ? -1 : 1;
    switch (a->kind) {
    case Kind::Num:
        return a->num.cmp(b->num);
    case Kind::Sym:
        return sym_cmp(a->sym, b->sym);
    case Kind::Pow:
        if (int c = cmp(a->kids[0], b->kids[0]))
            return c;
        return cmp(a->kids[1], b->kids[1]);
    case Kind::Mul:
    case Kind::Add: {
        size_t n = std::min(a->kids.size(), b->kids.size());
        for (size_t i = 0; i < n; ++i)
            if (int c = cmp(a->kids[i], b->kids[i]))
                return c;
        if (a->kids.size() != b->kids.size())
            return a->kids.size() < b->kids.size() ? -1 : 1;
        return 0;
    }
    case Kind::Call:
        if (a->fn != b->fn)
            return fn_rank(a->fn) < fn_rank(b->fn) ? -1 : 1;
        if (a->fn == Fn::Uninterp) {
            if (int c = a->fname.compare(b->fname))
                return c < 0 ? -1 : 1;
            if (a->forder != b->forder)
                return a->forder < b->forder ? -1 : 1;
        }
        return cmp(a->kids[0], b->kids[0]);
    }
    return 0;
}

bool is_zero(const Expr &e) { return e->kind == Kind::Num && e->num.is_zero(); }
bool is_one(const Expr &e) { return e->kind == Kind::Num && e->num.is_one(); }
bool is_num(const Expr &e) { return e->kind == Kind::Num; }

std::optional<long long> as_int(const Expr &e)
{
    if (e->kind != Kind::Num)
        return std::nullopt;
    return e->num.as_int();
}

std::pair<Rational, Expr> coeff_split(const Expr &e)
{
    if (e->kind == Kind::Num)
        return {e->num, one_expr()};
    if (e->kind == Kind::Mul && e->kids[0]->kind == Kind::Num) {
        Rational c = e->kids[0]->num;
        if (e->kids.size() == 2)
            return {c, e->kids[1]};
        std::vector<Expr> rest(e->kids.begin() + 1, e->kids.end());
        return {c, raw_mul(std::move(rest))};
    }
    return {Rational(1), e};
}

Expr make_add(std::vector<Expr> args)
{
    Rational cst(0);
    std::map<Expr, Rational, ExprLess> terms;
    std::vector<Expr> stack(args.rbegin(), args.rend());
    while (!stack.empty()) {
        Expr a = stack.back();
        stack.pop_back();
        if (a->kind == Kind::Add) {
            for (auto it = a->kids.rbegin(); it != a->kids.rend(); ++it)
                stack.push_back(*it);
            continue;
        }
        if (a->kind == Kind::Num) {
            cst += a->num;
            continue;
        }
        auto [c, mono] = coeff_split(a);
        terms[mono] += c;
    }
    std::vector<Expr> kids;
    if (!cst.is_zero())
        kids.push_back(make_num(cst));
    for (auto &[mono, c] : terms)
        if (!c.is_zero())
            kids.push_back(term_from(c, mono));
    if (kids.empty())
        return make_num(0);
    if (kids.size() == 1)
        return kids[0];
    Node n;
    n.kind = Kind::Add;
    n.kids = std::move(kids);
    return mk(std::move(n));
}

Expr make_mul(std::vector<Expr> args)
{
    Rational coeff(1);
    std::map<Expr, std::vector<Expr>, ExprLess> facs; // base -> exponents
    std::vector<Expr> exp_args;

    std::vector<Expr> stack(args.rbegin(), args.rend());
    while (!stack.empty()) {
        Expr a = stack.back();
        stack.pop_back();
        switch (a->kind) {
        case Kind::Mul:
            for (auto it = a->kids.rbegin(); it != a->kids.rend(); ++it)
                stack.push_back(*it);
            break;
        case Kind::Num:
            coeff *= a->num;
            if (coeff.is_zero())
                return make_num(0);
            break;
        case Kind::Call:
            if (a->fn == Fn::Exp) {
                exp_args.push_back(a->kids[0]);
                break;
            }
            facs[a].push_back(one_expr());
            break;
        case Kind::Pow: {
            const Expr &base = a->kids[0];
            const Expr &ex = a->kids[1];
            if (base->kind == Kind::Call && base->fn == Fn::Exp)
                exp_args.push_back(make_mul({ex, base->kids[0]}));
            else
                facs[base].push_back(ex);
            break;
        }
        default:
            facs[a].push_back(one_expr());
        }
    }

    std::vector<std::pair<Expr, Expr>> merged; // (base, exponent)
    for (auto &[base, exps] : facs) {
        Expr ex = exps.size() == 1 ? exps[0] : make_add(exps);
        if (is_zero(ex))
            continue;
        if (base->kind == Kind::Num) {
            if (auto n = as_int(ex)) {
                coeff *= base->num.pow(*n);
                if (coeff.is_zero())
                    return make_num(0);
                continue;
            }
        }
        merged.emplace_back(base, ex);
    }
    if (!exp_args.empty()) {
        Expr u = make_add(std::move(exp_args));
        if (!is_zero(u)) {
            Node c;
            c.kind = Kind::Call;
            c.fn = Fn::Exp;
            c.kids = {u};
            merged.emplace_back(mk(std::move(c)), one_expr());
        }
    }
    std::sort(merged.begin(), merged.end(), [](const auto &x, const auto &y) {
        if (int c = cmp(x.first, y.first))
            return c < 0;
        return cmp(x.second, y.second) < 0;
    });

    // expand a sum raised to a positive integer power, if present
    for (size_t i = 0; i < merged.size(); ++i) {
        const auto &[base, ex] = merged[i];
        auto n = as_int(ex);
        if (base->kind != Kind::Add || !n || *n <= 0)
            continue;
        std::vector<Expr> rest;
        rest.push_back(make_num(coeff));
        for (size_t j = 0; j < merged.size(); ++j)
            if (j != i)
                rest.push_back(make_pow(merged[j].first, merged[j].second));
        if (*n > 1)
            rest.push_back(make_pow(base, make_num(*n - 1)));
        Expr rest_expr = make_mul(std::move(rest));
        std::vector<Expr> out;
        out.reserve(base->kids.size());
        for (const Expr &term : base->kids)
            out.push_back(make_mul({rest_expr, term}));
        return make_add(std::move(out));
    }

    std::vector<Expr> kids;
    bool redo = false;
    for (auto &[base, ex] : merged) {
        Expr f = make_pow(base, ex);
        // the rebuilt factor may need another collection pass: it can fold to
        // a number, distribute, or resurface under a different base (nested
        // powers whose exponents merged to an integer)
        if (f->kind == Kind::Num || f->kind == Kind::Mul || f->kind == Kind::Add)
            redo = true;
        else if (f->kind == Kind::Pow && !same(f->kids[0], base))
            redo = true;
        kids.push_back(f);
    }
    if (redo) {
        kids.push_back(make_num(coeff));
        return make_mul(std::move(kids));
    }
    if (kids.empty())
        return make_num(coeff);
    if (coeff.is_one() && kids.size() == 1)
        return kids[0];
    if (!coeff.is_one())
        kids.insert(kids.begin(), make_num(coeff));
    if (kids.size() == 1)
        return kids[0];
    return raw_mul(std::move(kids));
}

Expr make_pow(Expr base, Expr exponent)
{
    if (exponent->kind == Kind::Num) {
        const Rational &re = exponent->num;
        if (re.is_zero())
            return make_num(1);
        if (re.is_one())
            return base;
        if (base->kind == Kind::Num) {
            const Rational &rb = base->num;
            if (rb.is_zero()) {
                if (re.sign() > 0)
                    return make_num(0);
                throw MathError("zero raised to a negative power");
            }
            if (rb.is_one())
                return make_num(1);
            if (auto n = re.as_int())
                return make_num(rb.pow(*n));
        }
        if (auto n = re.as_int()) {
            if (base->kind == Kind::Pow)
                return make_pow(base->kids[0], make_mul({base->kids[1], exponent}));
            if (base->kind == Kind::Mul) {
                std::vector<Expr> kids;
                kids.reserve(base->kids.size());
                for (const Expr &k : base->kids)
                    kids.push_back(make_pow(k, exponent));
                return make_mul(std::move(kids));
            }
            if (base->kind == Kind::Add && *n > 0) {
                std::vector<Expr> copies(static_cast<size_t>(*n), base);
                return make_mul(std::move(copies));
            }
        }
    }
    if (base->kind == Kind::Call && base->fn == Fn::Exp)
        return make_call(Fn::Exp, make_mul({exponent, base->kids[0]}));
    return raw_pow(std::move(base), std::move(exponent));
}

Expr make_call(Fn fn, Expr arg)
{
    if (fn == Fn::Uninterp)
        throw MathError("uninterpreted calls need make_uninterp");
    if (arg->kind == Kind::Num) {
        const Rational &r = arg->num;
        if (r.is_zero()) {
            switch (fn) {
            case Fn::Exp:
            case Fn::Cos:
                return make_num(1);
            case Fn::Sin:
            case Fn::Tan:
                return make_num(0);
            case Fn::Ln:
                throw MathError("ln(0)");
            default:
                break;
            }
        }
        if (r.is_one() && fn == Fn::Ln)
            return make_num(0);
    }
    Node n;
    n.kind = Kind::Call;
    n.fn = fn;
    n.kids = {std::move(arg)};
    return mk(std::move(n));
}

Expr make_uninterp(std::string name, int order, Expr arg)
{
    if (arg->kind != Kind::Sym || arg->sym.kind != SymKind::Independent)
        throw MathError("uninterpreted function " + name +
                        " takes the independent variable as its only argument");
    Node n;
    n.kind = Kind::Call;
    n.fn = Fn::Uninterp;
    n.fname = std::move(name);
    n.forder = order;
    n.kids = {std::move(arg)};
    return mk(std::move(n));
}

void collect_symbols(const Expr &e, std::set<Symbol, SymLess> &out)
{
    if (e->kind == Kind::Sym) {
        out.insert(e->sym);
        return;
    }
    for (const Expr &k : e->kids)
        collect_symbols(k, out);
}

std::set<Symbol, SymLess> free_symbols(const Expr &e)
{
    std::set<Symbol, SymLess> out;
    collect_symbols(e, out);
    return out;
}

bool contains_symbol(const Expr &e, const Symbol &s)
{
    if (e->kind == Kind::Sym)
        return e->sym == s;
    for (const Expr &k : e->kids)
        if (contains_symbol(k, s))
            return true;
    return false;
}

int max_order(const Expr &e, SymKind kind, const std::string &base)
{
    int m = -1;
    std::set<Symbol, SymLess> syms;
    collect_symbols(e, syms);
    for (const Symbol &s : syms)
        if (s.kind == kind && s.base == base)
            m = std::max(m, s.order);
    return m;
}

std::set<std::string> uninterp_names(const Expr &e)
{
    std::set<std::string> out;
    if (e->kind == Kind::Call && e->fn == Fn::Uninterp)
        out.insert(e->fname);
    for (const Expr &k : e->kids) {
        auto sub = uninterp_names(k);
        out.insert(sub.begin(), sub.end());
    }
    return out;
}

Expr diff(const Expr &e, const Symbol &s)
{
    switch (e->kind) {
    case Kind::Num:
        return make_num(0);
    case Kind::Sym:
        return make_num(e->sym == s ? 1 : 0);
    case Kind::Add: {
        std::vector<Expr> kids;
        kids.reserve(e->kids.size());
        for (const Expr &k : e->kids)
            kids.push_back(diff(k, s));
        return make_add(std::move(kids));
    }
    case Kind::Mul: {
        std::vector<Expr> terms;
        for (size_t i = 0; i < e->kids.size(); ++i) {
            Expr d = diff(e->kids[i], s);
            if (is_zero(d))
                continue;
            std::vector<Expr> fac = e->kids;
            fac[i] = d;
            terms.push_back(make_mul(std::move(fac)));
        }
        return make_add(std::move(terms));
    }
    case Kind::Pow: {
        const Expr &b = e->kids[0];
        const Expr &x = e->kids[1];
        Expr db = diff(b, s);
        Expr dx = diff(x, s);
        std::vector<Expr> parts;
        if (!is_zero(dx))
            parts.push_back(make_mul({e, make_call(Fn::Ln, b), dx}));
        if (!is_zero(db))
            parts.push_back(make_mul({x, make_pow(b, x - make_num(1)), db}));
        return make_add(std::move(parts));
    }
    case Kind::Call: {
        const Expr &u = e->kids[0];
        if (e->fn == Fn::Uninterp) {
            if (u->sym == s)
                return make_uninterp(e->fname, e->forder + 1, u);
            return make_num(0);
        }
        Expr du = diff(u, s);
        if (is_zero(du))
            return make_num(0);
        switch (e->fn) {
        case Fn::Exp:
            return make_mul({e, du});
        case Fn::Ln:
            return du / u;
        case Fn::Sin:
            return make_mul({make_call(Fn::Cos, u), du});
        case Fn::Cos:
            return make_mul({make_num(-1), make_call(Fn::Sin, u), du});
        case Fn::Tan:
            return make_mul({make_num(1) + make_pow(make_call(Fn::Tan, u), make_num(2)), du});
        default:
            break;
        }
        break;
    }
    }
    throw MathError("diff: unreachable node kind");
}

Expr substitute(const Expr &e, const Bindings &bindings)
{
    switch (e->kind) {
    case Kind::Num:
        return e;
    case Kind::Sym: {
        auto it = bindings.find(e->sym);
        return it != bindings.end() ? it->second : e;
    }
    case Kind::Add:
    case Kind::Mul: {
        std::vector<Expr> kids;
        kids.reserve(e->kids.size());
        for (const Expr &k : e->kids)
            kids.push_back(substitute(k, bindings));
        return e->kind == Kind::Add ? make_add(std::move(kids)) : make_mul(std::move(kids));
    }
    case Kind::Pow:
        return make_pow(substitute(e->kids[0], bindings), substitute(e->kids[1], bindings));
    case Kind::Call: {
        Expr arg = substitute(e->kids[0], bindings);
        if (e->fn == Fn::Uninterp)
            return make_uninterp(e->fname, e->forder, std::move(arg));
        return make_call(e->fn, std::move(arg));
    }
    }
    throw MathError("substitute: unreachable node kind");
}

Expr simplify(const Expr &e) { return substitute(e, Bindings{}); }

std::vector<Expr> collect_poly(const Expr &e, const Symbol &s)
{
    std::vector<std::vector<Expr>> slots;
    auto add_slot = [&](size_t deg, const Expr &coeff) {
        if (slots.size() <= deg)
            slots.resize(deg + 1);
        slots[deg].push_back(coeff);
    };
    std::vector<Expr> terms;
    if (e->kind == Kind::Add)
        terms = e->kids;
    else
        terms = {e};
    Expr sexpr = make_sym(s);
    for (const Expr &t : terms) {
        std::vector<Expr> factors;
        if (t->kind == Kind::Mul)
            factors = t->kids;
        else
            factors = {t};
        long long deg = 0;
        std::vector<Expr> rest;
        for (const Expr &f : factors) {
            if (f->kind == Kind::Sym && f->sym == s) {
                deg += 1;
                continue;
            }
            if (f->kind == Kind::Pow && f->kids[0]->kind == Kind::Sym &&
                f->kids[0]->sym == s) {
                auto n = as_int(f->kids[1]);
                if (!n || *n < 0)
                    throw MathError("collect_poly: non-polynomial power of " + s.name());
                deg += *n;
                continue;
            }
            if (contains_symbol(f, s))
                throw MathError("collect_poly: " + s.name() + " appears inside a kernel");
            rest.push_back(f);
        }
        add_slot(static_cast<size_t>(deg), make_mul(std::move(rest)));
    }
    std::vector<Expr> out;
    if (slots.empty())
        slots.resize(1);
    out.reserve(slots.size());
    for (auto &sl : slots)
        out.push_back(make_add(std::move(sl)));
    return out;
}

std::pair<Expr, Expr> affine_in(const Expr &e, const Symbol &s)
{
    Expr a = diff(e, s);
    if (contains_symbol(a, s))
        throw MathError("expression is not affine in " + s.name());
    Expr b = e - a * make_sym(s);
    if (contains_symbol(b, s))
        throw MathError("expression is not affine in " + s.name());
    return {a, b};
}

Expr divide(const Expr &a, const Expr &b)
{
    if (is_zero(b))
        throw MathError("division by zero expression");
    return a / b;
}

// ---- printing -----------------------------------------------------------

namespace {

std::string factor_str(const Expr &f);

std::string pow_base_str(const Expr &b)
{
    switch (b->kind) {
    case Kind::Add:
    case Kind::Mul:
        return "(" + to_string(b) + ")";
    case Kind::Pow:
        return "(" + factor_str(b) + ")";
    case Kind::Num:
        if (b->num.sign() < 0 || !b->num.is_integer())
            return "(" + b->num.str() + ")";
        return b->num.str();
    default:
        return factor_str(b);
    }
}

std::string pow_exp_str(const Expr &x)
{
    if (x->kind == Kind::Num && x->num.is_integer() && x->num.sign() > 0)
        return x->num.str();
    return "(" + to_string(x) + ")";
}

std::string factor_str(const Expr &f)
{
    switch (f->kind) {
    case Kind::Sym:
        return f->sym.name();
    case Kind::Num:
        return f->num.str();
    case Kind::Pow:
        return pow_base_str(f->kids[0]) + "^" + pow_exp_str(f->kids[1]);
    case Kind::Call: {
        std::string head;
        switch (f->fn) {
        case Fn::Exp: head = "exp"; break;
        case Fn::Ln: head = "ln"; break;
        case Fn::Sin: head = "sin"; break;
        case Fn::Cos: head = "cos"; break;
        case Fn::Tan: head = "tan"; break;
        case Fn::Uninterp:
            head = f->fname + std::string(static_cast<size_t>(f->forder), '\'');
            break;
        }
        return head + "(" + to_string(f->kids[0]) + ")";
    }
    default:
        return "(" + to_string(f) + ")";
    }
}

// one term rendered without its sign; returns true if the term is negative
bool term_str(const Expr &t, std::string &out)
{
    auto [c, mono] = coeff_split(t);
    bool neg = c.sign() < 0;
    Rational ca = c.abs();

    std::vector<Expr> nums;
    std::vector<std::string> denparts;
    Rational cd = ca.denominator();

    // factors eligible for a/b rendering; sum bases with integer exponents
    // only qualify when they make up the whole denominator, since anything
    // multiplying a sum would distribute over it on reparse
    struct Flip {
        const Expr *factor;
        Expr base;
        Rational fe;
        bool sum_base;
    };
    std::vector<Flip> flips;
    std::vector<Expr> factors;
    if (!is_one(mono)) {
        if (mono->kind == Kind::Mul)
            factors = mono->kids;
        else
            factors = {mono};
    }
    for (const Expr &f : factors) {
        if (f->kind == Kind::Pow && f->kids[1]->kind == Kind::Num &&
            f->kids[1]->num.sign() < 0) {
            Rational fe = -f->kids[1]->num;
            bool sum_base = f->kids[0]->kind == Kind::Add;
            if (sum_base && fe.is_integer() && !fe.is_one()) {
                nums.push_back(f); // printed as (sum)^(-n)
                continue;
            }
            flips.push_back({&f, f->kids[0], fe, sum_base && fe.is_integer()});
            continue;
        }
        nums.push_back(f);
    }
    size_t den_units = flips.size() + (cd.is_one() ? 0 : 1);
    if (!cd.is_one())
        denparts.push_back(cd.str());
    for (const Flip &fl : flips) {
        if (fl.sum_base && den_units > 1) {
            nums.push_back(*fl.factor);
            continue;
        }
        std::string ds = pow_base_str(fl.base);
        if (!fl.fe.is_one())
            ds += "^" + pow_exp_str(make_num(fl.fe));
        denparts.push_back(ds);
    }

    Rational cn = ca.numerator();
    std::string numpart;
    if (!cn.is_one() || nums.empty())
        numpart = cn.str();
    for (const Expr &f : nums) {
        if (!numpart.empty())
            numpart += "*";
        numpart += factor_str(f);
    }

    if (denparts.empty()) {
        out = numpart;
        return neg;
    }
    std::string den;
    for (size_t i = 0; i < denparts.size(); ++i) {
        if (i)
            den += "*";
        den += denparts[i];
    }
    if (denparts.size() > 1)
        den = "(" + den + ")";
    out = numpart + "/" + den;
    return neg;
}

} // namespace

std::string to_string(const Expr &e)
{
    if (e->kind != Kind::Add) {
        std::string body;
        bool neg = term_str(e, body);
        return neg ? "-" + body : body;
    }
    std::string out;
    for (size_t i = 0; i < e->kids.size(); ++i) {
        std::string body;
        bool neg = term_str(e->kids[i], body);
        if (i == 0)
            out = neg ? "-" + body : body;
        else
            out += (neg ? " - " : " + ") + body;
    }
    return out;
}

} // namespace ljet
