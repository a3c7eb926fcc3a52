#include "voa/scalar.hpp"

#include <algorithm>
#include <cstdint>
#include <map>
#include <mutex>

namespace voa {

// ---------------------------------------------------------------- variables

namespace {

struct VarInfo {
    std::string name;
    bool is_root = false;
    long long square = 0;
};

struct VarRegistry {
    std::vector<VarInfo> infos;
    std::map<std::string, int> by_name;
    std::mutex mu;

    VarRegistry() {
        infos.push_back({"sqrt2", true, 2});
        by_name["sqrt2"] = 0;
        infos.push_back({"i", true, -1});
        by_name["i"] = 1;
    }
};

VarRegistry& registry() {
    static VarRegistry r;
    return r;
}

} // namespace

int Vars::param(const std::string& name) {
    auto& r = registry();
    std::lock_guard<std::mutex> lock(r.mu);
    auto it = r.by_name.find(name);
    if (it != r.by_name.end()) {
        if (r.infos[it->second].is_root) fail("bad-parameter", "name reserved for a root: " + name);
        return it->second;
    }
    int id = int(r.infos.size());
    r.infos.push_back({name, false, 0});
    r.by_name[name] = id;
    return id;
}

int Vars::find(const std::string& name) {
    auto& r = registry();
    std::lock_guard<std::mutex> lock(r.mu);
    auto it = r.by_name.find(name);
    return it == r.by_name.end() ? -1 : it->second;
}

const std::string& Vars::name(int id) { return registry().infos.at(id).name; }
bool Vars::is_root(int id) { return registry().infos.at(id).is_root; }
long long Vars::root_square(int id) { return registry().infos.at(id).square; }
int Vars::sqrt2_id() { return 0; }
int Vars::imag_id() { return 1; }

// -------------------------------------------------------------- monomials

int PMono::exp_of(int var) const {
    for (auto& [v, e] : v)
        if (v == var) return e;
    return 0;
}

namespace {

PMono mono_mul(const PMono& a, const PMono& b) {
    PMono r;
    r.v.reserve(a.v.size() + b.v.size());
    size_t i = 0, j = 0;
    while (i < a.v.size() || j < b.v.size()) {
        if (j == b.v.size() || (i < a.v.size() && a.v[i].first < b.v[j].first)) {
            r.v.push_back(a.v[i++]);
        } else if (i == a.v.size() || b.v[j].first < a.v[i].first) {
            r.v.push_back(b.v[j++]);
        } else {
            r.v.push_back({a.v[i].first, a.v[i].second + b.v[j].second});
            ++i; ++j;
        }
    }
    return r;
}

PMono mono_without(const PMono& m, int var) {
    PMono r;
    for (auto& p : m.v)
        if (p.first != var) r.v.push_back(p);
    return r;
}

Poly poly_from_map(std::map<PMono, BigInt>&& acc) {
    Poly r;
    for (auto& [m, c] : acc)
        if (c != 0) r.t.push_back({m, std::move(c)});
    return r;
}

BigInt int_pow(BigInt base, long long e) {
    BigInt r = 1;
    while (e-- > 0) r *= base;
    return r;
}

} // namespace

// ------------------------------------------------------------- polynomials

Poly::Poly(BigInt c) {
    if (c != 0) t.push_back({PMono{}, std::move(c)});
}

BigInt Poly::constant_value() const {
    if (t.empty()) return 0;
    if (!is_constant()) fail("internal", "constant_value of non-constant polynomial");
    return t[0].second;
}

Poly operator+(const Poly& a, const Poly& b) {
    Poly r;
    r.t.reserve(a.t.size() + b.t.size());
    size_t i = 0, j = 0;
    while (i < a.t.size() || j < b.t.size()) {
        if (j == b.t.size() || (i < a.t.size() && a.t[i].first < b.t[j].first)) {
            r.t.push_back(a.t[i++]);
        } else if (i == a.t.size() || b.t[j].first < a.t[i].first) {
            r.t.push_back(b.t[j++]);
        } else {
            BigInt c = a.t[i].second + b.t[j].second;
            if (c != 0) r.t.push_back({a.t[i].first, std::move(c)});
            ++i; ++j;
        }
    }
    return r;
}

Poly Poly::operator-() const {
    Poly r(*this);
    for (auto& [m, c] : r.t) c = -c;
    return r;
}

Poly operator-(const Poly& a, const Poly& b) { return a + (-b); }

Poly operator*(const Poly& a, const Poly& b) {
    if (a.is_zero() || b.is_zero()) return Poly();
    std::map<PMono, BigInt> acc;
    for (auto& [ma, ca] : a.t)
        for (auto& [mb, cb] : b.t)
            acc[mono_mul(ma, mb)] += ca * cb;
    return poly_from_map(std::move(acc));
}

int Poly::degree_in(int var) const {
    int d = 0;
    for (auto& [m, c] : t) d = std::max(d, m.exp_of(var));
    return d;
}

Poly Poly::coeff_of(int var, int k) const {
    Poly r;
    for (auto& [m, c] : t)
        if (m.exp_of(var) == k) r.t.push_back({mono_without(m, var), c});
    std::sort(r.t.begin(), r.t.end(),
              [](auto& x, auto& y) { return x.first < y.first; });
    return r;
}

int Poly::min_var() const {
    int mv = -1;
    for (auto& [m, c] : t)
        for (auto& [v, e] : m.v)
            if (mv == -1 || v < mv) mv = v;
    return mv;
}

void Poly::vars_into(std::set<int>& out) const {
    for (auto& [m, c] : t)
        for (auto& [v, e] : m.v) out.insert(v);
}

bool Poly::contains_var(int var) const {
    for (auto& [m, c] : t)
        if (m.exp_of(var) > 0) return true;
    return false;
}

Poly poly_reduce_roots(const Poly& p) {
    bool touched = false;
    for (auto& [m, c] : p.t)
        for (auto& [v, e] : m.v)
            if (Vars::is_root(v) && e >= 2) { touched = true; break; }
    if (!touched) return p;
    std::map<PMono, BigInt> acc;
    for (auto& [m, c] : p.t) {
        PMono nm;
        BigInt nc = c;
        for (auto& [v, e] : m.v) {
            if (Vars::is_root(v) && e >= 2) {
                nc *= int_pow(BigInt(Vars::root_square(v)), e / 2);
                if (e % 2) nm.v.push_back({v, 1});
            } else {
                nm.v.push_back({v, e});
            }
        }
        acc[nm] += nc;
    }
    return poly_from_map(std::move(acc));
}

namespace {

BigInt int_content(const Poly& p) {
    BigInt g = 0;
    for (auto& [m, c] : p.t) {
        g = boost::multiprecision::gcd(g, c < 0 ? BigInt(-c) : c);
        if (g == 1) break;
    }
    return g;
}

Poly div_int(const Poly& p, const BigInt& c) {
    Poly r(p);
    for (auto& [m, co] : r.t) {
        if (co % c != 0) fail("internal", "div_int: not exact");
        co /= c;
    }
    return r;
}

Poly sign_normalize(Poly p) {
    if (!p.t.empty() && p.t[0].second < 0)
        for (auto& [m, c] : p.t) c = -c;
    return p;
}

Poly var_pow(int var, int e) {
    Poly r;
    if (e == 0) return Poly(BigInt(1));
    PMono m;
    m.v.push_back({var, e});
    r.t.push_back({m, BigInt(1)});
    return r;
}

/** Content w.r.t. x: gcd of the coefficient polynomials (includes integer content). */
Poly content_in(const Poly& p, int x) {
    Poly g;
    for (int k = 0; k <= p.degree_in(x); ++k) {
        Poly c = p.coeff_of(x, k);
        if (!c.is_zero()) g = poly_gcd(g, c);
    }
    return g;
}

/** One pseudo-remainder step sequence: returns a pseudo-remainder of A by B in x. */
Poly prem(Poly R, const Poly& B, int x) {
    int db = B.degree_in(x);
    Poly lb = B.coeff_of(x, db);
    while (!R.is_zero()) {
        int dr = R.degree_in(x);
        if (dr < db) break;
        Poly lr = R.coeff_of(x, dr);
        R = lb * R - lr * var_pow(x, dr - db) * B;
    }
    return R;
}

} // namespace

Poly poly_divexact(const Poly& a, const Poly& b) {
    if (b.is_zero()) fail("division-by-zero", "polynomial division by zero");
    if (a.is_zero()) return Poly();
    if (b.is_constant()) return div_int(a, b.constant_value());
    int x = b.min_var();
    int db = b.degree_in(x);
    Poly lb = b.coeff_of(x, db);
    Poly Q, R = a;
    while (!R.is_zero()) {
        int dr = R.degree_in(x);
        if (dr < db) break;
        Poly lr = R.coeff_of(x, dr);
        Poly qc = poly_divexact(lr, lb);
        Poly qterm = qc * var_pow(x, dr - db);
        Q = Q + qterm;
        R = R - qterm * b;
        if (!R.is_zero() && R.degree_in(x) >= dr)
            fail("internal", "divexact: no progress");
    }
    if (!R.is_zero()) fail("internal", "divexact: not exact");
    return Q;
}

Poly poly_gcd(const Poly& a, const Poly& b) {
    if (a.is_zero()) return sign_normalize(b);
    if (b.is_zero()) return sign_normalize(a);
    BigInt ia = int_content(a), ib = int_content(b);
    BigInt ig = boost::multiprecision::gcd(ia, ib);
    Poly pa = div_int(a, ia), pb = div_int(b, ib);
    if (pa.is_constant() || pb.is_constant()) return Poly(ig);
    int xa = pa.min_var(), xb = pb.min_var();
    int x = std::min(xa, xb);
    if (!pa.contains_var(x)) return sign_normalize(Poly(ig) * poly_gcd(pa, content_in(pb, x)));
    if (!pb.contains_var(x)) return sign_normalize(Poly(ig) * poly_gcd(pb, content_in(pa, x)));
    Poly ca = content_in(pa, x), cb = content_in(pb, x);
    Poly gc = poly_gcd(ca, cb);
    Poly A = poly_divexact(pa, ca), B = poly_divexact(pb, cb);
    if (A.degree_in(x) < B.degree_in(x)) std::swap(A, B);
    while (true) {
        Poly R = prem(A, B, x);
        if (R.is_zero()) return sign_normalize(Poly(ig) * gc * B);
        if (R.degree_in(x) == 0) return sign_normalize(Poly(ig) * gc);
        A = B;
        B = poly_divexact(R, content_in(R, x));
    }
}

std::string Poly::str() const {
    if (t.empty()) return "0";
    std::string s;
    bool first = true;
    // Display highest monomial first; storage stays ascending.
    for (auto it = t.rbegin(); it != t.rend(); ++it) {
        auto& [m, c] = *it;
        BigInt ac = c < 0 ? BigInt(-c) : c;
        if (first) {
            if (c < 0) s += "-";
            first = false;
        } else {
            s += c < 0 ? " - " : " + ";
        }
        bool coef_shown = (ac != 1) || m.empty();
        if (coef_shown) s += ac.str();
        bool need_star = coef_shown;
        for (auto& [v, e] : m.v) {
            if (need_star) s += "*";
            s += Vars::name(v);
            if (e > 1) s += "^" + std::to_string(e);
            need_star = true;
        }
    }
    return s;
}

// ------------------------------------------------------------------ scalar

Scalar::Scalar(BigInt n, BigInt d) : num_(std::move(n)), den_(std::move(d)) {
    normalize();
}

Scalar Scalar::make(Poly num, Poly den) {
    Scalar s;
    s.num_ = std::move(num);
    s.den_ = std::move(den);
    s.normalize();
    return s;
}

Scalar Scalar::param(const std::string& name) {
    return make(var_pow(Vars::param(name), 1), Poly(BigInt(1)));
}

Scalar Scalar::sqrt2() { return make(var_pow(Vars::sqrt2_id(), 1), Poly(BigInt(1))); }
Scalar Scalar::imag() { return make(var_pow(Vars::imag_id(), 1), Poly(BigInt(1))); }

Scalar Scalar::sqrt_of(long long r) {
    if (r == 2) return sqrt2();
    if (r == -2) return imag() * sqrt2();
    fail("bad-parameter", "sqrt_of supports only +-2");
}

bool Scalar::is_one() const {
    return num_.is_constant() && den_.is_constant() && !num_.is_zero() &&
           num_.constant_value() == den_.constant_value();
}

Rational Scalar::as_rational() const {
    if (!is_constant()) fail("non-constant", "scalar is not a constant rational: " + str());
    return Rational(num_.constant_value(), den_.constant_value());
}

void Scalar::normalize() {
    num_ = poly_reduce_roots(num_);
    den_ = poly_reduce_roots(den_);
    if (den_.is_zero()) fail("division-by-zero", "scalar with zero denominator");
    if (num_.is_zero()) {
        den_ = Poly(BigInt(1));
        return;
    }
    // Rationalize every root variable out of the denominator.
    for (bool again = true; again;) {
        again = false;
        den_ = poly_reduce_roots(den_);
        std::set<int> vs;
        den_.vars_into(vs);
        for (int v : vs) {
            if (!Vars::is_root(v)) continue;
            Poly A = den_.coeff_of(v, 0);
            Poly B = den_.coeff_of(v, 1);
            Poly conj = A - var_pow(v, 1) * B;
            num_ = poly_reduce_roots(num_ * conj);
            den_ = A * A - Poly(BigInt(Vars::root_square(v))) * B * B;
            again = true;
            break;
        }
    }
    if (num_.is_constant() && den_.is_constant()) {
        BigInt n = num_.constant_value(), d = den_.constant_value();
        BigInt g = boost::multiprecision::gcd(n < 0 ? BigInt(-n) : n, d < 0 ? BigInt(-d) : d);
        if (d < 0) g = -g;
        num_ = Poly(n / g);
        den_ = Poly(d / g);
        return;
    }
    Poly g = poly_gcd(num_, den_);
    num_ = poly_divexact(num_, g);
    den_ = poly_divexact(den_, g);
    if (den_.t[0].second < 0) {
        num_ = -num_;
        den_ = -den_;
    }
}

Scalar operator+(const Scalar& a, const Scalar& b) {
    if (a.is_zero()) return b;
    if (b.is_zero()) return a;
    if (a.den_ == b.den_) return Scalar::make(a.num_ + b.num_, a.den_);
    return Scalar::make(a.num_ * b.den_ + b.num_ * a.den_, a.den_ * b.den_);
}

Scalar operator-(const Scalar& a, const Scalar& b) { return a + (-b); }

Scalar Scalar::operator-() const {
    Scalar r(*this);
    r.num_ = -r.num_;
    return r;
}

Scalar operator*(const Scalar& a, const Scalar& b) {
    if (a.is_zero() || b.is_zero()) return Scalar();
    return Scalar::make(a.num_ * b.num_, a.den_ * b.den_);
}

Scalar operator/(const Scalar& a, const Scalar& b) {
    if (b.is_zero()) fail("division-by-zero", "scalar division by zero");
    if (a.is_zero()) return Scalar();
    return Scalar::make(a.num_ * b.den_, a.den_ * b.num_);
}

Scalar Scalar::inverse() const { return Scalar(1) / *this; }

Scalar Scalar::pow(int e) const {
    if (e < 0) return inverse().pow(-e);
    Scalar r(1), base(*this);
    while (e > 0) {
        if (e & 1) r = r * base;
        base = base * base;
        e >>= 1;
    }
    return r;
}

namespace {

Scalar poly_subst(const Poly& p, int var, const Scalar& value) {
    Scalar acc;
    for (auto& [m, c] : p.t) {
        int e = m.exp_of(var);
        Poly rest;
        rest.t.push_back({mono_without(m, var), c});
        Scalar term = Scalar::make(rest, Poly(BigInt(1)));
        if (e > 0) term = term * value.pow(e);
        acc += term;
    }
    return acc;
}

} // namespace

Scalar Scalar::substitute(int var, const Scalar& value) const {
    if (!contains_var(var)) return *this;
    return poly_subst(num_, var, value) / poly_subst(den_, var, value);
}

std::optional<std::pair<Scalar, Scalar>> Scalar::split_linear(int var) const {
    if (den_.contains_var(var)) return std::nullopt;
    if (num_.degree_in(var) > 1) return std::nullopt;
    Scalar a = Scalar::make(num_.coeff_of(var, 0), den_);
    Scalar b = Scalar::make(num_.coeff_of(var, 1), den_);
    return std::make_pair(a, b);
}

std::string Scalar::str() const {
    // Numerators need parentheses only when they are a sum; denominators also
    // when a single term mixes a coefficient with variables (e.g. 2*k).
    auto wrap_num = [](const Poly& p) {
        std::string s = p.str();
        return p.t.size() > 1 ? "(" + s + ")" : s;
    };
    auto wrap_den = [](const Poly& p) {
        std::string s = p.str();
        bool composite = p.t.size() > 1 ||
            (p.t.size() == 1 && !p.t[0].first.v.empty() && p.t[0].second != 1);
        return composite ? "(" + s + ")" : s;
    };
    if (den_.is_constant() && !den_.is_zero() && den_.constant_value() == 1) return num_.str();
    return wrap_num(num_) + "/" + wrap_den(den_);
}

// ---- exact square roots -----------------------------------------------------

namespace {

int pm_total_degree(const PMono& m) {
    int d = 0;
    for (const auto& [v, e] : m.v) d += e;
    return d;
}

// graded-lex monomial order (multiplicative, unlike the storage order)
bool pm_grlex_lt(const PMono& a, const PMono& b) {
    int da = pm_total_degree(a), db = pm_total_degree(b);
    if (da != db) return da < db;
    size_t ia = 0, ib = 0;
    while (ia < a.v.size() || ib < b.v.size()) {
        int va = ia < a.v.size() ? a.v[ia].first : INT32_MAX;
        int vb = ib < b.v.size() ? b.v[ib].first : INT32_MAX;
        if (va != vb) return va > vb; // the one missing the smaller var is smaller
        if (a.v[ia].second != b.v[ib].second) return a.v[ia].second < b.v[ib].second;
        ++ia;
        ++ib;
    }
    return false;
}

const std::pair<PMono, BigInt>* poly_lead(const Poly& p) {
    const std::pair<PMono, BigInt>* best = nullptr;
    for (const auto& t : p.t)
        if (!best || pm_grlex_lt(best->first, t.first)) best = &t;
    return best;
}

std::optional<PMono> pm_div(const PMono& a, const PMono& b) {
    PMono q;
    size_t ib = 0;
    for (const auto& [v, e] : a.v) {
        int sub = 0;
        if (ib < b.v.size() && b.v[ib].first == v) {
            sub = b.v[ib].second;
            ++ib;
        }
        if (e < sub) return std::nullopt;
        if (e > sub) q.v.push_back({v, e - sub});
    }
    if (ib < b.v.size()) return std::nullopt;
    return q;
}

} // namespace

std::optional<Poly> poly_sqrt(const Poly& p) {
    if (p.is_zero()) return Poly();
    const auto* lead = poly_lead(p);
    PMono lm;
    for (const auto& [v, e] : lead->first.v) {
        if (e % 2) return std::nullopt;
        lm.v.push_back({v, e / 2});
    }
    if (lead->second < 0) return std::nullopt;
    BigInt lc = sqrt(lead->second);
    if (lc * lc != lead->second) return std::nullopt;
    Poly r;
    r.t.push_back({lm, lc});
    for (int guard = 0; guard < 512; ++guard) {
        Poly d = p - r * r;
        if (d.is_zero()) return r;
        const auto* dl = poly_lead(d);
        auto qm = pm_div(dl->first, lm);
        if (!qm) return std::nullopt;
        if (!pm_grlex_lt(*qm, lm)) return std::nullopt; // not converging: not a square
        BigInt den = 2 * lc;
        if (dl->second % den != 0) return std::nullopt;
        Poly term;
        term.t.push_back({*qm, dl->second / den});
        r = r + term;
    }
    return std::nullopt;
}

std::optional<Scalar> scalar_sqrt(const Scalar& s) {
    if (s.is_zero()) return Scalar();
    struct Pre {
        long long d;
        Scalar root;
    };
    const Pre pres[] = {{1, Scalar(1)},
                        {-1, Scalar::imag()},
                        {2, Scalar::sqrt2()},
                        {-2, Scalar::imag() * Scalar::sqrt2()}};
    for (const Pre& p : pres) {
        Scalar cand = s / Scalar(p.d);
        auto ns = poly_sqrt(cand.num());
        if (!ns) continue;
        auto ds = poly_sqrt(cand.den());
        if (!ds) continue;
        return p.root * Scalar::make(*ns, *ds);
    }
    return std::nullopt;
}

} // namespace voa
