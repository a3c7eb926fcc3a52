#include "voa/engine.hpp"
#include "voa/memo.hpp"

#include <atomic>
#include <exception>

#ifdef VOA_HAVE_OPENMP
#include <omp.h>
#endif

namespace voa {

namespace {

// ---------------------------------------------------------------- utilities

std::atomic<int> g_jobs{1};
thread_local bool tl_in_worker = false;
thread_local int tl_depth = 0;

struct DepthGuard {
    DepthGuard() {
        if (++tl_depth > 3000) fail("recursion-depth", "term rewriting exceeded depth bound");
    }
    ~DepthGuard() { --tl_depth; }
};

BigInt factorial(int n) {
    BigInt r(1);
    for (int k = 2; k <= n; ++k) r *= k;
    return r;
}

// n*(n-1)*...*(n-d+1)
BigInt falling(int n, int d) {
    BigInt r(1);
    for (int k = 0; k < d; ++k) r *= (n - k);
    return r;
}

Scalar binom(int n, int k) {
    if (k < 0 || k > n) return Scalar(0);
    BigInt num(1), den(1);
    for (int t = 0; t < k; ++t) {
        num *= (n - t);
        den *= (t + 1);
    }
    return Scalar(num) * Scalar(BigInt(1), den);
}

using Family = std::map<int, State>;

void fam_acc(Family& f, int n, State s) {
    if (s.is_zero()) return;
    auto it = f.find(n);
    if (it == f.end())
        f.emplace(n, std::move(s));
    else
        it->second += s;
}

void fam_fix(Family& f) {
    for (auto it = f.begin(); it != f.end();)
        it = it->second.is_zero() ? f.erase(it) : std::next(it);
}

// A single normally ordered factor: either one generator derivative or one
// function term (symbols only; the scalar coefficient is handled outside).
struct Atom {
    bool fn = false;
    Entry e{};
    std::vector<DSym> s;

    bool odd(const AlgebraDef& A) const { return !fn && A.g(e.gen).odd; }
    State as_state() const {
        Mono m;
        m.ft.c = Scalar(1);
        if (fn)
            m.ft.s = s;
        else
            m.w.push_back(e);
        return State(std::move(m));
    }
    Mono as_mono() const {
        Mono m;
        m.ft.c = Scalar(1);
        if (fn)
            m.ft.s = s;
        else
            m.w.push_back(e);
        return m;
    }
};

bool mono_is_vacuum(const Mono& m) { return m.ft.s.empty() && m.w.empty(); }
bool mono_is_atom(const Mono& m) {
    return (!m.ft.s.empty() && m.w.empty()) || (m.ft.s.empty() && m.w.size() == 1);
}

// Leading factor and remainder of a non-vacuum monomial: the function part
// multiplies from the left, so it is the head whenever present.
std::pair<Atom, Mono> atom_head(const Mono& m) {
    Atom x;
    Mono rest;
    rest.ft.c = Scalar(1);
    if (!m.ft.s.empty()) {
        x.fn = true;
        x.s = m.ft.s;
        rest.w = m.w;
    } else {
        x.e = m.w.front();
        rest.w.assign(m.w.begin() + 1, m.w.end());
    }
    return {std::move(x), std::move(rest)};
}

void check_entry(const Entry& e, const AlgebraDef& A) {
    if (e.gen < 0 || size_t(e.gen) >= A.gens.size() || e.d < 0)
        fail("entry-range", "generator index or derivative order out of range");
}

// ------------------------------------------------------------ forward decls

Family sing_atom_atom(const Atom& x, const Atom& y, const AlgebraDef& A);
Family sing_atom_mono(const Atom& x, const Mono& b, const AlgebraDef& A);
std::shared_ptr<const Family> sing_cached(const Mono& a, const Mono& b, const AlgebraDef& A);
std::shared_ptr<const State> mul_cached(const Mono& a, const Mono& b, const AlgebraDef& A);
Family sing_state(const State& a, const State& b, const AlgebraDef& A);
State mul_state(const State& a, const State& b, const AlgebraDef& A);
State prepend_entry(const Entry& e, const Mono& m, const AlgebraDef& A);
State prepend_entry_state(const Entry& e, const State& s, const AlgebraDef& A);
State prepend_fn(const FnTerm& f, const Mono& m, const AlgebraDef& A);
State prepend_fn_state(const FnTerm& f, const State& s, const AlgebraDef& A);
State prepend_atom_state(const Atom& x, const State& s, const AlgebraDef& A);
State tr(const State& a, const AlgebraDef& A);
State tr_div(const State& a, int k, const AlgebraDef& A);

// ----------------------------------------------------------- base pair OPEs

// Number of the coordinate a generator derives functions by, or 0.
int fn_del_of(int gen, const AlgebraDef& A) { return std::max(A.g(gen).fn_del, 0); }

Family sing_entry_entry(const Entry& a, const Entry& b, const AlgebraDef& A) {
    if (A.poison.count({a.gen, b.gen}))
        fail("nonlinear-table-pair",
             A.g(a.gen).name + " " + A.g(b.gen).name +
                 ": this pair's singular products are not stored in linear form");
    const auto* base = A.pair(a.gen, b.gen);
    if (!base) return {};
    Family F = *base;
    // Right derivative rule, applied b.d times: u_(m)(Tv) = T(u_(m)v) + m u_(m-1)v.
    for (int t = 0; t < b.d; ++t) {
        Family G;
        for (const auto& [m, s] : F) {
            fam_acc(G, m, tr(s, A));
            fam_acc(G, m + 1, s * Scalar(m + 1));
        }
        fam_fix(G);
        F = std::move(G);
    }
    // Left derivative rule: (T^d u)_(n) v = (-1)^d n(n-1)...(n-d+1) u_(n-d) v.
    if (a.d > 0) {
        Family H;
        for (const auto& [m, s] : F) {
            int n = m + a.d;
            Scalar c = Scalar(falling(n, a.d));
            if (a.d % 2) c = -c;
            fam_acc(H, n, s * c);
        }
        fam_fix(H);
        F = std::move(H);
    }
    return F;
}

Family sing_atom_atom(const Atom& x, const Atom& y, const AlgebraDef& A) {
    if (x.fn && y.fn) return {};
    if (!x.fn && !y.fn) return sing_entry_entry(x.e, y.e, A);
    if (!x.fn) {
        // (T^d beta_i)_(n) f: nonzero only at n = d, value (-1)^d d! partial_i f.
        int i = fn_del_of(x.e.gen, A);
        if (i == 0) return {};
        FnTerm f;
        f.c = Scalar(1);
        f.s = y.s;
        FnElement df = partial(f, i);
        if (df.is_zero()) return {};
        Scalar c = Scalar(factorial(x.e.d));
        if (x.e.d % 2) c = -c;
        Family F;
        fam_acc(F, x.e.d, State::fn(df) * c);
        return F;
    }
    // f_(n) (T^d beta_i): from f_(0) beta_i = -partial_i f by the right rule.
    int i = fn_del_of(y.e.gen, A);
    if (i == 0) return {};
    FnTerm f;
    f.c = Scalar(1);
    f.s = x.s;
    FnElement df = partial(f, i);
    if (df.is_zero()) return {};
    Family F;
    fam_acc(F, 0, -State::fn(df));
    for (int t = 0; t < y.e.d; ++t) {
        Family G;
        for (const auto& [m, s] : F) {
            fam_acc(G, m, tr(s, A));
            fam_acc(G, m + 1, s * Scalar(m + 1));
        }
        fam_fix(G);
        F = std::move(G);
    }
    return F;
}

// --------------------------------------------- singular family of mono pairs

// x_(n)(y c) = sum_{j<=n} C(n,j) (x_(j)y)_(n-1-j) c + (-1)^{xy} y_(-1)(x_(n)c).
Family sing_atom_mono(const Atom& x, const Mono& b, const AlgebraDef& A) {
    DepthGuard dg;
    if (mono_is_vacuum(b)) return {};
    if (mono_is_atom(b)) {
        auto [y, r] = atom_head(b);
        (void)r;
        return sing_atom_atom(x, y, A);
    }
    auto [y, R] = atom_head(b);
    State Rs(R);
    Family out;
    Family Fxy = sing_atom_atom(x, y, A);
    for (const auto& [j, s] : Fxy) {
        fam_acc(out, j, mul_state(s, Rs, A));
        Family Fs = sing_state(s, Rs, A);
        for (const auto& [m, t] : Fs) fam_acc(out, j + 1 + m, t * binom(j + 1 + m, j));
    }
    bool sgn = x.odd(A) && y.odd(A);
    Family FxR = *sing_cached(x.as_mono(), R, A);
    for (const auto& [n, t] : FxR) {
        State v = prepend_atom_state(y, t, A);
        fam_acc(out, n, sgn ? -v : v);
    }
    fam_fix(out);
    return out;
}

// Both monomials have unit scalar coefficient here.
Family compute_sing(const Mono& a, const Mono& b, const AlgebraDef& A) {
    DepthGuard dg;
    if (mono_is_vacuum(a) || mono_is_vacuum(b)) return {};
    if (mono_is_atom(a)) {
        auto [x, r] = atom_head(a);
        (void)r;
        return sing_atom_mono(x, b, A);
    }
    // a = x y with x the leading factor:
    // (x_(-1)y)_(n) c = sum_{k>=0} x_(-1-k)(y_(n+k) c)
    //                 + (-1)^{xy} sum_{j>=0} y_(n-1-j)(x_(j) c).
    auto [x, y] = atom_head(a);
    State xs = x.as_state();
    State ys(y);
    Family out;
    Family Fy = *sing_cached(y, b, A);
    for (const auto& [m, t] : Fy)
        for (int k = 0; k <= m; ++k)
            fam_acc(out, m - k, mul_state(tr_div(xs, k, A), t, A));
    bool sgn = x.odd(A) && A.mono_odd(y);
    Family Fx = *sing_cached(x.as_mono(), b, A);
    for (const auto& [j, u] : Fx) {
        for (int n = 0; n <= j; ++n) {
            State v = mul_state(tr_div(ys, j - n, A), u, A);
            fam_acc(out, n, sgn ? -v : v);
        }
        Family Fyu = sing_state(ys, u, A);
        for (const auto& [m2, v] : Fyu) fam_acc(out, j + 1 + m2, sgn ? -v : v);
    }
    fam_fix(out);
    return out;
}

std::shared_ptr<const Family> sing_cached(const Mono& a, const Mono& b, const AlgebraDef& A) {
    auto key = std::make_pair(strip(a), strip(b));
    Memo& M = *A.memo;
    {
        std::lock_guard<std::mutex> lk(M.mx);
        auto it = M.sing.find(key);
        if (it != M.sing.end()) return it->second;
    }
    Mono a1{FnTerm{Scalar(1), key.first.s}, key.first.w};
    Mono b1{FnTerm{Scalar(1), key.second.s}, key.second.w};
    auto val = std::make_shared<Family>(compute_sing(a1, b1, A));
    std::lock_guard<std::mutex> lk(M.mx);
    auto [it, inserted] = M.sing.emplace(std::move(key), std::move(val));
    return it->second;
}

Family sing_state(const State& a, const State& b, const AlgebraDef& A) {
    Family out;
    for (const auto& ma : a.t)
        for (const auto& mb : b.t) {
            Scalar c = ma.ft.c * mb.ft.c;
            const Family& f = *sing_cached(ma, mb, A);
            for (const auto& [n, s] : f) fam_acc(out, n, s * c);
        }
    fam_fix(out);
    return out;
}

// ------------------------------------------------- normally ordered products

// mul(x y, c) = x(y c) + sum_{k>=1} (T^{(k)}x)(y_(k-1) c)
//             + (-1)^{xy} sum_{j>=0} (T^{(j+1)}y)(x_(j) c).
State compute_mul(const Mono& a, const Mono& b, const AlgebraDef& A) {
    DepthGuard dg;
    if (mono_is_vacuum(a)) return State(b);
    if (mono_is_vacuum(b)) return State(a);
    if (mono_is_atom(a)) {
        auto [x, r] = atom_head(a);
        (void)r;
        return prepend_atom_state(x, State(b), A);
    }
    auto [x, y] = atom_head(a);
    State xs = x.as_state();
    State ys(y);
    State out = prepend_atom_state(x, *mul_cached(y, b, A), A);
    Family Fy = *sing_cached(y, b, A);
    for (const auto& [m, t] : Fy) out += mul_state(tr_div(xs, m + 1, A), t, A);
    bool sgn = x.odd(A) && A.mono_odd(y);
    Family Fx = *sing_cached(x.as_mono(), b, A);
    for (const auto& [j, u] : Fx) {
        State v = mul_state(tr_div(ys, j + 1, A), u, A);
        out += sgn ? -v : v;
    }
    return out;
}

std::shared_ptr<const State> mul_cached(const Mono& a, const Mono& b, const AlgebraDef& A) {
    auto key = std::make_pair(strip(a), strip(b));
    Memo& M = *A.memo;
    {
        std::lock_guard<std::mutex> lk(M.mx);
        auto it = M.mul.find(key);
        if (it != M.mul.end()) return it->second;
    }
    Mono a1{FnTerm{Scalar(1), key.first.s}, key.first.w};
    Mono b1{FnTerm{Scalar(1), key.second.s}, key.second.w};
    auto val = std::make_shared<State>(compute_mul(a1, b1, A));
    std::lock_guard<std::mutex> lk(M.mx);
    auto [it, inserted] = M.mul.emplace(std::move(key), std::move(val));
    return it->second;
}

State mul_state(const State& a, const State& b, const AlgebraDef& A) {
    State out;
    for (const auto& ma : a.t)
        for (const auto& mb : b.t) out += *mul_cached(ma, mb, A) * (ma.ft.c * mb.ft.c);
    return out;
}

// --------------------------------------------------------- canonical prepend

// e_(-1) M for canonical M, producing canonical output (insertion with
// quasi-commutator corrections; table values are linear so corrections only
// carry single derived entries or vanish).
State prepend_entry(const Entry& e, const Mono& m, const AlgebraDef& A) {
    DepthGuard dg;
    check_entry(e, A);
    const GenDecl& ge = A.g(e.gen);

    // An underived coordinate generator is the coordinate function itself.
    if (ge.coord >= 1 && e.d == 0) {
        FnTerm f;
        f.c = Scalar(1);
        f.s.push_back(DSym{FnSyms::coord(ge.coord), {}});
        return prepend_fn(f, m, A);
    }

    if (!m.ft.s.empty()) {
        // e(f w) = f(e w) + d! T^{(d+1)}(partial_i f) w   [only if e pairs with f].
        Mono body;
        body.ft.c = Scalar(1);
        body.w = m.w;
        FnTerm syms;
        syms.c = Scalar(1);
        syms.s = m.ft.s;
        State res = prepend_fn_state(syms, prepend_entry(e, body, A), A);
        if (ge.fn_del >= 1) {
            FnElement df = partial(syms, ge.fn_del);
            if (!df.is_zero()) {
                State dfs = State::fn(df);
                res += mul_state(tr_div(dfs, e.d + 1, A), State(body), A) *
                       Scalar(factorial(e.d));
            }
        }
        return res * m.ft.c;
    }

    if (m.w.empty()) return State::gen(e.gen, e.d, m.ft.c);

    Entry h = m.w.front();
    Mono r;
    r.ft.c = Scalar(1);
    r.w.assign(m.w.begin() + 1, m.w.end());

    if (e == h && ge.odd) {
        // e(e r) = (1/2) sum_j (-1)^j (T^{(j+1)}(e_(j)e)) r.
        Atom ea;
        ea.e = e;
        Family F = sing_atom_atom(ea, ea, A);
        State acc;
        for (const auto& [j, s] : F) {
            State v = mul_state(tr_div(s, j + 1, A), State(r), A);
            acc += (j % 2) ? -v : v;
        }
        return acc * (m.ft.c * Scalar(BigInt(1), BigInt(2)));
    }
    if (entry_lt(e, h) || e == h) {
        Mono out = m;
        out.w.insert(out.w.begin(), e);
        return State(std::move(out));
    }
    // e(h r) = +-h(e r) + sum_j (-1)^j (T^{(j+1)}(e_(j)h)) r.
    bool sgn = ge.odd && A.g(h.gen).odd;
    State res = prepend_entry_state(h, prepend_entry(e, r, A), A);
    if (sgn) res = -res;
    Atom ea, ha;
    ea.e = e;
    ha.e = h;
    Family F = sing_atom_atom(ea, ha, A);
    for (const auto& [j, s] : F) {
        State v = mul_state(tr_div(s, j + 1, A), State(r), A);
        res += (j % 2) ? -v : v;
    }
    return res * m.ft.c;
}

State prepend_entry_state(const Entry& e, const State& s, const AlgebraDef& A) {
    State out;
    for (const auto& m : s.t) out += prepend_entry(e, m, A);
    return out;
}

// f_(-1) M for canonical M: merge function factors with the
// quasi-associativity correction (nonzero only when both factors carry
// symbols and the word can pair with them).
State prepend_fn(const FnTerm& f, const Mono& m, const AlgebraDef& A) {
    DepthGuard dg;
    Mono main;
    main.ft = fnterm_mul(f, m.ft);
    main.w = m.w;
    State res(main);
    if (f.s.empty() || m.ft.s.empty()) return res;
    bool has_del = false;
    for (const auto& e : m.w)
        if (A.g(e.gen).fn_del >= 1) {
            has_del = true;
            break;
        }
    if (!has_del) return res;

    Scalar cc = f.c * m.ft.c;
    Mono body;
    body.ft.c = Scalar(1);
    body.w = m.w;
    Atom fa, ga;
    fa.fn = true;
    fa.s = f.s;
    ga.fn = true;
    ga.s = m.ft.s;
    State fstate = fa.as_state();
    State gstate = ga.as_state();
    // (f g)w = f(g w) + sum_j [ (T^{(j+1)}f)(g_(j)w) + (T^{(j+1)}g)(f_(j)w) ];
    // solve for f(g w).
    Family Fg = sing_atom_mono(ga, body, A);
    for (const auto& [j, t] : Fg) res += -(mul_state(tr_div(fstate, j + 1, A), t, A) * cc);
    Family Ff = sing_atom_mono(fa, body, A);
    for (const auto& [j, t] : Ff) res += -(mul_state(tr_div(gstate, j + 1, A), t, A) * cc);
    return res;
}

State prepend_fn_state(const FnTerm& f, const State& s, const AlgebraDef& A) {
    State out;
    for (const auto& m : s.t) out += prepend_fn(f, m, A);
    return out;
}

State prepend_atom_state(const Atom& x, const State& s, const AlgebraDef& A) {
    if (x.fn) {
        FnTerm f;
        f.c = Scalar(1);
        f.s = x.s;
        return prepend_fn_state(f, s, A);
    }
    return prepend_entry_state(x.e, s, A);
}

// ----------------------------------------------------------------- translate

int coord_gen(const AlgebraDef& A, int i) {
    for (size_t k = 0; k < A.gens.size(); ++k)
        if (A.gens[k].coord == i) return int(k);
    return -1;
}

State tr_word(const Word& w, const AlgebraDef& A) {
    if (w.empty()) return State{};
    Entry e = w.front();
    Mono r;
    r.ft.c = Scalar(1);
    r.w.assign(w.begin() + 1, w.end());
    State out = prepend_entry(Entry{e.gen, e.d + 1}, r, A);
    out += prepend_entry_state(e, tr_word(r.w, A), A);
    return out;
}

State tr(const State& a, const AlgebraDef& A) {
    DepthGuard dg;
    State out;
    for (const auto& m : a.t) {
        for (int i = 1; i <= A.dim; ++i) {
            FnElement df = partial(m.ft, i);
            if (df.is_zero()) continue;
            int cg = coord_gen(A, i);
            if (cg < 0) fail("chart-incomplete", "no coordinate generator for x" + std::to_string(i));
            State head;
            for (const auto& term : df.t) head.t.push_back(Mono{term, {Entry{cg, 1}}});
            head.normalize();
            Mono body;
            body.ft.c = Scalar(1);
            body.w = m.w;
            out += mul_state(head, State(body), A);
        }
        out += prepend_fn_state(m.ft, tr_word(m.w, A), A);
    }
    return out;
}

State tr_div(const State& a, int k, const AlgebraDef& A) {
    if (k <= 0) return a;
    State s = a;
    for (int t = 0; t < k; ++t) s = tr(s, A);
    if (k > 1) s = s * Scalar(BigInt(1), factorial(k));
    return s;
}

// ------------------------------------------------------------ SUSY derivation

State sd_word(const Word& w, const AlgebraDef& A) {
    if (w.empty()) return State{};
    Entry e = w.front();
    const GenDecl& ge = A.g(e.gen);
    if (ge.d_gen < 0) fail("susy-d-undefined", ge.name);
    Mono r;
    r.ft.c = Scalar(1);
    r.w.assign(w.begin() + 1, w.end());
    State out = prepend_entry(Entry{ge.d_gen, e.d + ge.d_shift}, r, A) * ge.d_coeff;
    State rec = sd_word(r.w, A);
    if (!rec.is_zero()) {
        rec = prepend_entry_state(e, rec, A);
        out += ge.odd ? -rec : rec;
    }
    return out;
}

State sd(const State& a, const AlgebraDef& A) {
    DepthGuard dg;
    State out;
    for (const auto& m : a.t) {
        for (int i = 1; i <= A.dim; ++i) {
            FnElement df = partial(m.ft, i);
            if (df.is_zero()) continue;
            int cg = coord_gen(A, i);
            if (cg < 0) fail("chart-incomplete", "no coordinate generator for x" + std::to_string(i));
            const GenDecl& gc = A.g(cg);
            if (gc.d_gen < 0) fail("susy-d-undefined", gc.name);
            State head;
            for (const auto& term : df.t) {
                FnTerm ft2 = term;
                ft2.c = ft2.c * gc.d_coeff;
                head.t.push_back(Mono{ft2, {Entry{gc.d_gen, gc.d_shift}}});
            }
            head.normalize();
            Mono body;
            body.ft.c = Scalar(1);
            body.w = m.w;
            out += mul_state(head, State(body), A);
        }
        // Function factors are even: no Koszul sign at the monomial level.
        out += prepend_fn_state(m.ft, sd_word(m.w, A), A);
    }
    return out;
}

// ------------------------------------------------------------- validation

void check_canonical(const State& s, const AlgebraDef& A) {
    for (const auto& m : s.t) {
        for (size_t i = 0; i < m.w.size(); ++i) {
            check_entry(m.w[i], A);
            const GenDecl& g = A.g(m.w[i].gen);
            if (g.coord >= 1 && m.w[i].d == 0)
                fail("non-canonical-state",
                     "underived coordinate generator " + g.name + " inside a word");
            if (i + 1 < m.w.size()) {
                const Entry& a = m.w[i];
                const Entry& b = m.w[i + 1];
                if (entry_lt(b, a))
                    fail("non-canonical-state", "word entries out of canonical order");
                if (a == b && g.odd)
                    fail("non-canonical-state",
                         "repeated identical odd entry " + g.name + " in a word");
            }
        }
    }
}

// ----------------------------------------------------- parallel pair assembly

template <class R, class F>
std::vector<R> map_pairs(const State& a, const State& b, const F& work) {
    std::vector<std::pair<const Mono*, const Mono*>> pairs;
    pairs.reserve(a.t.size() * b.t.size());
    for (const auto& ma : a.t)
        for (const auto& mb : b.t) pairs.emplace_back(&ma, &mb);
    std::vector<R> out(pairs.size());
    int nj = g_jobs.load();
#ifdef VOA_HAVE_OPENMP
    if (nj > 1 && !tl_in_worker && pairs.size() >= 4) {
        std::exception_ptr err;
#pragma omp parallel for num_threads(nj) schedule(dynamic)
        for (long i = 0; i < long(pairs.size()); ++i) {
            tl_in_worker = true;
            try {
                out[size_t(i)] = work(*pairs[size_t(i)].first, *pairs[size_t(i)].second);
            } catch (...) {
#pragma omp critical
                if (!err) err = std::current_exception();
            }
            tl_in_worker = false;
        }
        if (err) std::rethrow_exception(err);
        return out;
    }
#else
    (void)nj;
#endif
    for (size_t i = 0; i < pairs.size(); ++i) out[i] = work(*pairs[i].first, *pairs[i].second);
    return out;
}

State nth_product_impl(const State& a, const State& b, int n, const AlgebraDef& A) {
    if (n <= -1) {
        State left = (n == -1) ? a : tr_div(a, -1 - n, A);
        auto parts = map_pairs<State>(left, b, [&](const Mono& ma, const Mono& mb) {
            return *mul_cached(ma, mb, A) * (ma.ft.c * mb.ft.c);
        });
        State out;
        for (auto& p : parts) out += p;
        return out;
    }
    auto parts = map_pairs<State>(a, b, [&](const Mono& ma, const Mono& mb) {
        const Family& f = *sing_cached(ma, mb, A);
        auto it = f.find(n);
        if (it == f.end()) return State{};
        return it->second * (ma.ft.c * mb.ft.c);
    });
    State out;
    for (auto& p : parts) out += p;
    return out;
}

} // namespace

// ------------------------------------------------------------------ public

void set_jobs(int j) { g_jobs = j < 1 ? 1 : j; }
int jobs() { return g_jobs.load(); }

State nth_product(const State& a, const State& b, int n, const AlgebraDef& A) {
    check_canonical(a, A);
    check_canonical(b, A);
    return nth_product_impl(a, b, n, A);
}

State nth_product_serial(const State& a, const State& b, int n, const AlgebraDef& A) {
    check_canonical(a, A);
    check_canonical(b, A);
    bool saved = tl_in_worker;
    tl_in_worker = true; // forces the serial path in map_pairs
    State out;
    try {
        out = nth_product_impl(a, b, n, A);
    } catch (...) {
        tl_in_worker = saved;
        throw;
    }
    tl_in_worker = saved;
    return out;
}

SingularOPE singular_ope(const State& a, const State& b, const AlgebraDef& A) {
    check_canonical(a, A);
    check_canonical(b, A);
    auto parts = map_pairs<Family>(a, b, [&](const Mono& ma, const Mono& mb) {
        Family f = *sing_cached(ma, mb, A);
        Scalar c = ma.ft.c * mb.ft.c;
        for (auto& [n, s] : f) s = s * c;
        return f;
    });
    SingularOPE out;
    for (auto& f : parts)
        for (auto& [n, s] : f) fam_acc(out.p, n, std::move(s));
    fam_fix(out.p);
    return out;
}

State norm_product(const State& a, const State& b, const AlgebraDef& A) {
    return nth_product(a, b, -1, A);
}

State translate(const State& a, const AlgebraDef& A) {
    check_canonical(a, A);
    return tr(a, A);
}

State translate_div(const State& a, int k, const AlgebraDef& A) {
    check_canonical(a, A);
    if (k < 0) fail("translate-div-range", "negative divided power");
    return tr_div(a, k, A);
}

State susy_D(const State& a, const AlgebraDef& A) {
    check_canonical(a, A);
    return sd(a, A);
}

State canonicalize(const State& a, const AlgebraDef& A) {
    State out;
    for (const auto& m : a.t) {
        for (const auto& e : m.w) check_entry(e, A);
        State acc = State::vacuum(Scalar(1));
        for (size_t i = m.w.size(); i-- > 0;) acc = prepend_entry_state(m.w[i], acc, A);
        acc = prepend_fn_state(m.ft, acc, A);
        out += acc;
    }
    return out;
}

CommuteReport commute_check(const State& a, const State& b, const AlgebraDef& A) {
    CommuteReport r;
    r.ab = singular_ope(a, b, A);
    r.ba = singular_ope(b, a, A);
    r.ok = r.ab.empty() && r.ba.empty();
    return r;
}

bool is_virasoro(const State& L, const AlgebraDef& A) {
    if (L.is_zero()) return false;
    SingularOPE f = singular_ope(L, L, A);
    for (const auto& [n, s] : f.p) {
        (void)s;
        if (n != 0 && n != 1 && n != 3) return false;
    }
    if (!(f.get(0) == translate(L, A))) return false;
    if (!(f.get(1) == L * Scalar(2))) return false;
    Scalar c;
    if (!f.get(3).is_scalar(&c)) return false;
    return true;
}

Scalar central_charge(const State& L, const AlgebraDef& A) {
    if (!is_virasoro(L, A)) fail("not-virasoro", "state does not satisfy the Virasoro OPE");
    Scalar c;
    SingularOPE f = singular_ope(L, L, A);
    f.get(3).is_scalar(&c);
    return c * Scalar(2);
}

bool is_primary(const State& a, const State& L, const Scalar& delta, const AlgebraDef& A) {
    SingularOPE f = singular_ope(L, a, A);
    SingularOPE want;
    State t0 = translate(a, A);
    if (!t0.is_zero()) want.p[0] = std::move(t0);
    State t1 = a * delta;
    if (!t1.is_zero()) want.p[1] = std::move(t1);
    return f == want;
}

bool is_primary_n1(const State& a, const State& L, const State& G, const Scalar& delta,
                   const AlgebraDef& A) {
    if (!is_primary(a, L, delta, A)) return false;
    SingularOPE f = singular_ope(G, a, A);
    SingularOPE want;
    State t0 = susy_D(a, A);
    if (!t0.is_zero()) want.p[0] = std::move(t0);
    return f == want;
}

} // namespace voa
