#include "voa/cdr.hpp"

namespace voa {

ChartAlgebra bcbg(int n, CoeffMode mode) {
    if (n < 1) fail("bcbg-dimension", "chart dimension must be at least 1");
    ChartAlgebra ca;
    ca.n = n;
    ca.mode = mode;
    AlgebraDef& A = ca.A;
    A.dim = n;

    auto add = [&](const std::string& base, int i, bool odd) {
        GenDecl g;
        g.name = base + std::to_string(i);
        g.odd = odd;
        A.gens.push_back(std::move(g));
        return int(A.gens.size()) - 1;
    };
    for (int i = 1; i <= n; ++i) add("b", i, true);
    for (int i = 1; i <= n; ++i) add("c", i, true);
    for (int i = 1; i <= n; ++i) add("beta", i, false);
    for (int i = 1; i <= n; ++i) add("gamma", i, false);

    for (int i = 1; i <= n; ++i) {
        GenDecl& b = A.gens[size_t(ca.b(i))];
        GenDecl& c = A.gens[size_t(ca.c(i))];
        GenDecl& be = A.gens[size_t(ca.beta(i))];
        GenDecl& ga = A.gens[size_t(ca.gamma(i))];
        b.d_gen = ca.beta(i);
        c.d_gen = ca.gamma(i);
        c.d_shift = 1;
        be.d_gen = ca.b(i);
        be.d_shift = 1;
        ga.d_gen = ca.c(i);
        be.fn_del = i;
        ga.coord = i;
        // Weights under the section T of std_sections.
        b.weight = Scalar(1);
        be.weight = Scalar(1);
        c.weight = Scalar(0);
        ga.weight = Scalar(0);
    }
    for (int i = 1; i <= n; ++i) {
        A.set(ca.b(i), ca.c(i), 0, State::vacuum());
        A.set(ca.beta(i), ca.gamma(i), 0, State::vacuum());
    }
    A.finish();
    return ca;
}

StdSections std_sections(const ChartAlgebra& ca) {
    const AlgebraDef& A = ca.A;
    StdSections s;
    for (int i = 1; i <= ca.n; ++i) {
        s.Q += norm_product(State::gen(ca.beta(i)), State::gen(ca.c(i)), A);
        s.H += norm_product(State::gen(ca.b(i)), State::gen(ca.gamma(i), 1), A);
        s.J += norm_product(State::gen(ca.c(i)), State::gen(ca.b(i)), A);
    }
    s.G = s.Q + s.H;
    Scalar half(BigInt(1), BigInt(2));
    s.L = susy_D(s.G, A) * half;
    s.T = s.L + translate(s.J, A) * half;
    return s;
}

Scalar bessel_T(int r, int s) {
    if (s < 0 || s > r) return Scalar(0);
    BigInt num(1);
    for (BigInt k = r - s + 1; k <= r + s; ++k) num *= k;
    BigInt den(1);
    for (int k = 2; k <= s; ++k) den *= k;
    for (int k = 0; k < s; ++k) den *= 2;
    return Scalar(num) * Scalar(BigInt(1), den);
}

// ------------------------------------------------------------------ metrics

MetricData MetricData::flat(int n) {
    MetricData m;
    m.n = n;
    m.g.assign(size_t(n), std::vector<Scalar>(size_t(n), Scalar(0)));
    for (int i = 0; i < n; ++i) m.g[size_t(i)][size_t(i)] = Scalar(1);
    m.ginv = m.g;
    return m;
}

MetricData MetricData::constant(std::vector<std::vector<Scalar>> g) {
    MetricData m;
    m.n = int(g.size());
    for (const auto& row : g)
        if (row.size() != g.size()) fail("metric-shape", "metric matrix must be square");
    m.g = std::move(g);
    // Exact Gauss-Jordan inverse.
    int n = m.n;
    std::vector<std::vector<Scalar>> a = m.g;
    std::vector<std::vector<Scalar>> inv(size_t(n), std::vector<Scalar>(size_t(n), Scalar(0)));
    for (int i = 0; i < n; ++i) inv[size_t(i)][size_t(i)] = Scalar(1);
    for (int col = 0; col < n; ++col) {
        int piv = -1;
        for (int r = col; r < n; ++r)
            if (!a[size_t(r)][size_t(col)].is_zero()) {
                piv = r;
                break;
            }
        if (piv < 0) fail("metric-singular", "metric matrix is not invertible");
        std::swap(a[size_t(piv)], a[size_t(col)]);
        std::swap(inv[size_t(piv)], inv[size_t(col)]);
        Scalar p = a[size_t(col)][size_t(col)].inverse();
        for (int j = 0; j < n; ++j) {
            a[size_t(col)][size_t(j)] = a[size_t(col)][size_t(j)] * p;
            inv[size_t(col)][size_t(j)] = inv[size_t(col)][size_t(j)] * p;
        }
        for (int r = 0; r < n; ++r) {
            if (r == col) continue;
            Scalar f = a[size_t(r)][size_t(col)];
            if (f.is_zero()) continue;
            for (int j = 0; j < n; ++j) {
                a[size_t(r)][size_t(j)] = a[size_t(r)][size_t(j)] - f * a[size_t(col)][size_t(j)];
                inv[size_t(r)][size_t(j)] =
                    inv[size_t(r)][size_t(j)] - f * inv[size_t(col)][size_t(j)];
            }
        }
    }
    m.ginv = std::move(inv);
    return m;
}

MetricData MetricData::formal_mode(int n) {
    MetricData m;
    m.formal = true;
    m.n = n;
    return m;
}

FnElement MetricData::g_at(int i, int j) const {
    if (formal) return FnElement::sym(FnSyms::metric(i, j));
    return FnElement::scalar(g.at(size_t(i - 1)).at(size_t(j - 1)));
}

FnElement MetricData::ginv_at(int i, int j) const {
    if (formal) return FnElement::sym(FnSyms::inv_metric(i, j));
    return FnElement::scalar(ginv.at(size_t(i - 1)).at(size_t(j - 1)));
}

// -------------------------------------------------------------------- forms

FormData FormData::make(int n, int k) {
    if (k < 0 || n < 0) fail("form-shape", "degree and dimension must be nonnegative");
    FormData f;
    f.n = n;
    f.k = k;
    return f;
}

namespace {
// Sorts idx; returns the permutation sign, or 0 on a repeated index.
int sort_sign(std::vector<int>& idx) {
    int sign = 1;
    for (size_t i = 1; i < idx.size(); ++i)
        for (size_t j = i; j > 0 && idx[j - 1] >= idx[j]; --j) {
            if (idx[j - 1] == idx[j]) return 0;
            std::swap(idx[j - 1], idx[j]);
            sign = -sign;
        }
    return sign;
}
} // namespace

void FormData::set(std::vector<int> idx, FnElement v) {
    if (int(idx.size()) != k) fail("form-shape", "index tuple does not match the form degree");
    for (int i : idx)
        if (i < 1 || i > n) fail("form-shape", "form index out of range");
    int sg = sort_sign(idx);
    if (sg == 0) return;
    if (sg < 0) v = -v;
    if (v.is_zero())
        comp.erase(idx);
    else
        comp[idx] = std::move(v);
}

void FormData::set(std::vector<int> idx, Scalar v) { set(std::move(idx), FnElement::scalar(v)); }

FnElement FormData::get(std::vector<int> idx) const {
    if (int(idx.size()) != k) fail("form-shape", "index tuple does not match the form degree");
    int sg = sort_sign(idx);
    if (sg == 0) return FnElement::zero();
    auto it = comp.find(idx);
    if (it == comp.end()) return FnElement::zero();
    return sg < 0 ? -it->second : it->second;
}

} // namespace voa
