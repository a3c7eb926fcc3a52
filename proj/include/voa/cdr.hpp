#pragma once
// Chart-level constructions: the n-dimensional bc–βγ system with function
// coefficients, its standard sections, coordinate changes, metric frames,
// Bessel-corrected form currents, and prebuilt holonomy scenarios.

#include "voa/engine.hpp"
#include "voa/fnring.hpp"

#include <map>

namespace voa {

// Which coefficient functions a chart admits: polynomials in the coordinates
// (exact coordinate changes) or free formal symbols g[i,j], Gamma[k;i,j], ...
enum class CoeffMode { Polynomial, Formal };

struct ChartAlgebra {
    int n = 0;
    CoeffMode mode = CoeffMode::Polynomial;
    AlgebraDef A;

    // 0-based generator indices of the four families (i is 1-based).
    int b(int i) const { return i - 1; }
    int c(int i) const { return n + i - 1; }
    int beta(int i) const { return 2 * n + i - 1; }
    int gamma(int i) const { return 3 * n + i - 1; }
};

// Generators b_1..b_n, c^1..c^n, beta_1..beta_n, gamma^1..gamma^n with
// b_i(z)c^j(w) ~ delta/(z-w), beta_i(z)gamma^j(w) ~ delta/(z-w), superpartner
// links D(gamma)=c, D(c)=d(gamma), D(b)=beta, D(beta)=d(b), and function
// coefficients in the gamma's.
ChartAlgebra bcbg(int n, CoeffMode mode = CoeffMode::Polynomial);

struct StdSections {
    State G, J, Q, H, L, T;
};

// Q = sum beta_i c^i, H = sum b_i d(gamma^i), G = Q + H, J = sum c^i b_i,
// L = (1/2) D(G), T = L + (1/2) d(J).
StdSections std_sections(const ChartAlgebra& ca);

// (r+s)! / ((r-s)! s! 2^s); zero outside 0 <= s <= r.
Scalar bessel_T(int r, int s);

// A metric, either as an exact constant matrix (with exact inverse) or as
// formal symbols with the module's rewrite rules.
struct MetricData {
    bool formal = false;
    int n = 0;
    std::vector<std::vector<Scalar>> g, ginv; // constant mode only

    static MetricData flat(int n);
    static MetricData constant(std::vector<std::vector<Scalar>> g); // inverts exactly
    static MetricData formal_mode(int n);

    // Entries as coefficient functions (constant scalars or formal symbols).
    FnElement g_at(int i, int j) const;
    FnElement ginv_at(int i, int j) const;
};

// A degree-k form with totally antisymmetric coefficients.
struct FormData {
    int n = 0, k = 0;
    std::map<std::vector<int>, FnElement> comp; // strictly increasing index tuples

    static FormData make(int n, int k);
    void set(std::vector<int> idx, FnElement v); // antisymmetrizes; repeated index = 0
    void set(std::vector<int> idx, Scalar v);
    FnElement get(std::vector<int> idx) const; // signed lookup
};

} // namespace voa
