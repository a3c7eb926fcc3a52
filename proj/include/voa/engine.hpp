#pragma once
// The calculus core: n-th products for all integer n, singular OPE families,
// normally ordered products with quasi-associativity, translation, the odd
// SUSY derivation, canonicalization, and derived structure checks.

#include "voa/algebra.hpp"

namespace voa {

// Polar part of a(z)b(w): j -> a_(j) b for j >= 0, finitely many nonzero.
struct SingularOPE {
    std::map<int, State> p;

    bool empty() const { return p.empty(); }
    const State* at(int j) const {
        auto it = p.find(j);
        return it == p.end() ? nullptr : &it->second;
    }
    State get(int j) const {
        auto it = p.find(j);
        return it == p.end() ? State{} : it->second;
    }
    friend bool operator==(const SingularOPE&, const SingularOPE&) = default;
};

// ---- global worker control (OpenMP kernels) -------------------------------
// jobs == 1 runs everything serially; jobs > 1 enables the parallel kernels.
void set_jobs(int jobs);
int jobs();

// ---- core products --------------------------------------------------------

// a_(n) b for any integer n. n = -1 is the normally ordered product; n <= -2
// is computed as (translate^{-1-n} a / (-1-n)!)_(-1) b.
State nth_product(const State& a, const State& b, int n, const AlgebraDef& A);

// All singular products at once: {j >= 0 : a_(j) b != 0}.
SingularOPE singular_ope(const State& a, const State& b, const AlgebraDef& A);

// The (-1)-product a.b (right-nested against b's canonical monomials).
State norm_product(const State& a, const State& b, const AlgebraDef& A);

// Serial reference implementations of the bilinear kernels (identical
// results; used by tests and the benchmark).
State nth_product_serial(const State& a, const State& b, int n, const AlgebraDef& A);

// ---- derivations ----------------------------------------------------------

// The translation operator: even derivation with translate(vacuum) = 0;
// raises entry derivative orders and differentiates function coefficients
// through the chain rule (prefixing translated-coordinate entries).
State translate(const State& a, const AlgebraDef& A);

// translate^k(a) / k!
State translate_div(const State& a, int k, const AlgebraDef& A);

// The odd SUSY derivation: follows declared superpartner links with Koszul
// signs; susy_D о susy_D = translate. Fails on a generator without a link.
State susy_D(const State& a, const AlgebraDef& A);

// ---- canonical form -------------------------------------------------------

// Rewrite an arbitrarily-built state (unsorted words, underived coordinate
// generators, repeated odd entries) into the canonical normal form. The
// engine's own outputs are already canonical; this is the entry point for
// parsed or hand-built states. Idempotent; value-preserving.
State canonicalize(const State& a, const AlgebraDef& A);

// ---- derived checks -------------------------------------------------------

struct CommuteReport {
    bool ok = false;
    SingularOPE ab, ba; // witnesses (empty when ok)
};
CommuteReport commute_check(const State& a, const State& b, const AlgebraDef& A);

// True iff singular_ope(L,L) = {0: translate L, 1: 2L, 3: (c/2) vacuum} for
// some scalar c, with no other poles, and L != 0.
bool is_virasoro(const State& L, const AlgebraDef& A);

// 2 * (fourth-order pole coefficient); fails when !is_virasoro(L).
Scalar central_charge(const State& L, const AlgebraDef& A);

// singular_ope(L,a) = {0: translate a, 1: delta * a} exactly.
bool is_primary(const State& a, const State& L, const Scalar& delta, const AlgebraDef& A);

// is_primary and additionally singular_ope(G,a) = {0: susy_D a}.
bool is_primary_n1(const State& a, const State& L, const State& G, const Scalar& delta,
                   const AlgebraDef& A);

// ---- rendering ------------------------------------------------------------

// Plain-text s-expression rendering of a state; round-trips through
// parse_state (state_io).
std::string render(const State& a, const AlgebraDef& A);
std::string render(const SingularOPE& o, const AlgebraDef& A);

} // namespace voa
