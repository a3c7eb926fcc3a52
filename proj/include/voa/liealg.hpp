#pragma once
// Finite-dimensional Lie superalgebra structure data and the algebra
// builders that consume it: affine currents, the supersymmetric current
// algebra on reversed-parity generators, the constraint-solved N=1 vector,
// and sl2-triple gradings.

#include "voa/algebra.hpp"

#include <map>
#include <string>
#include <vector>

namespace voa {

// Exact structure data for a small Lie superalgebra: named basis with
// parities, structure constants, an invariant bilinear form, and an
// optional distinguished sl2-triple (e, h, f).
class LieSuperData {
public:
    std::string name;
    std::vector<std::string> basis;
    std::vector<bool> parity; // true = odd

    // br[i][j][m] = coefficient of basis[m] in [basis[i], basis[j]].
    std::vector<std::vector<std::vector<Scalar>>> br;

    // Invariant super-symmetric bilinear form <basis[i], basis[j]>, in the
    // normalization the builders scale by the level.
    std::vector<std::vector<Scalar>> form0;

    int e = -1, h = -1, f = -1; // distinguished sl2-triple indices, -1 = none
    Scalar dual_coxeter;
    bool has_dual_coxeter = false;

    int dim() const { return int(basis.size()); }
    int find(const std::string& n) const;

    // [basis[i], basis[j]] as a coefficient vector over the basis.
    const std::vector<Scalar>& bracket(int i, int j) const;

    // Exact checks: parity closure, super-antisymmetry, super-Jacobi over
    // all basis triples, form super-symmetry/invariance/non-degeneracy, and
    // the sl2-triple relations when a triple is declared. Fails loudly.
    void validate() const;
};

// Plain-text structure data, one s-expression:
//
//   (liealg NAME
//     (basis (NAME even|odd) ...)
//     (bracket A B [COEFF NAME]...)   ; [A,B] = sum COEFF * NAME
//     (form A B COEFF)                ; <A,B> = COEFF
//     (triple E H F)                  ; optional sl2-triple
//     (dual-coxeter COEFF))           ; optional
//
// Clauses may appear in any order. Omitted brackets and form entries are
// zero. A bracket or form entry may be given in either (or both) orders;
// the missing direction is filled by super-(anti)symmetry and a doubly
// given one is cross-checked. Coefficients use the scalar grammar of
// parse_scalar. The result is validated before being returned.
LieSuperData lie_from_text(const std::string& text);
LieSuperData lie_from_file(const std::string& path);

// Bundled structure tables (built through lie_from_text).
LieSuperData lie_sl2();  // e, h, f; <h,h> = 2, <e,f> = 1
LieSuperData lie_gl11(); // N, E even; psi+, psi- odd
LieSuperData lie_sl21(); // sl2 + charge Z + two odd doublets

// Affine currents: one weight-1 generator per basis vector with
//   a(z) b(w) ~ [a,b](w)/(z-w) + k<a,b>/(z-w)^2.
AlgebraDef affine(const LieSuperData& g, const Scalar& k);

// Supersymmetric current algebra at level k: for every basis vector a, a
// generator "abar" of reversed parity and weight 1/2 paired as
//   abar(z) bbar(w) ~ (-1)^|a| (k + hv) <a,b>_0 / (z-w),
// and its superpartner "a" (the weight-1 current) with
//   a(z) bbar(w) ~ (-1)^|a| [a,b]bar(w)/(z-w),
//   a(z) b(w) ~ [a,b](w)/(z-w) + (k + hv) <a,b>_0 / (z-w)^2,
// where |a| is the parity of the basis vector (the signs are invisible on a
// plain Lie algebra; in the odd sector they are forced jointly by requiring
// susy_D to be an odd derivation of every product and by the Borcherds
// identity across the table). The supersymmetry also forces one common
// scale on both pairing poles; the dual-Coxeter shift makes k the level of
// the affine currents that decouple from the fermion bilinears, so k = -hv
// is the critical level where the pairing collapses (the supersymmetric
// structure still exists there, with all pairing poles zero). Requires a
// declared dual-coxeter entry. Generator order: [abar..., a...]; susy_D
// follows the links both ways.
AlgebraDef vg_super(const LieSuperData& g, const Scalar& k);

// The N=1 vector of vg_super(g, k). The solver spans the odd weight-3/2
// sector (current x fermion bilinears, fermion cubics, fermion derivatives)
// and imposes the linear conditions that pin the superconformal vector:
// every fermion abar must be a weight-1/2 primary whose zero-mode image is
// its superpartner,
//   G_(0) abar = a,   G_(n >= 1) abar = 0,
// then re-verifies the full closure (G_(0)G = 2L with L := 1/2 susy_D G,
// G_(1)G = 0, G_(2)G scalar, L is Virasoro, G is primary of weight 3/2).
// Fails at the critical level k = -hv or when the conditions have no
// solution over the scalar field. For a simple even algebra the central
// charge of L comes out as k dim(g)/(k + hv) + dim(g)/2.
State kac_todorov(const LieSuperData& g, const Scalar& k);

// Eigenspace decomposition of ad(h)/2 for the declared sl2-triple.
struct Grading {
    std::map<Rational, std::vector<int>> blocks; // eigenvalue -> basis indices
    std::vector<int> n_plus;  // indices with eigenvalue > 0
    std::vector<int> n_minus; // indices with eigenvalue < 0
    std::vector<int> g_half;  // indices with eigenvalue exactly 1/2
};

// f_index < 0 means the zero nilpotent: everything sits in the 0-block.
// Otherwise f_index must name the declared f; the stored h must grade every
// basis vector with f in the (-1)-block.
Grading sl2_grading(const LieSuperData& g, int f_index);

} // namespace voa
