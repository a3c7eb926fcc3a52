#pragma once
// Generator declarations and computable algebra definitions: a generator
// list plus a pairwise singular-OPE table among generators. The table is
// the complete rule base from which the engine derives every product.

#include "voa/state.hpp"

#include <map>
#include <memory>
#include <optional>
#include <set>
#include <string>

namespace voa {

struct GenDecl {
    std::string name;
    bool odd = false;

    // Superpartner link: susy_D(gen) = d_coeff * (translate^d_shift of gens[d_gen]).
    // A negative d_gen means no declared superpartner.
    int d_gen = -1;
    int d_shift = 0;
    Scalar d_coeff = Scalar(1);

    // Function pairing: if fn_del >= 0 the generator g acts on function
    // coefficients f(x^1..x^n) by g_(0) f = partial(f, fn_del), all higher
    // singular products vanishing. (The beta_i of a chart algebra.)
    int fn_del = -1;

    // Coordinate identification: if coord >= 0 the underived generator IS
    // the coordinate function x^coord (the gamma^i of a chart algebra); the
    // engine absorbs underived occurrences into the function coefficient.
    int coord = -1;

    std::optional<Scalar> weight; // conformal-weight annotation (informative)
};

// Memoized singular families, shared by all states over one algebra.
struct Memo;

class AlgebraDef {
public:
    std::vector<GenDecl> gens;
    int dim = 0; // coordinate dimension for chart algebras (0 = none)

    // table[{i,j}] = the full singular family of gens[i](z) gens[j](w):
    // a finite map n -> (gens[i])_(n) gens[j], n >= 0. Entries must be
    // "linear": every monomial has an empty function part and word length
    // at most one. Pairs absent from the map have vanishing singular OPE.
    std::map<std::pair<int, int>, std::map<int, State>> table;

    // Pairs whose singular family exists but is not expressible as linear
    // table entries. Any product that would consult such a pair fails loudly
    // instead of treating the family as zero. Symmetric after finish().
    std::set<std::pair<int, int>> poison;

    int id = 0; // unique instance id (mixed-algebra detection, memo keys)
    std::shared_ptr<Memo> memo;

    AlgebraDef();

    int find(const std::string& name) const; // -1 when absent
    const GenDecl& g(int i) const { return gens.at(size_t(i)); }
    bool mono_odd(const Mono& m) const;

    const std::map<int, State>* pair(int i, int j) const {
        auto it = table.find({i, j});
        return it == table.end() ? nullptr : &it->second;
    }

    // Declare one direction of a pair OPE; n-th singular product.
    void set(int i, int j, int n, State s);

    // Fill every missing (j,i) from a declared (i,j) via skew-symmetry,
    // then validate linearity and skew-consistency of the whole table.
    void finish();
};

// Free fermions: dim odd generators v_i with v_i(z) v_j(w) ~ pairing[i][j]/(z-w).
// The pairing must be symmetric.
AlgebraDef free_fermions(int dim, const std::vector<std::vector<Scalar>>& pairing,
                         const std::string& prefix = "psi");

// Symplectic bosons: dim even generators with a single-pole antisymmetric pairing.
AlgebraDef symplectic_bosons(int dim, const std::vector<std::vector<Scalar>>& form,
                             const std::string& prefix = "a");

// Tensor product: disjoint union of generators, no cross pairs. Generator
// indices of the right factor are shifted by the size of the left factor.
AlgebraDef tensor(const AlgebraDef& a, const AlgebraDef& b);

} // namespace voa
