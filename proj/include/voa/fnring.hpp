#pragma once
// Free commutative differential ring of formal function symbols: metric
// g[i,j], inverse metric gi[i,j], Christoffel Gamma[k;i,j], antisymmetric
// form coefficients, coordinates x^i and generic functions f(x). Elements
// carry exact Scalar coefficients; partial derivatives are free except on
// coordinates. Rewrite rule sets trade metric derivatives for Christoffel
// terms and collapse complete inverse-metric contractions.

#include <cstdint>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "voa/scalar.hpp"

namespace voa {

enum class FnKind : std::uint8_t { Coord, Metric, InvMetric, Christoffel, Form, Generic };

/** Interned function-symbol instances; indices are 1-based and normalized
 *  (metric/inverse sorted, Christoffel lower pair sorted, form indices sorted
 *  with sign returned separately). */
class FnSyms {
public:
    static int coord(int i);
    static int metric(int i, int j);
    static int inv_metric(int i, int j);
    static int christoffel(int k, int i, int j); // upper k, lower {i,j}
    // Antisymmetric: returns (id, sign); sign 0 means a repeated index.
    static std::pair<int, int> form(const std::string& name, std::vector<int> idx);
    static int generic(const std::string& name);

    static FnKind kind(int id);
    static const std::vector<int>& idx(int id);
    static const std::string& base_name(int id);
    static std::string str(int id);
};

/** A function symbol with applied partial derivatives (sorted multi-index). */
struct DSym {
    int sym = 0;
    std::vector<int> dx; // sorted ascending; empty = underived

    friend bool operator==(const DSym&, const DSym&) = default;
    friend bool operator<(const DSym& a, const DSym& b) {
        if (a.sym != b.sym) return a.sym < b.sym;
        return a.dx < b.dx;
    }
    std::string str() const;
};

/** Product term: Scalar coefficient times a sorted multiset of DSyms. */
struct FnTerm {
    Scalar c = Scalar(1);
    std::vector<DSym> s; // sorted, repeats allowed (powers)

    bool is_scalar() const { return s.empty(); }
    friend bool operator==(const FnTerm&, const FnTerm&) = default;
    std::string str() const;
};

/** Sum of FnTerms, canonically sorted by symbol multiset, zero terms dropped. */
class FnElement {
public:
    std::vector<FnTerm> t;

    FnElement() = default;
    static FnElement zero() { return {}; }
    static FnElement one() { return scalar(Scalar(1)); }
    static FnElement scalar(const Scalar& c);
    static FnElement sym(int id);
    static FnElement term(FnTerm tm);

    bool is_zero() const { return t.empty(); }
    bool is_scalar() const { return t.empty() || (t.size() == 1 && t[0].is_scalar()); }
    Scalar scalar_value() const; // pre: is_scalar()

    FnElement operator-() const;
    FnElement operator+(const FnElement&) const;
    FnElement operator-(const FnElement&) const;
    FnElement operator*(const FnElement&) const;
    FnElement operator*(const Scalar&) const;
    friend bool operator==(const FnElement&, const FnElement&) = default;

    std::string str() const;
};

FnTerm fnterm_mul(const FnTerm& a, const FnTerm& b);

/** Leibniz derivation d/dx^i; free on all symbols except coordinates. */
FnElement partial(const FnElement& f, int i);
FnElement partial(const FnTerm& tm, int i);

enum class RuleSet { NablaG, InvContraction, Curved };

/** Rewrite to the rule set's fixed point; dim bounds the summation range of
 *  the introduced/contracted indices. Unmatched terms pass through. */
FnElement reduce(const FnElement& f, RuleSet rules, int dim);

} // namespace voa
