#pragma once

#include "voa/common.hpp"

#include <map>
#include <optional>
#include <set>
#include <utility>
#include <vector>

namespace voa {

/**
 * Scalar coefficient field.
 *
 * Elements are reduced fractions of sparse multivariate polynomials with
 * arbitrary-precision integer coefficients. Variables are named parameters
 * (central charges, levels, solver unknowns). Two formal roots are
 * preregistered: sqrt2 with sqrt2^2 = 2 and i with i^2 = -1; every value is
 * kept with root exponents <= 1 and a root-free denominator, which makes the
 * representation canonical, so structural equality is field equality.
 */
class Vars {
public:
    /** Register (or look up) a plain parameter; ids are assigned in call order. */
    static int param(const std::string& name);
    /** Look up an existing variable, -1 if absent. */
    static int find(const std::string& name);
    static const std::string& name(int id);
    static bool is_root(int id);
    /** The integer square of a root variable. */
    static long long root_square(int id);

    static int sqrt2_id();
    static int imag_id();
};

/** Monomial in the scalar variables: sorted (var, exp) pairs, exps > 0. */
struct PMono {
    std::vector<std::pair<int, int>> v;
    friend bool operator==(const PMono&, const PMono&) = default;
    friend bool operator<(const PMono& a, const PMono& b) { return a.v < b.v; }
    bool empty() const { return v.empty(); }
    int exp_of(int var) const;
};

/** Sparse polynomial: term list sorted by monomial, coefficients nonzero. */
struct Poly {
    std::vector<std::pair<PMono, BigInt>> t;

    Poly() = default;
    explicit Poly(BigInt c);

    bool is_zero() const { return t.empty(); }
    bool is_constant() const { return t.empty() || (t.size() == 1 && t[0].first.empty()); }
    BigInt constant_value() const;

    friend bool operator==(const Poly&, const Poly&) = default;

    friend Poly operator+(const Poly& a, const Poly& b);
    friend Poly operator-(const Poly& a, const Poly& b);
    friend Poly operator*(const Poly& a, const Poly& b);
    Poly operator-() const;

    /** Largest exponent of var, 0 if absent. */
    int degree_in(int var) const;
    /** Coefficient of var^k, as a polynomial in the remaining variables. */
    Poly coeff_of(int var, int k) const;
    /** Smallest variable id appearing, or -1 for constants. */
    int min_var() const;
    void vars_into(std::set<int>& out) const;
    bool contains_var(int var) const;

    std::string str() const;
};

/** gcd including integer content; deterministic normalization (positive lead). */
Poly poly_gcd(const Poly& a, const Poly& b);
/** Exact division; throws if not exact. */
Poly poly_divexact(const Poly& a, const Poly& b);
/** Fold root variables down to exponent <= 1 using their integer squares. */
Poly poly_reduce_roots(const Poly& p);

class Scalar {
public:
    Scalar() : num_(), den_(BigInt(1)) {}
    Scalar(long long n) : num_(BigInt(n)), den_(BigInt(1)) {}
    explicit Scalar(BigInt n) : num_(std::move(n)), den_(BigInt(1)) {}
    Scalar(BigInt n, BigInt d);
    static Scalar from_rational(const Rational& r) { return Scalar(r.num, r.den); }
    /** num/den as given, normalized (roots folded, denominator rationalized, reduced). */
    static Scalar make(Poly num, Poly den);

    static Scalar param(const std::string& name);
    static Scalar sqrt2();
    static Scalar imag();
    /** sqrt(2) or sqrt(-2) = i*sqrt2; only |r| = 2 is supported. */
    static Scalar sqrt_of(long long r);

    bool is_zero() const { return num_.is_zero(); }
    bool is_one() const;
    bool is_constant() const { return num_.is_constant() && den_.is_constant(); }
    /** Constant rational value; throws if the scalar involves variables. */
    Rational as_rational() const;

    const Poly& num() const { return num_; }
    const Poly& den() const { return den_; }

    friend Scalar operator+(const Scalar& a, const Scalar& b);
    friend Scalar operator-(const Scalar& a, const Scalar& b);
    friend Scalar operator*(const Scalar& a, const Scalar& b);
    friend Scalar operator/(const Scalar& a, const Scalar& b);
    Scalar operator-() const;
    Scalar inverse() const;
    Scalar pow(int e) const;

    Scalar& operator+=(const Scalar& b) { *this = *this + b; return *this; }
    Scalar& operator-=(const Scalar& b) { *this = *this - b; return *this; }
    Scalar& operator*=(const Scalar& b) { *this = *this * b; return *this; }

    friend bool operator==(const Scalar&, const Scalar&) = default;

    /** Replace a variable by a scalar value everywhere. */
    Scalar substitute(int var, const Scalar& value) const;
    bool contains_var(int var) const { return num_.contains_var(var) || den_.contains_var(var); }
    void vars_into(std::set<int>& out) const { num_.vars_into(out); den_.vars_into(out); }

    /**
     * Split as A + B*var for a scalar whose numerator is at most linear in var
     * and whose denominator is var-free; nullopt otherwise.
     */
    std::optional<std::pair<Scalar, Scalar>> split_linear(int var) const;

    std::string str() const;

private:
    void normalize();
    Poly num_, den_;
};

/** Exact polynomial square root, nullopt when p is not a perfect square. */
std::optional<Poly> poly_sqrt(const Poly& p);

/**
 * Exact square root of d * (perfect square) for d in {1, -1, 2, -2}, expressed
 * with the preregistered roots i and sqrt2; nullopt when no such form exists.
 */
std::optional<Scalar> scalar_sqrt(const Scalar& s);

} // namespace voa
