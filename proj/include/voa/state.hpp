#pragma once
// Term kernel value types: word entries, normally ordered words, monomials
// with function coefficients, and finite linear combinations (states).
//
// A word [e1, e2, ..., ek] always denotes the right-nested normally ordered
// product e1(e2(...(e_{k-1} e_k)...)). A monomial is ft * word where ft is a
// function term (scalar coefficient times a commutative product of derived
// function symbols); the function factor multiplies from the left. A state
// is a finite sum of monomials with distinct (function-symbols, word) keys.

#include "voa/fnring.hpp"

#include <vector>

namespace voa {

// One word entry: the d-th translation derivative of a declared generator.
struct Entry {
    int gen = 0; // index into AlgebraDef::gens
    int d = 0;   // number of applied translations, >= 0

    friend bool operator==(const Entry&, const Entry&) = default;
};

// Canonical entry order: declaration order ascending, then derivative order
// descending (so within one generator the most-derived copy sits leftmost).
inline bool entry_lt(const Entry& a, const Entry& b) {
    if (a.gen != b.gen) return a.gen < b.gen;
    return a.d > b.d;
}

using Word = std::vector<Entry>;

// Lexicographic word order consistent with entry_lt; shorter prefix first.
inline bool word_lt(const Word& a, const Word& b) {
    size_t n = std::min(a.size(), b.size());
    for (size_t i = 0; i < n; ++i) {
        if (a[i] == b[i]) continue;
        return entry_lt(a[i], b[i]);
    }
    return a.size() < b.size();
}

struct Mono {
    FnTerm ft; // scalar coefficient and commutative function factor
    Word w;    // right-nested word; empty word = vacuum

    friend bool operator==(const Mono&, const Mono&) = default;
};

// Key order ignoring the scalar coefficient: word first, then function part.
inline int mono_key_cmp(const Mono& a, const Mono& b) {
    if (a.w != b.w) return word_lt(a.w, b.w) ? -1 : 1;
    if (a.ft.s != b.ft.s) return a.ft.s < b.ft.s ? -1 : 1;
    return 0;
}

// A finite linear combination of monomials, kept sorted by key with no
// duplicate keys and no zero coefficients.
class State {
public:
    std::vector<Mono> t;

    State() = default;
    explicit State(Mono m) {
        if (!m.ft.c.is_zero()) t.push_back(std::move(m));
    }

    static State zero() { return State{}; }
    static State vacuum(Scalar coeff = Scalar(1)) {
        Mono m;
        m.ft.c = std::move(coeff);
        return State(std::move(m));
    }
    static State gen(int g, int d = 0, Scalar coeff = Scalar(1)) {
        Mono m;
        m.ft.c = std::move(coeff);
        m.w.push_back(Entry{g, d});
        return State(std::move(m));
    }
    // A pure function-coefficient state (empty words), one mono per term.
    static State fn(const FnElement& f) {
        State s;
        for (const auto& term : f.t) s.t.push_back(Mono{term, {}});
        s.normalize();
        return s;
    }

    bool is_zero() const { return t.empty(); }

    // True iff the state is lambda * vacuum; writes lambda when requested.
    bool is_scalar(Scalar* out = nullptr) const {
        if (t.empty()) {
            if (out) *out = Scalar();
            return true;
        }
        if (t.size() == 1 && t[0].w.empty() && t[0].ft.s.empty()) {
            if (out) *out = t[0].ft.c;
            return true;
        }
        return false;
    }

    void normalize() {
        std::sort(t.begin(), t.end(), [](const Mono& a, const Mono& b) {
            return mono_key_cmp(a, b) < 0;
        });
        std::vector<Mono> out;
        for (auto& m : t) {
            if (!out.empty() && mono_key_cmp(out.back(), m) == 0) {
                out.back().ft.c = out.back().ft.c + m.ft.c;
            } else {
                out.push_back(std::move(m));
            }
        }
        std::erase_if(out, [](const Mono& m) { return m.ft.c.is_zero(); });
        t = std::move(out);
    }

    State& operator+=(const State& o) {
        t.insert(t.end(), o.t.begin(), o.t.end());
        normalize();
        return *this;
    }
    friend State operator+(State a, const State& b) {
        a += b;
        return a;
    }
    friend State operator-(State a, const State& b) {
        a += b * Scalar(-1);
        return a;
    }
    State operator-() const { return *this * Scalar(-1); }
    friend State operator*(State a, const Scalar& s) {
        if (s.is_zero()) return State{};
        for (auto& m : a.t) m.ft.c = m.ft.c * s;
        return a;
    }
    friend State operator*(const Scalar& s, State a) { return std::move(a) * s; }

    friend bool operator==(const State&, const State&) = default;
};

} // namespace voa
