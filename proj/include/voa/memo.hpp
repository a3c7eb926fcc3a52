#pragma once
// Product memoization shared by all states over one algebra instance.
//
// Keys strip only the Scalar coefficient from each side's single monomial
// (results scale bilinearly in those coefficients); the function-symbol
// multiset stays in the key because symbols do not commute with the
// generator pairing rules (beta_(0) f = partial f).

#include "voa/state.hpp"

#include <map>
#include <memory>
#include <mutex>

namespace voa {

struct StrippedMono {
    std::vector<DSym> s; // function symbols, coefficient dropped
    Word w;

    friend bool operator==(const StrippedMono&, const StrippedMono&) = default;
    friend bool operator<(const StrippedMono& a, const StrippedMono& b) {
        if (a.w != b.w) return word_lt(a.w, b.w);
        return a.s < b.s;
    }
};

inline StrippedMono strip(const Mono& m) { return StrippedMono{m.ft.s, m.w}; }

struct Memo {
    std::mutex mx;
    // Whole singular family of a mono pair (coefficients of both sides 1).
    std::map<std::pair<StrippedMono, StrippedMono>, std::shared_ptr<const std::map<int, State>>>
        sing;
    // Normally ordered product of a mono pair (coefficients 1).
    std::map<std::pair<StrippedMono, StrippedMono>, std::shared_ptr<const State>> mul;
};

} // namespace voa
