#include "voa/algebra.hpp"
#include "voa/memo.hpp"

#include <atomic>

namespace voa {

namespace {

std::atomic<int> next_algebra_id{1};

// Factorials fit easily in BigInt; derivative orders stay tiny in practice.
BigInt factorial(int n) {
    BigInt r(1);
    for (int k = 2; k <= n; ++k) r *= k;
    return r;
}

// Translation restricted to linear states (table entries): bump each entry's
// derivative order. Valid because linear monomials carry no function factor.
State lin_translate(const State& s) {
    State out;
    for (const auto& m : s.t) {
        if (m.w.empty()) continue; // translate(vacuum) = 0
        Mono n = m;
        n.w[0].d += 1;
        out.t.push_back(std::move(n));
    }
    out.normalize();
    return out;
}

State lin_translate_div(State s, int k) {
    for (int i = 0; i < k; ++i) s = lin_translate(s);
    if (k > 1) s = s * Scalar(BigInt(1), factorial(k));
    return s;
}

} // namespace

AlgebraDef::AlgebraDef() : id(next_algebra_id.fetch_add(1)), memo(std::make_shared<Memo>()) {}

int AlgebraDef::find(const std::string& name) const {
    for (size_t i = 0; i < gens.size(); ++i)
        if (gens[i].name == name) return int(i);
    return -1;
}

bool AlgebraDef::mono_odd(const Mono& m) const {
    bool odd = false;
    for (const auto& e : m.w) odd ^= g(e.gen).odd;
    return odd;
}

void AlgebraDef::set(int i, int j, int n, State s) {
    s.normalize();
    if (s.is_zero()) return;
    if (i < 0 || j < 0 || size_t(i) >= gens.size() || size_t(j) >= gens.size() || n < 0)
        fail("algebra-set-range", "generator index or pole out of range");
    table[{i, j}][n] = std::move(s);
}

void AlgebraDef::finish() {
    {
        auto p = poison;
        for (const auto& [i, j] : p) poison.insert({j, i});
        for (const auto& [i, j] : poison) table.erase({i, j});
    }
    // Validate linearity of declared entries first: lin_translate below is
    // only sound on linear states.
    for (const auto& [key, fam] : table) {
        for (const auto& [n, s] : fam) {
            (void)n;
            for (const auto& m : s.t) {
                if (!m.ft.s.empty() || m.w.size() > 1)
                    fail("algebra-nonlinear-table",
                         gens[size_t(key.first)].name + " " + gens[size_t(key.second)].name +
                             ": table entries must be scalar multiples of vacuum or single "
                             "generator derivatives");
            }
        }
    }

    // b_(n) a = -(-1)^{|a||b|} sum_j (-1)^{n+j} translate^{(j)} (a_(n+j) b).
    auto skew_family = [&](int i, int j,
                           const std::map<int, State>& fam) -> std::map<int, State> {
        bool both_odd = gens[size_t(i)].odd && gens[size_t(j)].odd;
        Scalar front = both_odd ? Scalar(1) : Scalar(-1);
        int nmax = fam.empty() ? -1 : fam.rbegin()->first;
        std::map<int, State> out;
        for (int n = 0; n <= nmax; ++n) {
            State acc;
            for (const auto& [m, s] : fam) {
                int jj = m - n;
                if (jj < 0) continue;
                Scalar sg = ((n + jj) % 2 == 0) ? Scalar(1) : Scalar(-1);
                acc += lin_translate_div(s, jj) * (front * sg);
            }
            acc.normalize();
            if (!acc.is_zero()) out[n] = std::move(acc);
        }
        return out;
    };

    // Fill missing transposes, then check every declared pair against the
    // skew image of its transpose (this also validates declared diagonals).
    auto declared = table;
    for (const auto& [key, fam] : declared) {
        auto rev = std::make_pair(key.second, key.first);
        auto img = skew_family(key.first, key.second, fam);
        auto it = table.find(rev);
        if (it == table.end()) {
            if (!img.empty()) table[rev] = std::move(img);
        } else if (it->second != img) {
            fail("algebra-skew-mismatch",
                 gens[size_t(key.first)].name + " " + gens[size_t(key.second)].name +
                     ": declared transpose disagrees with skew-symmetry");
        }
    }
    // Re-check pairs that were filled in this pass (covers one-sided input).
    for (const auto& [key, fam] : table) {
        auto rev = std::make_pair(key.second, key.first);
        auto img = skew_family(key.first, key.second, fam);
        auto it = table.find(rev);
        const std::map<int, State> empty;
        const auto& have = (it == table.end()) ? empty : it->second;
        if (have != img)
            fail("algebra-skew-mismatch",
                 gens[size_t(key.first)].name + " " + gens[size_t(key.second)].name +
                     ": table is not skew-consistent");
    }
}

AlgebraDef free_fermions(int dim, const std::vector<std::vector<Scalar>>& pairing,
                         const std::string& prefix) {
    if (dim <= 0 || pairing.size() != size_t(dim))
        fail("free-fermions-shape", "pairing must be dim x dim");
    for (const auto& row : pairing)
        if (row.size() != size_t(dim)) fail("free-fermions-shape", "pairing must be dim x dim");
    for (int i = 0; i < dim; ++i)
        for (int j = 0; j < dim; ++j)
            if (!(pairing[size_t(i)][size_t(j)] == pairing[size_t(j)][size_t(i)]))
                fail("free-fermions-symmetry", "fermion pairing must be symmetric");

    AlgebraDef A;
    for (int i = 0; i < dim; ++i) {
        GenDecl g;
        g.name = prefix + std::to_string(i + 1);
        g.odd = true;
        g.weight = Scalar(BigInt(1), BigInt(2));
        A.gens.push_back(std::move(g));
    }
    for (int i = 0; i < dim; ++i)
        for (int j = 0; j < dim; ++j)
            A.set(i, j, 0, State::vacuum(pairing[size_t(i)][size_t(j)]));
    A.finish();
    return A;
}

AlgebraDef symplectic_bosons(int dim, const std::vector<std::vector<Scalar>>& form,
                             const std::string& prefix) {
    if (dim <= 0 || form.size() != size_t(dim))
        fail("symplectic-bosons-shape", "form must be dim x dim");
    for (const auto& row : form)
        if (row.size() != size_t(dim)) fail("symplectic-bosons-shape", "form must be dim x dim");
    for (int i = 0; i < dim; ++i)
        for (int j = 0; j < dim; ++j)
            if (!(form[size_t(i)][size_t(j)] == -form[size_t(j)][size_t(i)]))
                fail("symplectic-bosons-antisymmetry", "boson form must be antisymmetric");

    AlgebraDef A;
    for (int i = 0; i < dim; ++i) {
        GenDecl g;
        g.name = prefix + std::to_string(i + 1);
        g.odd = false;
        g.weight = Scalar(BigInt(1), BigInt(2));
        A.gens.push_back(std::move(g));
    }
    for (int i = 0; i < dim; ++i)
        for (int j = 0; j < dim; ++j)
            A.set(i, j, 0, State::vacuum(form[size_t(i)][size_t(j)]));
    A.finish();
    return A;
}

AlgebraDef tensor(const AlgebraDef& a, const AlgebraDef& b) {
    AlgebraDef A;
    int off = int(a.gens.size());
    A.gens = a.gens;
    for (const auto& g : b.gens) {
        GenDecl h = g;
        if (h.d_gen >= 0) h.d_gen += off;
        if (A.find(h.name) >= 0) fail("tensor-name-clash", h.name);
        A.gens.push_back(std::move(h));
    }
    // Coordinate / function-pairing slots live in one shared chart; the
    // factors must not both claim chart structure.
    if (a.dim > 0 && b.dim > 0) fail("tensor-two-charts", "both factors carry coordinates");
    A.dim = a.dim > 0 ? a.dim : b.dim;
    A.table = a.table;
    for (const auto& [key, fam] : b.table) A.table[{key.first + off, key.second + off}] = fam;
    A.finish();
    return A;
}

} // namespace voa
