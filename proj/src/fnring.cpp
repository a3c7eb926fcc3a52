#include "voa/fnring.hpp"

#include <algorithm>
#include <iterator>
#include <map>
#include <mutex>

#include "voa/common.hpp"

namespace voa {

namespace {

struct SymData {
    FnKind kind;
    std::string name;      // base name for Form/Generic; printable otherwise
    std::vector<int> idx;  // normalized indices
};

struct SymKey {
    FnKind kind;
    std::string name;
    std::vector<int> idx;
    friend bool operator<(const SymKey& a, const SymKey& b) {
        if (a.kind != b.kind) return a.kind < b.kind;
        if (a.name != b.name) return a.name < b.name;
        return a.idx < b.idx;
    }
};

struct SymRegistry {
    std::mutex mu;
    std::vector<SymData> data;
    std::map<SymKey, int> by_key;

    int intern(FnKind k, std::string name, std::vector<int> idx) {
        std::lock_guard<std::mutex> lock(mu);
        SymKey key{k, name, idx};
        auto it = by_key.find(key);
        if (it != by_key.end()) return it->second;
        int id = static_cast<int>(data.size());
        data.push_back(SymData{k, std::move(name), std::move(idx)});
        by_key.emplace(std::move(key), id);
        return id;
    }
    SymData& at(int id) {
        if (id < 0 || id >= static_cast<int>(data.size())) fail("fnsym.unknown", std::to_string(id));
        return data[static_cast<size_t>(id)];
    }
};

SymRegistry& reg() {
    static SymRegistry r;
    return r;
}

void check_index(int i) {
    if (i < 1) fail("fnsym.bad-index", std::to_string(i));
}

} // namespace

int FnSyms::coord(int i) {
    check_index(i);
    return reg().intern(FnKind::Coord, "x", {i});
}

int FnSyms::metric(int i, int j) {
    check_index(i);
    check_index(j);
    if (i > j) std::swap(i, j);
    return reg().intern(FnKind::Metric, "g", {i, j});
}

int FnSyms::inv_metric(int i, int j) {
    check_index(i);
    check_index(j);
    if (i > j) std::swap(i, j);
    return reg().intern(FnKind::InvMetric, "gi", {i, j});
}

int FnSyms::christoffel(int k, int i, int j) {
    check_index(k);
    check_index(i);
    check_index(j);
    if (i > j) std::swap(i, j);
    return reg().intern(FnKind::Christoffel, "Gamma", {k, i, j});
}

std::pair<int, int> FnSyms::form(const std::string& name, std::vector<int> idx) {
    int sign = 1;
    for (int v : idx) check_index(v);
    // Insertion sort, tracking the permutation sign; repeated index kills it.
    for (size_t i = 1; i < idx.size(); ++i)
        for (size_t j = i; j > 0 && idx[j] <= idx[j - 1]; --j) {
            if (idx[j] == idx[j - 1]) return {0, 0};
            std::swap(idx[j], idx[j - 1]);
            sign = -sign;
        }
    return {reg().intern(FnKind::Form, name, std::move(idx)), sign};
}

int FnSyms::generic(const std::string& name) {
    if (name.empty()) fail("fnsym.empty-name", "generic function symbol needs a name");
    return reg().intern(FnKind::Generic, name, {});
}

FnKind FnSyms::kind(int id) { return reg().at(id).kind; }
const std::vector<int>& FnSyms::idx(int id) { return reg().at(id).idx; }
const std::string& FnSyms::base_name(int id) { return reg().at(id).name; }

std::string FnSyms::str(int id) {
    const SymData& d = reg().at(id);
    switch (d.kind) {
    case FnKind::Coord:
        return "x" + std::to_string(d.idx[0]);
    case FnKind::Christoffel:
        return "Gamma[" + std::to_string(d.idx[0]) + ";" + std::to_string(d.idx[1]) + "," +
               std::to_string(d.idx[2]) + "]";
    default: {
        if (d.idx.empty()) return d.name;
        std::string s = d.name + "[";
        for (size_t i = 0; i < d.idx.size(); ++i) {
            if (i) s += ",";
            s += std::to_string(d.idx[i]);
        }
        return s + "]";
    }
    }
}

std::string DSym::str() const {
    std::string s;
    for (int i : dx) s += "p" + std::to_string(i);
    return s + FnSyms::str(sym);
}

std::string FnTerm::str() const {
    std::string cs = c.str();
    if (s.empty()) return cs;
    std::string body;
    for (size_t i = 0; i < s.size(); ++i) {
        if (i) body += "*";
        body += s[i].str();
    }
    if (c == Scalar(1)) return body;
    if (c == Scalar(-1)) return "-" + body;
    bool wrap = cs.find(' ') != std::string::npos;
    return (wrap ? "(" + cs + ")" : cs) + " " + body;
}

// ------------------------------------------------------------- FnElement

namespace {

void push_term(std::vector<FnTerm>& out, FnTerm tm) {
    if (tm.c.is_zero()) return;
    out.push_back(std::move(tm));
}

std::vector<FnTerm> normalize_terms(std::vector<FnTerm> v) {
    std::sort(v.begin(), v.end(),
              [](const FnTerm& a, const FnTerm& b) { return a.s < b.s; });
    std::vector<FnTerm> out;
    for (auto& tm : v) {
        if (!out.empty() && out.back().s == tm.s) {
            out.back().c = out.back().c + tm.c;
            if (out.back().c.is_zero()) out.pop_back();
        } else {
            push_term(out, std::move(tm));
        }
    }
    return out;
}

} // namespace

FnElement FnElement::scalar(const Scalar& c) {
    FnElement e;
    if (!c.is_zero()) e.t.push_back(FnTerm{c, {}});
    return e;
}

FnElement FnElement::sym(int id) {
    FnElement e;
    e.t.push_back(FnTerm{Scalar(1), {DSym{id, {}}}});
    return e;
}

FnElement FnElement::term(FnTerm tm) {
    FnElement e;
    if (!tm.c.is_zero()) {
        std::sort(tm.s.begin(), tm.s.end());
        e.t.push_back(std::move(tm));
    }
    return e;
}

Scalar FnElement::scalar_value() const {
    if (t.empty()) return Scalar(0);
    if (t.size() != 1 || !t[0].is_scalar()) fail("fnring.not-scalar", str());
    return t[0].c;
}

FnElement FnElement::operator-() const {
    FnElement r = *this;
    for (auto& tm : r.t) tm.c = -tm.c;
    return r;
}

FnElement FnElement::operator+(const FnElement& o) const {
    std::vector<FnTerm> v = t;
    v.insert(v.end(), o.t.begin(), o.t.end());
    FnElement r;
    r.t = normalize_terms(std::move(v));
    return r;
}

FnElement FnElement::operator-(const FnElement& o) const { return *this + (-o); }

FnTerm fnterm_mul(const FnTerm& a, const FnTerm& b) {
    FnTerm r;
    r.c = a.c * b.c;
    r.s.reserve(a.s.size() + b.s.size());
    std::merge(a.s.begin(), a.s.end(), b.s.begin(), b.s.end(), std::back_inserter(r.s));
    return r;
}

FnElement FnElement::operator*(const FnElement& o) const {
    std::vector<FnTerm> v;
    v.reserve(t.size() * o.t.size());
    for (const auto& a : t)
        for (const auto& b : o.t) v.push_back(fnterm_mul(a, b));
    FnElement r;
    r.t = normalize_terms(std::move(v));
    return r;
}

FnElement FnElement::operator*(const Scalar& c) const {
    if (c.is_zero()) return {};
    FnElement r = *this;
    for (auto& tm : r.t) tm.c = tm.c * c;
    return r;
}

std::string FnElement::str() const {
    if (t.empty()) return "0";
    std::string s;
    for (size_t i = 0; i < t.size(); ++i) {
        std::string ts = t[i].str();
        if (i == 0) {
            s = ts;
        } else if (!ts.empty() && ts[0] == '-') {
            s += " - " + ts.substr(1);
        } else {
            s += " + " + ts;
        }
    }
    return s;
}

// --------------------------------------------------------------- partial

FnElement partial(const FnTerm& tm, int i) {
    if (i < 1) fail("fnring.bad-coordinate", std::to_string(i));
    FnElement out;
    for (size_t k = 0; k < tm.s.size(); ++k) {
        FnTerm rest;
        rest.c = tm.c;
        rest.s.reserve(tm.s.size());
        for (size_t j = 0; j < tm.s.size(); ++j)
            if (j != k) rest.s.push_back(tm.s[j]);
        const DSym& d = tm.s[k];
        if (FnSyms::kind(d.sym) == FnKind::Coord) {
            if (FnSyms::idx(d.sym)[0] != i) continue; // d x^a / d x^i = delta
            out = out + FnElement::term(std::move(rest));
        } else {
            DSym nd = d;
            nd.dx.insert(std::upper_bound(nd.dx.begin(), nd.dx.end(), i), i);
            rest.s.push_back(std::move(nd));
            out = out + FnElement::term(std::move(rest));
        }
    }
    return out;
}

FnElement partial(const FnElement& f, int i) {
    FnElement out;
    for (const auto& tm : f.t) out = out + partial(tm, i);
    return out;
}

// ---------------------------------------------------------------- reduce

namespace {

// nabla-g step: rewrite one derived metric symbol
//   d_l g_{ij} -> sum_k g_{kj} Gamma[k;i,l] + g_{ik} Gamma[k;j,l]
// applying any remaining derivative indices to the replacement afterwards.
// Returns true if a rewrite happened.
bool nabla_g_step(FnElement& f, int dim) {
    for (size_t ti = 0; ti < f.t.size(); ++ti) {
        const FnTerm& tm = f.t[ti];
        for (size_t si = 0; si < tm.s.size(); ++si) {
            const DSym& d = tm.s[si];
            if (FnSyms::kind(d.sym) != FnKind::Metric || d.dx.empty()) continue;
            int i = FnSyms::idx(d.sym)[0], j = FnSyms::idx(d.sym)[1];
            int l = d.dx[0];
            std::vector<int> rest_dx(d.dx.begin() + 1, d.dx.end());

            FnElement repl;
            for (int k = 1; k <= dim; ++k) {
                FnTerm t1{Scalar(1), {DSym{FnSyms::metric(k, j), {}},
                                      DSym{FnSyms::christoffel(k, i, l), {}}}};
                FnTerm t2{Scalar(1), {DSym{FnSyms::metric(i, k), {}},
                                      DSym{FnSyms::christoffel(k, j, l), {}}}};
                repl = repl + FnElement::term(std::move(t1)) + FnElement::term(std::move(t2));
            }
            for (int m : rest_dx) repl = partial(repl, m);

            FnTerm cof;
            cof.c = tm.c;
            for (size_t q = 0; q < tm.s.size(); ++q)
                if (q != si) cof.s.push_back(tm.s[q]);
            FnElement without = f - FnElement::term(FnTerm{tm.c, tm.s});
            f = without + repl * FnElement::term(std::move(cof));
            return true;
        }
    }
    return false;
}

// inverse-contraction step: locate a complete family
//   sum_{j=1..dim} coeff * rest * gi[i,j] g[k,j]
// and replace it by coeff * rest * delta^i_k. Returns true on a rewrite.
bool inv_contraction_step(FnElement& f, int dim) {
    for (size_t ti = 0; ti < f.t.size(); ++ti) {
        const FnTerm& tm = f.t[ti];
        for (size_t ai = 0; ai < tm.s.size(); ++ai) {
            const DSym& A = tm.s[ai];
            if (FnSyms::kind(A.sym) != FnKind::InvMetric || !A.dx.empty()) continue;
            for (size_t bi = 0; bi < tm.s.size(); ++bi) {
                if (bi == ai) continue;
                const DSym& B = tm.s[bi];
                if (FnSyms::kind(B.sym) != FnKind::Metric || !B.dx.empty()) continue;
                const auto& aidx = FnSyms::idx(A.sym);
                const auto& bidx = FnSyms::idx(B.sym);
                // Choose the shared summation index among the four pairings.
                for (int aa = 0; aa < 2; ++aa)
                    for (int bb = 0; bb < 2; ++bb) {
                        if (aidx[aa] != bidx[bb]) continue;
                        int i = aidx[1 - aa], k = bidx[1 - bb];
                        // Cofactor: the term minus this particular (A,B) pair.
                        std::vector<DSym> rest;
                        for (size_t q = 0; q < tm.s.size(); ++q)
                            if (q != ai && q != bi) rest.push_back(tm.s[q]);
                        // The family must be present for every j with the
                        // same coefficient and cofactor.
                        bool complete = true;
                        std::vector<FnTerm> family;
                        for (int j = 1; j <= dim && complete; ++j) {
                            FnTerm want;
                            want.c = tm.c;
                            want.s = rest;
                            want.s.push_back(DSym{FnSyms::inv_metric(i, j), {}});
                            want.s.push_back(DSym{FnSyms::metric(k, j), {}});
                            std::sort(want.s.begin(), want.s.end());
                            bool found = false;
                            for (const auto& cand : f.t)
                                if (cand.s == want.s && cand.c == want.c) {
                                    found = true;
                                    break;
                                }
                            if (!found) complete = false;
                            family.push_back(std::move(want));
                        }
                        if (!complete) continue;
                        Scalar coeff = tm.c; // tm dangles once f is reassigned
                        FnElement removed;
                        for (auto& w : family) removed = removed + FnElement::term(std::move(w));
                        f = f - removed;
                        if (i == k) f = f + FnElement::term(FnTerm{coeff, rest});
                        return true;
                    }
            }
        }
    }
    return false;
}

} // namespace

FnElement reduce(const FnElement& f, RuleSet rules, int dim) {
    if (dim < 1) fail("fnring.bad-dim", std::to_string(dim));
    FnElement r = f;
    if (rules == RuleSet::NablaG || rules == RuleSet::Curved)
        while (nabla_g_step(r, dim)) {}
    if (rules == RuleSet::InvContraction || rules == RuleSet::Curved)
        while (inv_contraction_step(r, dim)) {}
    return r;
}

} // namespace voa
