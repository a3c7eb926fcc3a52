#include "voa/state_io.hpp"

#include <cctype>

namespace voa {

namespace {

// ------------------------------------------------------------- scalar parse

struct ScalarReader {
    const std::string& s;
    size_t i = 0;

    explicit ScalarReader(const std::string& text) : s(text) {}

    [[noreturn]] void err(const std::string& what) const {
        fail("scalar-parse", what + " in \"" + s + "\"");
    }
    void skip() {
        while (i < s.size() && std::isspace(static_cast<unsigned char>(s[i]))) ++i;
    }
    bool at(char c) {
        skip();
        return i < s.size() && s[i] == c;
    }
    bool eat(char c) {
        if (!at(c)) return false;
        ++i;
        return true;
    }

    Scalar expr() {
        Scalar v = eat('-') ? -term() : term();
        while (true) {
            if (eat('+'))
                v = v + term();
            else if (eat('-'))
                v = v - term();
            else
                break;
        }
        return v;
    }
    Scalar term() {
        Scalar v = factor();
        while (true) {
            if (eat('*'))
                v = v * factor();
            else if (eat('/'))
                v = v / factor();
            else
                break;
        }
        return v;
    }
    Scalar factor() {
        if (eat('-')) return -factor();
        Scalar v = primary();
        if (eat('^')) {
            skip();
            bool neg = eat('-');
            size_t j = i;
            while (i < s.size() && std::isdigit(static_cast<unsigned char>(s[i]))) ++i;
            if (i == j) err("expected integer exponent");
            int e = std::stoi(s.substr(j, i - j));
            v = v.pow(neg ? -e : e);
        }
        return v;
    }
    Scalar primary() {
        skip();
        if (i >= s.size()) err("unexpected end");
        char c = s[i];
        if (c == '(') {
            ++i;
            Scalar v = expr();
            if (!eat(')')) err("expected ')'");
            return v;
        }
        if (std::isdigit(static_cast<unsigned char>(c))) {
            size_t j = i;
            while (i < s.size() && std::isdigit(static_cast<unsigned char>(s[i]))) ++i;
            return Scalar(BigInt(s.substr(j, i - j)));
        }
        if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') {
            size_t j = i;
            while (i < s.size() &&
                   (std::isalnum(static_cast<unsigned char>(s[i])) || s[i] == '_'))
                ++i;
            std::string name = s.substr(j, i - j);
            if (name == "sqrt2") return Scalar::sqrt2();
            if (name == "i") return Scalar::imag();
            return Scalar::param(name);
        }
        err("unexpected character");
    }
};

// ------------------------------------------------------------ fn atom parse

std::vector<int> parse_indices(const std::string& body, char sep, const std::string& tok) {
    std::vector<int> out;
    size_t i = 0;
    while (i < body.size()) {
        size_t j = i;
        while (j < body.size() && std::isdigit(static_cast<unsigned char>(body[j]))) ++j;
        if (j == i) fail("state-parse", "bad index list in " + tok);
        out.push_back(std::stoi(body.substr(i, j - i)));
        i = j;
        if (i < body.size()) {
            if (body[i] != sep && body[i] != ',')
                fail("state-parse", "bad index separator in " + tok);
            ++i;
        }
    }
    return out;
}

// Returns the DSym and a sign factor (antisymmetric form index sorting can
// flip signs or annihilate the term; sign 0 means the term vanishes).
std::pair<DSym, int> parse_fn_atom(const std::string& tok) {
    DSym d;
    size_t i = 0;
    // derivative prefixes p<k>
    while (i + 1 < tok.size() && tok[i] == 'p' &&
           std::isdigit(static_cast<unsigned char>(tok[i + 1]))) {
        size_t j = i + 1;
        while (j < tok.size() && std::isdigit(static_cast<unsigned char>(tok[j]))) ++j;
        d.dx.push_back(std::stoi(tok.substr(i + 1, j - i - 1)));
        i = j;
    }
    std::sort(d.dx.begin(), d.dx.end());
    std::string rest = tok.substr(i);
    size_t br = rest.find('[');
    int sign = 1;
    if (br == std::string::npos) {
        if (rest.size() > 1 && rest[0] == 'x' &&
            std::all_of(rest.begin() + 1, rest.end(),
                        [](char c) { return std::isdigit(static_cast<unsigned char>(c)); })) {
            d.sym = FnSyms::coord(std::stoi(rest.substr(1)));
        } else if (!rest.empty()) {
            d.sym = FnSyms::generic(rest);
        } else {
            fail("state-parse", "bad function atom " + tok);
        }
        return {d, sign};
    }
    if (rest.back() != ']') fail("state-parse", "bad function atom " + tok);
    std::string name = rest.substr(0, br);
    std::string body = rest.substr(br + 1, rest.size() - br - 2);
    if (name == "g") {
        auto ix = parse_indices(body, ',', tok);
        if (ix.size() != 2) fail("state-parse", "metric needs two indices: " + tok);
        d.sym = FnSyms::metric(ix[0], ix[1]);
    } else if (name == "gi") {
        auto ix = parse_indices(body, ',', tok);
        if (ix.size() != 2) fail("state-parse", "inverse metric needs two indices: " + tok);
        d.sym = FnSyms::inv_metric(ix[0], ix[1]);
    } else if (name == "Gamma") {
        size_t sc = body.find(';');
        if (sc == std::string::npos) fail("state-parse", "bad Christoffel atom " + tok);
        auto up = parse_indices(body.substr(0, sc), ',', tok);
        auto lo = parse_indices(body.substr(sc + 1), ',', tok);
        if (up.size() != 1 || lo.size() != 2)
            fail("state-parse", "Christoffel needs [k;i,j]: " + tok);
        d.sym = FnSyms::christoffel(up[0], lo[0], lo[1]);
    } else {
        auto ix = parse_indices(body, ',', tok);
        auto [id, sg] = FnSyms::form(name, ix);
        d.sym = id;
        sign = sg;
    }
    return {d, sign};
}

} // namespace

// ------------------------------------------------------------------ render

std::string render_scalar(const Scalar& c) {
    if (c.is_constant()) {
        Rational r = c.as_rational();
        return r.str();
    }
    return "{" + c.str() + "}";
}

static std::string render_term(const Mono& m, const AlgebraDef& A) {
    std::string out = "(* " + render_scalar(m.ft.c);
    for (const auto& d : m.ft.s) out += " " + d.str();
    if (!m.w.empty()) {
        out += " (.";
        for (const auto& e : m.w) {
            const std::string& nm = A.g(e.gen).name;
            if (e.d == 0)
                out += " " + nm;
            else
                out += " (d " + std::to_string(e.d) + " " + nm + ")";
        }
        out += ")";
    }
    return out + ")";
}

std::string render(const State& a, const AlgebraDef& A) {
    if (a.is_zero()) return "0";
    if (a.t.size() == 1) return render_term(a.t[0], A);
    std::string out = "(+";
    for (const auto& m : a.t) out += " " + render_term(m, A);
    return out + ")";
}

std::string render(const SingularOPE& o, const AlgebraDef& A) {
    std::string out = "(ope";
    for (const auto& [n, s] : o.p) out += " (" + std::to_string(n) + " " + render(s, A) + ")";
    return out + ")";
}

// ------------------------------------------------------------------- parse

Scalar parse_scalar(const std::string& text) {
    std::string body = text;
    if (body.size() >= 2 && body.front() == '{' && body.back() == '}')
        body = body.substr(1, body.size() - 2);
    ScalarReader r(body);
    Scalar v = r.expr();
    r.skip();
    if (r.i != body.size()) r.err("trailing input");
    return v;
}

static Entry entry_from_sexpr(const SNode& n, const AlgebraDef& A) {
    std::string name;
    int d = 0;
    if (!n.list) {
        name = n.atom;
    } else {
        if (n.kids.size() != 3 || !n.kids[0].is_atom("d") || n.kids[1].list || n.kids[2].list)
            fail("state-parse", "bad entry " + n.str());
        d = std::stoi(n.kids[1].atom);
        name = n.kids[2].atom;
        if (d < 0) fail("state-parse", "negative derivative order in " + n.str());
    }
    int g = A.find(name);
    if (g < 0) fail("state-parse", "unknown generator " + name);
    return Entry{g, d};
}

static Mono term_from_sexpr(const SNode& n, const AlgebraDef& A, int* sign_out) {
    if (!n.list || n.kids.empty() || !n.kids[0].is_atom("*"))
        fail("state-parse", "expected (* coeff ...) term, got " + n.str());
    if (n.kids.size() < 2) fail("state-parse", "term without coefficient: " + n.str());
    if (n.kids[1].list) fail("state-parse", "coefficient must be an atom: " + n.str());
    Mono m;
    m.ft.c = parse_scalar(n.kids[1].atom);
    int sign = 1;
    for (size_t k = 2; k < n.kids.size(); ++k) {
        const SNode& kid = n.kids[k];
        if (kid.list) {
            if (kid.kids.empty() || !kid.kids[0].is_atom("."))
                fail("state-parse", "expected (. entries) word, got " + kid.str());
            if (k + 1 != n.kids.size())
                fail("state-parse", "word must be the last element of a term");
            for (size_t t = 1; t < kid.kids.size(); ++t)
                m.w.push_back(entry_from_sexpr(kid.kids[t], A));
        } else {
            auto [d, sg] = parse_fn_atom(kid.atom);
            sign *= sg;
            m.ft.s.push_back(d);
        }
    }
    std::sort(m.ft.s.begin(), m.ft.s.end());
    *sign_out = sign;
    return m;
}

State state_from_sexpr(const SNode& n, const AlgebraDef& A) {
    State raw;
    if (n.is_atom("0")) return State{};
    std::vector<const SNode*> terms;
    if (n.list && !n.kids.empty() && n.kids[0].is_atom("+")) {
        if (n.kids.size() < 2) fail("state-parse", "sum without terms: " + n.str());
        for (size_t k = 1; k < n.kids.size(); ++k) terms.push_back(&n.kids[k]);
    } else {
        terms.push_back(&n);
    }
    for (const SNode* t : terms) {
        int sign = 1;
        Mono m = term_from_sexpr(*t, A, &sign);
        if (sign == 0) continue;
        if (sign < 0) m.ft.c = -m.ft.c;
        raw.t.push_back(std::move(m));
    }
    raw.normalize();
    return canonicalize(raw, A);
}

State parse_state(const std::string& text, const AlgebraDef& A) {
    return state_from_sexpr(parse_sexpr(text), A);
}

} // namespace voa
