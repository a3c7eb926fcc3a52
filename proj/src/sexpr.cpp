#include "voa/sexpr.hpp"

#include "voa/common.hpp"

namespace voa {

namespace {

struct Reader {
    const std::string& s;
    size_t i = 0;
    int line = 1, col = 1;

    explicit Reader(const std::string& text) : s(text) {}

    [[noreturn]] void err(const std::string& what) const {
        fail("sexpr-parse", what + " at line " + std::to_string(line) + ", column " +
                                std::to_string(col));
    }

    bool eof() const { return i >= s.size(); }
    char peek() const { return s[i]; }
    char take() {
        char c = s[i++];
        if (c == '\n') {
            ++line;
            col = 1;
        } else {
            ++col;
        }
        return c;
    }

    void skip_space() {
        while (!eof()) {
            char c = peek();
            if (c == ';') {
                while (!eof() && peek() != '\n') take();
            } else if (c == ' ' || c == '\t' || c == '\r' || c == '\n') {
                take();
            } else {
                break;
            }
        }
    }

    SNode read() {
        skip_space();
        if (eof()) err("unexpected end of input");
        SNode n;
        n.line = line;
        n.col = col;
        char c = peek();
        if (c == '(') {
            take();
            n.list = true;
            while (true) {
                skip_space();
                if (eof()) err("unterminated list");
                if (peek() == ')') {
                    take();
                    break;
                }
                n.kids.push_back(read());
            }
            return n;
        }
        if (c == ')') err("unexpected ')'");
        if (c == '{') {
            take();
            n.atom = "{";
            while (true) {
                if (eof()) err("unterminated '{' group");
                char d = take();
                n.atom += d;
                if (d == '}') break;
            }
            return n;
        }
        // ';' only begins a comment at a token boundary; inside an atom it is
        // ordinary content (index separators such as name[1;2,3]).
        while (!eof()) {
            char d = peek();
            if (d == ' ' || d == '\t' || d == '\r' || d == '\n' || d == '(' || d == ')')
                break;
            n.atom += take();
        }
        if (n.atom.empty()) err("empty atom");
        return n;
    }
};

} // namespace

std::string SNode::str() const {
    if (!list) return atom;
    std::string out = "(";
    for (size_t k = 0; k < kids.size(); ++k) {
        if (k) out += " ";
        out += kids[k].str();
    }
    return out + ")";
}

std::vector<SNode> parse_sexprs(const std::string& text) {
    Reader r(text);
    std::vector<SNode> out;
    while (true) {
        r.skip_space();
        if (r.eof()) break;
        out.push_back(r.read());
    }
    return out;
}

SNode parse_sexpr(const std::string& text) {
    auto v = parse_sexprs(text);
    if (v.size() != 1) fail("sexpr-parse", "expected exactly one expression");
    return v[0];
}

} // namespace voa
