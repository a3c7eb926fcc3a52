#pragma once
// Minimal s-expression reader shared by the state renderer, scenario files,
// and the command-line driver. Atoms are whitespace-delimited; a '{...}'
// group is read as one atom (used for symbolic scalar coefficients); ';'
// starts a comment running to end of line. Nodes carry line/column for
// diagnostics.

#include <string>
#include <vector>

namespace voa {

struct SNode {
    bool list = false;
    std::string atom;        // meaningful when !list
    std::vector<SNode> kids; // meaningful when list
    int line = 1, col = 1;

    bool is_atom(const char* s) const { return !list && atom == s; }
    std::string str() const;
};

// All top-level forms in the text; fails with code "sexpr-parse" on errors.
std::vector<SNode> parse_sexprs(const std::string& text);

// Exactly one form; fails when the text holds zero or several.
SNode parse_sexpr(const std::string& text);

} // namespace voa
