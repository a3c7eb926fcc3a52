#pragma once
// Textual state format. A state renders as
//   0 | TERM | (+ TERM TERM ...)
//   TERM  := (* COEFF FNATOM* WORD?)
//   WORD  := (. ENTRY+)
//   ENTRY := name | (d k name)
// COEFF is a plain rational like -3/2, or a {braced} expression in the
// coefficient field (parameters, sqrt2, i). FNATOMs use the function-symbol
// spelling (x1, g[1,2], p3g[1,2], Gamma[3;1,2], w[1,2,3], names).
// parse_state canonicalizes, so render/parse round-trips values exactly.

#include "voa/engine.hpp"
#include "voa/sexpr.hpp"

namespace voa {

// Rational coefficients render bare; anything else renders {braced}.
std::string render_scalar(const Scalar& c);

// Arithmetic over integers, parameters, sqrt2 and i with + - * / ^ and
// parentheses; accepts an optional {brace} wrapper.
Scalar parse_scalar(const std::string& text);

State state_from_sexpr(const SNode& n, const AlgebraDef& A);
State parse_state(const std::string& text, const AlgebraDef& A);

} // namespace voa
