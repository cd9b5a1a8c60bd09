#pragma once

#include <optional>
#include <string>

#include "robba/tate.hpp"
#include "robba/witt.hpp"

namespace robba {

/// Context for parsing element text: the coefficient field, the Tate
/// variable radii (log form; empty means T-variables are rejected), and the
/// base radius / working precision for the rare inexact steps (negative
/// powers of non-monomials).
struct ParseContext {
    FieldPtr field;
    std::vector<Rat> weights;
    Rat base_r = Rat(1);
    Rat work_prec = Rat(96);
};

struct ParsedElement {
    std::optional<WittSeries> witt;
    std::optional<TateSeries> tate;
};

/// Grammar: sums/products/powers of `pi`, Teichmuller brackets `[...]`,
/// integers, T-variables `T1..Tn`, parens, and precision markers `O(pi^N)`.
/// Inside brackets: sums of `c*t^(a/b)` with `g` the F_q generator and
/// `O(t^M)` precision markers. Throws SyntaxError with a position.
ParsedElement parse_element(const std::string& text, const ParseContext& ctx);

/// Parses element text that must denote a plain Witt series (no T-variables).
WittSeries parse_witt(const std::string& text, const ParseContext& ctx);

/// Parses a bare Hahn-series expression (the inside of a bracket).
HahnSeries parse_hahn(const std::string& text, const ParseContext& ctx);

/// Rational literal "a/b" or "a"; "inf" when allow_inf.
Rat parse_rat(const std::string& text);
ExtRat parse_extrat(const std::string& text);

/// Canonical printers; parse(print(x)) reproduces the value.
std::string element_str(const TateSeries& f);

} // namespace robba
