#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

#include "ns4/derivation.hpp"

namespace ns4 {

struct ParseError : std::runtime_error {
  SourceSpan span;
  ParseError(SourceSpan s, const std::string& what) : std::runtime_error(what), span(s) {}
};

// Formula grammar (ASCII):
//   impl  := or ('->' impl)?          right associative
//   or    := and ('|' and)*
//   and   := unary ('&' unary)*
//   unary := '~' unary | '[]' unary | atom
//   atom  := IDENT | 'bot' | '(' impl ')'
// '~A' parses as 'A -> bot'. '#' starts a line comment.
Formula parse_formula(std::string_view text);

// Parenthesized rule trees, one constructor per rule:
//   (assume F k?) (andI d d) (andEl d) (andEr d) (orIl F d) (orIr F d)
//   (orE d k d k d) (impI F k d) (impE d d) (botC F k d) (boxE d)
//   (boxI (d ...) k d)
// Conclusion coherence is checked while parsing; errors carry byte spans.
Derivation parse_derivation(std::string_view text);

enum class RenderFormat { CanonicalSexpr, AsciiTree, LatexTree };

// CanonicalSexpr is a deterministic inverse of parse_derivation: single
// spaces between tokens, no trailing whitespace.
std::string render(const Derivation& d, RenderFormat format);

}  // namespace ns4
