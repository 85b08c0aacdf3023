#include "ns4/proof_text.hpp"

#include <algorithm>
#include <cctype>
#include <vector>

namespace ns4 {

namespace {

enum class Tok { LParen, RParen, Arrow, Amp, Pipe, Tilde, Box, Ident, Int, End };

struct Token {
  Tok kind;
  std::string text;
  SourceSpan span;
};

struct Lexer {
  std::string_view src;
  std::size_t pos = 0;
  Token cur;

  explicit Lexer(std::string_view s) : src(s) { advance(); }

  [[noreturn]] void fail(SourceSpan sp, const std::string& msg) { throw ParseError(sp, msg); }

  void advance() {
    while (pos < src.size()) {
      char c = src[pos];
      if (c == '#') {
        while (pos < src.size() && src[pos] != '\n') ++pos;
      } else if (std::isspace(static_cast<unsigned char>(c))) {
        ++pos;
      } else {
        break;
      }
    }
    const std::size_t start = pos;
    if (pos >= src.size()) {
      cur = {Tok::End, "", {start, start}};
      return;
    }
    const char c = src[pos];
    auto one = [&](Tok k) {
      ++pos;
      cur = {k, std::string(1, c), {start, pos}};
    };
    switch (c) {
      case '(': one(Tok::LParen); return;
      case ')': one(Tok::RParen); return;
      case '&': one(Tok::Amp); return;
      case '|': one(Tok::Pipe); return;
      case '~': one(Tok::Tilde); return;
      case '-':
        if (pos + 1 < src.size() && src[pos + 1] == '>') {
          pos += 2;
          cur = {Tok::Arrow, "->", {start, pos}};
          return;
        }
        fail({start, pos + 1}, "expected '->'");
      case '[':
        if (pos + 1 < src.size() && src[pos + 1] == ']') {
          pos += 2;
          cur = {Tok::Box, "[]", {start, pos}};
          return;
        }
        fail({start, pos + 1}, "expected '[]'");
      default:
        break;
    }
    if (std::isdigit(static_cast<unsigned char>(c))) {
      while (pos < src.size() && std::isdigit(static_cast<unsigned char>(src[pos]))) ++pos;
      cur = {Tok::Int, std::string(src.substr(start, pos - start)), {start, pos}};
      return;
    }
    if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') {
      while (pos < src.size() &&
             (std::isalnum(static_cast<unsigned char>(src[pos])) || src[pos] == '_' ||
              src[pos] == '\''))
        ++pos;
      cur = {Tok::Ident, std::string(src.substr(start, pos - start)), {start, pos}};
      return;
    }
    fail({start, start + 1}, std::string("unexpected character '") + c + "'");
  }

  Token take() {
    Token t = cur;
    advance();
    return t;
  }

  void expect(Tok k, const char* what) {
    if (cur.kind != k) fail(cur.span, std::string("expected ") + what);
  }
};

struct Parser {
  Lexer lx;
  explicit Parser(std::string_view s) : lx(s) {}

  Formula formula() { return impl(); }

  Formula impl() {
    Formula l = disj();
    if (lx.cur.kind == Tok::Arrow) {
      lx.take();
      return Formula::imp(l, impl());
    }
    return l;
  }

  Formula disj() {
    Formula l = conj();
    while (lx.cur.kind == Tok::Pipe) {
      lx.take();
      l = Formula::disj(l, conj());
    }
    return l;
  }

  Formula conj() {
    Formula l = unary();
    while (lx.cur.kind == Tok::Amp) {
      lx.take();
      l = Formula::conj(l, unary());
    }
    return l;
  }

  Formula unary() {
    if (lx.cur.kind == Tok::Tilde) {
      lx.take();
      return neg(unary());
    }
    if (lx.cur.kind == Tok::Box) {
      lx.take();
      return Formula::box(unary());
    }
    return atom();
  }

  Formula atom() {
    if (lx.cur.kind == Tok::Ident) {
      Token t = lx.take();
      if (t.text == "bot") return Formula::bottom();
      return Formula::atom(t.text);
    }
    if (lx.cur.kind == Tok::LParen) {
      lx.take();
      Formula f = impl();
      lx.expect(Tok::RParen, "')'");
      lx.take();
      return f;
    }
    lx.fail(lx.cur.span, "expected a formula");
  }

  Label label() {
    lx.expect(Tok::Int, "a discharge label");
    Token t = lx.take();
    long v = std::stol(t.text);
    if (v <= 0) lx.fail(t.span, "labels are positive integers");
    return static_cast<Label>(v);
  }

  Derivation derivation() {
    lx.expect(Tok::LParen, "'('");
    const SourceSpan open = lx.cur.span;
    lx.take();
    lx.expect(Tok::Ident, "a rule name");
    Token head = lx.take();
    const std::string& r = head.text;
    Derivation out = Derivation::assume(Formula::bottom());
    try {
      if (r == "assume") {
        Formula f = formula();
        Label l = kNoLabel;
        if (lx.cur.kind == Tok::Int) l = label();
        out = Derivation::assume(f, l);
      } else if (r == "andI") {
        Derivation a = derivation(), b = derivation();
        out = Derivation::and_i(a, b);
      } else if (r == "andEl") {
        out = Derivation::and_el(derivation());
      } else if (r == "andEr") {
        out = Derivation::and_er(derivation());
      } else if (r == "orIl") {
        Formula f = formula();
        out = Derivation::or_il(f, derivation());
      } else if (r == "orIr") {
        Formula f = formula();
        out = Derivation::or_ir(f, derivation());
      } else if (r == "orE") {
        Derivation major = derivation();
        Label l1 = label();
        Derivation left = derivation();
        Label l2 = label();
        Derivation right = derivation();
        out = Derivation::or_e(major, l1, left, l2, right);
      } else if (r == "impI") {
        Formula f = formula();
        Label k = label();
        out = Derivation::imp_i(f, k, derivation());
      } else if (r == "impE") {
        Derivation a = derivation(), b = derivation();
        out = Derivation::imp_e(a, b);
      } else if (r == "botC") {
        Formula f = formula();
        Label k = label();
        out = Derivation::bot_c(f, k, derivation());
      } else if (r == "boxE") {
        out = Derivation::box_e(derivation());
      } else if (r == "boxI") {
        lx.expect(Tok::LParen, "'(' opening the major premiss list");
        lx.take();
        std::vector<Derivation> majors;
        while (lx.cur.kind != Tok::RParen) majors.push_back(derivation());
        lx.take();
        Label k = label();
        Derivation minor = derivation();
        out = Derivation::box_i(std::move(majors), k, minor);
      } else {
        lx.fail(head.span, "unknown rule '" + r + "'");
      }
    } catch (const StructureError& e) {
      throw ParseError({open.begin, lx.cur.span.end}, e.what());
    }
    lx.expect(Tok::RParen, "')'");
    Token close = lx.take();
    return out.with_span({open.begin, close.span.end});
  }
};

}  // namespace

Formula parse_formula(std::string_view text) {
  Parser p(text);
  Formula f = p.formula();
  if (p.lx.cur.kind != Tok::End)
    throw ParseError(p.lx.cur.span, "trailing input after formula");
  return f;
}

Derivation parse_derivation(std::string_view text) {
  Parser p(text);
  Derivation d = p.derivation();
  if (p.lx.cur.kind != Tok::End)
    throw ParseError(p.lx.cur.span, "trailing input after derivation");
  return d;
}

namespace {

void sexpr(const Derivation& d, std::string& out) {
  out += '(';
  out += rule_name(d.rule());
  auto put_formula = [&](const Formula& f) {
    out += ' ';
    const std::string s = to_string(f);
    const bool atomic = s.find(' ') == std::string::npos;
    if (atomic) {
      out += s;
    } else {
      out += '(';
      out += s;
      out += ')';
    }
  };
  auto put_label = [&](Label l) {
    out += ' ';
    out += std::to_string(l);
  };
  auto put_child = [&](const Derivation& c) {
    out += ' ';
    sexpr(c, out);
  };
  switch (d.rule()) {
    case Rule::Assume:
      put_formula(d.conclusion());
      if (d.label() != kNoLabel) put_label(d.label());
      break;
    case Rule::AndI:
      put_child(d.child(0));
      put_child(d.child(1));
      break;
    case Rule::AndEL:
    case Rule::AndER:
    case Rule::BoxE:
      put_child(d.child(0));
      break;
    case Rule::OrIL:
    case Rule::OrIR:
      put_formula(d.aux());
      put_child(d.child(0));
      break;
    case Rule::OrE:
      put_child(d.child(0));
      put_label(d.label());
      put_child(d.child(1));
      put_label(d.label2());
      put_child(d.child(2));
      break;
    case Rule::ImpI:
      put_formula(d.aux());
      put_label(d.label());
      put_child(d.child(0));
      break;
    case Rule::ImpE:
      put_child(d.child(0));
      put_child(d.child(1));
      break;
    case Rule::BotC:
      put_formula(d.aux());
      put_label(d.label());
      put_child(d.child(0));
      break;
    case Rule::BoxI: {
      out += " (";
      for (std::size_t i = 0; i + 1 < d.arity(); ++i) {
        if (i) out += ' ';
        sexpr(d.child(i), out);
      }
      out += ')';
      put_label(d.label());
      put_child(d.box_minor());
      break;
    }
  }
  out += ')';
}

std::string rule_tag(const Derivation& d) {
  switch (d.rule()) {
    case Rule::Assume: return "";
    case Rule::AndI: return "&I";
    case Rule::AndEL: return "&El";
    case Rule::AndER: return "&Er";
    case Rule::OrIL: return "|Il";
    case Rule::OrIR: return "|Ir";
    case Rule::OrE: return "|E " + std::to_string(d.label()) + "," + std::to_string(d.label2());
    case Rule::ImpI: return "->I " + std::to_string(d.label());
    case Rule::ImpE: return "->E";
    case Rule::BotC: return "botC " + std::to_string(d.label());
    case Rule::BoxE: return "[]E";
    case Rule::BoxI: return "[]I " + std::to_string(d.label());
  }
  return "";
}

struct Block {
  std::vector<std::string> lines;
  std::size_t width = 0;
};

Block pad(Block b, std::size_t w) {
  for (auto& l : b.lines) {
    const std::size_t extra = w > l.size() ? w - l.size() : 0;
    const std::size_t left = extra / 2;
    l = std::string(left, ' ') + l + std::string(extra - left, ' ');
  }
  b.width = w;
  return b;
}

Block hjoin(const std::vector<Block>& blocks) {
  Block out;
  std::size_t height = 0;
  for (const auto& b : blocks) height = std::max(height, b.lines.size());
  out.lines.assign(height, "");
  for (std::size_t bi = 0; bi < blocks.size(); ++bi) {
    const Block& b = blocks[bi];
    const std::size_t top = height - b.lines.size();  // bottom-align premisses
    for (std::size_t i = 0; i < height; ++i) {
      std::string piece = i >= top ? b.lines[i - top] : std::string(b.width, ' ');
      piece.resize(b.width, ' ');
      out.lines[i] += piece;
      if (bi + 1 < blocks.size()) out.lines[i] += "   ";
    }
  }
  out.width = out.lines.empty() ? 0 : out.lines[0].size();
  return out;
}

Block ascii(const Derivation& d) {
  if (d.is_assume()) {
    std::string s = d.label() != kNoLabel
                        ? "[" + to_string(d.conclusion()) + "]^" + std::to_string(d.label())
                        : to_string(d.conclusion());
    return {{s}, s.size()};
  }
  std::vector<Block> kids;
  for (const auto& c : d.children()) kids.push_back(ascii(c));
  Block top = hjoin(kids);
  const std::string concl = to_string(d.conclusion());
  const std::size_t w = std::max(top.width, concl.size());
  top = pad(std::move(top), w);
  Block out = top;
  out.lines.push_back(std::string(w, '-') + " " + rule_tag(d));
  std::string c = concl;
  const std::size_t extra = w - c.size();
  const std::size_t left = extra / 2;
  out.lines.push_back(std::string(left, ' ') + c + std::string(extra - left, ' '));
  out.width = std::max(w, out.lines[out.lines.size() - 2].size());
  return out;
}

std::string latex_rule(const Derivation& d) {
  switch (d.rule()) {
    case Rule::AndI: return "$\\wedge$-I";
    case Rule::AndEL: case Rule::AndER: return "$\\wedge$-E";
    case Rule::OrIL: case Rule::OrIR: return "$\\vee$-I";
    case Rule::OrE: return "$\\vee$-E " + std::to_string(d.label()) + "," + std::to_string(d.label2());
    case Rule::ImpI: return "$\\to$-I " + std::to_string(d.label());
    case Rule::ImpE: return "$\\to$-E";
    case Rule::BotC: return "$\\bot_c$ " + std::to_string(d.label());
    case Rule::BoxE: return "$\\Box$-E";
    case Rule::BoxI: return "$\\Box$-I " + std::to_string(d.label());
    default: return "";
  }
}

void latex(const Derivation& d, std::string& out) {
  if (d.is_assume()) {
    out += "\\AxiomC{$";
    if (d.label() != kNoLabel)
      out += "[" + to_latex(d.conclusion()) + "]^{" + std::to_string(d.label()) + "}";
    else
      out += to_latex(d.conclusion());
    out += "$}\n";
    return;
  }
  for (const auto& c : d.children()) latex(c, out);
  if (d.arity() > 5) throw StructureError("latex renderer supports at most five premisses");
  static const char* kInf[] = {"", "\\UnaryInfC", "\\BinaryInfC", "\\TrinaryInfC",
                               "\\QuaternaryInfC", "\\QuinaryInfC"};
  out += "\\RightLabel{\\scriptsize{" + latex_rule(d) + "}}\n";
  out += std::string(kInf[d.arity()]) + "{$" + to_latex(d.conclusion()) + "$}\n";
}

}  // namespace

std::string render(const Derivation& d, RenderFormat format) {
  switch (format) {
    case RenderFormat::CanonicalSexpr: {
      std::string out;
      sexpr(d, out);
      return out;
    }
    case RenderFormat::AsciiTree: {
      Block b = ascii(d);
      std::string out;
      for (auto& l : b.lines) {
        while (!l.empty() && l.back() == ' ') l.pop_back();
        out += l;
        out += '\n';
      }
      return out;
    }
    case RenderFormat::LatexTree: {
      std::string out = "\\begin{prooftree}\n";
      latex(d, out);
      out += "\\end{prooftree}\n";
      return out;
    }
  }
  return "";
}

}  // namespace ns4
