#include "ns4/formula.hpp"

#include <utility>

namespace ns4 {

Formula Formula::atom(std::string name) {
  auto p = std::make_shared<Node>();
  p->kind = Kind::Atom;
  p->name = std::move(name);
  return Formula(std::move(p));
}

Formula Formula::bottom() {
  static const Formula b = [] {
    auto p = std::make_shared<Node>();
    p->kind = Kind::Bottom;
    p->essentially_modal = true;  // no atom occurrences
    return Formula(std::move(p));
  }();
  return b;
}

Formula Formula::conj(Formula l, Formula r) {
  auto p = std::make_shared<Node>();
  p->kind = Kind::And;
  p->degree = degree(l) + degree(r) + 1;
  p->essentially_modal = is_essentially_modal(l) && is_essentially_modal(r);
  p->left = l.node_;
  p->right = r.node_;
  return Formula(std::move(p));
}

Formula Formula::disj(Formula l, Formula r) {
  auto p = std::make_shared<Node>();
  p->kind = Kind::Or;
  p->degree = degree(l) + degree(r) + 1;
  p->essentially_modal = is_essentially_modal(l) && is_essentially_modal(r);
  p->left = l.node_;
  p->right = r.node_;
  return Formula(std::move(p));
}

Formula Formula::imp(Formula l, Formula r) {
  auto p = std::make_shared<Node>();
  p->kind = Kind::Imp;
  p->degree = degree(l) + degree(r) + 1;
  p->essentially_modal = is_essentially_modal(l) && is_essentially_modal(r);
  p->left = l.node_;
  p->right = r.node_;
  return Formula(std::move(p));
}

Formula Formula::box(Formula inner) {
  auto p = std::make_shared<Node>();
  p->kind = Kind::Box;
  p->degree = degree(inner) + 1;
  p->essentially_modal = true;  // everything below is in the scope of this box
  p->left = inner.node_;
  return Formula(std::move(p));
}

int degree(const Formula& f) { return f.node_->degree; }
bool is_essentially_modal(const Formula& f) { return f.node_->essentially_modal; }

Formula neg(const Formula& f) { return Formula::imp(f, Formula::bottom()); }

int compare(const Formula& a, const Formula& b) {
  if (a.node_ == b.node_) return 0;
  if (!a.node_ || !b.node_) return !a.node_ ? -1 : 1;
  const int ka = static_cast<int>(a.kind()), kb = static_cast<int>(b.kind());
  if (ka != kb) return ka < kb ? -1 : 1;
  switch (a.kind()) {
    case Formula::Kind::Bottom:
      return 0;
    case Formula::Kind::Atom:
      return a.atom_name().compare(b.atom_name());
    case Formula::Kind::Box:
      return compare(a.inner(), b.inner());
    default: {
      const int c = compare(a.left(), b.left());
      return c != 0 ? c : compare(a.right(), b.right());
    }
  }
}

bool Formula::operator==(const Formula& o) const { return compare(*this, o) == 0; }
bool Formula::operator<(const Formula& o) const { return compare(*this, o) < 0; }

namespace {

// Precedence levels: -> is 1 (right associative), | is 2, & is 3, unary 4.
void print(const Formula& f, int min_prec, std::string& out) {
  switch (f.kind()) {
    case Formula::Kind::Atom:
      out += f.atom_name();
      return;
    case Formula::Kind::Bottom:
      out += "bot";
      return;
    case Formula::Kind::Box:
      out += "[]";
      print(f.inner(), 4, out);
      return;
    case Formula::Kind::Imp:
      if (f.right().is_bottom()) {  // sugar
        out += '~';
        print(f.left(), 4, out);
        return;
      }
      if (min_prec > 1) out += '(';
      print(f.left(), 2, out);
      out += " -> ";
      print(f.right(), 1, out);
      if (min_prec > 1) out += ')';
      return;
    case Formula::Kind::Or:
      if (min_prec > 2) out += '(';
      print(f.left(), 2, out);
      out += " | ";
      print(f.right(), 3, out);
      if (min_prec > 2) out += ')';
      return;
    case Formula::Kind::And:
      if (min_prec > 3) out += '(';
      print(f.left(), 3, out);
      out += " & ";
      print(f.right(), 4, out);
      if (min_prec > 3) out += ')';
      return;
  }
}

void print_latex(const Formula& f, int min_prec, std::string& out) {
  switch (f.kind()) {
    case Formula::Kind::Atom:
      out += f.atom_name();
      return;
    case Formula::Kind::Bottom:
      out += "\\bot";
      return;
    case Formula::Kind::Box:
      out += "\\Box ";
      print_latex(f.inner(), 4, out);
      return;
    case Formula::Kind::Imp:
      if (f.right().is_bottom()) {
        out += "\\neg ";
        print_latex(f.left(), 4, out);
        return;
      }
      if (min_prec > 1) out += '(';
      print_latex(f.left(), 2, out);
      out += " \\to ";
      print_latex(f.right(), 1, out);
      if (min_prec > 1) out += ')';
      return;
    case Formula::Kind::Or:
      if (min_prec > 2) out += '(';
      print_latex(f.left(), 2, out);
      out += " \\vee ";
      print_latex(f.right(), 3, out);
      if (min_prec > 2) out += ')';
      return;
    case Formula::Kind::And:
      if (min_prec > 3) out += '(';
      print_latex(f.left(), 3, out);
      out += " \\wedge ";
      print_latex(f.right(), 4, out);
      if (min_prec > 3) out += ')';
      return;
  }
}

}  // namespace

std::string to_string(const Formula& f) {
  std::string out;
  print(f, 0, out);
  return out;
}

std::string to_latex(const Formula& f) {
  std::string out;
  print_latex(f, 0, out);
  return out;
}

}  // namespace ns4
