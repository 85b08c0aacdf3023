#pragma once

#include <memory>
#include <string>

namespace ns4 {

// Propositional modal formulas over &, |, ->, bot and [].
// Negation is sugar: ~A is represented as A -> bot.
//
// Values are immutable shared handles; structural equality throughout.
class Formula {
 public:
  enum class Kind { Atom, Bottom, And, Or, Imp, Box };

  static Formula atom(std::string name);
  static Formula bottom();
  static Formula conj(Formula l, Formula r);
  static Formula disj(Formula l, Formula r);
  static Formula imp(Formula l, Formula r);
  static Formula box(Formula inner);

  Kind kind() const { return node_->kind; }
  const std::string& atom_name() const { return node_->name; }
  Formula left() const { return Formula(node_->left); }
  Formula right() const { return Formula(node_->right); }
  Formula inner() const { return Formula(node_->left); }

  bool is_box() const { return kind() == Kind::Box; }
  bool is_bottom() const { return kind() == Kind::Bottom; }
  bool is_imp() const { return kind() == Kind::Imp; }

  bool operator==(const Formula& o) const;
  bool operator!=(const Formula& o) const { return !(*this == o); }
  bool operator<(const Formula& o) const;

  // Empty handle; compares below every formula. Factories never return it.
  Formula() = default;
  bool empty() const { return node_ == nullptr; }

 private:
  struct Node {
    Kind kind;
    std::string name;  // Atom
    std::shared_ptr<const Node> left, right;
    int degree = 0;
    bool essentially_modal = false;
  };

  explicit Formula(std::shared_ptr<const Node> n) : node_(std::move(n)) {}
  std::shared_ptr<const Node> node_;

  friend int compare(const Formula& a, const Formula& b);
  friend int degree(const Formula& f);
  friend bool is_essentially_modal(const Formula& f);
};

// Total structural order; negative/zero/positive like strcmp.
int compare(const Formula& a, const Formula& b);

// Count of occurrences of &, |, -> and [] (bot and atoms contribute 0).
int degree(const Formula& f);

// True iff every atom occurrence lies beneath at least one box.
// bot imposes no constraint.
bool is_essentially_modal(const Formula& f);

// ~f, i.e. f -> bot.
Formula neg(const Formula& f);

// Concrete syntax with minimal parentheses; X -> bot prints as ~X.
std::string to_string(const Formula& f);

// LaTeX math fragment mirroring the usual connective macros.
std::string to_latex(const Formula& f);

struct FormulaLess {
  bool operator()(const Formula& a, const Formula& b) const { return a < b; }
};

}  // namespace ns4
