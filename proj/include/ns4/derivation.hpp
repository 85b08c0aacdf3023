#pragma once

#include <cstddef>
#include <memory>
#include <set>
#include <stdexcept>
#include <string>
#include <vector>

#include "ns4/formula.hpp"

namespace ns4 {

// Discharge label. Positive; 0 means "no label" on an assumption.
using Label = int;
constexpr Label kNoLabel = 0;

// Byte range into a source text; attached to parsed nodes, zero otherwise.
struct SourceSpan {
  std::size_t begin = 0;
  std::size_t end = 0;
};

// Position of a node inside a derivation: child indices from the root.
using Path = std::vector<int>;
std::string path_to_string(const Path& p);

struct StructureError : std::runtime_error {
  explicit StructureError(const std::string& what) : std::runtime_error(what) {}
};
struct SubstitutionError : std::runtime_error {
  explicit SubstitutionError(const std::string& what) : std::runtime_error(what) {}
};

enum class Rule { Assume, AndI, AndEL, AndER, OrIL, OrIR, OrE, ImpI, ImpE, BotC, BoxE, BoxI };
const char* rule_name(Rule r);
bool is_elimination(Rule r);   // &E, |E, ->E, []E
bool is_introduction(Rule r);  // &I, |I, ->I, []I

// Inference tree. Every node carries its conclusion; conclusions are
// computed by the factories, so a Derivation is always locally coherent.
// Discharge conditions and the box-intro restrictions are *not* enforced
// here; checkers report them (see check.hpp).
//
// Children layout:
//   AndI          [left, right]
//   AndEL/AndER   [premiss]
//   OrIL/OrIR     [premiss]            aux = the other disjunct
//   OrE           [major, left, right] label/label2 discharge the cases
//   ImpI          [body]               aux = antecedent, label
//   ImpE          [major, minor]
//   BotC          [body]               aux = target, label discharges ~target
//   BoxE          [major]
//   BoxI          [major..., minor]    label discharges the box assumptions
//
// Immutable; cheap to copy and safe to share across threads.
class Derivation {
 public:
  static Derivation assume(Formula f, Label l = kNoLabel);
  static Derivation and_i(Derivation l, Derivation r);
  static Derivation and_el(Derivation p);
  static Derivation and_er(Derivation p);
  static Derivation or_il(Formula right_disjunct, Derivation p);
  static Derivation or_ir(Formula left_disjunct, Derivation p);
  static Derivation or_e(Derivation major, Label l1, Derivation left, Label l2, Derivation right);
  static Derivation imp_i(Formula antecedent, Label k, Derivation body);
  static Derivation imp_e(Derivation major, Derivation minor);
  static Derivation bot_c(Formula target, Label k, Derivation body);
  static Derivation box_e(Derivation major);
  static Derivation box_i(std::vector<Derivation> majors, Label k, Derivation minor);

  Rule rule() const { return node_->rule; }
  const Formula& conclusion() const { return node_->conclusion; }
  std::size_t arity() const { return node_->children.size(); }
  const Derivation& child(std::size_t i) const { return node_->children[i]; }
  const std::vector<Derivation>& children() const { return node_->children; }
  const Formula& aux() const { return node_->aux; }
  Label label() const { return node_->label; }
  Label label2() const { return node_->label2; }

  // BoxI helpers.
  std::size_t box_major_count() const { return arity() - 1; }
  const Derivation& box_minor() const { return node_->children.back(); }

  bool is_assume() const { return rule() == Rule::Assume; }

  SourceSpan span() const { return node_->span; }
  Derivation with_span(SourceSpan s) const;

  bool same_node(const Derivation& o) const { return node_ == o.node_; }
  const void* id() const { return node_.get(); }

 private:
  struct Node {
    Rule rule;
    Formula conclusion;
    Formula aux;
    Label label = kNoLabel;
    Label label2 = kNoLabel;
    std::vector<Derivation> children;
    SourceSpan span;
  };
  Derivation() = default;
  explicit Derivation(std::shared_ptr<const Node> n) : node_(std::move(n)) {}
  std::shared_ptr<const Node> node_;
};

// Labels a node discharges (0, 1 or 2 of them) and the child index whose
// subtree is the scope of each.
struct DischargeSlot {
  Label label;
  int scope_child;
};
std::vector<DischargeSlot> discharge_slots(const Derivation& d);

struct OpenLeaf {
  Path path;
  Formula formula;
  Label label;  // kNoLabel when plain
};

// Assume leaves not discharged by any node of d, in preorder.
std::vector<OpenLeaf> open_leaves(const Derivation& d);

// Multiset of open assumption formulas, sorted.
std::vector<Formula> open_assumptions(const Derivation& d);

std::set<Label> all_labels(const Derivation& d);    // every label mentioned
std::set<Label> bound_labels(const Derivation& d);  // labels with a discharging node in d

int node_count(const Derivation& d);

Derivation subtree_at(const Derivation& d, const Path& p);
Derivation replace_at(const Derivation& d, const Path& p, const Derivation& repl);

// Grafts a fresh-relabeled copy of `replacement` over every leaf
// (assume F l). Requires conclusion(replacement) == F for each such leaf.
Derivation substitute(const Derivation& d, Label l, const Derivation& replacement);

// Injectively renames every label of d away from `avoid`; binding
// structure is preserved.
Derivation fresh_relabel(const Derivation& d, const std::set<Label>& avoid);

// Strict structural equality, labels included.
bool equal(const Derivation& a, const Derivation& b);

// Equality modulo a bijection on labels (binding-preserving).
bool equal_up_to_relabeling(const Derivation& a, const Derivation& b);

// Monotone label supply used by the rewriting code.
class LabelAlloc {
 public:
  explicit LabelAlloc(Label start = 1) : next_(start) {}
  explicit LabelAlloc(const std::set<Label>& avoid);
  Label fresh() { return next_++; }
  void reserve(const std::set<Label>& more);

 private:
  Label next_;
};

// Copy of d with the labels bound inside d renamed to fresh ones; labels
// bound by enclosing context are untouched.
Derivation relabel_bound(const Derivation& d, LabelAlloc& alloc);

// Copy of d applying an explicit label map (labels absent from the map
// are kept).
Derivation relabel_map(const Derivation& d, const std::vector<std::pair<Label, Label>>& map);

}  // namespace ns4
