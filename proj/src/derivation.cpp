#include "ns4/derivation.hpp"

#include <algorithm>
#include <map>

namespace ns4 {

std::string path_to_string(const Path& p) {
  if (p.empty()) return "root";
  std::string s;
  for (std::size_t i = 0; i < p.size(); ++i) {
    if (i) s += '.';
    s += std::to_string(p[i]);
  }
  return s;
}

const char* rule_name(Rule r) {
  switch (r) {
    case Rule::Assume: return "assume";
    case Rule::AndI: return "andI";
    case Rule::AndEL: return "andEl";
    case Rule::AndER: return "andEr";
    case Rule::OrIL: return "orIl";
    case Rule::OrIR: return "orIr";
    case Rule::OrE: return "orE";
    case Rule::ImpI: return "impI";
    case Rule::ImpE: return "impE";
    case Rule::BotC: return "botC";
    case Rule::BoxE: return "boxE";
    case Rule::BoxI: return "boxI";
  }
  return "?";
}

bool is_elimination(Rule r) {
  switch (r) {
    case Rule::AndEL: case Rule::AndER: case Rule::OrE: case Rule::ImpE: case Rule::BoxE:
      return true;
    default:
      return false;
  }
}

bool is_introduction(Rule r) {
  switch (r) {
    case Rule::AndI: case Rule::OrIL: case Rule::OrIR: case Rule::ImpI: case Rule::BoxI:
      return true;
    default:
      return false;
  }
}

namespace {

[[noreturn]] void bad(const std::string& what) { throw StructureError(what); }

void require_label(Label l, const char* where) {
  if (l <= 0) bad(std::string(where) + ": discharge label must be positive");
}

}  // namespace

Derivation Derivation::assume(Formula f, Label l) {
  if (l < 0) bad("assume: label must be positive or absent");
  auto n = std::make_shared<Node>();
  n->rule = Rule::Assume;
  n->conclusion = f;
  n->aux = f;
  n->label = l;
  return Derivation(std::move(n));
}

Derivation Derivation::and_i(Derivation l, Derivation r) {
  auto n = std::make_shared<Node>();
  n->rule = Rule::AndI;
  n->conclusion = Formula::conj(l.conclusion(), r.conclusion());
  n->children = {std::move(l), std::move(r)};
  return Derivation(std::move(n));
}

Derivation Derivation::and_el(Derivation p) {
  if (p.conclusion().kind() != Formula::Kind::And)
    bad("andEl: major premiss must conclude a conjunction, got " + to_string(p.conclusion()));
  auto n = std::make_shared<Node>();
  n->rule = Rule::AndEL;
  n->conclusion = p.conclusion().left();
  n->children = {std::move(p)};
  return Derivation(std::move(n));
}

Derivation Derivation::and_er(Derivation p) {
  if (p.conclusion().kind() != Formula::Kind::And)
    bad("andEr: major premiss must conclude a conjunction, got " + to_string(p.conclusion()));
  auto n = std::make_shared<Node>();
  n->rule = Rule::AndER;
  n->conclusion = p.conclusion().right();
  n->children = {std::move(p)};
  return Derivation(std::move(n));
}

Derivation Derivation::or_il(Formula right_disjunct, Derivation p) {
  auto n = std::make_shared<Node>();
  n->rule = Rule::OrIL;
  n->conclusion = Formula::disj(p.conclusion(), right_disjunct);
  n->aux = std::move(right_disjunct);
  n->children = {std::move(p)};
  return Derivation(std::move(n));
}

Derivation Derivation::or_ir(Formula left_disjunct, Derivation p) {
  auto n = std::make_shared<Node>();
  n->rule = Rule::OrIR;
  n->conclusion = Formula::disj(left_disjunct, p.conclusion());
  n->aux = std::move(left_disjunct);
  n->children = {std::move(p)};
  return Derivation(std::move(n));
}

Derivation Derivation::or_e(Derivation major, Label l1, Derivation left, Label l2, Derivation right) {
  if (major.conclusion().kind() != Formula::Kind::Or)
    bad("orE: major premiss must conclude a disjunction, got " + to_string(major.conclusion()));
  require_label(l1, "orE");
  require_label(l2, "orE");
  if (l1 == l2) bad("orE: the two case labels must differ");
  if (left.conclusion() != right.conclusion())
    bad("orE: case conclusions differ: " + to_string(left.conclusion()) + " vs " +
        to_string(right.conclusion()));
  auto n = std::make_shared<Node>();
  n->rule = Rule::OrE;
  n->conclusion = left.conclusion();
  n->label = l1;
  n->label2 = l2;
  n->children = {std::move(major), std::move(left), std::move(right)};
  return Derivation(std::move(n));
}

Derivation Derivation::imp_i(Formula antecedent, Label k, Derivation body) {
  require_label(k, "impI");
  auto n = std::make_shared<Node>();
  n->rule = Rule::ImpI;
  n->conclusion = Formula::imp(antecedent, body.conclusion());
  n->aux = std::move(antecedent);
  n->label = k;
  n->children = {std::move(body)};
  return Derivation(std::move(n));
}

Derivation Derivation::imp_e(Derivation major, Derivation minor) {
  if (major.conclusion().kind() != Formula::Kind::Imp)
    bad("impE: major premiss must conclude an implication, got " + to_string(major.conclusion()));
  if (minor.conclusion() != major.conclusion().left())
    bad("impE: minor premiss must conclude the antecedent: expected " +
        to_string(major.conclusion().left()) + ", got " + to_string(minor.conclusion()));
  auto n = std::make_shared<Node>();
  n->rule = Rule::ImpE;
  n->conclusion = major.conclusion().right();
  n->children = {std::move(major), std::move(minor)};
  return Derivation(std::move(n));
}

Derivation Derivation::bot_c(Formula target, Label k, Derivation body) {
  require_label(k, "botC");
  if (!body.conclusion().is_bottom())
    bad("botC: body must conclude bot, got " + to_string(body.conclusion()));
  auto n = std::make_shared<Node>();
  n->rule = Rule::BotC;
  n->conclusion = target;
  n->aux = std::move(target);
  n->label = k;
  n->children = {std::move(body)};
  return Derivation(std::move(n));
}

Derivation Derivation::box_e(Derivation major) {
  if (!major.conclusion().is_box())
    bad("boxE: major premiss must conclude a box formula, got " + to_string(major.conclusion()));
  auto n = std::make_shared<Node>();
  n->rule = Rule::BoxE;
  n->conclusion = major.conclusion().inner();
  n->children = {std::move(major)};
  return Derivation(std::move(n));
}

Derivation Derivation::box_i(std::vector<Derivation> majors, Label k, Derivation minor) {
  require_label(k, "boxI");
  for (const auto& m : majors)
    if (!m.conclusion().is_box())
      bad("boxI: every major premiss must conclude a box formula, got " + to_string(m.conclusion()));
  auto n = std::make_shared<Node>();
  n->rule = Rule::BoxI;
  n->conclusion = Formula::box(minor.conclusion());
  n->label = k;
  n->children = std::move(majors);
  n->children.push_back(std::move(minor));
  return Derivation(std::move(n));
}

Derivation Derivation::with_span(SourceSpan s) const {
  auto n = std::make_shared<Node>(*node_);
  n->span = s;
  return Derivation(std::move(n));
}

std::vector<DischargeSlot> discharge_slots(const Derivation& d) {
  switch (d.rule()) {
    case Rule::ImpI:
    case Rule::BotC:
      return {{d.label(), 0}};
    case Rule::OrE:
      return {{d.label(), 1}, {d.label2(), 2}};
    case Rule::BoxI:
      return {{d.label(), static_cast<int>(d.arity()) - 1}};
    default:
      return {};
  }
}

namespace {

void collect_open(const Derivation& d, Path& path, std::set<Label>& bound,
                  std::vector<OpenLeaf>& out) {
  if (d.is_assume()) {
    if (d.label() == kNoLabel || !bound.count(d.label()))
      out.push_back({path, d.conclusion(), d.label()});
    return;
  }
  const auto slots = discharge_slots(d);
  for (std::size_t i = 0; i < d.arity(); ++i) {
    std::vector<Label> added;
    for (const auto& s : slots)
      if (s.scope_child == static_cast<int>(i) && bound.insert(s.label).second)
        added.push_back(s.label);
    path.push_back(static_cast<int>(i));
    collect_open(d.child(i), path, bound, out);
    path.pop_back();
    for (Label l : added) bound.erase(l);
  }
}

}  // namespace

std::vector<OpenLeaf> open_leaves(const Derivation& d) {
  std::vector<OpenLeaf> out;
  Path path;
  std::set<Label> bound;
  collect_open(d, path, bound, out);
  return out;
}

std::vector<Formula> open_assumptions(const Derivation& d) {
  std::vector<Formula> out;
  for (const auto& l : open_leaves(d)) out.push_back(l.formula);
  std::sort(out.begin(), out.end());
  return out;
}

namespace {

void collect_labels(const Derivation& d, std::set<Label>& all, std::set<Label>& bound) {
  if (d.is_assume() && d.label() != kNoLabel) all.insert(d.label());
  for (const auto& s : discharge_slots(d)) {
    all.insert(s.label);
    bound.insert(s.label);
  }
  for (const auto& c : d.children()) collect_labels(c, all, bound);
}

}  // namespace

std::set<Label> all_labels(const Derivation& d) {
  std::set<Label> all, bound;
  collect_labels(d, all, bound);
  return all;
}

std::set<Label> bound_labels(const Derivation& d) {
  std::set<Label> all, bound;
  collect_labels(d, all, bound);
  return bound;
}

int node_count(const Derivation& d) {
  int n = 1;
  for (const auto& c : d.children()) n += node_count(c);
  return n;
}

Derivation subtree_at(const Derivation& d, const Path& p) {
  Derivation cur = d;
  for (int i : p) {
    if (i < 0 || static_cast<std::size_t>(i) >= cur.arity())
      throw StructureError("subtree_at: path " + path_to_string(p) + " out of range");
    cur = cur.child(i);
  }
  return cur;
}

namespace {

// Rebuilds d with new children, reusing the factories so conclusions stay
// coherent. aux/labels are carried over.
Derivation rebuild(const Derivation& d, std::vector<Derivation> kids) {
  switch (d.rule()) {
    case Rule::Assume: return d;
    case Rule::AndI: return Derivation::and_i(kids[0], kids[1]);
    case Rule::AndEL: return Derivation::and_el(kids[0]);
    case Rule::AndER: return Derivation::and_er(kids[0]);
    case Rule::OrIL: return Derivation::or_il(d.aux(), kids[0]);
    case Rule::OrIR: return Derivation::or_ir(d.aux(), kids[0]);
    case Rule::OrE: return Derivation::or_e(kids[0], d.label(), kids[1], d.label2(), kids[2]);
    case Rule::ImpI: return Derivation::imp_i(d.aux(), d.label(), kids[0]);
    case Rule::ImpE: return Derivation::imp_e(kids[0], kids[1]);
    case Rule::BotC: return Derivation::bot_c(d.aux(), d.label(), kids[0]);
    case Rule::BoxE: return Derivation::box_e(kids[0]);
    case Rule::BoxI: {
      Derivation minor = kids.back();
      kids.pop_back();
      return Derivation::box_i(std::move(kids), d.label(), minor);
    }
  }
  throw StructureError("rebuild: bad rule");
}

}  // namespace

Derivation replace_at(const Derivation& d, const Path& p, const Derivation& repl) {
  if (p.empty()) return repl;
  std::vector<Derivation> kids = d.children();
  Path rest(p.begin() + 1, p.end());
  if (p[0] < 0 || static_cast<std::size_t>(p[0]) >= kids.size())
    throw StructureError("replace_at: path out of range");
  kids[p[0]] = replace_at(kids[p[0]], rest, repl);
  return rebuild(d, std::move(kids));
}

LabelAlloc::LabelAlloc(const std::set<Label>& avoid)
    : next_(avoid.empty() ? 1 : *avoid.rbegin() + 1) {}

void LabelAlloc::reserve(const std::set<Label>& more) {
  if (!more.empty() && *more.rbegin() >= next_) next_ = *more.rbegin() + 1;
}

namespace {

Derivation apply_label_map(const Derivation& d, const std::map<Label, Label>& m) {
  if (d.is_assume()) {
    Label l = d.label();
    auto it = m.find(l);
    if (it == m.end()) return d;
    return Derivation::assume(d.conclusion(), it->second);
  }
  std::vector<Derivation> kids;
  kids.reserve(d.arity());
  for (const auto& c : d.children()) kids.push_back(apply_label_map(c, m));
  auto mapped = [&](Label l) {
    auto it = m.find(l);
    return it == m.end() ? l : it->second;
  };
  switch (d.rule()) {
    case Rule::OrE:
      return Derivation::or_e(kids[0], mapped(d.label()), kids[1], mapped(d.label2()), kids[2]);
    case Rule::ImpI:
      return Derivation::imp_i(d.aux(), mapped(d.label()), kids[0]);
    case Rule::BotC:
      return Derivation::bot_c(d.aux(), mapped(d.label()), kids[0]);
    case Rule::BoxI: {
      Derivation minor = kids.back();
      kids.pop_back();
      return Derivation::box_i(std::move(kids), mapped(d.label()), minor);
    }
    default:
      return rebuild(d, std::move(kids));
  }
}

}  // namespace

Derivation relabel_map(const Derivation& d, const std::vector<std::pair<Label, Label>>& map) {
  std::map<Label, Label> m(map.begin(), map.end());
  return apply_label_map(d, m);
}

Derivation relabel_bound(const Derivation& d, LabelAlloc& alloc) {
  std::map<Label, Label> m;
  for (Label l : bound_labels(d)) m[l] = alloc.fresh();
  if (m.empty()) return d;
  return apply_label_map(d, m);
}

Derivation fresh_relabel(const Derivation& d, const std::set<Label>& avoid) {
  std::set<Label> ours = all_labels(d);
  std::set<Label> both = avoid;
  both.insert(ours.begin(), ours.end());
  LabelAlloc alloc(both);
  std::map<Label, Label> m;
  for (Label l : ours) m[l] = alloc.fresh();
  return apply_label_map(d, m);
}

namespace {

void subst_impl(const Derivation& d, Label l, const Derivation& repl, LabelAlloc& alloc,
                Derivation& out, bool& changed) {
  if (d.is_assume()) {
    if (d.label() == l) {
      if (d.conclusion() != repl.conclusion())
        throw SubstitutionError("substitute: leaf concludes " + to_string(d.conclusion()) +
                                " but replacement concludes " + to_string(repl.conclusion()));
      out = relabel_bound(repl, alloc);
      changed = true;
      return;
    }
    out = d;
    return;
  }
  std::vector<Derivation> kids;
  kids.reserve(d.arity());
  bool any = false;
  for (const auto& c : d.children()) {
    Derivation k = c;
    bool ch = false;
    subst_impl(c, l, repl, alloc, k, ch);
    any = any || ch;
    kids.push_back(std::move(k));
  }
  out = any ? rebuild(d, std::move(kids)) : d;
  changed = changed || any;
}

}  // namespace

Derivation substitute(const Derivation& d, Label l, const Derivation& replacement) {
  std::set<Label> avoid = all_labels(d);
  for (Label x : all_labels(replacement)) avoid.insert(x);
  LabelAlloc alloc(avoid);
  Derivation out = d;
  bool changed = false;
  subst_impl(d, l, replacement, alloc, out, changed);
  return out;
}

bool equal(const Derivation& a, const Derivation& b) {
  if (a.same_node(b)) return true;
  if (a.rule() != b.rule() || a.arity() != b.arity()) return false;
  if (a.conclusion() != b.conclusion()) return false;
  if (a.label() != b.label() || a.label2() != b.label2()) return false;
  if (a.rule() == Rule::ImpI || a.rule() == Rule::BotC || a.rule() == Rule::OrIL ||
      a.rule() == Rule::OrIR) {
    if (a.aux() != b.aux()) return false;
  }
  for (std::size_t i = 0; i < a.arity(); ++i)
    if (!equal(a.child(i), b.child(i))) return false;
  return true;
}

namespace {

bool map_labels(Label la, Label lb, std::map<Label, Label>& ab, std::map<Label, Label>& ba) {
  if ((la == kNoLabel) != (lb == kNoLabel)) return false;
  if (la == kNoLabel) return true;
  auto ia = ab.find(la);
  auto ib = ba.find(lb);
  if (ia == ab.end() && ib == ba.end()) {
    ab[la] = lb;
    ba[lb] = la;
    return true;
  }
  return ia != ab.end() && ib != ba.end() && ia->second == lb && ib->second == la;
}

bool iso(const Derivation& a, const Derivation& b, std::map<Label, Label>& ab,
         std::map<Label, Label>& ba) {
  if (a.rule() != b.rule() || a.arity() != b.arity()) return false;
  if (a.conclusion() != b.conclusion()) return false;
  if (a.rule() == Rule::ImpI || a.rule() == Rule::BotC || a.rule() == Rule::OrIL ||
      a.rule() == Rule::OrIR) {
    if (a.aux() != b.aux()) return false;
  }
  if (!map_labels(a.label(), b.label(), ab, ba)) return false;
  if (!map_labels(a.label2(), b.label2(), ab, ba)) return false;
  for (std::size_t i = 0; i < a.arity(); ++i)
    if (!iso(a.child(i), b.child(i), ab, ba)) return false;
  return true;
}

}  // namespace

bool equal_up_to_relabeling(const Derivation& a, const Derivation& b) {
  std::map<Label, Label> ab, ba;
  return iso(a, b, ab, ba);
}

}  // namespace ns4
