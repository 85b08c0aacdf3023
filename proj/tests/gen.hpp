#pragma once

#include <optional>
#include <random>
#include <vector>

#include "ns4/analysis.hpp"
#include "ns4/check.hpp"
#include "ns4/derivation.hpp"
#include "ns4/reduce.hpp"

namespace ns4::testgen {

// Goal-directed generator of well-formed derivations. Eliminations are
// introduced as detours so that redexes and classical shapes occur often.
class Gen {
 public:
  explicit Gen(unsigned seed) : rng_(seed) {}

  Formula random_formula(int depth) {
    if (depth <= 0 || chance(0.4)) return chance(0.12) ? Formula::bottom() : atom();
    switch (pick(4)) {
      case 0: return Formula::conj(random_formula(depth - 1), random_formula(depth - 1));
      case 1: return Formula::disj(random_formula(depth - 1), random_formula(depth - 1));
      case 2: return Formula::imp(random_formula(depth - 1), random_formula(depth - 1));
      default: return Formula::box(random_formula(depth - 1));
    }
  }

  // A valid derivation with open assumptions allowed, at most `max_nodes`
  // nodes (retries internally).
  Derivation random_valid(int depth, int max_nodes) {
    for (;;) {
      next_label_ = 1;
      int fuel = max_nodes;
      auto d = derive(random_formula(2), {}, true, depth, fuel);
      if (d && node_count(*d) <= max_nodes) return *d;
    }
  }

  std::mt19937& rng() { return rng_; }

 private:
  std::mt19937 rng_;
  int next_label_ = 1;

  int pick(int n) { return std::uniform_int_distribution<int>(0, n - 1)(rng_); }
  bool chance(double p) { return std::uniform_real_distribution<double>(0, 1)(rng_) < p; }
  Label fresh() { return next_label_++; }

  Formula atom() {
    static const char* names[] = {"a", "b", "c", "p", "q"};
    return Formula::atom(names[pick(5)]);
  }

  struct Hyp {
    Label label;
    Formula f;
  };
  using Ctx = std::vector<Hyp>;

  std::optional<Derivation> leaf(const Formula& f, const Ctx& ctx, bool open) {
    std::vector<const Hyp*> hits;
    for (const auto& h : ctx)
      if (h.f == f) hits.push_back(&h);
    if (!hits.empty() && (!open || chance(0.7)))
      return Derivation::assume(f, hits[pick(static_cast<int>(hits.size()))]->label);
    if (open) return Derivation::assume(f);
    return std::nullopt;
  }

  std::optional<Derivation> derive(const Formula& f, const Ctx& ctx, bool open, int depth,
                                   int& fuel) {
    if (--fuel <= 0 || depth <= 0) return leaf(f, ctx, open);
    const double r = std::uniform_real_distribution<double>(0, 1)(rng_);
    if (r < 0.25) {
      if (auto d = leaf(f, ctx, open)) return d;
    } else if (r < 0.62) {
      if (auto d = intro(f, ctx, open, depth, fuel)) return d;
    } else {
      if (auto d = detour(f, ctx, open, depth, fuel)) return d;
    }
    if (auto d = intro(f, ctx, open, depth, fuel)) return d;
    return leaf(f, ctx, open);
  }

  std::optional<Derivation> intro(const Formula& f, const Ctx& ctx, bool open, int depth,
                                  int& fuel) {
    switch (f.kind()) {
      case Formula::Kind::And: {
        auto l = derive(f.left(), ctx, open, depth - 1, fuel);
        if (!l) return std::nullopt;
        auto r = derive(f.right(), ctx, open, depth - 1, fuel);
        if (!r) return std::nullopt;
        return Derivation::and_i(*l, *r);
      }
      case Formula::Kind::Or: {
        if (chance(0.5)) {
          auto l = derive(f.left(), ctx, open, depth - 1, fuel);
          if (l) return Derivation::or_il(f.right(), *l);
        }
        auto r = derive(f.right(), ctx, open, depth - 1, fuel);
        if (r) return Derivation::or_ir(f.left(), *r);
        return std::nullopt;
      }
      case Formula::Kind::Imp: {
        const Label k = fresh();
        Ctx c2 = ctx;
        c2.push_back({k, f.left()});
        auto b = derive(f.right(), c2, open, depth - 1, fuel);
        if (!b) return std::nullopt;
        return Derivation::imp_i(f.left(), k, *b);
      }
      case Formula::Kind::Box:
        return box_intro(f, ctx, open, depth, fuel);
      case Formula::Kind::Bottom:
        return falsum(ctx, open, depth, fuel);
      case Formula::Kind::Atom:
        return std::nullopt;
    }
    return std::nullopt;
  }

  // Vector-form box introduction: the minor may depend only on the
  // discharged box class.
  std::optional<Derivation> box_intro(const Formula& f, const Ctx& ctx, bool open, int depth,
                                      int& fuel) {
    const Formula x = f.inner();
    const Label k = fresh();
    // richer shape when the content is a conjunction of two distinct parts
    if (x.kind() == Formula::Kind::And && x.left() != x.right() && chance(0.6)) {
      const Formula b1 = Formula::box(x.left()), b2 = Formula::box(x.right());
      auto m1 = derive(b1, ctx, open, depth - 1, fuel);
      auto m2 = derive(b2, ctx, open, depth - 1, fuel);
      if (m1 && m2) {
        Derivation minor = Derivation::and_i(Derivation::box_e(Derivation::assume(b1, k)),
                                             Derivation::box_e(Derivation::assume(b2, k)));
        return Derivation::box_i({*m1, *m2}, k, minor);
      }
    }
    auto mj = derive(f, ctx, open, depth - 1, fuel);
    if (!mj) return std::nullopt;
    // minor derived from the class alone
    Ctx boxed{{k, f}};
    int inner_fuel = std::min(fuel, 12);
    auto minor = derive(x, boxed, false, std::min(depth - 1, 3), inner_fuel);
    if (!minor) minor = Derivation::box_e(Derivation::assume(f, k));
    return Derivation::box_i({*mj}, k, *minor);
  }

  std::optional<Derivation> falsum(const Ctx& ctx, bool open, int depth, int& fuel) {
    // prefer refuting an implication-to-bot hypothesis
    std::vector<const Hyp*> negs;
    for (const auto& h : ctx)
      if (h.f.is_imp() && h.f.right().is_bottom()) negs.push_back(&h);
    if (!negs.empty()) {
      const Hyp* h = negs[pick(static_cast<int>(negs.size()))];
      auto minor = derive(h->f.left(), ctx, open, depth - 1, fuel);
      if (minor) return Derivation::imp_e(Derivation::assume(h->f, h->label), *minor);
    }
    if (open) {
      const Formula g = chance(0.5) ? atom() : random_formula(1);
      auto minor = derive(g, ctx, open, depth - 1, fuel);
      if (minor) return Derivation::imp_e(Derivation::assume(neg(g)), *minor);
    }
    return leaf(Formula::bottom(), ctx, open);
  }

  std::optional<Derivation> detour(const Formula& f, const Ctx& ctx, bool open, int depth,
                                   int& fuel) {
    switch (pick(5)) {
      case 0: {  // via conjunction
        const Formula g = random_formula(1);
        auto d = derive(chance(0.5) ? Formula::conj(f, g) : Formula::conj(g, f), ctx, open,
                        depth - 1, fuel);
        if (!d) return std::nullopt;
        return d->conclusion().left() == f ? Derivation::and_el(*d) : Derivation::and_er(*d);
      }
      case 1: {  // via implication
        const Formula g = random_formula(1);
        auto major = derive(Formula::imp(g, f), ctx, open, depth - 1, fuel);
        if (!major) return std::nullopt;
        auto minor = derive(g, ctx, open, depth - 1, fuel);
        if (!minor) return std::nullopt;
        return Derivation::imp_e(*major, *minor);
      }
      case 2: {  // via box
        auto major = derive(Formula::box(f), ctx, open, depth - 1, fuel);
        if (!major) return std::nullopt;
        return Derivation::box_e(*major);
      }
      case 3: {  // classical rule
        const Label k = fresh();
        Ctx c2 = ctx;
        c2.push_back({k, neg(f)});
        auto body = derive(Formula::bottom(), c2, open, depth - 1, fuel);
        if (!body) return std::nullopt;
        return Derivation::bot_c(f, k, *body);
      }
      default: {  // via disjunction
        const Formula a = random_formula(1), b = random_formula(1);
        auto major = derive(Formula::disj(a, b), ctx, open, depth - 1, fuel);
        if (!major) return std::nullopt;
        const Label l1 = fresh(), l2 = fresh();
        Ctx cl = ctx, cr = ctx;
        cl.push_back({l1, a});
        cr.push_back({l2, b});
        auto left = derive(f, cl, open, depth - 1, fuel);
        if (!left) return std::nullopt;
        auto right = derive(f, cr, open, depth - 1, fuel);
        if (!right) return std::nullopt;
        return Derivation::or_e(*major, l1, *left, l2, *right);
      }
    }
  }
};

// Turns outer-bound labels of an extracted subtree into plain open
// assumptions so the subtree stands alone.
inline Derivation strip_free_labels(const Derivation& d) {
  const std::set<Label> bound = bound_labels(d);
  struct Walk {
    const std::set<Label>& bound;
    Derivation go(const Derivation& n) {
      if (n.is_assume()) {
        if (n.label() != kNoLabel && !bound.count(n.label()))
          return Derivation::assume(n.conclusion());
        return n;
      }
      std::vector<Derivation> kids;
      bool changed = false;
      for (const auto& c : n.children()) {
        Derivation k = go(c);
        changed = changed || !k.same_node(c);
        kids.push_back(std::move(k));
      }
      if (!changed) return n;
      switch (n.rule()) {
        case Rule::AndI: return Derivation::and_i(kids[0], kids[1]);
        case Rule::AndEL: return Derivation::and_el(kids[0]);
        case Rule::AndER: return Derivation::and_er(kids[0]);
        case Rule::OrIL: return Derivation::or_il(n.aux(), kids[0]);
        case Rule::OrIR: return Derivation::or_ir(n.aux(), kids[0]);
        case Rule::OrE:
          return Derivation::or_e(kids[0], n.label(), kids[1], n.label2(), kids[2]);
        case Rule::ImpI: return Derivation::imp_i(n.aux(), n.label(), kids[0]);
        case Rule::ImpE: return Derivation::imp_e(kids[0], kids[1]);
        case Rule::BotC: return Derivation::bot_c(n.aux(), n.label(), kids[0]);
        case Rule::BoxE: return Derivation::box_e(kids[0]);
        case Rule::BoxI: {
          Derivation minor = kids.back();
          kids.pop_back();
          return Derivation::box_i(std::move(kids), n.label(), minor);
        }
        default: return n;
      }
    }
  } w{bound};
  return w.go(d);
}

// Harvests a critical simplified trivial-free derivation from a random
// valid one, if it contains any.
inline std::optional<Derivation> harvest_critical(Gen& g, int depth, int max_nodes) {
  Derivation d = g.random_valid(depth, max_nodes);
  if (!check_ns4(d).valid) return std::nullopt;
  d = simplify(d);
  auto p = find_critical(d);
  if (!p) return std::nullopt;
  Derivation sub = strip_free_labels(subtree_at(d, *p));
  if (node_count(sub) > 60) return std::nullopt;
  if (!check_ns4(sub).valid) return std::nullopt;
  if (!is_critical(sub) || !is_simplified(sub) || !trivial_formulas(sub).empty())
    return std::nullopt;
  return sub;
}

}  // namespace ns4::testgen
