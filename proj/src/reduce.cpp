#include "ns4/reduce.hpp"

#include <algorithm>
#include <functional>
#include <map>

#include "ns4/check.hpp"

namespace ns4 {

const char* case_name(ReductionCase c) {
  switch (c) {
    case ReductionCase::ConjProper: return "ConjProper";
    case ReductionCase::ImpProper: return "ImpProper";
    case ReductionCase::BoxProper: return "BoxProper";
    case ReductionCase::BoxPermute: return "BoxPermute";
    case ReductionCase::DisjProper: return "DisjProper";
    case ReductionCase::BotcAndE: return "BotcAndE";
    case ReductionCase::BotcImpE: return "BotcImpE";
    case ReductionCase::BotcBoxE: return "BotcBoxE";
    case ReductionCase::BotcBoxI: return "BotcBoxI";
    case ReductionCase::BotcBottomConcl: return "BotcBottomConcl";
    case ReductionCase::BotcMinorBottom: return "BotcMinorBottom";
  }
  return "?";
}

Measures measures_of(const Derivation& d) {
  const Analysis a = analyze(d);
  return {a.degree, a.index, a.top_maximal_formulas, a.length};
}

bool MeasureTrace::index_monotone() const {
  for (const auto& s : steps)
    if (!(s.after.index < s.before.index)) return false;
  return true;
}

std::string MeasureTrace::to_string() const {
  std::string out;
  for (const auto& s : steps) {
    out += "case=";
    out += case_name(s.rc);
    out += " G:" + std::to_string(s.before.degree) + "->" + std::to_string(s.after.degree);
    out += " I:" + ns4::to_string(s.before.index) + "->" + ns4::to_string(s.after.index);
    out += " #G:" + std::to_string(s.before.top_maximal) + "->" + std::to_string(s.after.top_maximal);
    out += " len:" + std::to_string(s.before.length) + "->" + std::to_string(s.after.length);
    out += '\n';
  }
  return out;
}

std::size_t default_budget(const Derivation& d) {
  const std::size_t n = static_cast<std::size_t>(node_count(d));
  return 10 * n * n;
}

// ---------------------------------------------------------------------------
// proper reductions
//
// The internal variants draw fresh labels from a shared allocator so that
// a reduct spliced into a larger tree cannot reuse one of its labels.

namespace {

// Node rebuild preserving rule, aux and labels.
Derivation rebuild_node(const Derivation& d, std::vector<Derivation> kids) {
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
  throw ReductionError("rebuild_node: bad rule");
}

Derivation substitute_with(const Derivation& d, Label l, const Derivation& repl,
                           LabelAlloc& alloc) {
  if (d.is_assume()) {
    if (d.label() != l) return d;
    if (d.conclusion() != repl.conclusion())
      throw SubstitutionError("substitute: leaf concludes " + to_string(d.conclusion()) +
                              " but replacement concludes " + to_string(repl.conclusion()));
    return relabel_bound(repl, alloc);
  }
  std::vector<Derivation> kids;
  bool changed = false;
  for (const auto& c : d.children()) {
    Derivation k = substitute_with(c, l, repl, alloc);
    changed = changed || !k.same_node(c);
    kids.push_back(std::move(k));
  }
  return changed ? rebuild_node(d, std::move(kids)) : d;
}

Derivation conjunction_step(const Derivation& d) {
  if ((d.rule() != Rule::AndEL && d.rule() != Rule::AndER) || d.child(0).rule() != Rule::AndI)
    throw NotARedex("expected &E over &I");
  return d.rule() == Rule::AndEL ? d.child(0).child(0) : d.child(0).child(1);
}

Derivation implication_step(const Derivation& d, LabelAlloc& alloc) {
  if (d.rule() != Rule::ImpE || d.child(0).rule() != Rule::ImpI)
    throw NotARedex("expected ->E over ->I");
  const Derivation& intro = d.child(0);
  return substitute_with(intro.child(0), intro.label(), d.child(1), alloc);
}

Derivation disjunction_step(const Derivation& d, LabelAlloc& alloc) {
  if (d.rule() != Rule::OrE) throw NotARedex("expected |E over |I");
  const Derivation& intro = d.child(0);
  if (intro.rule() == Rule::OrIL) return substitute_with(d.child(1), d.label(), intro.child(0), alloc);
  if (intro.rule() == Rule::OrIR) return substitute_with(d.child(2), d.label2(), intro.child(0), alloc);
  throw NotARedex("expected |E over |I");
}

Derivation box_proper_step(const Derivation& d, LabelAlloc& alloc) {
  if (d.rule() != Rule::BoxE || d.child(0).rule() != Rule::BoxI)
    throw NotARedex("expected []E over []I");
  const Derivation& intro = d.child(0);
  const Label k = intro.label();
  // graft each major over its discharged assumption class; classes with no
  // occurrences simply drop their major
  std::function<Derivation(const Derivation&)> go = [&](const Derivation& n) -> Derivation {
    if (n.is_assume()) {
      if (n.label() != k) return n;
      for (std::size_t i = 0; i + 1 < intro.arity(); ++i)
        if (intro.child(i).conclusion() == n.conclusion())
          return relabel_bound(intro.child(i), alloc);
      throw ReductionError("discharged assumption " + to_string(n.conclusion()) +
                           " has no matching major premiss");
    }
    std::vector<Derivation> kids;
    bool changed = false;
    for (const auto& c : n.children()) {
      Derivation k2 = go(c);
      changed = changed || !k2.same_node(c);
      kids.push_back(std::move(k2));
    }
    return changed ? rebuild_node(n, std::move(kids)) : n;
  };
  return go(intro.box_minor());
}

// Rewrites every use of the assumption class `lab : ~F` inside `body`.
// A use as the major premiss of ->E against a derivation X of F becomes
// make_use(X); any other occurrence is replaced by the packaged form
//   ->I fresh over make_use(assume F fresh),
// which concludes ~F again. make_use must return a derivation of bot.
Derivation rewire_refutation(const Derivation& body, Label lab, const Formula& F,
                             const std::function<Derivation(Derivation)>& make_use,
                             LabelAlloc& alloc, int& sites) {
  const Formula nf = neg(F);
  std::function<Derivation(const Derivation&)> go = [&](const Derivation& n) -> Derivation {
    if (n.is_assume()) {
      if (n.label() == lab && n.conclusion() == nf) {
        ++sites;
        const Label f = alloc.fresh();
        return Derivation::imp_i(F, f, make_use(Derivation::assume(F, f)));
      }
      return n;
    }
    if (n.rule() == Rule::ImpE && n.child(0).is_assume() && n.child(0).label() == lab &&
        n.child(0).conclusion() == nf) {
      ++sites;
      return make_use(go(n.child(1)));
    }
    std::vector<Derivation> kids;
    bool changed = false;
    for (const auto& c : n.children()) {
      Derivation k2 = go(c);
      changed = changed || !k2.same_node(c);
      kids.push_back(std::move(k2));
    }
    return changed ? rebuild_node(n, std::move(kids)) : n;
  };
  return go(body);
}

bool root_premiss_maximal_at(const Analysis& a, int g) {
  for (const auto& s : a.maximal) {
    if (degree(s.formula) != g) continue;
    for (const auto& p : s.occurrences)
      if (p.size() == 1) return true;
  }
  return false;
}

// Leftmost root premiss lying on a top-degree maximal segment; -1 if none.
int pick_maximal_premiss(const Analysis& a) {
  int best = -1;
  for (const auto& s : a.maximal) {
    if (degree(s.formula) != a.degree) continue;
    for (const auto& p : s.occurrences)
      if (p.size() == 1 && (best < 0 || p[0] < best)) best = p[0];
  }
  return best;
}

bool has_odd_use(const Derivation& body, Label lab, const Formula& nf) {
  std::function<bool(const Derivation&)> go = [&](const Derivation& n) -> bool {
    if (n.is_assume()) return n.label() == lab && n.conclusion() == nf;
    for (std::size_t i = 0; i < n.arity(); ++i) {
      if (n.rule() == Rule::ImpE && i == 0 && n.child(0).is_assume() &&
          n.child(0).label() == lab && n.child(0).conclusion() == nf)
        continue;  // major use
      if (go(n.child(i))) return true;
    }
    return false;
  };
  return go(body);
}

Derivation critical_reduce_impl(const Derivation& d, LabelAlloc& alloc, int depth);

// Re-applies cur's last inference with X in the major slot mi; every other
// child subtree is copied with fresh internal labels, and case/box scope
// labels are renamed per copy.
Derivation rebuild_with_major(const Derivation& cur, std::size_t mi, Derivation X,
                              LabelAlloc& alloc) {
  switch (cur.rule()) {
    case Rule::AndEL: return Derivation::and_el(std::move(X));
    case Rule::AndER: return Derivation::and_er(std::move(X));
    case Rule::BoxE: return Derivation::box_e(std::move(X));
    case Rule::ImpE: return Derivation::imp_e(std::move(X), relabel_bound(cur.child(1), alloc));
    case Rule::OrE: {
      const Label l1 = alloc.fresh(), l2 = alloc.fresh();
      Derivation L = relabel_map(relabel_bound(cur.child(1), alloc), {{cur.label(), l1}});
      Derivation R = relabel_map(relabel_bound(cur.child(2), alloc), {{cur.label2(), l2}});
      return Derivation::or_e(std::move(X), l1, std::move(L), l2, std::move(R));
    }
    case Rule::BoxI: {
      const Label k2 = alloc.fresh();
      std::vector<Derivation> majors;
      for (std::size_t i = 0; i + 1 < cur.arity(); ++i)
        majors.push_back(i == mi ? X : relabel_bound(cur.child(i), alloc));
      Derivation minor = relabel_map(relabel_bound(cur.box_minor(), alloc), {{cur.label(), k2}});
      return Derivation::box_i(std::move(majors), k2, std::move(minor));
    }
    default:
      throw ReductionError("rebuild_with_major: unsupported last inference");
  }
}

// Classical-detour elimination: the refuted conclusion of the maximal
// major moves to the whole derivation's conclusion. Every use site of the
// ~F class re-applies the last inference to its own derivation of F; a
// created redex or critical subderivation is reduced in place.
Derivation hoist_case(const Derivation& cur, std::size_t mi, LabelAlloc& alloc, int g,
                      int depth) {
  const Derivation M = cur.child(mi);  // botC
  const Formula F = M.conclusion();
  const Label lab = M.label();
  const Formula C = cur.conclusion();
  const Label m = alloc.fresh();
  auto make_use = [&](Derivation X) -> Derivation {
    Derivation L = rebuild_with_major(cur, mi, std::move(X), alloc);
    if (analyze(L).degree >= g) L = critical_reduce_impl(L, alloc, depth + 1);
    if (C.is_bottom()) return L;
    if (L.rule() == Rule::BotC)  // refuting its own detour: fuse the classes
      return relabel_map(L.child(0), {{L.label(), m}});
    return Derivation::imp_e(Derivation::assume(neg(C), m), std::move(L));
  };
  int sites = 0;
  Derivation body2 = rewire_refutation(M.child(0), lab, F, make_use, alloc, sites);
  if (sites == 0) body2 = M.child(0);  // vacuous class: drop the inference altogether
  return C.is_bottom() ? body2 : Derivation::bot_c(C, m, body2);
}

// Box permutation, optionally followed by the reduction of the critical
// subderivations it creates at the graft positions.
Derivation permute_and_fix(const Derivation& cur, std::size_t mi, LabelAlloc& alloc, int g,
                           bool fix, int depth) {
  const Derivation inner = cur.child(mi);  // BoxI
  const Formula boxA = inner.conclusion();
  const Label K = cur.label();
  const Label ik = inner.label();
  const std::size_t in_majors = inner.box_major_count();
  const Derivation lam1 = inner.box_minor();

  std::vector<Path> graft_paths;  // within the new minor
  Path walk_path;
  std::function<Derivation(const Derivation&)> go = [&](const Derivation& n) -> Derivation {
    if (n.is_assume()) {
      if (n.label() == K && n.conclusion() == boxA) {
        graft_paths.push_back(walk_path);
        const Label ik2 = alloc.fresh();
        Derivation l1c = relabel_map(relabel_bound(lam1, alloc), {{ik, ik2}});
        std::vector<Derivation> cols;
        for (std::size_t i = 0; i < in_majors; ++i)
          cols.push_back(Derivation::assume(inner.child(i).conclusion(), K));
        return Derivation::box_i(std::move(cols), ik2, std::move(l1c));
      }
      return n;
    }
    std::vector<Derivation> kids;
    bool changed = false;
    for (std::size_t i = 0; i < n.arity(); ++i) {
      walk_path.push_back(static_cast<int>(i));
      Derivation k2 = go(n.child(i));
      walk_path.pop_back();
      changed = changed || !k2.same_node(n.child(i));
      kids.push_back(std::move(k2));
    }
    return changed ? rebuild_node(n, std::move(kids)) : n;
  };
  Derivation minor2 = go(cur.box_minor());

  std::vector<Derivation> majors;
  std::vector<Formula> seen;
  auto add = [&](const Derivation& col) {
    for (const auto& f : seen)
      if (f == col.conclusion()) return;  // merge duplicate classes
    seen.push_back(col.conclusion());
    majors.push_back(col);
  };
  for (std::size_t i = 0; i < in_majors; ++i) add(inner.child(i));
  for (std::size_t j = 0; j + 1 < cur.arity(); ++j)
    if (j != mi) add(cur.child(j));

  const int minor_slot = static_cast<int>(majors.size());
  Derivation out = Derivation::box_i(std::move(majors), K, std::move(minor2));

  if (fix && !graft_paths.empty()) {
    std::sort(graft_paths.begin(), graft_paths.end(),
              [](const Path& a, const Path& b) { return a.size() > b.size(); });
    for (const auto& local : graft_paths) {
      Path p;
      p.push_back(minor_slot);
      p.insert(p.end(), local.begin(), local.end());
      if (local.empty()) continue;  // graft at the minor root: nothing below it
      Path q(p.begin(), p.end() - 1);
      Derivation parent = subtree_at(out, q);
      if (parent.rule() == Rule::BoxE) {
        out = replace_at(out, q, box_proper_step(parent, alloc));
      } else if (parent.rule() == Rule::BoxI &&
                 static_cast<std::size_t>(p.back()) < parent.box_major_count()) {
        if (analyze(parent).degree >= g)
          out = replace_at(out, q, critical_reduce_impl(parent, alloc, depth + 1));
      }
    }
  }
  return out;
}

Derivation critical_reduce_impl(const Derivation& d, LabelAlloc& alloc, int depth) {
  if (depth > 200) throw ReductionError("critical reduction recursed too deeply");
  const int g = analyze(d).degree;
  if (g == 0) throw ReductionError("not critical: no maximal segment");
  Derivation cur = d;
  int rounds = 0;
  const int max_rounds = static_cast<int>(d.arity()) + 2;
  for (;;) {
    const Analysis a = analyze(cur);
    if (a.degree < g) break;
    if (a.degree > g) throw ReductionError("degree increased during critical reduction");
    if (++rounds > max_rounds) throw ReductionError("critical reduction did not settle");
    const int mi = pick_maximal_premiss(a);
    if (mi < 0)
      throw ReductionError("top-degree maximal segments do not reach the last inference");
    const Derivation M = cur.child(mi);
    if (is_elimination(cur.rule())) {
      switch (M.rule()) {
        case Rule::AndI: cur = conjunction_step(cur); break;
        case Rule::ImpI: cur = implication_step(cur, alloc); break;
        case Rule::BoxI: cur = box_proper_step(cur, alloc); break;
        case Rule::OrIL:
        case Rule::OrIR: cur = disjunction_step(cur, alloc); break;
        case Rule::BotC: cur = hoist_case(cur, mi, alloc, g, depth); break;
        default:
          throw ReductionError("maximal major premiss concluded by " +
                               std::string(rule_name(M.rule())));
      }
    } else if (cur.rule() == Rule::BoxI) {
      switch (M.rule()) {
        case Rule::BoxI: cur = permute_and_fix(cur, mi, alloc, g, true, depth); break;
        case Rule::BotC: cur = hoist_case(cur, mi, alloc, g, depth); break;
        default:
          throw ReductionError("maximal box major concluded by " +
                               std::string(rule_name(M.rule())));
      }
    } else {
      throw ReductionError("critical derivation must end in an elimination or box introduction");
    }
  }
  return cur;
}

}  // namespace

Derivation reduce_conjunction(const Derivation& d) { return conjunction_step(d); }

Derivation reduce_implication(const Derivation& d) {
  LabelAlloc alloc(all_labels(d));
  return implication_step(d, alloc);
}

Derivation reduce_disjunction(const Derivation& d) {
  LabelAlloc alloc(all_labels(d));
  return disjunction_step(d, alloc);
}

Derivation reduce_box_proper(const Derivation& d) {
  LabelAlloc alloc(all_labels(d));
  return box_proper_step(d, alloc);
}

Derivation permute_box(const Derivation& d) {
  if (d.rule() != Rule::BoxI) throw NotARedex("expected a box introduction");
  for (std::size_t i = 0; i + 1 < d.arity(); ++i)
    if (d.child(i).rule() == Rule::BoxI) {
      std::set<Label> avoid = all_labels(d);
      LabelAlloc alloc(avoid);
      return permute_and_fix(d, i, alloc, 0, false, 0);
    }
  throw NotARedex("no box introduction among the major premisses");
}

ReductionCase classify_critical(const Derivation& d) {
  const Analysis a = analyze(d);
  if (!a.simplified) throw ClassificationError("derivation is not simplified");
  if (!a.trivials.empty()) throw ClassificationError("derivation contains a trivial formula");
  if (a.degree == 0) throw ClassificationError("no maximal segment");
  const int mi = pick_maximal_premiss(a);
  if (mi < 0) throw ClassificationError("no top-degree maximal premiss at the last inference");
  const Derivation M = d.child(mi);
  if (is_elimination(d.rule())) {
    switch (M.rule()) {
      case Rule::AndI: return ReductionCase::ConjProper;
      case Rule::ImpI: return ReductionCase::ImpProper;
      case Rule::BoxI: return ReductionCase::BoxProper;
      case Rule::OrIL:
      case Rule::OrIR: return ReductionCase::DisjProper;
      case Rule::BotC: {
        if (has_odd_use(M.child(0), M.label(), neg(M.conclusion())))
          return ReductionCase::BotcMinorBottom;
        if (d.conclusion().is_bottom()) return ReductionCase::BotcBottomConcl;
        switch (d.rule()) {
          case Rule::AndEL:
          case Rule::AndER: return ReductionCase::BotcAndE;
          case Rule::ImpE: return ReductionCase::BotcImpE;
          case Rule::BoxE: return ReductionCase::BotcBoxE;
          default: return ReductionCase::BotcBottomConcl;
        }
      }
      default:
        throw ClassificationError("maximal major premiss concluded by " +
                                  std::string(rule_name(M.rule())));
    }
  }
  if (d.rule() == Rule::BoxI) {
    if (M.rule() == Rule::BoxI) return ReductionCase::BoxPermute;
    if (M.rule() == Rule::BotC) return ReductionCase::BotcBoxI;
    throw ClassificationError("maximal box major concluded by " +
                              std::string(rule_name(M.rule())));
  }
  throw ClassificationError("last inference is neither an elimination nor a box introduction");
}

Derivation critical_reduce(const Derivation& d) {
  LabelAlloc alloc(all_labels(d));
  return critical_reduce_impl(d, alloc, 0);
}

// ---------------------------------------------------------------------------
// simplification

namespace {

class SimplifyPass {
 public:
  explicit SimplifyPass(const Derivation& d) : alloc_(all_labels(d)) {}

  Derivation run(const Derivation& d) { return rebuild(d); }

 private:
  LabelAlloc alloc_;
  std::set<Label> marked_;  // labels of bot_c nodes this pass introduced

  bool marked(const Derivation& d) const {
    return d.rule() == Rule::BotC && marked_.count(d.label()) > 0;
  }

  Derivation clone_fresh(const Derivation& d) {
    std::vector<std::pair<Label, Label>> m;
    for (Label l : bound_labels(d)) {
      const Label nl = alloc_.fresh();
      m.emplace_back(l, nl);
      if (marked_.count(l)) marked_.insert(nl);
    }
    return m.empty() ? d : relabel_map(d, m);
  }

  Derivation rebuild(const Derivation& d) {
    if (d.is_assume()) return d;
    std::vector<Derivation> kids;
    bool changed = false;
    for (const auto& c : d.children()) {
      Derivation k2 = rebuild(c);
      changed = changed || !k2.same_node(c);
      kids.push_back(std::move(k2));
    }
    return fixup(changed ? rebuild_node(d, std::move(kids)) : d);
  }

  Derivation fixup(Derivation n) {
    // classical detour refuting its own conclusion: graft the outer class
    // onto the inner one and drop both inferences
    if (n.rule() == Rule::ImpE && n.child(0).is_assume() && n.child(1).rule() == Rule::BotC &&
        n.child(0).conclusion() == neg(n.child(1).conclusion())) {
      const Label j = n.child(0).label();
      const Derivation& det = n.child(1);
      return relabel_map(det.child(0), {{det.label(), j}});
    }
    // |E concluding C != bot: refute C in each case, conclude bot, restore C
    if (n.rule() == Rule::OrE && !n.conclusion().is_bottom()) {
      const Formula C = n.conclusion();
      const Label m = alloc_.fresh();
      auto wrap = [&](const Derivation& X) {
        if (X.rule() == Rule::BotC)  // fuse, or the wrap would be a trivial detour
          return relabel_map(X.child(0), {{X.label(), m}});
        return Derivation::imp_e(Derivation::assume(neg(C), m), X);
      };
      Derivation core = Derivation::or_e(n.child(0), n.label(), wrap(n.child(1)), n.label2(),
                                         wrap(n.child(2)));
      core = fixup(std::move(core));
      marked_.insert(m);
      return Derivation::bot_c(C, m, std::move(core));
    }
    // a bot_c this pass introduced must not stand as a major premiss
    if (is_elimination(n.rule()) && marked(n.child(0))) return hoist(n, 0);
    if (n.rule() == Rule::BoxI) {
      for (std::size_t i = 0; i + 1 < n.arity(); ++i)
        if (marked(n.child(i))) return hoist(n, i);
    }
    return n;
  }

  Derivation rebuild_with_major_fresh(const Derivation& cur, std::size_t mi, Derivation X) {
    switch (cur.rule()) {
      case Rule::AndEL: return Derivation::and_el(std::move(X));
      case Rule::AndER: return Derivation::and_er(std::move(X));
      case Rule::BoxE: return Derivation::box_e(std::move(X));
      case Rule::ImpE: return Derivation::imp_e(std::move(X), clone_fresh(cur.child(1)));
      case Rule::OrE: {
        const Label l1 = alloc_.fresh(), l2 = alloc_.fresh();
        Derivation L = relabel_map(clone_fresh(cur.child(1)), {{cur.label(), l1}});
        Derivation R = relabel_map(clone_fresh(cur.child(2)), {{cur.label2(), l2}});
        return Derivation::or_e(std::move(X), l1, std::move(L), l2, std::move(R));
      }
      case Rule::BoxI: {
        const Label k2 = alloc_.fresh();
        std::vector<Derivation> majors;
        for (std::size_t i = 0; i + 1 < cur.arity(); ++i)
          majors.push_back(i == mi ? X : clone_fresh(cur.child(i)));
        Derivation minor = relabel_map(clone_fresh(cur.box_minor()), {{cur.label(), k2}});
        return Derivation::box_i(std::move(majors), k2, std::move(minor));
      }
      default:
        throw ReductionError("simplify: unsupported major position");
    }
  }

  Derivation hoist(const Derivation& n, std::size_t mi) {
    const Derivation M = n.child(mi);
    const Formula F = M.conclusion();
    const Label lab = M.label();
    const Formula D = n.conclusion();
    const Label m2 = alloc_.fresh();
    auto make_use = [&](Derivation X) -> Derivation {
      Derivation L = fixup(rebuild_with_major_fresh(n, mi, std::move(X)));
      if (D.is_bottom()) return L;
      if (L.rule() == Rule::BotC)  // refuting its own detour: fuse the classes
        return relabel_map(L.child(0), {{L.label(), m2}});
      return Derivation::imp_e(Derivation::assume(neg(D), m2), std::move(L));
    };
    int sites = 0;
    Derivation body2 = rewire_refutation(M.child(0), lab, F, make_use, alloc_, sites);
    if (sites == 0) body2 = M.child(0);
    if (D.is_bottom()) return body2;
    marked_.insert(m2);
    return Derivation::bot_c(D, m2, std::move(body2));
  }
};

}  // namespace

Derivation simplify(const Derivation& d) {
  SimplifyPass pass(d);
  return pass.run(d);
}

// ---------------------------------------------------------------------------
// driver

std::optional<Path> find_critical(const Derivation& d) {
  const Analysis whole = analyze(d);
  if (whole.degree == 0) return std::nullopt;
  const int g = whole.degree;
  std::optional<Path> best;
  Path path;
  std::function<void(const Derivation&)> go = [&](const Derivation& n) {
    const Analysis a = path.empty() ? whole : analyze(n);
    if (a.degree == g && root_premiss_maximal_at(a, g)) {
      if (!best || path.size() > best->size()) best = path;
      // preorder: the first candidate at a given depth is the leftmost
    }
    for (std::size_t i = 0; i < n.arity(); ++i) {
      path.push_back(static_cast<int>(i));
      go(n.child(i));
      path.pop_back();
    }
  };
  go(d);
  return best;
}

namespace {

Derivation relabel_into(const Derivation& red, const std::set<Label>& context_labels) {
  std::set<Label> avoid = context_labels;
  for (Label l : all_labels(red)) avoid.insert(l);
  LabelAlloc alloc(avoid);
  return relabel_bound(red, alloc);
}

}  // namespace

std::optional<StepResult> reduce_once(const Derivation& d) {
  auto p = find_critical(d);
  if (!p) return std::nullopt;
  const Derivation sub = subtree_at(d, *p);
  const ReductionCase rc = classify_critical(sub);
  Derivation red = Derivation::assume(Formula::bottom());
  switch (rc) {
    case ReductionCase::ConjProper: red = reduce_conjunction(sub); break;
    case ReductionCase::ImpProper: red = reduce_implication(sub); break;
    case ReductionCase::DisjProper: red = reduce_disjunction(sub); break;
    case ReductionCase::BoxProper: red = reduce_box_proper(sub); break;
    case ReductionCase::BoxPermute: red = permute_box(sub); break;
    default: red = critical_reduce(sub); break;
  }
  red = relabel_into(red, all_labels(d));
  StepResult out{rc, replace_at(d, *p, red), measures_of(d), {}};
  out.after = measures_of(out.result);
  return out;
}

NormalizeResult normalize(const Derivation& d, std::size_t budget) {
  {
    const CheckReport rep = check_ns4(d);
    if (!rep.valid)
      throw ReductionError("input is not a valid derivation: " +
                           (rep.violations.empty() ? std::string("?")
                                                   : rep.violations.front().reason));
  }
  NormalizeResult out{d, {}};
  if (analyze(d).normal) return out;  // identity, empty trace

  Derivation cur = simplify(d);
  std::size_t steps = 0;
  for (;;) {
    const Analysis a = analyze(cur);
    if (a.normal) {
      out.result = cur;
      return out;
    }
    if (steps >= budget) throw BudgetExhausted(out.trace);
    const auto p = find_critical(cur);
    if (!p) throw ReductionError("non-normal derivation without a critical subderivation");
    const Derivation sub = subtree_at(cur, *p);
    const ReductionCase rc = classify_critical(sub);
    Derivation red = critical_reduce(sub);
    red = relabel_into(red, all_labels(cur));
    Derivation next = simplify(replace_at(cur, *p, red));
    {
      const CheckReport rep = check_ns4(next);
      if (!rep.valid)
        throw ReductionError("reduction produced an invalid derivation (" +
                             (rep.violations.empty() ? std::string("?")
                                                     : rep.violations.front().reason) +
                             ")");
    }
    const Measures before{a.degree, a.index, a.top_maximal_formulas, a.length};
    out.trace.steps.push_back({rc, before, measures_of(next)});
    cur = std::move(next);
    ++steps;
  }
}

}  // namespace ns4
