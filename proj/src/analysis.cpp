#include "ns4/analysis.hpp"

#include <algorithm>
#include <map>

namespace ns4 {

std::string to_string(const Index& i) {
  return "(" + std::to_string(i.degree) + "," + std::to_string(i.sum) + ")";
}

namespace {

constexpr std::size_t kSegmentCap = 1u << 20;

struct Occ {
  Path path;
  Formula formula;
  Rule rule;          // rule concluding this occurrence
  Rule parent_rule;   // Assume at the root means "no parent"
  int slot = -1;      // index within the parent
  std::size_t parent = SIZE_MAX;
};

struct LinkGraph {
  std::vector<Occ> occs;
  std::map<Path, std::size_t> by_path;
  std::vector<std::vector<std::size_t>> succ;
  std::vector<int> indeg;

  const Occ& at(std::size_t i) const { return occs[i]; }
};

void collect_occs(const Derivation& d, Path& path, std::size_t parent, int slot, LinkGraph& g) {
  Occ o;
  o.path = path;
  o.formula = d.conclusion();
  o.rule = d.rule();
  o.parent = parent;
  o.slot = slot;
  o.parent_rule = parent == SIZE_MAX ? Rule::Assume : g.occs[parent].rule;
  g.by_path[path] = g.occs.size();
  g.occs.push_back(std::move(o));
  const std::size_t self = g.occs.size() - 1;
  for (std::size_t i = 0; i < d.arity(); ++i) {
    path.push_back(static_cast<int>(i));
    collect_occs(d.child(i), path, self, static_cast<int>(i), g);
    path.pop_back();
  }
}

void collect_links(const Derivation& d, Path& path, LinkGraph& g) {
  const std::size_t self = g.by_path.at(path);
  if (d.rule() == Rule::OrE) {
    for (int c : {1, 2}) {
      path.push_back(c);
      g.succ[g.by_path.at(path)].push_back(self);
      path.pop_back();
    }
  }
  if (d.rule() == Rule::BoxI) {
    const Label k = d.label();
    const int minor_slot = static_cast<int>(d.arity()) - 1;
    // assumption occurrences of each major's formula discharged here
    std::vector<std::pair<Formula, std::vector<std::size_t>>> classes;
    for (std::size_t i = 0; i + 1 < d.arity(); ++i)
      classes.emplace_back(d.child(i).conclusion(), std::vector<std::size_t>{});
    Path minor_path = path;
    minor_path.push_back(minor_slot);
    // scan the minor for k-labeled leaves; an inner discharger cannot reuse
    // k (label uniqueness), so every k-leaf belongs to this application
    struct Scan {
      static void run(const Derivation& n, Path& p, Label k, LinkGraph& g,
                      std::vector<std::pair<Formula, std::vector<std::size_t>>>& classes) {
        if (n.is_assume() && n.label() == k) {
          for (auto& cl : classes)
            if (cl.first == n.conclusion()) cl.second.push_back(g.by_path.at(p));
          return;
        }
        for (std::size_t i = 0; i < n.arity(); ++i) {
          p.push_back(static_cast<int>(i));
          run(n.child(i), p, k, g, classes);
          p.pop_back();
        }
      }
    };
    Scan::run(d.box_minor(), minor_path, k, g, classes);
    for (std::size_t i = 0; i + 1 < d.arity(); ++i) {
      path.push_back(static_cast<int>(i));
      const std::size_t major = g.by_path.at(path);
      path.pop_back();
      for (std::size_t target : classes[i].second) g.succ[major].push_back(target);
    }
  }
  for (std::size_t i = 0; i < d.arity(); ++i) {
    path.push_back(static_cast<int>(i));
    collect_links(d.child(i), path, g);
    path.pop_back();
  }
}

void enumerate_chains(const LinkGraph& g, std::size_t at, std::vector<std::size_t>& chain,
                      std::vector<std::vector<std::size_t>>& out) {
  chain.push_back(at);
  if (g.succ[at].empty()) {
    out.push_back(chain);
    if (out.size() > kSegmentCap) throw AnalysisError("segment enumeration exploded");
  } else {
    for (std::size_t nxt : g.succ[at]) enumerate_chains(g, nxt, chain, out);
  }
  chain.pop_back();
}

bool ends_at_elim_major(const Occ& o) {
  switch (o.parent_rule) {
    case Rule::AndEL:
    case Rule::AndER:
    case Rule::BoxE:
      return o.slot == 0;
    case Rule::ImpE:
    case Rule::OrE:
      return o.slot == 0;
    default:
      return false;
  }
}

bool starts_at_intro_or_botc(const Occ& o) {
  return is_introduction(o.rule) || o.rule == Rule::BotC;
}

void collect_trivials(const Derivation& d, Path& path, std::vector<Path>& out) {
  if (d.rule() == Rule::ImpE && d.child(0).is_assume() && d.child(1).rule() == Rule::BotC &&
      d.child(0).conclusion() == neg(d.child(1).conclusion())) {
    Path p = path;
    p.push_back(1);
    out.push_back(std::move(p));
  }
  for (std::size_t i = 0; i < d.arity(); ++i) {
    path.push_back(static_cast<int>(i));
    collect_trivials(d.child(i), path, out);
    path.pop_back();
  }
}

void collect_simplified(const Derivation& d, bool& ok) {
  if (d.rule() == Rule::OrE && !d.conclusion().is_bottom()) ok = false;
  for (const auto& c : d.children())
    if (ok) collect_simplified(c, ok);
}

}  // namespace

Analysis analyze(const Derivation& d) {
  Analysis a;
  LinkGraph g;
  Path path;
  collect_occs(d, path, SIZE_MAX, -1, g);
  g.succ.assign(g.occs.size(), {});
  collect_links(d, path, g);
  g.indeg.assign(g.occs.size(), 0);
  for (const auto& v : g.succ)
    for (std::size_t t : v) ++g.indeg[t];

  std::vector<std::vector<std::size_t>> chains;
  std::vector<std::size_t> chain;
  for (std::size_t i = 0; i < g.occs.size(); ++i)
    if (g.indeg[i] == 0) enumerate_chains(g, i, chain, chains);

  a.length = static_cast<int>(g.occs.size());
  a.all.reserve(chains.size());
  for (const auto& ch : chains) {
    Segment s;
    s.formula = g.at(ch.front()).formula;
    for (std::size_t i : ch) s.occurrences.push_back(g.at(i).path);
    const bool maximal =
        starts_at_intro_or_botc(g.at(ch.front())) && ends_at_elim_major(g.at(ch.back()));
    if (maximal) a.maximal.push_back(s);
    a.all.push_back(std::move(s));
  }
  for (const auto& s : a.maximal) a.degree = std::max(a.degree, degree(s.formula));
  a.normal = a.maximal.empty();
  a.index.degree = a.degree;
  for (const auto& s : a.maximal)
    if (degree(s.formula) == a.degree && a.degree > 0) a.index.sum += s.length();
  for (const auto& s : a.maximal)
    if (s.length() == 1 && degree(s.formula) == a.degree && a.degree > 0)
      ++a.top_maximal_formulas;
  bool simp = true;
  collect_simplified(d, simp);
  a.simplified = simp;
  collect_trivials(d, path, a.trivials);
  return a;
}

std::vector<Segment> segments(const Derivation& d) { return analyze(d).all; }
std::vector<Segment> maximal_segments(const Derivation& d) { return analyze(d).maximal; }
int derivation_degree(const Derivation& d) { return analyze(d).degree; }
Index index_of(const Derivation& d) { return analyze(d).index; }
bool is_normal(const Derivation& d) { return analyze(d).normal; }
int count_top_degree_maximal(const Derivation& d) { return analyze(d).top_maximal_formulas; }
int length_of(const Derivation& d) { return node_count(d); }

bool is_simplified(const Derivation& d) {
  bool ok = true;
  collect_simplified(d, ok);
  return ok;
}

std::vector<Path> trivial_formulas(const Derivation& d) {
  std::vector<Path> out;
  Path path;
  collect_trivials(d, path, out);
  return out;
}

bool is_critical(const Derivation& d) {
  const Analysis a = analyze(d);
  if (a.degree == 0) return false;
  bool at_last = false;
  for (const auto& s : a.maximal) {
    if (degree(s.formula) != a.degree) continue;
    for (const auto& p : s.occurrences)
      if (p.size() == 1) at_last = true;
  }
  if (!at_last) return false;
  // Subtree degree is monotone under inclusion (a segment maximal within a
  // subtree is maximal in every enclosing one), so the immediate children
  // bound every proper subderivation.
  for (std::size_t i = 0; i < d.arity(); ++i)
    if (analyze(d.child(i)).degree >= a.degree) return false;
  return true;
}

}  // namespace ns4
