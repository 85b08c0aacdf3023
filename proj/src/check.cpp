#include "ns4/check.hpp"

#include <algorithm>
#include <map>

namespace ns4 {

const char* system_name(System s) {
  switch (s) {
    case System::Ns4: return "ns4";
    case System::PrawitzV1: return "prawitz-v1";
    case System::PrawitzV2: return "prawitz-v2";
    case System::PrawitzV3: return "prawitz-v3";
  }
  return "?";
}

namespace {

bool is_prefix(const Path& pre, const Path& p) {
  if (pre.size() > p.size()) return false;
  return std::equal(pre.begin(), pre.end(), p.begin());
}

struct Checker {
  std::vector<Violation> out;

  void flag(const Path& p, const char* rule, std::string reason) {
    out.push_back({p, rule, std::move(reason)});
  }

  struct LeafInfo {
    Path path;
    Formula formula;
    Label label;
  };
  struct DischargeInfo {
    Path path;          // discharging node
    Path scope;         // child subtree the label may appear in
    Formula expected;   // required leaf formula; null meaning handled per rule
    bool any_box;       // BoxI: formula must match one of the majors instead
    std::vector<Formula> boxes;
  };

  std::vector<LeafInfo> leaves;
  std::map<Label, std::vector<DischargeInfo>> dischargers;

  void gather(const Derivation& d, Path& path) {
    if (d.is_assume()) {
      if (d.label() != kNoLabel) leaves.push_back({path, d.conclusion(), d.label()});
    }
    const auto slots = discharge_slots(d);
    for (const auto& s : slots) {
      DischargeInfo info;
      info.path = path;
      info.scope = path;
      info.scope.push_back(s.scope_child);
      info.any_box = d.rule() == Rule::BoxI;
      switch (d.rule()) {
        case Rule::ImpI: info.expected = d.aux(); break;
        case Rule::BotC: info.expected = neg(d.aux()); break;
        case Rule::OrE:
          info.expected = s.scope_child == 1 ? d.child(0).conclusion().left()
                                             : d.child(0).conclusion().right();
          break;
        case Rule::BoxI:
          for (std::size_t i = 0; i + 1 < d.arity(); ++i)
            info.boxes.push_back(d.child(i).conclusion());
          break;
        default: break;
      }
      dischargers[s.label].push_back(std::move(info));
    }
    for (std::size_t i = 0; i < d.arity(); ++i) {
      path.push_back(static_cast<int>(i));
      gather(d.child(i), path);
      path.pop_back();
    }
  }

  void check_discharge() {
    for (const auto& [label, infos] : dischargers) {
      if (infos.size() > 1)
        for (std::size_t i = 1; i < infos.size(); ++i)
          flag(infos[i].path, "discharge",
               "label " + std::to_string(label) + " is used by more than one discharging inference");
    }
    for (const auto& leaf : leaves) {
      auto it = dischargers.find(leaf.label);
      if (it == dischargers.end()) {
        flag(leaf.path, "discharge",
             "assumption labeled " + std::to_string(leaf.label) + " is never discharged");
        continue;
      }
      const DischargeInfo& info = it->second.front();
      if (!is_prefix(info.scope, leaf.path)) {
        flag(leaf.path, "discharge",
             "assumption labeled " + std::to_string(leaf.label) +
                 " lies outside the scope of its discharging inference at " +
                 path_to_string(info.path));
        continue;
      }
      if (info.any_box) continue;  // box classes are checked per application below
      if (leaf.formula != info.expected)
        flag(leaf.path, "discharge",
             "assumption discharged at " + path_to_string(info.path) + " must be " +
                 to_string(info.expected) + ", got " + to_string(leaf.formula));
    }
  }

  // Rule-local conclusion coherence. Factory-built trees cannot fail this,
  // but the report states it explicitly.
  void check_shapes(const Derivation& d, Path& path) {
    auto expect = [&](bool ok, std::string reason) {
      if (!ok) flag(path, "structure", std::move(reason));
    };
    switch (d.rule()) {
      case Rule::AndI:
        expect(d.conclusion() == Formula::conj(d.child(0).conclusion(), d.child(1).conclusion()),
               "conjunction introduction conclusion mismatch");
        break;
      case Rule::ImpE:
        expect(d.child(0).conclusion().is_imp() &&
                   d.child(0).conclusion().left() == d.child(1).conclusion() &&
                   d.child(0).conclusion().right() == d.conclusion(),
               "implication elimination premiss mismatch");
        break;
      case Rule::BotC:
        expect(d.child(0).conclusion().is_bottom(), "botC body must conclude bot");
        break;
      case Rule::BoxE:
        expect(d.child(0).conclusion().is_box() &&
                   d.child(0).conclusion().inner() == d.conclusion(),
               "box elimination premiss mismatch");
        break;
      default:
        break;
    }
    for (std::size_t i = 0; i < d.arity(); ++i) {
      path.push_back(static_cast<int>(i));
      check_shapes(d.child(i), path);
      path.pop_back();
    }
  }

  void check_boxes_ns4(const Derivation& d, Path& path) {
    if (d.rule() == Rule::BoxI) {
      std::vector<Formula> boxes;
      for (std::size_t i = 0; i + 1 < d.arity(); ++i) boxes.push_back(d.child(i).conclusion());
      for (std::size_t i = 0; i < boxes.size(); ++i)
        for (std::size_t j = i + 1; j < boxes.size(); ++j)
          if (boxes[i] == boxes[j])
            flag(path, "box-intro",
                 "major premisses must be pairwise distinct; " + to_string(boxes[i]) +
                     " occurs twice");
      const Label k = d.label();
      for (const auto& leaf : open_leaves(d.box_minor())) {
        const bool in_class = leaf.label == k;
        const bool among =
            std::find(boxes.begin(), boxes.end(), leaf.formula) != boxes.end();
        Path abs = path;
        abs.push_back(static_cast<int>(d.arity()) - 1);
        abs.insert(abs.end(), leaf.path.begin(), leaf.path.end());
        if (!in_class)
          flag(abs, "box-intro",
               "minor premiss depends on assumption " + to_string(leaf.formula) +
                   " outside the discharged class");
        else if (!among)
          flag(abs, "box-intro",
               "discharged assumption " + to_string(leaf.formula) +
                   " does not match any major premiss");
      }
    }
    for (std::size_t i = 0; i < d.arity(); ++i) {
      path.push_back(static_cast<int>(i));
      check_boxes_ns4(d.child(i), path);
      path.pop_back();
    }
  }
};

// Dependency data for the Prawitz conditions: for every node, the set of
// leaf occurrences that are open at that node.
struct DependencyTable {
  struct Entry {
    Path path;
    Formula formula;
    Path discharger;  // empty + none=false when never discharged
    bool discharged = false;
  };
  std::vector<Entry> leaves;

  // open at node n iff leaf is below n and its discharger is not.
  bool open_at(const Entry& e, const Path& n) const {
    if (!is_prefix_(n, e.path)) return false;
    return !e.discharged || !is_prefix_(n, e.discharger);
  }
  static bool is_prefix_(const Path& pre, const Path& p) {
    if (pre.size() > p.size()) return false;
    return std::equal(pre.begin(), pre.end(), p.begin());
  }
  std::vector<const Entry*> open_set(const Path& n) const {
    std::vector<const Entry*> out;
    for (const auto& e : leaves)
      if (open_at(e, n)) out.push_back(&e);
    return out;
  }
};

void build_deps(const Derivation& d, Path& path,
                std::vector<std::pair<Label, Path>>& scopes, DependencyTable& t) {
  if (d.is_assume()) {
    DependencyTable::Entry e;
    e.path = path;
    e.formula = d.conclusion();
    if (d.label() != kNoLabel) {
      for (auto it = scopes.rbegin(); it != scopes.rend(); ++it)
        if (it->first == d.label()) {
          e.discharger = it->second;
          e.discharged = true;
          break;
        }
    }
    t.leaves.push_back(std::move(e));
    return;
  }
  const auto slots = discharge_slots(d);
  for (std::size_t i = 0; i < d.arity(); ++i) {
    std::size_t pushed = 0;
    for (const auto& s : slots)
      if (s.scope_child == static_cast<int>(i)) {
        scopes.emplace_back(s.label, path);
        ++pushed;
      }
    path.push_back(static_cast<int>(i));
    build_deps(d.child(i), path, scopes, t);
    path.pop_back();
    while (pushed--) scopes.pop_back();
  }
}

void collect_box_intros(const Derivation& d, Path& path, std::vector<Path>& out) {
  if (d.rule() == Rule::BoxI) out.push_back(path);
  for (std::size_t i = 0; i < d.arity(); ++i) {
    path.push_back(static_cast<int>(i));
    collect_box_intros(d.child(i), path, out);
    path.pop_back();
  }
}

}  // namespace

CheckReport check_ns4(const Derivation& d) {
  Checker c;
  Path path;
  c.gather(d, path);
  c.check_discharge();
  c.check_shapes(d, path);
  c.check_boxes_ns4(d, path);
  return {c.out.empty(), std::move(c.out)};
}

CheckReport check_prawitz(const Derivation& d, System version, const CheckOptions& opts) {
  Checker c;
  Path path;
  c.gather(d, path);
  c.check_discharge();
  c.check_shapes(d, path);

  DependencyTable deps;
  {
    Path p;
    std::vector<std::pair<Label, Path>> scopes;
    build_deps(d, p, scopes, deps);
  }

  std::vector<Path> intros;
  {
    Path p;
    collect_box_intros(d, p, intros);
  }

  for (const auto& at : intros) {
    Derivation node = subtree_at(d, at);
    if (node.box_major_count() != 0) {
      c.flag(at, "box-intro", "vector-form box introduction is not part of this system");
      continue;
    }
    Path premiss = at;
    premiss.push_back(0);
    auto open = deps.open_set(premiss);
    if (open.empty() && !opts.allow_closed_box_premiss) {
      c.flag(at, "box-intro", "premiss depends on no assumption");
      continue;
    }
    switch (version) {
      case System::PrawitzV1:
        for (const auto* e : open)
          if (!e->formula.is_box())
            c.flag(at, "box-intro",
                   "premiss depends on non-modal assumption " + to_string(e->formula));
        break;
      case System::PrawitzV2:
        for (const auto* e : open)
          if (!is_essentially_modal(e->formula))
            c.flag(at, "box-intro",
                   "premiss depends on assumption " + to_string(e->formula) +
                       " which is not essentially modal");
        break;
      case System::PrawitzV3: {
        // For each assumption B the premiss depends on, some essentially
        // modal occurrence F on the branch from B down to the premiss must
        // satisfy: every assumption open at F is still open at the premiss.
        auto premiss_open = open;
        auto openly_contains = [&](const Path& f) {
          for (const auto& e : deps.leaves)
            if (deps.open_at(e, f)) {
              bool still = false;
              for (const auto* pe : premiss_open)
                if (pe == &e) { still = true; break; }
              if (!still) return false;
            }
          return true;
        };
        for (const auto* b : open) {
          bool secured = false;
          for (std::size_t len = premiss.size(); len <= b->path.size() && !secured; ++len) {
            Path f(b->path.begin(), b->path.begin() + len);
            if (is_essentially_modal(subtree_at(d, f).conclusion()) && openly_contains(f))
              secured = true;
          }
          if (!secured)
            c.flag(at, "box-intro",
                   "no essentially modal formula on the branch from assumption " +
                       to_string(b->formula) + " secures the introduction");
        }
        break;
      }
      case System::Ns4:
        break;
    }
  }
  return {c.out.empty(), std::move(c.out)};
}

CheckReport check_system(const Derivation& d, System system, const CheckOptions& opts) {
  if (system == System::Ns4) return check_ns4(d);
  return check_prawitz(d, system, opts);
}

}  // namespace ns4
