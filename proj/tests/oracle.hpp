#pragma once

#include <algorithm>
#include <string>
#include <vector>

#include "ns4/analysis.hpp"
#include "ns4/derivation.hpp"

// Brute-force reference for the segment machinery: the link relation is
// decided pairwise from first principles and chains are enumerated over
// it, independently of the production single-pass implementation.
namespace ns4::oracle {

struct Occ {
  Path path;
  Formula formula;
};

inline void all_occurrences(const Derivation& d, Path& p, std::vector<Occ>& out) {
  out.push_back({p, d.conclusion()});
  for (std::size_t i = 0; i < d.arity(); ++i) {
    p.push_back(static_cast<int>(i));
    all_occurrences(d.child(i), p, out);
    p.pop_back();
  }
}

inline bool prefix(const Path& a, const Path& b) {
  return a.size() <= b.size() && std::equal(a.begin(), a.end(), b.begin());
}

// a -> b is a link iff
//  (i)  a is a case conclusion of the |E application b, or
//  (ii) a is a major premiss of a box introduction q and b is an
//       assumption of the same formula labeled with q's label inside q's
//       minor subtree.
inline bool linked(const Derivation& root, const Path& a, const Path& b) {
  if (!a.empty()) {
    Path parent(a.begin(), a.end() - 1);
    if (parent == b) {
      const Derivation q = subtree_at(root, parent);
      if (q.rule() == Rule::OrE && (a.back() == 1 || a.back() == 2)) return true;
    }
    const Derivation q = subtree_at(root, parent);
    if (q.rule() == Rule::BoxI && static_cast<std::size_t>(a.back()) < q.box_major_count()) {
      Path minor = parent;
      minor.push_back(static_cast<int>(q.arity()) - 1);
      if (prefix(minor, b)) {
        const Derivation leaf = subtree_at(root, b);
        if (leaf.is_assume() && leaf.label() == q.label() &&
            leaf.conclusion() == subtree_at(root, a).conclusion())
          return true;
      }
    }
  }
  return false;
}

struct Chains {
  std::vector<std::vector<Path>> all;
  std::vector<std::vector<Path>> maximal;
};

inline bool is_intro_or_botc(const Derivation& root, const Path& p) {
  const Rule r = subtree_at(root, p).rule();
  return is_introduction(r) || r == Rule::BotC;
}

inline bool is_elim_major(const Derivation& root, const Path& p) {
  if (p.empty()) return false;
  Path parent(p.begin(), p.end() - 1);
  const Rule r = subtree_at(root, parent).rule();
  return is_elimination(r) && p.back() == 0;
}

inline Chains chains_of(const Derivation& root) {
  std::vector<Occ> occs;
  Path p;
  all_occurrences(root, p, occs);
  const std::size_t n = occs.size();
  std::vector<std::vector<std::size_t>> succ(n);
  std::vector<bool> has_pred(n, false);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j)
      if (i != j && linked(root, occs[i].path, occs[j].path)) {
        succ[i].push_back(j);
        has_pred[j] = true;
      }
  Chains out;
  std::vector<std::size_t> cur;
  auto extend = [&](auto&& self, std::size_t at) -> void {
    cur.push_back(at);
    if (succ[at].empty()) {
      std::vector<Path> c;
      for (std::size_t k : cur) c.push_back(occs[k].path);
      if (is_intro_or_botc(root, c.front()) && is_elim_major(root, c.back()))
        out.maximal.push_back(c);
      out.all.push_back(std::move(c));
    } else {
      for (std::size_t nx : succ[at]) self(self, nx);
    }
    cur.pop_back();
  };
  for (std::size_t i = 0; i < n; ++i)
    if (!has_pred[i]) extend(extend, i);
  return out;
}

inline int degree_of(const Derivation& root) {
  const Chains c = chains_of(root);
  int g = 0;
  for (const auto& ch : c.maximal)
    g = std::max(g, degree(subtree_at(root, ch.front()).conclusion()));
  return g;
}

inline Index index_oracle(const Derivation& root) {
  const Chains c = chains_of(root);
  Index idx;
  for (const auto& ch : c.maximal)
    idx.degree = std::max(idx.degree, degree(subtree_at(root, ch.front()).conclusion()));
  if (idx.degree > 0)
    for (const auto& ch : c.maximal)
      if (degree(subtree_at(root, ch.front()).conclusion()) == idx.degree)
        idx.sum += static_cast<int>(ch.size());
  return idx;
}

// Def-by-the-book criticality: every proper subtree is examined.
inline bool critical_oracle(const Derivation& root) {
  const int g = degree_of(root);
  if (g == 0) return false;
  const Chains c = chains_of(root);
  bool at_last = false;
  for (const auto& ch : c.maximal) {
    if (degree(subtree_at(root, ch.front()).conclusion()) != g) continue;
    for (const auto& occ : ch)
      if (occ.size() == 1) at_last = true;
  }
  if (!at_last) return false;
  struct Walk {
    int g;
    bool ok = true;
    void go(const Derivation& n, bool is_root) {
      if (!ok) return;
      if (!is_root && degree_of(n) >= g) {
        ok = false;
        return;
      }
      for (const auto& ch : n.children()) go(ch, false);
    }
  } w{g};
  w.go(root, true);
  return w.ok;
}

// canonical form for comparing segment lists
inline std::vector<std::string> canon(const std::vector<std::vector<Path>>& chains) {
  std::vector<std::string> out;
  for (const auto& ch : chains) {
    std::string s;
    for (const auto& p : ch) {
      s += path_to_string(p);
      s += ';';
    }
    out.push_back(std::move(s));
  }
  std::sort(out.begin(), out.end());
  return out;
}

inline std::vector<std::string> canon_segments(const std::vector<Segment>& segs) {
  std::vector<std::string> out;
  for (const auto& s : segs) {
    std::string t;
    for (const auto& p : s.occurrences) {
      t += path_to_string(p);
      t += ';';
    }
    out.push_back(std::move(t));
  }
  std::sort(out.begin(), out.end());
  return out;
}

}  // namespace ns4::oracle
