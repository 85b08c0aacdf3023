#pragma once

#include <stdexcept>
#include <string>
#include <vector>

#include "ns4/derivation.hpp"

namespace ns4 {

// A maximal chain of same-formula occurrences, linked by
//   (a) |E case conclusion -> that |E's conclusion, and
//   (b) []I major premiss  -> an assumption of that formula discharged by
//       the same application.
// One occurrence may belong to several segments (links can branch).
struct Segment {
  std::vector<Path> occurrences;
  Formula formula;
  int length() const { return static_cast<int>(occurrences.size()); }
};

// Lexicographic pair <degree, summed lengths of top-degree maximal segments>.
struct Index {
  int degree = 0;
  int sum = 0;
  bool operator==(const Index& o) const { return degree == o.degree && sum == o.sum; }
  bool operator!=(const Index& o) const { return !(*this == o); }
  bool operator<(const Index& o) const {
    return degree != o.degree ? degree < o.degree : sum < o.sum;
  }
};
std::string to_string(const Index& i);

struct AnalysisError : std::runtime_error {
  explicit AnalysisError(const std::string& what) : std::runtime_error(what) {}
};

std::vector<Segment> segments(const Derivation& d);
std::vector<Segment> maximal_segments(const Derivation& d);

int derivation_degree(const Derivation& d);  // 0 when no maximal segment
Index index_of(const Derivation& d);
bool is_normal(const Derivation& d);
int count_top_degree_maximal(const Derivation& d);  // maximal formulas at top degree
int length_of(const Derivation& d);                 // formula occurrence count

bool is_simplified(const Derivation& d);       // every |E case concludes bot
std::vector<Path> trivial_formulas(const Derivation& d);

// Top-degree maximal premiss at the last inference and every proper
// subderivation of strictly smaller degree.
bool is_critical(const Derivation& d);

// Everything above in one pass (segments are shared between the queries).
struct Analysis {
  std::vector<Segment> all;
  std::vector<Segment> maximal;
  int degree = 0;
  Index index;
  int top_maximal_formulas = 0;
  int length = 0;
  bool normal = true;
  bool simplified = true;
  std::vector<Path> trivials;
};
Analysis analyze(const Derivation& d);

}  // namespace ns4
