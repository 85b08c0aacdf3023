#pragma once

#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "ns4/analysis.hpp"
#include "ns4/derivation.hpp"

namespace ns4 {

enum class ReductionCase {
  ConjProper,
  ImpProper,
  BoxProper,
  BoxPermute,
  DisjProper,
  BotcAndE,
  BotcImpE,
  BotcBoxE,
  BotcBoxI,
  BotcBottomConcl,
  BotcMinorBottom,
};
const char* case_name(ReductionCase c);

struct Measures {
  int degree = 0;
  Index index;
  int top_maximal = 0;
  int length = 0;
};
Measures measures_of(const Derivation& d);

struct TraceStep {
  ReductionCase rc;
  Measures before, after;
};

struct MeasureTrace {
  std::vector<TraceStep> steps;
  bool index_monotone() const;  // strictly decreasing across steps
  std::string to_string() const;
};

struct NormalizeResult {
  Derivation result;
  MeasureTrace trace;
};

struct NotARedex : std::runtime_error {
  explicit NotARedex(const std::string& w) : std::runtime_error(w) {}
};
struct ClassificationError : std::runtime_error {
  explicit ClassificationError(const std::string& w) : std::runtime_error(w) {}
};
struct ReductionError : std::runtime_error {
  explicit ReductionError(const std::string& w) : std::runtime_error(w) {}
};
struct BudgetExhausted : std::runtime_error {
  MeasureTrace trace;
  explicit BudgetExhausted(MeasureTrace t)
      : std::runtime_error("normalization budget exhausted"), trace(std::move(t)) {}
};

// Proper reductions at the root of d.
Derivation reduce_conjunction(const Derivation& d);   // &E over &I
Derivation reduce_implication(const Derivation& d);   // ->E over ->I
Derivation reduce_disjunction(const Derivation& d);   // |E over |I
Derivation reduce_box_proper(const Derivation& d);    // []E over []I

// Permutes a box introduction whose major is itself a box introduction:
// the inner application is re-derived inside the outer minor from the
// inner majors, which join the outer major list (duplicates merged).
Derivation permute_box(const Derivation& d);

// Rewrites d into a simplified derivation without trivial formulas: every
// |E concludes bot and no classical detour refutes its own conclusion.
// Conclusion and open assumption classes are preserved; the derivation
// degree never increases.
Derivation simplify(const Derivation& d);

// The applicable transformation for a critical, simplified, trivial-free
// derivation, keyed on the last inference and its maximal major premiss.
ReductionCase classify_critical(const Derivation& d);

// Transforms a critical simplified trivial-free derivation into one of
// strictly smaller degree, same conclusion, open classes non-increasing.
Derivation critical_reduce(const Derivation& d);

// Deepest subtree whose local degree equals the whole derivation's degree
// and whose last inference carries a top-degree maximal premiss. Leftmost
// on depth ties. Such a subtree is critical.
std::optional<Path> find_critical(const Derivation& d);

std::size_t default_budget(const Derivation& d);  // 10 * length^2

// Single classified step at the innermost critical position.
struct StepResult {
  ReductionCase rc;
  Derivation result;
  Measures before, after;
};
std::optional<StepResult> reduce_once(const Derivation& d);

// Repeatedly simplifies and reduces innermost critical subderivations
// until no maximal segment remains. Throws BudgetExhausted when the step
// budget runs out and ReductionError if an intermediate tree fails the
// validity check.
NormalizeResult normalize(const Derivation& d, std::size_t budget);

}  // namespace ns4
