#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <map>

#include "ns4/check.hpp"
#include "ns4/proof_text.hpp"
#include "test_util.hpp"

using namespace ns4;
using namespace ns4::testutil;

namespace {

const Formula a = Formula::atom("a");
const Formula b = Formula::atom("b");
const Formula c = Formula::atom("c");

// Binding-canonical form: labels renumbered by first preorder occurrence.
// Two derivations are binding-isomorphic iff their canonical forms are
// strictly equal; used as an independent check of equal_up_to_relabeling.
Derivation canonical_labels(const Derivation& d) {
  std::map<Label, Label> m;
  Label next = 1;
  struct Walk {
    std::map<Label, Label>& m;
    Label& next;
    void see(Label l) {
      if (l != kNoLabel && !m.count(l)) m[l] = next++;
    }
    void go(const Derivation& n) {
      see(n.label());
      see(n.label2());
      for (const auto& ch : n.children()) go(ch);
    }
  } w{m, next};
  w.go(d);
  std::vector<std::pair<Label, Label>> v(m.begin(), m.end());
  return relabel_map(d, v);
}

}  // namespace

TEST_CASE("conclusions are computed by the factories") {
  const Derivation box_a = Derivation::assume(Formula::box(a));
  CHECK(box_a.conclusion() == Formula::box(a));
  CHECK(Derivation::box_e(box_a).conclusion() == a);
  const Derivation pair = Derivation::assume(Formula::conj(Formula::box(a), Formula::box(b)));
  CHECK(Derivation::and_el(pair).conclusion() == Formula::box(a));
  CHECK_THROWS_AS(Derivation::box_e(Derivation::assume(a)), StructureError);
  CHECK_THROWS_AS(Derivation::imp_e(Derivation::assume(Formula::imp(a, b)),
                                    Derivation::assume(c)),
                  StructureError);
}

TEST_CASE("open assumptions") {
  CHECK(open_assumptions(Derivation::assume(a)) == std::vector<Formula>{a});

  const Derivation der1 = load_corpus("prawitz-der1.nd");
  const Formula pair = Formula::conj(Formula::box(a), Formula::box(b));
  CHECK(open_assumptions(der1) == std::vector<Formula>({pair, pair}));

  // a fully discharged box introduction leaves only the majors' openings
  const Derivation eq3 = load_corpus("eq3-left.nd");
  const Formula boxes = Formula::conj(Formula::box(Formula::atom("p")),
                                      Formula::box(Formula::atom("q")));
  CHECK(open_assumptions(eq3) == std::vector<Formula>({boxes, boxes}));
}

TEST_CASE("check_ns4 accepts the vector-form corpus") {
  for (const char* name :
       {"eq3-left.nd", "eq3-right.nd", "eq4-left.nd", "eq4-right.nd", "medeiros-cex-ns4.nd",
        "der1-ns4.nd", "yuuki-eq5.nd", "yuuki-eq6.nd", "already-normal.nd"}) {
    const CheckReport rep = check_ns4(load_corpus(name));
    CHECK_MESSAGE(rep.valid, name << ": " << (rep.violations.empty()
                                                  ? ""
                                                  : rep.violations.front().reason));
  }
}

TEST_CASE("check_ns4 rejects duplicate majors") {
  const Derivation d = Derivation::box_i(
      {Derivation::assume(Formula::box(a)), Derivation::assume(Formula::box(a))}, 1,
      Derivation::box_e(Derivation::assume(Formula::box(a), 1)));
  const CheckReport rep = check_ns4(d);
  CHECK_FALSE(rep.valid);
  bool found = false;
  for (const auto& v : rep.violations)
    if (v.reason.find("distinct") != std::string::npos) found = true;
  CHECK(found);
}

TEST_CASE("check_ns4 rejects a minor with an extra open assumption") {
  const Derivation minor = Derivation::and_i(
      Derivation::box_e(Derivation::assume(Formula::box(a), 1)), Derivation::assume(c));
  const Derivation d = Derivation::box_i({Derivation::assume(Formula::box(a))}, 1, minor);
  const CheckReport rep = check_ns4(d);
  CHECK_FALSE(rep.valid);
  bool found = false;
  for (const auto& v : rep.violations)
    if (v.reason.find("outside the discharged class") != std::string::npos) found = true;
  CHECK(found);
}

TEST_CASE("prawitz verdicts on the corpus") {
  const Derivation der1 = load_corpus("prawitz-der1.nd");
  const Derivation der1r = load_corpus("prawitz-der1-reduct.nd");
  CHECK(check_prawitz(der1, System::PrawitzV1).valid);
  const CheckReport v1r = check_prawitz(der1r, System::PrawitzV1);
  CHECK_FALSE(v1r.valid);
  REQUIRE(v1r.violations.size() == 1);
  CHECK(v1r.violations[0].path == Path({0, 0}));  // the box introduction

  CHECK(check_prawitz(der1, System::PrawitzV2).valid);
  CHECK(check_prawitz(der1r, System::PrawitzV2).valid);

  const Derivation bb = load_corpus("prawitz-boxbox.nd");
  const Derivation bbr = load_corpus("prawitz-boxbox-reduct.nd");
  CHECK(check_prawitz(bb, System::PrawitzV2).valid);
  const CheckReport v2r = check_prawitz(bbr, System::PrawitzV2);
  CHECK_FALSE(v2r.valid);
  REQUIRE(v2r.violations.size() == 1);
  CHECK(v2r.violations[0].path == Path{});
  CHECK(v2r.violations[0].reason.find("essentially modal") != std::string::npos);
  // the third restriction accepts this reduct
  CHECK(check_prawitz(bbr, System::PrawitzV3).valid);

  const Derivation mc = load_corpus("medeiros-cex.nd");
  const Derivation mcr = load_corpus("medeiros-cex-reduct.nd");
  CHECK(check_prawitz(mc, System::PrawitzV3).valid);
  CHECK_FALSE(check_prawitz(mcr, System::PrawitzV3).valid);

  // vector form is rejected outright
  CHECK_FALSE(check_prawitz(load_corpus("eq3-left.nd"), System::PrawitzV1).valid);
}

TEST_CASE("closed-premiss box introduction policy") {
  const Derivation d = parse_derivation("(boxI () 1 (impI a 2 (assume a 2)))");
  CHECK(check_prawitz(d, System::PrawitzV1).valid);
  CheckOptions opts;
  opts.allow_closed_box_premiss = false;
  CHECK_FALSE(check_prawitz(d, System::PrawitzV1, opts).valid);
}

TEST_CASE("substitute") {
  const Derivation leaf = Derivation::assume(a, 3);
  const Derivation pi = Derivation::and_el(Derivation::assume(Formula::conj(a, b)));
  CHECK(equal(substitute(leaf, 3, pi), pi));

  // vacuous: no labeled leaves
  const Derivation d = Derivation::imp_i(a, 1, Derivation::assume(a, 1));
  CHECK(equal(substitute(d, 9, pi), d));

  // conclusion preserved, open accounting
  const Derivation body = Derivation::and_i(Derivation::assume(a, 3), Derivation::assume(a, 3));
  const Derivation sub = substitute(body, 3, pi);
  CHECK(sub.conclusion() == body.conclusion());
  CHECK(open_assumptions(sub) ==
        std::vector<Formula>({Formula::conj(a, b), Formula::conj(a, b)}));

  CHECK_THROWS_AS(substitute(Derivation::assume(b, 3), 3, pi), SubstitutionError);
}

TEST_CASE("fresh_relabel") {
  const Derivation d = parse_derivation("(impI a 1 (impI b 2 (assume a 1)))");
  const Derivation r = fresh_relabel(d, {1});
  for (Label l : all_labels(r)) CHECK(l != 1);
  CHECK(equal_up_to_relabeling(d, r));
  CHECK(equal(canonical_labels(d), canonical_labels(r)));

  // double application is binding-isomorphic to a single one
  const Derivation r2 = fresh_relabel(r, {1});
  CHECK(equal(canonical_labels(r2), canonical_labels(r)));

  // relabeling away from nothing keeps the binding graph
  const Derivation r0 = fresh_relabel(d, {});
  CHECK(equal_up_to_relabeling(d, r0));
}

TEST_CASE("equal_up_to_relabeling distinguishes binding structure") {
  const Derivation x = parse_derivation("(impI a 1 (impI a 2 (assume a 1)))");
  const Derivation y = parse_derivation("(impI a 1 (impI a 2 (assume a 2)))");
  CHECK_FALSE(equal_up_to_relabeling(x, y));
  CHECK(equal_up_to_relabeling(x, fresh_relabel(x, {5})));
}
