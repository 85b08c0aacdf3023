#include <cstdlib>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>

#include <CLI11.hpp>

#include "ns4/analysis.hpp"
#include "ns4/check.hpp"
#include "ns4/derivation.hpp"
#include "ns4/proof_text.hpp"
#include "ns4/reduce.hpp"

namespace {

// Exit codes: 0 success, 1 semantic failure, 2 I/O or parse failure,
// 3 budget exhausted.
constexpr int kOk = 0;
constexpr int kSemantic = 1;
constexpr int kIo = 2;
constexpr int kBudget = 3;

struct Input {
  std::string path;
  std::string text;
  ns4::Derivation derivation = ns4::Derivation::assume(ns4::Formula::bottom());
};

int load(const std::string& path, Input& in) {
  std::ifstream f(path, std::ios::binary);
  if (!f) {
    std::cerr << path << ": cannot open\n";
    return kIo;
  }
  std::ostringstream ss;
  ss << f.rdbuf();
  in.path = path;
  in.text = ss.str();
  try {
    in.derivation = ns4::parse_derivation(in.text);
  } catch (const ns4::ParseError& e) {
    std::cerr << path << ":" << e.span.begin << "-" << e.span.end << ": parse: " << e.what()
              << "\n";
    return kIo;
  }
  return kOk;
}

ns4::System parse_system(const std::string& s) {
  if (s == "ns4") return ns4::System::Ns4;
  if (s == "prawitz-v1") return ns4::System::PrawitzV1;
  if (s == "prawitz-v2") return ns4::System::PrawitzV2;
  if (s == "prawitz-v3") return ns4::System::PrawitzV3;
  throw CLI::ValidationError("system", "unknown system '" + s + "'");
}

void print_violations(const Input& in, const ns4::CheckReport& rep) {
  for (const auto& v : rep.violations) {
    const auto sp = subtree_at(in.derivation, v.path).span();
    std::cout << in.path << ":" << sp.begin << "-" << sp.end << ": " << v.rule << ": "
              << v.reason << " (at " << ns4::path_to_string(v.path) << ")\n";
  }
}

ns4::RenderFormat parse_format(const std::string& s) {
  if (s == "sexpr") return ns4::RenderFormat::CanonicalSexpr;
  if (s == "ascii") return ns4::RenderFormat::AsciiTree;
  if (s == "latex") return ns4::RenderFormat::LatexTree;
  throw CLI::ValidationError("format", "unknown format '" + s + "'");
}

std::string stem_of(const std::string& path) {
  const auto dot = path.rfind(".nd");
  return dot == std::string::npos ? path : path.substr(0, dot);
}

int write_file(const std::string& path, const std::string& content) {
  std::ofstream f(path, std::ios::binary);
  if (!f) {
    std::cerr << path << ": cannot write\n";
    return kIo;
  }
  f << content;
  return kOk;
}

std::string measures_line(const ns4::Measures& m) {
  return "G=" + std::to_string(m.degree) + " I=" + ns4::to_string(m.index) +
         " #G=" + std::to_string(m.top_maximal) + " len=" + std::to_string(m.length);
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"NS4 proof kernel: checking, analysis and normalization for classical S4 "
               "natural deduction"};
  app.require_subcommand(1);

  std::string file;
  std::string system = "ns4";
  std::string format = "ascii";
  std::string output;
  std::string trace_path;
  long long budget = -1;

  auto* c_check = app.add_subcommand("check", "validate a derivation against a rule system");
  c_check->add_option("file", file)->required();
  c_check->add_option("--system", system, "ns4 | prawitz-v1 | prawitz-v2 | prawitz-v3");

  auto* c_analyze = app.add_subcommand("analyze", "print measures and maximal segments");
  c_analyze->add_option("file", file)->required();
  c_analyze->add_option("--system", system);

  auto* c_norm = app.add_subcommand("normalize", "reduce to normal form");
  c_norm->add_option("file", file)->required();
  c_norm->add_option("--budget", budget, "outer step budget (default 10*len^2)")
      ->envname("NS4_BUDGET");
  c_norm->add_option("--format", format, "sexpr | ascii | latex");
  c_norm->add_option("--output", output, "output path (default <stem>.normal.nd)");
  c_norm->add_option("--trace", trace_path, "trace path (default <stem>.trace)");

  auto* c_reduce = app.add_subcommand("reduce", "apply one classified reduction step");
  c_reduce->add_option("file", file)->required();
  c_reduce->add_option("--output", output, "output path (default stdout)");

  auto* c_render = app.add_subcommand("render", "pretty-print a derivation");
  c_render->add_option("file", file)->required();
  c_render->add_option("--format", format, "sexpr | ascii | latex");

  CLI11_PARSE(app, argc, argv);

  Input in;
  if (int rc = load(file, in); rc != kOk) return rc;

  try {
    if (c_check->parsed()) {
      const auto rep = ns4::check_system(in.derivation, parse_system(system));
      print_violations(in, rep);
      std::cout << (rep.valid ? "valid" : "invalid") << " [" << system << "] "
                << ns4::to_string(in.derivation.conclusion()) << "\n";
      return rep.valid ? kOk : kSemantic;
    }

    if (c_analyze->parsed()) {
      const auto rep = ns4::check_system(in.derivation, parse_system(system));
      if (!rep.valid) {
        print_violations(in, rep);
        return kSemantic;
      }
      const auto a = ns4::analyze(in.derivation);
      std::cout << "G=" << a.degree << " I=" << ns4::to_string(a.index) << " #G="
                << a.top_maximal_formulas << " len=" << a.length
                << " normal=" << (a.normal ? "true" : "false")
                << " simplified=" << (a.simplified ? "true" : "false")
                << " critical=" << (ns4::is_critical(in.derivation) ? "true" : "false")
                << " trivial=" << a.trivials.size() << "\n";
      for (const auto& s : a.maximal)
        std::cout << "maximal: " << ns4::to_string(s.formula) << " degree="
                  << ns4::degree(s.formula) << " length=" << s.length() << " at "
                  << ns4::path_to_string(s.occurrences.front()) << "\n";
      return kOk;
    }

    if (c_norm->parsed()) {
      const std::size_t b = budget >= 0 ? static_cast<std::size_t>(budget)
                                        : ns4::default_budget(in.derivation);
      const std::string out_path = output.empty() ? stem_of(file) + ".normal.nd" : output;
      const std::string tr_path = trace_path.empty() ? stem_of(file) + ".trace" : trace_path;
      try {
        const auto res = ns4::normalize(in.derivation, b);
        if (int rc = write_file(tr_path, res.trace.to_string()); rc != kOk) return rc;
        if (int rc = write_file(out_path, ns4::render(res.result, parse_format(format)) +
                                              (format == "sexpr" ? "\n" : ""));
            rc != kOk)
          return rc;
        std::cout << "normal form written to " << out_path << " (" << res.trace.steps.size()
                  << " steps)\n";
        if (!res.trace.index_monotone())
          std::cout << "note: index was not strictly decreasing across steps\n";
        return kOk;
      } catch (const ns4::BudgetExhausted& e) {
        write_file(tr_path, e.trace.to_string());
        std::cerr << "budget exhausted after " << e.trace.steps.size() << " steps\n";
        return kBudget;
      }
    }

    if (c_reduce->parsed()) {
      const auto step = ns4::reduce_once(in.derivation);
      if (!step) {
        std::cerr << "no applicable reduction\n";
        return kSemantic;
      }
      std::cout << "case=" << ns4::case_name(step->rc) << "\n"
                << "before: " << measures_line(step->before) << "\n"
                << "after:  " << measures_line(step->after) << "\n";
      const std::string text =
          ns4::render(step->result, ns4::RenderFormat::CanonicalSexpr) + "\n";
      if (output.empty())
        std::cout << text;
      else if (int rc = write_file(output, text); rc != kOk)
        return rc;
      return kOk;
    }

    if (c_render->parsed()) {
      std::cout << ns4::render(in.derivation, parse_format(format));
      if (format == "sexpr") std::cout << "\n";
      return kOk;
    }
  } catch (const ns4::ClassificationError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kSemantic;
  } catch (const ns4::NotARedex& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kSemantic;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kSemantic;
  }
  return kOk;
}
