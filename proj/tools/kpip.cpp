#include <CLI11.hpp>

#include <cstdio>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>

#include "kpip/bench.hpp"
#include "kpip/errors.hpp"
#include "kpip/formula.hpp"
#include "kpip/instance_io.hpp"
#include "kpip/oracle.hpp"
#include "kpip/reduction.hpp"
#include "kpip/svg.hpp"
#include "kpip/tri_insert.hpp"
#include "kpip/verifier.hpp"

namespace {

using namespace kpip;

enum Exit { Ok = 0, Failure = 1, No = 2, Budget = 3, Usage = 64, NoInput = 66 };

struct FileError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

std::string slurp(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw FileError("cannot read " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void dump(const std::string& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw FileError("cannot write " + path);
  out << text << '\n';
  if (!out) throw FileError("write failed: " + path);
}

int run_solve(const std::string& in, const std::string& out) {
  auto res = tri::solve(parse_instance(slurp(in)));
  if (!res.feasible) return No;
  dump(out, write_solution(res.solution));
  return Ok;
}

int run_verify(const std::string& in, const std::string& sol) {
  auto r = verify(parse_instance(slurp(in)), parse_solution(slurp(sol)));
  if (r.accepted) return Ok;
  std::cerr << "rejected: " << to_string(r.reason);
  if (!r.detail.empty()) std::cerr << ": " << r.detail;
  std::cerr << '\n';
  return No;
}

int run_oracle(const std::string& in, bool general, long long budget) {
  Instance inst = parse_instance(slurp(in));
  oracle::Status status;
  if (general) {
    oracle::GeneralOptions opt;
    if (budget > 0) opt.node_budget = budget;
    opt.order = oracle::InsertionOrder::Dynamic;
    status = oracle::exact_solve_general(inst, opt).status;
  } else {
    oracle::TriangulationOptions opt;
    if (budget > 0) opt.max_products = budget;
    try {
      status = oracle::exact_solve_triangulation(inst, opt).status;
    } catch (const Error& e) {
      if (e.code() != ErrorCode::SearchSpaceTooLarge) throw;
      status = oracle::Status::BudgetExceeded;
    }
  }
  std::cout << oracle::to_string(status) << '\n';
  switch (status) {
    case oracle::Status::Feasible: return Ok;
    case oracle::Status::Infeasible: return No;
    case oracle::Status::BudgetExceeded: return Budget;
  }
  return Failure;
}

int run_reduce(const std::string& formula, int k, const std::string& variant, const std::string& out,
               const std::string& certificate, const std::string& sol_out) {
  auto f = reduction::parse_formula(slurp(formula));
  auto v = variant == "path" ? reduction::Variant::Path : reduction::Variant::Matching;
  auto c = reduction::compile(f, k, v);
  dump(out, write_instance(c.instance));
  if (!certificate.empty()) {
    auto a = reduction::parse_assignment(slurp(certificate));
    dump(sol_out, write_solution(reduction::build_certificate(f, a, c.instance, c.atlas)));
  }
  return Ok;
}

int run_gen(int n, int m, std::uint64_t seed, const std::string& structure, const std::string& out) {
  FStructure s = structure == "path" ? FStructure::Path
                 : structure == "matching" ? FStructure::Matching
                                           : FStructure::None;
  PlaneGraph g = generate_stacked_triangulation(n, seed);
  auto F = sample_complement_edges(g, m, seed + 1, s);
  auto coords = stacked_coordinates(g);
  dump(out, write_instance(make_instance(std::move(g), std::move(F), 1, s, std::move(coords))));
  return Ok;
}

int run_render(const std::string& in, const std::string& sol, const std::string& out) {
  Instance inst = parse_instance(slurp(in));
  std::optional<Solution> s;
  if (!sol.empty()) s = parse_solution(slurp(sol));
  dump(out, render_svg(inst, s));
  return Ok;
}

int run_bench(int max_n) {
  std::cout << "n,millis\n";
  for (int n : bench::decades(max_n)) {
    auto s = bench::solve_scaling({n}).front();
    std::cout << s.n << ',' << s.millis << std::endl;
  }
  return Ok;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"k-planar edge insertion toolkit"};
  app.require_subcommand(1);

  std::string in, out, sol, formula, variant = "path", certificate, sol_out, structure = "none";
  bool general = false;
  long long budget = 0;
  int k = 1, n = 0, m = 0, max_n = 0;
  std::uint64_t seed = 1;

  auto* solve = app.add_subcommand("solve", "insert F into a triangulation with k = 1");
  solve->add_option("--in", in)->required();
  solve->add_option("--out", out)->required();

  auto* ver = app.add_subcommand("verify", "check a solution");
  ver->add_option("--in", in)->required();
  ver->add_option("--sol", sol)->required();

  auto* orc = app.add_subcommand("oracle", "brute-force decision");
  orc->add_option("--in", in)->required();
  orc->add_flag("--general", general, "search routes in arbitrary plane graphs");
  orc->add_option("--budget", budget, "search node / product limit")->check(CLI::PositiveNumber);

  auto* red = app.add_subcommand("reduce", "compile a monotone 3-SAT formula");
  red->add_option("--formula", formula)->required();
  red->add_option("--k", k)->required()->check(CLI::PositiveNumber);
  red->add_option("--variant", variant)->check(CLI::IsMember({"path", "matching"}));
  red->add_option("--out", out)->required();
  auto* cert = red->add_option("--certificate", certificate, "assignment JSON");
  red->add_option("--sol-out", sol_out)->needs(cert);
  cert->needs("--sol-out");

  auto* gen = app.add_subcommand("gen", "random stacked triangulation instance");
  gen->add_option("--n", n)->required()->check(CLI::Range(3, 1 << 26));
  gen->add_option("--f", m)->required()->check(CLI::NonNegativeNumber);
  gen->add_option("--seed", seed);
  gen->add_option("--structure", structure)->check(CLI::IsMember({"none", "matching", "path"}));
  gen->add_option("--out", out)->required();

  auto* ren = app.add_subcommand("render", "draw an instance as SVG");
  ren->add_option("--in", in)->required();
  ren->add_option("--sol", sol);
  ren->add_option("--out", out)->required();

  auto* ben = app.add_subcommand("bench", "solve-time scaling, CSV on stdout");
  ben->add_option("--max-n", max_n)->required()->check(CLI::Range(4, 1 << 26));

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return Usage;
  }

  try {
    if (*solve) return run_solve(in, out);
    if (*ver) return run_verify(in, sol);
    if (*orc) return run_oracle(in, general, budget);
    if (*red) return run_reduce(formula, k, variant, out, certificate, sol_out);
    if (*gen) return run_gen(n, m, seed, structure, out);
    if (*ren) return run_render(in, sol, out);
    if (*ben) return run_bench(max_n);
  } catch (const FileError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return NoInput;
  } catch (const Error& e) {
    std::cerr << "error: " << e.what() << '\n';
    return Failure;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return Failure;
  }
  return Usage;
}
