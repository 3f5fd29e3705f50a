// Command-line front end. Machine-readable output goes to --output (or
// stdout), a short human summary to stderr.

#include <fstream>
#include <iostream>
#include <sstream>

#include "CLI11.hpp"
#include "hodgelim.hpp"
#include "oracles.hpp"

using namespace hodgelim;
using io::Json;

namespace {

struct Job {
  std::string input, output;
  int budget = 64;
  std::uint64_t seed = 1;
  bool seed_set = false;
  unsigned threads = 1;
  bool heuristic = false;
  bool strong = false;
  std::size_t points = 3;
  std::size_t per_chamber = 10;
  std::size_t attempts = 4000;
};

Json read_json(const std::string& path) {
  if (path.empty()) throw std::invalid_argument("--input is required");
  std::ifstream in(path);
  if (!in) throw std::invalid_argument("cannot open " + path);
  try {
    return Json::parse(in);
  } catch (const nlohmann::json::exception& e) {
    throw std::invalid_argument(std::string("invalid JSON: ") + e.what());
  }
}

void emit(const Job& job, const std::string& text) {
  if (job.output.empty()) {
    std::cout << text;
    return;
  }
  std::ofstream out(job.output, std::ios::binary);
  if (!out) throw std::invalid_argument("cannot write " + job.output);
  out << text;
}

IterationConfig iteration(const Job& job) {
  IterationConfig cfg;
  cfg.budget = job.budget;
  cfg.search.allow_heuristic = job.heuristic;
  cfg.search.threads = job.threads;
  if (job.seed_set) cfg.search.order_seed = job.seed;
  return cfg;
}

int run_validate(const Job& job) {
  const FuchsianSystem s = io::system_from_json(read_json(job.input));
  const auto eig = validate_system(s).eigenvalues();
  Json j = io::kostov_json(eig);
  j["valid"] = true;
  j["system"] = io::system_json(s);
  emit(job, j.dump(2) + "\n");
  std::cerr << "valid: rank " << s.rank << ", " << s.size() << " points, kostov generic " << (j["generic"].get<bool>() ? "yes" : "no") << "\n";
  return 0;
}

int run_limit(const Job& job) {
  const FuchsianSystem s = io::system_from_json(read_json(job.input));
  const IterationConfig cfg = iteration(job);
  const PartialOper po = iterate_to_partial_oper(s, cfg);
  const StratumSignature sig = classify_signature(po.limit, cfg.search);
  emit(job, io::trace_lines(po));
  std::cerr << io::limit_json(po, sig).dump() << "\n";
  return 0;
}

int run_kostov(const Job& job) {
  const Json in = read_json(job.input);
  const auto eig = in.contains("eigenvalues") ? io::eigenvalues_from_json(in) : validate_system(io::system_from_json(in)).eigenvalues();
  const Json j = io::kostov_json(eig);
  emit(job, j.dump(2) + "\n");
  std::cerr << "generic: " << (j["generic"].get<bool>() ? "true" : "false") << "\n";
  return 0;
}

int run_walls(const Job& job) {
  const WallArrangement a = enumerate_walls(symmetric_rank2_model(job.points));
  emit(job, io::arrangement_json(a).dump(2) + "\n");
  std::cerr << a.walls.size() << " walls\n";
  return 0;
}

int run_scan(const Job& job) {
  ScanConfig cfg;
  cfg.points = job.points;
  cfg.per_chamber = job.per_chamber;
  cfg.attempts = job.attempts;
  cfg.seed = job.seed;
  cfg.threads = job.threads;
  cfg.iteration = iteration(job);
  const ScanReport r = chamber_scan(cfg);
  emit(job, io::scan_json(r).dump(2) + "\n");
  std::cerr << r.samples.size() << " samples in " << r.chambers.size() << " chambers, constant per chamber: " << (r.all_constant() ? "yes" : "no") << "\n";
  return 0;
}

int run_defdim(const Job& job) {
  const FuchsianSystem s = io::system_from_json(read_json(job.input));
  const PartialOper po = iterate_to_partial_oper(s, iteration(job));
  const DefDims d = graded_def_dims(s, po.filtration, job.strong);
  emit(job, io::defdims_json(d).dump(2) + "\n");
  std::cerr << "h1 = " << d.total.h1 << ", graded sum = " << d.graded_h1_sum() << "\n";
  return 0;
}

// Compares the best theta-invariant line of every step's graded system with
// an exhaustive enumeration.
int run_oracle(const Job& job) {
  const FuchsianSystem s = io::system_from_json(read_json(job.input));
  const IterationConfig cfg = iteration(job);
  GTFiltration F = GTFiltration::trivial(s.rank);
  Json steps = Json::array();
  bool agree = true;
  for (int step = 0;; ++step) {
    if (step >= cfg.budget) throw BudgetExceeded("oracle: step budget exhausted");
    const GradedRealization g = kodaira_spencer(s, F);
    const SearchResult res = search_subobjects(g.system, cfg.search);
    std::optional<Rat> searched;
    for (const auto& f : res.families)
      if (f.family == "lines") searched = f.slope;
    const auto brute = oracle::best_line(g.system);
    const bool same = (searched.has_value() == brute.has_value()) && (!brute || *searched == brute->par_degree);
    agree = agree && same;
    steps.push_back(Json{{"step", step},
                         {"search", searched ? Json(io::rat_str(*searched)) : Json(nullptr)},
                         {"oracle", brute ? Json(io::rat_str(brute->par_degree)) : Json(nullptr)},
                         {"agree", same}});
    const auto d = max_destabilizer(g.system, cfg.search);
    if (!d) break;
    F = modify(s, F, g, d->sub);
  }
  emit(job, Json{{"steps", steps}, {"agree", agree}}.dump(2) + "\n");
  std::cerr << "oracle agreement: " << (agree ? "yes" : "no") << "\n";
  if (!agree) throw CertificationError("line search disagrees with exhaustive enumeration");
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Limits of Fuchsian systems under iterated destabilizing modifications"};
  app.require_subcommand(1);
  Job job;
  auto common = [&job](CLI::App* c) {
    c->add_option("--input", job.input, "input JSON file");
    c->add_option("--output", job.output, "output file (default stdout)");
    c->add_option("--budget", job.budget, "step budget")->check(CLI::PositiveNumber);
    c->add_option("--seed", job.seed, "random seed")->each([&job](const std::string&) { job.seed_set = true; });
    c->add_option("--threads", job.threads, "worker threads")->check(CLI::PositiveNumber);
    c->add_flag("--heuristic-rank", job.heuristic, "allow graded rank >= 4 (incomplete search)");
    c->add_flag("--strong-parabolic", job.strong, "strongly parabolic C^1 in deformation complexes");
    c->add_option("--points", job.points, "number of points for walls/scan")->check(CLI::Range(2, 5));
    c->add_option("--per-chamber", job.per_chamber, "samples per chamber");
    c->add_option("--attempts", job.attempts, "candidate parameter points");
  };
  std::vector<std::pair<CLI::App*, int (*)(const Job&)>> cmds{
      {app.add_subcommand("validate", "check an input system"), run_validate},
      {app.add_subcommand("limit", "iterate to the limit and write the trace"), run_limit},
      {app.add_subcommand("kostov", "Kostov genericity of eigenvalue data"), run_kostov},
      {app.add_subcommand("walls", "walls of the symmetric rank-2 model"), run_walls},
      {app.add_subcommand("scan", "sample chambers and classify limits"), run_scan},
      {app.add_subcommand("defdim", "deformation dimensions at the limit"), run_defdim},
      {app.add_subcommand("oracle", "compare the line search with exhaustive enumeration"), run_oracle},
  };
  for (auto& c : cmds) common(c.first);
  CLI11_PARSE(app, argc, argv);
  try {
    for (auto& c : cmds)
      if (c.first->parsed()) return c.second(job);
  } catch (const BudgetExceeded& e) {
    std::cerr << "budget exceeded: " << e.what() << "\n";
    return 2;
  } catch (const CertificationError& e) {
    std::cerr << "certification failure: " << e.what() << "\n";
    return 3;
  } catch (const GrStabilityError& e) {
    std::cerr << "precondition failed: " << e.what() << "\n";
    return 1;
  } catch (const std::invalid_argument& e) {
    std::cerr << "invalid input: " << e.what() << "\n";
    return 1;
  } catch (const std::exception& e) {
    std::cerr << "certification failure: " << e.what() << "\n";
    return 3;
  }
  return 1;
}
