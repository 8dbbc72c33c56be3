#include <CLI11.hpp>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>

#include "mapfdl/bench.hpp"
#include "mapfdl/cbs_dl.hpp"
#include "mapfdl/collision.hpp"
#include "mapfdl/dbs.hpp"
#include "mapfdl/generator.hpp"
#include "mapfdl/ilp.hpp"
#include "mapfdl/ma_dbs.hpp"

namespace {

constexpr int kExitOk = 0;
constexpr int kExitTimeout = 1;
constexpr int kExitInputError = 2;

std::string read_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open " + path);
  std::ostringstream buffer;
  buffer << in.rdbuf();
  return buffer.str();
}

void write_file(const std::string& path, const std::string& content) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot write " + path);
  out << content;
}

// Backend template resolution: explicit flag, then environment, then config
// file (ilp_backend = <template>), then the built-in solver.
std::string resolve_backend(const std::string& flag_value, const std::string& config_path) {
  if (!flag_value.empty()) return flag_value;
  if (const char* env = std::getenv("MAPFDL_ILP_BACKEND"); env && *env) return env;
  if (!config_path.empty()) {
    std::istringstream in(read_file(config_path));
    std::string line;
    while (std::getline(in, line)) {
      if (line.empty() || line[0] == '#') continue;
      const auto eq = line.find('=');
      if (eq == std::string::npos) continue;
      auto trim = [](std::string s) {
        const auto a = s.find_first_not_of(" \t");
        const auto b = s.find_last_not_of(" \t");
        return a == std::string::npos ? std::string() : s.substr(a, b - a + 1);
      };
      if (trim(line.substr(0, eq)) == "ilp_backend") return trim(line.substr(eq + 1));
    }
  }
  return {};
}

std::vector<int> parse_int_list(const std::string& text) {
  std::vector<int> values;
  std::istringstream in(text);
  std::string token;
  while (std::getline(in, token, ',')) values.push_back(std::stoi(token));
  if (values.empty()) throw std::runtime_error("empty list: " + text);
  return values;
}

mapfdl::SearchLimits limits_for(double time_limit_s) {
  mapfdl::SearchLimits limits;
  if (time_limit_s > 0) {
    limits.deadline = std::chrono::steady_clock::now() +
                      std::chrono::microseconds(static_cast<std::int64_t>(time_limit_s * 1e6));
  }
  return limits;
}

int run_solve(const std::string& algorithm, int merge_threshold, double time_limit_s,
              const std::string& in_path, const std::string& out_path,
              const std::string& backend_template) {
  using namespace mapfdl;
  const Instance instance = load_instance(in_path);

  SolveStatus status = SolveStatus::budget_exhausted;
  Plan plan;
  int cost = 0;
  std::int64_t nodes = 0;
  if (algorithm == "ilp") {
    ilp::BackendConfig backend{backend_template};
    const double limit = time_limit_s > 0 ? time_limit_s : 3600.0;
    const ilp::IlpRunResult result = ilp::solve_instance_ilp(instance, backend, limit);
    status = result.status;
    plan = result.plan;
    cost = result.cost;
    nodes = result.nodes;
  } else {
    const SearchLimits limits = limits_for(time_limit_s);
    SolveResult result;
    if (algorithm == "cbs-dl")
      result = solve_cbs_dl(instance, {}, CbsMode::full, limits);
    else if (algorithm == "dbs")
      result = solve_dbs(instance, {}, limits);
    else if (algorithm == "ma-dbs")
      result = solve_ma_dbs(instance, merge_threshold, limits);
    else
      throw std::runtime_error("unknown algorithm: " + algorithm);
    status = result.status;
    plan = result.plan;
    cost = result.cost;
    nodes = result.nodes_expanded;
  }

  if (status != SolveStatus::solved) {
    std::cout << "timeout\n";
    return kExitTimeout;
  }
  const ValidationReport report = validate_plan(instance, plan);
  if (!report.ok()) throw std::logic_error("solver returned an invalid plan");
  std::cout << "cost " << cost << "\n";
  std::cerr << "nodes " << nodes << "\n";
  if (!out_path.empty()) write_file(out_path, format_plan(instance, plan));
  return kExitOk;
}

int run_validate(const std::string& in_path, const std::string& plan_path) {
  using namespace mapfdl;
  const Instance instance = load_instance(in_path);
  Plan plan;
  try {
    plan = parse_plan(instance, read_file(plan_path));
  } catch (const std::exception& e) {
    std::cout << "violation: " << e.what() << "\n";
    return kExitInputError;
  }
  const ValidationReport report = validate_plan(instance, plan);
  if (report.ok()) {
    std::cout << "ok cost " << plan_cost(plan) << "\n";
    return kExitOk;
  }
  for (const std::string& violation : report.path_violations)
    std::cout << "violation: " << violation << "\n";
  for (const Collision& collision : report.collisions)
    std::cout << "violation: " << describe(collision) << "\n";
  return kExitInputError;
}

int run_generate(mapfdl::GeneratorConfig config, const std::string& out_path) {
  const mapfdl::Instance instance = mapfdl::generate_instance(config);
  write_file(out_path, mapfdl::format_instance(instance));
  std::cout << "wrote " << out_path << "\n";
  return kExitOk;
}

int run_export(const std::string& in_path, const std::string& out_path, bool reduce) {
  using namespace mapfdl;
  const Instance instance = load_instance(in_path);
  ilp::FlowNetwork network = ilp::build_network(instance);
  const ilp::ReducedNetwork reduced = reduce
                                          ? ilp::reduce_network(std::move(network), instance)
                                          : ilp::unreduced_network(std::move(network));
  write_file(out_path, ilp::export_model(ilp::build_ilp(reduced)));
  std::cout << "wrote " << out_path << "\n";
  return kExitOk;
}

struct BenchOptions {
  std::string preset = "desk-small";
  std::string compare_preset;
  std::string agents = "5,10,15";
  int count = 10;
  std::uint64_t seed = 1;
  std::string algorithms = "ilp,cbs-dl,dbs,ma-dbs:0,ma-dbs:10,ma-dbs:100";
  double time_limit_s = 10.0;
  int jobs = 1;
  std::string out_dir = "bench_out";
  std::string backend_template;
};

std::vector<mapfdl::Instance> build_suite(const std::string& preset,
                                          const std::vector<int>& agent_counts, int count,
                                          std::uint64_t& seed) {
  std::vector<mapfdl::Instance> suite;
  mapfdl::GeneratorConfig config = mapfdl::preset_config(preset);
  for (const int m : agent_counts) {
    config.agent_count = m;
    for (int k = 0; k < count; ++k) {
      config.seed = seed++;
      config.name = preset + "_m" + std::to_string(m) + "_i" + std::to_string(k);
      suite.push_back(mapfdl::generate_instance(config));
    }
  }
  return suite;
}

int run_bench(const BenchOptions& options) {
  using namespace mapfdl;
  std::vector<bench::AlgorithmSpec> algorithms;
  {
    std::istringstream in(options.algorithms);
    std::string token;
    while (std::getline(in, token, ',')) algorithms.push_back(bench::parse_algorithm(token));
  }
  const std::vector<int> agent_counts = parse_int_list(options.agents);
  std::filesystem::create_directories(options.out_dir);
  const ilp::BackendConfig backend{options.backend_template};

  std::uint64_t seed = options.seed;
  const std::vector<Instance> suite =
      build_suite(options.preset, agent_counts, options.count, seed);
  const bench::BenchResult result =
      bench::run_benchmark(suite, algorithms, options.time_limit_s, options.jobs, backend);

  const std::filesystem::path dir(options.out_dir);
  write_file((dir / "raw.csv").string(), bench::raw_csv(result));
  write_file((dir / "success_rate.csv").string(), bench::success_rate_csv(result));
  write_file((dir / "mean_all.csv").string(), bench::mean_all_csv(result));
  write_file((dir / "mean_solved_by_all.csv").string(), bench::mean_solved_by_all_csv(result));
  std::string summary = bench::summary_text(result);

  if (!options.compare_preset.empty()) {
    const std::vector<Instance> other =
        build_suite(options.compare_preset, agent_counts, options.count, seed);
    const bench::BenchResult other_result =
        bench::run_benchmark(other, algorithms, options.time_limit_s, options.jobs, backend);
    write_file((dir / "raw_compare.csv").string(), bench::raw_csv(other_result));
    const std::string trend =
        bench::trend_report(result, options.preset, other_result, options.compare_preset);
    write_file((dir / "trend_report.txt").string(), trend);
    summary += "\ntrend report: see trend_report.txt\n";
  }
  write_file((dir / "summary.txt").string(), summary);
  std::cout << bench::summary_text(result);
  return result.issues.empty() ? kExitOk : kExitInputError;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"MAPF-DL solver suite"};
  app.require_subcommand(1);

  // solve
  std::string solve_alg;
  int solve_merge_threshold = 0;
  double solve_time_limit = 0.0;
  std::string solve_in, solve_out, solve_backend, solve_backend_config;
  CLI::App* solve = app.add_subcommand("solve", "solve an instance");
  solve->add_option("--alg", solve_alg, "ilp|cbs-dl|dbs|ma-dbs")->required();
  solve->add_option("--merge-threshold", solve_merge_threshold, "MA-DBS merge threshold B");
  solve->add_option("--time-limit", solve_time_limit, "seconds; 0 = unlimited");
  solve->add_option("--in", solve_in, "instance file")->required();
  solve->add_option("--out", solve_out, "plan file to write");
  solve->add_option("--backend", solve_backend, "ILP backend command template");
  solve->add_option("--backend-config", solve_backend_config,
                    "key=value config file with ilp_backend=<template>");

  // validate
  std::string validate_in, validate_plan_path;
  CLI::App* validate = app.add_subcommand("validate", "validate a plan file");
  validate->add_option("--in", validate_in, "instance file")->required();
  validate->add_option("--plan", validate_plan_path, "plan file")->required();

  // generate
  std::string gen_preset, gen_out, gen_distances;
  mapfdl::GeneratorConfig gen_config;
  int gen_slack = -1;
  CLI::App* generate = app.add_subcommand("generate", "generate a random instance");
  generate->add_option("--preset", gen_preset, "tiny|desk-small|desk-large|small|medium|large");
  generate->add_option("--width", gen_config.width);
  generate->add_option("--height", gen_config.height);
  generate->add_option("--block-prob", gen_config.block_probability);
  generate->add_option("--deadline", gen_config.deadline);
  generate->add_option("--distances", gen_distances, "comma-separated admissible distances");
  generate->add_option("--agents", gen_config.agent_count)->required();
  generate->add_option("--seed", gen_config.seed);
  generate->add_option("--slack", gen_slack, "deadline = max agent distance + slack");
  generate->add_option("--name", gen_config.name);
  generate->add_option("--out", gen_out, "instance file to write")->required();

  // bench
  BenchOptions bench_options;
  CLI::App* bench_cmd = app.add_subcommand("bench", "run a benchmark suite");
  bench_cmd->add_option("--preset", bench_options.preset);
  bench_cmd->add_option("--compare-preset", bench_options.compare_preset,
                        "second preset for the trend report");
  bench_cmd->add_option("--agents", bench_options.agents, "comma-separated agent counts");
  bench_cmd->add_option("--count", bench_options.count, "instances per agent count");
  bench_cmd->add_option("--seed", bench_options.seed);
  bench_cmd->add_option("--algs", bench_options.algorithms);
  bench_cmd->add_option("--time-limit", bench_options.time_limit_s);
  bench_cmd->add_option("--jobs", bench_options.jobs);
  bench_cmd->add_option("--out-dir", bench_options.out_dir);
  bench_cmd->add_option("--backend", bench_options.backend_template);

  // export-ilp
  std::string export_in, export_out;
  bool export_no_reduce = false;
  CLI::App* export_ilp = app.add_subcommand("export-ilp", "write the ILP model file");
  export_ilp->add_option("--in", export_in, "instance file")->required();
  export_ilp->add_option("--out", export_out, "model file to write")->required();
  export_ilp->add_flag("--no-reduce", export_no_reduce, "skip per-commodity pruning");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    if (e.get_exit_code() == 0) return app.exit(e);  // --help
    std::cerr << app.help() << "\n";
    std::cerr << "error: " << e.what() << "\n";
    return kExitInputError;
  }

  try {
    if (solve->parsed()) {
      return run_solve(solve_alg, solve_merge_threshold, solve_time_limit, solve_in, solve_out,
                       resolve_backend(solve_backend, solve_backend_config));
    }
    if (validate->parsed()) return run_validate(validate_in, validate_plan_path);
    if (generate->parsed()) {
      if (!gen_preset.empty()) {
        const int agents = gen_config.agent_count;
        const std::uint64_t seed = gen_config.seed;
        const std::string name = gen_config.name;
        gen_config = mapfdl::preset_config(gen_preset);
        gen_config.agent_count = agents;
        gen_config.seed = seed;
        gen_config.name = name;
      }
      if (!gen_distances.empty()) gen_config.distance_set = parse_int_list(gen_distances);
      if (gen_slack >= 0) gen_config.slack_deadline = gen_slack;
      return run_generate(gen_config, gen_out);
    }
    if (bench_cmd->parsed()) {
      bench_options.backend_template = resolve_backend(bench_options.backend_template, "");
      return run_bench(bench_options);
    }
    if (export_ilp->parsed()) return run_export(export_in, export_out, !export_no_reduce);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitInputError;
  }
  return kExitInputError;
}
