#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "mapfdl/ilp.hpp"
#include "mapfdl/instance.hpp"

namespace mapfdl {
namespace bench {

struct AlgorithmSpec {
  enum class Kind : std::uint8_t { cbs_dl, dbs, ma_dbs, ilp };
  Kind kind = Kind::cbs_dl;
  int merge_threshold = 0;  // ma_dbs only

  std::string label() const;   // CBS-DL, DBS, MA-DBS(<B>), ILP
  std::string params() const;  // "B=<n>" for ma_dbs, empty otherwise
};

// Accepted forms: cbs-dl | dbs | ma-dbs[:B] | ilp (ma-dbs defaults to B=0).
AlgorithmSpec parse_algorithm(const std::string& text);

// The six configurations of the evaluation protocol: ILP, CBS-DL, DBS,
// MA-DBS(0), MA-DBS(10), MA-DBS(100).
std::vector<AlgorithmSpec> standard_algorithms();

struct CellResult {
  std::string instance;
  int agent_count = 0;
  std::string algorithm;
  std::string params;
  std::string status;  // solved | timeout | skipped | invalid | error
  int cost = -1;       // valid when solved
  double wall_ms = 0.0;
  std::int64_t nodes_expanded = 0;
};

struct BenchResult {
  std::vector<CellResult> rows;
  std::vector<std::string> issues;  // cost mismatches, invalid plans, errors
  double time_limit_s = 0.0;
};

// Runs every (instance, algorithm) cell under the wall-clock limit
// (cooperative deadline polling inside the solvers plus a hard watchdog that
// trips a kill switch). Every solved plan is re-validated, and all solved
// results for one instance must report the same cost; discrepancies land in
// `issues`. Instances are processed in ascending agent count; an algorithm
// that solves none of a group's instances is skipped for larger groups.
// Cells may run in parallel worker threads (`jobs`); rows come back in a
// deterministic order regardless.
BenchResult run_benchmark(const std::vector<Instance>& suite,
                          const std::vector<AlgorithmSpec>& algorithms, double time_limit_s,
                          int jobs = 1, const ilp::BackendConfig& ilp_backend = {});

// CSV schema: instance,algorithm,params,status,cost,wall_ms,nodes_expanded
std::string raw_csv(const BenchResult& result);
// Aggregates in the three reporting modes of the evaluation protocol.
std::string success_rate_csv(const BenchResult& result);
std::string mean_all_csv(const BenchResult& result);  // timeouts counted at the limit
std::string mean_solved_by_all_csv(const BenchResult& result);
std::string summary_text(const BenchResult& result);

// Directional comparison of two preset runs (success rates and mean
// runtimes), for human review; nothing here gates a result.
std::string trend_report(const BenchResult& small_run, const std::string& small_label,
                         const BenchResult& large_run, const std::string& large_label);

}  // namespace bench
}  // namespace mapfdl
