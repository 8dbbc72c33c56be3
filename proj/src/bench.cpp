#include "mapfdl/bench.hpp"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cmath>
#include <condition_variable>
#include <map>
#include <memory>
#include <mutex>
#include <set>
#include <sstream>
#include <thread>

#include "mapfdl/cbs_dl.hpp"
#include "mapfdl/collision.hpp"
#include "mapfdl/dbs.hpp"
#include "mapfdl/ma_dbs.hpp"

namespace mapfdl {
namespace bench {

namespace {

using Clock = std::chrono::steady_clock;

// Trips per-cell kill switches once their wall-clock deadline passes, as a
// backstop behind the solvers' own deadline polling.
class Watchdog {
 public:
  Watchdog() : thread_([this] { run(); }) {}

  ~Watchdog() {
    {
      std::lock_guard<std::mutex> lock(mutex_);
      stop_ = true;
    }
    wake_.notify_all();
    thread_.join();
  }

  void watch(Clock::time_point deadline, std::atomic<bool>* flag) {
    std::lock_guard<std::mutex> lock(mutex_);
    entries_.emplace_back(deadline, flag);
  }

  // Must be called before the flag's storage goes away.
  void unwatch(std::atomic<bool>* flag) {
    std::lock_guard<std::mutex> lock(mutex_);
    std::erase_if(entries_, [&](const auto& entry) { return entry.second == flag; });
  }

 private:
  void run() {
    std::unique_lock<std::mutex> lock(mutex_);
    while (!stop_) {
      const auto now = Clock::now();
      std::erase_if(entries_, [&](const auto& entry) {
        if (entry.first <= now) {
          entry.second->store(true, std::memory_order_relaxed);
          return true;
        }
        return false;
      });
      wake_.wait_for(lock, std::chrono::milliseconds(50));
    }
  }

  std::mutex mutex_;
  std::condition_variable wake_;
  std::vector<std::pair<Clock::time_point, std::atomic<bool>*>> entries_;
  bool stop_ = false;
  std::thread thread_;
};

struct Cell {
  const Instance* instance = nullptr;
  AlgorithmSpec algorithm;
  std::atomic<bool> cancel{false};
};

CellResult run_cell(Cell& cell, double time_limit_s, const ilp::BackendConfig& ilp_backend,
                    Watchdog& watchdog) {
  const Instance& instance = *cell.instance;
  CellResult row;
  row.instance = instance.name;
  row.agent_count = instance.agent_count();
  row.algorithm = cell.algorithm.label();
  row.params = cell.algorithm.params();

  const auto started = Clock::now();
  const auto deadline =
      started + std::chrono::microseconds(static_cast<std::int64_t>(time_limit_s * 1e6));
  watchdog.watch(deadline, &cell.cancel);
  // The entry points at this cell's flag; drop it before the cell dies.
  struct Unwatch {
    Watchdog& dog;
    std::atomic<bool>* flag;
    ~Unwatch() { dog.unwatch(flag); }
  } unwatch{watchdog, &cell.cancel};

  SearchLimits limits;
  limits.deadline = deadline;
  limits.cancel = &cell.cancel;

  SolveStatus status = SolveStatus::budget_exhausted;
  Plan plan;
  int cost = 0;
  try {
    switch (cell.algorithm.kind) {
      case AlgorithmSpec::Kind::cbs_dl: {
        const SolveResult r = solve_cbs_dl(instance, {}, CbsMode::full, limits);
        status = r.status;
        plan = r.plan;
        cost = r.cost;
        row.nodes_expanded = r.nodes_expanded;
        break;
      }
      case AlgorithmSpec::Kind::dbs: {
        const SolveResult r = solve_dbs(instance, {}, limits);
        status = r.status;
        plan = r.plan;
        cost = r.cost;
        row.nodes_expanded = r.nodes_expanded;
        break;
      }
      case AlgorithmSpec::Kind::ma_dbs: {
        const SolveResult r = solve_ma_dbs(instance, cell.algorithm.merge_threshold, limits);
        status = r.status;
        plan = r.plan;
        cost = r.cost;
        row.nodes_expanded = r.nodes_expanded;
        break;
      }
      case AlgorithmSpec::Kind::ilp: {
        const ilp::IlpRunResult r = ilp::solve_instance_ilp(instance, ilp_backend, time_limit_s);
        status = r.status;
        plan = r.plan;
        cost = r.cost;
        row.nodes_expanded = r.nodes;
        break;
      }
    }
  } catch (const std::exception&) {
    row.status = "error";
    row.cost = -1;
    row.wall_ms = std::chrono::duration<double, std::milli>(Clock::now() - started).count();
    return row;
  }
  row.wall_ms = std::chrono::duration<double, std::milli>(Clock::now() - started).count();

  if (status == SolveStatus::solved) {
    row.status = "solved";
    row.cost = cost;
    // Every reported plan re-validates before it counts.
    const ValidationReport report = validate_plan(instance, plan);
    if (!report.ok() || plan_cost(plan) != cost) row.status = "invalid";
  } else {
    row.status = "timeout";
    row.cost = -1;
  }
  return row;
}

std::string format_ms(double ms) {
  std::ostringstream out;
  out.setf(std::ios::fixed);
  out.precision(3);
  out << ms;
  return out.str();
}

}  // namespace

std::string AlgorithmSpec::label() const {
  switch (kind) {
    case Kind::cbs_dl:
      return "CBS-DL";
    case Kind::dbs:
      return "DBS";
    case Kind::ma_dbs:
      return "MA-DBS(" + std::to_string(merge_threshold) + ")";
    case Kind::ilp:
      return "ILP";
  }
  return "?";
}

std::string AlgorithmSpec::params() const {
  return kind == Kind::ma_dbs ? "B=" + std::to_string(merge_threshold) : "";
}

AlgorithmSpec parse_algorithm(const std::string& text) {
  AlgorithmSpec spec;
  if (text == "cbs-dl") {
    spec.kind = AlgorithmSpec::Kind::cbs_dl;
  } else if (text == "dbs") {
    spec.kind = AlgorithmSpec::Kind::dbs;
  } else if (text == "ilp") {
    spec.kind = AlgorithmSpec::Kind::ilp;
  } else if (text.rfind("ma-dbs", 0) == 0) {
    spec.kind = AlgorithmSpec::Kind::ma_dbs;
    spec.merge_threshold = 0;
    if (text.size() > 6 && text[6] == ':') spec.merge_threshold = std::stoi(text.substr(7));
  } else {
    throw std::runtime_error("unknown algorithm: " + text);
  }
  return spec;
}

std::vector<AlgorithmSpec> standard_algorithms() {
  return {parse_algorithm("ilp"),       parse_algorithm("cbs-dl"),
          parse_algorithm("dbs"),       parse_algorithm("ma-dbs:0"),
          parse_algorithm("ma-dbs:10"), parse_algorithm("ma-dbs:100")};
}

BenchResult run_benchmark(const std::vector<Instance>& suite,
                          const std::vector<AlgorithmSpec>& algorithms, double time_limit_s,
                          int jobs, const ilp::BackendConfig& ilp_backend) {
  BenchResult result;
  result.time_limit_s = time_limit_s;
  if (suite.empty() || algorithms.empty()) return result;

  // Ascending agent count; stable within a group.
  std::map<int, std::vector<const Instance*>> groups;
  for (const Instance& instance : suite) groups[instance.agent_count()].push_back(&instance);

  Watchdog watchdog;
  std::vector<bool> skipped(algorithms.size(), false);

  for (const auto& [agent_count, instances] : groups) {
    std::vector<std::unique_ptr<Cell>> cells;
    for (const Instance* instance : instances) {
      for (std::size_t a = 0; a < algorithms.size(); ++a) {
        if (skipped[a]) {
          CellResult row;
          row.instance = instance->name;
          row.agent_count = instance->agent_count();
          row.algorithm = algorithms[a].label();
          row.params = algorithms[a].params();
          row.status = "skipped";
          result.rows.push_back(std::move(row));
          continue;
        }
        auto cell = std::make_unique<Cell>();
        cell->instance = instance;
        cell->algorithm = algorithms[a];
        cells.push_back(std::move(cell));
      }
    }

    std::vector<CellResult> group_rows(cells.size());
    std::atomic<std::size_t> next{0};
    const int workers = std::max(1, std::min<int>(jobs, static_cast<int>(cells.size())));
    const auto work = [&] {
      while (true) {
        const std::size_t k = next.fetch_add(1);
        if (k >= cells.size()) return;
        group_rows[k] = run_cell(*cells[k], time_limit_s, ilp_backend, watchdog);
      }
    };
    if (workers == 1) {
      work();
    } else {
      std::vector<std::thread> pool;
      for (int w = 0; w < workers; ++w) pool.emplace_back(work);
      for (std::thread& t : pool) t.join();
    }

    // Consensus: all solved results for one instance agree on the cost.
    std::map<std::string, std::set<int>> costs;
    std::map<std::string, std::int64_t> solved_per_algorithm;
    for (const CellResult& row : group_rows) {
      if (row.status == "solved") {
        costs[row.instance].insert(row.cost);
        ++solved_per_algorithm[row.algorithm];
      }
      if (row.status == "invalid" || row.status == "error")
        result.issues.push_back(row.algorithm + " on " + row.instance + ": " + row.status);
    }
    for (const auto& [name, set] : costs) {
      if (set.size() > 1) {
        std::string msg = "cost mismatch on " + name + ":";
        for (const int c : set) msg += " " + std::to_string(c);
        result.issues.push_back(std::move(msg));
      }
    }
    // Skip rule: an algorithm that solved nothing at this agent count does
    // not run for larger ones.
    for (std::size_t a = 0; a < algorithms.size(); ++a) {
      if (!skipped[a] && solved_per_algorithm[algorithms[a].label()] == 0) skipped[a] = true;
    }

    for (CellResult& row : group_rows) result.rows.push_back(std::move(row));
  }
  return result;
}

std::string raw_csv(const BenchResult& result) {
  std::ostringstream out;
  out << "instance,algorithm,params,status,cost,wall_ms,nodes_expanded\n";
  for (const CellResult& row : result.rows) {
    out << row.instance << "," << row.algorithm << "," << row.params << "," << row.status << ",";
    if (row.status == "solved") out << row.cost;
    out << "," << format_ms(row.wall_ms) << "," << row.nodes_expanded << "\n";
  }
  return out.str();
}

namespace {

struct GroupKey {
  int agent_count;
  std::string algorithm;
  bool operator<(const GroupKey& other) const {
    if (agent_count != other.agent_count) return agent_count < other.agent_count;
    return algorithm < other.algorithm;
  }
};

}  // namespace

std::string success_rate_csv(const BenchResult& result) {
  std::map<GroupKey, std::pair<int, int>> tally;  // solved, ran
  for (const CellResult& row : result.rows) {
    if (row.status == "skipped") continue;
    auto& [solved, ran] = tally[{row.agent_count, row.algorithm}];
    ++ran;
    if (row.status == "solved") ++solved;
  }
  std::ostringstream out;
  out << "agents,algorithm,solved,total,success_rate\n";
  out.setf(std::ios::fixed);
  out.precision(4);
  for (const auto& [key, counts] : tally) {
    out << key.agent_count << "," << key.algorithm << "," << counts.first << "," << counts.second
        << "," << (counts.second ? static_cast<double>(counts.first) / counts.second : 0.0)
        << "\n";
  }
  return out.str();
}

std::string mean_all_csv(const BenchResult& result) {
  // An unsolved instance is counted at the full time limit.
  std::map<GroupKey, std::pair<double, int>> tally;  // total ms, count
  for (const CellResult& row : result.rows) {
    if (row.status == "skipped") continue;
    auto& [total, count] = tally[{row.agent_count, row.algorithm}];
    total += row.status == "solved" ? row.wall_ms : result.time_limit_s * 1000.0;
    ++count;
  }
  std::ostringstream out;
  out << "agents,algorithm,mean_wall_ms,instances\n";
  for (const auto& [key, agg] : tally) {
    out << key.agent_count << "," << key.algorithm << ","
        << format_ms(agg.second ? agg.first / agg.second : 0.0) << "," << agg.second << "\n";
  }
  return out.str();
}

std::string mean_solved_by_all_csv(const BenchResult& result) {
  // Instances solved by every algorithm in the run.
  std::set<std::string> all_algorithms;
  for (const CellResult& row : result.rows) all_algorithms.insert(row.algorithm);

  std::map<std::string, std::set<std::string>> solved_by;  // instance -> algorithms
  std::map<std::string, int> agent_count_of;
  for (const CellResult& row : result.rows) {
    agent_count_of[row.instance] = row.agent_count;
    if (row.status == "solved") solved_by[row.instance].insert(row.algorithm);
  }
  std::set<std::string> easy;
  for (const auto& [name, algorithms] : solved_by) {
    if (algorithms == all_algorithms) easy.insert(name);
  }

  std::map<GroupKey, std::pair<double, int>> tally;
  std::map<int, std::set<std::string>> easy_per_group;
  for (const CellResult& row : result.rows) {
    if (!easy.count(row.instance)) continue;
    auto& [total, count] = tally[{row.agent_count, row.algorithm}];
    total += row.wall_ms;
    ++count;
    easy_per_group[row.agent_count].insert(row.instance);
  }
  std::ostringstream out;
  out << "agents,instances_solved_by_all,algorithm,mean_wall_ms\n";
  for (const auto& [key, agg] : tally) {
    out << key.agent_count << "," << easy_per_group[key.agent_count].size() << ","
        << key.algorithm << "," << format_ms(agg.second ? agg.first / agg.second : 0.0) << "\n";
  }
  return out.str();
}

std::string summary_text(const BenchResult& result) {
  int solved = 0, timeout = 0, skipped = 0, bad = 0;
  for (const CellResult& row : result.rows) {
    if (row.status == "solved")
      ++solved;
    else if (row.status == "timeout")
      ++timeout;
    else if (row.status == "skipped")
      ++skipped;
    else
      ++bad;
  }
  std::ostringstream out;
  out << "cells: " << result.rows.size() << " solved: " << solved << " timeout: " << timeout
      << " skipped: " << skipped << " invalid/error: " << bad << "\n";
  out << "time limit: " << result.time_limit_s << " s\n";
  if (result.issues.empty()) {
    out << "optimality cross-check: all solved costs agree, all plans validate\n";
  } else {
    out << "ISSUES (" << result.issues.size() << "):\n";
    for (const std::string& issue : result.issues) out << "  " << issue << "\n";
  }
  return out.str();
}

namespace {

struct AlgoStats {
  double mean_all_ms = 0.0;
  double success = 0.0;
};

std::map<std::string, AlgoStats> stats_by_algorithm(const BenchResult& result) {
  std::map<std::string, std::pair<double, int>> time;  // total, count
  std::map<std::string, std::pair<int, int>> rate;     // solved, ran
  for (const CellResult& row : result.rows) {
    if (row.status == "skipped") continue;
    auto& [total, count] = time[row.algorithm];
    total += row.status == "solved" ? row.wall_ms : result.time_limit_s * 1000.0;
    ++count;
    auto& [s, r] = rate[row.algorithm];
    ++r;
    if (row.status == "solved") ++s;
  }
  std::map<std::string, AlgoStats> stats;
  for (const auto& [name, agg] : time) {
    AlgoStats s;
    s.mean_all_ms = agg.second ? agg.first / agg.second : 0.0;
    s.success = rate[name].second ? static_cast<double>(rate[name].first) / rate[name].second : 0.0;
    stats[name] = s;
  }
  return stats;
}

}  // namespace

std::string trend_report(const BenchResult& small_run, const std::string& small_label,
                         const BenchResult& large_run, const std::string& large_label) {
  const auto small_stats = stats_by_algorithm(small_run);
  const auto large_stats = stats_by_algorithm(large_run);

  std::ostringstream out;
  out.setf(std::ios::fixed);
  out.precision(3);
  out << "# trend report: " << small_label << " vs " << large_label << "\n";
  out << "algorithm,mean_ms_" << small_label << ",mean_ms_" << large_label
      << ",ratio,success_" << small_label << ",success_" << large_label << "\n";
  for (const auto& [name, s] : small_stats) {
    const auto it = large_stats.find(name);
    if (it == large_stats.end()) continue;
    const double ratio = s.mean_all_ms > 0 ? it->second.mean_all_ms / s.mean_all_ms : 0.0;
    out << name << "," << s.mean_all_ms << "," << it->second.mean_all_ms << "," << ratio << ","
        << s.success << "," << it->second.success << "\n";
  }

  const auto mean_of = [&](const std::map<std::string, AlgoStats>& stats,
                           const std::string& name) -> double {
    const auto it = stats.find(name);
    return it == stats.end() ? 0.0 : it->second.mean_all_ms;
  };
  const auto growth = [&](const std::string& name) -> double {
    const double small_ms = mean_of(small_stats, name);
    const double large_ms = mean_of(large_stats, name);
    return small_ms > 0 ? large_ms / small_ms : 0.0;
  };

  out << "\n# directional observations (for human review, not asserted)\n";
  const double ilp_growth = growth("ILP");
  const double cbs_growth = growth("CBS-DL");
  out << "ilp_runtime_growth=" << ilp_growth << " cbs_dl_runtime_growth=" << cbs_growth
      << " -> ILP degrades faster as the deadline grows: "
      << (ilp_growth > cbs_growth ? "yes" : "no") << "\n";

  const auto gap = [&](const std::map<std::string, AlgoStats>& stats, const std::string& a,
                       const std::string& b) {
    return std::abs(mean_of(stats, a) - mean_of(stats, b));
  };
  const double madbs0_dbs = gap(large_stats, "MA-DBS(0)", "DBS");
  const double madbs0_cbs = gap(large_stats, "MA-DBS(0)", "CBS-DL");
  out << "madbs0_vs_dbs_gap_ms=" << madbs0_dbs << " madbs0_vs_cbsdl_gap_ms=" << madbs0_cbs
      << " -> MA-DBS(0) tracks DBS more closely: " << (madbs0_dbs <= madbs0_cbs ? "yes" : "no")
      << "\n";
  const double madbs10_cbs = gap(large_stats, "MA-DBS(10)", "CBS-DL");
  const double madbs10_dbs = gap(large_stats, "MA-DBS(10)", "DBS");
  const double madbs100_cbs = gap(large_stats, "MA-DBS(100)", "CBS-DL");
  const double madbs100_dbs = gap(large_stats, "MA-DBS(100)", "DBS");
  out << "madbs10_vs_cbsdl_gap_ms=" << madbs10_cbs << " madbs10_vs_dbs_gap_ms=" << madbs10_dbs
      << " -> MA-DBS(10) tracks CBS-DL more closely: "
      << (madbs10_cbs <= madbs10_dbs ? "yes" : "no") << "\n";
  out << "madbs100_vs_cbsdl_gap_ms=" << madbs100_cbs << " madbs100_vs_dbs_gap_ms=" << madbs100_dbs
      << " -> MA-DBS(100) tracks CBS-DL more closely: "
      << (madbs100_cbs <= madbs100_dbs ? "yes" : "no") << "\n";
  return out.str();
}

}  // namespace bench
}  // namespace mapfdl
