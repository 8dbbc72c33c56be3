#include <algorithm>
#include <atomic>
#include <chrono>
#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <random>
#include <sstream>
#include <unordered_map>

#include "mapfdl/dbs.hpp"
#include "mapfdl/ilp.hpp"
#include "mapfdl/invariant.hpp"

namespace mapfdl {
namespace ilp {

namespace {

using Clock = std::chrono::steady_clock;

// ---------------------------------------------------------------------------
// External command backend.
// ---------------------------------------------------------------------------

std::filesystem::path temp_file(const std::string& suffix) {
  static std::atomic<unsigned> counter{0};
  std::random_device rd;
  std::ostringstream name;
  name << "mapfdl_" << rd() << "_" << counter.fetch_add(1) << suffix;
  return std::filesystem::temp_directory_path() / name.str();
}

bool replace_all(std::string& text, const std::string& what, const std::string& with) {
  bool found = false;
  std::size_t pos = 0;
  while ((pos = text.find(what, pos)) != std::string::npos) {
    text.replace(pos, what.size(), with);
    pos += with.size();
    found = true;
  }
  return found;
}

IlpSolution run_command_backend(const IlpModel& model, const std::string& command_template,
                                double time_limit_s) {
  IlpSolution solution;
  const auto model_path = temp_file(".lp");
  const auto solution_path = temp_file(".sol");

  {
    std::ofstream out(model_path);
    if (!out) {
      solution.message = "cannot write model file";
      return solution;
    }
    out << export_model(model);
  }

  std::string command = command_template;
  replace_all(command, "{model}", model_path.string());
  replace_all(command, "{solution}", solution_path.string());
  const bool has_limit = replace_all(command, "{time_limit}", std::to_string(time_limit_s));
  if (!has_limit) {
    // Enforce the wall clock externally when the backend cannot.
    command = "timeout " + std::to_string(static_cast<long>(std::ceil(time_limit_s)) + 10) + " " +
              command;
  }

  const int rc = std::system(command.c_str());

  std::ifstream in(solution_path);
  if (!in) {
    std::filesystem::remove(model_path);
    const int exit_code = rc >= 256 ? rc >> 8 : rc;
    solution.message = "backend produced no solution file (exit " + std::to_string(exit_code) + ")";
    // timeout(1) exits with 124 when it had to kill the backend.
    solution.status = exit_code == 124 ? IlpStatus::time_limit : IlpStatus::backend_error;
    return solution;
  }

  std::unordered_map<std::string, int> var_index;
  for (int v = 0; v < model.var_count(); ++v) var_index.emplace(model.var_names[v], v);

  solution.assignment.assign(model.var_count(), 0.0);
  std::string key;
  bool have_status = false;
  bool have_objective = false;
  while (in >> key) {
    if (key == "status") {
      std::string value;
      in >> value;
      have_status = true;
      if (value == "optimal")
        solution.status = IlpStatus::optimal;
      else if (value == "infeasible")
        solution.status = IlpStatus::infeasible;
      else if (value == "time_limit")
        solution.status = IlpStatus::time_limit;
      else {
        solution.status = IlpStatus::backend_error;
        solution.message = "backend status: " + value;
      }
    } else if (key == "objective") {
      in >> solution.objective;
      have_objective = true;
    } else {
      double value = 0.0;
      if (!(in >> value)) {
        solution.status = IlpStatus::backend_error;
        solution.message = "malformed solution line near '" + key + "'";
        break;
      }
      const auto it = var_index.find(key);
      if (it == var_index.end()) {
        solution.status = IlpStatus::backend_error;
        solution.message = "unknown variable in solution: " + key;
        break;
      }
      solution.assignment[it->second] = value;
    }
  }
  std::filesystem::remove(model_path);
  std::filesystem::remove(solution_path);

  if (!have_status) {
    solution.status = IlpStatus::backend_error;
    solution.message = "solution file missing status";
  }
  if (solution.status == IlpStatus::optimal) {
    std::string why;
    if (!have_objective || !assignment_satisfies(model, solution.assignment, &why)) {
      solution.status = IlpStatus::backend_error;
      solution.message = have_objective ? "re-validation failed: " + why : "missing objective";
      return solution;
    }
    double recomputed = 0.0;
    for (int i = 0; i < model.num_commodities; ++i)
      recomputed += solution.assignment[model.y_var(i)];
    if (std::abs(recomputed - solution.objective) > 1e-6) {
      solution.status = IlpStatus::backend_error;
      solution.message = "reported objective disagrees with assignment";
      return solution;
    }
    for (double& x : solution.assignment) x = x > 0.5 ? 1.0 : 0.0;
    solution.objective = recomputed;
  }
  return solution;
}

// ---------------------------------------------------------------------------
// Aggregated max flow (Dinic) for the built-in branch-and-bound bound. All
// commodity identities are dropped: one super source feeds every live
// commodity's source with one unit, one super sink drains every live sink.
// ---------------------------------------------------------------------------

class MaxFlow {
 public:
  explicit MaxFlow(int node_count) : head_(node_count, -1) {}

  void add_edge(int from, int to, int capacity) {
    arcs_.push_back({to, head_[from], capacity});
    head_[from] = static_cast<int>(arcs_.size()) - 1;
    arcs_.push_back({from, head_[to], 0});
    head_[to] = static_cast<int>(arcs_.size()) - 1;
  }

  int run(int source, int sink) {
    int flow = 0;
    while (bfs(source, sink)) {
      iter_ = head_;
      while (const int pushed = dfs(source, sink, 1 << 30)) flow += pushed;
    }
    return flow;
  }

 private:
  struct InternalArc {
    int to;
    int next;
    int capacity;
  };

  bool bfs(int source, int sink) {
    level_.assign(head_.size(), -1);
    level_[source] = 0;
    std::vector<int> queue{source};
    for (std::size_t q = 0; q < queue.size(); ++q) {
      const int u = queue[q];
      for (int a = head_[u]; a >= 0; a = arcs_[a].next) {
        if (arcs_[a].capacity > 0 && level_[arcs_[a].to] < 0) {
          level_[arcs_[a].to] = level_[u] + 1;
          queue.push_back(arcs_[a].to);
        }
      }
    }
    return level_[sink] >= 0;
  }

  int dfs(int u, int sink, int limit) {
    if (u == sink) return limit;
    for (int& a = iter_[u]; a >= 0; a = arcs_[a].next) {
      InternalArc& arc = arcs_[a];
      if (arc.capacity <= 0 || level_[arc.to] != level_[u] + 1) continue;
      const int pushed = dfs(arc.to, sink, std::min(limit, arc.capacity));
      if (pushed > 0) {
        arc.capacity -= pushed;
        arcs_[a ^ 1].capacity += pushed;
        return pushed;
      }
    }
    return 0;
  }

  std::vector<int> head_;
  std::vector<InternalArc> arcs_;
  std::vector<int> level_;
  std::vector<int> iter_;
};

// ---------------------------------------------------------------------------
// Built-in exact solver: branch-and-bound over the success indicators.
// Feasibility of a candidate survivor set is decided by check_consistent
// (zero-cost CBS-DL); the bound is the aggregated max flow over the union of
// the live commodities' admissible arcs. Self-contained and exact, though the
// external backend scales better.
// ---------------------------------------------------------------------------

class BuiltinSolver {
 public:
  BuiltinSolver(const Instance& instance, const ReducedNetwork& reduced,
                Clock::time_point deadline)
      : instance_(instance), reduced_(reduced), deadline_(deadline) {
    const int commodity_count = static_cast<int>(reduced.network.commodities.size());
    if (commodity_count > 63)
      throw std::runtime_error("builtin ilp backend supports at most 63 commodities");
    arc_users_.assign(reduced.network.arcs.size(), 0);
    for (int i = 0; i < commodity_count; ++i) {
      for (const int arc : reduced.admissible_arcs[i])
        arc_users_[arc] |= std::uint64_t{1} << i;
    }
  }

  IlpSolution solve(const IlpModel& model) {
    IlpSolution solution;
    const int commodity_count = static_cast<int>(reduced_.network.commodities.size());
    std::vector<char> dead(commodity_count, 0);
    try {
      search(0, dead, 0);
    } catch (const TimeUp&) {
      solution.status = IlpStatus::time_limit;
      solution.nodes = nodes_;
      return solution;
    }
    MAPFDL_INVARIANT(best_alive_ >= 0);

    solution.status = IlpStatus::optimal;
    solution.objective = best_alive_;
    solution.nodes = nodes_;
    solution.assignment = synthesize_assignment(model);
    std::string why;
    MAPFDL_INVARIANT(assignment_satisfies(model, solution.assignment, &why));
    return solution;
  }

 private:
  struct TimeUp {};

  void search(int next, std::vector<char>& dead, int dead_count) {
    if (Clock::now() > deadline_) throw TimeUp{};
    ++nodes_;
    const int commodity_count = static_cast<int>(dead.size());
    if (commodity_count - dead_count <= best_alive_) return;
    if (flow_bound(dead) <= best_alive_) return;

    AgentGroup group;
    for (int i = 0; i < commodity_count; ++i) {
      if (!dead[i]) group.members.push_back(reduced_.network.commodities[i].agent);
    }
    SearchLimits limits;
    limits.deadline = deadline_;
    const ConsistencyResult check = check_consistent(instance_, group, {}, &cache_, limits);
    if (check.verdict == ConsistencyResult::Verdict::budget_exhausted) throw TimeUp{};
    if (check.verdict == ConsistencyResult::Verdict::consistent) {
      best_alive_ = commodity_count - dead_count;
      best_plan_ = check.sub_plan;
      return;  // killing more agents in this subtree cannot do better
    }
    // Someone still free must die; branch on which agent dies next.
    for (int victim = next; victim < commodity_count; ++victim) {
      dead[victim] = 1;
      search(victim + 1, dead, dead_count + 1);
      dead[victim] = 0;
    }
  }

  int flow_bound(const std::vector<char>& dead) {
    const FlowNetwork& net = reduced_.network;
    std::uint64_t alive_mask = 0;
    for (std::size_t i = 0; i < dead.size(); ++i) {
      if (!dead[i]) alive_mask |= std::uint64_t{1} << i;
    }
    if (alive_mask == 0) return 0;

    const int super_source = net.node_count();
    const int super_sink = net.node_count() + 1;
    MaxFlow flow(net.node_count() + 2);
    const int loose_cap = static_cast<int>(dead.size());
    for (std::size_t a = 0; a < net.arcs.size(); ++a) {
      if (!(arc_users_[a] & alive_mask)) continue;
      const Arc& arc = net.arcs[a];
      flow.add_edge(arc.tail, arc.head, FlowNetwork::unit_capacity(arc) ? 1 : loose_cap);
    }
    for (std::size_t i = 0; i < dead.size(); ++i) {
      if (dead[i]) continue;
      flow.add_edge(super_source, net.commodities[i].source, 1);
      flow.add_edge(net.commodities[i].sink, super_sink, 1);
    }
    return flow.run(super_source, super_sink);
  }

  // Converts the winning plan into the model's arc variables so that callers
  // see a complete assignment; extract_plan round-trips it back into paths.
  // Arc ids follow the build_network emission order.
  std::vector<double> synthesize_assignment(const IlpModel& model) const {
    const FlowNetwork& net = reduced_.network;
    const int V = net.vertex_count;
    const int T = net.deadline;
    const int E = net.edge_count;
    const int wait_base = V * (T + 1);
    const int gadget_base = wait_base + V * T;

    std::vector<double> assignment(model.var_count(), 0.0);
    for (int i = 0; i < static_cast<int>(net.commodities.size()); ++i) {
      const int agent = net.commodities[i].agent;
      if (!best_plan_.paths[agent]) continue;
      assignment[model.y_var(i)] = 1.0;
      const Path& path = *best_plan_.paths[agent];
      const auto set_arc = [&](int arc) {
        const int var = model.var_of_arc(i, arc);
        MAPFDL_INVARIANT(var >= 0);
        assignment[var] = 1.0;
      };
      for (int t = 0; t <= T; ++t) {
        set_arc(t * V + path[t]);  // vertex-internal
        if (t == T) break;
        if (path[t] == path[t + 1]) {
          set_arc(wait_base + t * V + path[t]);
        } else {
          const int e = instance_.graph.edge_id(path[t], path[t + 1]);
          MAPFDL_INVARIANT(e >= 0);
          const int block = gadget_base + 5 * (t * E + e);
          const auto [u, v] = instance_.graph.edges()[e];
          set_arc(block + (path[t] == u ? 0 : 1));      // entry from u or from v
          set_arc(block + 2);                           // middle
          set_arc(block + (path[t + 1] == u ? 3 : 4));  // exit to u or to v
        }
      }
    }
    return assignment;
  }

  const Instance& instance_;
  const ReducedNetwork& reduced_;
  Clock::time_point deadline_;
  std::vector<std::uint64_t> arc_users_;
  ConsistencyCache cache_;
  int best_alive_ = -1;
  Plan best_plan_;
  std::int64_t nodes_ = 0;
};

}  // namespace

IlpSolution solve_ilp(const IlpModel& model, const IlpBackend& backend, double time_limit_s) {
  if (backend.kind == IlpBackend::Kind::command)
    return run_command_backend(model, backend.command_template, time_limit_s);
  MAPFDL_INVARIANT(backend.instance != nullptr && backend.reduced != nullptr);
  const auto deadline =
      Clock::now() + std::chrono::microseconds(static_cast<std::int64_t>(time_limit_s * 1e6));
  return BuiltinSolver(*backend.instance, *backend.reduced, deadline).solve(model);
}

Plan extract_plan(const IlpSolution& solution, const ReducedNetwork& reduced,
                  const Instance& instance) {
  MAPFDL_INVARIANT(solution.status == IlpStatus::optimal);
  const FlowNetwork& net = reduced.network;
  Plan plan(instance.agent_count());

  // Variable layout mirrors build_ilp (y block, then per-commodity arc
  // blocks in admissible order); the walk is a straight line in the layered
  // DAG since all arcs point forward in time.
  for (int i = 0; i < static_cast<int>(net.commodities.size()); ++i) {
    const int agent = net.commodities[i].agent;
    // Variable layout mirrors build_ilp: y block then per-commodity arcs.
    // Recover this commodity's x block offset.
    std::size_t offset = net.commodities.size();
    for (int j = 0; j < i; ++j) offset += reduced.admissible_arcs[j].size();

    if (solution.assignment[i] < 0.5) continue;  // unsuccessful: no path

    std::unordered_map<int, std::vector<std::pair<int, int>>> out_arcs;  // node -> (arc, var)
    for (std::size_t k = 0; k < reduced.admissible_arcs[i].size(); ++k) {
      const int arc = reduced.admissible_arcs[i][k];
      out_arcs[net.arcs[arc].tail].emplace_back(arc, static_cast<int>(offset + k));
    }

    Path path(net.deadline + 1, -1);
    int node = net.commodities[i].source;
    {
      int v = 0, t = 0;
      bool is_out = false;
      MAPFDL_INVARIANT(net.decode_vertex_node(node, v, t, is_out) && !is_out && t == 0);
      path[0] = v;
    }
    std::size_t steps = 0;
    const std::size_t max_steps = 4 * static_cast<std::size_t>(net.deadline + 2);
    while (node != net.commodities[i].sink) {
      if (++steps > max_steps) throw std::logic_error("ilp: flow walk did not reach the sink");
      int chosen = -1;
      for (const auto& [arc, var] : out_arcs[node]) {
        if (solution.assignment[var] > 0.5) {
          if (chosen >= 0) throw std::logic_error("ilp: flow is not path-decomposable");
          chosen = arc;
        }
      }
      if (chosen < 0) throw std::logic_error("ilp: flow stops before the sink");
      node = net.arcs[chosen].head;
      int v = 0, t = 0;
      bool is_out = false;
      if (net.decode_vertex_node(node, v, t, is_out) && !is_out) {
        MAPFDL_INVARIANT(t >= 1 && t <= net.deadline && path[t] == -1);
        path[t] = v;
      }
    }
    for (const int v : path) MAPFDL_INVARIANT(v >= 0);
    plan.paths[agent] = std::move(path);
  }
  return plan;
}

IlpRunResult solve_instance_ilp(const Instance& instance, const BackendConfig& backend,
                                double time_limit_s, bool reduce) {
  IlpRunResult result;
  FlowNetwork network = build_network(instance);
  const ReducedNetwork reduced = reduce
                                     ? reduce_network(std::move(network), instance)
                                     : unreduced_network(std::move(network));
  const IlpModel model = build_ilp(reduced);

  const IlpBackend handle = backend.command_template.empty()
                                ? IlpBackend::builtin(instance, reduced)
                                : IlpBackend::command(backend.command_template);
  const IlpSolution solution = solve_ilp(model, handle, time_limit_s);
  result.nodes = solution.nodes;

  switch (solution.status) {
    case IlpStatus::optimal: {
      result.status = SolveStatus::solved;
      result.plan = extract_plan(solution, reduced, instance);
      result.cost = instance.agent_count() - static_cast<int>(std::lround(solution.objective));
      MAPFDL_INVARIANT(plan_cost(result.plan) == result.cost);
      return result;
    }
    case IlpStatus::time_limit:
      result.status = SolveStatus::budget_exhausted;
      return result;
    case IlpStatus::infeasible:
      // Unreachable for well-formed models: the all-unsuccessful assignment
      // is always feasible.
      throw std::runtime_error("ilp backend reported infeasible for a MAPF-DL model");
    case IlpStatus::backend_error:
      throw std::runtime_error("ilp backend error: " + solution.message);
  }
  return result;
}

}  // namespace ilp
}  // namespace mapfdl
