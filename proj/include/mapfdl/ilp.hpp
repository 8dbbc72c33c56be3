#pragma once

#include <cstdint>
#include <set>
#include <string>
#include <utility>
#include <vector>

#include "mapfdl/cbs_dl.hpp"
#include "mapfdl/instance.hpp"

namespace mapfdl {
namespace ilp {

// ---------------------------------------------------------------------------
// Time-expanded flow network.
//
// Every (vertex, time) pair is split into an in node and an out node joined
// by a unit-capacity internal arc; sharing that arc is exactly a vertex
// collision. Every undirected edge {u, v} at every step t gets the standard
// two-entry/one-middle/two-exit gadget whose unit-capacity middle arc forbids
// traversing the edge in opposite directions simultaneously (an edge
// collision). The gadget technically permits a u->u traversal; that is
// flow-equivalent to the wait arc and cannot enable an otherwise-infeasible
// plan. Commodity i is injected at in(s_i, 0) and extracted at
// out(g_i, T_end), so start and goal occupancy are capacity-checked too.
// ---------------------------------------------------------------------------

enum class ArcKind : std::uint8_t { vertex_internal, wait, gadget_entry, gadget_middle, gadget_exit };

struct Arc {
  int tail = -1;
  int head = -1;
  ArcKind kind = ArcKind::vertex_internal;
};

struct Commodity {
  int agent = -1;
  int source = -1;  // node id of in(s_i, 0)
  int sink = -1;    // node id of out(g_i, T_end)
};

struct FlowNetwork {
  int vertex_count = 0;
  int deadline = 0;
  int edge_count = 0;
  std::vector<Arc> arcs;
  std::vector<Commodity> commodities;

  // Canonical node ids: vertex nodes first, gadget nodes after.
  int node_in(int v, int t) const { return 2 * (t * vertex_count + v); }
  int node_out(int v, int t) const { return 2 * (t * vertex_count + v) + 1; }
  int gadget_in(int e, int t) const {
    return 2 * vertex_count * (deadline + 1) + 2 * (t * edge_count + e);
  }
  int gadget_out(int e, int t) const { return gadget_in(e, t) + 1; }
  int node_count() const {
    return 2 * vertex_count * (deadline + 1) + 2 * edge_count * deadline;
  }

  static bool unit_capacity(const Arc& arc) {
    return arc.kind == ArcKind::vertex_internal || arc.kind == ArcKind::gadget_middle;
  }

  // Decodes a vertex node id; returns false for gadget nodes.
  bool decode_vertex_node(int node, int& v, int& t, bool& is_out) const;
};

FlowNetwork build_network(const Instance& instance);

// The network plus, per commodity, the admissible (vertex, time) pairs
// {(v, t) : dist(s_i, v) <= t and dist(v, g_i) <= T_end - t} and the arcs with
// admissible endpoints.
struct ReducedNetwork {
  FlowNetwork network;
  std::vector<std::vector<std::uint8_t>> node_admissible;  // [commodity][node]
  std::vector<std::vector<int>> admissible_arcs;           // [commodity], arc ids ascending
};

ReducedNetwork reduce_network(FlowNetwork network, const Instance& instance);

// Trivial admissibility (everything admissible); the pruning-soundness
// differential compares objectives against the reduced form.
ReducedNetwork unreduced_network(FlowNetwork network);

// ---------------------------------------------------------------------------
// 0/1 multi-commodity flow ILP.
//
// Variables: one success indicator y_<i> per commodity and one x_<i>_<t>_<h>
// per commodity and admissible arc (node ids t, h). Objective: maximize the
// number of successful agents. Constraints: per-commodity conservation with
// source outflow = y_i and sink inflow = y_i, plus joint capacity <= 1 on
// every unit-capacity arc shared by at least two commodities (single-user
// arcs are already bounded by the binary domain).
// ---------------------------------------------------------------------------

struct LinTerm {
  int var = -1;
  int coef = 0;
};

enum class Sense : std::uint8_t { eq, le };

struct LinRow {
  std::string name;
  std::vector<LinTerm> terms;
  Sense sense = Sense::eq;
  int rhs = 0;
};

struct IlpModel {
  std::vector<std::string> var_names;  // all binary; y vars first
  int num_commodities = 0;
  std::vector<LinRow> rows;
  // Per commodity: (arc id, var index) pairs sorted by arc id.
  std::vector<std::vector<std::pair<int, int>>> arc_vars;

  int var_count() const { return static_cast<int>(var_names.size()); }
  int y_var(int commodity) const { return commodity; }
  int var_of_arc(int commodity, int arc) const;  // -1 when not admissible
};

IlpModel build_ilp(const ReducedNetwork& reduced);

// Plain-text LP model format (Maximize / Subject To / Binary / End),
// byte-deterministic for a given model.
std::string export_model(const IlpModel& model);

// Minimal reader for the emitted subset; used for round-trip checks.
struct ParsedLp {
  int objective_term_count = 0;
  int constraint_count = 0;
  std::vector<std::string> binary_vars;
  std::set<std::string> variables;
};
ParsedLp parse_model(const std::string& text);

// ---------------------------------------------------------------------------
// Solving.
// ---------------------------------------------------------------------------

enum class IlpStatus : std::uint8_t { optimal, infeasible, time_limit, backend_error };

struct IlpSolution {
  IlpStatus status = IlpStatus::backend_error;
  std::vector<double> assignment;  // indexed like IlpModel::var_names
  double objective = 0.0;
  std::int64_t nodes = 0;     // built-in branch-and-bound nodes, 0 for external
  std::string message;        // diagnostics on failure
};

// A backend consumes the exported model text and returns (status, assignment,
// objective). `command` runs an external mixed-integer solver through a
// template with {model}, {solution} and optional {time_limit} placeholders.
// `builtin` is an exact fallback: branch-and-bound on the y variables with an
// aggregated single-commodity max-flow upper bound and feasibility via
// check_consistent; it needs the instance and the reduced network as context.
struct IlpBackend {
  enum class Kind : std::uint8_t { builtin, command };
  Kind kind = Kind::builtin;
  std::string command_template;
  const Instance* instance = nullptr;
  const ReducedNetwork* reduced = nullptr;

  static IlpBackend builtin(const Instance& instance, const ReducedNetwork& reduced) {
    IlpBackend b;
    b.kind = Kind::builtin;
    b.instance = &instance;
    b.reduced = &reduced;
    return b;
  }
  static IlpBackend command(std::string command_template) {
    IlpBackend b;
    b.kind = Kind::command;
    b.command_template = std::move(command_template);
    return b;
  }
};

// Solves the model. Optimal solutions are re-validated locally against every
// model constraint before acceptance; violations surface as backend_error.
IlpSolution solve_ilp(const IlpModel& model, const IlpBackend& backend, double time_limit_s);

// True iff the assignment is binary and satisfies every model row.
bool assignment_satisfies(const IlpModel& model, const std::vector<double>& assignment,
                          std::string* why = nullptr);

// Decodes the unit flow of every successful commodity into its path. Throws
// std::logic_error if the flow is not path-decomposable (a model bug).
Plan extract_plan(const IlpSolution& solution, const ReducedNetwork& reduced,
                  const Instance& instance);

// ---------------------------------------------------------------------------
// End-to-end convenience used by the CLI and the benchmark.
// ---------------------------------------------------------------------------

// Empty command template selects the built-in solver.
struct BackendConfig {
  std::string command_template;
};

struct IlpRunResult {
  SolveStatus status = SolveStatus::budget_exhausted;
  Plan plan;
  int cost = 0;
  std::int64_t nodes = 0;
};

IlpRunResult solve_instance_ilp(const Instance& instance, const BackendConfig& backend,
                                double time_limit_s, bool reduce = true);

}  // namespace ilp
}  // namespace mapfdl
