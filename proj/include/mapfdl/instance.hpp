#pragma once

#include <string>
#include <vector>

#include "mapfdl/graph.hpp"
#include "mapfdl/plan.hpp"

namespace mapfdl {

struct AgentTask {
  int start = 0;
  int goal = 0;
};

// A MAPF-DL problem: undirected graph, one start/goal pair per agent, and a
// hard deadline T_end. The loader guarantees that every agent can reach its
// goal within the deadline in the absence of other agents. Duplicate start or
// goal vertices between agents are accepted; the collision rules then apply,
// including at t = 0. Immutable after construction, shareable across threads.
struct Instance {
  Graph graph;
  std::vector<AgentTask> agents;
  int deadline = 0;  // T_end
  std::string name;

  int agent_count() const { return static_cast<int>(agents.size()); }
};

// Instance file format (UTF-8 text, '#' starts a comment line):
//   mapfdl 1
//   deadline <T_end>
//   map <height> <width>      |  graph <V> <E>
//   <height rows of . and @>  |  <E lines: u v>
//   agents <M>
//   <M lines: sr sc gr gc (grid, row col) | s g (graph)>
// Throws std::runtime_error on malformed input, unknown vertices, or an agent
// whose shortest-path distance to its goal exceeds the deadline.
Instance parse_instance(const std::string& text, std::string name = "");
std::string format_instance(const Instance& instance);
Instance load_instance(const std::string& path);
void save_instance(const Instance& instance, const std::string& path);

// Plan file format:
//   plan <M> <T_end> <cost>
//   dead <i>                          for each unsuccessful agent
//   path <i> v0 v1 ... vT             grid vertices serialized as row,col
Plan parse_plan(const Instance& instance, const std::string& text);
std::string format_plan(const Instance& instance, const Plan& plan);

}  // namespace mapfdl
