#include "mapfdl/generator.hpp"

#include <algorithm>
#include <limits>
#include <random>
#include <stdexcept>

#include "mapfdl/invariant.hpp"

namespace mapfdl {

namespace {

// Bounded draws go through this helper instead of
// std::uniform_int_distribution so the byte-identical-output contract does
// not depend on the standard library's distribution implementation.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : engine_(seed) {}

  // Uniform integer in [0, bound).
  std::uint64_t below(std::uint64_t bound) {
    MAPFDL_INVARIANT(bound > 0);
    const std::uint64_t limit = std::numeric_limits<std::uint64_t>::max() -
                                std::numeric_limits<std::uint64_t>::max() % bound;
    std::uint64_t draw;
    do {
      draw = engine_();
    } while (draw >= limit);
    return draw % bound;
  }

  // Uniform double in [0, 1).
  double unit() {
    return static_cast<double>(engine_() >> 11) * (1.0 / 9007199254740992.0);
  }

 private:
  std::mt19937_64 engine_;
};

std::runtime_error generation_failed(const std::string& why) {
  return std::runtime_error("generation_failed: " + why);
}

}  // namespace

Instance generate_instance(const GeneratorConfig& config) {
  if (config.width <= 0 || config.height <= 0) throw generation_failed("empty grid");
  if (config.block_probability < 0.0 || config.block_probability >= 1.0)
    throw generation_failed("block probability must be in [0, 1)");
  if (config.agent_count < 1) throw generation_failed("need at least one agent");
  if (config.distance_set.empty()) throw generation_failed("empty distance set");
  const int provisional_deadline =
      config.slack_deadline ? *std::max_element(config.distance_set.begin(),
                                                config.distance_set.end()) +
                                  *config.slack_deadline
                            : config.deadline;
  for (const int d : config.distance_set) {
    if (d < 0 || d > provisional_deadline)
      throw generation_failed("distance set entry beyond the deadline");
  }

  Rng rng(config.seed);
  for (int mask_attempt = 0; mask_attempt < config.max_mask_retries; ++mask_attempt) {
    std::vector<std::uint8_t> blocked(static_cast<std::size_t>(config.width) * config.height);
    for (auto& cell : blocked) cell = rng.unit() < config.block_probability ? 1 : 0;
    const Graph graph = Graph::from_grid(config.height, config.width, blocked);
    if (graph.vertex_count() < 2 * config.agent_count) continue;

    std::vector<AgentTask> agents;
    std::vector<std::uint8_t> used_start(graph.vertex_count(), 0);
    std::vector<std::uint8_t> used_goal(graph.vertex_count(), 0);
    bool placed_all = true;
    for (int i = 0; i < config.agent_count && placed_all; ++i) {
      bool placed = false;
      for (int attempt = 0; attempt < config.max_agent_retries; ++attempt) {
        const int start = static_cast<int>(rng.below(graph.vertex_count()));
        if (used_start[start]) continue;
        const std::vector<int> dist = bfs_distances(graph, start);
        std::vector<int> candidates;
        for (int v = 0; v < graph.vertex_count(); ++v) {
          if (used_goal[v] || dist[v] == kUnreachable) continue;
          if (std::find(config.distance_set.begin(), config.distance_set.end(), dist[v]) !=
              config.distance_set.end())
            candidates.push_back(v);
        }
        if (candidates.empty()) continue;
        const int goal = candidates[rng.below(candidates.size())];
        used_start[start] = 1;
        used_goal[goal] = 1;
        agents.push_back(AgentTask{start, goal});
        placed = true;
        break;
      }
      placed_all = placed;
    }
    if (!placed_all) continue;

    Instance instance;
    instance.graph = graph;
    instance.agents = std::move(agents);
    if (config.slack_deadline) {
      int max_distance = 0;
      for (const AgentTask& task : instance.agents) {
        const std::vector<int> dist = bfs_distances(graph, task.start);
        max_distance = std::max(max_distance, dist[task.goal]);
      }
      instance.deadline = max_distance + *config.slack_deadline;
    } else {
      instance.deadline = config.deadline;
    }
    instance.name =
        config.name.empty() ? "gen_" + std::to_string(config.seed) : config.name;
    return instance;
  }
  throw generation_failed("retry budget exhausted; distance set may be unsatisfiable");
}

GeneratorConfig preset_config(const std::string& preset) {
  GeneratorConfig config;
  if (preset == "tiny") {
    config.width = config.height = 6;
    config.block_probability = 0.10;
    config.deadline = 8;
    config.distance_set = {4, 5, 6};
  } else if (preset == "desk-small") {
    config.width = config.height = 20;
    config.block_probability = 0.20;
    config.deadline = 24;
    config.distance_set = {22, 23, 24};
  } else if (preset == "desk-large") {
    config.width = config.height = 40;
    config.block_probability = 0.20;
    config.deadline = 48;
    config.distance_set = {46, 47, 48};
  } else if (preset == "small") {
    config.width = config.height = 40;
    config.block_probability = 0.20;
    config.deadline = 50;
    config.distance_set = {48, 49, 50};
  } else if (preset == "medium") {
    config.width = config.height = 80;
    config.block_probability = 0.20;
    config.deadline = 100;
    config.distance_set = {98, 99, 100};
  } else if (preset == "large") {
    config.width = config.height = 120;
    config.block_probability = 0.20;
    config.deadline = 150;
    config.distance_set = {148, 149, 150};
  } else {
    throw std::runtime_error("unknown preset: " + preset);
  }
  return config;
}

}  // namespace mapfdl
