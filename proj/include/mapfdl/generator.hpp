#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "mapfdl/instance.hpp"

namespace mapfdl {

// Random grid instance generation. Cells are blocked independently with the
// configured probability; each agent's start and goal are sampled uniformly
// among pairs whose shortest-path distance lies in the admissible set. Starts
// are mutually distinct and goals are mutually distinct. Deterministic given
// the seed: the same config yields byte-identical instance files.
struct GeneratorConfig {
  int width = 0;
  int height = 0;
  double block_probability = 0.0;  // in [0, 1)
  int deadline = 0;                // T_end; ignored when slack_deadline is set
  int agent_count = 0;
  std::vector<int> distance_set;   // admissible start-goal distances
  std::uint64_t seed = 0;
  std::string name;                // instance name; defaults to "gen_<seed>"
  // When set, the deadline becomes (max start-goal distance over the agents)
  // plus this slack instead of the fixed `deadline`.
  std::optional<int> slack_deadline;
  int max_mask_retries = 64;       // resampled blocked masks before giving up
  int max_agent_retries = 256;     // start draws per agent per mask
};

// Throws std::runtime_error("generation_failed: ...") when the retry budget
// is exhausted (e.g. the distance set is unsatisfiable on the sampled masks).
Instance generate_instance(const GeneratorConfig& config);

// Named presets. desk-scale presets are sized for tests and acceptance runs;
// small/medium/large mirror the benchmark protocol of the evaluation setup.
//   tiny:       6x6, 10% blocked, T provisional 8, distances {4,5,6}
//   desk-small: 20x20, 20% blocked, T=24, distances {22,23,24}
//   desk-large: 40x40, 20% blocked, T=48, distances {46,47,48}
//   small:      40x40, 20% blocked, T=50, distances {48,49,50}
//   medium:     80x80, 20% blocked, T=100, distances {98,99,100}
//   large:      120x120, 20% blocked, T=150, distances {148,149,150}
GeneratorConfig preset_config(const std::string& preset);

}  // namespace mapfdl
