#include "mapfdl/instance.hpp"

#include <filesystem>
#include <fstream>
#include <sstream>
#include <stdexcept>

namespace mapfdl {

namespace {

std::runtime_error parse_error(const std::string& msg) {
  return std::runtime_error("instance: " + msg);
}

// Line-oriented reader that skips blank lines and '#' comments.
class LineReader {
 public:
  explicit LineReader(const std::string& text) : stream_(text) {}

  // Returns false at end of input.
  bool next(std::string& line) {
    while (std::getline(stream_, line)) {
      ++line_no_;
      if (!line.empty() && line.back() == '\r') line.pop_back();
      const auto first = line.find_first_not_of(" \t");
      if (first == std::string::npos) continue;
      if (line[first] == '#') continue;
      return true;
    }
    return false;
  }

  std::string require(const std::string& what) {
    std::string line;
    if (!next(line)) throw parse_error("unexpected end of input, expected " + what);
    return line;
  }

  int line_no() const { return line_no_; }

 private:
  std::istringstream stream_;
  int line_no_ = 0;
};

int parse_int(std::istringstream& in, const std::string& what) {
  long long value = 0;
  if (!(in >> value)) throw parse_error("expected integer for " + what);
  return static_cast<int>(value);
}

}  // namespace

Instance parse_instance(const std::string& text, std::string name) {
  LineReader reader(text);

  {
    std::istringstream header(reader.require("header"));
    std::string magic;
    int version = 0;
    header >> magic >> version;
    if (magic != "mapfdl" || version != 1) throw parse_error("bad header, expected 'mapfdl 1'");
  }

  Instance instance;
  instance.name = std::move(name);

  {
    std::istringstream line(reader.require("deadline"));
    std::string keyword;
    line >> keyword;
    if (keyword != "deadline") throw parse_error("expected 'deadline <T>'");
    instance.deadline = parse_int(line, "deadline");
    if (instance.deadline < 0) throw parse_error("deadline must be non-negative");
  }

  bool grid = false;
  {
    std::istringstream line(reader.require("map or graph"));
    std::string keyword;
    line >> keyword;
    if (keyword == "map") {
      grid = true;
      const int height = parse_int(line, "map height");
      const int width = parse_int(line, "map width");
      if (height <= 0 || width <= 0) throw parse_error("map dimensions must be positive");
      std::vector<std::uint8_t> blocked;
      blocked.reserve(static_cast<std::size_t>(height) * width);
      for (int r = 0; r < height; ++r) {
        const std::string row = reader.require("map row");
        if (static_cast<int>(row.size()) < width)
          throw parse_error("map row " + std::to_string(r) + " too short");
        for (int c = 0; c < width; ++c) {
          if (row[c] == '.')
            blocked.push_back(0);
          else if (row[c] == '@')
            blocked.push_back(1);
          else
            throw parse_error(std::string("bad map character '") + row[c] + "'");
        }
      }
      instance.graph = Graph::from_grid(height, width, blocked);
    } else if (keyword == "graph") {
      const int vertex_count = parse_int(line, "vertex count");
      const int edge_count = parse_int(line, "edge count");
      if (vertex_count <= 0) throw parse_error("graph needs at least one vertex");
      if (edge_count < 0) throw parse_error("negative edge count");
      std::vector<std::pair<int, int>> edges;
      edges.reserve(edge_count);
      for (int e = 0; e < edge_count; ++e) {
        std::istringstream edge_line(reader.require("edge"));
        const int u = parse_int(edge_line, "edge endpoint");
        const int v = parse_int(edge_line, "edge endpoint");
        edges.emplace_back(u, v);
      }
      instance.graph = Graph::from_edges(vertex_count, edges);
    } else {
      throw parse_error("expected 'map' or 'graph' section");
    }
  }

  {
    std::istringstream line(reader.require("agents"));
    std::string keyword;
    line >> keyword;
    if (keyword != "agents") throw parse_error("expected 'agents <M>'");
    const int agent_count = parse_int(line, "agent count");
    if (agent_count < 1) throw parse_error("need at least one agent");
    instance.agents.reserve(agent_count);
    for (int i = 0; i < agent_count; ++i) {
      std::istringstream agent_line(reader.require("agent"));
      AgentTask task;
      if (grid) {
        const int sr = parse_int(agent_line, "start row");
        const int sc = parse_int(agent_line, "start col");
        const int gr = parse_int(agent_line, "goal row");
        const int gc = parse_int(agent_line, "goal col");
        task.start = instance.graph.vertex_at(sr, sc);
        task.goal = instance.graph.vertex_at(gr, gc);
        if (task.start < 0)
          throw parse_error("agent " + std::to_string(i) + " start cell blocked or out of range");
        if (task.goal < 0)
          throw parse_error("agent " + std::to_string(i) + " goal cell blocked or out of range");
      } else {
        task.start = parse_int(agent_line, "start vertex");
        task.goal = parse_int(agent_line, "goal vertex");
        if (task.start < 0 || task.start >= instance.graph.vertex_count())
          throw parse_error("agent " + std::to_string(i) + " start vertex unknown");
        if (task.goal < 0 || task.goal >= instance.graph.vertex_count())
          throw parse_error("agent " + std::to_string(i) + " goal vertex unknown");
      }
      instance.agents.push_back(task);
    }
  }

  // Every agent must be able to reach its goal within the deadline in the
  // absence of other agents.
  for (int i = 0; i < instance.agent_count(); ++i) {
    const auto dist = bfs_distances(instance.graph, instance.agents[i].start);
    const int d = dist[instance.agents[i].goal];
    if (d == kUnreachable || d > instance.deadline)
      throw parse_error("agent " + std::to_string(i) + " unreachable within deadline");
  }

  return instance;
}

std::string format_instance(const Instance& instance) {
  std::ostringstream out;
  out << "mapfdl 1\n";
  out << "deadline " << instance.deadline << "\n";
  if (instance.graph.is_grid()) {
    const GridMeta& grid = instance.graph.grid();
    out << "map " << grid.height << " " << grid.width << "\n";
    for (int r = 0; r < grid.height; ++r) {
      for (int c = 0; c < grid.width; ++c) out << (grid.blocked[r * grid.width + c] ? '@' : '.');
      out << "\n";
    }
    out << "agents " << instance.agent_count() << "\n";
    for (const AgentTask& task : instance.agents) {
      const auto [sr, sc] = grid.vertex_cell[task.start];
      const auto [gr, gc] = grid.vertex_cell[task.goal];
      out << sr << " " << sc << " " << gr << " " << gc << "\n";
    }
  } else {
    out << "graph " << instance.graph.vertex_count() << " " << instance.graph.edge_count() << "\n";
    for (const auto& [u, v] : instance.graph.edges()) out << u << " " << v << "\n";
    out << "agents " << instance.agent_count() << "\n";
    for (const AgentTask& task : instance.agents) out << task.start << " " << task.goal << "\n";
  }
  return out.str();
}

Instance load_instance(const std::string& path) {
  std::ifstream file(path);
  if (!file) throw std::runtime_error("cannot open instance file: " + path);
  std::ostringstream buffer;
  buffer << file.rdbuf();
  return parse_instance(buffer.str(), std::filesystem::path(path).stem().string());
}

void save_instance(const Instance& instance, const std::string& path) {
  std::ofstream file(path);
  if (!file) throw std::runtime_error("cannot write instance file: " + path);
  file << format_instance(instance);
}

namespace {

// Serializes one vertex: row,col on grid graphs, the plain id otherwise.
std::string vertex_token(const Instance& instance, int v) {
  if (instance.graph.is_grid()) {
    const auto [r, c] = instance.graph.grid().vertex_cell[v];
    return std::to_string(r) + "," + std::to_string(c);
  }
  return std::to_string(v);
}

int parse_vertex_token(const Instance& instance, const std::string& token) {
  const auto comma = token.find(',');
  if (comma != std::string::npos) {
    if (!instance.graph.is_grid()) throw parse_error("row,col vertex in a non-grid plan");
    const int row = std::stoi(token.substr(0, comma));
    const int col = std::stoi(token.substr(comma + 1));
    const int v = instance.graph.vertex_at(row, col);
    if (v < 0) throw parse_error("plan vertex " + token + " blocked or out of range");
    return v;
  }
  const int v = std::stoi(token);
  if (v < 0 || v >= instance.graph.vertex_count())
    throw parse_error("plan vertex " + token + " unknown");
  return v;
}

}  // namespace

std::string format_plan(const Instance& instance, const Plan& plan) {
  std::ostringstream out;
  out << "plan " << plan.agent_count() << " " << instance.deadline << " " << plan_cost(plan)
      << "\n";
  for (int i = 0; i < plan.agent_count(); ++i) {
    if (!plan.paths[i]) {
      out << "dead " << i << "\n";
      continue;
    }
    out << "path " << i;
    for (const int v : *plan.paths[i]) out << " " << vertex_token(instance, v);
    out << "\n";
  }
  return out.str();
}

Plan parse_plan(const Instance& instance, const std::string& text) {
  LineReader reader(text);
  std::istringstream header(reader.require("plan header"));
  std::string keyword;
  int agent_count = 0;
  int deadline = 0;
  int cost = 0;
  header >> keyword >> agent_count >> deadline >> cost;
  if (keyword != "plan" || !header) throw parse_error("bad plan header");
  if (agent_count != instance.agent_count()) throw parse_error("plan agent count mismatch");
  if (deadline != instance.deadline) throw parse_error("plan deadline mismatch");

  Plan plan(agent_count);
  std::vector<bool> seen(agent_count, false);
  for (int n = 0; n < agent_count; ++n) {
    std::istringstream line(reader.require("plan entry"));
    std::string kind;
    int agent = -1;
    line >> kind >> agent;
    if (!line || agent < 0 || agent >= agent_count)
      throw parse_error("bad plan entry for agent " + std::to_string(agent));
    if (seen[agent]) throw parse_error("duplicate plan entry for agent " + std::to_string(agent));
    seen[agent] = true;
    if (kind == "dead") continue;
    if (kind != "path") throw parse_error("expected 'path' or 'dead'");
    Path path;
    std::string token;
    while (line >> token) path.push_back(parse_vertex_token(instance, token));
    plan.paths[agent] = std::move(path);
  }
  if (plan_cost(plan) != cost) throw parse_error("plan header cost mismatch");
  return plan;
}

}  // namespace mapfdl
