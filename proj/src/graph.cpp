#include "mapfdl/graph.hpp"

#include <algorithm>
#include <deque>
#include <stdexcept>
#include <string>

namespace mapfdl {

namespace {

std::runtime_error graph_error(const std::string& msg) {
  return std::runtime_error("graph: " + msg);
}

}  // namespace

Graph Graph::from_edges(int vertex_count, const std::vector<std::pair<int, int>>& edges) {
  if (vertex_count < 0) throw graph_error("negative vertex count");
  std::vector<std::pair<int, int>> canonical;
  canonical.reserve(edges.size());
  for (auto [u, v] : edges) {
    if (u < 0 || u >= vertex_count || v < 0 || v >= vertex_count)
      throw graph_error("edge endpoint out of range: " + std::to_string(u) + " " +
                        std::to_string(v));
    if (u == v) throw graph_error("self loop at vertex " + std::to_string(u));
    canonical.emplace_back(std::min(u, v), std::max(u, v));
  }
  std::sort(canonical.begin(), canonical.end());
  canonical.erase(std::unique(canonical.begin(), canonical.end()), canonical.end());

  Graph g;
  g.adjacency_.assign(vertex_count, {});
  g.edges_ = std::move(canonical);
  for (auto [u, v] : g.edges_) {
    g.adjacency_[u].push_back(v);
    g.adjacency_[v].push_back(u);
  }
  for (auto& adj : g.adjacency_) std::sort(adj.begin(), adj.end());
  return g;
}

Graph Graph::from_grid(int height, int width, const std::vector<std::uint8_t>& blocked) {
  if (height <= 0 || width <= 0) throw graph_error("empty grid");
  if (blocked.size() != static_cast<std::size_t>(height) * static_cast<std::size_t>(width))
    throw graph_error("blocked mask size mismatch");

  GridMeta meta;
  meta.height = height;
  meta.width = width;
  meta.blocked = blocked;
  meta.cell_vertex.assign(blocked.size(), -1);

  int next_id = 0;
  for (int r = 0; r < height; ++r) {
    for (int c = 0; c < width; ++c) {
      const int cell = r * width + c;
      if (!blocked[cell]) {
        meta.cell_vertex[cell] = next_id++;
        meta.vertex_cell.emplace_back(r, c);
      }
    }
  }

  std::vector<std::pair<int, int>> edges;
  for (int r = 0; r < height; ++r) {
    for (int c = 0; c < width; ++c) {
      const int v = meta.cell_vertex[r * width + c];
      if (v < 0) continue;
      if (c + 1 < width) {
        const int right = meta.cell_vertex[r * width + c + 1];
        if (right >= 0) edges.emplace_back(v, right);
      }
      if (r + 1 < height) {
        const int down = meta.cell_vertex[(r + 1) * width + c];
        if (down >= 0) edges.emplace_back(v, down);
      }
    }
  }

  Graph g = from_edges(next_id, edges);
  g.grid_ = std::move(meta);
  return g;
}

int Graph::edge_id(int u, int v) const {
  if (u == v) return -1;
  const std::pair<int, int> key{std::min(u, v), std::max(u, v)};
  const auto it = std::lower_bound(edges_.begin(), edges_.end(), key);
  if (it == edges_.end() || *it != key) return -1;
  return static_cast<int>(it - edges_.begin());
}

int Graph::vertex_at(int row, int col) const {
  if (!grid_) return -1;
  if (row < 0 || row >= grid_->height || col < 0 || col >= grid_->width) return -1;
  return grid_->cell_vertex[row * grid_->width + col];
}

std::vector<int> bfs_distances(const Graph& graph, int source) {
  std::vector<int> dist(graph.vertex_count(), kUnreachable);
  if (source < 0 || source >= graph.vertex_count())
    throw std::runtime_error("bfs: source out of range");
  dist[source] = 0;
  std::deque<int> queue{source};
  while (!queue.empty()) {
    const int u = queue.front();
    queue.pop_front();
    for (const int v : graph.neighbors(u)) {
      if (dist[v] == kUnreachable) {
        dist[v] = dist[u] + 1;
        queue.push_back(v);
      }
    }
  }
  return dist;
}

}  // namespace mapfdl
