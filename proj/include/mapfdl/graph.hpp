#pragma once

#include <cstdint>
#include <optional>
#include <utility>
#include <vector>

namespace mapfdl {

inline constexpr int kUnreachable = -1;

// Grid bookkeeping kept alongside graphs that came from a grid map, so that
// agents and plan files can be expressed in (row, col) coordinates.
struct GridMeta {
  int height = 0;
  int width = 0;
  std::vector<std::uint8_t> blocked;           // row-major, size height*width
  std::vector<int> cell_vertex;                // row-major; -1 for blocked cells
  std::vector<std::pair<int, int>> vertex_cell;  // vertex id -> (row, col)
};

// Finite undirected graph. No self loops; adjacency lists are sorted and
// symmetric by construction. Immutable after construction.
class Graph {
 public:
  Graph() = default;

  // Edges may repeat and may be given in either orientation; self loops are
  // rejected. Throws std::runtime_error on invalid vertex ids.
  static Graph from_edges(int vertex_count, const std::vector<std::pair<int, int>>& edges);

  // 4-neighbor grid: vertices are exactly the unblocked cells, edges exactly
  // between 4-neighbor pairs of unblocked cells.
  static Graph from_grid(int height, int width, const std::vector<std::uint8_t>& blocked);

  int vertex_count() const { return static_cast<int>(adjacency_.size()); }
  int edge_count() const { return static_cast<int>(edges_.size()); }
  const std::vector<int>& neighbors(int v) const { return adjacency_[v]; }
  bool has_edge(int u, int v) const { return edge_id(u, v) >= 0; }

  // Undirected edges as (u, v) with u < v, sorted lexicographically; the index
  // into this list is the canonical edge id used by the flow network.
  const std::vector<std::pair<int, int>>& edges() const { return edges_; }
  int edge_id(int u, int v) const;  // -1 if absent

  bool is_grid() const { return grid_.has_value(); }
  const GridMeta& grid() const { return *grid_; }
  int vertex_at(int row, int col) const;  // -1 if blocked or out of range

 private:
  std::vector<std::vector<int>> adjacency_;
  std::vector<std::pair<int, int>> edges_;
  std::optional<GridMeta> grid_;
};

// Exact unweighted shortest-path distances from source; kUnreachable where no
// path exists.
std::vector<int> bfs_distances(const Graph& graph, int source);

}  // namespace mapfdl
