#pragma once

#include <cstdint>
#include <map>
#include <stdexcept>
#include <string>
#include <vector>

#include "tstar/clause.hpp"
#include "tstar/cost.hpp"

namespace tstar {

struct Cell {
  int x = 0, y = 0, z = 0;
  friend auto operator<=>(const Cell&, const Cell&) = default;
};

std::string to_string(const Cell& c);

enum class Connectivity : int {
  Four = 4,    // 2-D straight moves
  Eight = 8,   // 2-D straight + diagonal
  Six = 6,     // 3-D straight
  TwentySix = 26,
};

/// Thrown when a workspace or trajectory document fails validation.
class ValidationError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// A bounded grid of unit cells with obstacles, per-cell proposition
/// labels, a start cell and a move connectivity. Immutable after load;
/// all queries are safe for concurrent shared use.
///
/// Moves between straight neighbours cost 1, diagonal neighbours 1.5,
/// tracked exactly in half-units. There is no stay-in-place move.
class GridWorkspace {
 public:
  struct Move {
    int dx, dy, dz;
    bool diagonal;
  };

  GridWorkspace(int width, int height, int depth, Connectivity conn, Cell start);

  /// Parses either supported format (sniffed by leading '{'): the ASCII
  /// grid format or the structured JSON object. Validates all invariants.
  static GridWorkspace load(std::string_view text);

  std::string to_ascii() const;
  std::string to_json() const;

  void add_obstacle(Cell c);
  void add_label(Cell c, const std::string& prop);
  /// Re-checks invariants after direct mutation during construction.
  void validate() const;

  int width() const { return width_; }
  int height() const { return height_; }
  int depth() const { return depth_; }
  bool is_3d() const { return depth_ > 1; }
  Connectivity connectivity() const { return conn_; }
  Cell start() const { return start_; }

  bool in_bounds(Cell c) const {
    return c.x >= 0 && c.x < width_ && c.y >= 0 && c.y < height_ && c.z >= 0 && c.z < depth_;
  }
  bool is_obstacle(Cell c) const { return obstacle_[cell_index(c)]; }
  bool is_free(Cell c) const { return in_bounds(c) && !is_obstacle(c); }

  std::size_t num_cells() const { return obstacle_.size(); }
  std::size_t num_free_cells() const;
  std::uint32_t cell_index(Cell c) const {
    return static_cast<std::uint32_t>((c.z * height_ + c.y) * width_ + c.x);
  }
  Cell cell_at(std::uint32_t idx) const {
    int x = static_cast<int>(idx) % width_;
    int rest = static_cast<int>(idx) / width_;
    return {x, rest % height_, rest / height_};
  }

  /// Labels of a cell; empty set when unlabeled.
  const PropSet& label_of(Cell c) const;
  /// All labeled cells, ordered by cell index.
  const std::map<std::uint32_t, PropSet>& labels() const { return labels_; }
  /// Ordered universe of propositions appearing in the labeling.
  const std::vector<std::string>& propositions() const { return propositions_; }

  /// In-bound, non-obstacle one-move successors with exact costs.
  /// Throws on an obstacle or out-of-bounds query.
  std::vector<std::pair<Cell, Cost>> neighbors(Cell c) const;

  /// Allocation-free neighbour walk used by the searches; the callback
  /// receives (cell, cost).
  template <typename F>
  void for_each_neighbor(Cell c, F&& fn) const {
    for (const auto& d : move_table()) {
      Cell n{c.x + d.dx, c.y + d.dy, c.z + d.dz};
      if (in_bounds(n) && !is_obstacle(n)) fn(n, d.diagonal ? Cost::diagonal() : Cost::straight());
    }
  }

  /// Exact obstacle-free shortest-path cost between two in-bound cells:
  /// Manhattan for straight-only connectivities, otherwise largest delta
  /// plus half the middle delta. A lower bound on any constrained path
  /// cost, consistent, and exact on empty grids.
  Cost heuristic(Cell a, Cell b) const;

 private:
  const std::vector<Move>& move_table() const;

  int width_, height_, depth_;
  Connectivity conn_;
  Cell start_;
  std::vector<std::uint8_t> obstacle_;
  std::map<std::uint32_t, PropSet> labels_;
  std::vector<std::string> propositions_;
};

inline GridWorkspace load_workspace(std::string_view text) { return GridWorkspace::load(text); }

}  // namespace tstar
