#pragma once

#include <array>
#include <compare>
#include <cstddef>
#include <cstdint>
#include <iosfwd>
#include <span>
#include <string>
#include <vector>

namespace gplap {

using VertexId = std::uint32_t;
using CellIndex = std::uint32_t;

struct Point {
  double x = 0.0;
  double y = 0.0;
  friend bool operator==(const Point&, const Point&) = default;
};

/// Exact position of a level-m vertex: the point (i q1 + j q2 + k q3) / 2^m.
struct DyadicCoord {
  std::int64_t i = 0;
  std::int64_t j = 0;
  std::int64_t k = 0;
  friend auto operator<=>(const DyadicCoord&, const DyadicCoord&) = default;
};

/// Word over {1,2,3} naming the composite map F_w1 o ... o F_wm.
class CellAddress {
 public:
  CellAddress() = default;
  explicit CellAddress(std::vector<std::uint8_t> word);

  std::size_t length() const noexcept { return word_.size(); }
  std::span<const std::uint8_t> word() const noexcept { return word_; }
  std::string to_string() const;

  friend auto operator<=>(const CellAddress&, const CellAddress&) = default;

 private:
  std::vector<std::uint8_t> word_;
};

using Cell = std::array<VertexId, 3>;

struct Edge {
  VertexId a;
  VertexId b;
};

std::array<Point, 3> equilateral_corners();

/// Level-m graph approximation of the Sierpinski gasket.
///
/// Vertex ids are prefix-stable across levels: the three corners come
/// first, then for every level-(m-1) cell in lexicographic address order the
/// midpoints of its edges (q1q2, q2q3, q1q3). Cell c lists the images of
/// q1, q2, q3 under F_w where w is the base-3 expansion of c. Every edge of
/// the graph belongs to exactly one cell.
class GasketLevel {
 public:
  static constexpr int kMaxLevel = 19;

  static GasketLevel build(int level, const std::array<Point, 3>& corners = equilateral_corners());

  int level() const noexcept { return level_; }
  std::size_t vertex_count() const noexcept { return points_.size(); }
  std::size_t cell_count() const noexcept { return cells_.size(); }

  std::span<const Point> points() const noexcept { return points_; }
  std::span<const DyadicCoord> coords() const noexcept { return coords_; }
  std::span<const Cell> cells() const noexcept { return cells_; }
  std::span<const Edge> edges() const noexcept { return edges_; }
  std::span<const double> weights() const noexcept { return weights_; }
  const std::array<Point, 3>& corners() const noexcept { return corners_; }

  static constexpr std::array<VertexId, 3> boundary() noexcept { return {0, 1, 2}; }
  static constexpr bool is_boundary(VertexId v) noexcept { return v < 3; }

  CellAddress address(CellIndex c) const;

  /// Ids of the three vertices created when level-(m-1) cell `coarse_cell`
  /// was subdivided, ordered (q1q2, q2q3, q1q3). Requires level() >= 1.
  std::array<VertexId, 3> child_midpoints(CellIndex coarse_cell) const;

  /// Number of vertices of the level-m graph: (3^{m+1} + 3) / 2.
  static std::size_t vertex_count_for(int level);
  static std::size_t cell_count_for(int level);

 private:
  GasketLevel() = default;

  int level_ = 0;
  std::array<Point, 3> corners_{};
  std::vector<Point> points_;
  std::vector<DyadicCoord> coords_;
  std::vector<Cell> cells_;
  std::vector<Edge> edges_;
  std::vector<double> weights_;
};

GasketLevel build_level(int level, const std::array<Point, 3>& corners = equilateral_corners());

/// Normalized self-similar measure: each cell carries 3^{-m}, split equally
/// among its vertices.
std::vector<double> vertex_weights(const GasketLevel& g);

/// Sum of weights[v] * values[v].
double integrate(const GasketLevel& g, std::span<const double> values);

/// Vertex-indexed function on one level. Dirichlet functions vanish on the
/// three corners.
class FractalFunction {
 public:
  FractalFunction() = default;
  FractalFunction(int level, std::vector<double> values, bool dirichlet);

  static FractalFunction zeros(const GasketLevel& g, bool dirichlet);
  /// Copies `values` and zeroes the corners.
  static FractalFunction dirichlet_from(const GasketLevel& g, std::vector<double> values);

  int level() const noexcept { return level_; }
  bool dirichlet() const noexcept { return dirichlet_; }
  std::size_t size() const noexcept { return values_.size(); }
  std::span<const double> values() const noexcept { return values_; }
  double operator[](std::size_t v) const { return values_[v]; }

  /// Mutable access. Callers writing to a Dirichlet function must keep the
  /// corners at zero; check_invariants() re-verifies.
  std::vector<double>& mutable_values() noexcept { return values_; }
  void check_invariants() const;

  FractalFunction scaled(double c) const;
  bool is_zero() const noexcept;
  double sup_norm() const noexcept;

  friend bool operator==(const FractalFunction&, const FractalFunction&) = default;

 private:
  int level_ = 0;
  std::vector<double> values_;
  bool dirichlet_ = false;
};

void require_same_level(const FractalFunction& u, const GasketLevel& g);

/// CSV with header `id,x,y,weight,is_boundary`, 17 significant digits.
void write_vertices_csv(const GasketLevel& g, std::ostream& os);

}  // namespace gplap
