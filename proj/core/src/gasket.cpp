#include "gasket_plap/gasket.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <numeric>
#include <ostream>

#include "gasket_plap/errors.hpp"

namespace gplap {

CellAddress::CellAddress(std::vector<std::uint8_t> word) : word_(std::move(word)) {
  for (auto s : word_) {
    if (s < 1 || s > 3) throw InvariantError("cell address symbols must be in {1,2,3}");
  }
}

std::string CellAddress::to_string() const {
  std::string s;
  s.reserve(word_.size());
  for (auto c : word_) s.push_back(static_cast<char>('0' + c));
  return s;
}

std::array<Point, 3> equilateral_corners() {
  return {Point{0.0, 0.0}, Point{1.0, 0.0}, Point{0.5, std::sqrt(3.0) / 2.0}};
}

std::size_t GasketLevel::cell_count_for(int level) {
  std::size_t n = 1;
  for (int i = 0; i < level; ++i) n *= 3;
  return n;
}

std::size_t GasketLevel::vertex_count_for(int level) {
  return (3 * cell_count_for(level) + 3) / 2;
}

GasketLevel GasketLevel::build(int level, const std::array<Point, 3>& corners) {
  if (level < 0) throw PreconditionError("gasket level must be nonnegative");
  if (level > kMaxLevel) {
    throw CapacityError("level " + std::to_string(level) + " exceeds capacity: 3^m cells must fit in a 32-bit index (max level " +
                        std::to_string(kMaxLevel) + ")");
  }
  for (int a = 0; a < 3; ++a) {
    for (int b = a + 1; b < 3; ++b) {
      if (corners[a] == corners[b]) throw PreconditionError("gasket corners must be pairwise distinct");
    }
  }

  GasketLevel g;
  g.level_ = level;
  g.corners_ = corners;

  const std::size_t nv = vertex_count_for(level);
  const std::size_t nc = cell_count_for(level);
  g.coords_.reserve(nv);
  g.coords_ = {{1, 0, 0}, {0, 1, 0}, {0, 0, 1}};
  g.cells_ = {Cell{0, 1, 2}};

  std::vector<Cell> next;
  for (int m = 0; m < level; ++m) {
    for (auto& c : g.coords_) {
      c.i *= 2;
      c.j *= 2;
      c.k *= 2;
    }
    next.clear();
    next.reserve(g.cells_.size() * 3);
    for (const Cell& cell : g.cells_) {
      auto midpoint = [&](VertexId a, VertexId b) {
        const DyadicCoord& ca = g.coords_[a];
        const DyadicCoord& cb = g.coords_[b];
        g.coords_.push_back({(ca.i + cb.i) / 2, (ca.j + cb.j) / 2, (ca.k + cb.k) / 2});
        return static_cast<VertexId>(g.coords_.size() - 1);
      };
      const VertexId m12 = midpoint(cell[0], cell[1]);
      const VertexId m23 = midpoint(cell[1], cell[2]);
      const VertexId m13 = midpoint(cell[0], cell[2]);
      next.push_back({cell[0], m12, m13});
      next.push_back({m12, cell[1], m23});
      next.push_back({m13, m23, cell[2]});
    }
    g.cells_.swap(next);
  }

  g.points_.resize(nv);
  for (std::size_t v = 0; v < nv; ++v) {
    const DyadicCoord& c = g.coords_[v];
    const double wi = std::ldexp(static_cast<double>(c.i), -level);
    const double wj = std::ldexp(static_cast<double>(c.j), -level);
    const double wk = std::ldexp(static_cast<double>(c.k), -level);
    g.points_[v] = {wi * corners[0].x + wj * corners[1].x + wk * corners[2].x,
                    wi * corners[0].y + wj * corners[1].y + wk * corners[2].y};
  }

  g.edges_.reserve(3 * nc);
  for (const Cell& c : g.cells_) {
    g.edges_.push_back({c[0], c[1]});
    g.edges_.push_back({c[1], c[2]});
    g.edges_.push_back({c[2], c[0]});
  }

  g.weights_ = vertex_weights(g);
  return g;
}

CellAddress GasketLevel::address(CellIndex c) const {
  if (c >= cells_.size()) throw DimensionError("cell index out of range");
  std::vector<std::uint8_t> word(static_cast<std::size_t>(level_));
  for (int pos = level_ - 1; pos >= 0; --pos) {
    word[static_cast<std::size_t>(pos)] = static_cast<std::uint8_t>(c % 3 + 1);
    c /= 3;
  }
  return CellAddress(std::move(word));
}

std::array<VertexId, 3> GasketLevel::child_midpoints(CellIndex coarse_cell) const {
  if (level_ < 1) throw PreconditionError("child_midpoints requires level >= 1");
  const std::size_t coarse_vertices = vertex_count_for(level_ - 1);
  if (coarse_cell >= cell_count_for(level_ - 1)) throw DimensionError("coarse cell index out of range");
  const auto base = static_cast<VertexId>(coarse_vertices + 3 * static_cast<std::size_t>(coarse_cell));
  return {base, base + 1, base + 2};
}

GasketLevel build_level(int level, const std::array<Point, 3>& corners) {
  return GasketLevel::build(level, corners);
}

std::vector<double> vertex_weights(const GasketLevel& g) {
  std::vector<int> incidence(g.vertex_count(), 0);
  for (const Cell& c : g.cells()) {
    for (VertexId v : c) ++incidence[v];
  }
  const double share = 1.0 / (3.0 * static_cast<double>(g.cell_count()));
  std::vector<double> w(g.vertex_count());
  std::transform(incidence.begin(), incidence.end(), w.begin(), [share](int n) { return n * share; });
  return w;
}

double integrate(const GasketLevel& g, std::span<const double> values) {
  if (values.size() != g.vertex_count()) {
    throw DimensionError("integrate: expected " + std::to_string(g.vertex_count()) + " values, got " +
                         std::to_string(values.size()));
  }
  const auto w = g.weights();
  return std::inner_product(w.begin(), w.end(), values.begin(), 0.0);
}

FractalFunction::FractalFunction(int level, std::vector<double> values, bool dirichlet)
    : level_(level), values_(std::move(values)), dirichlet_(dirichlet) {
  if (values_.size() != GasketLevel::vertex_count_for(level_)) {
    throw DimensionError("function length does not match level " + std::to_string(level_));
  }
  check_invariants();
}

FractalFunction FractalFunction::zeros(const GasketLevel& g, bool dirichlet) {
  return FractalFunction(g.level(), std::vector<double>(g.vertex_count(), 0.0), dirichlet);
}

FractalFunction FractalFunction::dirichlet_from(const GasketLevel& g, std::vector<double> values) {
  if (values.size() != g.vertex_count()) throw DimensionError("function length does not match gasket level");
  for (VertexId b : GasketLevel::boundary()) values[b] = 0.0;
  return FractalFunction(g.level(), std::move(values), true);
}

void FractalFunction::check_invariants() const {
  if (!dirichlet_) return;
  for (VertexId b : GasketLevel::boundary()) {
    if (values_[b] != 0.0) throw InvariantError("Dirichlet function must vanish on the boundary");
  }
}

FractalFunction FractalFunction::scaled(double c) const {
  FractalFunction out = *this;
  for (double& x : out.values_) x *= c;
  return out;
}

bool FractalFunction::is_zero() const noexcept {
  return std::all_of(values_.begin(), values_.end(), [](double x) { return x == 0.0; });
}

double FractalFunction::sup_norm() const noexcept {
  double s = 0.0;
  for (double x : values_) s = std::max(s, std::abs(x));
  return s;
}

void require_same_level(const FractalFunction& u, const GasketLevel& g) {
  if (u.level() != g.level() || u.size() != g.vertex_count()) {
    throw DimensionError("level mismatch: function at level " + std::to_string(u.level()) + ", gasket at level " +
                         std::to_string(g.level()));
  }
}

void write_vertices_csv(const GasketLevel& g, std::ostream& os) {
  os << "id,x,y,weight,is_boundary\n";
  char buf[128];
  const auto pts = g.points();
  const auto w = g.weights();
  for (std::size_t v = 0; v < g.vertex_count(); ++v) {
    std::snprintf(buf, sizeof buf, "%zu,%.17g,%.17g,%.17g,%d\n", v, pts[v].x, pts[v].y, w[v],
                  GasketLevel::is_boundary(static_cast<VertexId>(v)) ? 1 : 0);
    os << buf;
  }
}

}  // namespace gplap
