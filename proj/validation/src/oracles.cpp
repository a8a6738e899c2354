#include <Eigen/Dense>
#include <cmath>

#include "gasket_plap/validation.hpp"

namespace gplap::validation::oracle {

double rp_level1_p2() {
  // Corners v1 = v2 = 0, v3 = 1; unknowns (m12, m23, m13). Each midpoint
  // touches four edges, so the normal equations read 4 m - (sum of its
  // four neighbours) = 0.
  Eigen::Matrix3d A;
  A << 4, -1, -1,  //
      -1, 4, -1,   //
      -1, -1, 4;
  const Eigen::Vector3d rhs(0.0, 1.0, 1.0);  // m23 and m13 touch v3
  const Eigen::Vector3d m = A.fullPivLu().solve(rhs);
  const double v1 = 0.0, v2 = 0.0, v3 = 1.0;
  const double m12 = m[0], m23 = m[1], m13 = m[2];
  auto sq = [](double x) { return x * x; };
  const double e1 = sq(v1 - m12) + sq(m12 - m13) + sq(m13 - v1);
  const double e2 = sq(m12 - v2) + sq(v2 - m23) + sq(m23 - m12);
  const double e3 = sq(m13 - m23) + sq(m23 - v3) + sq(v3 - m13);
  const double level0 = sq(v1 - v2) + sq(v2 - v3) + sq(v3 - v1);
  return (e1 + e2 + e3) / level0;
}

std::array<double, 3> harmonic_midpoints_p2(double x1, double x2, double x3) {
  Eigen::Matrix3d A;
  A << 4, -1, -1,  //
      -1, 4, -1,   //
      -1, -1, 4;
  // m12 touches v1, v2; m23 touches v2, v3; m13 touches v1, v3.
  const Eigen::Vector3d rhs(x1 + x2, x2 + x3, x1 + x3);
  const Eigen::Vector3d m = A.fullPivLu().solve(rhs);
  return {m[0], m[1], m[2]};
}

double k1_p2() {
  // u(m12) = 1, u(m23) = u(m13) = s, corners 0:
  //   cell 1: 1 + (1-s)^2 + s^2, cell 2: 1 + s^2 + (s-1)^2, cell 3: 2 s^2.
  auto crude = [](double s) { return 2.0 + 2.0 * (1.0 - s) * (1.0 - s) + 4.0 * s * s; };
  double lo = 0.0, hi = 1.0;
  const double gr = (std::sqrt(5.0) - 1.0) / 2.0;
  for (int i = 0; i < 200; ++i) {
    const double a = hi - gr * (hi - lo);
    const double b = lo + gr * (hi - lo);
    if (crude(a) < crude(b)) {
      hi = b;
    } else {
      lo = a;
    }
  }
  const double renormalized = crude(0.5 * (lo + hi)) / 0.6;
  return 1.0 / std::sqrt(renormalized);
}

namespace {

double reduced_derivative(double t, const FiberingProfile& f) {
  return f.A * std::pow(t, f.pk1() - f.q) + f.B * std::pow(t, f.p - f.q) - f.lambda * f.F -
         f.G * std::pow(t, f.l - f.q);
}

double bisect_root(const FiberingProfile& f, double lo, double hi) {
  double flo = reduced_derivative(lo, f);
  for (int i = 0; i < 200; ++i) {
    const double mid = 0.5 * (lo + hi);
    if (mid <= lo || mid >= hi) break;
    const double fm = reduced_derivative(mid, f);
    if ((fm < 0.0) == (flo < 0.0)) {
      lo = mid;
      flo = fm;
    } else {
      hi = mid;
    }
  }
  return 0.5 * (lo + hi);
}

}  // namespace

std::vector<GridRoot> dense_grid_roots(const FiberingProfile& f, double t_lo, double t_hi, int n) {
  std::vector<double> t(static_cast<std::size_t>(n));
  std::vector<double> v(static_cast<std::size_t>(n));
  const double a = std::log(t_lo);
  const double b = std::log(t_hi);
  for (int i = 0; i < n; ++i) {
    t[static_cast<std::size_t>(i)] = std::exp(a + (b - a) * i / (n - 1));
    v[static_cast<std::size_t>(i)] = reduced_derivative(t[static_cast<std::size_t>(i)], f);
  }
  std::vector<GridRoot> roots;
  for (std::size_t i = 0; i + 1 < t.size(); ++i) {
    if (v[i] == 0.0) {
      roots.push_back({t[i], v[i + 1] > 0.0});
    } else if ((v[i] < 0.0) != (v[i + 1] < 0.0) && v[i + 1] != 0.0) {
      roots.push_back({bisect_root(f, t[i], t[i + 1]), v[i] < 0.0});
    }
  }
  if (!roots.empty()) return roots;

  // No sign change: look for a positive maximum hidden between grid points.
  std::size_t best = 0;
  for (std::size_t i = 1; i < v.size(); ++i) {
    if (v[i] > v[best]) best = i;
  }
  if (best == 0 || best + 1 >= v.size()) return roots;
  double lo = t[best - 1];
  double hi = t[best + 1];
  const double gr = (std::sqrt(5.0) - 1.0) / 2.0;
  for (int i = 0; i < 200; ++i) {
    const double x = hi - gr * (hi - lo);
    const double y = lo + gr * (hi - lo);
    if (reduced_derivative(x, f) > reduced_derivative(y, f)) {
      hi = y;
    } else {
      lo = x;
    }
  }
  const double peak_t = 0.5 * (lo + hi);
  if (reduced_derivative(peak_t, f) > 0.0) {
    roots.push_back({bisect_root(f, t[best - 1], peak_t), true});
    roots.push_back({bisect_root(f, peak_t, t[best + 1]), false});
  }
  return roots;
}

}  // namespace gplap::validation::oracle
