#pragma once

#include <functional>
#include <span>
#include <string>
#include <variant>
#include <vector>

#include <json.hpp>

namespace cheb2d {

/// A bivariate target f(x, y) on [-1,1]^2. Must be safe to call concurrently.
using TargetFunction = std::function<double(double, double)>;

/// Roots of T_n in decreasing order: cos((2l-1)pi/(2n)), l = 1..n.
std::vector<double> chebyshev_nodes(int n);

/// T_i(x) = cos(i arccos x) for |x| <= 1.
double eval_T(int i, double x);

/// Tensor grid of Gauss-Chebyshev nodes. The angles theta_l = (2l-1)pi/(2n)
/// are kept alongside the nodes since the quadrature is a midpoint rule in
/// theta.
struct ChebGrid {
  int n_x = 0;
  int n_y = 0;
  std::vector<double> nodes_x;
  std::vector<double> nodes_y;

  static ChebGrid make(int n_x, int n_y);
  static ChebGrid square(int n) { return make(n, n); }
};

struct QuadratureProvenance {
  int n_x;
  int n_y;
  bool operator==(const QuadratureProvenance&) const = default;
};

struct OracleProvenance {
  int oversample;
  int n;  // nodes per axis actually used
  bool operator==(const OracleProvenance&) const = default;
};

using Provenance = std::variant<QuadratureProvenance, OracleProvenance>;

/// Raw Chebyshev coefficients c_{i,j}, 0 <= i <= d_x, 0 <= j <= d_y, stored
/// row-major. No primed-sum weights are folded into the entries; the 1/4 and
/// 1/2 factors on the zero row/column are applied when the series is summed.
class CoeffMatrix {
 public:
  CoeffMatrix(int d_x, int d_y, Provenance provenance);

  int d_x() const noexcept { return d_x_; }
  int d_y() const noexcept { return d_y_; }
  const Provenance& provenance() const noexcept { return provenance_; }

  double operator()(int i, int j) const { return entries_[index(i, j)]; }
  double& operator()(int i, int j) { return entries_[index(i, j)]; }
  /// Bounds-checked access; throws ArgumentError outside the stored range.
  double at(int i, int j) const;

  std::span<const double> entries() const noexcept { return entries_; }

  /// Leading (d_x+1)x(d_y+1) block with the same provenance.
  CoeffMatrix truncated(int d_x, int d_y) const;

 private:
  std::size_t index(int i, int j) const {
    return static_cast<std::size_t>(i) * static_cast<std::size_t>(d_y_ + 1) +
           static_cast<std::size_t>(j);
  }

  int d_x_;
  int d_y_;
  Provenance provenance_;
  std::vector<double> entries_;
};

/// Primed-sum weight of index i: 1/2 for i == 0, else 1.
constexpr double primed_weight(int i) noexcept { return i == 0 ? 0.5 : 1.0; }

/// c~_{i,j} = 4/(n_x n_y) sum_lx sum_ly f(x_lx, y_ly) T_i(x_lx) T_j(y_ly).
/// f is sampled exactly once per node. Requires d_x < n_x and d_y < n_y.
CoeffMatrix compute_coeffs_quadrature(const TargetFunction& f, const ChebGrid& grid,
                                      int d_x, int d_y);

/// Node count per axis used by exact_coeffs_oracle.
int oracle_node_count(int d_x, int d_y, int oversample);

/// Reference values for the exact integral coefficients, obtained from a
/// heavily oversampled Gauss-Chebyshev rule.
CoeffMatrix exact_coeffs_oracle(const TargetFunction& f, int d_x, int d_y, int oversample);

/// Sum'_i Sum'_j c_{i,j} T_i(x) T_j(y) by nested Clenshaw recurrences.
double eval_partial_sum(const CoeffMatrix& c, double x, double y);

/// Evaluates the primed partial sum on the tensor grid xs x ys. Result is
/// row-major over (x, y).
std::vector<double> eval_partial_sum_grid(const CoeffMatrix& c, std::span<const double> xs,
                                          std::span<const double> ys);

struct GaussLegendreRule {
  std::vector<double> nodes;
  std::vector<double> weights;
};

/// m-point Gauss-Legendre rule on [-1,1] (Newton iteration on P_m).
GaussLegendreRule gauss_legendre(int m);

/// Integral of |g| over [-1,1]^2 by the m x m tensor Gauss-Legendre rule.
double l1_norm(const TargetFunction& g, int m);

/// ||f - C||_1 over [-1,1]^2 by the m x m tensor Gauss-Legendre rule.
double l1_error(const TargetFunction& f, const CoeffMatrix& c, int m);

/// c^{(r,s)}_{i,j}: the quadrature coefficient (i, j) of the supplied mixed
/// partial d^{r+s}f / dx^r dy^s on an n x n Gauss-Chebyshev grid.
double derivative_coeff(const TargetFunction& fpartial, int r, int s, int i, int j, int n);

/// CSV with header `i,j,c`, one entry per line, 17 significant digits.
std::string to_csv(const CoeffMatrix& c);

/// {d_x, d_y, provenance, entries} with entries as a row-major array.
nlohmann::ordered_json to_json(const CoeffMatrix& c);
nlohmann::ordered_json to_json(const Provenance& p);

/// Formats a double with 17 significant digits ("%.17g").
std::string format_real(double v);

}  // namespace cheb2d
