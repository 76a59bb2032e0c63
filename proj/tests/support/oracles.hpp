#pragma once

// Reference computations that share no code with the library.

#include <cmath>
#include <functional>
#include <numbers>
#include <vector>

namespace oracle {

inline constexpr double pi = std::numbers::pi;

inline double cheb_t(int n, double x) { return std::cos(n * std::acos(x)); }

inline double simpson(const std::function<double(double)>& g, double a, double b, int panels) {
  const double h = (b - a) / panels;
  double acc = g(a) + g(b);
  for (int p = 1; p < panels; ++p) acc += g(a + p * h) * (p % 2 ? 4.0 : 2.0);
  return acc * h / 3.0;
}

// Composite Simpson between consecutive breakpoints; g must be smooth on
// each piece.
inline double piecewise_simpson(const std::function<double(double)>& g, std::vector<double> breaks,
                                int panels_per_piece = 2000) {
  double acc = 0.0;
  for (std::size_t p = 0; p + 1 < breaks.size(); ++p) acc += simpson(g, breaks[p], breaks[p + 1], panels_per_piece);
  return acc;
}

// Integral over [-1, 1] of |T_n(x)|, integrated in theta between the zeros.
inline double integral_abs_t(int n) {
  if (n == 0) return 2.0;
  std::vector<double> breaks{0.0};
  for (int z = 0; z < n; ++z) breaks.push_back((2.0 * z + 1.0) * pi / (2.0 * n));
  breaks.push_back(pi);
  return piecewise_simpson([n](double t) { return std::abs(std::cos(n * t)) * std::sin(t); }, breaks);
}

// Raw univariate coefficient (2/pi) int_0^pi |cos t| cos(i t) dt of |x|.
inline double abs_x_coeff(int i) {
  if (i % 2) return 0.0;
  const int m = i / 2;
  return (4.0 / pi) * ((m % 2) ? 1.0 : -1.0) / (4.0 * m * m - 1.0);
}

// (2/pi) int_0^pi g(cos t) cos(i t) dt with breakpoints.
inline double univariate_coeff(const std::function<double(double)>& g, int i, std::vector<double> breaks_theta) {
  return (2.0 / pi) * piecewise_simpson([&](double t) { return g(std::cos(t)) * std::cos(i * t); }, breaks_theta);
}

// Direct double-cosine evaluation with primed weights.
inline double naive_partial_sum(const std::vector<std::vector<double>>& c, double x, double y) {
  const double tx = std::acos(x);
  const double ty = std::acos(y);
  double acc = 0.0;
  for (std::size_t i = 0; i < c.size(); ++i) {
    for (std::size_t j = 0; j < c[i].size(); ++j) {
      const double w = (i == 0 ? 0.5 : 1.0) * (j == 0 ? 0.5 : 1.0);
      acc += w * c[i][j] * std::cos(static_cast<double>(i) * tx) * std::cos(static_cast<double>(j) * ty);
    }
  }
  return acc;
}

// 1 / prod_{m=-p}^{p+alpha} (eta + 2m + beta), written out term by term.
inline double gamma_direct(int alpha, int beta, int p, double eta) {
  double prod = 1.0;
  for (int m = -p; m <= p + alpha; ++m) prod *= eta + 2.0 * m + beta;
  return 1.0 / prod;
}

inline double axis_factor_direct(int order, double idx) {
  return order % 2 == 0 ? gamma_direct(0, 0, order / 2, idx) : gamma_direct(1, -1, order / 2, idx);
}

}  // namespace oracle
