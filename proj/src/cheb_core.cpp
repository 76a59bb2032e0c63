#include "cheb2d/cheb_core.hpp"

#include <cmath>
#include <cstdio>
#include <numbers>
#include <sstream>

#include "cheb2d/errors.hpp"
#include "cheb2d/parallel.hpp"

namespace cheb2d {

namespace {

constexpr double kPi = std::numbers::pi;

// cos(i * theta_l) with theta_l = (2l-1)pi/(2n), l = 1..n. The integer
// argument is reduced modulo 4n before scaling so large i keeps full accuracy.
std::vector<double> cosine_row(int i, int n) {
  std::vector<double> row(static_cast<std::size_t>(n));
  const long long period = 4LL * n;
  for (int l = 1; l <= n; ++l) {
    const long long m = (static_cast<long long>(i) * (2LL * l - 1)) % period;
    row[static_cast<std::size_t>(l - 1)] =
        std::cos(kPi * static_cast<double>(m) / (2.0 * static_cast<double>(n)));
  }
  return row;
}

std::vector<std::vector<double>> cosine_table(int degree, int n) {
  std::vector<std::vector<double>> table(static_cast<std::size_t>(degree + 1));
  for (int i = 0; i <= degree; ++i) table[static_cast<std::size_t>(i)] = cosine_row(i, n);
  return table;
}

// Sum_{k=0}^{d} a_k T_k(x).
double clenshaw(std::span<const double> a, double x) {
  if (a.empty()) return 0.0;
  double b1 = 0.0;
  double b2 = 0.0;
  for (std::size_t k = a.size() - 1; k >= 1; --k) {
    const double b0 = a[k] + 2.0 * x * b1 - b2;
    b2 = b1;
    b1 = b0;
  }
  return a[0] + x * b1 - b2;
}

void require_in_square(double x, double y) {
  if (!(std::abs(x) <= 1.0) || !(std::abs(y) <= 1.0)) {
    throw ArgumentError("point (" + format_real(x) + ", " + format_real(y) +
                        ") lies outside [-1,1]^2");
  }
}

}  // namespace

EvaluationError::EvaluationError(const std::string& what, double x, double y)
    : std::runtime_error(what + " at (x, y) = (" + format_real(x) + ", " + format_real(y) + ")"),
      x_(x),
      y_(y) {}

std::string format_real(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

std::vector<double> chebyshev_nodes(int n) {
  if (n < 1) throw ArgumentError("chebyshev_nodes: n must be >= 1, got " + std::to_string(n));
  std::vector<double> nodes(static_cast<std::size_t>(n));
  for (int l = 1; l <= n; ++l) {
    nodes[static_cast<std::size_t>(l - 1)] =
        std::cos(static_cast<double>(2 * l - 1) * kPi / (2.0 * static_cast<double>(n)));
  }
  // n odd: the middle root is exactly zero.
  if (n % 2 == 1) nodes[static_cast<std::size_t>(n / 2)] = 0.0;
  return nodes;
}

double eval_T(int i, double x) {
  if (i < 0) throw ArgumentError("eval_T: degree must be nonnegative");
  if (!(std::abs(x) <= 1.0)) throw ArgumentError("eval_T: |x| must be <= 1, got " + format_real(x));
  return std::cos(static_cast<double>(i) * std::acos(x));
}

ChebGrid ChebGrid::make(int n_x, int n_y) {
  return ChebGrid{n_x, n_y, chebyshev_nodes(n_x), chebyshev_nodes(n_y)};
}

CoeffMatrix::CoeffMatrix(int d_x, int d_y, Provenance provenance)
    : d_x_(d_x), d_y_(d_y), provenance_(provenance) {
  if (d_x < 0 || d_y < 0) throw ArgumentError("CoeffMatrix: degrees must be nonnegative");
  entries_.assign(static_cast<std::size_t>(d_x + 1) * static_cast<std::size_t>(d_y + 1), 0.0);
}

double CoeffMatrix::at(int i, int j) const {
  if (i < 0 || j < 0 || i > d_x_ || j > d_y_) {
    throw ArgumentError("coefficient (" + std::to_string(i) + ", " + std::to_string(j) +
                        ") outside stored degree range (" + std::to_string(d_x_) + ", " +
                        std::to_string(d_y_) + ")");
  }
  return (*this)(i, j);
}

CoeffMatrix CoeffMatrix::truncated(int d_x, int d_y) const {
  if (d_x > d_x_ || d_y > d_y_) throw ArgumentError("truncated: requested degree exceeds stored degree");
  CoeffMatrix out(d_x, d_y, provenance_);
  for (int i = 0; i <= d_x; ++i)
    for (int j = 0; j <= d_y; ++j) out(i, j) = (*this)(i, j);
  return out;
}

CoeffMatrix compute_coeffs_quadrature(const TargetFunction& f, const ChebGrid& grid, int d_x,
                                      int d_y) {
  const int n_x = grid.n_x;
  const int n_y = grid.n_y;
  if (d_x < 0 || d_y < 0) throw ArgumentError("degrees must be nonnegative");
  if (d_x >= n_x) {
    throw ArgumentError("d_x = " + std::to_string(d_x) + " must be < n_x = " + std::to_string(n_x));
  }
  if (d_y >= n_y) {
    throw ArgumentError("d_y = " + std::to_string(d_y) + " must be < n_y = " + std::to_string(n_y));
  }

  const auto nx = static_cast<std::size_t>(n_x);
  const auto ny = static_cast<std::size_t>(n_y);

  std::vector<double> values(nx * ny);
  parallel_for(nx, [&](std::size_t a) {
    const double x = grid.nodes_x[a];
    for (std::size_t b = 0; b < ny; ++b) {
      const double y = grid.nodes_y[b];
      const double v = f(x, y);
      if (!std::isfinite(v)) {
        throw EvaluationError("non-finite function value at node (" + std::to_string(a + 1) +
                                  ", " + std::to_string(b + 1) + ")",
                              x, y);
      }
      values[a * ny + b] = v;
    }
  });

  const auto cos_x = cosine_table(d_x, n_x);
  const auto cos_y = cosine_table(d_y, n_y);

  // partial[a][j] = sum_b f(x_a, y_b) T_j(y_b)
  const auto dy1 = static_cast<std::size_t>(d_y + 1);
  std::vector<double> partial(nx * dy1);
  parallel_for(nx, [&](std::size_t a) {
    for (std::size_t j = 0; j < dy1; ++j) {
      double acc = 0.0;
      for (std::size_t b = 0; b < ny; ++b) acc += values[a * ny + b] * cos_y[j][b];
      partial[a * dy1 + j] = acc;
    }
  });

  CoeffMatrix out(d_x, d_y, QuadratureProvenance{n_x, n_y});
  const double scale = 4.0 / (static_cast<double>(n_x) * static_cast<double>(n_y));
  parallel_for(static_cast<std::size_t>(d_x + 1), [&](std::size_t i) {
    for (std::size_t j = 0; j < dy1; ++j) {
      double acc = 0.0;
      for (std::size_t a = 0; a < nx; ++a) acc += cos_x[i][a] * partial[a * dy1 + j];
      out(static_cast<int>(i), static_cast<int>(j)) = scale * acc;
    }
  });
  return out;
}

int oracle_node_count(int d_x, int d_y, int oversample) {
  return oversample * (std::max(d_x, d_y) + 1) + 64;
}

CoeffMatrix exact_coeffs_oracle(const TargetFunction& f, int d_x, int d_y, int oversample) {
  if (oversample < 2) throw ArgumentError("oracle oversample must be >= 2");
  if (d_x < 0 || d_y < 0) throw ArgumentError("degrees must be nonnegative");
  const int n = oracle_node_count(d_x, d_y, oversample);
  const CoeffMatrix quad = compute_coeffs_quadrature(f, ChebGrid::square(n), d_x, d_y);
  CoeffMatrix out(d_x, d_y, OracleProvenance{oversample, n});
  for (int i = 0; i <= d_x; ++i)
    for (int j = 0; j <= d_y; ++j) out(i, j) = quad(i, j);
  return out;
}

double eval_partial_sum(const CoeffMatrix& c, double x, double y) {
  require_in_square(x, y);
  const auto dx1 = static_cast<std::size_t>(c.d_x() + 1);
  const auto dy1 = static_cast<std::size_t>(c.d_y() + 1);
  std::vector<double> row(dy1);
  std::vector<double> outer(dx1);
  for (std::size_t i = 0; i < dx1; ++i) {
    for (std::size_t j = 0; j < dy1; ++j) {
      row[j] = primed_weight(static_cast<int>(j)) * c(static_cast<int>(i), static_cast<int>(j));
    }
    outer[i] = primed_weight(static_cast<int>(i)) * clenshaw(row, y);
  }
  return clenshaw(outer, x);
}

std::vector<double> eval_partial_sum_grid(const CoeffMatrix& c, std::span<const double> xs,
                                          std::span<const double> ys) {
  for (double x : xs) require_in_square(x, 0.0);
  for (double y : ys) require_in_square(0.0, y);
  const auto dx1 = static_cast<std::size_t>(c.d_x() + 1);
  const auto dy1 = static_cast<std::size_t>(c.d_y() + 1);

  // inner[b][i] = w_i Sum'_j c_{i,j} T_j(y_b)
  std::vector<double> inner(ys.size() * dx1);
  parallel_for(ys.size(), [&](std::size_t b) {
    std::vector<double> row(dy1);
    for (std::size_t i = 0; i < dx1; ++i) {
      for (std::size_t j = 0; j < dy1; ++j) {
        row[j] = primed_weight(static_cast<int>(j)) * c(static_cast<int>(i), static_cast<int>(j));
      }
      inner[b * dx1 + i] = primed_weight(static_cast<int>(i)) * clenshaw(row, ys[b]);
    }
  });

  std::vector<double> out(xs.size() * ys.size());
  parallel_for(xs.size(), [&](std::size_t a) {
    for (std::size_t b = 0; b < ys.size(); ++b) {
      out[a * ys.size() + b] =
          clenshaw(std::span<const double>(inner).subspan(b * dx1, dx1), xs[a]);
    }
  });
  return out;
}

GaussLegendreRule gauss_legendre(int m) {
  if (m < 1) throw ArgumentError("gauss_legendre: m must be >= 1");
  GaussLegendreRule rule;
  rule.nodes.assign(static_cast<std::size_t>(m), 0.0);
  rule.weights.assign(static_cast<std::size_t>(m), 0.0);
  const int half = (m + 1) / 2;
  for (int i = 1; i <= half; ++i) {
    double z = std::cos(kPi * (i - 0.25) / (m + 0.5));
    double dp = 0.0;
    for (int iter = 0; iter < 100; ++iter) {
      double p1 = 1.0;
      double p2 = 0.0;
      for (int j = 1; j <= m; ++j) {
        const double p3 = p2;
        p2 = p1;
        p1 = ((2.0 * j - 1.0) * z * p2 - (j - 1.0) * p3) / j;
      }
      dp = m * (z * p1 - p2) / (z * z - 1.0);
      const double z_prev = z;
      z = z_prev - p1 / dp;
      if (std::abs(z - z_prev) <= 1e-15) break;
    }
    const double w = 2.0 / ((1.0 - z * z) * dp * dp);
    rule.nodes[static_cast<std::size_t>(i - 1)] = -z;
    rule.nodes[static_cast<std::size_t>(m - i)] = z;
    rule.weights[static_cast<std::size_t>(i - 1)] = w;
    rule.weights[static_cast<std::size_t>(m - i)] = w;
  }
  if (m % 2 == 1) rule.nodes[static_cast<std::size_t>(m / 2)] = 0.0;
  return rule;
}

double l1_norm(const TargetFunction& g, int m) {
  if (m < 16) throw ArgumentError("l1_norm: m must be >= 16");
  const GaussLegendreRule rule = gauss_legendre(m);
  const auto mm = static_cast<std::size_t>(m);
  std::vector<double> row_sums(mm);
  parallel_for(mm, [&](std::size_t a) {
    double acc = 0.0;
    for (std::size_t b = 0; b < mm; ++b) {
      const double v = g(rule.nodes[a], rule.nodes[b]);
      if (!std::isfinite(v)) throw EvaluationError("non-finite integrand", rule.nodes[a], rule.nodes[b]);
      acc += rule.weights[b] * std::abs(v);
    }
    row_sums[a] = rule.weights[a] * acc;
  });
  double total = 0.0;
  for (double s : row_sums) total += s;
  return total;
}

double l1_error(const TargetFunction& f, const CoeffMatrix& c, int m) {
  if (m < 16) throw ArgumentError("l1_error: m must be >= 16");
  const GaussLegendreRule rule = gauss_legendre(m);
  const std::vector<double> approx = eval_partial_sum_grid(c, rule.nodes, rule.nodes);
  const auto mm = static_cast<std::size_t>(m);
  std::vector<double> row_sums(mm);
  parallel_for(mm, [&](std::size_t a) {
    double acc = 0.0;
    for (std::size_t b = 0; b < mm; ++b) {
      const double v = f(rule.nodes[a], rule.nodes[b]);
      if (!std::isfinite(v)) throw EvaluationError("non-finite function value", rule.nodes[a], rule.nodes[b]);
      acc += rule.weights[b] * std::abs(v - approx[a * mm + b]);
    }
    row_sums[a] = rule.weights[a] * acc;
  });
  double total = 0.0;
  for (double s : row_sums) total += s;
  return total;
}

double derivative_coeff(const TargetFunction& fpartial, int r, int s, int i, int j, int n) {
  if (r < 0 || s < 0) throw ArgumentError("derivative orders must be nonnegative");
  if (i < 0 || j < 0) throw ArgumentError("coefficient indices must be nonnegative");
  if (n <= std::max(i, j)) {
    throw ArgumentError("derivative_coeff: n = " + std::to_string(n) + " must exceed max(i, j) = " +
                        std::to_string(std::max(i, j)));
  }
  const auto nodes = chebyshev_nodes(n);
  const auto cos_i = cosine_row(i, n);
  const auto cos_j = cosine_row(j, n);
  double total = 0.0;
  for (std::size_t a = 0; a < nodes.size(); ++a) {
    double acc = 0.0;
    for (std::size_t b = 0; b < nodes.size(); ++b) {
      const double v = fpartial(nodes[a], nodes[b]);
      if (!std::isfinite(v)) throw EvaluationError("non-finite partial derivative value", nodes[a], nodes[b]);
      acc += v * cos_j[b];
    }
    total += cos_i[a] * acc;
  }
  return 4.0 * total / (static_cast<double>(n) * static_cast<double>(n));
}

std::string to_csv(const CoeffMatrix& c) {
  std::ostringstream out;
  out << "i,j,c\n";
  for (int i = 0; i <= c.d_x(); ++i)
    for (int j = 0; j <= c.d_y(); ++j) out << i << ',' << j << ',' << format_real(c(i, j)) << '\n';
  return out.str();
}

nlohmann::ordered_json to_json(const Provenance& p) {
  return std::visit(
      [](const auto& v) -> nlohmann::ordered_json {
        using T = std::decay_t<decltype(v)>;
        if constexpr (std::is_same_v<T, QuadratureProvenance>) {
          return {{"kind", "quadrature"}, {"n_x", v.n_x}, {"n_y", v.n_y}};
        } else {
          return {{"kind", "oracle"}, {"oversample", v.oversample}, {"n", v.n}};
        }
      },
      p);
}

nlohmann::ordered_json to_json(const CoeffMatrix& c) {
  nlohmann::ordered_json j;
  j["d_x"] = c.d_x();
  j["d_y"] = c.d_y();
  j["provenance"] = to_json(c.provenance());
  j["entries"] = std::vector<double>(c.entries().begin(), c.entries().end());
  return j;
}

}  // namespace cheb2d
