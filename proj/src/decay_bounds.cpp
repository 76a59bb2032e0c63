#include "cheb2d/decay_bounds.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <sstream>

#include "cheb2d/errors.hpp"

namespace cheb2d {

namespace {

constexpr double kPiSquared = std::numbers::pi * std::numbers::pi;

void require_alpha(int alpha) {
  if (alpha != 0 && alpha != 1) throw ArgumentError("alpha must be 0 or 1");
}

// 1 / prod_{m=lo}^{hi} (base + 2m), every factor required positive.
double reciprocal_stride2_product(double base, int lo, int hi, const char* who) {
  double prod = 1.0;
  for (int m = lo; m <= hi; ++m) {
    const double factor = base + 2.0 * m;
    if (!(factor > 0.0)) {
      throw ArgumentError(std::string(who) + ": factor " + format_real(factor) +
                          " is not positive (argument outside the bound's validity range)");
    }
    prod *= factor;
  }
  return 1.0 / prod;
}

// alpha of the Pi product paired with a smoothness order (1 for even, 0 for odd).
int pi_alpha_for(int order) { return order % 2 == 0 ? 1 : 0; }

}  // namespace

std::string to_string(Axis axis) { return axis == Axis::x ? "x" : "y"; }

std::string to_string(BoundKind kind) {
  switch (kind) {
    case BoundKind::mixed:
      return "mixed";
    case BoundKind::directional_x:
      return "directional_x";
    case BoundKind::directional_y:
      return "directional_y";
  }
  return "unknown";
}

double VariationBundle::v_star() const noexcept { return std::max({v_kl, v_k, v_l}); }

void VariationBundle::validate() const {
  for (double v : {v_kl, v_k, v_l}) {
    if (!std::isfinite(v) || v < 0.0) {
      throw ArgumentError("variation values must be finite and nonnegative, got " + format_real(v));
    }
  }
}

double gamma_product(int alpha, int beta, int p, double eta) {
  if (p < 0) throw ArgumentError("gamma_product: p must be nonnegative");
  if (alpha < 0) throw ArgumentError("gamma_product: alpha must be nonnegative");
  return reciprocal_stride2_product(eta + beta, -p, p + alpha, "gamma_product");
}

double axis_decay_factor(int order, double idx) {
  if (order < 0) throw ArgumentError("smoothness order must be nonnegative");
  const int half = order / 2;
  return order % 2 == 0 ? gamma_product(0, 0, half, idx) : gamma_product(1, -1, half, idx);
}

double coeff_bound(SmoothnessClass cls, double v_kl, int i, int j) {
  if (cls.k < 0 || cls.l < 0) throw ArgumentError("smoothness orders must be nonnegative");
  if (i <= cls.k) {
    throw ArgumentError("coeff_bound requires i >= k+1 (i = " + std::to_string(i) +
                        ", k = " + std::to_string(cls.k) + ")");
  }
  if (j <= cls.l) {
    throw ArgumentError("coeff_bound requires j >= l+1 (j = " + std::to_string(j) +
                        ", l = " + std::to_string(cls.l) + ")");
  }
  return 4.0 * v_kl / kPiSquared * axis_decay_factor(cls.k, i) * axis_decay_factor(cls.l, j);
}

double coeff_bound_directional(int order, double v, int idx, Axis axis) {
  if (order < 0) throw ArgumentError("smoothness order must be nonnegative");
  if (idx <= order) {
    throw ArgumentError("directional bound along " + to_string(axis) + " requires index >= order+1 (index = " +
                        std::to_string(idx) + ", order = " + std::to_string(order) + ")");
  }
  return 4.0 * v / kPiSquared * axis_decay_factor(order, idx);
}

double pi_product(int alpha, int p, double nstar) {
  require_alpha(alpha);
  if (p < 0) throw ArgumentError("pi_product: p must be nonnegative");
  if (p == 0 && alpha == 1) throw ArgumentError("pi_product: (p, alpha) = (0, 1) is an empty product");
  return reciprocal_stride2_product(nstar + alpha, -p, p - alpha, "pi_product") +
         reciprocal_stride2_product(nstar + alpha + 1, -p, p - alpha, "pi_product");
}

double pi_upper(int alpha, int p, double nstar) {
  require_alpha(alpha);
  if (p < 0) throw ArgumentError("pi_upper: p must be nonnegative");
  const double base = nstar - 2.0 * p + alpha;
  if (!(base > 0.0)) throw ArgumentError("pi_upper requires n* > 2p - alpha");
  return 2.0 / std::pow(base, 2 * p - alpha + 1);
}

double axis_decay_tail(int order, int first) {
  if (order < 0) throw ArgumentError("smoothness order must be nonnegative");
  if (first <= order) throw ArgumentError("tail must start at an index >= order+1");
  if (order == 0) return std::numeric_limits<double>::infinity();
  return pi_product(pi_alpha_for(order), order / 2, first - 1) / (2.0 * order);
}

double l1_bound_exact_partial(SmoothnessClass cls, double v_kl, int d_x, int d_y) {
  if (cls.k < 1 || cls.l < 1) throw ArgumentError("exact-coefficient L1 bound requires k, l >= 1");
  if (d_x < cls.k) throw ArgumentError("exact-coefficient L1 bound requires d_x >= k");
  if (d_y < cls.l) throw ArgumentError("exact-coefficient L1 bound requires d_y >= l");
  const double prefactor = 4.0 * v_kl / (static_cast<double>(cls.k) * cls.l * kPiSquared);
  return prefactor * pi_product(pi_alpha_for(cls.k), cls.s(), d_x) *
         pi_product(pi_alpha_for(cls.l), cls.r(), d_y);
}

double coeff_bound_tail_sum(SmoothnessClass cls, double v_kl, int d_x, int d_y) {
  if (cls.k < 1 || cls.l < 1) throw ArgumentError("tail sum converges only for k, l >= 1");
  return 4.0 * v_kl / kPiSquared * axis_decay_tail(cls.k, d_x + 1) * axis_decay_tail(cls.l, d_y + 1);
}

double l1_bound_quadrature_partial(SmoothnessClass cls, const VariationBundle& bundle, int d_x,
                                   int d_y, int n_x, int n_y) {
  bundle.validate();
  const int k = cls.k;
  const int l = cls.l;
  if (k < 1 || l < 1) throw ArgumentError("quadrature L1 bound requires k, l >= 1");
  if (n_x - 1 < k) throw ArgumentError("quadrature L1 bound requires n_x - 1 >= k");
  if (n_y - 1 < l) throw ArgumentError("quadrature L1 bound requires n_y - 1 >= l");
  if (d_x < k) throw ArgumentError("quadrature L1 bound requires d_x >= k");
  if (d_y < l) throw ArgumentError("quadrature L1 bound requires d_y >= l");
  if (d_x >= n_x) throw ArgumentError("quadrature L1 bound requires d_x < n_x");
  if (d_y >= n_y) throw ArgumentError("quadrature L1 bound requires d_y < n_y");

  const double gap_x = std::pow(static_cast<double>(d_x - k + 1), k);
  const double gap_y = std::pow(static_cast<double>(d_y - l + 1), l);
  const double mixed = 4.0 / (static_cast<double>(k) * l * gap_x * gap_y);
  const double along_x = 2.0 * (d_y + 1) / (k * gap_x);
  const double along_y = 2.0 * (d_x + 1) / (l * gap_y);
  return 8.0 * bundle.v_star() / kPiSquared * (mixed + along_x + along_y);
}

IndexBound best_bound(SmoothnessClass cls, const VariationBundle& bundle, int i, int j) {
  IndexBound best;
  const bool x_ok = i >= cls.k + 1;
  const bool y_ok = j >= cls.l + 1;
  if (x_ok && y_ok) best = {coeff_bound(cls, bundle.v_kl, i, j), BoundKind::mixed};
  if (x_ok) {
    const double b = coeff_bound_directional(cls.k, bundle.v_k, i, Axis::x);
    if (b < best.value) best = {b, BoundKind::directional_x};
  }
  if (y_ok) {
    const double b = coeff_bound_directional(cls.l, bundle.v_l, j, Axis::y);
    if (b < best.value) best = {b, BoundKind::directional_y};
  }
  return best;
}

BoundReport audit_decay(const CoeffMatrix& c, SmoothnessClass cls, const VariationBundle& bundle,
                        AuditTolerance tol) {
  bundle.validate();
  BoundReport report;
  report.cls = cls;
  report.bundle = bundle;
  report.i_max = c.d_x();
  report.j_max = c.d_y();
  report.bounds.assign(static_cast<std::size_t>(c.d_x() + 1) * static_cast<std::size_t>(c.d_y() + 1),
                       std::numeric_limits<double>::infinity());
  for (int i = 0; i <= c.d_x(); ++i) {
    for (int j = 0; j <= c.d_y(); ++j) {
      const IndexBound b = best_bound(cls, bundle, i, j);
      report.bounds[static_cast<std::size_t>(i) * static_cast<std::size_t>(c.d_y() + 1) +
                    static_cast<std::size_t>(j)] = b.value;
      if (!b.available()) continue;
      const double abs_c = std::abs(c(i, j));
      if (abs_c <= tol.absolute) continue;
      const double ratio = abs_c / b.value;
      if (ratio > report.max_ratio) {
        report.max_ratio = ratio;
        report.argmax_i = i;
        report.argmax_j = j;
      }
      if (abs_c > b.value * (1.0 + tol.relative)) report.violations.push_back({i, j, abs_c, b.value, b.kind});
    }
  }
  return report;
}

namespace {

nlohmann::ordered_json finite_or_null(double v) {
  if (std::isfinite(v)) return v;
  return nullptr;
}

}  // namespace

nlohmann::ordered_json to_json(const BoundReport& report) {
  nlohmann::ordered_json j;
  j["class"] = {{"k", report.cls.k}, {"l", report.cls.l}};
  j["variations"] = {{"v_kl", report.bundle.v_kl}, {"v_k", report.bundle.v_k}, {"v_l", report.bundle.v_l}};
  j["range"] = {{"i_max", report.i_max}, {"j_max", report.j_max}};
  auto violations = nlohmann::ordered_json::array();
  for (const auto& v : report.violations) {
    violations.push_back({{"i", v.i}, {"j", v.j}, {"abs_c", v.abs_c}, {"bound", v.bound}, {"kind", to_string(v.kind)}});
  }
  j["violations"] = violations;
  j["max_ratio"] = finite_or_null(report.max_ratio);
  j["argmax"] = {report.argmax_i, report.argmax_j};
  return j;
}

std::string bound_grid_csv(const BoundReport& report, const CoeffMatrix& c) {
  std::ostringstream out;
  out << "i,j,bound,abs_c,ratio\n";
  for (int i = 0; i <= report.i_max; ++i) {
    for (int j = 0; j <= report.j_max; ++j) {
      const double bound = report.bound_at(i, j);
      if (!std::isfinite(bound)) continue;
      const double abs_c = std::abs(c(i, j));
      const double ratio = bound > 0.0 ? abs_c / bound : 0.0;
      out << i << ',' << j << ',' << format_real(bound) << ',' << format_real(abs_c) << ','
          << format_real(ratio) << '\n';
    }
  }
  return out.str();
}

}  // namespace cheb2d
