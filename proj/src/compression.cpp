#include "cheb2d/compression.hpp"

#include <cmath>
#include <sstream>

#include "cheb2d/errors.hpp"
#include "cheb2d/parallel.hpp"

namespace cheb2d {

namespace {

void require_epsilon(double epsilon) {
  if (!(epsilon > 0.0)) throw ArgumentError("threshold epsilon must be positive, got " + format_real(epsilon));
}

void require_origin(const std::shared_ptr<const CoeffMatrix>& c) {
  if (!c) throw ArgumentError("compression needs a source coefficient matrix");
}

// table[a * (degree+1) + i] = T_i(nodes[a]) by the three-term recurrence.
std::vector<double> chebyshev_table(std::span<const double> nodes, int degree) {
  const auto width = static_cast<std::size_t>(degree + 1);
  std::vector<double> table(nodes.size() * width);
  for (std::size_t a = 0; a < nodes.size(); ++a) {
    double* row = &table[a * width];
    row[0] = 1.0;
    if (degree >= 1) row[1] = nodes[a];
    for (std::size_t i = 2; i < width; ++i) row[i] = 2.0 * nodes[a] * row[i - 1] - row[i - 2];
  }
  return table;
}

}  // namespace

std::string to_string(CompressionStrategy strategy) {
  return strategy == CompressionStrategy::bound ? "bound" : "magnitude";
}

SparseCoeffs threshold_by_bound(std::shared_ptr<const CoeffMatrix> c, SmoothnessClass cls,
                                const VariationBundle& bundle, double epsilon) {
  require_origin(c);
  require_epsilon(epsilon);
  bundle.validate();
  SparseCoeffs out;
  out.strategy = CompressionStrategy::bound;
  out.epsilon = epsilon;
  double certified = 0.0;
  for (int i = 0; i <= c->d_x(); ++i) {
    for (int j = 0; j <= c->d_y(); ++j) {
      const IndexBound b = best_bound(cls, bundle, i, j);
      if (b.available() && b.value < epsilon) {
        out.dropped.push_back({i, j, (*c)(i, j)});
        certified += b.value;
      } else {
        out.kept.push_back({i, j, (*c)(i, j)});
      }
    }
  }
  out.dropped_l1_budget = 4.0 * certified;
  out.origin = std::move(c);
  return out;
}

SparseCoeffs threshold_by_magnitude(std::shared_ptr<const CoeffMatrix> c, double epsilon) {
  require_origin(c);
  require_epsilon(epsilon);
  SparseCoeffs out;
  out.strategy = CompressionStrategy::magnitude;
  out.epsilon = epsilon;
  double certified = 0.0;
  for (int i = 0; i <= c->d_x(); ++i) {
    for (int j = 0; j <= c->d_y(); ++j) {
      const double v = (*c)(i, j);
      if (std::abs(v) < epsilon) {
        out.dropped.push_back({i, j, v});
        certified += std::abs(v);
      } else {
        out.kept.push_back({i, j, v});
      }
    }
  }
  out.dropped_l1_budget = 4.0 * certified;
  out.origin = std::move(c);
  return out;
}

double eval_sparse(const SparseCoeffs& s, double x, double y) {
  double acc = 0.0;
  for (const auto& e : s.kept) {
    acc += primed_weight(e.i) * primed_weight(e.j) * e.value * eval_T(e.i, x) * eval_T(e.j, y);
  }
  return acc;
}

bool CompressionReport::sound() const noexcept { return measured_l1_vs_dense <= budget * (1.0 + 1e-6); }

CompressionReport compression_report(const SparseCoeffs& s, const TargetFunction& f, int m) {
  require_origin(s.origin);
  if (m < 16) throw ArgumentError("compression_report: m must be >= 16");
  const GaussLegendreRule rule = gauss_legendre(m);
  const auto tx = chebyshev_table(rule.nodes, s.origin->d_x());
  const auto ty = chebyshev_table(rule.nodes, s.origin->d_y());
  const auto wx = static_cast<std::size_t>(s.origin->d_x() + 1);
  const auto wy = static_cast<std::size_t>(s.origin->d_y() + 1);
  const auto mm = static_cast<std::size_t>(m);

  auto sum_entries = [&](const std::vector<SparseEntry>& entries, std::size_t a, std::size_t b) {
    double acc = 0.0;
    for (const auto& e : entries) {
      acc += primed_weight(e.i) * primed_weight(e.j) * e.value * tx[a * wx + static_cast<std::size_t>(e.i)] *
             ty[b * wy + static_cast<std::size_t>(e.j)];
    }
    return acc;
  };

  std::vector<double> dense_rows(mm);
  std::vector<double> f_rows(mm);
  parallel_for(mm, [&](std::size_t a) {
    double vs_dense = 0.0;
    double vs_f = 0.0;
    for (std::size_t b = 0; b < mm; ++b) {
      const double x = rule.nodes[a];
      const double y = rule.nodes[b];
      const double fv = f(x, y);
      if (!std::isfinite(fv)) throw EvaluationError("non-finite function value", x, y);
      vs_dense += rule.weights[b] * std::abs(sum_entries(s.dropped, a, b));
      vs_f += rule.weights[b] * std::abs(fv - sum_entries(s.kept, a, b));
    }
    dense_rows[a] = rule.weights[a] * vs_dense;
    f_rows[a] = rule.weights[a] * vs_f;
  });

  CompressionReport r;
  r.kept_count = s.kept.size();
  r.total_count = s.total_count();
  r.budget = s.dropped_l1_budget;
  for (std::size_t a = 0; a < mm; ++a) {
    r.measured_l1_vs_dense += dense_rows[a];
    r.measured_l1_vs_f += f_rows[a];
  }
  return r;
}

nlohmann::ordered_json to_json(const CompressionReport& r) {
  return {{"kept_count", r.kept_count},
          {"total_count", r.total_count},
          {"budget", r.budget},
          {"measured_l1_vs_dense", r.measured_l1_vs_dense},
          {"measured_l1_vs_f", r.measured_l1_vs_f},
          {"sound", r.sound()}};
}

nlohmann::ordered_json sidecar_json(const SparseCoeffs& s, const CompressionReport& r) {
  nlohmann::ordered_json j;
  j["strategy"] = to_string(s.strategy);
  j["epsilon"] = s.epsilon;
  j["d_x"] = s.origin ? s.origin->d_x() : 0;
  j["d_y"] = s.origin ? s.origin->d_y() : 0;
  if (s.origin) j["provenance"] = to_json(s.origin->provenance());
  j["dropped_l1_budget"] = s.dropped_l1_budget;
  j["report"] = to_json(r);
  return j;
}

std::string kept_csv(const SparseCoeffs& s) {
  std::ostringstream out;
  out << "i,j,c\n";
  for (const auto& e : s.kept) out << e.i << ',' << e.j << ',' << format_real(e.value) << '\n';
  return out.str();
}

}  // namespace cheb2d
