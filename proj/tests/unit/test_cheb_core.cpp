#include <doctest.h>

#include <cmath>
#include <random>

#include "../support/oracles.hpp"
#include "cheb2d/cheb_core.hpp"
#include "cheb2d/errors.hpp"
#include "cheb2d/parallel.hpp"

using namespace cheb2d;

namespace {

TargetFunction tensor_t(int p, int q) {
  return [p, q](double x, double y) { return oracle::cheb_t(p, x) * oracle::cheb_t(q, y); };
}

}  // namespace

TEST_CASE("chebyshev nodes are the roots of T_n in decreasing order") {
  const auto nodes = chebyshev_nodes(5);
  REQUIRE(nodes.size() == 5);
  for (std::size_t l = 0; l < nodes.size(); ++l) {
    CHECK(nodes[l] == doctest::Approx(std::cos((2.0 * l + 1.0) * oracle::pi / 10.0)).epsilon(1e-15));
    CHECK(std::abs(oracle::cheb_t(5, nodes[l])) < 1e-14);
  }
  CHECK(nodes[2] == 0.0);
  CHECK_THROWS_AS(chebyshev_nodes(0), ArgumentError);
}

TEST_CASE("eval_T matches cos(n acos x)") {
  for (int n = 0; n <= 40; ++n) {
    for (double x : {-1.0, -0.73, 0.0, 0.2, 0.999, 1.0}) {
      CHECK(eval_T(n, x) == doctest::Approx(oracle::cheb_t(n, x)).epsilon(1e-12));
    }
  }
}

TEST_CASE("quadrature reproduces the tensor Kronecker pattern") {
  const auto grid = ChebGrid::square(16);
  for (int p = 0; p <= 8; ++p) {
    for (int q = 0; q <= 8; ++q) {
      const auto c = compute_coeffs_quadrature(tensor_t(p, q), grid, 8, 8);
      for (int i = 0; i <= 8; ++i) {
        for (int j = 0; j <= 8; ++j) {
          double expected = 0.0;
          if (i == p && j == q) expected = (p == 0 ? 2.0 : 1.0) * (q == 0 ? 2.0 : 1.0);
          CHECK(std::abs(c(i, j) - expected) <= 1e-12);
        }
      }
    }
  }
}

TEST_CASE("constant function has c00 = 4 and evaluates to 1") {
  for (int n : {4, 8, 16, 32}) {
    const auto c = compute_coeffs_quadrature([](double, double) { return 1.0; }, ChebGrid::square(n), n - 1, n - 1);
    CHECK(std::abs(c(0, 0) - 4.0) <= 1e-13);
    CHECK(std::abs(eval_partial_sum(c, 0.3, -0.9) - 1.0) <= 1e-13);
  }
}

TEST_CASE("T_{2n}(x) aliases to c~00 = -4") {
  const auto c = compute_coeffs_quadrature(tensor_t(16, 0), ChebGrid::square(8), 7, 7);
  CHECK(std::abs(c(0, 0) + 4.0) <= 1e-12);
}

TEST_CASE("quadrature preconditions") {
  const TargetFunction one = [](double, double) { return 1.0; };
  CHECK_THROWS_AS(compute_coeffs_quadrature(one, ChebGrid::square(8), 8, 2), ArgumentError);
  CHECK_THROWS_AS(compute_coeffs_quadrature(one, ChebGrid::square(8), 2, -1), ArgumentError);
  const TargetFunction bad = [](double x, double) { return x > 0.5 ? std::nan("") : 1.0; };
  CHECK_THROWS_AS(compute_coeffs_quadrature(bad, ChebGrid::square(8), 2, 2), EvaluationError);
}

TEST_CASE("degree zero is legal") {
  const auto c = compute_coeffs_quadrature([](double x, double y) { return 2.0 + x * y; }, ChebGrid::square(4), 0, 0);
  CHECK(c.d_x() == 0);
  CHECK(eval_partial_sum(c, 0.4, 0.1) == doctest::Approx(2.0).epsilon(1e-13));
}

TEST_CASE("oracle matches the classical |x| expansion") {
  // Kinks limit the oracle to O(1/n^2) accuracy, hence the large oversample.
  const auto c = exact_coeffs_oracle([](double x, double y) { return std::abs(x) * std::abs(y); }, 12, 12, 64);
  for (int i = 0; i <= 12; ++i) {
    for (int j = 0; j <= 12; ++j) {
      CHECK(std::abs(c(i, j) - oracle::abs_x_coeff(i) * oracle::abs_x_coeff(j)) <= 1e-5);
    }
  }
  CHECK(c(2, 2) == doctest::Approx(16.0 / (9.0 * oracle::pi * oracle::pi)).epsilon(1e-6));
}

TEST_CASE("oracle is stable under oversampling on smooth functions") {
  const TargetFunction f = [](double x, double y) { return std::exp(x + y) + std::sin(2 * x * y); };
  const auto a = exact_coeffs_oracle(f, 20, 20, 4);
  const auto b = exact_coeffs_oracle(f, 20, 20, 8);
  for (int i = 0; i <= 20; ++i)
    for (int j = 0; j <= 20; ++j) CHECK(std::abs(a(i, j) - b(i, j)) <= 1e-10);
  CHECK(oracle_node_count(20, 10, 4) == 4 * 21 + 64);
  CHECK(std::get<OracleProvenance>(a.provenance()).oversample == 4);
}

TEST_CASE("Clenshaw evaluation agrees with direct cosine sums") {
  std::mt19937 rng(7);
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  const int d = 64;
  CoeffMatrix c(d, d - 9, QuadratureProvenance{d + 1, d + 1});
  std::vector<std::vector<double>> raw(d + 1, std::vector<double>(d - 8));
  for (int i = 0; i <= d; ++i)
    for (int j = 0; j <= d - 9; ++j) raw[i][j] = c(i, j) = u(rng) / (1.0 + i + j);
  for (int trial = 0; trial < 100; ++trial) {
    const double x = u(rng);
    const double y = u(rng);
    CHECK(std::abs(eval_partial_sum(c, x, y) - oracle::naive_partial_sum(raw, x, y)) <= 1e-11);
  }
}

TEST_CASE("partial sum examples") {
  CoeffMatrix c(3, 3, QuadratureProvenance{4, 4});
  c(2, 3) = 1.0;
  CHECK(eval_partial_sum(c, 0.5, 0.5) == doctest::Approx(0.5).epsilon(1e-14));
  const auto xy = compute_coeffs_quadrature([](double x, double y) { return x * y; }, ChebGrid::square(4), 1, 1);
  CHECK(std::abs(eval_partial_sum(xy, 0.3, -0.7) + 0.21) <= 1e-12);
  CHECK(std::abs(xy(1, 1) - 1.0) <= 1e-14);
}

TEST_CASE("grid evaluation matches pointwise evaluation") {
  const auto c = exact_coeffs_oracle([](double x, double y) { return std::cos(3 * x - y); }, 10, 7, 4);
  const std::vector<double> xs{-0.9, 0.0, 0.35};
  const std::vector<double> ys{-0.2, 0.8};
  const auto grid = eval_partial_sum_grid(c, xs, ys);
  for (std::size_t a = 0; a < xs.size(); ++a)
    for (std::size_t b = 0; b < ys.size(); ++b)
      CHECK(grid[a * ys.size() + b] == doctest::Approx(eval_partial_sum(c, xs[a], ys[b])).epsilon(1e-14));
}

TEST_CASE("symmetric targets give symmetric coefficients") {
  const auto c = compute_coeffs_quadrature(
      [](double x, double y) { return std::abs(x - y) + x * x * y * y; }, ChebGrid::square(24), 20, 20);
  for (int i = 0; i <= 20; ++i)
    for (int j = 0; j <= 20; ++j) CHECK(std::abs(c(i, j) - c(j, i)) <= 1e-12);
}

TEST_CASE("Gauss-Legendre integrates polynomials exactly") {
  const auto rule = gauss_legendre(16);
  for (int p = 0; p <= 31; ++p) {
    double acc = 0.0;
    for (std::size_t a = 0; a < rule.nodes.size(); ++a) acc += rule.weights[a] * std::pow(rule.nodes[a], p);
    const double exact = p % 2 ? 0.0 : 2.0 / (p + 1);
    CHECK(std::abs(acc - exact) <= 1e-14);
  }
}

TEST_CASE("l1 errors") {
  const TargetFunction one = [](double, double) { return 1.0; };
  const auto c0 = compute_coeffs_quadrature(one, ChebGrid::square(1), 0, 0);
  CHECK(l1_error(one, c0, 16) <= 1e-12);

  const auto f55 = tensor_t(5, 5);
  const auto c44 = compute_coeffs_quadrature(f55, ChebGrid::square(5), 4, 4);
  const double abs_t5 = oracle::integral_abs_t(5);
  // |T_5| has kinks, so Gauss-Legendre converges slowly; 512 points per axis.
  CHECK(l1_error(f55, c44, 512) == doctest::Approx(abs_t5 * abs_t5).epsilon(1e-4));

  const TargetFunction xy = [](double x, double y) { return x * y; };
  CHECK(l1_error(xy, compute_coeffs_quadrature(xy, ChebGrid::square(4), 1, 1), 16) <= 1e-12);
  CHECK_THROWS_AS(l1_norm(one, 8), ArgumentError);
}

TEST_CASE("derivative coefficients") {
  const TargetFunction one = [](double, double) { return 1.0; };
  CHECK(derivative_coeff(one, 3, 2, 0, 0, 8) == doctest::Approx(4.0).epsilon(1e-14));
  const TargetFunction fxy = [](double x, double y) { return 4.0 * x * y; };
  CHECK(derivative_coeff(fxy, 1, 1, 1, 1, 8) == doctest::Approx(4.0).epsilon(1e-13));
  CHECK_THROWS_AS(derivative_coeff(one, 0, 0, 8, 0, 8), ArgumentError);
}

TEST_CASE("recurrences between derivative coefficients hold for exp(x+y)") {
  const TargetFunction e = [](double x, double y) { return std::exp(x + y); };
  const int n = 32;
  for (int r = 0; r <= 1; ++r) {
    for (int i = 1; i <= 6; ++i) {
      for (int j = 0; j <= 6; ++j) {
        const double lhs = derivative_coeff(e, r, 0, i, j, n);
        const double rhs =
            (derivative_coeff(e, r + 1, 0, i - 1, j, n) - derivative_coeff(e, r + 1, 0, i + 1, j, n)) / (2.0 * i);
        CHECK(std::abs(lhs - rhs) <= 1e-8);
        const double lhs_y = derivative_coeff(e, 0, r, j, i, n);
        const double rhs_y =
            (derivative_coeff(e, 0, r + 1, j, i - 1, n) - derivative_coeff(e, 0, r + 1, j, i + 1, n)) / (2.0 * i);
        CHECK(std::abs(lhs_y - rhs_y) <= 1e-8);
      }
    }
  }
}

TEST_CASE("serialization") {
  CoeffMatrix c(1, 0, QuadratureProvenance{2, 1});
  c(0, 0) = 4.0;
  c(1, 0) = 0.1;
  CHECK(to_csv(c) == "i,j,c\n0,0,4\n1,0,0.10000000000000001\n");
  const auto j = to_json(c);
  CHECK(j.dump() ==
        R"({"d_x":1,"d_y":0,"provenance":{"kind":"quadrature","n_x":2,"n_y":1},"entries":[4.0,0.1]})");
  CHECK_THROWS_AS(c.at(2, 0), ArgumentError);
  CHECK(c.truncated(0, 0).entries().size() == 1);
}

TEST_CASE("results do not depend on the thread count") {
  const TargetFunction f = [](double x, double y) { return std::abs(x - 0.3) * std::exp(y); };
  set_thread_count(1);
  const auto a = exact_coeffs_oracle(f, 24, 24, 4);
  const double la = l1_error(f, a, 64);
  set_thread_count(4);
  const auto b = exact_coeffs_oracle(f, 24, 24, 4);
  const double lb = l1_error(f, b, 64);
  set_thread_count(1);
  CHECK(std::equal(a.entries().begin(), a.entries().end(), b.entries().begin()));
  CHECK(la == lb);
}
