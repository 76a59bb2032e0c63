#include <doctest.h>

#include <filesystem>
#include <fstream>
#include <sstream>

#include <json.hpp>

#include "../support/oracles.hpp"
#include "cheb2d/cli.hpp"

using namespace cheb2d;

namespace {

struct Run {
  int code;
  std::string out;
  std::string err;
};

Run run(std::vector<std::string> args) {
  std::ostringstream out;
  std::ostringstream err;
  const int code = run_cli(args, out, err);
  return {code, out.str(), err.str()};
}

nlohmann::json run_json(std::vector<std::string> args, int expected_code = 0) {
  const auto r = run(std::move(args));
  REQUIRE_MESSAGE(r.code == expected_code, r.err);
  return nlohmann::json::parse(r.out);
}

std::string slurp(const std::filesystem::path& p) {
  std::ifstream in(p, std::ios::binary);
  return {std::istreambuf_iterator<char>(in), {}};
}

std::filesystem::path scratch_dir() {
  auto dir = std::filesystem::temp_directory_path() / "cheb2d_cli_test";
  std::filesystem::create_directories(dir);
  return dir;
}

}  // namespace

TEST_CASE("approx writes csv and json") {
  const auto stem = scratch_dir() / "abs";
  const auto r = run({"approx", "--fn", "abs_xy", "--dx", "16", "--dy", "16", "--nx", "32", "--ny", "32", "--out",
                      stem.string() + ".csv", "--quiet"});
  REQUIRE(r.code == 0);
  CHECK(r.out.empty());
  const auto csv = slurp(stem.string() + ".csv");
  CHECK(std::count(csv.begin(), csv.end(), '\n') == 1 + 17 * 17);
  const auto j = nlohmann::json::parse(slurp(stem.string() + ".json"));
  CHECK(j["schema"] == 1);
  CHECK(j["coefficients"]["d_x"] == 16);
  CHECK(j["coefficients"]["provenance"]["n_x"] == 32);
}

TEST_CASE("approx c00 of |x||y| approaches 16/pi^2") {
  const auto j = run_json({"approx", "--fn", "abs_xy", "--dx", "0", "--dy", "0", "--nx", "512", "--ny", "512"});
  CHECK(j["coefficients"]["entries"][0].get<double>() ==
        doctest::Approx(16.0 / (oracle::pi * oracle::pi)).epsilon(1e-5));
}

TEST_CASE("approx of const_one") {
  const auto j = run_json({"approx", "--fn", "const_one", "--dx", "3", "--dy", "3"});
  const auto& e = j["coefficients"]["entries"];
  CHECK(e[0].get<double>() == doctest::Approx(4.0).epsilon(1e-15));
  for (std::size_t k = 1; k < e.size(); ++k) CHECK(std::abs(e[k].get<double>()) <= 1e-14);
}

TEST_CASE("expression and corpus inputs agree") {
  const auto a = run_json({"approx", "--fn", "abs_xy", "--dx", "16", "--dy", "16", "--nx", "32", "--ny", "32"});
  const auto b =
      run_json({"approx", "--expr", "abs(x)*abs(y)", "--dx", "16", "--dy", "16", "--nx", "32", "--ny", "32"});
  const auto& ea = a["coefficients"]["entries"];
  const auto& eb = b["coefficients"]["entries"];
  REQUIRE(ea.size() == eb.size());
  for (std::size_t k = 0; k < ea.size(); ++k) CHECK(std::abs(ea[k].get<double>() - eb[k].get<double>()) <= 1e-12);
}

TEST_CASE("decay audit exit codes") {
  const auto ok = run_json({"decay-audit", "--fn", "abs_xy", "--k", "0", "--l", "0", "--imax", "64", "--jmax", "64"});
  CHECK(ok["certified"] == true);
  CHECK(ok["report"]["max_ratio"].get<double>() < 1.0);
  CHECK(ok["variations"]["v_kl"].get<double>() == doctest::Approx(oracle::pi * oracle::pi));
  CHECK(run({"decay-audit", "--fn", "abs_cubed", "--k", "2", "--l", "2", "--imax", "64", "--jmax", "64"}).code == 0);
  const auto bad = run({"decay-audit", "--fn", "abs_xy", "--k", "2", "--l", "2"});
  CHECK(bad.code == exit_nonconvergent);
  CHECK(bad.err.find("did not converge") != std::string::npos);
  // An understated variation must be caught.
  CHECK(run({"decay-audit", "--fn", "abs_xy", "--k", "0", "--l", "0", "--vkl", "0.1", "--vk", "0.1", "--vl", "0.1",
             "--quiet"})
            .code == exit_not_certified);
}

TEST_CASE("decay audit with quadrature variations") {
  const auto j = run_json({"decay-audit", "--fn", "runge", "--k", "0", "--l", "0", "--imax", "32", "--jmax", "32"});
  CHECK(j["variations"]["source"] == "quadrature:analytic");
  CHECK(j["certified"] == true);
  const auto e = run_json({"decay-audit", "--expr", "x*y + exp(x)", "--k", "1", "--l", "1", "--imax", "24", "--jmax",
                           "24", "--variations", "quadrature"});
  CHECK(e["variations"]["source"].get<std::string>().rfind("quadrature:finite_difference", 0) == 0);
  CHECK(run({"decay-audit", "--expr", "x*y", "--k", "2", "--l", "2"}).code == exit_argument_error);
}

TEST_CASE("alias check") {
  const auto poly =
      run_json({"alias-check", "--fn", "tensor_cheb", "--nx", "8", "--ny", "8", "--dx", "4", "--dy", "4", "--kmax", "2"});
  CHECK(poly["max_residual"].get<double>() <= 1e-10);
  const auto kink =
      run_json({"alias-check", "--fn", "abs_xy", "--nx", "16", "--ny", "16", "--dx", "7", "--dy", "7", "--kmax", "4"});
  CHECK(kink["max_residual"].get<double>() <= kink["predicted_tail_bound"].get<double>());
  CHECK(run({"alias-check", "--fn", "abs_xy", "--nx", "8", "--ny", "8", "--dx", "8", "--dy", "4"}).code ==
        exit_argument_error);
}

TEST_CASE("error report") {
  const auto j = run_json({"error-report", "--fn", "abs_cubed", "--k", "2", "--l", "2", "--dmin", "4", "--dmax", "32",
                           "--step", "4"});
  CHECK(j["certified"] == true);
  CHECK(j["rows"].size() == 8);
  CHECK(j["err_exact_loglog_slope"].get<double>() <= -1.7);
  CHECK(run({"error-report", "--fn", "abs_cubed", "--k", "2", "--l", "2", "--dmin", "1", "--dmax", "8"}).code ==
        exit_argument_error);
  CHECK(run({"error-report", "--fn", "abs_cubed", "--k", "0", "--l", "2", "--dmin", "4", "--dmax", "8"}).code ==
        exit_argument_error);
  const auto csv = run({"error-report", "--fn", "abs_cubed", "--k", "2", "--l", "2", "--dmin", "4", "--dmax", "8",
                        "--n-rule", "3d+1", "--format", "csv"});
  CHECK(csv.code == 0);
  CHECK(csv.out.rfind("d,err_exact,bound_c1,err_quad,bound_c2\n4,", 0) == 0);
}

TEST_CASE("node rules") {
  CHECK(apply_node_rule("2d+2", 5) == 12);
  CHECK(apply_node_rule("3*d - 1", 5) == 14);
  CHECK(apply_node_rule("d", 5) == 5);
  CHECK(apply_node_rule("64", 5) == 64);
  CHECK(run({"error-report", "--fn", "abs_cubed", "--k", "2", "--l", "2", "--dmin", "4", "--dmax", "8", "--n-rule",
             "d^2"})
            .code == exit_argument_error);
  CHECK(run({"error-report", "--fn", "abs_cubed", "--k", "2", "--l", "2", "--dmin", "4", "--dmax", "8", "--n-rule",
             "d"})
            .code == exit_argument_error);
}

TEST_CASE("compress") {
  const auto j = run_json({"compress", "--fn", "abs_xy", "--k", "0", "--l", "0", "--eps", "1e-3", "--dx", "32", "--dy",
                           "32"});
  CHECK(j["report"]["sound"] == true);
  CHECK(j["report"]["kept_count"] == 33 * 33);
  const auto huge = run_json({"compress", "--fn", "abs_xy", "--eps", "1e9", "--dx", "8", "--dy", "8"});
  CHECK(huge["report"]["kept_count"] == 1);
  const auto mag = run_json({"compress", "--fn", "abs_xy", "--eps", "1e-3", "--strategy", "magnitude"});
  CHECK(mag["strategy"] == "magnitude");
  CHECK(run({"compress", "--fn", "abs_xy", "--eps", "0"}).code == exit_argument_error);
}

TEST_CASE("corpus list and variation") {
  const auto list = run_json({"corpus-list"});
  CHECK(list["entries"].size() == 8);
  const auto v = run_json({"variation", "--fn", "abs_cubed", "--k", "2", "--l", "2"});
  CHECK(v["v_kl"]["value"].get<double>() == doctest::Approx(36.0 * oracle::pi * oracle::pi).epsilon(5e-3));
  CHECK(run({"variation", "--fn", "abs_xy", "--k", "2", "--l", "2", "--quiet"}).code == exit_nonconvergent);
}

TEST_CASE("argument and evaluation errors") {
  CHECK(run({}).code == exit_argument_error);
  CHECK(run({"bogus"}).code == exit_argument_error);
  CHECK(run({"approx"}).code == exit_argument_error);
  CHECK(run({"approx", "--fn", "missing"}).code == exit_argument_error);
  CHECK(run({"approx", "--fn", "abs_xy", "--expr", "x"}).code == exit_argument_error);
  CHECK(run({"approx", "--expr", "x**2"}).code == exit_argument_error);
  CHECK(run({"approx", "--fn", "abs_xy", "--dx", "8", "--nx", "8"}).code == exit_argument_error);
  CHECK(run({"approx", "--fn", "abs_xy", "--format", "xml"}).code == exit_argument_error);
  const auto eval = run({"approx", "--expr", "1/x", "--dx", "2", "--dy", "2", "--nx", "5", "--ny", "5"});
  CHECK(eval.code == exit_evaluation_error);
  CHECK(eval.err.find("(0, ") != std::string::npos);
  CHECK(run({"--help"}).code == 0);
}

TEST_CASE("outputs are byte-identical across runs and thread counts") {
  const auto dir = scratch_dir();
  const std::vector<std::string> base{"decay-audit", "--fn", "shifted_kink", "--k", "0", "--l", "0", "--imax", "40",
                                      "--jmax", "40", "--quiet", "--out"};
  auto a = base;
  a.push_back((dir / "a").string());
  auto b = base;
  b.push_back((dir / "b").string());
  b.insert(b.end(), {"--threads", "3"});
  REQUIRE(run(a).code == 0);
  REQUIRE(run(b).code == 0);
  CHECK(slurp(dir / "a.csv") == slurp(dir / "b.csv"));
  CHECK(slurp(dir / "a.json") == slurp(dir / "b.json"));
}
