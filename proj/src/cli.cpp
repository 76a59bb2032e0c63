#include "cheb2d/cli.hpp"

#include <CLI11.hpp>

#include <chrono>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <memory>
#include <optional>
#include <regex>
#include <sstream>

#include "cheb2d/aliasing.hpp"
#include "cheb2d/cheb_core.hpp"
#include "cheb2d/compression.hpp"
#include "cheb2d/corpus.hpp"
#include "cheb2d/decay_bounds.hpp"
#include "cheb2d/errors.hpp"
#include "cheb2d/expression.hpp"
#include "cheb2d/parallel.hpp"
#include "cheb2d/variation.hpp"

namespace cheb2d {

namespace {

using Json = nlohmann::ordered_json;

constexpr int kSchemaVersion = 1;
constexpr int kAliasDegreeWarning = 512;
constexpr double kAliasResidualFloor = 1e-10;

const char* const kGrammarHelp =
    "Expression grammar for --expr (EBNF):\n"
    "  expression = term { (\"+\" | \"-\") term }\n"
    "  term       = unary { (\"*\" | \"/\") unary }\n"
    "  unary      = \"-\" unary | power\n"
    "  power      = primary [ \"^\" [\"-\"] integer ]\n"
    "  primary    = number | x | y | pi | (abs|sin|cos|exp) \"(\" expression \")\" | \"(\" expression \")\"\n";

class NonConvergence : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct GlobalOptions {
  std::string out;
  std::string format = "json";
  bool quiet = false;
  int threads = 1;
  bool timings = false;
};

struct FunctionOptions {
  std::string fn;
  std::string expr;
  double fd_h = 1e-4;
};

// A target given either by corpus name or by expression text.
struct FunctionSource {
  const CorpusEntry* entry = nullptr;
  ExprPtr ast;
  std::string id;
  TargetFunction f;
  double fd_h = 1e-4;

  MixedPartialSpec partial(int ox, int oy) const {
    if (entry) return entry->partial(ox, oy);
    if (ox + oy > 4) {
      throw ArgumentError("expression targets only support finite-difference partials up to total order 4 (requested (" +
                          std::to_string(ox) + ", " + std::to_string(oy) +
                          ")); use --fn with a built-in corpus entry for higher smoothness classes");
    }
    return finite_difference_partial(f, ox, oy, fd_h);
  }

  Json describe() const {
    if (entry) return {{"kind", "corpus"}, {"name", entry->name}, {"formula", entry->formula}};
    return {{"kind", "expression"}, {"text", id}, {"fd_h", fd_h}};
  }
};

FunctionSource resolve_function(const FunctionOptions& opt) {
  const bool has_fn = !opt.fn.empty();
  const bool has_expr = !opt.expr.empty();
  if (has_fn == has_expr) throw ArgumentError("exactly one of --fn or --expr is required");
  FunctionSource src;
  src.fd_h = opt.fd_h;
  if (has_fn) {
    src.entry = find_corpus_entry(opt.fn);
    if (!src.entry) throw ArgumentError("unknown corpus function '" + opt.fn + "' (see corpus-list)");
    src.id = opt.fn;
    src.f = src.entry->f;
  } else {
    src.ast = parse_expression(opt.expr);
    src.id = opt.expr;
    src.f = ast_to_function(src.ast);
  }
  return src;
}

struct ResolvedBundle {
  VariationBundle bundle;
  std::string source;
  std::optional<VariationBundleEstimate> estimate;
};

Json bundle_json(const ResolvedBundle& r) {
  Json j = {{"v_kl", r.bundle.v_kl}, {"v_k", r.bundle.v_k}, {"v_l", r.bundle.v_l}, {"source", r.source}};
  if (r.estimate) {
    j["converged"] = r.estimate->converged();
    j["n"] = r.estimate->mixed.n_used;
  }
  return j;
}

struct VariationOptions {
  std::string source = "auto";
  int n = 256;
  std::optional<double> v_kl;
  std::optional<double> v_k;
  std::optional<double> v_l;
};

VariationBundleEstimate quadrature_bundle(const FunctionSource& src, SmoothnessClass cls, int n) {
  return estimate_variation_bundle(src.partial(cls.k + 1, cls.l + 1), src.partial(cls.k + 1, 0),
                                   src.partial(0, cls.l + 1), n);
}

std::string nonconvergence_message(const VariationBundleEstimate& est) {
  std::ostringstream msg;
  msg << "variation quadrature did not converge (relative change under n-doubling above "
      << kVariationConvergenceTolerance * 100 << "%):";
  auto item = [&](const char* name, const VariationEstimate& v) {
    msg << ' ' << name << '=' << format_real(v.value) << "->" << format_real(v.refined)
        << (v.converged ? "" : " (diverging)");
  };
  item("V_kl", est.mixed);
  item("V_k", est.along_x);
  item("V_l", est.along_y);
  return msg.str();
}

ResolvedBundle resolve_bundle(const FunctionSource& src, SmoothnessClass cls, const VariationOptions& opt) {
  const int given = opt.v_kl.has_value() + opt.v_k.has_value() + opt.v_l.has_value();
  if (given != 0 && given != 3) throw ArgumentError("--vkl, --vk and --vl must be given together");
  if (given == 3) {
    ResolvedBundle r{{*opt.v_kl, *opt.v_k, *opt.v_l}, "user", std::nullopt};
    r.bundle.validate();
    return r;
  }
  if (opt.source != "auto" && opt.source != "quadrature") {
    throw ArgumentError("--variations must be 'auto' or 'quadrature'");
  }
  if (opt.source == "auto" && src.entry) {
    if (const auto* cert = src.entry->certificate_for(cls)) {
      return {cert->bundle, "certificate:" + to_string(cert->source), std::nullopt};
    }
  }
  auto est = quadrature_bundle(src, cls, opt.n);
  if (!est.converged()) throw NonConvergence(nonconvergence_message(est));
  const std::string tag = "quadrature:" + src.partial(cls.k + 1, cls.l + 1).source_tag();
  return {est.bundle, tag, est};
}

void require_class(int k, int l) {
  if (k < 0 || l < 0) throw ArgumentError("--k and --l must be nonnegative");
}

std::string output_stem(const std::string& out) {
  std::filesystem::path p(out);
  const auto ext = p.extension().string();
  if (ext == ".csv" || ext == ".json") p.replace_extension();
  return p.string();
}

void write_file(const std::string& path, const std::string& text) {
  std::ofstream file(path, std::ios::binary);
  if (!file) throw ArgumentError("cannot open '" + path + "' for writing");
  file << text;
  if (!file) throw ArgumentError("failed writing '" + path + "'");
}

struct CommandResult {
  Json json;
  std::string csv;
  int code = exit_ok;
};

class Cli {
 public:
  Cli(std::ostream& out, std::ostream& err) : out_(out), err_(err) {}

  int run(const std::vector<std::string>& args);

 private:
  void add_global_options(CLI::App& app);
  CLI::App* add_command(CLI::App& app, const std::string& name, const std::string& help);
  void add_function_options(CLI::App* cmd);
  void add_variation_options(CLI::App* cmd);

  CommandResult approx();
  CommandResult decay_audit();
  CommandResult alias_check();
  CommandResult error_report();
  CommandResult compress();
  CommandResult corpus_list();
  CommandResult variation();

  Json header(const std::string& command, const std::optional<FunctionSource>& src) const {
    Json j;
    j["schema"] = kSchemaVersion;
    j["command"] = command;
    if (src) j["function"] = src->describe();
    return j;
  }

  void warn(const std::string& message) const { err_ << "warning: " << message << '\n'; }

  std::ostream& out_;
  std::ostream& err_;
  GlobalOptions global_;
  FunctionOptions fn_;
  VariationOptions var_;
  int k_ = 0;
  int l_ = 0;
  int d_x_ = 16;
  int d_y_ = 16;
  int n_x_ = 0;
  int n_y_ = 0;
  int oversample_ = 4;
  int m_ = 256;
  // decay-audit
  int i_max_ = 64;
  int j_max_ = 64;
  double tol_ = 1e-9;
  // alias-check
  int k_max_ = 0;
  // error-report
  int d_min_ = 0;
  int d_max_ = 0;
  int step_ = 1;
  std::string n_rule_ = "2d+2";
  // compress
  double epsilon_ = 0.0;
  std::string strategy_ = "bound";
};

void Cli::add_global_options(CLI::App& app) {
  app.add_option("--out", global_.out, "Output path stem; writes <stem>.csv and <stem>.json");
  app.add_option("--format", global_.format, "Stdout summary format")->check(CLI::IsMember({"csv", "json"}));
  app.add_flag("--quiet", global_.quiet, "Suppress the stdout summary");
  app.add_option("--threads", global_.threads, "Worker threads for data-parallel loops")->check(CLI::PositiveNumber);
  app.add_flag("--timings", global_.timings, "Include wall-clock timings in the JSON output");
}

CLI::App* Cli::add_command(CLI::App& app, const std::string& name, const std::string& help) {
  auto* cmd = app.add_subcommand(name, help);
  cmd->fallthrough();
  return cmd;
}

void Cli::add_function_options(CLI::App* cmd) {
  cmd->add_option("--fn", fn_.fn, "Built-in corpus function name");
  cmd->add_option("--expr", fn_.expr, "Function expression in x and y");
  cmd->add_option("--fd-h", fn_.fd_h, "Finite-difference step for --expr partials")->check(CLI::Range(1e-6, 1e-2));
}

void Cli::add_variation_options(CLI::App* cmd) {
  cmd->add_option("--variations", var_.source, "Variation source: auto (certificate if known) or quadrature")
      ->check(CLI::IsMember({"auto", "quadrature"}));
  cmd->add_option("--vn", var_.n, "Variation quadrature nodes per axis")->check(CLI::Range(32, 1 << 14));
  cmd->add_option("--vkl", var_.v_kl, "User-supplied V_{k,l}");
  cmd->add_option("--vk", var_.v_k, "User-supplied V_k[x]");
  cmd->add_option("--vl", var_.v_l, "User-supplied V_l[y]");
}

int Cli::run(const std::vector<std::string>& args) {
  CLI::App app{"Bivariate Chebyshev approximation with certified decay and error bounds", "cheb2d"};
  app.footer(kGrammarHelp);
  app.require_subcommand(1);
  add_global_options(app);

  auto* approx_cmd = add_command(app, "approx", "Quadrature coefficients on a Gauss-Chebyshev grid");
  add_function_options(approx_cmd);
  approx_cmd->add_option("--dx", d_x_, "Degree in x");
  approx_cmd->add_option("--dy", d_y_, "Degree in y");
  approx_cmd->add_option("--nx", n_x_, "Nodes in x (default 2*dx+2)");
  approx_cmd->add_option("--ny", n_y_, "Nodes in y (default 2*dy+2)");

  auto* audit_cmd = add_command(app, "decay-audit", "Check oracle coefficients against the decay bounds");
  add_function_options(audit_cmd);
  add_variation_options(audit_cmd);
  audit_cmd->add_option("--k", k_, "Smoothness order in x")->required();
  audit_cmd->add_option("--l", l_, "Smoothness order in y")->required();
  audit_cmd->add_option("--imax", i_max_, "Largest x index audited");
  audit_cmd->add_option("--jmax", j_max_, "Largest y index audited");
  audit_cmd->add_option("--oversample", oversample_, "Oracle oversampling factor")->check(CLI::PositiveNumber);
  audit_cmd->add_option("--tol", tol_, "Relative violation tolerance")->check(CLI::NonNegativeNumber);

  auto* alias_cmd = add_command(app, "alias-check", "Verify the aliasing identity against direct quadrature");
  add_function_options(alias_cmd);
  add_variation_options(alias_cmd);
  alias_cmd->add_option("--nx", n_x_, "Nodes in x")->required();
  alias_cmd->add_option("--ny", n_y_, "Nodes in y")->required();
  alias_cmd->add_option("--dx", d_x_, "Degree in x")->required();
  alias_cmd->add_option("--dy", d_y_, "Degree in y")->required();
  alias_cmd->add_option("--kmax", k_max_, "Fold truncation (default: bound-driven)");
  alias_cmd->add_option("--oversample", oversample_, "Oracle oversampling factor")->check(CLI::PositiveNumber);

  auto* error_cmd = add_command(app, "error-report", "Measured L1 errors against both error bounds");
  add_function_options(error_cmd);
  add_variation_options(error_cmd);
  error_cmd->add_option("--k", k_, "Smoothness order in x")->required();
  error_cmd->add_option("--l", l_, "Smoothness order in y")->required();
  error_cmd->add_option("--dmin", d_min_, "Smallest degree")->required();
  error_cmd->add_option("--dmax", d_max_, "Largest degree")->required();
  error_cmd->add_option("--step", step_, "Degree step")->check(CLI::PositiveNumber);
  error_cmd->add_option("--n-rule", n_rule_, "Nodes per axis as a function of d, e.g. 2d+2");
  error_cmd->add_option("--m", m_, "Gauss-Legendre points per axis for L1 norms")->check(CLI::Range(16, 1 << 14));
  error_cmd->add_option("--oversample", oversample_, "Oracle oversampling factor")->check(CLI::PositiveNumber);

  auto* compress_cmd = add_command(app, "compress", "Threshold coefficients with a certified L1 budget");
  add_function_options(compress_cmd);
  add_variation_options(compress_cmd);
  compress_cmd->add_option("--k", k_, "Smoothness order in x");
  compress_cmd->add_option("--l", l_, "Smoothness order in y");
  compress_cmd->add_option("--eps", epsilon_, "Threshold epsilon")->required();
  compress_cmd->add_option("--dx", d_x_, "Degree in x");
  compress_cmd->add_option("--dy", d_y_, "Degree in y");
  compress_cmd->add_option("--strategy", strategy_, "bound or magnitude")->check(CLI::IsMember({"bound", "magnitude"}));
  compress_cmd->add_option("--oversample", oversample_, "Oracle oversampling factor")->check(CLI::PositiveNumber);
  compress_cmd->add_option("--m", m_, "Gauss-Legendre points per axis for L1 norms")->check(CLI::Range(16, 1 << 14));

  auto* list_cmd = add_command(app, "corpus-list", "List the built-in functions");

  auto* variation_cmd = add_command(app, "variation", "Quadrature estimates of the variation integrals");
  add_function_options(variation_cmd);
  variation_cmd->add_option("--k", k_, "Smoothness order in x")->required();
  variation_cmd->add_option("--l", l_, "Smoothness order in y")->required();
  variation_cmd->add_option("--vn", var_.n, "Quadrature nodes per axis")->check(CLI::Range(32, 1 << 14));

  std::vector<std::string> reversed(args.rbegin(), args.rend());
  try {
    app.parse(reversed);
  } catch (const CLI::CallForHelp&) {
    out_ << app.help();
    return exit_ok;
  } catch (const CLI::CallForAllHelp&) {
    out_ << app.help("", CLI::AppFormatMode::All);
    return exit_ok;
  } catch (const CLI::ParseError& e) {
    err_ << "error: " << e.what() << '\n';
    return exit_argument_error;
  }

  const auto start = std::chrono::steady_clock::now();
  CommandResult result;
  try {
    set_thread_count(global_.threads);
    if (approx_cmd->parsed()) {
      result = approx();
    } else if (audit_cmd->parsed()) {
      result = decay_audit();
    } else if (alias_cmd->parsed()) {
      result = alias_check();
    } else if (error_cmd->parsed()) {
      result = error_report();
    } else if (compress_cmd->parsed()) {
      result = compress();
    } else if (list_cmd->parsed()) {
      result = corpus_list();
    } else if (variation_cmd->parsed()) {
      result = variation();
    }
    if (global_.timings) {
      const std::chrono::duration<double> elapsed = std::chrono::steady_clock::now() - start;
      result.json["timings"] = {{"total_s", elapsed.count()}};
    }
    const std::string json_text = result.json.dump(2) + "\n";
    if (!global_.out.empty()) {
      const auto stem = output_stem(global_.out);
      write_file(stem + ".csv", result.csv);
      write_file(stem + ".json", json_text);
    }
    if (!global_.quiet) out_ << (global_.format == "csv" ? result.csv : json_text);
    return result.code;
  } catch (const ParseError& e) {
    err_ << "error: expression " << e.what() << '\n';
    return exit_argument_error;
  } catch (const ArgumentError& e) {
    err_ << "error: " << e.what() << '\n';
    return exit_argument_error;
  } catch (const EvaluationError& e) {
    err_ << "error: evaluation failed at (" << format_real(e.x()) << ", " << format_real(e.y()) << "): " << e.what()
         << '\n';
    return exit_evaluation_error;
  } catch (const NonConvergence& e) {
    err_ << "error: " << e.what() << '\n';
    return exit_nonconvergent;
  } catch (const std::exception& e) {
    err_ << "error: " << e.what() << '\n';
    return exit_evaluation_error;
  }
}

CommandResult Cli::approx() {
  const auto src = resolve_function(fn_);
  if (d_x_ < 0 || d_y_ < 0) throw ArgumentError("degrees must be nonnegative");
  const int nx = n_x_ > 0 ? n_x_ : 2 * d_x_ + 2;
  const int ny = n_y_ > 0 ? n_y_ : 2 * d_y_ + 2;
  const auto c = compute_coeffs_quadrature(src.f, ChebGrid::make(nx, ny), d_x_, d_y_);
  CommandResult r;
  r.json = header("approx", src);
  r.json["coefficients"] = to_json(c);
  r.csv = to_csv(c);
  return r;
}

CommandResult Cli::decay_audit() {
  const auto src = resolve_function(fn_);
  require_class(k_, l_);
  if (i_max_ < 0 || j_max_ < 0) throw ArgumentError("--imax and --jmax must be nonnegative");
  const SmoothnessClass cls{k_, l_};
  const auto bundle = resolve_bundle(src, cls, var_);
  const auto c = exact_coeffs_oracle(src.f, i_max_, j_max_, oversample_);
  const auto report = audit_decay(c, cls, bundle.bundle, AuditTolerance{tol_, AuditTolerance{}.absolute});
  CommandResult r;
  r.json = header("decay-audit", src);
  r.json["variations"] = bundle_json(bundle);
  r.json["oracle"] = {{"oversample", oversample_}, {"nodes", oracle_node_count(i_max_, j_max_, oversample_)}};
  r.json["report"] = to_json(report);
  r.json["certified"] = report.certified();
  r.csv = bound_grid_csv(report, c);
  r.code = report.certified() ? exit_ok : exit_not_certified;
  if (!report.certified()) warn(std::to_string(report.violations.size()) + " bound violation(s)");
  return r;
}

CommandResult Cli::alias_check() {
  const auto src = resolve_function(fn_);
  if (d_x_ < 0 || d_y_ < 0) throw ArgumentError("degrees must be nonnegative");
  if (d_x_ >= n_x_) throw ArgumentError("--dx must be below --nx");
  if (d_y_ >= n_y_) throw ArgumentError("--dy must be below --ny");

  // Fold tails need a class with k, l >= 1; certificates first, quadrature otherwise.
  std::optional<ResolvedBundle> tail_bundle;
  SmoothnessClass tail_cls{1, 1};
  if (src.entry && var_.source == "auto") {
    if (const auto* cert = src.entry->tail_certificate()) {
      tail_cls = cert->cls;
      tail_bundle = ResolvedBundle{cert->bundle, "certificate:" + to_string(cert->source), std::nullopt};
    }
  }
  if (!tail_bundle) tail_bundle = resolve_bundle(src, tail_cls, var_);

  const int k_max = k_max_ > 0 ? k_max_ : default_k_max(tail_cls, tail_bundle->bundle, d_x_, d_y_, n_x_, n_y_);
  if (k_max_ < 0) throw ArgumentError("--kmax must be positive");
  const int ext_x = alias_required_degree(d_x_, n_x_, k_max);
  const int ext_y = alias_required_degree(d_y_, n_y_, k_max);
  if (std::max(ext_x, ext_y) > kAliasDegreeWarning) {
    warn("extended oracle degree (" + std::to_string(ext_x) + ", " + std::to_string(ext_y) + ") exceeds " +
         std::to_string(kAliasDegreeWarning) + " per axis; this may be slow");
  }
  const auto residual = alias_residual(src.f, d_x_, d_y_, n_x_, n_y_, k_max, oversample_);
  const double tail = alias_tail_bound(tail_cls, tail_bundle->bundle, d_x_, d_y_, n_x_, n_y_, k_max);
  const bool ok = residual.max_residual <= (std::isfinite(tail) ? tail : 0.0) + kAliasResidualFloor;

  CommandResult r;
  r.json = header("alias-check", src);
  const Json residual_json = to_json(residual, tail);
  for (const auto& [key, value] : residual_json.items()) r.json[key] = value;
  r.json["tail_class"] = {{"k", tail_cls.k}, {"l", tail_cls.l}};
  r.json["tail_variations"] = bundle_json(*tail_bundle);
  r.json["residual_floor"] = kAliasResidualFloor;
  r.json["certified"] = ok;
  std::ostringstream csv;
  csv << "n_x,n_y,d_x,d_y,k_max,max_residual,argmax_i,argmax_j,predicted_tail_bound\n"
      << n_x_ << ',' << n_y_ << ',' << d_x_ << ',' << d_y_ << ',' << k_max << ',' << format_real(residual.max_residual)
      << ',' << residual.argmax_i << ',' << residual.argmax_j << ',' << (std::isfinite(tail) ? format_real(tail) : "")
      << '\n';
  r.csv = csv.str();
  r.code = ok ? exit_ok : exit_not_certified;
  if (!ok) {
    warn(std::isfinite(tail) ? "residual exceeds the predicted tail bound"
                             : "no finite tail bound for this class; residual exceeds the floor");
  }
  return r;
}

double loglog_slope(const std::vector<double>& xs, const std::vector<double>& ys) {
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  std::size_t count = 0;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    if (!(ys[i] > 0.0)) continue;
    const double lx = std::log(xs[i]);
    const double ly = std::log(ys[i]);
    sx += lx;
    sy += ly;
    sxx += lx * lx;
    sxy += lx * ly;
    ++count;
  }
  if (count < 2) return std::nan("");
  const double n = static_cast<double>(count);
  return (n * sxy - sx * sy) / (n * sxx - sx * sx);
}

Json finite_or_null(double v) { return std::isfinite(v) ? Json(v) : Json(nullptr); }

CommandResult Cli::error_report() {
  const auto src = resolve_function(fn_);
  if (k_ < 1 || l_ < 1) throw ArgumentError("error-report needs --k >= 1 and --l >= 1");
  if (d_min_ < std::max(k_, l_)) throw ArgumentError("--dmin must be at least max(k, l)");
  if (d_max_ < d_min_) throw ArgumentError("--dmax must be at least --dmin");
  const SmoothnessClass cls{k_, l_};
  const auto bundle = resolve_bundle(src, cls, var_);

  CommandResult r;
  r.json = header("error-report", src);
  r.json["class"] = {{"k", k_}, {"l", l_}};
  r.json["variations"] = bundle_json(bundle);
  r.json["n_rule"] = n_rule_;
  r.json["m"] = m_;
  std::ostringstream csv;
  csv << "d,err_exact,bound_c1,err_quad,bound_c2\n";
  Json rows = Json::array();
  bool ok = true;
  std::vector<double> ds, errs;
  for (int d = d_min_; d <= d_max_; d += step_) {
    const int n = apply_node_rule(n_rule_, d);
    if (n <= d) throw ArgumentError("node rule gives n = " + std::to_string(n) + " <= d = " + std::to_string(d));
    const auto exact = exact_coeffs_oracle(src.f, d, d, oversample_);
    const auto quad = compute_coeffs_quadrature(src.f, ChebGrid::make(n, n), d, d);
    const double err_exact = l1_error(src.f, exact, m_);
    const double err_quad = l1_error(src.f, quad, m_);
    const double b1 = l1_bound_exact_partial(cls, bundle.bundle.v_kl, d, d);
    const double b2 = l1_bound_quadrature_partial(cls, bundle.bundle, d, d, n, n);
    const bool row_ok = err_exact <= b1 && err_quad <= b2;
    ok = ok && row_ok;
    ds.push_back(d);
    errs.push_back(err_exact);
    csv << d << ',' << format_real(err_exact) << ',' << format_real(b1) << ',' << format_real(err_quad) << ','
        << format_real(b2) << '\n';
    rows.push_back({{"d", d},
                    {"n", n},
                    {"err_exact", err_exact},
                    {"bound_c1", b1},
                    {"err_quad", err_quad},
                    {"bound_c2", b2},
                    {"within_bounds", row_ok}});
    if (!row_ok) warn("degree " + std::to_string(d) + ": measured error exceeds its bound");
  }
  r.json["rows"] = rows;
  r.json["err_exact_loglog_slope"] = finite_or_null(loglog_slope(ds, errs));
  r.json["certified"] = ok;
  r.csv = csv.str();
  r.code = ok ? exit_ok : exit_not_certified;
  return r;
}

CommandResult Cli::compress() {
  const auto src = resolve_function(fn_);
  require_class(k_, l_);
  if (d_x_ < 0 || d_y_ < 0) throw ArgumentError("degrees must be nonnegative");
  if (!(epsilon_ > 0.0)) throw ArgumentError("--eps must be positive");
  auto c = std::make_shared<const CoeffMatrix>(exact_coeffs_oracle(src.f, d_x_, d_y_, oversample_));
  CommandResult r;
  r.json = header("compress", src);
  SparseCoeffs s;
  if (strategy_ == "bound") {
    const SmoothnessClass cls{k_, l_};
    const auto bundle = resolve_bundle(src, cls, var_);
    r.json["class"] = {{"k", k_}, {"l", l_}};
    r.json["variations"] = bundle_json(bundle);
    s = threshold_by_bound(c, cls, bundle.bundle, epsilon_);
  } else {
    s = threshold_by_magnitude(c, epsilon_);
  }
  const auto report = compression_report(s, src.f, m_);
  const Json sidecar = sidecar_json(s, report);
  for (const auto& [key, value] : sidecar.items()) r.json[key] = value;
  r.csv = kept_csv(s);
  r.code = report.sound() ? exit_ok : exit_not_certified;
  if (!report.sound()) warn("measured L1 distance exceeds the dropped-coefficient budget");
  return r;
}

CommandResult Cli::corpus_list() {
  CommandResult r;
  r.json = header("corpus-list", std::nullopt);
  Json entries = Json::array();
  std::ostringstream csv;
  csv << "name,formula,k,l\n";
  for (const auto& e : builtin_corpus()) {
    entries.push_back(to_json(e));
    csv << e.name << ",\"" << e.formula << "\"," << e.cls.k << ',' << e.cls.l << '\n';
  }
  r.json["entries"] = entries;
  r.csv = csv.str();
  return r;
}

CommandResult Cli::variation() {
  const auto src = resolve_function(fn_);
  require_class(k_, l_);
  const SmoothnessClass cls{k_, l_};
  const auto est = quadrature_bundle(src, cls, var_.n);
  auto estimate_json = [](const VariationEstimate& v) {
    return Json{{"value", v.value}, {"refined", v.refined}, {"n", v.n_used}, {"converged", v.converged}};
  };
  CommandResult r;
  r.json = header("variation", src);
  r.json["class"] = {{"k", k_}, {"l", l_}};
  r.json["partial_source"] = src.partial(k_ + 1, l_ + 1).source_tag();
  r.json["v_kl"] = estimate_json(est.mixed);
  r.json["v_k"] = estimate_json(est.along_x);
  r.json["v_l"] = estimate_json(est.along_y);
  const VariationCertificate* cert = src.entry ? src.entry->certificate_for(cls) : nullptr;
  if (cert) {
    r.json["certificate"] = {{"v_kl", cert->bundle.v_kl},
                             {"v_k", cert->bundle.v_k},
                             {"v_l", cert->bundle.v_l},
                             {"source", to_string(cert->source)}};
  } else {
    r.json["certificate"] = nullptr;
  }
  r.json["converged"] = est.converged();
  std::ostringstream csv;
  csv << "quantity,value,refined,converged\n";
  auto row = [&](const char* name, const VariationEstimate& v) {
    csv << name << ',' << format_real(v.value) << ',' << format_real(v.refined) << ',' << (v.converged ? 1 : 0)
        << '\n';
  };
  row("v_kl", est.mixed);
  row("v_k", est.along_x);
  row("v_l", est.along_y);
  r.csv = csv.str();
  if (!est.converged()) {
    err_ << "error: " << nonconvergence_message(est) << '\n';
    r.code = exit_nonconvergent;
  }
  return r;
}

}  // namespace

int apply_node_rule(const std::string& rule, int d) {
  static const std::regex pattern(R"(^\s*(?:(\d+)\s*\*?\s*)?d\s*(?:([+-])\s*(\d+))?\s*$)");
  static const std::regex constant(R"(^\s*(\d+)\s*$)");
  std::smatch m;
  if (std::regex_match(rule, m, constant)) return std::stoi(m[1]);
  if (!std::regex_match(rule, m, pattern)) {
    throw ArgumentError("node rule '" + rule + "' must look like 'a*d+b', 'ad+b', 'd' or a constant");
  }
  const int a = m[1].matched ? std::stoi(m[1]) : 1;
  const int b = m[3].matched ? std::stoi(m[3]) * (m[2] == "-" ? -1 : 1) : 0;
  return a * d + b;
}

int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  Cli cli(out, err);
  return cli.run(args);
}

}  // namespace cheb2d
