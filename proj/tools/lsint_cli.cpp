#include "lsint_cli.hpp"

#include "config_file.hpp"

#include "lsint/errors.hpp"
#include "lsint/geometry.hpp"
#include "lsint/kernels.hpp"
#include "lsint/node_csv.hpp"
#include "lsint/quadrature.hpp"
#include "lsint/redistance.hpp"
#include "lsint/reference.hpp"
#include "lsint/report_csv.hpp"
#include "lsint/studies.hpp"

#include "CLI11.hpp"
#include <fmt/format.h>
#include <fmt/ostream.h>

#include <algorithm>
#include <chrono>
#include <cmath>
#include <fstream>
#include <functional>
#include <limits>
#include <optional>
#include <ostream>

namespace lsint::cli {

namespace {

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

struct ShapeArgs {
  std::string shape;
  std::optional<double> r0;
  int exponent = 3;

  ShapeDescriptor descriptor() const {
    ShapeDescriptor d = default_shape(parse_shape_name(shape));
    if (r0)
      d.r0 = *r0;
    d.exponent = exponent;
    return d;
  }
};

struct KernelArgs {
  std::string family = "bump";
  int moments = 1;
  std::optional<double> rho;

  Kernel build() const {
    const WeightFamily f = parse_weight_family(family);
    const double r = rho ? *rho : (f == WeightFamily::ShiftedBump ? 0.1 : 0.0);
    return build_kernel(f, moments, r);
  }
};

struct IntegrandArgs {
  std::string integrand = "one";
  std::vector<double> center{0.0, 0.0};

  Integrand build() const {
    Point c{0.0, 0.0, 0.0};
    for (std::size_t i = 0; i < center.size() && i < 3; ++i)
      c[i] = center[i];
    return make_integrand(parse_integrand_name(integrand), c);
  }
  Point center_point() const {
    Point c{0.0, 0.0, 0.0};
    for (std::size_t i = 0; i < center.size() && i < 3; ++i)
      c[i] = center[i];
    return c;
  }
};

struct KernelCmd {
  KernelArgs kernel;
  bool csv = false;
};

struct IntegrateCmd {
  ShapeArgs shape;
  IntegrandArgs integrand;
  KernelArgs kernel;
  std::string eps = "2*h^0.5";
  std::vector<int> n{100};
  std::string side = "positive";
  double shift = 0.0;
  int half_width = 1;
  int workers = 1;
  bool timing = false;
  std::string output;
};

struct StudyCmd {
  std::string id;
  std::optional<int> max_n;
  std::vector<int> ladder;
  std::optional<double> a0;
  bool calibrate = false;
  bool opt_in = false;
  int workers = 1;
  bool timing = false;
  std::string output;
  bool summary = false;
};

struct SweepCmd {
  std::string input;
  ShapeArgs shape;
  int n = 200;
  int max_rounds = 50;
  double tol = -1.0;
  std::string output;
};

struct FamilyCmd {
  ShapeArgs shape;
  IntegrandArgs integrand;
  int n = 400;
  std::vector<double> eta;
  std::vector<double> eta_range;
  double probe_width = 32.0;
  double probe_relative = 0.0;
  int probe_moments = 2;
  std::string side = "both";
  std::string fit = "polynomial";
  int degree = 1;
  int workers = 1;
  std::string output;
};

void add_shape_options(CLI::App* sub, ShapeArgs& a, bool required) {
  auto* opt = sub->add_option("--shape", a.shape,
                              "circle-quadratic, circle-sdf, sphere-sdf, cusp-star, l1-2d, "
                              "l1-3d, l1-squared or power-of-distance");
  if (required)
    opt->required();
  sub->add_option("--r0", a.r0, "Shape radius (default depends on the shape)");
  sub->add_option("--exponent", a.exponent, "Power q for power-of-distance")
      ->check(CLI::PositiveNumber);
}

void add_kernel_options(CLI::App* sub, KernelArgs& a, const std::string& prefix = "") {
  sub->add_option("--" + prefix + "family", a.family, "Kernel weight: bump or shifted")
      ->check(CLI::IsMember({"bump", "shifted"}));
  sub->add_option("--" + prefix + "moments", a.moments, "Number of vanishing moments m >= 1")
      ->check(CLI::Range(1, 12));
  sub->add_option("--" + prefix + "rho", a.rho,
                  "Support start for the shifted weight (default 0.1)");
}

void add_integrand_options(CLI::App* sub, IntegrandArgs& a) {
  sub->add_option("--integrand", a.integrand, "one, theta-sawtooth or inverse-sqrt");
  sub->add_option("--center", a.center, "Singular point of inverse-sqrt, x y [z]")
      ->expected(2, 3);
}

void add_output_option(CLI::App* sub, std::string& path) {
  sub->add_option("--output,-o", path, "Write CSV here instead of stdout");
}

void add_workers_option(CLI::App* sub, int& workers) {
  sub->add_option("--workers", workers, "Threads for the band sum; results do not depend on it")
      ->check(CLI::Range(1, 256));
}

// Writes to `path`, or to `out` when it is empty.
void emit(const std::string& path, std::ostream& out,
          const std::function<void(std::ostream&)>& write) {
  if (path.empty()) {
    write(out);
    return;
  }
  std::ofstream file(path, std::ios::binary);
  if (!file)
    throw std::invalid_argument(fmt::format("cannot open '{}' for writing", path));
  write(file);
  if (!file)
    throw std::runtime_error(fmt::format("failed writing '{}'", path));
}

int cmd_kernel(const KernelCmd& cmd, std::ostream& out) {
  const Kernel k = cmd.kernel.build();
  const int m = k.vanishing_moments;
  if (cmd.csv) {
    fmt::print(out, "# lsint kernel v1\nkernel,term,value\n");
    for (std::size_t i = 0; i < k.coeffs.size(); ++i)
      fmt::print(out, "{},c{},{:.17g}\n", kernel_label(k), i, k.coeffs[i]);
    for (int p = 0; p <= m + 1; ++p)
      fmt::print(out, "{},moment{},{:.17g}\n", kernel_label(k), p, kernel_moment(k, p));
    fmt::print(out, "{},residual,{:.3e}\n{},condition,{:.3e}\n", kernel_label(k), k.residual,
               kernel_label(k), k.condition);
    return kExitOk;
  }
  fmt::print(out, "kernel {}\n", kernel_label(k));
  fmt::print(out, "support [{}, {}]\n", k.support_lo, k.support_hi);
  std::string poly = "c0";
  for (int i = 1; i <= m; ++i)
    poly += i == 1 ? " + c1 r" : fmt::format(" + c{} r^{}", i, i);
  fmt::print(out, "delta(r) = w(r) ({})\n", poly);
  for (std::size_t i = 0; i < k.coeffs.size(); ++i)
    fmt::print(out, "  c{} = {:.16g}\n", i, k.coeffs[i]);
  fmt::print(out, "moments\n");
  for (int p = 0; p <= m + 1; ++p)
    fmt::print(out, "  p = {}  {:>24.16e}{}\n", p, kernel_moment(k, p),
               p == 0 ? "  (mass)" : (p <= m ? "  (vanishing)" : ""));
  fmt::print(out, "residual {:.3e}\ncondition {:.3e}\n", k.residual, k.condition);
  return kExitOk;
}

int cmd_integrate(const IntegrateCmd& cmd, std::ostream& out, std::ostream& err) {
  const ShapeDescriptor shape = cmd.shape.descriptor();
  const EpsilonPolicy policy = EpsilonPolicy::parse(cmd.eps);
  const BandSide side = parse_band_side(cmd.side);
  if (side == BandSide::Both)
    throw std::invalid_argument("--side must be positive or negative");
  std::vector<int> ladder = cmd.n;
  for (std::size_t i = 1; i < ladder.size(); ++i)
    if (ladder[i] <= ladder[i - 1])
      throw std::invalid_argument("--n values must be strictly increasing");

  QuadratureJob job;
  job.field = make_field(shape);
  job.integrand = cmd.integrand.build();
  job.kernel = cmd.kernel.build();
  job.policy = policy;
  job.side = side;
  job.shift = cmd.shift;
  job.workers = cmd.workers;
  job.grid.dim = shape_dim(shape.kind);
  job.grid.half_width = cmd.half_width;
  for (int n : ladder) {
    job.grid.n_cells = n;
    validate(job.grid);
  }

  std::optional<double> reference;
  const auto kind = parse_integrand_name(cmd.integrand.integrand);
  const Point c = cmd.integrand.center_point();
  if (kind != IntegrandKind::InverseSqrtAt || (c[0] == 0.0 && c[1] == 1.0 && c[2] == 0.0))
    reference = reference_value(shape, kind, cmd.shift);

  const std::string series = fmt::format("{}/{}", shape_name(shape.kind), kernel_label(job.kernel));
  std::vector<ReportRow> rows;
  for (int n : ladder) {
    job.grid.n_cells = n;
    const auto start = std::chrono::steady_clock::now();
    const QuadratureResult r = integrate(job);
    ReportRow row;
    row.n = n;
    row.h = r.h;
    row.eps = r.eps;
    row.value = r.value;
    row.reference = reference.value_or(kNaN);
    row.rel_error = reference ? std::abs(r.value - *reference) / std::abs(*reference) : kNaN;
    row.observed_order =
        rows.empty() ? kNaN
                     : observed_order(rows.back().rel_error, row.rel_error) /
                           std::log2(static_cast<double>(n) / rows.back().n);
    row.band_count = r.band_count;
    if (cmd.timing)
      row.wall_time =
          std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    if (r.under_resolved)
      fmt::print(err, "warning: eps = {:.4g} is below 2h = {:.4g} at N = {}\n", r.eps, 2 * r.h,
                 n);
    rows.push_back(row);
  }
  emit(cmd.output, out, [&](std::ostream& os) {
    write_csv_header(os);
    for (const auto& row : rows)
      write_csv_row(os, "integrate", series, row);
  });
  return kExitOk;
}

int cmd_study(const StudyCmd& cmd, std::ostream& out, std::ostream& err) {
  const StudyId id = parse_study_name(cmd.id);
  StudyOverrides o;
  o.max_n = cmd.max_n;
  if (!cmd.ladder.empty())
    o.ladder = cmd.ladder;
  o.include_opt_in = cmd.opt_in;
  o.workers = cmd.workers;
  o.timing = cmd.timing;
  o.a0 = cmd.a0;
  if (study_definition(id).requires_a0 && !o.a0) {
    if (!cmd.calibrate)
      throw std::invalid_argument(fmt::format(
          "study {} needs --a0; pass --calibrate to fit a0 to the N = 200 row of phi1 "
          "(relative error 1.01552e-02)",
          cmd.id));
    o.a0 = calibrate_table5_a0(1.01552e-2, 200, 2.75, 3.25, cmd.workers);
    fmt::print(err, "calibrated a0 = {:.9g}\n", *o.a0);
  }
  const ConvergenceReport report = run_study(id, o);
  emit(cmd.output, out, [&](std::ostream& os) { write_report_csv(os, report); });
  if (cmd.summary)
    fmt::print(cmd.output.empty() ? err : out, "{}", format_summary(report));
  return kExitOk;
}

int cmd_sweep(const SweepCmd& cmd, std::ostream& out, std::ostream& err) {
  if (cmd.input.empty() == cmd.shape.shape.empty())
    throw std::invalid_argument("sweep needs exactly one of --input or --shape");
  GridSpec grid;
  std::vector<double> phi;
  if (!cmd.input.empty()) {
    std::ifstream file(cmd.input);
    if (!file)
      throw std::invalid_argument(fmt::format("cannot open '{}'", cmd.input));
    NodeSamples samples = read_node_csv(file);
    grid = samples.grid;
    phi = std::move(samples.values);
  } else {
    const ShapeDescriptor shape = cmd.shape.descriptor();
    grid.dim = shape_dim(shape.kind);
    grid.n_cells = cmd.n;
    validate(grid);
    phi = sample_nodes(grid, make_field(shape));
  }
  SweepOptions options;
  options.max_rounds = cmd.max_rounds;
  options.tol = cmd.tol;
  const DistanceGrid dg = fast_sweep(initialize_interface(grid, phi), options);
  fmt::print(err, "rounds {}  last change {:.3e}  eikonal residual {:.3e}\n", dg.rounds,
             dg.last_change, eikonal_residual(dg));
  emit(cmd.output, out, [&](std::ostream& os) { write_distance_csv(os, dg); });
  return kExitOk;
}

int cmd_family(const FamilyCmd& cmd, std::ostream& out) {
  const ShapeDescriptor shape = cmd.shape.descriptor();
  GridSpec grid;
  grid.dim = shape_dim(shape.kind);
  grid.n_cells = cmd.n;
  validate(grid);

  std::vector<double> etas = cmd.eta;
  if (!cmd.eta_range.empty()) {
    if (!etas.empty())
      throw std::invalid_argument("use either --eta or --eta-range");
    const double count = cmd.eta_range[2];
    if (count < 2 || count != std::floor(count))
      throw std::invalid_argument("--eta-range needs an integer count >= 2");
    for (int i = 0; i < static_cast<int>(count); ++i)
      etas.push_back(cmd.eta_range[0] + (cmd.eta_range[1] - cmd.eta_range[0]) * i / (count - 1));
  }
  if (etas.empty())
    throw std::invalid_argument("family needs --eta or --eta-range");

  FamilyProbe probe;
  probe.kernel = build_kernel(WeightFamily::Bump, cmd.probe_moments);
  probe.eps_over_h = cmd.probe_width;
  probe.relative_width = cmd.probe_relative;
  probe.side = parse_band_side(cmd.side);
  probe.workers = cmd.workers;
  const FamilyIntegralSamples samples =
      sample_family(make_field(shape), cmd.integrand.build(), grid, probe, etas);

  std::optional<FitRecord> fit;
  if (cmd.fit == "polynomial")
    fit = fit_family(samples, FitModel::Polynomial, cmd.degree);
  else if (cmd.fit == "power-law")
    fit = fit_family(samples, FitModel::PowerLaw);

  emit(cmd.output, out, [&](std::ostream& os) {
    fmt::print(os, "# lsint family v1\neta,I\n");
    for (std::size_t i = 0; i < etas.size(); ++i)
      fmt::print(os, "{:.17g},{:.17g}\n", samples.etas[i], samples.values[i]);
    if (fit) {
      fmt::print(os, "# fit {} exponent {:.17g} max_residual {:.6e}\n", cmd.fit, fit->exponent,
                 fit->max_residual);
      for (std::size_t i = 0; i < fit->coefficients.size(); ++i)
        fmt::print(os, "# A{} = {:.17g}\n", i, fit->coefficients[i]);
    }
  });
  return kExitOk;
}

// Turns config entries into option tokens for `sub`, skipping keys given on the command line.
std::vector<std::string> config_tokens(const CLI::App& sub, const std::string& path,
                                       const std::vector<std::string>& cmdline) {
  std::ifstream file(path);
  if (!file)
    throw ConfigError(fmt::format("cannot open config file '{}'", path));
  std::vector<std::string> tokens;
  for (const ConfigEntry& e : parse_config(file, path)) {
    const std::string flag = "--" + e.key;
    const CLI::Option* opt = sub.get_option_no_throw(flag);
    if (!opt || e.key == "config" || e.key == "help")
      throw ConfigError(
          fmt::format("{}:{}: unknown config key '{}' for {}", path, e.line, e.key, sub.get_name()));
    const bool on_cmdline = std::any_of(cmdline.begin(), cmdline.end(), [&](const std::string& t) {
      return t == flag || t.rfind(flag + "=", 0) == 0;
    });
    if (on_cmdline)
      continue;
    if (opt->get_expected_max() == 0) {
      if (e.values.size() != 1 || (e.values[0] != "true" && e.values[0] != "false"))
        throw ConfigError(fmt::format("{}:{}: '{}' takes true or false", path, e.line, e.key));
      tokens.push_back(flag + "=" + e.values[0]);
      continue;
    }
    tokens.push_back(flag);
    tokens.insert(tokens.end(), e.values.begin(), e.values.end());
  }
  return tokens;
}

std::optional<std::string> find_config_path(const std::vector<std::string>& args) {
  for (std::size_t i = 0; i < args.size(); ++i) {
    if (args[i] == "--config" && i + 1 < args.size())
      return args[i + 1];
    if (args[i].rfind("--config=", 0) == 0)
      return args[i].substr(9);
  }
  return std::nullopt;
}

} // namespace

int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Level-set surface integrals with vanishing-moment kernels", "lsint"};
  app.require_subcommand(1);
  app.option_defaults()->always_capture_default();
  app.get_formatter()->column_width(34);

  KernelCmd kernel_cmd;
  auto* kernel = app.add_subcommand("kernel", "Print kernel coefficients and moments");
  add_kernel_options(kernel, kernel_cmd.kernel);
  kernel->add_flag("--csv", kernel_cmd.csv, "Print as CSV");

  IntegrateCmd integ;
  auto* integrate_sub = app.add_subcommand("integrate", "Band sum over one shape for a list of N");
  add_shape_options(integrate_sub, integ.shape, true);
  add_integrand_options(integrate_sub, integ.integrand);
  add_kernel_options(integrate_sub, integ.kernel);
  integrate_sub->add_option("--eps", integ.eps, "Band width policy: a*h^b, a*N^b or a constant");
  integrate_sub->add_option("--n", integ.n, "Cells per axis, increasing")
      ->check(CLI::PositiveNumber);
  integrate_sub->add_option("--side", integ.side, "positive or negative")
      ->check(CLI::IsMember({"positive", "negative"}));
  integrate_sub->add_option("--shift", integ.shift, "Integrate over the shift-level set");
  integrate_sub->add_option("--half-width", integ.half_width,
                            "Grid covers [-L, L]^dim with spacing 2/N")
      ->check(CLI::PositiveNumber);
  add_workers_option(integrate_sub, integ.workers);
  integrate_sub->add_flag("--timing", integ.timing, "Fill the wall_time column");
  add_output_option(integrate_sub, integ.output);

  StudyCmd study_cmd;
  auto* study = app.add_subcommand("study", "Run a registered convergence study");
  study->add_option("id", study_cmd.id, "table1, lipschitz, table2, table3, table4 or table5")
      ->required()
      ->check(CLI::IsMember({"table1", "lipschitz", "table2", "table3", "table4", "table5"}));
  study->add_option("--max-n", study_cmd.max_n, "Drop ladder entries above this N");
  study->add_option("--ladder", study_cmd.ladder, "Replace the N ladder")
      ->check(CLI::PositiveNumber);
  study->add_option("--a0", study_cmd.a0, "Band coefficient for table5")
      ->check(CLI::PositiveNumber);
  study->add_flag("--calibrate", study_cmd.calibrate, "Fit a0 to the first table5 row");
  study->add_flag("--opt-in", study_cmd.opt_in, "Include opt-in rungs (table4 N = 800)");
  add_workers_option(study, study_cmd.workers);
  study->add_flag("--timing", study_cmd.timing, "Fill the wall_time column");
  add_output_option(study, study_cmd.output);
  study->add_flag("--summary", study_cmd.summary, "Also print a text table");

  SweepCmd sweep_cmd;
  auto* sweep = app.add_subcommand("sweep", "Redistance node samples by fast sweeping");
  sweep->add_option("--input,-i", sweep_cmd.input, "CSV with columns i,j[,k],phi");
  add_shape_options(sweep, sweep_cmd.shape, false);
  sweep->add_option("--n", sweep_cmd.n, "Cells per axis when sampling --shape")
      ->check(CLI::PositiveNumber);
  sweep->add_option("--max-rounds", sweep_cmd.max_rounds, "Sweep rounds before giving up")
      ->check(CLI::PositiveNumber);
  sweep->add_option("--tol", sweep_cmd.tol,
                    "Stop when no node changes by more (negative: 1e-12 x diameter)");
  add_output_option(sweep, sweep_cmd.output);

  FamilyCmd family_cmd;
  auto* family = app.add_subcommand("family", "Sample I(eta) over nearby level sets and fit it");
  add_shape_options(family, family_cmd.shape, true);
  add_integrand_options(family, family_cmd.integrand);
  family->add_option("--n", family_cmd.n, "Cells per axis")->check(CLI::PositiveNumber);
  family->add_option("--eta", family_cmd.eta, "Level values to sample");
  family->add_option("--eta-range", family_cmd.eta_range, "lo hi count")->expected(3);
  family->add_option("--probe-width", family_cmd.probe_width, "Probe eps in units of h")
      ->check(CLI::PositiveNumber);
  family->add_option("--probe-relative", family_cmd.probe_relative,
                     "If positive, probe eps = this * |eta| (overrides --probe-width)")
      ->check(CLI::NonNegativeNumber);
  family->add_option("--probe-moments", family_cmd.probe_moments,
                     "Vanishing moments of the probe kernel")
      ->check(CLI::Range(1, 12));
  family->add_option("--side", family_cmd.side, "positive, negative or both (average)")
      ->check(CLI::IsMember({"positive", "negative", "both"}));
  family->add_option("--fit", family_cmd.fit, "none, polynomial or power-law")
      ->check(CLI::IsMember({"none", "polynomial", "power-law"}));
  family->add_option("--degree", family_cmd.degree, "Polynomial degree")
      ->check(CLI::NonNegativeNumber);
  add_workers_option(family, family_cmd.workers);
  add_output_option(family, family_cmd.output);

  std::string config_path;
  for (auto* sub : {kernel, integrate_sub, study, sweep, family})
    sub->add_option("--config", config_path, "Flat key = value file; command-line flags win");
  app.footer("Exit status: 0 ok, 1 numerical failure, 2 usage or validation error.");

  try {
    std::vector<std::string> argv = args;
    if (!argv.empty()) {
      CLI::App* sub = app.get_subcommand_no_throw(argv.front());
      if (sub) {
        if (const auto path = find_config_path(argv)) {
          auto extra = config_tokens(*sub, *path, argv);
          argv.insert(argv.begin() + 1, extra.begin(), extra.end());
        }
      }
    }
    std::reverse(argv.begin(), argv.end());
    app.parse(argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kExitOk : kExitUsage;
  } catch (const std::invalid_argument& e) {
    fmt::print(err, "error: {}\n", e.what());
    return kExitUsage;
  }

  try {
    if (kernel->parsed())
      return cmd_kernel(kernel_cmd, out);
    if (integrate_sub->parsed())
      return cmd_integrate(integ, out, err);
    if (study->parsed())
      return cmd_study(study_cmd, out, err);
    if (sweep->parsed())
      return cmd_sweep(sweep_cmd, out, err);
    if (family->parsed())
      return cmd_family(family_cmd, out);
  } catch (const NumericalError& e) {
    fmt::print(err, "numerical failure: {}\n", e.what());
    return kExitNumerical;
  } catch (const std::invalid_argument& e) {
    fmt::print(err, "error: {}\n", e.what());
    return kExitUsage;
  } catch (const std::exception& e) {
    fmt::print(err, "error: {}\n", e.what());
    return kExitNumerical;
  }
  return kExitUsage;
}

} // namespace lsint::cli
