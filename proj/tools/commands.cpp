#include "commands.hpp"

#include <cmath>
#include <cstdio>
#include <sstream>
#include <vector>

#include <json.hpp>

#include "thresholdci/coverage.hpp"
#include "thresholdci/errors.hpp"
#include "thresholdci/finite_distribution.hpp"
#include "thresholdci/limit_distribution.hpp"
#include "thresholdci/monte_carlo.hpp"

namespace thresholdci::cli {

namespace {

using nlohmann::ordered_json;

constexpr int kCurvePoints = 301;
constexpr double kCurveMax = 3.0;
constexpr int kDensityPoints = 801;
constexpr double kDensityHalfWidth = 4.0;
constexpr double kGapThreshold = 0.02;

struct ReferenceRow {
  EstimatorKind kind;
  double eta;
  double length;
  double min_coverage;
  double upper_bound;
};

// Published reference values at n = 40, k = 35, xi = sigma = 1, alpha = 0.05.
constexpr ReferenceRow kReferenceRows[] = {
    {EstimatorKind::hard, 0.05, 0.434, 0.9592, 0.9595},
    {EstimatorKind::hard, 0.5, 0.823, 0.9893, 0.9965},
    {EstimatorKind::adaptive_soft, 0.05, 0.432, 0.9574, 0.9591},
    {EstimatorKind::adaptive_soft, 0.5, 0.820, 0.9844, 0.9965},
};
constexpr double kReferenceLsLength = 0.406;
constexpr double kLengthTol = 5e-4;
constexpr double kUpperTol = 1e-3;
constexpr double kMinTol = 2e-3;

Format resolve_format(const RunConfig& c, Format fallback) { return c.format.value_or(fallback); }

std::string csv_cell(const std::optional<double>& v) { return v ? format_number(*v) : std::string(); }

ordered_json json_value(const std::optional<double>& v) { return v ? ordered_json(*v) : ordered_json(nullptr); }

std::string mode_name(VarianceMode mode) { return mode == VarianceMode::known ? "known" : "estimated"; }

std::vector<double> uniform_grid(double lo, double hi, int points) {
  std::vector<double> out(static_cast<std::size_t>(points));
  for (int j = 0; j < points; ++j) out[j] = lo + (hi - lo) * j / (points - 1);
  return out;
}

bool is_reference_setup(const RunConfig& c) {
  return c.n == 40 && c.k == 35 && c.xi == 1.0 && c.sigma == 1.0 && c.alpha == 0.05;
}

void compare(std::ostringstream& diag, bool& ok, const std::string& label, double got, double want, double tol) {
  const bool pass = std::abs(got - want) <= tol;
  ok = ok && pass;
  diag << "check " << label << ": " << format_number(got) << " vs " << format_number(want) << " (tol "
       << format_number(tol) << ") " << (pass ? "ok" : "MISMATCH") << '\n';
}

// Half-length from --a, --d (a = d xi eta) or the solver.
double resolve_half_length(const RunConfig& c, EstimatorKind kind, const ProblemSetup& setup) {
  if (c.a) return *c.a;
  if (c.d) return *c.d * setup.xi * setup.eta;
  return c.mode == VarianceMode::known ? solve_known_half_length(kind, c.alpha, setup)
                                       : solve_unknown_half_length(kind, c.alpha, setup);
}

IntervalSpec spec_for(VarianceMode mode, double a) {
  return mode == VarianceMode::known ? IntervalSpec::known_symmetric(a) : IntervalSpec::estimated(a);
}

struct Table1Row {
  std::string estimator;
  std::optional<double> eta;
  double length = 0.0;
  double lower_bound = 0.0;
  std::optional<double> min_coverage;
  double upper_bound = 0.0;
  std::optional<double> minimizer_theta;
  std::optional<double> mc_coverage;
  std::optional<double> mc_stderr;
};

}  // namespace

std::string format_number(double value) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.10g", value);
  return buf;
}

ProblemSetup RunConfig::setup() const {
  ProblemSetup s;
  s.n = n;
  s.k = k;
  s.eta = eta;
  s.xi = xi;
  s.sigma = sigma;
  return s;
}

void RunConfig::validate() const {
  setup().validate();
  if (!(alpha > 0.0 && alpha < 1.0)) throw DomainError("--alpha must lie in (0, 1)");
  if (theta && !std::isfinite(*theta)) throw DomainError("--theta must be finite");
  if (a && !(*a >= 0.0 && std::isfinite(*a))) throw DomainError("--a must be finite and nonnegative");
  if (d && !(*d >= 0.0 && std::isfinite(*d))) throw DomainError("--d must be finite and nonnegative");
  if (a && d) throw DomainError("--a and --d are mutually exclusive");
  if (reps < 0) throw DomainError("--reps must be nonnegative");
  if (check && command != Command::table1) throw DomainError("--check applies to table1 only");
}

Artifact cmd_table1(const RunConfig& c) {
  c.validate();
  if (c.check && !is_reference_setup(c)) throw DomainError("--check needs n=40, k=35, xi=1, sigma=1, alpha=0.05");
  const ProblemSetup base = c.setup();
  base.require_estimable();
  std::ostringstream diag;
  bool ok = true;

  std::vector<Table1Row> rows;
  {
    Table1Row ls;
    ls.estimator = "ls";
    ls.length = standard_ls_interval(base, VarianceMode::estimated, c.alpha);
    ls.upper_bound = upper_bound_unknown(IntervalSpec::estimated(ls.length), base);
    ls.lower_bound = ls.upper_bound;
    if (!c.fast) ls.min_coverage = ls.upper_bound;
    if (c.reps > 0) {
      const auto mc = simulate_ls_coverage(SimulationPlan::synthetic(base, 0.0, c.reps, c.seed), ls.length,
                                           VarianceMode::estimated);
      ls.mc_coverage = mc.coverage;
      ls.mc_stderr = mc.std_error;
    }
    if (c.check) compare(diag, ok, "ls length", ls.length, kReferenceLsLength, kLengthTol);
    rows.push_back(ls);
  }

  for (const ReferenceRow& ref : kReferenceRows) {
    const ProblemSetup setup = base.with_eta(ref.eta);
    Table1Row row;
    row.estimator = std::string(to_string(ref.kind));
    row.eta = ref.eta;
    row.length = solve_unknown_half_length(ref.kind, c.alpha, setup);
    const IntervalSpec spec = IntervalSpec::estimated(row.length);
    const BoundValue lower = lower_bound_unknown(ref.kind, spec, setup);
    if (lower.clamped) diag << "note: " << row.estimator << " eta=" << format_number(ref.eta) << " lower bound clamped to 0\n";
    row.lower_bound = lower.value;
    row.upper_bound = upper_bound_unknown(spec, setup);
    if (!c.fast) {
      const MinCoverage m = min_coverage_search(ref.kind, spec, setup);
      row.min_coverage = m.coverage;
      if (!m.at_infinity) row.minimizer_theta = m.theta;
      if (c.reps > 0) {
        const auto mc = simulate_coverage(SimulationPlan::synthetic(setup, m.at_infinity ? 0.0 : m.theta, c.reps, c.seed),
                                          ref.kind, spec);
        row.mc_coverage = mc.coverage;
        row.mc_stderr = mc.std_error;
      }
    }
    if (c.check) {
      const std::string label = row.estimator + " eta=" + format_number(ref.eta);
      compare(diag, ok, label + " length", row.length, ref.length, kLengthTol);
      compare(diag, ok, label + " upper bound", row.upper_bound, ref.upper_bound, kUpperTol);
      if (row.min_coverage) compare(diag, ok, label + " min coverage", *row.min_coverage, ref.min_coverage, kMinTol);
    }
    rows.push_back(row);
  }

  Artifact out;
  out.ok = ok;
  out.diagnostics = diag.str();
  const bool with_mc = c.reps > 0;
  if (resolve_format(c, Format::csv) == Format::csv) {
    std::ostringstream csv;
    csv << "estimator,eta,length,lower_bound,actual_min_coverage,upper_bound,minimizer_theta";
    if (with_mc) csv << ",mc_coverage,mc_stderr";
    csv << '\n';
    for (const Table1Row& r : rows) {
      csv << r.estimator << ',' << csv_cell(r.eta) << ',' << format_number(r.length) << ','
          << format_number(r.lower_bound) << ',' << csv_cell(r.min_coverage) << ',' << format_number(r.upper_bound)
          << ',' << csv_cell(r.minimizer_theta);
      if (with_mc) csv << ',' << csv_cell(r.mc_coverage) << ',' << csv_cell(r.mc_stderr);
      csv << '\n';
    }
    out.text = csv.str();
  } else {
    ordered_json doc;
    doc["alpha"] = c.alpha;
    doc["rows"] = ordered_json::array();
    for (const Table1Row& r : rows) {
      ordered_json j;
      j["estimator"] = r.estimator;
      j["eta"] = json_value(r.eta);
      j["length"] = r.length;
      j["lower_bound"] = r.lower_bound;
      j["actual_min_coverage"] = json_value(r.min_coverage);
      j["upper_bound"] = r.upper_bound;
      j["minimizer_theta"] = json_value(r.minimizer_theta);
      if (with_mc) {
        j["mc_coverage"] = json_value(r.mc_coverage);
        j["mc_stderr"] = json_value(r.mc_stderr);
      }
      doc["rows"].push_back(j);
    }
    out.text = doc.dump(2) + "\n";
  }
  return out;
}

Artifact cmd_figure(const RunConfig& c) {
  c.validate();
  const ProblemSetup setup = c.setup();
  setup.require_estimable();
  Artifact out;
  const bool json = resolve_format(c, Format::csv) == Format::json;
  const std::string& id = c.figure_id;

  if (id == "pdfH" || id == "pdfS" || id == "pdfAS") {
    const EstimatorKind kind = id == "pdfH" ? EstimatorKind::hard
                               : id == "pdfS" ? EstimatorKind::soft
                                              : EstimatorKind::adaptive_soft;
    const double theta = c.theta.value_or(0.0);
    const MixedDistribution dist(kind, setup, theta, ScalingFactor::conservative(setup));
    const DensitySeries series = sample_density(dist, -kDensityHalfWidth, kDensityHalfWidth, kDensityPoints);
    if (json) {
      ordered_json doc;
      doc["figure"] = id;
      doc["theta"] = theta;
      doc["atom_mass"] = series.atom_mass;
      doc["x"] = series.x;
      doc["density"] = series.density;
      out.text = doc.dump(2) + "\n";
    } else {
      std::ostringstream csv;
      csv << "x,density,atom_mass\n";
      for (std::size_t j = 0; j < series.x.size(); ++j)
        csv << format_number(series.x[j]) << ',' << format_number(series.density[j]) << ','
            << format_number(series.atom_mass) << '\n';
      out.text = csv.str();
    }
    return out;
  }

  if (id == "coverageH" || id == "coverageAS") {
    const EstimatorKind kind = id == "coverageH" ? EstimatorKind::hard : EstimatorKind::adaptive_soft;
    const double a = c.a.value_or(solve_unknown_half_length(kind, c.alpha, setup));
    const std::vector<double> thetas = uniform_grid(0.0, kCurveMax, kCurvePoints);
    const std::vector<double> cov = coverage_curve(kind, IntervalSpec::estimated(a), setup, thetas);
    if (json) {
      ordered_json doc;
      doc["figure"] = id;
      doc["half_length"] = a;
      doc["theta"] = thetas;
      doc["coverage"] = cov;
      out.text = doc.dump(2) + "\n";
    } else {
      std::ostringstream csv;
      csv << "theta,coverage,half_length\n";
      for (std::size_t j = 0; j < thetas.size(); ++j)
        csv << format_number(thetas[j]) << ',' << format_number(cov[j]) << ',' << format_number(a) << '\n';
      out.text = csv.str();
    }
    return out;
  }
  throw DomainError("unknown figure id '" + id + "' (expected pdfH, pdfS, pdfAS, coverageH or coverageAS)");
}

Artifact cmd_interval(const RunConfig& c) {
  c.validate();
  const ProblemSetup setup = c.setup();
  const EstimatorKind kind = c.kind.value_or(EstimatorKind::hard);
  if (c.mode == VarianceMode::estimated) setup.require_estimable();
  const double a = resolve_half_length(c, kind, setup);
  const IntervalSpec spec = spec_for(c.mode, a);

  std::ostringstream diag;
  double lower = 0.0;
  double upper = 0.0;
  std::optional<double> min_cov;
  std::optional<double> minimizer;
  if (c.mode == VarianceMode::known) {
    const BoundValue b = infimal_known_bound(kind, spec, setup);
    if (b.clamped) diag << "note: infimal coverage clamped to 0\n";
    lower = upper = b.value;
    min_cov = b.value;
  } else {
    const BoundValue b = lower_bound_unknown(kind, spec, setup);
    if (b.clamped) diag << "note: lower bound clamped to 0\n";
    lower = b.value;
    upper = upper_bound_unknown(spec, setup);
    if (!c.fast) {
      const MinCoverage m = min_coverage_search(kind, spec, setup);
      min_cov = m.coverage;
      if (!m.at_infinity) minimizer = m.theta;
    }
  }

  std::optional<double> mc;
  std::optional<double> mc_se;
  if (c.reps > 0) {
    const double theta = c.theta.value_or(minimizer.value_or(0.0));
    const auto est = simulate_coverage(SimulationPlan::synthetic(setup, theta, c.reps, c.seed), kind, spec);
    mc = est.coverage;
    mc_se = est.std_error;
  }

  Artifact out;
  out.diagnostics = diag.str();
  if (resolve_format(c, Format::json) == Format::json) {
    ordered_json doc;
    doc["kind"] = std::string(to_string(kind));
    doc["mode"] = mode_name(c.mode);
    doc["alpha"] = c.alpha;
    doc["half_length"] = a;
    doc["lower_bound"] = lower;
    doc["upper_bound"] = upper;
    doc["min_coverage"] = json_value(min_cov);
    doc["minimizer_theta"] = json_value(minimizer);
    if (c.reps > 0) {
      doc["mc_coverage"] = json_value(mc);
      doc["mc_stderr"] = json_value(mc_se);
    }
    out.text = doc.dump(2) + "\n";
  } else {
    std::ostringstream csv;
    csv << "kind,mode,alpha,half_length,lower_bound,upper_bound,min_coverage,minimizer_theta";
    if (c.reps > 0) csv << ",mc_coverage,mc_stderr";
    csv << '\n'
        << to_string(kind) << ',' << mode_name(c.mode) << ',' << format_number(c.alpha) << ',' << format_number(a)
        << ',' << format_number(lower) << ',' << format_number(upper) << ',' << csv_cell(min_cov) << ','
        << csv_cell(minimizer);
    if (c.reps > 0) csv << ',' << csv_cell(mc) << ',' << csv_cell(mc_se);
    csv << '\n';
    out.text = csv.str();
  }
  return out;
}

Artifact cmd_coverage_curve(const RunConfig& c) {
  c.validate();
  const ProblemSetup setup = c.setup();
  const EstimatorKind kind = c.kind.value_or(EstimatorKind::hard);
  if (c.mode == VarianceMode::estimated) setup.require_estimable();
  const double a = resolve_half_length(c, kind, setup);
  const IntervalSpec spec = spec_for(c.mode, a);
  const double hi = c.theta.value_or(kCurveMax);
  if (!(hi > 0.0)) throw DomainError("--theta (curve end) must be positive");
  const std::vector<double> thetas = uniform_grid(0.0, hi, kCurvePoints);
  const std::vector<double> cov = coverage_curve(kind, spec, setup, thetas);

  std::vector<CoverageEstimate> mc;
  if (c.reps > 0) {
    for (double t : thetas) mc.push_back(simulate_coverage(SimulationPlan::synthetic(setup, t, c.reps, c.seed), kind, spec));
  }

  Artifact out;
  if (resolve_format(c, Format::csv) == Format::csv) {
    std::ostringstream csv;
    csv << "theta,coverage";
    if (!mc.empty()) csv << ",mc_coverage,mc_stderr";
    csv << '\n';
    for (std::size_t j = 0; j < thetas.size(); ++j) {
      csv << format_number(thetas[j]) << ',' << format_number(cov[j]);
      if (!mc.empty()) csv << ',' << format_number(mc[j].coverage) << ',' << format_number(mc[j].std_error);
      csv << '\n';
    }
    out.text = csv.str();
  } else {
    ordered_json doc;
    doc["kind"] = std::string(to_string(kind));
    doc["mode"] = mode_name(c.mode);
    doc["half_length"] = a;
    doc["theta"] = thetas;
    doc["coverage"] = cov;
    if (!mc.empty()) {
      std::vector<double> est;
      std::vector<double> se;
      for (const auto& m : mc) {
        est.push_back(m.coverage);
        se.push_back(m.std_error);
      }
      doc["mc_coverage"] = est;
      doc["mc_stderr"] = se;
    }
    out.text = doc.dump(2) + "\n";
  }
  return out;
}

Artifact cmd_limit_check(const RunConfig& c) {
  c.validate();
  struct Suite {
    std::string name;
    EstimatorKind kind;
    LimitRegime regime;
    std::vector<PathPoint> path;
  };
  const std::vector<std::int64_t> ns{50, 500, 5000};
  const DegreesOfFreedom m5(5);
  const int points = c.fast ? 61 : 241;
  const std::vector<double> wide = uniform_grid(-3.0, 3.0, points);
  const std::vector<double> narrow = uniform_grid(-2.0, 2.0, c.fast ? 41 : 161);

  std::vector<Suite> suites;
  for (EstimatorKind kind : kAllEstimatorKinds) {
    if (c.kind && *c.kind != kind) continue;
    for (double nu : {0.0, 1.5, -0.7})
      suites.push_back({"conservative nu=" + format_number(nu) + " e=1 m=5", kind,
                        ConservativeRegime{nu, 1.0, m5}, conservative_path(nu, 1.0, m5, ns)});
    suites.push_back({"conservative nu=0.5 e=0 m=5", kind, ConservativeRegime{0.5, 0.0, m5},
                      conservative_path(0.5, 0.0, m5, ns)});
    suites.push_back({"consistent zeta=0.4 m=5", kind, ConsistentRegime{0.4, m5, std::nullopt},
                      consistent_path(0.4, m5, ns)});
    suites.push_back({"consistent zeta=0.4 m=inf", kind, ConsistentRegime{0.4, std::nullopt, std::nullopt},
                      consistent_path(0.4, std::nullopt, ns)});
    suites.push_back({"consistent zeta=-0.6 m=inf", kind, ConsistentRegime{-0.6, std::nullopt, std::nullopt},
                      consistent_path(-0.6, std::nullopt, ns)});
  }

  Artifact out;
  ordered_json doc;
  doc["threshold"] = kGapThreshold;
  doc["exclusion"] = 0.05;
  doc["suites"] = ordered_json::array();
  std::ostringstream csv;
  csv << "suite,kind,regime,n,gap,pass\n";
  bool all = true;
  for (const Suite& s : suites) {
    const bool conservative = std::holds_alternative<ConservativeRegime>(s.regime);
    const GapReport r = weak_convergence_gap(s.kind, s.path, s.regime, conservative ? wide : narrow);
    const bool pass = r.final_gap() <= kGapThreshold;
    all = all && pass;
    ordered_json j;
    j["name"] = s.name;
    j["kind"] = std::string(to_string(s.kind));
    j["regime"] = conservative ? "conservative" : "consistent";
    j["n"] = r.n;
    j["gap"] = r.gap;
    j["points_used"] = r.points_used;
    j["pass"] = pass;
    doc["suites"].push_back(j);
    for (std::size_t i = 0; i < r.n.size(); ++i)
      csv << s.name << ',' << to_string(s.kind) << ',' << (conservative ? "conservative" : "consistent") << ','
          << r.n[i] << ',' << format_number(r.gap[i]) << ',' << (i + 1 == r.n.size() ? (pass ? "1" : "0") : "")
          << '\n';
  }
  doc["all_pass"] = all;
  out.ok = all;
  out.text = resolve_format(c, Format::json) == Format::json ? doc.dump(2) + "\n" : csv.str();
  return out;
}

Artifact run_command(const RunConfig& config) {
  switch (config.command) {
    case Command::table1: return cmd_table1(config);
    case Command::figure: return cmd_figure(config);
    case Command::interval: return cmd_interval(config);
    case Command::coverage_curve: return cmd_coverage_curve(config);
    case Command::limit_check: return cmd_limit_check(config);
  }
  throw DomainError("unknown command");
}

}  // namespace thresholdci::cli
