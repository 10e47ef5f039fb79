// SPDX-License-Identifier: Apache-2.0
//
// wbary: optimal-transport barycenters on model spaces, with numerical
// checks of the transport-map regularity and displacement-functional
// machinery behind them. See README.md for file formats.

#include <CLI11.hpp>

#include <chrono>
#include <cmath>
#include <fstream>
#include <iostream>
#include <sstream>

#include "wbary/barycenter.hpp"
#include "wbary/gauge.hpp"
#include "wbary/instances.hpp"
#include "wbary/io.hpp"

namespace {

using namespace wbary;

struct Options {
  std::vector<std::string> files;
  std::string out;
  std::string table;
  std::string out_measure;
  std::string format = "json";
  std::string lambda_csv;
  std::string sizes_csv = "4,16,64";
  std::string manifold = "euclidean";
  std::string gauge_case = "semidiscrete";
  std::uint64_t seed = 1;
  double tol = 1e-8;
  std::size_t cap = 200000;
  int grid_res = 16;
  int dim = 2;
  int instances = 10;
  int atoms = 0;
  double lambda1 = 0.5;
};

std::vector<double> parse_csv_doubles(const std::string& s) {
  std::vector<double> out;
  std::stringstream ss(s);
  std::string item;
  while (std::getline(ss, item, ',')) out.push_back(std::stod(item));
  return out;
}

std::vector<int> parse_csv_ints(const std::string& s) {
  std::vector<int> out;
  std::stringstream ss(s);
  std::string item;
  while (std::getline(ss, item, ',')) out.push_back(std::stoi(item));
  return out;
}

ModelManifold manifold_from_name(const std::string& name, int dim) {
  if (name == "euclidean") return ModelManifold(ManifoldKind::Euclidean, dim);
  if (name == "sphere") return ModelManifold(ManifoldKind::Sphere, dim);
  if (name == "hyperbolic") return ModelManifold(ManifoldKind::Hyperbolic, dim);
  throw SchemaError("unknown manifold: " + name);
}

std::vector<double> ensemble_weights(const Options& opt, std::size_t n) {
  if (opt.lambda_csv.empty()) return std::vector<double>(n, 1.0 / double(n));
  std::vector<double> w = parse_csv_doubles(opt.lambda_csv);
  if (w.size() != n)
    throw SchemaError("--lambda arity does not match the input files");
  return w;
}

MeasureEnsemble load_ensemble(const Options& opt) {
  std::vector<DiscreteMeasure> mus;
  for (const auto& f : opt.files) mus.push_back(read_measure_file(f));
  if (mus.empty()) throw SchemaError("no input measures given");
  std::vector<double> w = ensemble_weights(opt, mus.size());
  ModelManifold m = mus.front().manifold;
  return make_ensemble(m, std::move(mus), std::move(w));
}

void emit(const Options& opt, ReportFile& rep,
          std::chrono::steady_clock::time_point t0) {
  rep.runtime_ms =
      std::chrono::duration<double, std::milli>(
          std::chrono::steady_clock::now() - t0)
          .count();
  std::string body = opt.format == "csv" ? rep.to_csv() : rep.to_json();
  if (opt.out.empty()) {
    std::cout << body;
  } else {
    std::ofstream f(opt.out);
    f << body;
  }
}

// ---------------------------------------------------------------- commands

void cmd_w2(const Options& opt, ReportFile& rep) {
  if (opt.files.size() != 2) throw SchemaError("w2 needs exactly two measures");
  DiscreteMeasure mu = read_measure_file(opt.files[0]);
  DiscreteMeasure nu = read_measure_file(opt.files[1]);
  W2Result r = w2(mu.manifold, mu, nu);
  W2Result rt = w2(mu.manifold, nu, mu);
  double row_res = 0, col_res = 0;
  for (int i = 0; i < r.plan.rows; ++i)
    row_res = std::max(row_res,
                       std::abs(r.plan.mass.row(i).sum() - mu.weights[i]));
  for (int j = 0; j < r.plan.cols; ++j)
    col_res = std::max(col_res,
                       std::abs(r.plan.mass.col(j).sum() - nu.weights[j]));
  rep.add("cost", r.cost, r.cost, true);
  rep.add("distance", std::sqrt(std::max(r.cost, 0.0)),
          std::sqrt(std::max(r.cost, 0.0)), true);
  rep.add_upper("plan_row_residual", row_res, 1e-10);
  rep.add_upper("plan_col_residual", col_res, 1e-10);
  rep.add_upper("symmetry_gap", std::abs(r.cost - rt.cost), 1e-10);
}

void cmd_mmot(const Options& opt, ReportFile& rep) {
  MeasureEnsemble p = load_ensemble(opt);
  MultiMarginalPlan plan = solve_mmot(p.manifold, p.weights, p.measures, opt.cap);
  double marg_res = 0;
  for (std::size_t i = 0; i < p.size(); ++i) {
    std::vector<double> sums(p.measures[i].size(), 0.0);
    for (const auto& e : plan.entries) sums[e.index[i]] += e.mass;
    for (std::size_t k = 0; k < sums.size(); ++k)
      marg_res = std::max(marg_res,
                          std::abs(sums[k] - p.measures[i].weights[k]));
  }
  rep.add("cost", plan.cost, plan.cost, true);
  rep.add("plan_entries", double(plan.entries.size()),
          double(plan.entries.size()), true);
  rep.add_upper("marginal_residual", marg_res, 1e-10);
  if (p.size() == 2 && p.manifold.kind() == ManifoldKind::Euclidean) {
    double closed = p.weights[0] * p.weights[1] *
                    w2(p.manifold, p.measures[0], p.measures[1]).cost;
    rep.add_upper("pairwise_identity_gap", std::abs(plan.cost - closed), 1e-9);
  }
}

void cmd_barycenter(const Options& opt, ReportFile& rep) {
  MeasureEnsemble p = load_ensemble(opt);
  BarycenterResult r = wasserstein_barycenter(p, opt.cap);
  double induced_gap = 0, energy = 0;
  for (std::size_t i = 0; i < r.induced_plans.size(); ++i) {
    double independent = w2(p.manifold, r.barycenter, p.measures[i]).cost;
    induced_gap = std::max(induced_gap,
                           std::abs(r.induced_plans[i].cost - independent));
    energy += p.weights[i] * r.induced_plans[i].cost;
  }
  rep.add("atoms", double(r.barycenter.size()), double(r.barycenter.size()),
          true);
  rep.add("functional_value", r.functional_value, r.functional_value, true);
  if (!r.induced_plans.empty()) {
    rep.add_upper("induced_plan_gap", induced_gap, 1e-8);
    rep.add_upper("energy_identity_gap", std::abs(energy - r.plan.cost), 1e-8);
  }
  rep.add_upper("pointwise_residual", r.max_pointwise_residual, opt.tol);
  if (!opt.out_measure.empty()) write_measure_file(opt.out_measure,
                                                   r.barycenter);
}

void cmd_lln(const Options& opt, ReportFile& rep) {
  MeasureEnsemble p = load_ensemble(opt);
  std::vector<int> sizes = parse_csv_ints(opt.sizes_csv);
  std::vector<LlnRow> rows = lln_run(p, sizes, opt.seed, opt.cap);
  if (!opt.table.empty()) {
    std::ofstream t(opt.table);
    t << "j,seed,ensemble_dist,barycenter_dist\n";
    t.precision(17);
    for (const auto& r : rows)
      t << r.j << "," << r.seed << "," << r.ensemble_dist << ","
        << r.barycenter_dist << "\n";
  }
  for (const auto& r : rows) {
    rep.add("w2outer_j" + std::to_string(r.j), r.ensemble_dist,
            r.ensemble_dist, true);
    rep.add("w2bary_j" + std::to_string(r.j), r.barycenter_dist,
            r.barycenter_dist, true);
  }
  rep.add_upper("trend_final_le_first", rows.back().barycenter_dist,
                rows.front().barycenter_dist);
  rep.add_upper("final_below_threshold", rows.back().barycenter_dist, 0.3);
}

void cmd_hessian_check(const Options& opt, ReportFile& rep) {
  CounterRng rng(opt.seed, 0x11);
  if (opt.gauge_case == "gaussian") {
    double worst = 0;
    for (int t = 0; t < opt.instances; ++t) {
      int n = 2 + int(rng.below(2));
      std::vector<double> lambda = rng.simplex_weights(n);
      std::vector<Vec> means(n);
      std::vector<Mat> covs(n);
      for (int i = 0; i < n; ++i) {
        means[i] = Vec::Zero(opt.dim);
        for (int a = 0; a < opt.dim; ++a) means[i][a] = 4.0 * rng.normal();
        Mat g(opt.dim, opt.dim);
        for (int a = 0; a < opt.dim; ++a)
          for (int b = 0; b < opt.dim; ++b) g(a, b) = rng.normal();
        covs[i] = g * g.transpose() + 0.3 * Mat::Identity(opt.dim, opt.dim);
      }
      worst = std::max(worst,
                       hessian_equality_gaussian(lambda, means, covs)
                           .max_residual);
    }
    rep.add_upper("gaussian_fixed_point_residual", worst, 1e-10);
    // 1-D closed form: barycenter deviation is the weighted mean deviation
    std::vector<double> lambda = rng.simplex_weights(3);
    std::vector<Vec> means(3, Vec::Zero(1));
    std::vector<Mat> covs(3);
    double closed = 0;
    for (int i = 0; i < 3; ++i) {
      double sigma = 0.5 + 2.0 * rng.uniform();
      covs[i] = Mat::Constant(1, 1, sigma * sigma);
      closed += lambda[i] * sigma;
    }
    GaussianBarycenter gb = gaussian_barycenter(lambda, means, covs);
    rep.add_upper("closed_form_1d_gap",
                  std::abs(std::sqrt(gb.covariance(0, 0)) - closed), 1e-10);
    return;
  }
  ModelManifold m = manifold_from_name(opt.manifold, opt.dim);
  double radius = m.kind() == ManifoldKind::Sphere ? 0.6 : 1.0;
  double worst = 0;
  for (int t = 0; t < opt.instances; ++t) {
    Point center = canonical_base(m);
    SemiDiscretePotential pot =
        random_semidiscrete(m, center, radius, 1 + int(rng.below(3)), rng);
    std::vector<Point> samples(8);
    for (auto& z : samples) z = random_point_ball(m, center, radius, rng);
    worst = std::max(
        worst, hessian_equality_semidiscrete(pot, samples).max_residual);
  }
  double bound = m.kind() == ManifoldKind::Euclidean ? 1e-14 : 1e-8;
  rep.add_upper("semidiscrete_residual", worst, bound);
}

void cmd_jacobi_check(const Options& opt, ReportFile& rep) {
  CounterRng rng(opt.seed, 0x22);
  ModelManifold m = manifold_from_name(opt.manifold, opt.dim);
  double radius = m.kind() == ManifoldKind::Sphere ? 0.6 : 1.0;
  double min_jacobi = std::numeric_limits<double>::infinity();
  double min_laplace = std::numeric_limits<double>::infinity();
  double min_det = std::numeric_limits<double>::infinity();
  for (int t = 0; t < opt.instances; ++t) {
    Point center = canonical_base(m);
    SemiDiscretePotential pot =
        random_semidiscrete(m, center, radius, 1 + int(rng.below(3)), rng);
    Point z = random_point_ball(m, center, radius, rng);
    JacobiReport jr = jacobi_bound_check(pot, z);
    min_jacobi = std::min(min_jacobi, jr.jacobi_slack);
    min_laplace = std::min(min_laplace, jr.laplacian_slack);
    min_det = std::min(min_det, jr.det_j_min);
  }
  rep.add("min_det_j", min_det, 1e-12, min_det > 1e-12);
  rep.add("jacobi_slack_min", min_jacobi, -1e-6, min_jacobi >= -1e-6);
  rep.add("laplacian_slack_min", min_laplace, -1e-9, min_laplace >= -1e-9);
}

void cmd_density_bound(const Options& opt, ReportFile& rep) {
  ModelManifold m(ManifoldKind::Euclidean, opt.dim);
  Point anchor = canonical_base(m);
  SemiDiscretePotential pot = make_semi_discrete(
      m, opt.lambda1, {1.0 - opt.lambda1}, {anchor});
  std::vector<double> lo(opt.dim, 2.0), hi(opt.dim, 3.0);
  int atoms =
      opt.atoms > 0 ? opt.atoms
                    : (opt.dim == 1 ? 10000
                                    : int(std::ceil(std::pow(
                                          10000.0, 1.0 / opt.dim))));
  DensityBoundReport r = density_bound_check(pot, lo, hi, atoms);
  rep.add("lipschitz", r.lipschitz, r.lipschitz, true);
  rep.add("source_max_density", r.source_max, r.source_max, true);
  rep.add_upper("pushed_max_density", r.pushed_max, r.bound);
  double predicted = std::pow(r.lipschitz, opt.dim) * r.source_max;
  rep.add_upper("scaling_gap", std::abs(r.pushed_max - predicted),
                0.10 * predicted);
}

IntegrabilityGauge gauge_with_report(const std::vector<GridDensity>& family,
                                     ReportFile& rep) {
  IntegrabilityGauge gauge = build_gauge(family);
  const auto& alpha = gauge.alpha();
  rep.add("alpha_levels", double(alpha.size()), double(alpha.size()), true);
  // schedule respected (re-verified post hoc)
  double sched_gap = 0;
  for (std::size_t n = 0; n < alpha.size(); ++n) {
    double tail =
        tail_profile(family, {std::exp(double(alpha[n]))})[0];
    sched_gap = std::max(sched_gap, tail - std::pow(2.0, -double(n) - 1.0));
  }
  rep.add_upper("tail_schedule_excess", sched_gap, 0.0);
  double gp = 0;  // G on [0,1]
  for (int k = 0; k <= 100; ++k) gp = std::max(gp, gauge.G(k / 100.0));
  rep.add_upper("g_on_unit_interval", gp, 0.0);
  double hp_min = 1e300, hp_max = -1e300;
  for (int k = 0; k <= 400; ++k) {
    double x = -1.0 + k * 0.02;
    double hp = gauge.H_prime(x);
    hp_min = std::min(hp_min, hp);
    hp_max = std::max(hp_max, hp);
  }
  rep.add("h_prime_min", hp_min, 0.0, hp_min >= 0.0);
  rep.add("h_prime_max", hp_max, 1.0, hp_max <= 1.0);
  double conv = 0;  // convexity of G via second differences
  for (int k = 1; k < 200; ++k) {
    double x = 0.05 * k, h = 0.05;
    conv = std::min(conv, gauge.G(x + h) - 2 * gauge.G(x) + gauge.G(x - h));
  }
  rep.add("g_second_difference_min", conv, -1e-9, conv >= -1e-9);
  const double gap_bound = std::pow(1.0 - std::exp(-1.0 / 3.0), 2);
  double gap_min = 1e300;
  for (int a : alpha)
    gap_min = std::min(gap_min, gauge.H(a + 1.0) - gauge.H(double(a)));
  rep.add("h_gap_min", gap_min, gap_bound, gap_min >= gap_bound);
  double sup_g = 0;
  for (const auto& f : family)
    sup_g = std::max(sup_g, displacement_functional(f, gauge));
  rep.add_upper("sup_integral_g", sup_g, 1.0);
  return gauge;
}

void cmd_gauge_build(const Options& opt, ReportFile& rep) {
  std::vector<GridDensity> family;
  if (opt.files.empty()) {
    // default fixture: uniform density of height 4 on [0, 1/4]
    family.push_back(make_grid_density(
        {0.0}, {1.0}, {64}, [] {
          std::vector<double> v(64, 0.0);
          for (int i = 0; i < 16; ++i) v[i] = 4.0;
          return v;
        }()));
  } else {
    for (const auto& f : opt.files) family.push_back(read_density_file(f));
  }
  gauge_with_report(family, rep);
}

void cmd_entropy_check(const Options& opt, ReportFile& rep) {
  CounterRng rng(opt.seed, 0x33);
  const int d = 2;
  std::vector<double> lo(d, -8.0), hi(d, 12.0);
  std::vector<int> res(d, 128);
  double min_slack = std::numeric_limits<double>::infinity();
  for (int t = 0; t < opt.instances; ++t) {
    double s1 = 0.35 + 0.45 * rng.uniform();
    double s2 = 0.35 + 0.45 * rng.uniform();
    std::vector<double> m1{2.0 * rng.normal(), 2.0 * rng.normal()};
    std::vector<double> m2{4.0 + 2.0 * rng.normal(), 2.0 * rng.normal()};
    double l1 = 0.2 + 0.6 * rng.uniform();
    std::vector<double> lambda{l1, 1.0 - l1};
    double k_lower = (t % 2 == 0) ? 0.0 : 1.0;

    GridDensity g1 = gaussian_grid_density(lo, hi, res, m1, s1);
    GridDensity g2 = gaussian_grid_density(lo, hi, res, m2, s2);
    // Gaussian barycenter of isotropic marginals: weighted mean and sigma
    double sb = lambda[0] * s1 + lambda[1] * s2;
    std::vector<double> mb{lambda[0] * m1[0] + lambda[1] * m2[0],
                           lambda[0] * m1[1] + lambda[1] * m2[1]};
    GridDensity gb = gaussian_grid_density(lo, hi, res, mb, sb);
    double w2sq = 0;
    for (int i = 0; i < 2; ++i) {
      const auto& mi = (i == 0) ? m1 : m2;
      double si = (i == 0) ? s1 : s2;
      double dm = 0;
      for (int a = 0; a < d; ++a)
        dm += (mb[a] - mi[a]) * (mb[a] - mi[a]);
      w2sq += lambda[i] * (dm + d * (sb - si) * (sb - si));
    }
    EntropyInequalityReport er = entropy_inequality_check(
        {g1, g2}, lambda, gb, clamped_entropy, k_lower, 1.0, w2sq, d);
    min_slack = std::min(min_slack, er.slack);
  }
  rep.add("min_slack", min_slack, -1e-6, min_slack >= -1e-6);

  // degenerate case: identical measures, K = 0; slack is exactly the
  // dimension term
  GridDensity g = gaussian_grid_density(lo, hi, res, {0.0, 0.0}, 0.4);
  EntropyInequalityReport er = entropy_inequality_check(
      {g, g}, {0.5, 0.5}, g, clamped_entropy, 0.0, 1.0, 0.0, d);
  double expected = 0.5 * (d * d + 2.0 * d);
  rep.add_upper("degenerate_slack_gap", std::abs(er.slack - expected), 1e-9);
}

void cmd_pipeline_demo(const Options& opt, ReportFile& rep) {
  const int d = 2;
  std::vector<double> lo(d, -6.0), hi(d, 10.0);
  std::vector<int> res(d, 128);
  GridDensity g1, g2;
  if (opt.files.size() == 2) {
    g1 = read_density_file(opt.files[0]);
    g2 = read_density_file(opt.files[1]);
    if (!g1.same_grid(g2))
      throw SchemaError("pipeline densities must share a grid");
    lo = g1.lo;
    hi = g1.hi;
  } else if (opt.files.empty()) {
    g1 = gaussian_grid_density(lo, hi, res, {0.0, 0.0}, 1.0);
    g2 = gaussian_grid_density(lo, hi, res, {4.0, 0.0}, 1.0);
  } else {
    throw SchemaError("pipeline-demo takes zero or two density files");
  }
  const int dim = g1.dim();

  IntegrabilityGauge gauge = gauge_with_report({g1, g2}, rep);

  // discretize the densities by inverse-CDF sampling over the grid cells
  CounterRng rng(opt.seed, 0x44);
  int atoms = opt.atoms > 0 ? opt.atoms : 24;
  ModelManifold m(ManifoldKind::Euclidean, dim);
  auto discretize = [&](const GridDensity& g) {
    std::vector<double> cdf(g.cells());
    double acc = 0;
    for (std::size_t i = 0; i < g.cells(); ++i) {
      acc += g.values[i];
      cdf[i] = acc;
    }
    std::vector<Point> pts(atoms);
    for (auto& p : pts) {
      double u = rng.uniform() * acc;
      std::size_t cell =
          std::size_t(std::lower_bound(cdf.begin(), cdf.end(), u) -
                      cdf.begin());
      if (cell >= g.cells()) cell = g.cells() - 1;
      std::vector<double> c = g.cell_center(cell);
      Vec x(dim);
      for (int a = 0; a < dim; ++a) x[a] = c[a];
      p = Point{std::move(x)};
    }
    return make_measure(m, std::move(pts),
                        std::vector<double>(atoms, 1.0 / atoms));
  };
  DiscreteMeasure mu1 = discretize(g1);
  DiscreteMeasure mu2 = discretize(g2);
  std::vector<double> lambda = ensemble_weights(opt, 2);
  MeasureEnsemble p = make_ensemble(m, {mu1, mu2}, lambda);
  BarycenterResult bary = wasserstein_barycenter(p, opt.cap);

  // density estimate of the barycenter on the shared box
  std::vector<int> bins(dim, opt.grid_res);
  DensityHistogram fbar = histogram_density(
      bary.barycenter.points, bary.barycenter.weights, lo, hi, bins);

  double lhs = displacement_functional(fbar.density, gauge);
  double big_lambda = lambda[0] + lambda[1];
  double marg = 0;
  for (int i = 0; i < 2; ++i)
    marg += lambda[i] / big_lambda *
            displacement_functional(i == 0 ? g1 : g2, gauge);
  double rhs = marg + 0.0 + 1.0 / (2.0 * big_lambda) *
                                (double(dim) * dim + 2.0 * dim);
  rep.add("barycenter_atoms", double(bary.barycenter.size()),
          double(bary.barycenter.size()), true);
  rep.add("w2sq_to_ensemble", bary.functional_value, bary.functional_value,
          true);
  rep.add_upper("pointwise_residual", bary.max_pointwise_residual, opt.tol);
  rep.add_upper("gauge_functional_of_barycenter", lhs, rhs);
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Wasserstein barycenters on model spaces"};
  app.require_subcommand(1);
  Options opt;

  auto add_common = [&](CLI::App* cmd, bool wants_files) {
    if (wants_files)
      cmd->add_option("files", opt.files, "input files");
    cmd->add_option("--out", opt.out, "report path (default: stdout)");
    cmd->add_option("--format", opt.format, "json|csv")
        ->check(CLI::IsMember({"json", "csv"}));
    cmd->add_option("--seed", opt.seed, "64-bit seed");
    cmd->add_option("--tol", opt.tol, "check tolerance");
    cmd->add_option("--cap", opt.cap, "product-support cap");
    cmd->add_option("--grid-res", opt.grid_res, "grid resolution");
  };

  CLI::App* c_w2 = app.add_subcommand("w2", "pairwise squared W2 distance");
  add_common(c_w2, true);

  CLI::App* c_mmot = app.add_subcommand("mmot", "multi-marginal transport");
  add_common(c_mmot, true);
  c_mmot->add_option("--lambda", opt.lambda_csv, "ensemble weights");

  CLI::App* c_bary = app.add_subcommand("barycenter", "Wasserstein barycenter");
  add_common(c_bary, true);
  c_bary->add_option("--lambda", opt.lambda_csv, "ensemble weights");
  c_bary->add_option("--out-measure", opt.out_measure,
                     "write the barycenter measure here");

  CLI::App* c_lln = app.add_subcommand("lln", "law-of-large-numbers harness");
  add_common(c_lln, true);
  c_lln->add_option("--lambda", opt.lambda_csv, "ensemble weights");
  c_lln->add_option("--sizes", opt.sizes_csv, "empirical sample sizes");
  c_lln->add_option("--table", opt.table, "write the convergence CSV here");

  CLI::App* c_hess = app.add_subcommand("hessian-check",
                                        "weighted-Hessian cancellation");
  add_common(c_hess, false);
  c_hess->add_option("--case", opt.gauge_case, "semidiscrete|gaussian")
      ->check(CLI::IsMember({"semidiscrete", "gaussian"}));
  c_hess->add_option("--manifold", opt.manifold, "model space");
  c_hess->add_option("--dim", opt.dim, "dimension");
  c_hess->add_option("--instances", opt.instances, "instance count");

  CLI::App* c_jac = app.add_subcommand("jacobi-check",
                                       "Jacobian and Laplacian bounds");
  add_common(c_jac, false);
  c_jac->add_option("--manifold", opt.manifold, "model space");
  c_jac->add_option("--dim", opt.dim, "dimension");
  c_jac->add_option("--instances", opt.instances, "instance count");

  CLI::App* c_dens = app.add_subcommand("density-bound",
                                        "density-bound propagation fixture");
  add_common(c_dens, false);
  c_dens->add_option("--dim", opt.dim, "dimension (1 or 2)");
  c_dens->add_option("--lambda1", opt.lambda1, "weight of the diffuse marginal");
  c_dens->add_option("--atoms", opt.atoms, "atoms per axis");

  CLI::App* c_gauge = app.add_subcommand("gauge-build",
                                         "uniform-integrability gauge");
  add_common(c_gauge, true);

  CLI::App* c_ent = app.add_subcommand("entropy-check",
                                       "displacement-functional inequality");
  add_common(c_ent, false);
  c_ent->add_option("--instances", opt.instances, "instance count");

  CLI::App* c_pipe = app.add_subcommand("pipeline-demo",
                                        "gauge -> barycenter -> bound chain");
  add_common(c_pipe, true);
  c_pipe->add_option("--lambda", opt.lambda_csv, "ensemble weights");
  c_pipe->add_option("--atoms", opt.atoms, "atoms per discretized marginal");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int code = app.exit(e);
    return code == 0 ? 0 : 2;
  }

  auto t0 = std::chrono::steady_clock::now();
  ReportFile rep;
  rep.seed = opt.seed;
  try {
    std::ostringstream flags;
    flags << opt.format << "|" << opt.seed << "|" << opt.tol << "|" << opt.cap
          << "|" << opt.grid_res << "|" << opt.lambda_csv << "|"
          << opt.sizes_csv << "|" << opt.manifold << "|" << opt.gauge_case
          << "|" << opt.dim << "|" << opt.instances << "|" << opt.atoms << "|"
          << opt.lambda1;
    rep.inputs_digest = digest_inputs(opt.files, flags.str());

    if (c_w2->parsed()) {
      rep.command = "w2";
      cmd_w2(opt, rep);
    } else if (c_mmot->parsed()) {
      rep.command = "mmot";
      cmd_mmot(opt, rep);
    } else if (c_bary->parsed()) {
      rep.command = "barycenter";
      cmd_barycenter(opt, rep);
    } else if (c_lln->parsed()) {
      rep.command = "lln";
      cmd_lln(opt, rep);
    } else if (c_hess->parsed()) {
      rep.command = "hessian-check";
      cmd_hessian_check(opt, rep);
    } else if (c_jac->parsed()) {
      rep.command = "jacobi-check";
      cmd_jacobi_check(opt, rep);
    } else if (c_dens->parsed()) {
      rep.command = "density-bound";
      cmd_density_bound(opt, rep);
    } else if (c_gauge->parsed()) {
      rep.command = "gauge-build";
      cmd_gauge_build(opt, rep);
    } else if (c_ent->parsed()) {
      rep.command = "entropy-check";
      cmd_entropy_check(opt, rep);
    } else if (c_pipe->parsed()) {
      rep.command = "pipeline-demo";
      cmd_pipeline_demo(opt, rep);
    }
  } catch (const SchemaError& e) {
    std::cerr << "schema error: " << e.what() << "\n";
    return 2;
  } catch (const Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  }
  emit(opt, rep, t0);
  return rep.all_pass() ? 0 : 1;
}
