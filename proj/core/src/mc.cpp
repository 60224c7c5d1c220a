#include "ringlab/mc.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <limits>
#include <stdexcept>

#include "ringlab/json_io.hpp"
#include "ringlab/limitlaw.hpp"
#include "ringlab/parallel.hpp"
#include "ringlab/svg.hpp"

namespace ringlab::mc {
namespace {

void require(bool ok, const char* msg) {
  if (!ok) throw std::invalid_argument(msg);
}

double sqrt_n(long n) { return std::sqrt(static_cast<double>(n)); }

/// Mean and standard error of a real sample; SE is NaN for fewer than two
/// points.
std::pair<double, double> mean_se(std::span<const double> xs) {
  const auto n = static_cast<double>(xs.size());
  if (xs.empty()) return {0.0, std::numeric_limits<double>::quiet_NaN()};
  double mean = 0;
  for (double x : xs) mean += x;
  mean /= n;
  if (xs.size() < 2) return {mean, std::numeric_limits<double>::quiet_NaN()};
  double var = 0;
  for (double x : xs) var += (x - mean) * (x - mean);
  var /= (n - 1.0);
  return {mean, std::sqrt(var / n)};
}

std::pair<Complex, double> mean_se(std::span<const Complex> xs) {
  const auto n = static_cast<double>(xs.size());
  if (xs.empty()) return {Complex{}, std::numeric_limits<double>::quiet_NaN()};
  Complex mean{};
  for (const Complex& x : xs) mean += x;
  mean /= n;
  if (xs.size() < 2) return {mean, std::numeric_limits<double>::quiet_NaN()};
  double var = 0;
  for (const Complex& x : xs) var += std::norm(x - mean);
  var /= (n - 1.0);
  return {mean, std::sqrt(var / n)};
}

double median(std::vector<double> xs) {
  if (xs.empty()) throw std::runtime_error("median of empty sample");
  const auto mid = xs.size() / 2;
  std::nth_element(xs.begin(), xs.begin() + static_cast<std::ptrdiff_t>(mid), xs.end());
  if (xs.size() % 2 == 1) return xs[mid];
  const double hi = xs[mid];
  const double lo = *std::max_element(xs.begin(), xs.begin() + static_cast<std::ptrdiff_t>(mid));
  return 0.5 * (lo + hi);
}

}  // namespace

profiles::RingGeometry config_ring(const ExperimentConfig& config) {
  if (config.profile) return profiles::ring_radii(*config.profile);
  return {0.0, 1.0};  // renormalized Ginibre
}

TrialArtifacts run_trial_full(const ExperimentConfig& config, int trial_index) {
  require(config.n >= config.spec.r(), "run_trial: n must be at least the perturbation rank");
  require(trial_index >= 0, "run_trial: trial index must be nonnegative");

  const SeededStream trial{config.base_seed, static_cast<std::uint64_t>(trial_index)};
  TrialArtifacts out;
  out.trial.index = trial_index;
  out.trial.z_values.assign(static_cast<std::size_t>(config.spec.group_count()), std::nullopt);

  ComplexMatrix a;
  if (config.profile) {
    const auto t_values = profiles::realize(*config.profile, config.n);
    a = randmat::assemble_isotropic(t_values, trial.substream(0), config.form);
  } else {
    a = randmat::sample_ginibre(config.n, trial.substream(0));
  }
  const auto embedded = jordan::embed_perturbation(config.spec, config.q, config.n, trial.substream(1));
  a += embedded.p;

  spectra::SpectrumResult spectrum;
  try {
    spectrum = spectra::eigenvalues(a);
  } catch (const spectra::EigensolveError&) {
    out.trial.failed = true;
    return out;
  }
#ifndef NDEBUG
  spectra::check_residuals(spectrum);
#endif

  const auto ring = config_ring(config);
  const double eps = config.epsilon.value_or(spectra::default_epsilon(config.spec, ring));
  const double delta = config.delta.value_or(spectra::default_delta(ring));
  const auto classified = spectra::classify_outliers(spectrum.eigenvalues, ring, eps, delta);
  out.trial.report = spectra::match_outliers(classified.outer, config.spec, config.n,
                                             ring.b + 2.0 * eps);
  out.trial.report.inner_violations = classified.inner_violations;

  for (int i = 0; i < config.spec.group_count(); ++i) {
    const auto& group = config.spec.group(i);
    if (group.blocks.front().beta != 1) continue;       // Z needs multiplicity one
    if (!(std::abs(group.theta) > ring.b)) continue;    // no outlier to track
    const auto& report_group = out.trial.report.groups[static_cast<std::size_t>(i)];
    if (report_group.count_mismatch) continue;          // excluded, still counted
    const auto& leading = report_group.classes.front();
    if (static_cast<int>(leading.raw.size()) != leading.p * leading.beta) continue;
    const Complex deviation = leading.raw.front() - group.theta;
    out.trial.z_values[static_cast<std::size_t>(i)] =
        sqrt_n(config.n) * std::pow(deviation, leading.p);
  }
  out.spectrum = std::move(spectrum.eigenvalues);
  return out;
}

TrialResult run_trial(const ExperimentConfig& config, int trial_index) {
  return run_trial_full(config, trial_index).trial;
}

std::vector<TrialResult> run_trials(const ExperimentConfig& config) {
  require(config.trials >= 1, "run_trials: needs at least one trial");
  std::vector<TrialResult> results(static_cast<std::size_t>(config.trials));
  parallel_for(config.trials, resolve_jobs(config.jobs),
               [&](int t) { results[static_cast<std::size_t>(t)] = run_trial(config, t); });
  return results;
}

SummaryStats summarize(const ExperimentConfig& config, std::span<const TrialResult> trials) {
  require(!trials.empty(), "summarize: no trials");
  std::vector<const TrialResult*> ordered;
  ordered.reserve(trials.size());
  for (const auto& t : trials) ordered.push_back(&t);
  std::sort(ordered.begin(), ordered.end(),
            [](const TrialResult* x, const TrialResult* y) { return x->index < y->index; });

  const auto ring = config_ring(config);
  SummaryStats stats;
  stats.n = config.n;
  stats.trials = static_cast<int>(trials.size());
  stats.ring = ring;
  stats.epsilon = config.epsilon.value_or(spectra::default_epsilon(config.spec, ring));
  stats.delta = config.delta.value_or(spectra::default_delta(ring));

  for (const auto& group : config.spec.groups())
    if (std::abs(group.theta) > ring.b + 2.0 * stats.epsilon)
      stats.expected_outer += group.dimension();

  int success = 0, inner = 0;
  for (const auto* trial : ordered) {
    if (trial->failed) {
      ++stats.failed;
      continue;
    }
    if (trial->report.any_mismatch()) ++stats.mismatched;
    if (trial->report.total_outer() == stats.expected_outer && !trial->report.any_mismatch())
      ++success;
    if (!trial->report.inner_violations.empty()) ++inner;
  }
  const int usable = stats.trials - stats.failed;
  stats.count_success_rate = usable > 0 ? static_cast<double>(success) / usable : 0.0;
  stats.inner_violation_rate = usable > 0 ? static_cast<double>(inner) / usable : 0.0;

  const int groups = config.spec.group_count();
  std::vector<std::vector<Complex>> z_samples(static_cast<std::size_t>(groups));
  for (const auto* trial : ordered) {
    if (trial->failed) continue;
    for (int i = 0; i < groups; ++i)
      if (trial->z_values[static_cast<std::size_t>(i)])
        z_samples[static_cast<std::size_t>(i)].push_back(*trial->z_values[static_cast<std::size_t>(i)]);
  }

  for (int i = 0; i < groups; ++i) {
    const auto& group = config.spec.group(i);
    GroupSummary gs;
    gs.theta = group.theta;
    gs.z_eligible = group.blocks.front().beta == 1 && std::abs(group.theta) > ring.b;
    gs.samples = static_cast<int>(z_samples[static_cast<std::size_t>(i)].size());
    if (gs.samples > 0) {
      std::vector<double> abs2;
      abs2.reserve(z_samples[static_cast<std::size_t>(i)].size());
      for (const Complex& z : z_samples[static_cast<std::size_t>(i)]) abs2.push_back(std::norm(z));
      const auto [mean, se] = mean_se(std::span<const double>(abs2));
      gs.e_abs_z2 = mean;
      gs.se_abs_z2 = se;
      if (gs.samples < 2) stats.se_defined = false;
    }
    if (gs.z_eligible) {
      // Closed-form sigma^2 from the Gram products (finite only for
      // spiked groups; pairwise form reused with any partner).
      const auto idx = jordan::indexing(config.spec);
      const int k = idx.groups[static_cast<std::size_t>(i)].k[0][0];
      const int l = idx.groups[static_cast<std::size_t>(i)].l[0][0];
      const ComplexMatrix gram_left = config.q.q_inverse() * config.q.q_inverse().adjoint();
      const ComplexMatrix gram_right = config.q.q().adjoint() * config.q.q();
      const double b2 = ring.b * ring.b;
      gs.sigma2_theory = std::norm(group.theta) * b2 / (std::norm(group.theta) - b2) *
                         gram_left(k, k).real() * gram_right(l, l).real();
    }
    stats.groups.push_back(std::move(gs));
  }

  for (int i = 0; i < groups; ++i) {
    for (int j = i + 1; j < groups; ++j) {
      if (!stats.groups[static_cast<std::size_t>(i)].z_eligible ||
          !stats.groups[static_cast<std::size_t>(j)].z_eligible)
        continue;
      PairSummary ps;
      ps.group_a = i;
      ps.group_b = j;
      std::vector<Complex> conj_products, plain_products;
      for (const auto* trial : ordered) {
        if (trial->failed) continue;
        const auto& zi = trial->z_values[static_cast<std::size_t>(i)];
        const auto& zj = trial->z_values[static_cast<std::size_t>(j)];
        if (!zi || !zj) continue;
        conj_products.push_back(*zi * std::conj(*zj));
        plain_products.push_back(*zi * *zj);
      }
      ps.samples = static_cast<int>(conj_products.size());
      std::tie(ps.cross_conj, ps.cross_conj_se) = mean_se(std::span<const Complex>(conj_products));
      std::tie(ps.cross_plain, ps.cross_plain_se) = mean_se(std::span<const Complex>(plain_products));
      ps.cross_theory =
          limitlaw::pairwise_outlier_covariance(config.spec, config.q, ring.b, i, j).cross;
      stats.pairs.push_back(std::move(ps));
    }
  }
  return stats;
}

namespace {

void write_outputs(const ExperimentConfig& config, std::span<const TrialResult> trials,
                   const SummaryStats& stats) {
  if (config.outputs.summary_json) {
    std::ofstream out(*config.outputs.summary_json);
    if (!out) throw std::runtime_error("run_experiment: cannot open summary output");
    out << json_io::to_json(stats).dump(2) << '\n';
  }
  if (config.outputs.trials_csv) {
    std::ofstream out(*config.outputs.trials_csv);
    if (!out) throw std::runtime_error("run_experiment: cannot open trials csv output");
    spectra::write_outlier_csv_header(out, true);
    for (const auto& trial : trials)
      if (!trial.failed) spectra::write_outlier_csv_rows(out, trial.report, trial.index);
  }
  if (config.outputs.svg) {
    std::ofstream out(*config.outputs.svg);
    if (!out) throw std::runtime_error("run_experiment: cannot open svg output");
    std::vector<Complex> cloud;
    for (const auto& trial : trials) {
      if (trial.failed) continue;
      for (const auto& group : trial.report.groups)
        for (const auto& cls : group.classes)
          cloud.insert(cloud.end(), cls.raw.begin(), cls.raw.end());
    }
    std::vector<Complex> thetas;
    for (const auto& group : config.spec.groups()) thetas.push_back(group.theta);
    svg::write_scatter(out, cloud, thetas, stats.ring, stats.epsilon, stats.delta);
  }
}

}  // namespace

SummaryStats run_experiment(const ExperimentConfig& config) {
  const auto trials = run_trials(config);
  const auto stats = summarize(config, trials);
  if (10 * stats.failed > stats.trials)
    throw std::runtime_error("run_experiment: more than 10% of trials failed");
  write_outputs(config, trials, stats);
  return stats;
}

ScalingData scaling_trials(const ExperimentConfig& config, std::span<const int> n_list) {
  require(n_list.size() >= 3, "scaling_study: needs at least three dimensions");
  for (std::size_t i = 1; i < n_list.size(); ++i)
    require(n_list[i] > n_list[i - 1], "scaling_study: n values must be strictly increasing");

  ScalingData data;
  data.n_values.assign(n_list.begin(), n_list.end());
  for (std::size_t ni = 0; ni < n_list.size(); ++ni) {
    ExperimentConfig run = config;
    run.n = n_list[ni];
    run.outputs = {};
    // distinct randomness per dimension
    run.base_seed = SeededStream{config.base_seed, 0x5ca11e}.substream(ni).stream_index;
    data.trials.push_back(run_trials(run));
  }
  return data;
}

ScalingResult scaling_regression(const ExperimentConfig& config, const ScalingData& data) {
  const auto& n_list = data.n_values;
  ScalingResult result;
  result.n_values = n_list;

  // distances[group][class][n-index] = pooled |lambda - theta| values
  const int groups = config.spec.group_count();
  std::vector<std::vector<std::vector<std::vector<double>>>> distances(
      static_cast<std::size_t>(groups));
  for (int i = 0; i < groups; ++i)
    distances[static_cast<std::size_t>(i)].assign(
        config.spec.group(i).blocks.size(),
        std::vector<std::vector<double>>(n_list.size()));

  for (std::size_t ni = 0; ni < n_list.size(); ++ni) {
    int usable = 0;
    for (const auto& trial : data.trials[ni]) {
      if (trial.failed || trial.report.any_mismatch()) continue;
      ++usable;
      for (int i = 0; i < groups; ++i) {
        const auto& rg = trial.report.groups[static_cast<std::size_t>(i)];
        for (std::size_t j = 0; j < rg.classes.size(); ++j)
          for (const Complex& raw : rg.classes[j].raw)
            distances[static_cast<std::size_t>(i)][j][ni].push_back(
                std::abs(raw - config.spec.group(i).theta));
      }
    }
    if (usable == 0)
      throw std::runtime_error("scaling_study: no successful trials at n = " +
                               std::to_string(n_list[ni]));
  }

  for (int i = 0; i < groups; ++i) {
    const auto& group = config.spec.group(i);
    if (!(std::abs(group.theta) > config_ring(config).b)) continue;
    for (std::size_t j = 0; j < group.blocks.size(); ++j) {
      RateClassSlope slope;
      slope.group = i;
      slope.rate_class = static_cast<int>(j) + 1;
      slope.p = group.blocks[j].p;
      std::vector<double> xs, ys;
      for (std::size_t ni = 0; ni < n_list.size(); ++ni) {
        auto& pool = distances[static_cast<std::size_t>(i)][j][ni];
        if (pool.empty())
          throw std::runtime_error("scaling_study: empty rate class at some n");
        slope.medians.push_back(median(pool));
        xs.push_back(std::log(static_cast<double>(n_list[ni])));
        ys.push_back(std::log(slope.medians.back()));
      }
      // ordinary least squares with residual-based slope error
      const auto m = static_cast<double>(xs.size());
      double sx = 0, sy = 0;
      for (std::size_t t = 0; t < xs.size(); ++t) sx += xs[t], sy += ys[t];
      const double mx = sx / m, my = sy / m;
      double sxx = 0, sxy = 0;
      for (std::size_t t = 0; t < xs.size(); ++t) {
        sxx += (xs[t] - mx) * (xs[t] - mx);
        sxy += (xs[t] - mx) * (ys[t] - my);
      }
      slope.slope = sxy / sxx;
      double ss_res = 0;
      for (std::size_t t = 0; t < xs.size(); ++t) {
        const double fit = my + slope.slope * (xs[t] - mx);
        ss_res += (ys[t] - fit) * (ys[t] - fit);
      }
      slope.slope_stderr =
          xs.size() > 2 ? std::sqrt(ss_res / (m - 2.0) / sxx) : std::numeric_limits<double>::quiet_NaN();
      result.classes.push_back(std::move(slope));
    }
  }
  return result;
}

ScalingResult scaling_study(const ExperimentConfig& config, std::span<const int> n_list) {
  return scaling_regression(config, scaling_trials(config, n_list));
}

PolygonStats polygon_stats(std::span<const Complex> points, int p, int beta) {
  require(p >= 1 && beta >= 1, "polygon_stats: p and beta must be positive");
  if (static_cast<int>(points.size()) != p * beta)
    throw std::invalid_argument("polygon_stats: point count must equal beta * p");

  PolygonStats worst;
  for (int chunk = 0; chunk < beta; ++chunk) {
    const auto begin = points.begin() + static_cast<std::ptrdiff_t>(chunk) * p;
    const std::span<const Complex> poly(begin, static_cast<std::size_t>(p));

    std::vector<double> radii, angles;
    std::vector<Complex> powers;
    for (const Complex& z : poly) {
      radii.push_back(std::abs(z));
      angles.push_back(std::arg(z));
      powers.push_back(std::pow(z, p));
    }

    const double med_radius = median(radii);
    const double radial =
        (*std::max_element(radii.begin(), radii.end()) - *std::min_element(radii.begin(), radii.end())) /
        std::max(med_radius, std::numeric_limits<double>::min());

    std::sort(angles.begin(), angles.end());
    double angular = 0;
    for (int s = 0; s < p; ++s) {
      const double gap = s + 1 < p ? angles[static_cast<std::size_t>(s) + 1] - angles[static_cast<std::size_t>(s)]
                                   : angles.front() + 2.0 * kPi - angles.back();
      angular = std::max(angular, std::abs(gap - 2.0 * kPi / p));
    }

    std::vector<double> re, im;
    for (const Complex& w : powers) re.push_back(w.real()), im.push_back(w.imag());
    const Complex med_power{median(re), median(im)};
    double power_spread = 0;
    for (const Complex& w : powers)
      power_spread = std::max(power_spread, std::abs(w - med_power));
    power_spread /= std::max(std::abs(med_power), std::numeric_limits<double>::min());

    worst.radial_spread = std::max(worst.radial_spread, radial);
    worst.angular_deviation = std::max(worst.angular_deviation, angular);
    worst.pth_power_spread = std::max(worst.pth_power_spread, power_spread);
  }
  return worst;
}

}  // namespace ringlab::mc
