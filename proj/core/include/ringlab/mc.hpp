#pragma once

#include <optional>
#include <span>
#include <string>
#include <vector>

#include "ringlab/jordan.hpp"
#include "ringlab/profiles.hpp"
#include "ringlab/randmat.hpp"
#include "ringlab/spectra.hpp"
#include "ringlab/types.hpp"

namespace ringlab::mc {

struct OutputPaths {
  std::optional<std::string> summary_json;
  std::optional<std::string> trials_csv;
  std::optional<std::string> svg;
};

struct ExperimentConfig {
  /// Singular-value profile of T; empty means A is a renormalized Ginibre
  /// matrix (sampled directly, b = 1).
  std::optional<profiles::SingularProfile> profile;
  randmat::Form form = randmat::Form::UT;
  jordan::JordanSpec spec;
  jordan::BasisSpec q;
  int n = 0;
  int trials = 1;
  std::uint64_t base_seed = 0;
  std::optional<double> epsilon;  // default: spectra::default_epsilon
  std::optional<double> delta;    // default: spectra::default_delta
  OutputPaths outputs;
  int jobs = 0;  // 0: auto; RING_JOBS env overrides either way
};

/// Ring geometry the experiment classifies against (b = 1, a = 0 for the
/// Ginibre model).
profiles::RingGeometry config_ring(const ExperimentConfig& config);

struct TrialResult {
  int index = 0;
  bool failed = false;  // eigensolver gave up; excluded from stats, counted
  spectra::OutlierReport report;
  /// Z = sqrt(n) (lambda - theta)^p per group whose leading rate class has
  /// multiplicity one; absent on matching mismatch or ineligible group.
  std::vector<std::optional<Complex>> z_values;
};

/// Deterministic function of (config, trial_index): all randomness comes
/// from the stream (base_seed, trial_index).
TrialResult run_trial(const ExperimentConfig& config, int trial_index);

/// run_trial plus the full spectrum, for spectrum dumps and plots.
struct TrialArtifacts {
  TrialResult trial;
  std::vector<Complex> spectrum;  // empty when the trial failed
};
TrialArtifacts run_trial_full(const ExperimentConfig& config, int trial_index);

/// All trials, parallelized over resolve_jobs(config.jobs) workers;
/// results are identical whatever the execution order.
std::vector<TrialResult> run_trials(const ExperimentConfig& config);

struct GroupSummary {
  Complex theta;
  bool z_eligible = false;
  int samples = 0;
  double e_abs_z2 = 0;
  double se_abs_z2 = 0;
  std::optional<double> sigma2_theory;
};

struct PairSummary {
  int group_a = 0;
  int group_b = 0;
  int samples = 0;
  Complex cross_conj;        // empirical E[Z conj(Z')]
  double cross_conj_se = 0;
  Complex cross_plain;       // empirical E[Z Z'] (should vanish)
  double cross_plain_se = 0;
  std::optional<Complex> cross_theory;
};

struct SummaryStats {
  int n = 0;
  int trials = 0;
  int failed = 0;
  int mismatched = 0;
  int expected_outer = 0;
  double count_success_rate = 0;    // outer count exact and no mismatch
  double inner_violation_rate = 0;
  double epsilon = 0;
  double delta = 0;
  profiles::RingGeometry ring;
  std::vector<GroupSummary> groups;
  std::vector<PairSummary> pairs;
  bool se_defined = true;  // false (flagged) when only one usable trial
};

/// Commutative fold over trials sorted by index; parallel execution order
/// cannot change the result.
SummaryStats summarize(const ExperimentConfig& config, std::span<const TrialResult> trials);

/// run_trials + summarize + configured outputs.  Throws when more than
/// 10% of trials fail.
SummaryStats run_experiment(const ExperimentConfig& config);

struct RateClassSlope {
  int group = 0;
  int rate_class = 0;  // 1-based
  int p = 0;
  /// Least-squares slope of log(median |lambda - theta|) against log n;
  /// the expected value is -1/(2p).
  double slope = 0;
  double slope_stderr = 0;
  std::vector<double> medians;  // one per n, matching n_values order
};

struct ScalingResult {
  std::vector<int> n_values;
  std::vector<RateClassSlope> classes;
};

/// The raw material of a scaling study: config.trials trials at every n in
/// n_list, each n under a derived base seed.
struct ScalingData {
  std::vector<int> n_values;
  std::vector<std::vector<TrialResult>> trials;  // [n index][trial]
};

ScalingData scaling_trials(const ExperimentConfig& config, std::span<const int> n_list);

/// Median-distance regression over already-computed scaling data.
ScalingResult scaling_regression(const ExperimentConfig& config, const ScalingData& data);

/// scaling_trials followed by scaling_regression.
ScalingResult scaling_study(const ExperimentConfig& config, std::span<const int> n_list);

struct PolygonStats {
  double radial_spread = 0;       // (max - min) / median of |z|
  double angular_deviation = 0;   // max |sorted angle gap - 2 pi / p|
  double pth_power_spread = 0;    // relative spread of z^p around the median
};

/// For beta = 1 the three statistics above; for beta > 1 the points must
/// arrive eigenvalue-major (constellation order) and the worst chunk is
/// reported.  Throws on count != beta * p.
PolygonStats polygon_stats(std::span<const Complex> points, int p, int beta = 1);

}  // namespace ringlab::mc
