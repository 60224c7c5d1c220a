#include "commands.hpp"

#include <CLI11.hpp>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>

#include "ringlab/json_io.hpp"
#include "ringlab/limitlaw.hpp"
#include "ringlab/mc.hpp"
#include "ringlab/randmat.hpp"
#include "ringlab/svg.hpp"
#include "ringlab/weingarten.hpp"

namespace ringlab::cli {
namespace {

namespace fs = std::filesystem;

std::vector<double> parse_double_list(const std::string& text) {
  std::vector<double> out;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) out.push_back(std::stod(item));
  return out;
}

std::vector<int> parse_int_list(const std::string& text) {
  std::vector<int> out;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) out.push_back(std::stoi(item));
  return out;
}

/// Mini-grammar kind:params, e.g. uniform:0.5,4  point_mass:2
/// quarter_circle  explicit:1,2,3
profiles::SingularProfile parse_profile(const std::string& text) {
  const auto colon = text.find(':');
  const std::string kind = text.substr(0, colon);
  const std::string args = colon == std::string::npos ? "" : text.substr(colon + 1);
  profiles::SingularProfile profile;
  if (kind == "uniform") {
    const auto values = parse_double_list(args);
    if (values.size() != 2) throw CLI::ValidationError("--profile", "uniform needs lo,hi");
    profile = profiles::Uniform{values[0], values[1]};
  } else if (kind == "quarter_circle") {
    profile = profiles::QuarterCircle{};
  } else if (kind == "point_mass") {
    const auto values = parse_double_list(args);
    if (values.size() != 1) throw CLI::ValidationError("--profile", "point_mass needs c");
    profile = profiles::PointMass{values[0]};
  } else if (kind == "explicit") {
    profile = profiles::ExplicitList{parse_double_list(args)};
  } else {
    throw CLI::ValidationError("--profile", "unknown profile kind: " + kind);
  }
  profiles::validate(profile);
  return profile;
}

nlohmann::json load_json(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open " + path);
  nlohmann::json j;
  in >> j;
  return j;
}

jordan::JordanSpec load_spec(const std::string& path) {
  return json_io::spec_from_json(load_json(path));
}

jordan::BasisSpec load_basis(const std::string& arg, int r) {
  if (arg.empty() || arg == "identity") return jordan::BasisSpec::identity(r);
  return json_io::basis_from_json(load_json(arg), r);
}

std::string fmt_complex(Complex z) {
  char buffer[80];
  std::snprintf(buffer, sizeof(buffer), "%.6f%+.6fi", z.real(), z.imag());
  return buffer;
}

void print_summary(const mc::SummaryStats& stats) {
  std::printf("n = %d, trials = %d (failed %d, mismatched %d)\n", stats.n, stats.trials,
              stats.failed, stats.mismatched);
  std::printf("ring: a = %.6f, b = %.6f, epsilon = %.6f, delta = %.6f\n", stats.ring.a,
              stats.ring.b, stats.epsilon, stats.delta);
  std::printf("expected outer = %d, count success rate = %.4f, inner violation rate = %.4f\n",
              stats.expected_outer, stats.count_success_rate, stats.inner_violation_rate);
  for (std::size_t i = 0; i < stats.groups.size(); ++i) {
    const auto& g = stats.groups[i];
    if (!g.z_eligible) continue;
    std::printf("group %zu theta=%s: E|Z|^2 = %.6f (SE %.6f, %d samples)", i,
                fmt_complex(g.theta).c_str(), g.e_abs_z2, g.se_abs_z2, g.samples);
    if (g.sigma2_theory) std::printf(", sigma^2 theory = %.6f", *g.sigma2_theory);
    std::printf("\n");
  }
  for (const auto& p : stats.pairs) {
    std::printf("pair (%d,%d): E[Z conj(Z')] = %s (SE %.6f), E[ZZ'] = %s (SE %.6f)",
                p.group_a, p.group_b, fmt_complex(p.cross_conj).c_str(), p.cross_conj_se,
                fmt_complex(p.cross_plain).c_str(), p.cross_plain_se);
    if (p.cross_theory) std::printf(", theory = %s", fmt_complex(*p.cross_theory).c_str());
    std::printf("\n");
  }
}

struct CommonModel {
  std::string profile_text;
  bool ginibre = false;
  std::string spec_path;
  std::string basis_arg = "identity";

  void add_options(CLI::App* cmd, bool spec_required) {
    cmd->add_option("--profile", profile_text, "singular profile, kind:params");
    cmd->add_flag("--ginibre", ginibre, "A is a renormalized Ginibre matrix");
    auto* spec = cmd->add_option("--spec", spec_path, "Jordan data JSON file");
    if (spec_required) spec->required();
    cmd->add_option("--q", basis_arg, "basis JSON file or 'identity'");
  }
};

int run_ring(const std::string& profile_text) {
  const auto profile = parse_profile(profile_text);
  const auto ring = profiles::ring_radii(profile);
  std::printf("a = %.8f\n", ring.a);
  std::printf("b = %.8f\n", ring.b);
  std::printf("second_moment = %.8f\n", profiles::second_moment(profile));
  return 0;
}

int run_simulate(const CommonModel& model, int n, std::uint64_t seed,
                 std::optional<double> epsilon, std::optional<double> delta,
                 const std::string& out_dir, const std::string& svg_path) {
  auto spec = load_spec(model.spec_path);
  auto basis = load_basis(model.basis_arg, spec.r());
  mc::ExperimentConfig config{
      .profile = model.ginibre ? std::nullopt
                               : std::make_optional(parse_profile(model.profile_text)),
      .form = randmat::Form::UT,
      .spec = std::move(spec),
      .q = std::move(basis),
      .n = n,
      .trials = 1,
      .base_seed = seed,
      .epsilon = epsilon,
      .delta = delta,
      .outputs = {},
      .jobs = 1,
  };
  const auto artifacts = mc::run_trial_full(config, 0);
  if (artifacts.trial.failed) {
    std::fprintf(stderr, "simulate: eigensolver failed\n");
    return 2;
  }

  fs::create_directories(out_dir);
  {
    std::ofstream out(out_dir + "/spectrum.csv");
    out.precision(17);
    out << "re,im\n";
    for (const Complex& z : artifacts.spectrum) out << z.real() << ',' << z.imag() << '\n';
  }
  {
    std::ofstream out(out_dir + "/outliers.csv");
    spectra::write_outlier_csv_header(out, false);
    spectra::write_outlier_csv_rows(out, artifacts.trial.report);
  }
  if (!svg_path.empty()) {
    const auto ring = mc::config_ring(config);
    const double eps = epsilon.value_or(spectra::default_epsilon(config.spec, ring));
    const double del = delta.value_or(spectra::default_delta(ring));
    std::vector<Complex> thetas;
    for (const auto& group : config.spec.groups()) thetas.push_back(group.theta);
    std::ofstream out(svg_path);
    svg::write_scatter(out, artifacts.spectrum, thetas, ring, eps, del);
  }

  int inner = static_cast<int>(artifacts.trial.report.inner_violations.size());
  std::printf("matched outer = %d, inner violations = %d, mismatch = %s\n",
              artifacts.trial.report.matched_count(), inner,
              artifacts.trial.report.any_mismatch() ? "yes" : "no");
  return 0;
}

int run_limit_sample(const CommonModel& model, std::optional<double> b_opt, int draws,
                     std::uint64_t seed, const std::string& out_path) {
  auto spec = load_spec(model.spec_path);
  auto basis = load_basis(model.basis_arg, spec.r());
  double b = 0;
  if (b_opt)
    b = *b_opt;
  else if (model.ginibre)
    b = 1.0;
  else if (!model.profile_text.empty())
    b = profiles::ring_radii(parse_profile(model.profile_text)).b;
  else
    throw CLI::ValidationError("limit-sample", "need --b, --profile or --ginibre to fix b");

  std::ofstream file;
  std::ostream* out = &std::cout;
  if (!out_path.empty()) {
    file.open(out_path);
    if (!file) throw std::runtime_error("cannot open " + out_path);
    out = &file;
  }
  *out << "group_index,theta_re,theta_im,rate_class,p,lambda_re,lambda_im,rescaled_re,rescaled_im\n";
  for (int d = 0; d < draws; ++d) {
    const auto constellation =
        limitlaw::sample_constellation(spec, basis, b, SeededStream{seed, static_cast<std::uint64_t>(d)});
    limitlaw::write_constellation_csv_rows(*out, constellation);
  }
  return 0;
}

int run_experiment_cmd(const std::string& config_path, int jobs) {
  auto config = json_io::config_from_json(load_json(config_path));
  if (jobs > 0) config.jobs = jobs;
  const auto stats = mc::run_experiment(config);
  print_summary(stats);
  return 0;
}

int run_scaling(const std::string& config_path, const std::string& n_list_text, int jobs,
                const std::string& out_path) {
  auto config = json_io::config_from_json(load_json(config_path));
  if (jobs > 0) config.jobs = jobs;
  const auto n_list = parse_int_list(n_list_text);
  const auto result = mc::scaling_study(config, n_list);
  for (const auto& cls : result.classes)
    std::printf("group %d class %d (p=%d): slope = %.4f (stderr %.4f, expected %.4f)\n",
                cls.group, cls.rate_class, cls.p, cls.slope, cls.slope_stderr,
                -1.0 / (2.0 * cls.p));
  if (!out_path.empty()) {
    std::ofstream out(out_path);
    out << json_io::to_json(result).dump(2) << '\n';
  }
  return 0;
}

std::string cycle_type_label(const std::vector<int>& type) {
  std::string label = "[";
  for (std::size_t i = 0; i < type.size(); ++i) {
    if (i) label += ',';
    label += std::to_string(type[i]);
  }
  return label + "]";
}

int run_weingarten(int k, long n, const std::string& moment_text) {
  const auto& table = weingarten::table(k, n);
  std::printf("Weingarten function, k = %d, n = %ld\n", k, n);
  for (const auto& [type, value] : table.values)
    std::printf("Wg%s = %s\n", cycle_type_label(type).c_str(), value.get_str().c_str());
  if (!moment_text.empty()) {
    // rows/cols/rows'/cols' as four comma lists, 1-based
    std::vector<std::vector<int>> parts;
    std::stringstream ss(moment_text);
    std::string part;
    while (std::getline(ss, part, '/')) parts.push_back(parse_int_list(part));
    if (parts.size() != 4)
      throw CLI::ValidationError("--moment", "expected rows/cols/rows'/cols'");
    for (auto& tuple : parts)
      for (int& v : tuple) --v;
    const auto value = weingarten::unitary_moment(parts[0], parts[1], parts[2], parts[3], n);
    std::printf("moment = %s\n", value.get_str().c_str());
  }
  return 0;
}

int run_table1(double kappa, int n, int trials, std::uint64_t seed, const std::string& out_dir,
               int jobs) {
  const Complex theta{1.5, 1.0}, theta_prime{3.0, 1.0};
  ComplexMatrix q(2, 2);
  q << 1.0, kappa, kappa, 1.0;
  mc::ExperimentConfig config{
      .profile = std::nullopt,  // renormalized Ginibre, b = 1
      .form = randmat::Form::UT,
      .spec = jordan::JordanSpec({{theta, {{1, 1}}}, {theta_prime, {{1, 1}}}}),
      .q = jordan::BasisSpec(std::move(q)),
      .n = n,
      .trials = trials,
      .base_seed = seed,
      .epsilon = std::nullopt,
      .delta = std::nullopt,
      .outputs = {},
      .jobs = jobs,
  };
  const auto stats = mc::run_experiment(config);
  const auto theory = limitlaw::pairwise_outlier_covariance(config.spec, config.q, 1.0, 0, 1);

  nlohmann::json summary{
      {"config", {{"kappa", kappa}, {"n", n}, {"trials", trials}, {"seed", seed}}},
      {"theoretical",
       {{"E_abs_Z2", theory.sigma2},
        {"E_abs_Zprime2", theory.sigma2_prime},
        {"E_Z_conj_Zprime", {theory.cross.real(), theory.cross.imag()}},
        {"E_Z_Zprime", {0.0, 0.0}}}},
      {"empirical", json_io::to_json(stats)}};
  if (!out_dir.empty()) {
    fs::create_directories(out_dir);
    std::ofstream out(out_dir + "/table1_summary.json");
    out << summary.dump(2) << '\n';
  }

  std::printf("%-12s %12s %12s %24s\n", "", "E|Z|^2", "E|Z'|^2", "E[Z conj(Z')]");
  std::printf("%-12s %12.4f %12.4f %24s\n", "theoretical", theory.sigma2, theory.sigma2_prime,
              fmt_complex(theory.cross).c_str());
  std::printf("%-12s %12.4f %12.4f %24s\n", "empirical", stats.groups[0].e_abs_z2,
              stats.groups[1].e_abs_z2, fmt_complex(stats.pairs[0].cross_conj).c_str());
  return 0;
}

}  // namespace

int dispatch(int argc, char** argv) {
  CLI::App app{"ringlab: spiked isotropic random matrices, their outliers, and the limit laws"};
  app.require_subcommand(1);

  // ring
  auto* ring_cmd = app.add_subcommand("ring", "print the annulus radii of a profile");
  std::string ring_profile;
  ring_cmd->add_option("--profile", ring_profile, "singular profile, kind:params")->required();
  std::uint64_t ring_seed = 1;
  ring_cmd->add_option("--seed", ring_seed, "unused; accepted for uniformity");

  // simulate
  auto* sim_cmd = app.add_subcommand("simulate", "run one trial and dump spectrum + outlier report");
  CommonModel sim_model;
  sim_model.add_options(sim_cmd, true);
  int sim_n = 400;
  std::uint64_t sim_seed = 1;
  double sim_eps = -1, sim_delta = -1;
  std::string sim_out = ".", sim_svg;
  sim_cmd->add_option("--n", sim_n, "matrix dimension")->required();
  sim_cmd->add_option("--seed", sim_seed, "base seed");
  sim_cmd->add_option("--epsilon", sim_eps, "classification margin (default: derived)");
  sim_cmd->add_option("--delta", sim_delta, "inner margin (default: derived)");
  sim_cmd->add_option("--out-dir", sim_out, "output directory");
  sim_cmd->add_option("--svg", sim_svg, "also write a spectrum scatter SVG");

  // limit-sample
  auto* limit_cmd = app.add_subcommand("limit-sample", "draw limit constellations");
  CommonModel limit_model;
  limit_model.add_options(limit_cmd, true);
  double limit_b = -1;
  int limit_draws = 1;
  std::uint64_t limit_seed = 1;
  std::string limit_out;
  limit_cmd->add_option("--b", limit_b, "outer radius (default: from profile)");
  limit_cmd->add_option("--draws", limit_draws, "number of joint draws");
  limit_cmd->add_option("--seed", limit_seed, "base seed");
  limit_cmd->add_option("--out", limit_out, "CSV output path (stdout if omitted)");

  // experiment
  auto* exp_cmd = app.add_subcommand("experiment", "run an experiment config file");
  std::string exp_config;
  int exp_jobs = 0;
  std::uint64_t exp_seed = 0;
  bool exp_seed_set = false;
  exp_cmd->add_option("--config", exp_config, "experiment JSON config")->required();
  exp_cmd->add_option("--jobs", exp_jobs, "worker threads (RING_JOBS overrides)");
  exp_cmd->add_option("--seed", exp_seed, "override the config base seed")
      ->each([&](const std::string&) { exp_seed_set = true; });

  // scaling
  auto* scale_cmd = app.add_subcommand("scaling", "rate-exponent regression over several n");
  std::string scale_config, scale_nlist, scale_out;
  int scale_jobs = 0;
  scale_cmd->add_option("--config", scale_config, "experiment JSON config")->required();
  scale_cmd->add_option("--n-list", scale_nlist, "comma-separated dimensions")->required();
  scale_cmd->add_option("--jobs", scale_jobs, "worker threads");
  scale_cmd->add_option("--out", scale_out, "JSON output path");

  // weingarten
  auto* wg_cmd = app.add_subcommand("weingarten", "print exact Weingarten tables and moments");
  int wg_k = 2;
  long wg_n = 5;
  std::string wg_moment;
  std::uint64_t wg_seed = 1;
  wg_cmd->add_option("--k", wg_k, "moment order")->required();
  wg_cmd->add_option("--n", wg_n, "unitary group dimension")->required();
  wg_cmd->add_option("--moment", wg_moment, "rows/cols/rows'/cols' (1-based comma lists)");
  wg_cmd->add_option("--seed", wg_seed, "unused; accepted for uniformity");

  // table1
  auto* t1_cmd = app.add_subcommand("table1", "two-spike Ginibre correlation experiment");
  double t1_kappa = 0.0;
  int t1_n = 500, t1_trials = 200, t1_jobs = 0;
  std::uint64_t t1_seed = 1;
  std::string t1_out;
  t1_cmd->add_option("--kappa", t1_kappa, "basis coupling parameter (|kappa| != 1)")->required();
  t1_cmd->add_option("--n", t1_n, "matrix dimension");
  t1_cmd->add_option("--trials", t1_trials, "number of trials");
  t1_cmd->add_option("--seed", t1_seed, "base seed");
  t1_cmd->add_option("--out-dir", t1_out, "where to write table1_summary.json");
  t1_cmd->add_option("--jobs", t1_jobs, "worker threads");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return 1;
  }

  try {
    if (ring_cmd->parsed()) return run_ring(ring_profile);
    if (sim_cmd->parsed())
      return run_simulate(sim_model, sim_n, sim_seed,
                          sim_eps > 0 ? std::make_optional(sim_eps) : std::nullopt,
                          sim_delta > 0 ? std::make_optional(sim_delta) : std::nullopt, sim_out,
                          sim_svg);
    if (limit_cmd->parsed())
      return run_limit_sample(limit_model, limit_b > 0 ? std::make_optional(limit_b) : std::nullopt,
                              limit_draws, limit_seed, limit_out);
    if (exp_cmd->parsed()) {
      if (!exp_seed_set) return run_experiment_cmd(exp_config, exp_jobs);
      auto config = json_io::config_from_json(load_json(exp_config));
      config.base_seed = exp_seed;
      if (exp_jobs > 0) config.jobs = exp_jobs;
      print_summary(mc::run_experiment(config));
      return 0;
    }
    if (scale_cmd->parsed()) return run_scaling(scale_config, scale_nlist, scale_jobs, scale_out);
    if (wg_cmd->parsed()) return run_weingarten(wg_k, wg_n, wg_moment);
    if (t1_cmd->parsed()) return run_table1(t1_kappa, t1_n, t1_trials, t1_seed, t1_out, t1_jobs);
  } catch (const CLI::ValidationError& e) {
    std::fprintf(stderr, "%s\n", e.what());
    return 1;
  } catch (const std::exception& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return 2;
  }
  return 1;
}

}  // namespace ringlab::cli
