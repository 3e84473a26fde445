#pragma once

#include <cstdint>
#include <filesystem>
#include <functional>
#include <map>
#include <stdexcept>
#include <string>
#include <vector>

#include "json.hpp"
#include "symkit/field.hpp"
#include "symkit/random.hpp"

namespace symkit {

class ConfigError : public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
};

struct LadderRung {
  int dim = 1;
  int n = 0;
  double h = 0.0;
};

struct ChoquardParams {
  int n = 32;
  double half_width = 12.0;
  double step = 0.04;     ///< gradient step in units of h^2
  int rearrange_every = 10;
  int max_steps = 3000;
  double tolerance = 1e-10; ///< stop once an energy cycle changes by less than this
};

struct SuiteConfig {
  std::uint64_t seed = 20261015;
  std::vector<LadderRung> ladder;
  RandomFieldParams fields;
  /// Relative slack per ladder rung for each refinement experiment; the last entry
  /// bounds the finest violation relative to the functional scale.
  std::map<std::string, std::vector<double>> slack;
  std::uint64_t mc_samples = 1'000'000;

  int verify_cases = 200;
  int refine_cases = 4;
  int bll_specs = 10;
  int young_random = 200;
  int hls_random = 50;
  int spectral_pairs = 20;
  int spectral_cells_per_unit = 70;
  int asymmetry_cases = 50;
  int probe_n = 64;
  int probe_steps = 8;
  ChoquardParams choquard;

  std::filesystem::path output_dir = "symkit-reports";
  int jobs = 1;

  static SuiteConfig defaults();
  /// Rungs of one dimension, coarsest first.
  std::vector<LadderRung> ladder_for(int d) const;
  /// Slack schedule for `id`, falling back to the "default" entry.
  std::vector<double> slack_for(const std::string &id) const;
  /// Throws ConfigError.
  void validate() const;
};

/// Reads a `symkit-config 1` document; absent keys keep their defaults.
SuiteConfig parse_config(const nlohmann::json &doc);
SuiteConfig load_config(const std::filesystem::path &path);
nlohmann::ordered_json to_json(const SuiteConfig &config);

enum class Verdict { Pass, Fail, TrendPass };
std::string to_string(Verdict v);

struct ExperimentReport {
  std::string id;
  std::string digest; ///< hash of the config and experiment id
  Verdict verdict = Verdict::Fail;
  double value = 0.0;     ///< headline number compared against `tolerance`
  double tolerance = 0.0;
  nlohmann::ordered_json data = nlohmann::ordered_json::object();
  std::vector<std::string> warnings;
  double wall_seconds = 0.0;

  bool ok() const { return verdict != Verdict::Fail; }
};

nlohmann::ordered_json to_json(const ExperimentReport &report, bool include_time = true);
/// id, verdict, value, tolerance
std::string csv_summary(const std::vector<ExperimentReport> &reports);
/// One JSON document per report plus summary.csv.
void write_reports(const std::vector<ExperimentReport> &reports, const std::filesystem::path &dir);

/// Violation series along a ladder and the contract verdict derived from it.
struct RefinementTrend {
  std::vector<double> h;
  std::vector<double> violation; ///< max(0, wrong-direction gap), absolute
  std::vector<double> factors;   ///< violation[k+1] / violation[k]; 0 when both vanish
  double scale = 0.0;
  double final_threshold = 0.0;
  bool contracting = false;
  bool final_ok = false;

  bool ok() const { return contracting && final_ok; }
};

/// factor limit 0.7 per halving; final violation <= final_relative * scale.
RefinementTrend assess_refinement(std::vector<double> h, std::vector<double> violation,
                                  double scale, double final_relative, double factor_limit = 0.7);
nlohmann::ordered_json to_json(const RefinementTrend &t);

/// Test hook: replaces rearrange() inside the exact suite.
struct VerifyHooks {
  std::function<ScalarField(const ScalarField &)> rearrange;
};

std::vector<ExperimentReport> run_verify(const SuiteConfig &config, const VerifyHooks &hooks = {});

/// Ids accepted by run_refine besides "all".
const std::vector<std::string> &refine_ids();
std::vector<ExperimentReport> run_refine(const SuiteConfig &config, const std::string &id);

std::vector<ExperimentReport> run_spectral(const SuiteConfig &config);
std::vector<ExperimentReport> run_stability(const SuiteConfig &config);

struct ChoquardTrace {
  std::vector<double> energy;      ///< after every step
  std::vector<double> checkpoints; ///< after every rearrangement
  std::vector<double> rearrange_jumps; ///< energy change caused by each rearrangement
  ScalarField profile;
  int steps = 0;
  bool diverged = false;
};

/// Projected gradient descent on ||grad u||^2 - D(u^2, u^2) on the unit L^2 sphere of
/// nonnegative fields, rearranging every `rearrange_every` steps and after the last step.
ChoquardTrace choquard_descent(const ScalarField &start, const ChoquardParams &params);
ExperimentReport run_choquard(const SuiteConfig &config);

std::vector<ExperimentReport> run_probe_continuity(const SuiteConfig &config);

/// Asymmetry by exhaustive search over every whole-cell shift.
double asymmetry_brute_force(const ScalarField &rho);

} // namespace symkit
