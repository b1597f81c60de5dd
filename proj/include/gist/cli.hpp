#pragma once

// Configuration, experiment drivers and file formats behind the `gist` CLI.
//
// Output files (all CSV numbers are printed with 17 significant digits):
//   draws_<c>.csv        header = coordinate names; one row per draw of chain c
//   transitions_<c>.csv  accepted,k_used,k_tilde,k_tilde_star,orbit_len,dh_gap,capped
//   summary.json         run summary (see RunSummary)
//   scaling.csv          d,regime,mean_step,step_of_mean_k,chains
//   scaling.json         rows plus fitted log-log slopes per regime

#include "gist/model.hpp"
#include "gist/sampler.hpp"

#include "json.hpp"

#include <Eigen/Core>

#include <cstdint>
#include <filesystem>
#include <map>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

namespace gist::cli {

/// Raised for invalid user configuration (exit code 1).
class ConfigError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

enum ExitCode : int { kOk = 0, kConfigError = 1, kRuntimeError = 2 };

struct ChainConfig {
  std::string model = "std_normal";
  std::size_t dim = 1;
  SamplerMode mode = SamplerMode::Adaptive;
  double h = 0.5;
  std::int64_t refinement = 1;
  int max_doublings = 10;
  std::optional<double> a_min = 0.7;
  int k_cap = 10;
  std::size_t n_draws = 1000;
  std::size_t n_chains = 1;
  std::uint64_t seed = 1;
  std::string init = "origin";  // "origin" or "exact"
  std::filesystem::path out = "gist_out";

  /// Throws ConfigError.
  void validate() const;
  ChainSettings settings() const;
};

/// Named experiment presets: "funnel-fixed", "funnel-adaptive".
ChainConfig preset(const std::string& name);

/// Applies keys of a JSON object (model, dim, mode, h, R, M, a_min, k_cap,
/// draws, chains, seed, init, out) on top of `config`. Throws ConfigError.
void apply_json(ChainConfig& config, const nlohmann::json& j);

SamplerMode parse_mode(const std::string& text);
std::string to_string(SamplerMode mode);

/// Column names for draws CSVs: funnel -> omega,x1..xd; others -> x1..xd.
std::vector<std::string> coordinate_names(const TargetModel& model);

/// Starting point for chain `chain`: the origin, or an exact draw from the
/// target (std_normal and funnel only) using stream `chain` of the seed.
Vector initial_position(const TargetModel& model, const std::string& init, std::uint64_t seed,
                        std::uint64_t chain);

struct RunSummary {
  std::string model;
  std::size_t dim = 0;
  std::string mode;
  std::size_t n_chains = 0;
  std::size_t n_draws = 0;
  double acceptance_rate = 0.0;
  double mean_k_used = 0.0;
  std::size_t capped_transitions = 0;
  std::map<std::int64_t, std::int64_t> orbit_length_histogram;
  double wall_time_s = 0.0;

  nlohmann::json to_json() const;
  static RunSummary from_json(const nlohmann::json& j);
};

RunSummary summarize(const ChainConfig& config, const std::vector<ChainResult>& chains,
                     double wall_time_s);

/// Runs config.n_chains chains; chain c uses make_chain_rng(seed, c).
std::vector<ChainResult> run_chains(const ChainConfig& config);

/// Runs the chains and writes draws/transitions CSVs and summary.json.
RunSummary cmd_sample(const ChainConfig& config);

struct CsvTable {
  std::vector<std::string> header;
  Eigen::MatrixXd values;
};

void write_draws_csv(const std::filesystem::path& path, const std::vector<std::string>& header,
                     const Eigen::MatrixXd& draws);
CsvTable read_draws_csv(const std::filesystem::path& path);
void write_transitions_csv(const std::filesystem::path& path,
                           const std::vector<TransitionRecord>& records);
RunSummary read_summary(const std::filesystem::path& path);

struct ScalingConfig {
  std::vector<std::size_t> dims{64, 256, 1024, 4096};
  std::size_t n_chains = 200;
  double h = 0.5;
  int max_doublings = 10;
  double a_min = 0.7;
  int k_cap = 10;
  std::uint64_t seed = 1;
  int window = 3;   // transitions averaged per chain
  int burnin = 50;  // used by stationary_init == "burnin"
  std::string stationary_init = "exact";  // "exact" or "burnin"
  std::filesystem::path out;  // empty: no files written

  void validate() const;
};

struct ScalingRow {
  std::size_t dim = 0;
  std::string regime;       // "mode", "stationary" or "burnin"
  double mean_step = 0.0;       // mean over chains and transitions of h 2^-k
  double step_of_mean_k = 0.0;  // h 2^-(mean k)
  std::size_t chains = 0;
};

struct ScalingResult {
  std::vector<ScalingRow> rows;
  std::map<std::string, double> slopes;  // regime -> fitted log-log slope of mean_step

  nlohmann::json to_json() const;
};

/// Least-squares slope of log(y) against log(x); needs two distinct x values.
double log_log_slope(const std::vector<double>& x, const std::vector<double>& y);

ScalingResult cmd_scaling(const ScalingConfig& config);

/// Entry point shared by the executable and tests; returns the exit code.
int run_cli(int argc, char** argv);

}  // namespace gist::cli
