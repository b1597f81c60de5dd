#include "gist/cli.hpp"

#include "CLI11.hpp"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <exception>
#include <iostream>
#include <mutex>
#include <numeric>
#include <random>
#include <sstream>
#include <thread>

namespace gist::cli {

namespace {

// Initial positions draw from a stream disjoint from every chain stream.
constexpr std::uint64_t kInitStreamTag = std::uint64_t{1} << 63;

std::string format_double(double x) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.17g", x);
  return buf;
}

// Runs body(i) for i in [0, n) on up to hardware_concurrency threads.
template <typename Body>
void parallel_for(std::size_t n, Body&& body) {
  const std::size_t workers =
      std::min<std::size_t>(n, std::max(1u, std::thread::hardware_concurrency()));
  if (workers <= 1) {
    for (std::size_t i = 0; i < n; ++i) body(i);
    return;
  }
  std::atomic<std::size_t> next{0};
  std::exception_ptr error;
  std::mutex error_mutex;
  std::vector<std::thread> pool;
  pool.reserve(workers);
  for (std::size_t w = 0; w < workers; ++w) {
    pool.emplace_back([&] {
      for (std::size_t i = next++; i < n; i = next++) {
        try {
          body(i);
        } catch (...) {
          const std::lock_guard lock(error_mutex);
          if (!error) error = std::current_exception();
        }
      }
    });
  }
  for (auto& t : pool) t.join();
  if (error) std::rethrow_exception(error);
}

std::vector<std::size_t> parse_dims(const std::string& text) {
  std::vector<std::size_t> dims;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) {
    if (item.empty()) continue;
    try {
      std::size_t used = 0;
      const auto value = std::stoull(item, &used);
      if (used != item.size()) throw std::invalid_argument(item);
      dims.push_back(static_cast<std::size_t>(value));
    } catch (const std::exception&) {
      throw ConfigError("invalid dimension list entry '" + item + "'");
    }
  }
  return dims;
}

std::ofstream open_output(const std::filesystem::path& path) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot open '" + path.string() + "' for writing");
  return out;
}

}  // namespace

SamplerMode parse_mode(const std::string& text) {
  if (text == "fixed") return SamplerMode::Fixed;
  if (text == "adaptive") return SamplerMode::Adaptive;
  throw ConfigError("mode must be 'fixed' or 'adaptive', got '" + text + "'");
}

std::string to_string(SamplerMode mode) {
  return mode == SamplerMode::Fixed ? "fixed" : "adaptive";
}

void ChainConfig::validate() const {
  if (model != "funnel" && model != "std_normal") throw ConfigError("unknown model '" + model + "'");
  if (dim < 1) throw ConfigError("dim must be >= 1");
  if (!(h > 0.0) || !std::isfinite(h)) throw ConfigError("h must be positive");
  if (max_doublings < 0 || max_doublings > 30) throw ConfigError("M must be in [0, 30]");
  if (n_draws < 1) throw ConfigError("draws must be >= 1");
  if (n_chains < 1) throw ConfigError("chains must be >= 1");
  if (init != "origin" && init != "exact") throw ConfigError("init must be 'origin' or 'exact'");
  if (mode == SamplerMode::Adaptive) {
    if (!a_min) throw ConfigError("adaptive mode requires a_min");
    if (!(*a_min > 0.0 && *a_min < 1.0)) throw ConfigError("a_min must be in (0, 1)");
    if (k_cap < 1 || k_cap > 30) throw ConfigError("k_cap must be in [1, 30]");
  } else if (refinement < 1) {
    throw ConfigError("fixed mode requires R >= 1");
  }
}

ChainSettings ChainConfig::settings() const {
  ChainSettings s;
  s.mode = mode;
  s.h = h;
  s.refinement = refinement;
  s.max_doublings = max_doublings;
  s.a_min = a_min.value_or(0.7);
  s.k_cap = k_cap;
  return s;
}

ChainConfig preset(const std::string& name) {
  ChainConfig c;
  c.model = "funnel";
  c.dim = 10;
  c.max_doublings = 10;
  c.n_draws = 250000;
  if (name == "funnel-fixed") {
    c.mode = SamplerMode::Fixed;
    c.h = 0.25;
    c.refinement = 1;
    c.a_min.reset();
    return c;
  }
  if (name == "funnel-adaptive") {
    c.mode = SamplerMode::Adaptive;
    c.h = 0.5;
    c.a_min = 0.7;
    return c;
  }
  throw ConfigError("unknown preset '" + name + "'");
}

void apply_json(ChainConfig& c, const nlohmann::json& j) {
  if (!j.is_object()) throw ConfigError("config file must hold a JSON object");
  try {
    for (const auto& [key, value] : j.items()) {
      if (key == "preset") c = preset(value.get<std::string>());
    }
    for (const auto& [key, value] : j.items()) {
      if (key == "preset") continue;
      if (key == "model") c.model = value.get<std::string>();
      else if (key == "dim") c.dim = value.get<std::size_t>();
      else if (key == "mode") c.mode = parse_mode(value.get<std::string>());
      else if (key == "h") c.h = value.get<double>();
      else if (key == "R") c.refinement = value.get<std::int64_t>();
      else if (key == "M") c.max_doublings = value.get<int>();
      else if (key == "a_min") c.a_min = value.is_null() ? std::nullopt : std::optional(value.get<double>());
      else if (key == "k_cap") c.k_cap = value.get<int>();
      else if (key == "draws") c.n_draws = value.get<std::size_t>();
      else if (key == "chains") c.n_chains = value.get<std::size_t>();
      else if (key == "seed") c.seed = value.get<std::uint64_t>();
      else if (key == "init") c.init = value.get<std::string>();
      else if (key == "out") c.out = value.get<std::string>();
      else throw ConfigError("unknown config key '" + key + "'");
    }
  } catch (const nlohmann::json::exception& e) {
    throw ConfigError(std::string("bad config value: ") + e.what());
  }
}

std::vector<std::string> coordinate_names(const TargetModel& model) {
  std::vector<std::string> names;
  const bool funnel = model.name() == "funnel";
  if (funnel) names.emplace_back("omega");
  const std::size_t n = funnel ? model.dim() - 1 : model.dim();
  for (std::size_t i = 1; i <= n; ++i) names.push_back("x" + std::to_string(i));
  return names;
}

Vector initial_position(const TargetModel& model, const std::string& init, std::uint64_t seed,
                        std::uint64_t chain) {
  const auto d = static_cast<Eigen::Index>(model.dim());
  if (init == "origin") return Vector::Zero(d);
  if (init != "exact") throw ConfigError("init must be 'origin' or 'exact'");
  auto rng = make_chain_rng(seed, chain | kInitStreamTag);
  std::normal_distribution<double> normal(0.0, 1.0);
  Vector theta(d);
  if (model.name() == "std_normal") {
    for (Eigen::Index i = 0; i < d; ++i) theta[i] = normal(rng);
  } else if (model.name() == "funnel") {
    theta[0] = 3.0 * normal(rng);
    const double scale = std::exp(theta[0] / 2.0);
    for (Eigen::Index i = 1; i < d; ++i) theta[i] = scale * normal(rng);
  } else {
    throw ConfigError("exact initialization is not available for model '" + model.name() + "'");
  }
  return theta;
}

std::vector<ChainResult> run_chains(const ChainConfig& config) {
  config.validate();
  const auto model = make_model(config.model, config.dim);
  const auto settings = config.settings();
  std::vector<ChainResult> chains(config.n_chains);
  parallel_for(config.n_chains, [&](std::size_t c) {
    auto rng = make_chain_rng(config.seed, c);
    const auto start = initial_position(*model, config.init, config.seed, c);
    chains[c] = run_chain(*model, settings, config.n_draws, start, rng);
  });
  return chains;
}

nlohmann::json RunSummary::to_json() const {
  nlohmann::json hist = nlohmann::json::object();
  for (const auto& [len, count] : orbit_length_histogram) hist[std::to_string(len)] = count;
  return {{"model", model},
          {"dim", dim},
          {"mode", mode},
          {"chains", n_chains},
          {"draws", n_draws},
          {"acceptance_rate", acceptance_rate},
          {"mean_k_used", mean_k_used},
          {"capped_transitions", capped_transitions},
          {"orbit_length_histogram", hist},
          {"wall_time_s", wall_time_s}};
}

RunSummary RunSummary::from_json(const nlohmann::json& j) {
  RunSummary s;
  s.model = j.at("model").get<std::string>();
  s.dim = j.at("dim").get<std::size_t>();
  s.mode = j.at("mode").get<std::string>();
  s.n_chains = j.at("chains").get<std::size_t>();
  s.n_draws = j.at("draws").get<std::size_t>();
  s.acceptance_rate = j.at("acceptance_rate").get<double>();
  s.mean_k_used = j.at("mean_k_used").get<double>();
  s.capped_transitions = j.at("capped_transitions").get<std::size_t>();
  for (const auto& [len, count] : j.at("orbit_length_histogram").items()) {
    s.orbit_length_histogram[std::stoll(len)] = count.get<std::int64_t>();
  }
  s.wall_time_s = j.at("wall_time_s").get<double>();
  return s;
}

RunSummary summarize(const ChainConfig& config, const std::vector<ChainResult>& chains,
                     double wall_time_s) {
  RunSummary s;
  s.model = config.model;
  s.dim = config.dim;
  s.mode = to_string(config.mode);
  s.n_chains = chains.size();
  s.n_draws = config.n_draws;
  s.wall_time_s = wall_time_s;
  std::size_t total = 0;
  std::size_t accepted = 0;
  double k_sum = 0.0;
  for (const auto& chain : chains) {
    for (const auto& r : chain.records) {
      ++total;
      accepted += r.accepted ? 1 : 0;
      k_sum += r.k_used;
      s.capped_transitions += r.capped ? 1 : 0;
      ++s.orbit_length_histogram[r.orbit_len];
    }
  }
  if (total > 0) {
    s.acceptance_rate = static_cast<double>(accepted) / static_cast<double>(total);
    s.mean_k_used = k_sum / static_cast<double>(total);
  }
  return s;
}

void write_draws_csv(const std::filesystem::path& path, const std::vector<std::string>& header,
                     const Eigen::MatrixXd& draws) {
  auto out = open_output(path);
  for (std::size_t i = 0; i < header.size(); ++i) out << (i ? "," : "") << header[i];
  out << '\n';
  for (Eigen::Index r = 0; r < draws.rows(); ++r) {
    for (Eigen::Index c = 0; c < draws.cols(); ++c) out << (c ? "," : "") << format_double(draws(r, c));
    out << '\n';
  }
  if (!out) throw std::runtime_error("write failed for '" + path.string() + "'");
}

CsvTable read_draws_csv(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open '" + path.string() + "'");
  CsvTable table;
  std::string line;
  if (!std::getline(in, line)) throw std::runtime_error("empty CSV '" + path.string() + "'");
  {
    std::stringstream ss(line);
    std::string cell;
    while (std::getline(ss, cell, ',')) table.header.push_back(cell);
  }
  std::vector<double> values;
  std::size_t rows = 0;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    std::stringstream ss(line);
    std::string cell;
    std::size_t cols = 0;
    while (std::getline(ss, cell, ',')) {
      values.push_back(std::stod(cell));
      ++cols;
    }
    if (cols != table.header.size()) throw std::runtime_error("ragged CSV row in '" + path.string() + "'");
    ++rows;
  }
  const auto ncol = static_cast<Eigen::Index>(table.header.size());
  table.values.resize(static_cast<Eigen::Index>(rows), ncol);
  for (std::size_t r = 0; r < rows; ++r) {
    for (Eigen::Index c = 0; c < ncol; ++c) {
      table.values(static_cast<Eigen::Index>(r), c) = values[r * static_cast<std::size_t>(ncol) + static_cast<std::size_t>(c)];
    }
  }
  return table;
}

void write_transitions_csv(const std::filesystem::path& path,
                           const std::vector<TransitionRecord>& records) {
  auto out = open_output(path);
  out << "accepted,k_used,k_tilde,k_tilde_star,orbit_len,dh_gap,capped\n";
  for (const auto& r : records) {
    out << (r.accepted ? 1 : 0) << ',' << r.k_used << ',' << r.k_tilde << ',' << r.k_tilde_star << ','
        << r.orbit_len << ',' << format_double(r.dh_gap) << ',' << (r.capped ? 1 : 0) << '\n';
  }
  if (!out) throw std::runtime_error("write failed for '" + path.string() + "'");
}

RunSummary read_summary(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open '" + path.string() + "'");
  return RunSummary::from_json(nlohmann::json::parse(in));
}

RunSummary cmd_sample(const ChainConfig& config) {
  config.validate();
  const auto started = std::chrono::steady_clock::now();
  const auto chains = run_chains(config);
  const double wall =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - started).count();

  std::filesystem::create_directories(config.out);
  const auto model = make_model(config.model, config.dim);
  const auto header = coordinate_names(*model);
  for (std::size_t c = 0; c < chains.size(); ++c) {
    write_draws_csv(config.out / ("draws_" + std::to_string(c) + ".csv"), header, chains[c].draws);
    write_transitions_csv(config.out / ("transitions_" + std::to_string(c) + ".csv"), chains[c].records);
  }
  auto summary = summarize(config, chains, wall);
  auto out = open_output(config.out / "summary.json");
  out << summary.to_json().dump(2) << '\n';
  return summary;
}

void ScalingConfig::validate() const {
  if (dims.empty()) throw ConfigError("scaling: dimension list is empty");
  for (const auto d : dims) {
    if (d < 1) throw ConfigError("scaling: dimensions must be >= 1");
  }
  if (n_chains < 1) throw ConfigError("scaling: chains must be >= 1");
  if (!(h > 0.0)) throw ConfigError("scaling: h must be positive");
  if (!(a_min > 0.0 && a_min < 1.0)) throw ConfigError("scaling: a_min must be in (0, 1)");
  if (max_doublings < 0 || max_doublings > 30) throw ConfigError("scaling: M must be in [0, 30]");
  if (k_cap < 1 || k_cap > 30) throw ConfigError("scaling: k_cap must be in [1, 30]");
  if (window < 1) throw ConfigError("scaling: window must be >= 1");
  if (burnin < 0) throw ConfigError("scaling: burnin must be >= 0");
  if (stationary_init != "exact" && stationary_init != "burnin") {
    throw ConfigError("scaling: stationary init must be 'exact' or 'burnin'");
  }
}

double log_log_slope(const std::vector<double>& x, const std::vector<double>& y) {
  if (x.size() != y.size() || x.size() < 2) throw std::invalid_argument("log_log_slope: need >= 2 points");
  const auto n = static_cast<double>(x.size());
  double mx = 0.0, my = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    mx += std::log(x[i]);
    my += std::log(y[i]);
  }
  mx /= n;
  my /= n;
  double sxy = 0.0, sxx = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    const double dx = std::log(x[i]) - mx;
    sxy += dx * (std::log(y[i]) - my);
    sxx += dx * dx;
  }
  if (sxx == 0.0) throw std::invalid_argument("log_log_slope: x values are all equal");
  return sxy / sxx;
}

nlohmann::json ScalingResult::to_json() const {
  nlohmann::json rows_json = nlohmann::json::array();
  for (const auto& r : rows) {
    rows_json.push_back({{"d", r.dim},
                         {"regime", r.regime},
                         {"mean_step", r.mean_step},
                         {"step_of_mean_k", r.step_of_mean_k},
                         {"chains", r.chains}});
  }
  return {{"rows", rows_json}, {"slopes", slopes}};
}

ScalingResult cmd_scaling(const ScalingConfig& config) {
  config.validate();
  const std::string late_regime = config.stationary_init == "exact" ? "stationary" : "burnin";
  const std::vector<std::string> regimes{"mode", late_regime};
  const AdaptiveConfig adaptive{config.h, config.max_doublings, config.a_min, config.k_cap};

  ScalingResult result;
  for (std::size_t di = 0; di < config.dims.size(); ++di) {
    const std::size_t d = config.dims[di];
    const StdNormalModel model(d);
    for (std::size_t ri = 0; ri < regimes.size(); ++ri) {
      const auto& regime = regimes[ri];
      const int skip = regime == "burnin" ? config.burnin : 0;
      std::vector<double> step_sum(config.n_chains, 0.0);
      std::vector<double> k_sum(config.n_chains, 0.0);
      parallel_for(config.n_chains, [&](std::size_t c) {
        // Streams: dimension index in bits 40+, regime in bits 32-39, chain below.
        const std::uint64_t stream = (static_cast<std::uint64_t>(di) << 40) |
                                     (static_cast<std::uint64_t>(ri) << 32) | c;
        auto rng = make_chain_rng(config.seed, stream);
        Vector theta = regime == "stationary" ? initial_position(model, "exact", config.seed, stream)
                                              : Vector::Zero(static_cast<Eigen::Index>(d));
        for (int t = 0; t < skip + config.window; ++t) {
          auto record = adapt_nuts_step(model, theta, adaptive, rng);
          if (t >= skip) {
            step_sum[c] += std::ldexp(config.h, -record.k_used);
            k_sum[c] += record.k_used;
          }
          theta = std::move(record.next_position);
        }
      });
      const double per = static_cast<double>(config.n_chains) * config.window;
      const double mean_step = std::accumulate(step_sum.begin(), step_sum.end(), 0.0) / per;
      const double mean_k = std::accumulate(k_sum.begin(), k_sum.end(), 0.0) / per;
      result.rows.push_back({d, regime, mean_step, config.h * std::exp2(-mean_k), config.n_chains});
    }
  }

  if (config.dims.size() >= 2) {
    for (const auto& regime : regimes) {
      std::vector<double> xs, ys;
      for (const auto& row : result.rows) {
        if (row.regime != regime) continue;
        xs.push_back(static_cast<double>(row.dim));
        ys.push_back(row.mean_step);
      }
      result.slopes[regime] = log_log_slope(xs, ys);
    }
  }

  if (!config.out.empty()) {
    std::filesystem::create_directories(config.out);
    auto csv = open_output(config.out / "scaling.csv");
    csv << "d,regime,mean_step,step_of_mean_k,chains\n";
    for (const auto& r : result.rows) {
      csv << r.dim << ',' << r.regime << ',' << format_double(r.mean_step) << ','
          << format_double(r.step_of_mean_k) << ',' << r.chains << '\n';
    }
    auto json_out = open_output(config.out / "scaling.json");
    json_out << result.to_json().dump(2) << '\n';
  }
  return result;
}

int run_cli(int argc, char** argv) {
  CLI::App app{"Step-size-adaptive no-U-turn sampler"};
  app.set_help_flag("--help", "Print this help message and exit");
  app.require_subcommand(1);

  ChainConfig sample_cfg;
  std::string mode_text = "adaptive";
  std::string config_path;
  std::string preset_name;
  double a_min = 0.7;
  std::string out_text = "gist_out";
  auto* sample = app.add_subcommand("sample", "Run chains and write draws, transitions and a summary");
  sample->set_help_flag("--help", "Print this help message and exit");
  sample->add_option("--preset", preset_name, "funnel-fixed | funnel-adaptive");
  sample->add_option("--model", sample_cfg.model, "funnel | std_normal");
  sample->add_option("--dim", sample_cfg.dim, "dimension (funnel: number of x coordinates)");
  sample->add_option("--mode", mode_text, "fixed | adaptive");
  sample->add_option("--h", sample_cfg.h, "coarse step size");
  sample->add_option("--R", sample_cfg.refinement, "fine steps per coarse step (fixed mode)");
  sample->add_option("--M", sample_cfg.max_doublings, "maximum number of orbit doublings");
  sample->add_option("--a-min", a_min, "energy-gap acceptance threshold (adaptive mode)");
  sample->add_option("--k-cap", sample_cfg.k_cap, "largest step-reduction exponent");
  sample->add_option("--draws", sample_cfg.n_draws, "draws per chain");
  sample->add_option("--chains", sample_cfg.n_chains, "number of chains");
  sample->add_option("--seed", sample_cfg.seed, "random seed");
  sample->add_option("--init", sample_cfg.init, "origin | exact");
  sample->add_option("--out", out_text, "output directory");
  sample->add_option("--config", config_path, "JSON config; its keys override flags");

  ScalingConfig scaling_cfg;
  std::string dims_text = "64,256,1024,4096";
  std::string scaling_out = "gist_scaling";
  auto* scaling = app.add_subcommand("scaling", "Adaptive step size versus dimension on a standard normal");
  scaling->set_help_flag("--help", "Print this help message and exit");
  scaling->add_option("--dims", dims_text, "comma-separated dimensions");
  scaling->add_option("--chains", scaling_cfg.n_chains, "chains per dimension and regime");
  scaling->add_option("--h", scaling_cfg.h, "coarse step size");
  scaling->add_option("--M", scaling_cfg.max_doublings, "maximum number of orbit doublings");
  scaling->add_option("--a-min", scaling_cfg.a_min, "energy-gap acceptance threshold");
  scaling->add_option("--k-cap", scaling_cfg.k_cap, "largest step-reduction exponent");
  scaling->add_option("--seed", scaling_cfg.seed, "random seed");
  scaling->add_option("--window", scaling_cfg.window, "transitions averaged per chain");
  scaling->add_option("--burnin", scaling_cfg.burnin, "transitions skipped with --stationary-init burnin");
  scaling->add_option("--stationary-init", scaling_cfg.stationary_init, "exact | burnin");
  scaling->add_option("--out", scaling_out, "output directory");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kOk : kConfigError;
  }

  try {
    if (sample->parsed()) {
      ChainConfig cfg = preset_name.empty() ? ChainConfig{} : preset(preset_name);
      const auto given = [&](const char* flag) { return sample->count(flag) > 0; };
      if (given("--model")) cfg.model = sample_cfg.model;
      if (given("--dim")) cfg.dim = sample_cfg.dim;
      if (given("--mode")) cfg.mode = parse_mode(mode_text);
      if (given("--h")) cfg.h = sample_cfg.h;
      if (given("--R")) cfg.refinement = sample_cfg.refinement;
      if (given("--M")) cfg.max_doublings = sample_cfg.max_doublings;
      if (given("--a-min")) cfg.a_min = a_min;
      if (given("--k-cap")) cfg.k_cap = sample_cfg.k_cap;
      if (given("--draws")) cfg.n_draws = sample_cfg.n_draws;
      if (given("--chains")) cfg.n_chains = sample_cfg.n_chains;
      if (given("--seed")) cfg.seed = sample_cfg.seed;
      if (given("--init")) cfg.init = sample_cfg.init;
      if (given("--out") || preset_name.empty()) cfg.out = out_text;
      if (!config_path.empty()) {
        std::ifstream in(config_path);
        if (!in) throw ConfigError("cannot read config file '" + config_path + "'");
        nlohmann::json j;
        try {
          j = nlohmann::json::parse(in);
        } catch (const nlohmann::json::exception& e) {
          throw ConfigError(std::string("config file is not valid JSON: ") + e.what());
        }
        apply_json(cfg, j);
      }
      cfg.validate();
      const auto summary = cmd_sample(cfg);
      std::cout << summary.to_json().dump(2) << '\n';
    } else if (scaling->parsed()) {
      scaling_cfg.dims = parse_dims(dims_text);
      scaling_cfg.out = scaling_out;
      const auto result = cmd_scaling(scaling_cfg);
      std::cout << "d,regime,mean_step,step_of_mean_k,chains\n";
      for (const auto& r : result.rows) {
        std::cout << r.dim << ',' << r.regime << ',' << format_double(r.mean_step) << ','
                  << format_double(r.step_of_mean_k) << ',' << r.chains << '\n';
      }
      for (const auto& [regime, slope] : result.slopes) {
        std::cout << "slope[" << regime << "] = " << slope << '\n';
      }
    }
  } catch (const ConfigError& e) {
    std::cerr << "config error: " << e.what() << '\n';
    return kConfigError;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kRuntimeError;
  }
  return kOk;
}

}  // namespace gist::cli
