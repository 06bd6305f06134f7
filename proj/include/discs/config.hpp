#pragma once

#include <cstdint>
#include <string>
#include <vector>

namespace discs {

/// Full run configuration. Defaults are the reference hyperparameters;
/// everything is overridable through the line-oriented `key = value` file
/// format or programmatic set().
struct RunConfig {
  // Method and task.
  std::string method = "discs";  // discs | visr | diayn | sac
  int m = 2;                     // reward-vector dimensions
  std::string env = "nowall";    // nowall | uwall
  std::uint64_t seed = 0;
  std::int64_t total_steps = 150000;
  int diayn_skills = 10;

  // Optimization.
  int batch_size = 1024;
  int disc_batch_size = 16384;
  std::int64_t buffer_capacity = 2000000;
  double gamma = 0.99;
  double alpha = 0.1;
  double tau = 0.005;
  double lr = 3e-4;
  std::vector<int> q_hidden = {256, 256, 64};
  std::vector<int> policy_hidden = {256, 256};
  std::vector<int> disc_hidden = {256, 256};

  // Cadences (per the reference schedule: one critic update per env step,
  // policy/target every 8th gradient step, discriminator every 50000 steps).
  int data_collection_steps = 8;
  int update_steps = 8;
  int q_updates_per_step = 1;
  int policy_update_period = 8;
  int target_update_period = 8;
  std::int64_t disc_update_period = 50000;
  std::int64_t disc_warmup = 50000;  // step of the first discriminator update

  // Hindsight preference sampling.
  int hipps_k = 1;
  std::string hipps_source = "posterior";  // posterior | prior

  // Discriminator schedule variant and inputs.
  std::string disc_variant = "entire";  // entire | recent | gamma
  std::int64_t recent_window = 100000;
  bool xy_prior = true;
  double log_floor = -13.815510557964274;  // -6 ln 10
  double kappa_min = 1e-4;
  double kappa_max = 100.0;

  // Environment numerics.
  double arena_half = 10.0;
  double env_dt = 0.05;
  double env_f_max = 1.0;
  double env_drag = 0.1;
  double env_v_max = 2.0;
  int episode_length = 500;

  // Logging and evaluation.
  double cell_size = 0.5;
  std::int64_t log_every = 5000;
  std::int64_t heatmap_window = 50000;
  std::int64_t checkpoint_every = 0;  // 0 = final checkpoint only
  int eval_skills = 100;

  /// Throws std::invalid_argument on inconsistent settings.
  void validate() const;

  /// Sets one field by key name; value parsing matches the file format.
  void set(const std::string& key, const std::string& value);

  /// Canonical text form (stable key order); parseable by parse().
  std::string serialize() const;

  static RunConfig parse(const std::string& text);
  static RunConfig load_file(const std::string& path);

  /// All recognized keys in canonical order.
  static std::vector<std::string> key_names();
};

}  // namespace discs
