#pragma once

#include <fstream>
#include <functional>
#include <memory>
#include <optional>
#include <string>

#include "discs/baselines.hpp"
#include "discs/checkpoint.hpp"
#include "discs/config.hpp"
#include "discs/discriminator.hpp"
#include "discs/envs.hpp"
#include "discs/eval.hpp"
#include "discs/hipps.hpp"
#include "discs/morl.hpp"

namespace discs {

struct BatchStats {
  int rows = 0;
  int relabeled = 0;
};

/// Off-policy training loop: collect a few environment steps under the
/// episode's skill, periodically refresh the discriminator from the buffer,
/// then run gradient steps with hindsight-augmented batches and rewards
/// generated from the current discriminator.
class Trainer {
 public:
  /// Fresh run. out_dir may be empty to disable artifact files.
  Trainer(RunConfig cfg, std::string out_dir);

  /// Resumes bit-identically from a checkpoint.
  static std::unique_ptr<Trainer> from_checkpoint(const std::string& path,
                                                  std::string out_dir);

  /// Trains until cfg.total_steps, then writes the final checkpoint.
  void run();

  void save(const std::string& path) const;
  Checkpoint make_checkpoint() const;

  std::int64_t global_step() const { return scalars_.global_step; }
  const RunConfig& config() const { return cfg_; }
  void set_total_steps(std::int64_t steps) { cfg_.total_steps = steps; }

  MethodMode mode() const { return mode_; }
  const Mlp<float>& policy_net() const { return policy_; }
  const BatchStats& last_batch_stats() const { return batch_stats_; }
  /// Optimizer step counters (policy, q1, q2, discriminator): the number of
  /// Adam updates each network has received.
  std::array<std::int64_t, 4> update_counts() const {
    return {adam_policy_.step, adam_q1_.step, adam_q2_.step,
            adam_disc_ ? adam_disc_->step : 0};
  }
  std::int64_t gradient_steps() const { return scalars_.grad_steps; }
  double last_critic_loss() const { return scalars_.last_critic_loss; }
  double last_actor_loss() const { return scalars_.last_actor_loss; }
  double last_disc_loss() const { return scalars_.last_disc_loss; }

  /// Test hook: observes every gradient batch after augmentation and reward
  /// generation.
  std::function<void(const Batch<float>&)> batch_hook;
  /// Test hook: observes the slot indices of every discriminator batch along
  /// with their ages in pushes (0 = most recent).
  std::function<void(const std::vector<std::int64_t>&, const std::vector<std::int64_t>&)>
      disc_index_hook;

 private:
  explicit Trainer(RunConfig cfg);  // shared construction, no artifacts yet

  void init_networks();
  void open_artifacts(std::string out_dir);
  void sample_episode_skill();
  void collect_steps(int n);
  void maybe_update_discriminator();
  void gradient_step();
  void write_curve_row();
  void finish_heatmap_window();
  std::vector<float> features_of_states(const std::vector<float>& states, int n) const;
  void fill_pref_ext(Batch<float>& batch) const;
  void fill_rewards(Batch<float>& batch, const std::vector<double>& reward_vecs) const;

  RunConfig cfg_;
  MethodMode mode_;
  int cond_dim_ = 0;    // skill width fed to policy/critics
  int reward_m_ = 0;    // reward-vector dimension
  int feature_dim_ = 0; // discriminator input width

  Rng rng_;
  PointMassEnv env_;
  ReplayBuffer buffer_;
  OccupancyGrid grid_;

  Mlp<float> policy_, q1_, q2_, q1_target_, q2_target_;
  AdamState<float> adam_policy_, adam_q1_, adam_q2_;
  std::optional<VmfDiscriminator<float>> vmf_disc_;
  std::optional<CategoricalDiscriminator<float>> cat_disc_;
  std::optional<AdamState<float>> adam_disc_;

  TrainerScalars scalars_;
  std::vector<float> current_skill_;

  std::string out_dir_;
  std::ofstream curves_;
  BatchStats batch_stats_;
};

struct EvalSummary {
  int n_rollouts = 0;
  int occupied_cells = 0;
};

/// Deterministic skill rollouts from a checkpoint: trajectory CSVs, an
/// evaluation heatmap, and an occupied-cells summary under out_dir.
/// Parallelism is capped by the DISCS_THREADS environment variable.
EvalSummary evaluate_checkpoint(const std::string& ckpt_path, int n_skills,
                                const std::string& out_dir);

}  // namespace discs
