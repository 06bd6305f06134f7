#pragma once

#include <array>
#include <cstdint>
#include <string>
#include <vector>

#include "discs/tensor.hpp"

namespace discs {

inline constexpr char kCheckpointMagic[] = "DISCSCKPT";
inline constexpr std::uint32_t kCheckpointVersion = 1;

/// Scalar trainer state that must round-trip for bit-identical resume.
/// Array-like state (network parameters, optimizer moments, replay contents,
/// occupancy counts) rides in the named tensor records instead.
struct TrainerScalars {
  std::int64_t global_step = 0;
  std::int64_t grad_steps = 0;
  std::int64_t next_disc_update = 0;
  std::int64_t heatmap_index = 0;
  std::int32_t episode_t = 0;
  std::int32_t current_z = -1;  // discrete-skill index, -1 for continuous modes
  double env_x = 0.0, env_y = 0.0, env_vx = 0.0, env_vy = 0.0;
  std::array<std::uint64_t, 4> rng_state{};
  double last_disc_loss = 0.0;
  double last_critic_loss = 0.0;
  double last_actor_loss = 0.0;
  double last_avg_reward = 0.0;
  std::int64_t grid_total = 0;
  std::int64_t buffer_size = 0;
  std::int64_t buffer_cursor = 0;
  std::int64_t buffer_total_pushed = 0;
  std::array<std::int64_t, 4> adam_steps{};  // policy, q1, q2, discriminator
};

struct Checkpoint {
  std::uint32_t version = kCheckpointVersion;
  std::string config_text;
  TrainerScalars scalars;
  std::vector<NamedTensor> tensors;

  const Tensor* find(const std::string& name) const;
  const Tensor& require(const std::string& name) const;
};

/// Atomic-ish write (temp file + rename). Throws on I/O failure.
void save_checkpoint(const Checkpoint& ckpt, const std::string& path);

/// Throws std::runtime_error on bad magic, truncation, or I/O failure, and a
/// version-naming error on format mismatch.
Checkpoint load_checkpoint(const std::string& path);

}  // namespace discs
