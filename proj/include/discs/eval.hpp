#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "discs/envs.hpp"
#include "discs/morl.hpp"
#include "discs/nn.hpp"

namespace discs {

/// Origin-centered visitation grid over the arena; the occupied-cells count
/// is the diversity metric.
class OccupancyGrid {
 public:
  OccupancyGrid(double cell_size, double arena_half);

  /// Increments the cell containing (x, y). Out-of-arena positions are
  /// clamped to the boundary cell and counted as warnings.
  void add(double x, double y);

  void add_trajectory(std::span<const double> xy_pairs);

  int occupied_cells() const;
  std::int64_t total_count() const { return total_; }
  std::int64_t clamp_warnings() const { return clamp_warnings_; }
  void reset();

  int side() const { return side_; }
  double cell_size() const { return cell_size_; }
  std::int64_t count_at(int ix, int iy) const {
    return counts_[static_cast<std::size_t>(iy) * side_ + ix];
  }
  const std::vector<std::int64_t>& counts() const { return counts_; }
  void set_counts(const std::vector<std::int64_t>& c, std::int64_t total);

 private:
  double cell_size_;
  double arena_half_;
  int side_;
  std::vector<std::int64_t> counts_;
  std::int64_t total_ = 0;
  std::int64_t clamp_warnings_ = 0;
};

/// Deterministic skill execution: action = tanh(mean head) each step.
/// Returns positions as (x, y) pairs, step 0 (reset state) included, so a
/// full episode yields episode_length + 1 rows.
std::vector<double> rollout_deterministic(const Mlp<float>& policy, PointMassEnv& env,
                                          std::span<const float> skill, int steps);

/// Mean scalarized reward over the batch, entropy bonus excluded by
/// construction (rewards never carry the log pi term).
double average_reward(const Batch<float>& batch);

/// CSV export helpers; all writers are deterministic byte-for-byte.
void write_heatmap_csv(const OccupancyGrid& grid, const std::string& path);
void write_trajectory_csv(std::span<const double> xy_pairs, const std::string& path);

struct CurveRow {
  std::int64_t timestep = 0;
  int occupied_cells = 0;
  double disc_loss = 0.0;
  double avg_reward = 0.0;
  double critic_loss = 0.0;
  double actor_loss = 0.0;
};

std::string curve_header();
std::string format_curve_row(const CurveRow& row);

}  // namespace discs
