#include "discs/eval.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <stdexcept>

namespace discs {

OccupancyGrid::OccupancyGrid(double cell_size, double arena_half)
    : cell_size_(cell_size), arena_half_(arena_half) {
  if (cell_size <= 0.0 || arena_half <= 0.0) {
    throw std::invalid_argument("OccupancyGrid: nonpositive geometry");
  }
  side_ = static_cast<int>(std::ceil(2.0 * arena_half / cell_size));
  counts_.assign(static_cast<std::size_t>(side_) * side_, 0);
}

void OccupancyGrid::add(double x, double y) {
  if (x < -arena_half_ || x > arena_half_ || y < -arena_half_ || y > arena_half_) {
    if (clamp_warnings_ == 0) {
      std::fprintf(stderr,
                   "occupancy: position (%g, %g) outside the arena, clamping to the "
                   "boundary cell (further clamps counted silently)\n",
                   x, y);
    }
    ++clamp_warnings_;
  }
  auto index = [&](double v) {
    int i = static_cast<int>(std::floor((v + arena_half_) / cell_size_));
    if (i < 0) i = 0;
    if (i >= side_) i = side_ - 1;
    return i;
  };
  counts_[static_cast<std::size_t>(index(y)) * side_ + index(x)] += 1;
  total_ += 1;
}

void OccupancyGrid::add_trajectory(std::span<const double> xy_pairs) {
  for (std::size_t i = 0; i + 1 < xy_pairs.size(); i += 2) {
    add(xy_pairs[i], xy_pairs[i + 1]);
  }
}

int OccupancyGrid::occupied_cells() const {
  int n = 0;
  for (auto c : counts_) n += c > 0 ? 1 : 0;
  return n;
}

void OccupancyGrid::reset() {
  counts_.assign(counts_.size(), 0);
  total_ = 0;
}

void OccupancyGrid::set_counts(const std::vector<std::int64_t>& c, std::int64_t total) {
  if (c.size() != counts_.size()) throw std::invalid_argument("OccupancyGrid: size mismatch");
  counts_ = c;
  total_ = total;
}

std::vector<double> rollout_deterministic(const Mlp<float>& policy, PointMassEnv& env,
                                          std::span<const float> skill, int steps) {
  env.reset();
  const int state_dim = PointMassEnv::kStateDim;
  const int in_dim = policy.input_dim();
  if (in_dim != state_dim + static_cast<int>(skill.size())) {
    throw std::invalid_argument("rollout_deterministic: policy input does not match skill");
  }
  const int action_dim = policy.output_dim() / 2;

  std::vector<double> traj;
  traj.reserve(2 * (steps + 1));
  traj.push_back(env.state().x);
  traj.push_back(env.state().y);

  std::vector<float> input(in_dim);
  for (int t = 0; t < steps; ++t) {
    env.state_vector(input.data());
    std::copy(skill.begin(), skill.end(), input.begin() + state_dim);
    auto raw = mlp_forward<float>(policy, input, 1);
    auto action = squashed_gaussian_mode<float>(raw, 1, action_dim);
    env.step(action[0], action.size() > 1 ? action[1] : 0.0f);
    traj.push_back(env.state().x);
    traj.push_back(env.state().y);
  }
  return traj;
}

double average_reward(const Batch<float>& batch) {
  if (batch.n == 0) return 0.0;
  const int ext = batch.m + 1;
  double acc = 0.0;
  for (int i = 0; i < batch.n; ++i) {
    const std::size_t row = static_cast<std::size_t>(i) * ext;
    double s = 0.0;
    for (int c = 0; c < ext; ++c) {
      s += static_cast<double>(batch.pref_ext[row + c]) *
           static_cast<double>(batch.reward[row + c]);
    }
    acc += s;
  }
  return acc / batch.n;
}

namespace {

void write_or_throw(const std::string& path, const std::string& content) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot open for writing: " + path);
  out << content;
  if (!out) throw std::runtime_error("write failed: " + path);
}

std::string format_double(double v) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.9g", v);
  return buf;
}

}  // namespace

void write_heatmap_csv(const OccupancyGrid& grid, const std::string& path) {
  std::string out;
  for (int iy = 0; iy < grid.side(); ++iy) {
    for (int ix = 0; ix < grid.side(); ++ix) {
      if (ix) out += ',';
      out += std::to_string(grid.count_at(ix, iy));
    }
    out += '\n';
  }
  write_or_throw(path, out);
}

void write_trajectory_csv(std::span<const double> xy_pairs, const std::string& path) {
  std::string out = "step,x,y\n";
  int step = 0;
  for (std::size_t i = 0; i + 1 < xy_pairs.size(); i += 2) {
    out += std::to_string(step++);
    out += ',';
    out += format_double(xy_pairs[i]);
    out += ',';
    out += format_double(xy_pairs[i + 1]);
    out += '\n';
  }
  write_or_throw(path, out);
}

std::string curve_header() {
  return "timestep,occupied_cells,disc_loss,avg_reward,critic_loss,actor_loss\n";
}

std::string format_curve_row(const CurveRow& row) {
  std::string out = std::to_string(row.timestep);
  out += ',';
  out += std::to_string(row.occupied_cells);
  out += ',';
  out += format_double(row.disc_loss);
  out += ',';
  out += format_double(row.avg_reward);
  out += ',';
  out += format_double(row.critic_loss);
  out += ',';
  out += format_double(row.actor_loss);
  out += '\n';
  return out;
}

}  // namespace discs
