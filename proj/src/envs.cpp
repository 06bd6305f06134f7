#include "discs/envs.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

namespace discs {

namespace {

constexpr double kWallEps = 1e-9;

WallBox box_from_segment(const WallSegment& seg) {
  const double h = 0.5 * seg.thickness;
  WallBox b;
  b.xmin = std::min(seg.x0, seg.x1) - h;
  b.xmax = std::max(seg.x0, seg.x1) + h;
  b.ymin = std::min(seg.y0, seg.y1) - h;
  b.ymax = std::max(seg.y0, seg.y1) + h;
  return b;
}

struct Hit {
  double t = std::numeric_limits<double>::infinity();
  int axis = -1;     // 0 = x face, 1 = y face
  double face = 0.0; // coordinate of the face, already nudged outward
};

// Slab test for the segment p + s*(q - p), s in [0, 1], against one box.
bool sweep_box(const double p[2], const double d[2], const WallBox& box, Hit& hit) {
  const double lo[2] = {box.xmin, box.ymin};
  const double hi[2] = {box.xmax, box.ymax};
  double t_enter = 0.0;
  double t_exit = 1.0;
  int enter_axis = -1;
  bool enter_from_low = true;
  for (int axis = 0; axis < 2; ++axis) {
    if (d[axis] == 0.0) {
      if (p[axis] <= lo[axis] || p[axis] >= hi[axis]) return false;
      continue;
    }
    double t1 = (lo[axis] - p[axis]) / d[axis];
    double t2 = (hi[axis] - p[axis]) / d[axis];
    bool from_low = t1 < t2;
    if (!from_low) std::swap(t1, t2);
    if (t1 > t_enter) {
      t_enter = t1;
      enter_axis = axis;
      enter_from_low = from_low;
    }
    t_exit = std::min(t_exit, t2);
    if (t_enter > t_exit) return false;
  }
  if (enter_axis < 0) return false;  // started inside; caller guarantees otherwise
  if (t_enter >= hit.t) return false;
  hit.t = t_enter;
  hit.axis = enter_axis;
  hit.face = enter_from_low ? lo[enter_axis] - kWallEps : hi[enter_axis] + kWallEps;
  return true;
}

}  // namespace

WallSpec WallSpec::none() { return WallSpec{}; }

WallSpec WallSpec::u_wall(double distance, double arm_length, double half_width,
                          double thickness) {
  WallSpec spec;
  const double back = -distance;
  const double tip = -(distance + arm_length);
  spec.segments = {
      {back, -half_width, back, half_width, thickness},  // closed side facing the origin
      {tip, half_width, back, half_width, thickness},    // upper arm
      {tip, -half_width, back, -half_width, thickness},  // lower arm
  };
  for (const auto& seg : spec.segments) spec.boxes.push_back(box_from_segment(seg));
  return spec;
}

void collide_project(double px, double py, double qx, double qy, const WallSpec& walls,
                     double& rx, double& ry) {
  double p[2] = {px, py};
  double q[2] = {qx, qy};
  for (int iter = 0; iter < 4; ++iter) {
    const double d[2] = {q[0] - p[0], q[1] - p[1]};
    if (d[0] == 0.0 && d[1] == 0.0) break;
    Hit hit;
    bool any = false;
    for (const auto& box : walls.boxes) any |= sweep_box(p, d, box, hit);
    if (!any) {
      p[0] = q[0];
      p[1] = q[1];
      break;
    }
    // Stop at the face, then slide the remaining displacement along it.
    double contact[2] = {p[0] + hit.t * d[0], p[1] + hit.t * d[1]};
    contact[hit.axis] = hit.face;
    double rem[2] = {(1.0 - hit.t) * d[0], (1.0 - hit.t) * d[1]};
    rem[hit.axis] = 0.0;
    p[0] = contact[0];
    p[1] = contact[1];
    q[0] = contact[0] + rem[0];
    q[1] = contact[1] + rem[1];
  }
  rx = p[0];
  ry = p[1];
}

PointMassEnv::PointMassEnv(ArenaKind kind, EnvParams params)
    : kind_(kind), params_(params),
      walls_(kind == ArenaKind::UWall ? WallSpec::u_wall() : WallSpec::none()) {
  reset();
}

PointMassState PointMassEnv::reset() {
  state_ = PointMassState{};
  t_ = 0;
  return state_;
}

bool PointMassEnv::step(double ax, double ay) {
  ax = std::clamp(ax, -1.0, 1.0);
  ay = std::clamp(ay, -1.0, 1.0);

  double vx = state_.vx + params_.dt * (params_.f_max * ax - params_.drag * state_.vx);
  double vy = state_.vy + params_.dt * (params_.f_max * ay - params_.drag * state_.vy);
  const double speed = std::sqrt(vx * vx + vy * vy);
  if (speed > params_.v_max) {
    const double scale = params_.v_max / speed;
    vx *= scale;
    vy *= scale;
  }

  const double cx = state_.x + params_.dt * vx;
  const double cy = state_.y + params_.dt * vy;
  double rx, ry;
  collide_project(state_.x, state_.y, cx, cy, walls_, rx, ry);

  const double b = params_.arena_half;
  state_.x = std::clamp(rx, -b, b);
  state_.y = std::clamp(ry, -b, b);
  state_.vx = vx;
  state_.vy = vy;

  t_ += 1;
  return t_ >= params_.episode_length;
}

void PointMassEnv::restore(const PointMassState& s, int episode_step) {
  state_ = s;
  t_ = episode_step;
}

void PointMassEnv::state_vector(float* out) const {
  out[0] = static_cast<float>(state_.x);
  out[1] = static_cast<float>(state_.y);
  out[2] = static_cast<float>(state_.vx);
  out[3] = static_cast<float>(state_.vy);
}

ArenaKind arena_kind_from_string(const std::string& name) {
  if (name == "nowall") return ArenaKind::NoWall;
  if (name == "uwall") return ArenaKind::UWall;
  throw std::invalid_argument("unknown env '" + name + "' (expected nowall|uwall)");
}

void FiniteMdp::validate() const {
  if (n_states <= 0 || n_actions <= 0 || m < 1) {
    throw std::invalid_argument("FiniteMdp: empty state or action space");
  }
  for (int s = 0; s < n_states; ++s) {
    for (int a = 0; a < n_actions; ++a) {
      double sum = 0.0;
      for (int s2 = 0; s2 < n_states; ++s2) sum += trans(s, a, s2);
      if (std::abs(sum - 1.0) > 1e-9) {
        throw std::invalid_argument("FiniteMdp: transition row not stochastic");
      }
    }
  }
}

FiniteMdp random_finite_mdp(int n_states, int n_actions, int m, double gamma, Rng& rng) {
  FiniteMdp mdp;
  mdp.n_states = n_states;
  mdp.n_actions = n_actions;
  mdp.m = m;
  mdp.gamma = gamma;
  mdp.transition.resize(static_cast<std::size_t>(n_states) * n_actions * n_states);
  mdp.reward.assign(static_cast<std::size_t>(n_states) * n_actions * (m + 1), 0.0);
  for (int s = 0; s < n_states; ++s) {
    for (int a = 0; a < n_actions; ++a) {
      double sum = 0.0;
      const std::size_t row = (static_cast<std::size_t>(s) * n_actions + a) * n_states;
      for (int s2 = 0; s2 < n_states; ++s2) {
        const double x = rng.uniform() + 1e-3;
        mdp.transition[row + s2] = x;
        sum += x;
      }
      for (int s2 = 0; s2 < n_states; ++s2) mdp.transition[row + s2] /= sum;
      const std::size_t rrow = (static_cast<std::size_t>(s) * n_actions + a) * (m + 1);
      for (int c = 1; c <= m; ++c) mdp.reward[rrow + c] = rng.uniform(-1.0, 1.0);
    }
  }
  mdp.validate();
  return mdp;
}

}  // namespace discs
