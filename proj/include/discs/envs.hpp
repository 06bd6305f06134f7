#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "discs/rng.hpp"

namespace discs {

struct PointMassState {
  double x = 0.0, y = 0.0;
  double vx = 0.0, vy = 0.0;
};

/// Axis-aligned wall segment with finite thickness.
struct WallSegment {
  double x0 = 0.0, y0 = 0.0, x1 = 0.0, y1 = 0.0;
  double thickness = 0.2;
};

/// Solid axis-aligned box derived from a segment.
struct WallBox {
  double xmin = 0.0, xmax = 0.0, ymin = 0.0, ymax = 0.0;

  bool strictly_inside(double x, double y) const {
    return x > xmin && x < xmax && y > ymin && y < ymax;
  }
};

struct WallSpec {
  std::vector<WallSegment> segments;
  std::vector<WallBox> boxes;  // derived, one per segment

  static WallSpec none();
  /// Three sides of a rectangle: closed side `distance` meters from the
  /// origin on the -x axis, arms of `arm_length` extending away from the
  /// origin, opening facing -x.
  static WallSpec u_wall(double distance = 3.0, double arm_length = 4.0,
                         double half_width = 2.0, double thickness = 0.2);
};

enum class ArenaKind { NoWall, UWall };

struct EnvParams {
  double arena_half = 10.0;  // arena is [-B, B]^2
  double dt = 0.05;
  double f_max = 1.0;
  double drag = 0.1;
  double v_max = 2.0;
  int episode_length = 500;
};

/// Resolves the motion p -> p_candidate against the walls: motion that would
/// penetrate a box is stopped at the face and the remaining displacement
/// slides along it. The resolved point is never inside a wall.
void collide_project(double px, double py, double qx, double qy, const WallSpec& walls,
                     double& rx, double& ry);

/// 2D point mass with semi-implicit Euler dynamics and fixed-length episodes.
class PointMassEnv {
 public:
  PointMassEnv(ArenaKind kind, EnvParams params);

  /// Deterministic start: origin, zero velocity, step counter cleared.
  PointMassState reset();

  /// Applies a force in [-1, 1]^2 (clipped). Returns done after
  /// episode_length steps.
  bool step(double ax, double ay);

  /// Checkpoint support: reinstates an exact mid-episode state.
  void restore(const PointMassState& s, int episode_step);

  const PointMassState& state() const { return state_; }
  int episode_step() const { return t_; }
  const WallSpec& walls() const { return walls_; }
  const EnvParams& params() const { return params_; }
  ArenaKind kind() const { return kind_; }

  static constexpr int kStateDim = 4;
  /// Network observation [x, y, vx, vy].
  void state_vector(float* out) const;

 private:
  ArenaKind kind_;
  EnvParams params_;
  WallSpec walls_;
  PointMassState state_;
  int t_ = 0;
};

ArenaKind arena_kind_from_string(const std::string& name);

/// Finite MDP with extended reward vectors, used by the tabular soft
/// policy-iteration verifier.
struct FiniteMdp {
  int n_states = 0;
  int n_actions = 0;
  int m = 0;  // reward-vector dimension; stored rewards are (m+1)-dim extended
  std::vector<double> transition;  // [(s * A + a) * S + s2], rows sum to 1
  std::vector<double> reward;      // [(s * A + a) * (m+1) + c]
  double gamma = 0.9;

  double trans(int s, int a, int s2) const {
    return transition[(static_cast<std::size_t>(s) * n_actions + a) * n_states + s2];
  }
  const double* reward_vec(int s, int a) const {
    return &reward[(static_cast<std::size_t>(s) * n_actions + a) * (m + 1)];
  }
  void validate() const;  // throws unless rows are stochastic within 1e-9
};

/// Random dense MDP: uniform-normalized transition rows, rewards in [-1, 1]
/// on slots 1..m with slot 0 zero.
FiniteMdp random_finite_mdp(int n_states, int n_actions, int m, double gamma, Rng& rng);

}  // namespace discs
