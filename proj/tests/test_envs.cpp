#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "discs/envs.hpp"
#include "discs/rng.hpp"

using namespace discs;

namespace {

bool inside_any_wall(const WallSpec& walls, double x, double y) {
  for (const auto& box : walls.boxes) {
    if (box.strictly_inside(x, y)) return true;
  }
  return false;
}

}  // namespace

TEST_CASE("reset returns the origin deterministically") {
  PointMassEnv env(ArenaKind::UWall, EnvParams{});
  auto s1 = env.reset();
  CHECK(s1.x == 0.0);
  CHECK(s1.y == 0.0);
  CHECK(s1.vx == 0.0);
  CHECK(s1.vy == 0.0);
  env.step(1.0, 0.5);
  auto s2 = env.reset();
  CHECK(s2.x == s1.x);
  CHECK(s2.y == s1.y);
  CHECK(env.episode_step() == 0);
  CHECK_FALSE(inside_any_wall(env.walls(), 0.0, 0.0));
}

TEST_CASE("zero action from rest does not move") {
  PointMassEnv env(ArenaKind::NoWall, EnvParams{});
  env.reset();
  env.step(0.0, 0.0);
  CHECK(env.state().x == 0.0);
  CHECK(env.state().y == 0.0);
  CHECK(env.state().vx == 0.0);
}

TEST_CASE("constant push matches the Euler recurrence and saturates at v_max") {
  EnvParams p;
  PointMassEnv env(ArenaKind::NoWall, p);
  env.reset();

  // 100 steps keeps the mass inside the arena; v_max binds near step 45.
  double vx = 0.0, x = 0.0, prev_x = 0.0;
  bool hit_vmax = false;
  for (int i = 0; i < 100; ++i) {
    env.step(1.0, 0.0);
    // Independent scalar recurrence.
    vx = vx + p.dt * (p.f_max * 1.0 - p.drag * vx);
    if (vx > p.v_max) vx = p.v_max;
    x = x + p.dt * vx;
    CHECK(env.state().x == doctest::Approx(x).epsilon(1e-12));
    CHECK(env.state().vx == doctest::Approx(vx).epsilon(1e-12));
    CHECK(env.state().x > prev_x);  // strictly increasing
    prev_x = env.state().x;
    if (env.state().vx == p.v_max) hit_vmax = true;
  }
  CHECK(hit_vmax);
}

TEST_CASE("episode terminates at exactly 500 steps") {
  PointMassEnv env(ArenaKind::NoWall, EnvParams{});
  env.reset();
  for (int i = 0; i < 499; ++i) CHECK_FALSE(env.step(0.3, -0.2));
  CHECK(env.step(0.3, -0.2));
}

TEST_CASE("dynamics are deterministic and identical across arenas away from walls") {
  PointMassEnv a(ArenaKind::NoWall, EnvParams{});
  PointMassEnv b(ArenaKind::UWall, EnvParams{});
  a.reset();
  b.reset();
  // Move in +x and +y, far from the U-wall on the -x side.
  for (int i = 0; i < 200; ++i) {
    a.step(0.8, 0.4);
    b.step(0.8, 0.4);
    CHECK(a.state().x == b.state().x);
    CHECK(a.state().y == b.state().y);
  }
}

TEST_CASE("arena bounds clamp the position") {
  EnvParams p;
  PointMassEnv env(ArenaKind::NoWall, p);
  env.reset();
  for (int i = 0; i < 2000; ++i) env.step(1.0, 0.0);
  CHECK(env.state().x == p.arena_half);
}

TEST_CASE("collide_project passes free motion through") {
  auto walls = WallSpec::u_wall();
  double rx, ry;
  collide_project(0.0, 0.0, 1.0, 1.0, walls, rx, ry);
  CHECK(rx == 1.0);
  CHECK(ry == 1.0);
}

TEST_CASE("perpendicular approach stops at the face") {
  auto walls = WallSpec::u_wall();  // closed side box spans x in [-3.1, -2.9]
  double rx, ry;
  collide_project(-2.0, 0.0, -3.05, 0.0, walls, rx, ry);
  CHECK(rx == doctest::Approx(-2.9).epsilon(1e-9));
  CHECK(rx > -2.9 - 1e-6);
  CHECK(ry == 0.0);
}

TEST_CASE("oblique approach slides along the face") {
  auto walls = WallSpec::u_wall();
  double rx, ry;
  // Heading into the closed side: the normal (x) displacement component is
  // zeroed past the face, the tangential (y) component is preserved.
  collide_project(-2.8, 0.0, -3.0, 0.5, walls, rx, ry);
  CHECK(rx == doctest::Approx(-2.9).epsilon(1e-9));
  CHECK(ry == doctest::Approx(0.5).epsilon(1e-12));
}

TEST_CASE("stepping into the wall zeroes normal displacement, keeps tangential") {
  EnvParams p;
  PointMassEnv env(ArenaKind::UWall, p);
  env.reset();
  // Drive straight at the closed side of the U.
  for (int i = 0; i < 1000; ++i) env.step(-1.0, 0.0);
  CHECK(env.state().x == doctest::Approx(-2.9).epsilon(1e-6));
  CHECK(env.state().y == 0.0);
  // Now push diagonally: x stays pinned at the face, y moves.
  const double y_before = env.state().y;
  for (int i = 0; i < 20; ++i) env.step(-1.0, 1.0);
  CHECK(env.state().x == doctest::Approx(-2.9).epsilon(1e-6));
  CHECK(env.state().y > y_before);
}

TEST_CASE("random motion segments never end inside a wall") {
  auto walls = WallSpec::u_wall();
  Rng rng(55);
  int tested = 0;
  while (tested < 100000) {
    const double px = rng.uniform(-10.0, 10.0);
    const double py = rng.uniform(-10.0, 10.0);
    if (inside_any_wall(walls, px, py)) continue;
    const double qx = px + rng.uniform(-3.0, 3.0);
    const double qy = py + rng.uniform(-3.0, 3.0);
    double rx, ry;
    collide_project(px, py, qx, qy, walls, rx, ry);
    REQUIRE_FALSE(inside_any_wall(walls, rx, ry));
    ++tested;
  }
}

TEST_CASE("finite MDP generator produces stochastic rows") {
  Rng rng(66);
  auto mdp = random_finite_mdp(5, 3, 2, 0.9, rng);
  mdp.validate();
  for (int s = 0; s < 5; ++s) {
    for (int a = 0; a < 3; ++a) {
      CHECK(mdp.reward_vec(s, a)[0] == 0.0);  // slot 0 left to the entropy channel
    }
  }
  FiniteMdp bad = mdp;
  bad.transition[0] += 0.5;
  CHECK_THROWS_AS(bad.validate(), std::invalid_argument);
}

TEST_CASE("arena kind parsing") {
  CHECK(arena_kind_from_string("nowall") == ArenaKind::NoWall);
  CHECK(arena_kind_from_string("uwall") == ArenaKind::UWall);
  CHECK_THROWS_AS(arena_kind_from_string("maze"), std::invalid_argument);
}
