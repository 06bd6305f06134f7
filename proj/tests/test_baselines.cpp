#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "discs/baselines.hpp"
#include "grad_check.hpp"

using namespace discs;

TEST_CASE("visr reward stays in [-1, 1] and peaks at the mean direction") {
  Rng rng(201);
  auto disc = VmfDiscriminator<float>::create(2, {16, 16}, 2, true, rng);
  for (int i = 0; i < 1000; ++i) {
    std::vector<float> f = {static_cast<float>(rng.uniform(-10.0, 10.0)),
                            static_cast<float>(rng.uniform(-10.0, 10.0))};
    auto vec = visr_reward<float>(disc, f, 1);
    CHECK(vec[0] == 0.0);
    const double theta = rng.uniform(0.0, 2.0 * M_PI);
    const double scal = std::cos(theta) * vec[1] + std::sin(theta) * vec[2];
    CHECK(scal >= -1.0 - 1e-6);
    CHECK(scal <= 1.0 + 1e-6);

    // w aligned with mu gives exactly 1 (Cauchy-Schwarz equality).
    auto p = predict_vmf<float>(disc, f);
    const double at_mode = p.mu.v[0] * vec[1] + p.mu.v[1] * vec[2];
    CHECK(at_mode == doctest::Approx(1.0).epsilon(1e-6));
  }

  auto plain = VmfDiscriminator<float>::create(2, {16}, 2, false, rng);
  std::vector<float> f = {1.0f, 1.0f};
  CHECK_THROWS_AS(visr_reward<float>(plain, f, 1), std::invalid_argument);
}

TEST_CASE("diayn uniform logits give -ln n and confident logits give ~0") {
  Rng rng(202);
  auto disc = CategoricalDiscriminator<float>::create(2, {8}, 10, rng);
  for (auto& layer : disc.net.weights)
    for (auto& w : layer) w = 0.0f;
  for (auto& layer : disc.net.biases)
    for (auto& b : layer) b = 0.0f;
  std::vector<float> f = {0.5f, -0.5f};
  auto lp = diayn_log_probs<float>(disc, f, 1);
  for (int z = 0; z < 10; ++z) {
    CHECK(diayn_reward({lp.data(), 10}, z) == doctest::Approx(-std::log(10.0)).epsilon(1e-6));
  }

  disc.net.biases.back()[3] = 40.0f;  // confidently skill 3
  lp = diayn_log_probs<float>(disc, f, 1);
  CHECK(diayn_reward({lp.data(), 10}, 3) == doctest::Approx(0.0).epsilon(1e-6));
  // Other skills drop to the floor.
  CHECK(diayn_reward({lp.data(), 10}, 0) == doctest::Approx(kLogDensityFloor));
  CHECK_THROWS_AS(diayn_reward({lp.data(), 10}, 10), std::out_of_range);
}

TEST_CASE("diayn cross-entropy endpoints") {
  Rng rng(203);
  auto disc = CategoricalDiscriminator<float>::create(2, {}, 4, rng);
  for (auto& layer : disc.net.weights)
    for (auto& w : layer) w = 0.0f;
  for (auto& layer : disc.net.biases)
    for (auto& b : layer) b = 0.0f;

  DiaynBatch<float> batch;
  batch.n = 8;
  batch.feature_dim = 2;
  for (int i = 0; i < 8; ++i) {
    batch.z.push_back(i % 4);
    batch.features.push_back(static_cast<float>(i));
    batch.features.push_back(0.0f);
  }
  auto uniform = diayn_disc_loss_grads<float>(disc, batch);
  CHECK(uniform.loss == doctest::Approx(std::log(4.0)).epsilon(1e-6));

  DiaynBatch<float> empty;
  CHECK_THROWS_AS(diayn_disc_loss_grads<float>(disc, empty), std::invalid_argument);
}

TEST_CASE("diayn discriminator gradient matches finite differences") {
  Rng rng(204);
  auto disc = CategoricalDiscriminator<double>::create(2, {10}, 5, rng);
  DiaynBatch<double> batch;
  batch.n = 12;
  batch.feature_dim = 2;
  for (int i = 0; i < batch.n; ++i) {
    batch.z.push_back(static_cast<std::int32_t>(rng.uniform_int(5)));
    batch.features.push_back(rng.uniform(-2.0, 2.0));
    batch.features.push_back(rng.uniform(-2.0, 2.0));
  }
  auto result = diayn_disc_loss_grads<double>(disc, batch);
  auto loss = [&]() { return diayn_disc_loss_grads<double>(disc, batch).loss; };
  CHECK(gradcheck::max_param_grad_error(disc.net, result.grads, loss, 1e-5) < 1e-3);
}

TEST_CASE("diayn discriminator learns separable synthetic clusters") {
  Rng rng(205);
  const int n_skills = 4;
  auto disc = CategoricalDiscriminator<float>::create(2, {32}, n_skills, rng);
  auto adam = AdamState<float>::like(disc.net, 3e-3f);

  auto make_batch = [&](int n, Rng& r) {
    DiaynBatch<float> b;
    b.n = n;
    b.feature_dim = 2;
    for (int i = 0; i < n; ++i) {
      const int z = static_cast<int>(r.uniform_int(n_skills));
      const double angle = 2.0 * M_PI * z / n_skills;
      b.z.push_back(z);
      b.features.push_back(static_cast<float>(3.0 * std::cos(angle) + 0.2 * r.normal()));
      b.features.push_back(static_cast<float>(3.0 * std::sin(angle) + 0.2 * r.normal()));
    }
    return b;
  };

  Rng held_rng(206);
  auto held = make_batch(256, held_rng);
  auto lp_before = diayn_log_probs<float>(disc, held.features, held.n);
  double reward_before = 0.0;
  for (int i = 0; i < held.n; ++i) {
    reward_before += diayn_reward({lp_before.data() + i * n_skills,
                                   static_cast<std::size_t>(n_skills)}, held.z[i]);
  }

  for (int step = 0; step < 300; ++step) {
    auto batch = make_batch(128, rng);
    auto result = diayn_disc_loss_grads<float>(disc, batch);
    adam_step(disc.net, result.grads, adam);
  }

  auto lp_after = diayn_log_probs<float>(disc, held.features, held.n);
  double reward_after = 0.0;
  for (int i = 0; i < held.n; ++i) {
    reward_after += diayn_reward({lp_after.data() + i * n_skills,
                                  static_cast<std::size_t>(n_skills)}, held.z[i]);
  }
  CHECK(reward_after > reward_before);
  CHECK(reward_after / held.n > -std::log(static_cast<double>(n_skills)));
}

TEST_CASE("method mode parsing") {
  CHECK(method_from_string("discs") == MethodMode::Discs);
  CHECK(method_from_string("visr") == MethodMode::Visr);
  CHECK(method_from_string("diayn") == MethodMode::Diayn);
  CHECK(method_from_string("sac") == MethodMode::SacOnly);
  CHECK_THROWS_AS(method_from_string("ppo"), std::invalid_argument);
}
