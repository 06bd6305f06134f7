// Acceptance suite: runs every acceptance criterion end to end and prints
// one PASS/FAIL line per criterion. Exit code is the number of failures.
//
// The long-horizon diversity-ordering runs (criterion 9) execute with
// desk-scale network/batch settings declared in diversity_config(); all
// numerical criteria run at their stated tolerances.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <functional>
#include <future>
#include <sstream>
#include <string>
#include <vector>

#include "discs/trainer.hpp"
#include "oracles.hpp"

using namespace discs;
namespace fs = std::filesystem;

namespace {

struct Criterion {
  int id;
  std::string label;
  std::function<std::string()> run;  // empty string = pass
};

double now_seconds() {
  return std::chrono::duration<double>(
             std::chrono::steady_clock::now().time_since_epoch())
      .count();
}

std::string slurp(const fs::path& p) {
  std::ifstream f(p, std::ios::binary);
  if (!f) return "<unreadable>";
  return {std::istreambuf_iterator<char>(f), std::istreambuf_iterator<char>()};
}

fs::path scratch_dir() {
  const auto dir = fs::temp_directory_path() / "discs_acceptance";
  fs::create_directories(dir);
  return dir;
}

std::string format_num(double v) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%.3g", v);
  return buf;
}

// --- criterion 1 -----------------------------------------------------------

std::string bessel_gradient_suite() {
  double worst = 0.0;
  for (int m : {2, 3, 4}) {
    for (int i = 0; i < 40; ++i) {
      const double kappa = std::pow(10.0, -2.0 + i * (std::log10(50.0) + 2.0) / 39.0);
      const double fd = oracle::central_diff(
          [m](double k) { return log_norm_const(m, k); }, kappa, 1e-4);
      const double err = std::abs(dlog_norm_const_dkappa(m, kappa) - fd);
      worst = std::max(worst, err);
      if (err >= 1e-5) {
        return "m=" + std::to_string(m) + " kappa=" + format_num(kappa) +
               " err=" + format_num(err);
      }
    }
  }
  return "";
}

// --- criterion 2 -----------------------------------------------------------

std::string vmf_normalization() {
  for (double kappa : {0.0, 1.0, 5.0, 20.0}) {
    const double logc = log_norm_const(2, kappa);
    const double integral = oracle::trapezoid(
        [&](double theta) { return std::exp(logc + kappa * std::cos(theta)); }, 0.0,
        2.0 * M_PI, 10000);
    if (std::abs(integral - 1.0) >= 1e-6) {
      return "kappa=" + format_num(kappa) + " integral=" + format_num(integral);
    }
  }
  return "";
}

// --- criterion 3 -----------------------------------------------------------

std::string pn_vmf_sampler() {
  Rng rng(20240501);
  const double inv_sqrt2 = 1.0 / std::sqrt(2.0);
  PnParams p(UnitVector({inv_sqrt2, inv_sqrt2}), 8.0);
  const int n = 20000;
  double sx = 0.0, sy = 0.0;
  for (int i = 0; i < n; ++i) {
    auto u = sample_pn(p, rng);
    sx += u.v[0];
    sy += u.v[1];
  }
  const double angle_err =
      std::abs(std::atan2(sy, sx) - std::atan2(inv_sqrt2, inv_sqrt2)) * 180.0 / M_PI;
  if (angle_err >= 2.0) return "mean direction off by " + format_num(angle_err) + " deg";
  const double resultant = std::sqrt(sx * sx + sy * sy) / n;
  const double expected =
      std::exp(oracle::log_bessel_series(1.0, 8.0, 80) - oracle::log_bessel_series(0.0, 8.0, 80));
  if (std::abs(resultant - expected) >= 0.05) {
    return "resultant " + format_num(resultant) + " vs " + format_num(expected);
  }
  return "";
}

// --- criterion 4 -----------------------------------------------------------

std::string tabular_theorem_suite() {
  Rng rng(77001);
  const double alpha = 0.1;
  for (int trial = 0; trial < 20; ++trial) {
    auto mdp = random_finite_mdp(5, 3, 2, 0.9, rng);
    for (int p = 0; p < 8; ++p) {
      const double theta = rng.uniform(0.0, 2.0 * M_PI);
      std::vector<double> w = {std::cos(theta), std::sin(theta)};
      auto trace = tabular_soft_policy_iteration(mdp, w, alpha);

      for (std::size_t it = 1; it < trace.scalarized_q.size(); ++it) {
        for (std::size_t i = 0; i < trace.scalarized_q[it].size(); ++i) {
          if (trace.scalarized_q[it][i] < trace.scalarized_q[it - 1][i] - 1e-9) {
            return "monotonicity violated (trial " + std::to_string(trial) + ")";
          }
        }
      }

      std::vector<double> scalar_reward(5 * 3);
      const auto ext = extended_preference<double>(w);
      for (int s = 0; s < 5; ++s) {
        for (int a = 0; a < 3; ++a) {
          const double* r = mdp.reward_vec(s, a);
          double acc = 0.0;
          for (int c = 0; c < 3; ++c) acc += ext[c] * r[c];
          scalar_reward[s * 3 + a] = acc;
        }
      }
      auto q_star =
          oracle::soft_value_iteration(5, 3, mdp.transition, scalar_reward, alpha, 0.9);
      const auto& final_q = trace.scalarized_q.back();
      for (std::size_t i = 0; i < q_star.size(); ++i) {
        if (std::abs(final_q[i] - q_star[i]) >= 1e-6) {
          return "fixed point off by " + format_num(std::abs(final_q[i] - q_star[i]));
        }
      }
    }
  }
  return "";
}

// --- criterion 5 -----------------------------------------------------------

std::string scalarization_identity() {
  Rng rng(88002);
  double worst = 0.0;
  for (int net_trial = 0; net_trial < 10; ++net_trial) {
    auto disc = VmfDiscriminator<float>::create(2, {32, 32}, 2, false, rng);
    for (int i = 0; i < 100; ++i) {
      std::vector<float> f = {static_cast<float>(rng.uniform(-10.0, 10.0)),
                              static_cast<float>(rng.uniform(-10.0, 10.0))};
      auto vec = reward_vectors<float>(disc, f, 1);
      auto params = predict_vmf<float>(disc, f);
      const double theta = rng.uniform(0.0, 2.0 * M_PI);
      UnitVector w({std::cos(theta), std::sin(theta)});
      const double scal = vec[0] + w.v[0] * vec[1] + w.v[1] * vec[2];
      const double err = std::abs(scal - vmf_log_density(w, params));
      worst = std::max(worst, err);
      if (err >= 1e-6) return "identity error " + format_num(err);
    }
  }
  return "";
}

// --- criterion 6 -----------------------------------------------------------

std::string visr_bound() {
  Rng rng(88003);
  auto disc = VmfDiscriminator<float>::create(2, {32, 32}, 2, true, rng);
  for (int i = 0; i < 100000; ++i) {
    std::vector<float> f = {static_cast<float>(rng.uniform(-10.0, 10.0)),
                            static_cast<float>(rng.uniform(-10.0, 10.0))};
    auto vec = reward_vectors<float>(disc, f, 1);
    const double theta = rng.uniform(0.0, 2.0 * M_PI);
    const double scal = vec[0] + std::cos(theta) * vec[1] + std::sin(theta) * vec[2];
    if (scal < -1.0 - 1e-6 || scal > 1.0 + 1e-6) {
      return "reward " + format_num(scal) + " out of [-1, 1]";
    }
  }
  return "";
}

// --- criterion 7 -----------------------------------------------------------

std::string sac_reduction() {
  // 1-d bandit with a fixed external scalar reward; the vector machinery at
  // m = 1, w = (1) must match an independently coded single-objective SAC
  // loss path on the same networks, step for step.
  Rng rng(99004);
  const int batch_n = 32;
  const float alpha = 0.1f;
  const float gamma = 0.9f;
  auto reward_of = [](float a) { return -0.2f * (a - 0.3f) * (a - 0.3f); };

  auto policy = Mlp<float>::create({2, 16, 16, 2}, rng);
  auto q1 = Mlp<float>::create({3, 16, 16, 2}, rng);
  auto q2 = Mlp<float>::create({3, 16, 16, 2}, rng);
  auto q1t = q1;
  auto q2t = q2;
  auto adam_p = AdamState<float>::like(policy, 3e-4f);
  auto adam_1 = AdamState<float>::like(q1, 3e-4f);
  auto adam_2 = AdamState<float>::like(q2, 3e-4f);

  for (int step = 0; step < 1000; ++step) {
    Batch<float> batch;
    batch.n = batch_n;
    batch.state_dim = 1;
    batch.action_dim = 1;
    batch.skill_dim = 1;
    batch.m = 1;
    batch.state.assign(batch_n, 0.0f);
    batch.next_state.assign(batch_n, 0.0f);
    batch.skill.assign(batch_n, 1.0f);
    batch.pref_ext.assign(batch_n * 2, 1.0f);
    batch.t.assign(batch_n, 0);
    batch.terminal.assign(batch_n, 0);
    batch.relabeled.assign(batch_n, 0);
    batch.action.resize(batch_n);
    batch.reward.assign(batch_n * 2, 0.0f);
    for (int i = 0; i < batch_n; ++i) {
      batch.action[i] = std::tanh(static_cast<float>(rng.normal()));
      batch.reward[i * 2 + 1] = reward_of(batch.action[i]);
    }

    // Shared next-action draw.
    std::vector<float> next_obs(batch_n * 2);
    for (int i = 0; i < batch_n; ++i) {
      next_obs[i * 2] = 0.0f;
      next_obs[i * 2 + 1] = 1.0f;
    }
    auto next_raw = mlp_forward<float>(policy, next_obs, batch_n);
    auto next_sg = squashed_gaussian_sample<float>(next_raw, batch_n, 1, rng);

    std::vector<float> next_q_in(batch_n * 3);
    for (int i = 0; i < batch_n; ++i) {
      next_q_in[i * 3] = 0.0f;
      next_q_in[i * 3 + 1] = next_sg.action[i];
      next_q_in[i * 3 + 2] = 1.0f;
    }
    auto q1n = mlp_forward<float>(q1t, next_q_in, batch_n);
    auto q2n = mlp_forward<float>(q2t, next_q_in, batch_n);

    // Route A: vector targets and scalarized losses.
    auto targets = combine_targets<float>(batch, q1n, q2n, next_sg.log_prob, alpha, gamma);
    auto a1 = critic_loss_grads<float>(q1, batch, targets);
    auto a2 = critic_loss_grads<float>(q2, batch, targets);

    // Route B: plain single-objective SAC arithmetic on the same numbers.
    std::vector<float> q_in(batch_n * 3);
    for (int i = 0; i < batch_n; ++i) {
      q_in[i * 3] = 0.0f;
      q_in[i * 3 + 1] = batch.action[i];
      q_in[i * 3 + 2] = 1.0f;
    }
    auto q1_online = mlp_forward<float>(q1, q_in, batch_n);
    auto q2_online = mlp_forward<float>(q2, q_in, batch_n);
    double b1 = 0.0, b2 = 0.0;
    for (int i = 0; i < batch_n; ++i) {
      const float s1 = q1n[i * 2] + q1n[i * 2 + 1];
      const float s2 = q2n[i * 2] + q2n[i * 2 + 1];
      const float y = batch.reward[i * 2 + 1] +
                      gamma * (std::min(s1, s2) - alpha * next_sg.log_prob[i]);
      const float d1 = (q1_online[i * 2] + q1_online[i * 2 + 1]) - y;
      const float d2 = (q2_online[i * 2] + q2_online[i * 2 + 1]) - y;
      b1 += d1 * d1 / batch_n;
      b2 += d2 * d2 / batch_n;
    }
    if (std::abs(a1.loss - b1) >= 1e-6 || std::abs(a2.loss - b2) >= 1e-6) {
      return "critic loss mismatch " + format_num(std::abs(a1.loss - b1)) + " at step " +
             std::to_string(step);
    }

    // Route A actor loss, then route B from the same reparameterized draw.
    Rng actor_rng(1000003ULL * (step + 1));
    auto ar = actor_loss_grads<float>(policy, q1, q2, batch, alpha, actor_rng);
    std::vector<float> pi_q_in(batch_n * 3);
    for (int i = 0; i < batch_n; ++i) {
      pi_q_in[i * 3] = 0.0f;
      pi_q_in[i * 3 + 1] = ar.sample.action[i];
      pi_q_in[i * 3 + 2] = 1.0f;
    }
    auto q1_pi = mlp_forward<float>(q1, pi_q_in, batch_n);
    auto q2_pi = mlp_forward<float>(q2, pi_q_in, batch_n);
    double b_actor = 0.0;
    for (int i = 0; i < batch_n; ++i) {
      const float s1 = q1_pi[i * 2] + q1_pi[i * 2 + 1];
      const float s2 = q2_pi[i * 2] + q2_pi[i * 2 + 1];
      b_actor += (alpha * ar.sample.log_prob[i] - std::min(s1, s2)) / batch_n;
    }
    if (std::abs(ar.loss - b_actor) >= 1e-6) {
      return "actor loss mismatch " + format_num(std::abs(ar.loss - b_actor)) + " at step " +
             std::to_string(step);
    }

    adam_step(q1, a1.grads, adam_1);
    adam_step(q2, a2.grads, adam_2);
    adam_step(policy, ar.grads, adam_p);
    polyak_update(q1t, q1, 0.005f);
    polyak_update(q2t, q2, 0.005f);
  }
  return "";
}

// --- criterion 8 -----------------------------------------------------------

std::string gradient_integrity() {
  Rng rng(55005);

  // Spot-check every architecture used in the repo (reference and desk
  // sizes), probing a spread of parameters per layer in double precision.
  struct Arch {
    std::vector<int> sizes;
    int batch;
  };
  const std::vector<Arch> archs = {
      {{6, 256, 256, 4}, 4},     // policy, reference size
      {{8, 256, 256, 64, 3}, 4}, // twin critic, reference size
      {{2, 256, 256, 3}, 4},     // discriminator trunk, reference size
      {{6, 32, 32, 4}, 8},       // desk-scale policy
      {{8, 32, 32, 3}, 8},       // desk-scale critic
  };
  for (const auto& arch : archs) {
    auto net = Mlp<double>::create(arch.sizes, rng);
    std::vector<double> in(static_cast<std::size_t>(arch.batch) * arch.sizes.front());
    for (auto& x : in) x = rng.uniform(-1.0, 1.0);
    std::vector<double> readout(static_cast<std::size_t>(arch.batch) * arch.sizes.back());
    for (auto& x : readout) x = rng.uniform(-1.0, 1.0);
    auto loss = [&]() {
      auto out = mlp_forward<double>(net, in, arch.batch);
      double acc = 0.0;
      for (std::size_t i = 0; i < out.size(); ++i) acc += out[i] * readout[i];
      return acc;
    };
    auto cache = mlp_forward_cached<double>(net, in, arch.batch);
    auto grads = mlp_backward<double>(net, cache, readout);

    for (std::size_t l = 0; l < net.weights.size(); ++l) {
      const std::size_t stride = std::max<std::size_t>(1, net.weights[l].size() / 60);
      for (std::size_t i = 0; i < net.weights[l].size(); i += stride) {
        const double saved = net.weights[l][i];
        net.weights[l][i] = saved + 1e-5;
        const double up = loss();
        net.weights[l][i] = saved - 1e-5;
        const double down = loss();
        net.weights[l][i] = saved;
        const double fd = (up - down) / 2e-5;
        const double g = grads.weights[l][i];
        const double scale = std::max({1e-4, std::abs(fd), std::abs(g)});
        if (std::abs(fd - g) / scale >= 1e-3) {
          return "mlp grad error at layer " + std::to_string(l);
        }
      }
    }
  }

  // Full-parameter check of the discriminator loss, covering the analytic
  // concentration chain (softplus -> clamp -> normalizer derivative).
  auto disc = VmfDiscriminator<double>::create(2, {16, 16}, 2, false, rng);
  DiscBatch<double> batch;
  batch.n = 16;
  batch.m = 2;
  batch.feature_dim = 2;
  for (int i = 0; i < batch.n; ++i) {
    const double theta = rng.uniform(0.0, 2.0 * M_PI);
    batch.w.push_back(std::cos(theta));
    batch.w.push_back(std::sin(theta));
    batch.features.push_back(rng.uniform(-3.0, 3.0));
    batch.features.push_back(rng.uniform(-3.0, 3.0));
    batch.t.push_back(static_cast<std::int32_t>(rng.uniform_int(500)));
  }
  auto result = disc_loss_grads<double>(disc, batch, DiscVariant::Gamma, 0.99);
  auto disc_loss = [&]() {
    return disc_loss_grads<double>(disc, batch, DiscVariant::Gamma, 0.99).loss;
  };
  for (std::size_t l = 0; l < disc.net.weights.size(); ++l) {
    for (std::size_t i = 0; i < disc.net.weights[l].size(); ++i) {
      const double saved = disc.net.weights[l][i];
      disc.net.weights[l][i] = saved + 1e-5;
      const double up = disc_loss();
      disc.net.weights[l][i] = saved - 1e-5;
      const double down = disc_loss();
      disc.net.weights[l][i] = saved;
      const double fd = (up - down) / 2e-5;
      const double g = result.grads.weights[l][i];
      const double scale = std::max({1e-4, std::abs(fd), std::abs(g)});
      if (std::abs(fd - g) / scale >= 1e-3) {
        return "discriminator kappa-chain grad error at layer " + std::to_string(l);
      }
    }
  }

  // Substituting a finite-difference ratio for the analytic normalizer
  // derivative must agree to 1e-3 relative on the concentration gradient.
  {
    const double kappa = 2.5, dot = 0.4;
    const double analytic = dlog_norm_const_dkappa(2, kappa) + dot;
    const double fd_ratio = oracle::central_diff(
                                [](double k) { return log_norm_const(2, k); }, kappa, 1e-4) +
                            dot;
    if (std::abs(analytic - fd_ratio) / std::abs(fd_ratio) >= 1e-3) {
      return "analytic vs fd normalizer derivative mismatch";
    }
  }
  return "";
}

// --- criterion 9 -----------------------------------------------------------

RunConfig diversity_config(const std::string& method, int hipps_k, std::uint64_t seed) {
  RunConfig cfg;
  cfg.method = method;
  cfg.env = "nowall";
  cfg.total_steps = 150000;
  cfg.seed = seed;
  cfg.hipps_k = hipps_k;
  // Desk-scale sizes: the reference table's 256-wide networks and 50k-step
  // discriminator cadence are tuned for multi-million-step runs.
  cfg.batch_size = 128;
  cfg.disc_batch_size = 4096;
  cfg.buffer_capacity = 150000;
  cfg.q_hidden = {32, 32};
  cfg.policy_hidden = {32, 32};
  cfg.disc_hidden = {32, 32};
  cfg.disc_update_period = 2000;
  cfg.disc_warmup = 2000;
  cfg.log_every = 5000;
  cfg.heatmap_window = 50000;
  return cfg;
}

int final_occupied_cells(const fs::path& out_dir) {
  std::ifstream f(out_dir / "curves.csv");
  std::string line, last;
  while (std::getline(f, line)) {
    if (!line.empty()) last = line;
  }
  std::stringstream ss(last);
  std::string field;
  std::getline(ss, field, ',');  // timestep
  std::getline(ss, field, ',');  // occupied_cells
  return std::stoi(field);
}

std::string diversity_ordering() {
  struct Variant {
    std::string name;
    std::string method;
    int hipps_k;
  };
  const std::vector<Variant> variants = {
      {"hipps4", "discs", 4}, {"nohipps", "discs", 1}, {"visr", "visr", 1}, {"sac", "sac", 1}};
  const std::vector<std::uint64_t> seeds = {1, 2, 3};

  const auto root = scratch_dir() / "diversity";
  fs::create_directories(root);

  struct Job {
    std::string name;
    RunConfig cfg;
    fs::path out;
  };
  std::vector<Job> jobs;
  for (const auto& v : variants) {
    for (auto seed : seeds) {
      Job job;
      job.name = v.name + "_s" + std::to_string(seed);
      job.cfg = diversity_config(v.method, v.hipps_k, seed);
      job.out = root / job.name;
      fs::remove_all(job.out);
      jobs.push_back(std::move(job));
    }
  }

  // Two jobs in flight to match the available cores.
  std::vector<std::future<void>> inflight;
  std::size_t next = 0;
  auto pump = [&]() {
    while (inflight.size() < 2 && next < jobs.size()) {
      const auto& job = jobs[next++];
      inflight.push_back(std::async(std::launch::async, [&job]() {
        Trainer trainer(job.cfg, job.out.string());
        trainer.run();
      }));
    }
  };
  pump();
  while (!inflight.empty()) {
    inflight.front().wait();
    inflight.erase(inflight.begin());
    pump();
  }

  auto median_of = [&](const std::string& name) {
    std::vector<int> cells;
    for (auto seed : seeds) {
      cells.push_back(final_occupied_cells(root / (name + "_s" + std::to_string(seed))));
    }
    std::sort(cells.begin(), cells.end());
    return cells[cells.size() / 2];
  };
  const int hipps4 = median_of("hipps4");
  const int nohipps = median_of("nohipps");
  const int visr = median_of("visr");
  const int sac = median_of("sac");
  const std::string detail = "hipps4=" + std::to_string(hipps4) +
                             " nohipps=" + std::to_string(nohipps) +
                             " visr=" + std::to_string(visr) + " sac=" + std::to_string(sac);
  std::printf("  criterion 9 medians: %s\n", detail.c_str());
  if (!(hipps4 >= nohipps)) return "hipps4 < nohipps (" + detail + ")";
  if (!(nohipps > visr)) return "nohipps <= visr (" + detail + ")";
  if (!(visr > sac)) return "visr <= sac (" + detail + ")";
  if (!(hipps4 >= 3 * sac)) return "hipps4 < 3x sac (" + detail + ")";
  return "";
}

// --- criterion 10 ----------------------------------------------------------

std::string hipps_mechanics() {
  // Full-size batches: 1024 tuples fan out to 4096 rows, 3072 relabeled.
  auto cfg = diversity_config("discs", 4, 11);
  cfg.total_steps = 24;
  cfg.batch_size = 1024;
  Trainer trainer(cfg, "");
  std::string failure;
  int batches = 0;
  trainer.batch_hook = [&](const Batch<float>& batch) {
    ++batches;
    if (batch.n != 4096) failure = "batch rows " + std::to_string(batch.n);
    int relabeled = 0;
    for (auto r : batch.relabeled) relabeled += r;
    if (relabeled != 3072) failure = "relabeled rows " + std::to_string(relabeled);
    for (int i = 0; i < batch.n && failure.empty(); ++i) {
      if (!batch.relabeled[i]) continue;
      const double wx = batch.skill[i * 2];
      const double wy = batch.skill[i * 2 + 1];
      if (std::abs(std::sqrt(wx * wx + wy * wy) - 1.0) >= 1e-6) {
        failure = "relabeled preference not unit norm";
      }
    }
  };
  trainer.run();
  if (!failure.empty()) return failure;
  if (batches != 24) return "expected 24 gradient batches, saw " + std::to_string(batches);

  // k = 1 must be bit-identical to the unaugmented configuration.
  const auto root = scratch_dir() / "hipps_identity";
  fs::remove_all(root);
  auto small = diversity_config("discs", 1, 12);
  small.total_steps = 2000;
  small.batch_size = 32;
  small.q_hidden = {16, 16};
  small.policy_hidden = {16, 16};
  small.disc_hidden = {16};
  small.hipps_source = "posterior";
  Trainer(small, (root / "a").string()).run();
  small.hipps_source = "prior";  // must not matter at k = 1
  Trainer(small, (root / "b_longer_name").string()).run();
  if (slurp(root / "a" / "curves.csv") != slurp(root / "b_longer_name" / "curves.csv")) {
    return "k=1 run differs from unaugmented baseline";
  }
  return "";
}

// --- criterion 11 ----------------------------------------------------------

std::string variant_plumbing() {
  // Gamma at gamma = 1 equals the entire-buffer loss on identical batches.
  Rng rng(66006);
  auto disc = VmfDiscriminator<float>::create(2, {32, 32}, 2, false, rng);
  DiscBatch<float> batch;
  batch.n = 4096;
  batch.m = 2;
  batch.feature_dim = 2;
  for (int i = 0; i < batch.n; ++i) {
    const double theta = rng.uniform(0.0, 2.0 * M_PI);
    batch.w.push_back(static_cast<float>(std::cos(theta)));
    batch.w.push_back(static_cast<float>(std::sin(theta)));
    batch.features.push_back(static_cast<float>(rng.uniform(-8.0, 8.0)));
    batch.features.push_back(static_cast<float>(rng.uniform(-8.0, 8.0)));
    batch.t.push_back(static_cast<std::int32_t>(rng.uniform_int(500)));
  }
  const auto entire = disc_loss_grads<float>(disc, batch, DiscVariant::EntireBuffer, 0.99);
  const auto gamma1 = disc_loss_grads<float>(disc, batch, DiscVariant::Gamma, 1.0);
  if (std::abs(entire.loss - gamma1.loss) >= 1e-7) {
    return "gamma=1 loss differs by " + format_num(std::abs(entire.loss - gamma1.loss));
  }

  // Recent sampling stays within a 1e5-push window on an overfull ring.
  ReplayBuffer buf(150000, 1, 1, 2);
  const float skill[2] = {1.0f, 0.0f};
  const float zero[1] = {0.0f};
  for (int i = 0; i < 220000; ++i) buf.push(skill, zero, zero, zero, i % 500, false);
  Rng sample_rng(13);
  auto idx = buf.sample_recent_indices(16384, 100000, sample_rng);
  for (auto i : idx) {
    if (buf.age_of(i) > 100000) return "sampled age " + std::to_string(buf.age_of(i));
  }

  // And through the trainer's schedule, via the index hook.
  auto cfg = diversity_config("discs", 1, 14);
  cfg.total_steps = 3000;
  cfg.batch_size = 32;
  cfg.q_hidden = {16, 16};
  cfg.policy_hidden = {16, 16};
  cfg.disc_hidden = {16};
  cfg.disc_variant = "recent";
  cfg.recent_window = 500;
  cfg.disc_warmup = 1000;
  cfg.disc_update_period = 1000;
  cfg.disc_batch_size = 256;
  Trainer trainer(cfg, "");
  std::string failure;
  int fired = 0;
  trainer.disc_index_hook = [&](const std::vector<std::int64_t>&,
                                const std::vector<std::int64_t>& ages) {
    ++fired;
    for (auto age : ages) {
      if (age >= 500) failure = "trainer sampled age " + std::to_string(age);
    }
  };
  trainer.run();
  if (!failure.empty()) return failure;
  if (fired != 3) return "expected 3 recent-window updates, saw " + std::to_string(fired);
  return "";
}

// --- criterion 12 ----------------------------------------------------------

std::string determinism_and_resume() {
  const auto root = scratch_dir() / "resume";
  fs::remove_all(root);
  fs::create_directories(root);

  RunConfig cfg;
  cfg.method = "discs";
  cfg.hipps_k = 2;
  cfg.total_steps = 100000;
  cfg.batch_size = 32;
  cfg.disc_batch_size = 512;
  cfg.buffer_capacity = 100000;
  cfg.q_hidden = {16, 16};
  cfg.policy_hidden = {16, 16};
  cfg.disc_hidden = {16};
  cfg.disc_update_period = 10000;
  cfg.disc_warmup = 10000;
  cfg.log_every = 5000;
  cfg.seed = 21;

  Trainer(cfg, (root / "full").string()).run();

  auto half = cfg;
  half.total_steps = 50000;
  Trainer(half, (root / "split").string()).run();
  auto resumed = Trainer::from_checkpoint((root / "split" / "checkpoint_final.bin").string(),
                                          (root / "split").string());
  resumed->set_total_steps(100000);
  resumed->run();

  if (slurp(root / "full" / "curves.csv") != slurp(root / "split" / "curves.csv")) {
    return "curves differ between split and uninterrupted runs";
  }
  if (slurp(root / "full" / "checkpoint_final.bin") !=
      slurp(root / "split" / "checkpoint_final.bin")) {
    return "final checkpoints differ";
  }
  return "";
}

}  // namespace

int main(int argc, char** argv) {
  bool skip_slow = false;
  for (int i = 1; i < argc; ++i) {
    if (std::string(argv[i]) == "--skip-slow") skip_slow = true;
  }

  std::vector<Criterion> criteria = {
      {1, "Bessel/normalizer gradient suite", bessel_gradient_suite},
      {2, "vMF normalization on the circle", vmf_normalization},
      {3, "PN vs vMF sampler geometry", pn_vmf_sampler},
      {4, "tabular soft policy iteration theorems", tabular_theorem_suite},
      {5, "scalarization identity", scalarization_identity},
      {6, "VISR reward bound", visr_bound},
      {7, "single-objective SAC reduction", sac_reduction},
      {8, "gradient integrity", gradient_integrity},
      {9, "end-to-end diversity ordering", diversity_ordering},
      {10, "hindsight augmentation mechanics", hipps_mechanics},
      {11, "discriminator variant plumbing", variant_plumbing},
      {12, "determinism and resume", determinism_and_resume},
  };

  int failures = 0;
  for (const auto& c : criteria) {
    if (skip_slow && (c.id == 9 || c.id == 12)) {
      std::printf("SKIP criterion %d: %s (--skip-slow)\n", c.id, c.label.c_str());
      continue;
    }
    const double t0 = now_seconds();
    std::string detail;
    try {
      detail = c.run();
    } catch (const std::exception& e) {
      detail = std::string("exception: ") + e.what();
    }
    const double dt = now_seconds() - t0;
    if (detail.empty()) {
      std::printf("PASS criterion %d: %s (%.1f s)\n", c.id, c.label.c_str(), dt);
    } else {
      std::printf("FAIL criterion %d: %s (%.1f s) -- %s\n", c.id, c.label.c_str(), dt,
                  detail.c_str());
      ++failures;
    }
    std::fflush(stdout);
  }
  return failures;
}
