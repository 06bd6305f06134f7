#pragma once

#include <cstdint>
#include <span>
#include <stdexcept>
#include <vector>

#include "discs/envs.hpp"
#include "discs/nn.hpp"
#include "discs/rng.hpp"

namespace discs {

/// (1, w_1, ..., w_m): slot 0 weighs the entropy/normalizer channel.
template <typename S>
std::vector<S> extended_preference(std::span<const S> w) {
  std::vector<S> out(w.size() + 1);
  out[0] = S(1);
  for (std::size_t i = 0; i < w.size(); ++i) out[i + 1] = w[i];
  return out;
}

/// Linear scalarization w_ext . v.
template <typename S>
S scalarize(std::span<const S> w_ext, std::span<const S> v) {
  if (w_ext.size() != v.size()) {
    throw std::invalid_argument("scalarize: dimension mismatch");
  }
  S acc = S(0);
  for (std::size_t i = 0; i < w_ext.size(); ++i) acc += w_ext[i] * v[i];
  return acc;
}

/// A gradient batch. Rows hold the off-policy tuple, its conditioning skill
/// vector, the extended preference used for scalarization, and (once
/// generated) the extended reward vector.
template <typename S>
struct Batch {
  int n = 0;
  int state_dim = 0;
  int action_dim = 0;
  int skill_dim = 0;  // conditioning width (m, or n_skills for one-hot skills)
  int m = 0;          // reward-vector dimension

  std::vector<S> skill;      // n x skill_dim
  std::vector<S> pref_ext;   // n x (m+1), slot 0 == 1
  std::vector<S> state;      // n x state_dim
  std::vector<S> action;     // n x action_dim
  std::vector<S> next_state; // n x state_dim
  std::vector<std::int32_t> t;
  std::vector<std::uint8_t> terminal;
  std::vector<std::uint8_t> relabeled;
  std::vector<S> reward;     // n x (m+1)

  std::span<const S> pref_row(int i) const {
    return {pref_ext.data() + static_cast<std::size_t>(i) * (m + 1),
            static_cast<std::size_t>(m + 1)};
  }
};

/// Ring buffer of transitions in flat struct-of-arrays storage.
/// Single writer; uniform sampling with replacement.
class ReplayBuffer {
 public:
  ReplayBuffer(std::int64_t capacity, int state_dim, int action_dim, int skill_dim);

  void push(std::span<const float> skill, std::span<const float> state,
            std::span<const float> action, std::span<const float> next_state,
            std::int32_t t, bool terminal);

  std::int64_t size() const { return size_; }
  std::int64_t capacity() const { return capacity_; }
  std::int64_t total_pushed() const { return total_pushed_; }

  /// Uniform-with-replacement slot indices over the whole buffer.
  std::vector<std::int64_t> sample_indices(int n, Rng& rng) const;

  /// Uniform indices restricted to the most recent `window` pushes.
  /// Throws if nothing falls inside the window.
  std::vector<std::int64_t> sample_recent_indices(int n, std::int64_t window,
                                                  Rng& rng) const;

  /// Age of a slot: 0 for the most recent push.
  std::int64_t age_of(std::int64_t index) const;

  /// Gathers rows into a Batch (reward/pref left for later stages).
  Batch<float> gather(std::span<const std::int64_t> indices) const;

  int state_dim() const { return state_dim_; }
  int action_dim() const { return action_dim_; }
  int skill_dim() const { return skill_dim_; }

  // Checkpoint support: raw slot storage and ring counters.
  std::int64_t cursor() const { return cursor_; }
  const std::vector<float>& raw_skill() const { return skill_; }
  const std::vector<float>& raw_state() const { return state_; }
  const std::vector<float>& raw_action() const { return action_; }
  const std::vector<float>& raw_next_state() const { return next_state_; }
  const std::vector<std::int32_t>& raw_t() const { return t_; }
  const std::vector<std::uint8_t>& raw_terminal() const { return terminal_; }
  void restore_slot(std::int64_t slot, std::span<const float> skill,
                    std::span<const float> state, std::span<const float> action,
                    std::span<const float> next_state, std::int32_t t, bool terminal);
  void restore_counters(std::int64_t size, std::int64_t cursor, std::int64_t total_pushed);

 private:
  std::int64_t capacity_;
  int state_dim_, action_dim_, skill_dim_;
  std::int64_t size_ = 0;
  std::int64_t cursor_ = 0;       // next slot to write
  std::int64_t total_pushed_ = 0;
  std::vector<float> skill_, state_, action_, next_state_;
  std::vector<std::int32_t> t_;
  std::vector<std::uint8_t> terminal_;
};

/// Bellman backup r + gamma * (Q_min + h) per row, where Q_min is the target
/// whose scalarized value is smaller and h adds -alpha * log pi to slot 0.
/// The gamma term is dropped on terminal rows.
template <typename S>
std::vector<S> combine_targets(const Batch<S>& batch, std::span<const S> q1_next,
                               std::span<const S> q2_next, std::span<const S> logp_next,
                               S alpha, S gamma) {
  const int ext = batch.m + 1;
  const std::size_t want = static_cast<std::size_t>(batch.n) * ext;
  if (q1_next.size() != want || q2_next.size() != want ||
      logp_next.size() != static_cast<std::size_t>(batch.n) ||
      batch.reward.size() != want) {
    throw std::invalid_argument("combine_targets: size mismatch");
  }
  std::vector<S> targets(want);
  for (int i = 0; i < batch.n; ++i) {
    const std::size_t row = static_cast<std::size_t>(i) * ext;
    const auto pref = batch.pref_row(i);
    const std::span<const S> q1{q1_next.data() + row, static_cast<std::size_t>(ext)};
    const std::span<const S> q2{q2_next.data() + row, static_cast<std::size_t>(ext)};
    const S s1 = scalarize<S>(pref, q1);
    const S s2 = scalarize<S>(pref, q2);
    if (!std::isfinite(static_cast<double>(s1)) || !std::isfinite(static_cast<double>(s2))) {
      throw std::runtime_error("combine_targets: nonfinite Q value");
    }
    const std::span<const S> qmin = s1 <= s2 ? q1 : q2;
    if (batch.terminal[i]) {
      for (int c = 0; c < ext; ++c) targets[row + c] = batch.reward[row + c];
    } else {
      for (int c = 0; c < ext; ++c) {
        S boot = qmin[c];
        if (c == 0) boot -= alpha * logp_next[i];
        targets[row + c] = batch.reward[row + c] + gamma * boot;
      }
    }
  }
  return targets;
}

template <typename S>
struct CriticLossResult {
  S loss = S(0);
  MlpGrads<S> grads;
};

/// Mean over the batch of (w_ext . (Q(s,a,w) - target))^2; gradients flow
/// only into the online critic (targets are constants).
template <typename S>
CriticLossResult<S> critic_loss_grads(const Mlp<S>& critic, const Batch<S>& batch,
                                      std::span<const S> targets) {
  const int ext = batch.m + 1;
  std::vector<S> input(static_cast<std::size_t>(batch.n) *
                       (batch.state_dim + batch.action_dim + batch.skill_dim));
  const int in_dim = batch.state_dim + batch.action_dim + batch.skill_dim;
  for (int i = 0; i < batch.n; ++i) {
    S* row = input.data() + static_cast<std::size_t>(i) * in_dim;
    for (int d = 0; d < batch.state_dim; ++d)
      row[d] = batch.state[static_cast<std::size_t>(i) * batch.state_dim + d];
    for (int d = 0; d < batch.action_dim; ++d)
      row[batch.state_dim + d] = batch.action[static_cast<std::size_t>(i) * batch.action_dim + d];
    for (int d = 0; d < batch.skill_dim; ++d)
      row[batch.state_dim + batch.action_dim + d] =
          batch.skill[static_cast<std::size_t>(i) * batch.skill_dim + d];
  }
  auto cache = mlp_forward_cached<S>(critic, input, batch.n);
  const auto q = cache.output();

  std::vector<S> upstream(static_cast<std::size_t>(batch.n) * ext);
  S loss = S(0);
  const S inv_n = S(1) / static_cast<S>(batch.n);
  for (int i = 0; i < batch.n; ++i) {
    const std::size_t row = static_cast<std::size_t>(i) * ext;
    const auto pref = batch.pref_row(i);
    S delta = S(0);
    for (int c = 0; c < ext; ++c) delta += pref[c] * (q[row + c] - targets[row + c]);
    loss += delta * delta * inv_n;
    const S coeff = S(2) * delta * inv_n;
    for (int c = 0; c < ext; ++c) upstream[row + c] = coeff * pref[c];
  }
  CriticLossResult<S> out;
  out.loss = loss;
  out.grads = mlp_backward<S>(critic, cache, upstream);
  return out;
}

template <typename S>
struct ActorLossResult {
  S loss = S(0);
  MlpGrads<S> grads;           // policy parameter gradients
  SquashedGaussian<S> sample;  // the reparameterized draw used by the loss
  std::vector<S> q_min;        // per-row scalarized min-Q at the drawn action
};

/// E[alpha * log pi(a|s,w) - w_ext . Q_min(s,a,w)] with a reparameterized;
/// Q_min is the scalarized minimum of the two online critics. Gradients flow
/// into the policy only, including through the critics' action inputs.
template <typename S>
ActorLossResult<S> actor_loss_grads(const Mlp<S>& policy, const Mlp<S>& critic1,
                                    const Mlp<S>& critic2, const Batch<S>& batch,
                                    S alpha, Rng& rng) {
  const int ext = batch.m + 1;
  const int pol_in = batch.state_dim + batch.skill_dim;
  std::vector<S> pol_input(static_cast<std::size_t>(batch.n) * pol_in);
  for (int i = 0; i < batch.n; ++i) {
    S* row = pol_input.data() + static_cast<std::size_t>(i) * pol_in;
    for (int d = 0; d < batch.state_dim; ++d)
      row[d] = batch.state[static_cast<std::size_t>(i) * batch.state_dim + d];
    for (int d = 0; d < batch.skill_dim; ++d)
      row[batch.state_dim + d] = batch.skill[static_cast<std::size_t>(i) * batch.skill_dim + d];
  }
  auto pol_cache = mlp_forward_cached<S>(policy, pol_input, batch.n);
  auto sg = squashed_gaussian_sample<S>(pol_cache.output(), batch.n, batch.action_dim, rng);

  const int q_in = batch.state_dim + batch.action_dim + batch.skill_dim;
  std::vector<S> q_input(static_cast<std::size_t>(batch.n) * q_in);
  for (int i = 0; i < batch.n; ++i) {
    S* row = q_input.data() + static_cast<std::size_t>(i) * q_in;
    for (int d = 0; d < batch.state_dim; ++d)
      row[d] = batch.state[static_cast<std::size_t>(i) * batch.state_dim + d];
    for (int d = 0; d < batch.action_dim; ++d)
      row[batch.state_dim + d] = sg.action[static_cast<std::size_t>(i) * batch.action_dim + d];
    for (int d = 0; d < batch.skill_dim; ++d)
      row[batch.state_dim + batch.action_dim + d] =
          batch.skill[static_cast<std::size_t>(i) * batch.skill_dim + d];
  }
  auto q1_cache = mlp_forward_cached<S>(critic1, q_input, batch.n);
  auto q2_cache = mlp_forward_cached<S>(critic2, q_input, batch.n);

  ActorLossResult<S> out;
  out.q_min.resize(batch.n);
  const S inv_n = S(1) / static_cast<S>(batch.n);
  std::vector<S> up1(static_cast<std::size_t>(batch.n) * ext, S(0));
  std::vector<S> up2(static_cast<std::size_t>(batch.n) * ext, S(0));
  S loss = S(0);
  for (int i = 0; i < batch.n; ++i) {
    const std::size_t row = static_cast<std::size_t>(i) * ext;
    const auto pref = batch.pref_row(i);
    S s1 = S(0), s2 = S(0);
    for (int c = 0; c < ext; ++c) {
      s1 += pref[c] * q1_cache.output()[row + c];
      s2 += pref[c] * q2_cache.output()[row + c];
    }
    const bool use1 = s1 <= s2;
    out.q_min[i] = use1 ? s1 : s2;
    loss += (alpha * sg.log_prob[i] - out.q_min[i]) * inv_n;
    // d(loss)/dQ = -pref / n on the selected critic only.
    auto& up = use1 ? up1 : up2;
    for (int c = 0; c < ext; ++c) up[row + c] = -pref[c] * inv_n;
  }
  out.loss = loss;

  auto g1 = mlp_backward<S>(critic1, q1_cache, up1);
  auto g2 = mlp_backward<S>(critic2, q2_cache, up2);

  // Action gradient = the critics' input gradient restricted to the action slice.
  std::vector<S> grad_action(static_cast<std::size_t>(batch.n) * batch.action_dim);
  for (int i = 0; i < batch.n; ++i) {
    for (int d = 0; d < batch.action_dim; ++d) {
      const std::size_t k = static_cast<std::size_t>(i) * q_in + batch.state_dim + d;
      grad_action[static_cast<std::size_t>(i) * batch.action_dim + d] =
          g1.input[k] + g2.input[k];
    }
  }
  std::vector<S> grad_logp(batch.n, alpha * inv_n);
  auto grad_raw = squashed_gaussian_backward<S>(sg, grad_action, grad_logp);
  out.grads = mlp_backward<S>(policy, pol_cache, grad_raw);
  out.sample = std::move(sg);
  return out;
}

/// One preference's trace through exact soft policy iteration.
struct SoftPiTrace {
  std::vector<double> preference;                // w (m-dim)
  std::vector<std::vector<double>> scalarized_q; // per iteration, (s, a) table
  std::vector<double> final_policy;              // s x a
  int iterations = 0;
};

/// Alternates exact soft policy evaluation of the vector Q with the Boltzmann
/// improvement pi' ~ exp(w_ext . Q / alpha), tracking scalarized values.
SoftPiTrace tabular_soft_policy_iteration(const FiniteMdp& mdp,
                                          std::span<const double> preference,
                                          double alpha, int max_iterations = 200,
                                          double tol = 1e-12);

}  // namespace discs
