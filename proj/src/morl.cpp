#include "discs/morl.hpp"

#include <algorithm>
#include <cmath>
#include <cstring>

namespace discs {

ReplayBuffer::ReplayBuffer(std::int64_t capacity, int state_dim, int action_dim,
                           int skill_dim)
    : capacity_(capacity), state_dim_(state_dim), action_dim_(action_dim),
      skill_dim_(skill_dim) {
  if (capacity <= 0) throw std::invalid_argument("ReplayBuffer: capacity must be positive");
  skill_.resize(static_cast<std::size_t>(capacity) * skill_dim);
  state_.resize(static_cast<std::size_t>(capacity) * state_dim);
  action_.resize(static_cast<std::size_t>(capacity) * action_dim);
  next_state_.resize(static_cast<std::size_t>(capacity) * state_dim);
  t_.resize(capacity);
  terminal_.resize(capacity);
}

void ReplayBuffer::push(std::span<const float> skill, std::span<const float> state,
                        std::span<const float> action, std::span<const float> next_state,
                        std::int32_t t, bool terminal) {
  if (skill.size() != static_cast<std::size_t>(skill_dim_) ||
      state.size() != static_cast<std::size_t>(state_dim_) ||
      action.size() != static_cast<std::size_t>(action_dim_) ||
      next_state.size() != static_cast<std::size_t>(state_dim_)) {
    throw std::invalid_argument("ReplayBuffer::push: field size mismatch");
  }
  const std::int64_t slot = cursor_;
  std::memcpy(&skill_[slot * skill_dim_], skill.data(), skill.size_bytes());
  std::memcpy(&state_[slot * state_dim_], state.data(), state.size_bytes());
  std::memcpy(&action_[slot * action_dim_], action.data(), action.size_bytes());
  std::memcpy(&next_state_[slot * state_dim_], next_state.data(), next_state.size_bytes());
  t_[slot] = t;
  terminal_[slot] = terminal ? 1 : 0;
  cursor_ = (cursor_ + 1) % capacity_;
  size_ = std::min(size_ + 1, capacity_);
  total_pushed_ += 1;
}

std::vector<std::int64_t> ReplayBuffer::sample_indices(int n, Rng& rng) const {
  if (size_ == 0) throw std::runtime_error("ReplayBuffer: sample from empty buffer");
  std::vector<std::int64_t> idx(n);
  for (auto& i : idx) i = static_cast<std::int64_t>(rng.uniform_int(size_));
  return idx;
}

std::int64_t ReplayBuffer::age_of(std::int64_t index) const {
  // Slot written most recently is cursor_ - 1.
  const std::int64_t back = (cursor_ - 1 - index + capacity_) % capacity_;
  return back;
}

std::vector<std::int64_t> ReplayBuffer::sample_recent_indices(int n, std::int64_t window,
                                                              Rng& rng) const {
  if (size_ == 0) throw std::runtime_error("ReplayBuffer: sample from empty buffer");
  const std::int64_t usable = std::min(window, size_);
  if (usable <= 0) {
    throw std::runtime_error("ReplayBuffer: no transitions inside the recent window");
  }
  std::vector<std::int64_t> idx(n);
  for (auto& i : idx) {
    const std::int64_t back = static_cast<std::int64_t>(rng.uniform_int(usable));
    i = (cursor_ - 1 - back + capacity_ * 2) % capacity_;
  }
  return idx;
}

Batch<float> ReplayBuffer::gather(std::span<const std::int64_t> indices) const {
  Batch<float> b;
  b.n = static_cast<int>(indices.size());
  b.state_dim = state_dim_;
  b.action_dim = action_dim_;
  b.skill_dim = skill_dim_;
  b.skill.resize(static_cast<std::size_t>(b.n) * skill_dim_);
  b.state.resize(static_cast<std::size_t>(b.n) * state_dim_);
  b.action.resize(static_cast<std::size_t>(b.n) * action_dim_);
  b.next_state.resize(static_cast<std::size_t>(b.n) * state_dim_);
  b.t.resize(b.n);
  b.terminal.resize(b.n);
  b.relabeled.assign(b.n, 0);
  for (int i = 0; i < b.n; ++i) {
    const std::int64_t s = indices[i];
    std::memcpy(&b.skill[static_cast<std::size_t>(i) * skill_dim_], &skill_[s * skill_dim_],
                sizeof(float) * skill_dim_);
    std::memcpy(&b.state[static_cast<std::size_t>(i) * state_dim_], &state_[s * state_dim_],
                sizeof(float) * state_dim_);
    std::memcpy(&b.action[static_cast<std::size_t>(i) * action_dim_], &action_[s * action_dim_],
                sizeof(float) * action_dim_);
    std::memcpy(&b.next_state[static_cast<std::size_t>(i) * state_dim_],
                &next_state_[s * state_dim_], sizeof(float) * state_dim_);
    b.t[i] = t_[s];
    b.terminal[i] = terminal_[s];
  }
  return b;
}

void ReplayBuffer::restore_slot(std::int64_t slot, std::span<const float> skill,
                                std::span<const float> state, std::span<const float> action,
                                std::span<const float> next_state, std::int32_t t,
                                bool terminal) {
  if (slot < 0 || slot >= capacity_) throw std::invalid_argument("restore_slot: bad slot");
  std::memcpy(&skill_[slot * skill_dim_], skill.data(), sizeof(float) * skill_dim_);
  std::memcpy(&state_[slot * state_dim_], state.data(), sizeof(float) * state_dim_);
  std::memcpy(&action_[slot * action_dim_], action.data(), sizeof(float) * action_dim_);
  std::memcpy(&next_state_[slot * state_dim_], next_state.data(), sizeof(float) * state_dim_);
  t_[slot] = t;
  terminal_[slot] = terminal ? 1 : 0;
}

void ReplayBuffer::restore_counters(std::int64_t size, std::int64_t cursor,
                                    std::int64_t total_pushed) {
  if (size < 0 || size > capacity_ || cursor < 0 || cursor >= capacity_) {
    throw std::invalid_argument("restore_counters: inconsistent ring state");
  }
  size_ = size;
  cursor_ = cursor;
  total_pushed_ = total_pushed;
}

namespace {

// Exact policy evaluation of the (m+1)-dim vector Q for a fixed stochastic
// policy, iterated to tolerance.
void evaluate_vector_q(const FiniteMdp& mdp, const std::vector<double>& policy,
                       double alpha, std::vector<double>& q, double tol) {
  const int S = mdp.n_states;
  const int A = mdp.n_actions;
  const int ext = mdp.m + 1;
  std::vector<double> v(static_cast<std::size_t>(S) * ext);
  for (int sweep = 0; sweep < 100000; ++sweep) {
    // V(s) = sum_a pi(a|s) [Q(s,a) + h(s,a)], entropy in slot 0 only.
    for (int s = 0; s < S; ++s) {
      for (int c = 0; c < ext; ++c) v[static_cast<std::size_t>(s) * ext + c] = 0.0;
      for (int a = 0; a < A; ++a) {
        const double p = policy[static_cast<std::size_t>(s) * A + a];
        if (p <= 0.0) continue;
        const std::size_t qrow = (static_cast<std::size_t>(s) * A + a) * ext;
        for (int c = 0; c < ext; ++c) {
          v[static_cast<std::size_t>(s) * ext + c] += p * q[qrow + c];
        }
        v[static_cast<std::size_t>(s) * ext] += p * (-alpha * std::log(p));
      }
    }
    double delta = 0.0;
    for (int s = 0; s < S; ++s) {
      for (int a = 0; a < A; ++a) {
        const std::size_t qrow = (static_cast<std::size_t>(s) * A + a) * ext;
        const double* r = mdp.reward_vec(s, a);
        for (int c = 0; c < ext; ++c) {
          double next = r[c];
          for (int s2 = 0; s2 < S; ++s2) {
            next += mdp.gamma * mdp.trans(s, a, s2) * v[static_cast<std::size_t>(s2) * ext + c];
          }
          delta = std::max(delta, std::abs(next - q[qrow + c]));
          q[qrow + c] = next;
        }
      }
    }
    if (delta < tol) break;
  }
}

}  // namespace

SoftPiTrace tabular_soft_policy_iteration(const FiniteMdp& mdp,
                                          std::span<const double> preference,
                                          double alpha, int max_iterations, double tol) {
  mdp.validate();
  if (static_cast<int>(preference.size()) != mdp.m) {
    throw std::invalid_argument("tabular_soft_policy_iteration: preference dimension mismatch");
  }
  const int S = mdp.n_states;
  const int A = mdp.n_actions;
  const int ext = mdp.m + 1;
  const auto pref_ext = extended_preference<double>(preference);

  SoftPiTrace trace;
  trace.preference.assign(preference.begin(), preference.end());
  std::vector<double> policy(static_cast<std::size_t>(S) * A, 1.0 / A);
  std::vector<double> q(static_cast<std::size_t>(S) * A * ext, 0.0);

  std::vector<double> prev_scal;
  for (int iter = 0; iter < max_iterations; ++iter) {
    evaluate_vector_q(mdp, policy, alpha, q, 1e-14);

    std::vector<double> scal(static_cast<std::size_t>(S) * A);
    for (int s = 0; s < S; ++s) {
      for (int a = 0; a < A; ++a) {
        const std::size_t qrow = (static_cast<std::size_t>(s) * A + a) * ext;
        double acc = 0.0;
        for (int c = 0; c < ext; ++c) acc += pref_ext[c] * q[qrow + c];
        scal[static_cast<std::size_t>(s) * A + a] = acc;
      }
    }
    trace.scalarized_q.push_back(scal);
    trace.iterations = iter + 1;

    // Boltzmann improvement pi'(a|s) ~ exp(w_ext . Q(s,a) / alpha).
    std::vector<double> new_policy(static_cast<std::size_t>(S) * A);
    for (int s = 0; s < S; ++s) {
      double mx = -1e300;
      for (int a = 0; a < A; ++a) mx = std::max(mx, scal[static_cast<std::size_t>(s) * A + a]);
      double z = 0.0;
      for (int a = 0; a < A; ++a) {
        const double e = std::exp((scal[static_cast<std::size_t>(s) * A + a] - mx) / alpha);
        new_policy[static_cast<std::size_t>(s) * A + a] = e;
        z += e;
      }
      for (int a = 0; a < A; ++a) new_policy[static_cast<std::size_t>(s) * A + a] /= z;
    }

    double move = 0.0;
    for (std::size_t i = 0; i < policy.size(); ++i) {
      move = std::max(move, std::abs(new_policy[i] - policy[i]));
    }
    policy = std::move(new_policy);
    if (!prev_scal.empty()) {
      double value_move = 0.0;
      for (std::size_t i = 0; i < scal.size(); ++i) {
        value_move = std::max(value_move, std::abs(scal[i] - prev_scal[i]));
      }
      if (value_move < tol && move < tol) break;
    }
    prev_scal = scal;
  }
  trace.final_policy = policy;
  return trace;
}

}  // namespace discs
