#pragma once

#include <cmath>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include "discs/discriminator.hpp"
#include "discs/nn.hpp"

namespace discs {

enum class MethodMode { Discs, Visr, Diayn, SacOnly };

MethodMode method_from_string(const std::string& name);
std::string to_string(MethodMode m);

/// VISR reward: the unit-concentration, normalizer-free special case.
/// Slot 0 is zero and slots 1..m carry the bare mean direction, so the
/// scalarized reward is w . mu(s) in [-1, 1].
template <typename S>
std::vector<double> visr_reward(const VmfDiscriminator<S>& disc, std::span<const S> features,
                                int n) {
  if (!disc.visr_mode) throw std::invalid_argument("visr_reward: discriminator not in visr mode");
  return reward_vectors<S>(disc, features, n);
}

/// Categorical skill classifier for the discrete-skill special case.
template <typename S>
struct CategoricalDiscriminator {
  Mlp<S> net;  // feature_dim -> hidden -> n_skills logits
  int n_skills = 2;

  static CategoricalDiscriminator create(int feature_dim, std::vector<int> hidden,
                                         int n_skills, Rng& rng) {
    if (n_skills < 2) throw std::invalid_argument("diayn_skills must be >= 2");
    CategoricalDiscriminator d;
    d.n_skills = n_skills;
    std::vector<int> sizes;
    sizes.push_back(feature_dim);
    for (int h : hidden) sizes.push_back(h);
    sizes.push_back(n_skills);
    d.net = Mlp<S>::create(std::move(sizes), rng);
    return d;
  }

  int feature_dim() const { return net.input_dim(); }
};

/// Row-wise log-softmax of the classifier logits, n x n_skills.
template <typename S>
std::vector<double> diayn_log_probs(const CategoricalDiscriminator<S>& disc,
                                    std::span<const S> features, int n) {
  auto logits = mlp_forward<S>(disc.net, features, n);
  const int k = disc.n_skills;
  std::vector<double> out(static_cast<std::size_t>(n) * k);
  for (int i = 0; i < n; ++i) {
    const S* row = logits.data() + static_cast<std::size_t>(i) * k;
    double mx = -1e300;
    for (int j = 0; j < k; ++j) mx = std::max(mx, static_cast<double>(row[j]));
    double z = 0.0;
    for (int j = 0; j < k; ++j) z += std::exp(static_cast<double>(row[j]) - mx);
    const double lz = mx + std::log(z);
    for (int j = 0; j < k; ++j) {
      out[static_cast<std::size_t>(i) * k + j] = static_cast<double>(row[j]) - lz;
    }
  }
  return out;
}

/// Scalar reward log q(z|s), floored like the continuous path.
inline double diayn_reward(std::span<const double> log_probs_row, int z,
                           double log_floor = kLogDensityFloor) {
  if (z < 0 || z >= static_cast<int>(log_probs_row.size())) {
    throw std::out_of_range("diayn_reward: skill index out of range");
  }
  return std::max(log_probs_row[z], log_floor);
}

template <typename S>
struct DiaynBatch {
  int n = 0;
  int feature_dim = 0;
  std::vector<std::int32_t> z;
  std::vector<S> features;
};

/// Cross-entropy on the true skill index.
template <typename S>
DiscLossResult<S> diayn_disc_loss_grads(const CategoricalDiscriminator<S>& disc,
                                        const DiaynBatch<S>& batch) {
  if (batch.n <= 0) throw std::invalid_argument("diayn_disc_loss_grads: empty batch");
  const int k = disc.n_skills;
  auto cache = mlp_forward_cached<S>(disc.net, batch.features, batch.n);
  const auto logits = cache.output();

  std::vector<S> upstream(static_cast<std::size_t>(batch.n) * k);
  double loss = 0.0;
  const double inv_n = 1.0 / batch.n;
  for (int i = 0; i < batch.n; ++i) {
    const int z = batch.z[i];
    if (z < 0 || z >= k) throw std::out_of_range("diayn_disc_loss_grads: skill index");
    const S* row = logits.data() + static_cast<std::size_t>(i) * k;
    double mx = -1e300;
    for (int j = 0; j < k; ++j) mx = std::max(mx, static_cast<double>(row[j]));
    double zsum = 0.0;
    for (int j = 0; j < k; ++j) zsum += std::exp(static_cast<double>(row[j]) - mx);
    const double lz = mx + std::log(zsum);
    loss += -(static_cast<double>(row[z]) - lz) * inv_n;
    for (int j = 0; j < k; ++j) {
      const double softmax = std::exp(static_cast<double>(row[j]) - lz);
      const double onehot = (j == z) ? 1.0 : 0.0;
      upstream[static_cast<std::size_t>(i) * k + j] = static_cast<S>((softmax - onehot) * inv_n);
    }
  }

  DiscLossResult<S> out;
  out.loss = static_cast<S>(loss);
  out.grads = mlp_backward<S>(disc.net, cache, upstream);
  return out;
}

}  // namespace discs
