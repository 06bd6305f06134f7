#pragma once

#include <cmath>
#include <cstdint>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include "discs/directional.hpp"
#include "discs/nn.hpp"

namespace discs {

/// Scalarized log-density floor (a 1e-6 density floor, natural log).
inline constexpr double kLogDensityFloor = -13.815510557964274;  // -6 ln 10

enum class DiscVariant { EntireBuffer, Recent, Gamma };

DiscVariant disc_variant_from_string(const std::string& name);
std::string to_string(DiscVariant v);

/// State-conditional vMF posterior over skills. The trunk emits m raw mean
/// components plus one raw concentration; the head normalizes the mean onto
/// the sphere and maps the concentration through softplus and a clamp.
/// With visr_mode the concentration is frozen at 1 and the normalizer slot
/// of emitted rewards is zeroed.
template <typename S>
struct VmfDiscriminator {
  Mlp<S> net;  // feature_dim -> hidden -> (m + 1)
  int m = 2;
  bool visr_mode = false;
  double kappa_min = kKappaMin;
  double kappa_max = kKappaMax;

  static VmfDiscriminator create(int feature_dim, std::vector<int> hidden, int m,
                                 bool visr_mode, Rng& rng) {
    VmfDiscriminator d;
    d.m = m;
    d.visr_mode = visr_mode;
    std::vector<int> sizes;
    sizes.push_back(feature_dim);
    for (int h : hidden) sizes.push_back(h);
    sizes.push_back(m + 1);
    d.net = Mlp<S>::create(std::move(sizes), rng);
    return d;
  }

  int feature_dim() const { return net.input_dim(); }
};

namespace detail {

template <typename S>
double softplus(S x) {
  const double xd = static_cast<double>(x);
  // Stable: ln(1 + e^x) = max(x, 0) + log1p(e^{-|x|}).
  return std::max(xd, 0.0) + std::log1p(std::exp(-std::abs(xd)));
}

/// Head mapping for one raw row: normalized mean direction and clamped
/// concentration. Returns the raw-mean norm (0 signals the basis fallback).
template <typename S>
double vmf_head(const VmfDiscriminator<S>& disc, const S* raw, std::vector<double>& mu,
                double& kappa) {
  const int m = disc.m;
  mu.resize(m);
  double norm_sq = 0.0;
  for (int d = 0; d < m; ++d) {
    mu[d] = static_cast<double>(raw[d]);
    norm_sq += mu[d] * mu[d];
  }
  const double norm = std::sqrt(norm_sq);
  if (norm < 1e-12) {
    // Measure-zero fallback: first basis vector.
    for (int d = 0; d < m; ++d) mu[d] = 0.0;
    mu[0] = 1.0;
    kappa = disc.visr_mode
                ? 1.0
                : std::clamp(softplus(raw[m]), disc.kappa_min, disc.kappa_max);
    return 0.0;
  }
  for (int d = 0; d < m; ++d) mu[d] /= norm;
  kappa = disc.visr_mode ? 1.0
                         : std::clamp(softplus(raw[m]), disc.kappa_min, disc.kappa_max);
  return norm;
}

}  // namespace detail

/// Posterior parameters for a single feature row.
template <typename S>
VmfParams predict_vmf(const VmfDiscriminator<S>& disc, std::span<const S> features) {
  if (features.size() != static_cast<std::size_t>(disc.feature_dim())) {
    throw std::invalid_argument("predict_vmf: feature dimension mismatch");
  }
  auto raw = mlp_forward<S>(disc.net, features, 1);
  std::vector<double> mu;
  double kappa = 0.0;
  detail::vmf_head(disc, raw.data(), mu, kappa);
  UnitVector u;
  u.v = std::move(mu);
  return VmfParams(std::move(u), kappa);
}

/// Extended reward vectors for a feature batch, one (m+1) row per input:
/// slot 0 = ln C_m(kappa), slots 1..m = kappa * mu. In visr_mode slot 0 is
/// zeroed and kappa is 1, so slots carry the bare mean direction.
/// Computed in double so the scalarization identity with the vMF log-density
/// is exact to rounding.
template <typename S>
std::vector<double> reward_vectors(const VmfDiscriminator<S>& disc,
                                   std::span<const S> features, int n) {
  auto raw = mlp_forward<S>(disc.net, features, n);
  const int m = disc.m;
  std::vector<double> out(static_cast<std::size_t>(n) * (m + 1));
  std::vector<double> mu;
  for (int i = 0; i < n; ++i) {
    double kappa = 0.0;
    detail::vmf_head(disc, raw.data() + static_cast<std::size_t>(i) * (m + 1), mu, kappa);
    double* row = out.data() + static_cast<std::size_t>(i) * (m + 1);
    row[0] = disc.visr_mode ? 0.0 : log_norm_const(m, kappa);
    for (int d = 0; d < m; ++d) row[1 + d] = kappa * mu[d];
  }
  return out;
}

/// Batch view for discriminator training: realized skills, features, and the
/// episode timestep (used by the Gamma variant's discount weights).
template <typename S>
struct DiscBatch {
  int n = 0;
  int m = 0;
  int feature_dim = 0;
  std::vector<S> w;         // n x m, unit rows
  std::vector<S> features;  // n x feature_dim
  std::vector<std::int32_t> t;
};

template <typename S>
struct DiscLossResult {
  S loss = S(0);
  MlpGrads<S> grads;
};

/// Mean negative log-density, gamma^t-weighted for the Gamma variant.
/// Per-sample log-densities are floored before averaging; floored rows do not
/// contribute gradient. The concentration path backpropagates through
/// clamp(softplus(.)) with the analytic normalizer derivative; the mean path
/// through the sphere normalization.
template <typename S>
DiscLossResult<S> disc_loss_grads(const VmfDiscriminator<S>& disc, const DiscBatch<S>& batch,
                                  DiscVariant variant, double gamma,
                                  double log_floor = kLogDensityFloor) {
  if (batch.n <= 0) throw std::invalid_argument("disc_loss_grads: empty batch");
  if (batch.m != disc.m) throw std::invalid_argument("disc_loss_grads: m mismatch");
  const int m = disc.m;
  auto cache = mlp_forward_cached<S>(disc.net, batch.features, batch.n);
  const auto raw = cache.output();

  std::vector<S> upstream(static_cast<std::size_t>(batch.n) * (m + 1), S(0));
  double loss = 0.0;
  const double inv_n = 1.0 / batch.n;
  std::vector<double> mu;
  for (int i = 0; i < batch.n; ++i) {
    const std::size_t row = static_cast<std::size_t>(i) * (m + 1);
    double kappa = 0.0;
    const double mu_norm = detail::vmf_head(disc, raw.data() + row, mu, kappa);
    double dot = 0.0;
    for (int d = 0; d < m; ++d) {
      dot += static_cast<double>(batch.w[static_cast<std::size_t>(i) * m + d]) * mu[d];
    }
    const double logq = disc.visr_mode ? dot : log_norm_const(m, kappa) + kappa * dot;
    const double weight =
        variant == DiscVariant::Gamma ? std::pow(gamma, batch.t[i]) : 1.0;
    const bool floored = logq < log_floor;
    loss += -weight * std::max(logq, log_floor) * inv_n;
    if (floored) continue;

    const double coeff = -weight * inv_n;  // d(loss)/d(logq)
    // Mean path: d(logq)/d(mu_raw) = kappa * (I - mu mu^T) w / ||mu_raw||.
    if (mu_norm > 0.0) {
      const double scale = (disc.visr_mode ? 1.0 : kappa) / mu_norm;
      for (int d = 0; d < m; ++d) {
        const double wd = static_cast<double>(batch.w[static_cast<std::size_t>(i) * m + d]);
        upstream[row + d] = static_cast<S>(coeff * scale * (wd - dot * mu[d]));
      }
    }
    // Concentration path: d(logq)/d(kappa) = dlogC/dkappa + w.mu, then through
    // the softplus unless the clamp is active or the mode freezes kappa.
    if (!disc.visr_mode) {
      const double sp = detail::softplus(raw[row + m]);
      const bool clamped = sp <= disc.kappa_min || sp >= disc.kappa_max;
      if (!clamped) {
        const double dlogq_dk = dlog_norm_const_dkappa(m, kappa) + dot;
        const double sig = 1.0 / (1.0 + std::exp(-static_cast<double>(raw[row + m])));
        upstream[row + m] = static_cast<S>(coeff * dlogq_dk * sig);
      }
    }
  }

  DiscLossResult<S> out;
  out.loss = static_cast<S>(loss);
  out.grads = mlp_backward<S>(disc.net, cache, upstream);
  return out;
}

/// Floors the scalarized reward at `log_floor` by raising the slot-0 channel
/// (preference weight exactly 1), leaving the directional slots untouched.
inline void apply_reward_floor(std::span<double> reward_vec, std::span<const double> pref_ext,
                               double log_floor = kLogDensityFloor) {
  double scal = 0.0;
  for (std::size_t c = 0; c < reward_vec.size(); ++c) scal += pref_ext[c] * reward_vec[c];
  if (scal < log_floor) reward_vec[0] += log_floor - scal;
}

template <typename S>
struct DiscUpdateResult {
  S loss_before = S(0);
  S loss_after = S(0);
};

/// One Adam step on the discriminator loss. The post-update loss on the same
/// batch is recomputed and reported (improvement is monitored, not enforced).
template <typename S>
DiscUpdateResult<S> disc_update(VmfDiscriminator<S>& disc, AdamState<S>& adam,
                                const DiscBatch<S>& batch, DiscVariant variant,
                                double gamma, double log_floor = kLogDensityFloor) {
  auto before = disc_loss_grads<S>(disc, batch, variant, gamma, log_floor);
  adam_step(disc.net, before.grads, adam);
  auto after = disc_loss_grads<S>(disc, batch, variant, gamma, log_floor);
  return {before.loss, after.loss};
}

}  // namespace discs
