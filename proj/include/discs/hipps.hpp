#pragma once

#include <span>
#include <stdexcept>
#include <string>

#include "discs/discriminator.hpp"
#include "discs/morl.hpp"

namespace discs {

enum class HippsSource { Posterior, Prior };

HippsSource hipps_source_from_string(const std::string& name);
std::string to_string(HippsSource s);

/// Hindsight preference augmentation: k is the total batch multiplier
/// (k = 1 disables relabeling entirely).
struct HippsConfig {
  int k = 1;
  HippsSource source = HippsSource::Posterior;

  void validate() const {
    if (k < 1) throw std::invalid_argument("hipps_k must be >= 1");
  }
};

/// Expands each tuple into k rows: the original plus (k-1) copies whose
/// preference is redrawn from the discriminator's PN-approximated posterior
/// at the tuple's state (or from the uniform prior). Everything except the
/// preference slot is shared; rewards are left for the caller, which computes
/// them once per original state.
///
/// `features` holds the discriminator inputs for the original rows, one row
/// per tuple. With k = 1 the batch is returned unchanged and the rng is not
/// consumed.
template <typename S>
Batch<S> hipps_augment(const Batch<S>& batch, const HippsConfig& cfg,
                       const VmfDiscriminator<S>* disc, std::span<const S> features,
                       Rng& rng) {
  cfg.validate();
  if (cfg.k == 1) return batch;
  if (batch.skill_dim != batch.m) {
    throw std::invalid_argument("hipps_augment: requires continuous skills (skill_dim == m)");
  }
  if (cfg.source == HippsSource::Posterior && disc == nullptr) {
    throw std::invalid_argument("hipps_augment: posterior source needs a discriminator");
  }

  const int k = cfg.k;
  const int m = batch.m;
  const int ext = m + 1;

  // One posterior per original tuple.
  std::vector<double> mu_all;
  std::vector<double> kappa_all;
  if (cfg.source == HippsSource::Posterior) {
    auto raw = mlp_forward<S>(disc->net, features, batch.n);
    mu_all.resize(static_cast<std::size_t>(batch.n) * m);
    kappa_all.resize(batch.n);
    std::vector<double> mu;
    for (int i = 0; i < batch.n; ++i) {
      double kappa = 0.0;
      detail::vmf_head(*disc, raw.data() + static_cast<std::size_t>(i) * ext, mu, kappa);
      for (int d = 0; d < m; ++d) mu_all[static_cast<std::size_t>(i) * m + d] = mu[d];
      kappa_all[i] = kappa;
    }
  }

  Batch<S> out;
  out.n = batch.n * k;
  out.state_dim = batch.state_dim;
  out.action_dim = batch.action_dim;
  out.skill_dim = batch.skill_dim;
  out.m = m;
  out.skill.resize(static_cast<std::size_t>(out.n) * m);
  out.pref_ext.resize(static_cast<std::size_t>(out.n) * ext);
  out.state.resize(static_cast<std::size_t>(out.n) * batch.state_dim);
  out.action.resize(static_cast<std::size_t>(out.n) * batch.action_dim);
  out.next_state.resize(static_cast<std::size_t>(out.n) * batch.state_dim);
  out.t.resize(out.n);
  out.terminal.resize(out.n);
  out.relabeled.resize(out.n);

  auto copy_row = [&](int src, int dst) {
    std::copy_n(&batch.state[static_cast<std::size_t>(src) * batch.state_dim], batch.state_dim,
                &out.state[static_cast<std::size_t>(dst) * batch.state_dim]);
    std::copy_n(&batch.action[static_cast<std::size_t>(src) * batch.action_dim],
                batch.action_dim, &out.action[static_cast<std::size_t>(dst) * batch.action_dim]);
    std::copy_n(&batch.next_state[static_cast<std::size_t>(src) * batch.state_dim],
                batch.state_dim, &out.next_state[static_cast<std::size_t>(dst) * batch.state_dim]);
    out.t[dst] = batch.t[src];
    out.terminal[dst] = batch.terminal[src];
  };

  std::vector<double> mu(m);
  for (int i = 0; i < batch.n; ++i) {
    for (int j = 0; j < k; ++j) {
      const int dst = i * k + j;
      copy_row(i, dst);
      S* skill_row = &out.skill[static_cast<std::size_t>(dst) * m];
      S* pref_row = &out.pref_ext[static_cast<std::size_t>(dst) * ext];
      if (j == 0) {
        std::copy_n(&batch.skill[static_cast<std::size_t>(i) * m], m, skill_row);
        std::copy_n(&batch.pref_ext[static_cast<std::size_t>(i) * ext], ext, pref_row);
        out.relabeled[dst] = 0;
        continue;
      }
      UnitVector w_new;
      if (cfg.source == HippsSource::Prior) {
        w_new = sample_uniform_sphere(m, rng);
      } else {
        for (int d = 0; d < m; ++d) mu[d] = mu_all[static_cast<std::size_t>(i) * m + d];
        UnitVector mean;
        mean.v = mu;
        w_new = sample_pn(PnParams(std::move(mean), kappa_all[i]), rng);
      }
      pref_row[0] = S(1);
      for (int d = 0; d < m; ++d) {
        skill_row[d] = static_cast<S>(w_new.v[d]);
        pref_row[1 + d] = static_cast<S>(w_new.v[d]);
      }
      out.relabeled[dst] = 1;
    }
  }
  return out;
}

}  // namespace discs
