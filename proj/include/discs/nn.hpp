#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include "discs/rng.hpp"
#include "discs/tensor.hpp"

namespace discs {

namespace detail {

// Row-major matrix kernels with a fixed accumulation order over the inner
// dimension. Results are bitwise reproducible across processes and heap
// layouts: the inner j loops are elementwise (safe to vectorize), while each
// output element accumulates its terms in a fixed sequence that IEEE
// semantics forbid the compiler from reordering.

// Full 2x16 tile of c += a * b with compile-time trip counts; the
// accumulators stay in registers and each c element still sums its terms
// strictly in k order, so tiling never changes the rounding.
template <typename S>
inline void gemm_tile(const S* a, const S* b, S* c, int i0, int j0, int inner, int cols) {
  S acc[2][16];
  for (int ii = 0; ii < 2; ++ii) {
    const S* c_row = c + static_cast<std::size_t>(i0 + ii) * cols + j0;
    for (int jj = 0; jj < 16; ++jj) acc[ii][jj] = c_row[jj];
  }
  for (int k = 0; k < inner; ++k) {
    const S* b_row = b + static_cast<std::size_t>(k) * cols + j0;
    for (int ii = 0; ii < 2; ++ii) {
      const S aik = a[static_cast<std::size_t>(i0 + ii) * inner + k];
      for (int jj = 0; jj < 16; ++jj) acc[ii][jj] += aik * b_row[jj];
    }
  }
  for (int ii = 0; ii < 2; ++ii) {
    S* c_row = c + static_cast<std::size_t>(i0 + ii) * cols + j0;
    for (int jj = 0; jj < 16; ++jj) c_row[jj] = acc[ii][jj];
  }
}

// Simple row-at-a-time path for tile edges.
template <typename S>
inline void gemm_rows_simple(const S* a, const S* b, S* c, int i_begin, int i_end, int j_begin,
                             int j_end, int inner, int cols) {
  for (int i = i_begin; i < i_end; ++i) {
    const S* a_row = a + static_cast<std::size_t>(i) * inner;
    S* c_row = c + static_cast<std::size_t>(i) * cols;
    for (int k = 0; k < inner; ++k) {
      const S aik = a_row[k];
      const S* b_row = b + static_cast<std::size_t>(k) * cols;
      for (int j = j_begin; j < j_end; ++j) c_row[j] += aik * b_row[j];
    }
  }
}

// c(rows x cols) += a(rows x inner) * b(inner x cols)
template <typename S>
void gemm_accumulate(const S* a, const S* b, S* c, int rows, int inner, int cols) {
  const int row_full = rows & ~1;
  const int col_full = cols & ~15;
  for (int i0 = 0; i0 < row_full; i0 += 2) {
    for (int j0 = 0; j0 < col_full; j0 += 16) gemm_tile(a, b, c, i0, j0, inner, cols);
    if (col_full < cols) gemm_rows_simple(a, b, c, i0, i0 + 2, col_full, cols, inner, cols);
  }
  if (row_full < rows) gemm_rows_simple(a, b, c, row_full, rows, 0, cols, inner, cols);
}

// gw(in x out) += a^T(in x batch) * d(batch x out), a stored batch x in.
// The accumulation dimension is the batch; per-element order is the batch
// order regardless of tiling.
template <typename S>
inline void atb_tile(const S* a, const S* d, S* gw, int k0, int j0, int batch, int in,
                     int out) {
  S acc[2][16];
  for (int kk = 0; kk < 2; ++kk) {
    const S* gw_row = gw + static_cast<std::size_t>(k0 + kk) * out + j0;
    for (int jj = 0; jj < 16; ++jj) acc[kk][jj] = gw_row[jj];
  }
  for (int i = 0; i < batch; ++i) {
    const S* d_row = d + static_cast<std::size_t>(i) * out + j0;
    const S* a_row = a + static_cast<std::size_t>(i) * in + k0;
    for (int kk = 0; kk < 2; ++kk) {
      const S aik = a_row[kk];
      for (int jj = 0; jj < 16; ++jj) acc[kk][jj] += aik * d_row[jj];
    }
  }
  for (int kk = 0; kk < 2; ++kk) {
    S* gw_row = gw + static_cast<std::size_t>(k0 + kk) * out + j0;
    for (int jj = 0; jj < 16; ++jj) gw_row[jj] = acc[kk][jj];
  }
}

template <typename S>
inline void atb_rows_simple(const S* a, const S* d, S* gw, int k_begin, int k_end, int j_begin,
                            int j_end, int batch, int in, int out) {
  for (int i = 0; i < batch; ++i) {
    const S* a_row = a + static_cast<std::size_t>(i) * in;
    const S* d_row = d + static_cast<std::size_t>(i) * out;
    for (int k = k_begin; k < k_end; ++k) {
      const S aik = a_row[k];
      S* gw_row = gw + static_cast<std::size_t>(k) * out;
      for (int j = j_begin; j < j_end; ++j) gw_row[j] += aik * d_row[j];
    }
  }
}

template <typename S>
void gemm_at_b_accumulate(const S* a, const S* d, S* gw, int batch, int in, int out) {
  const int in_full = in & ~1;
  const int out_full = out & ~15;
  for (int k0 = 0; k0 < in_full; k0 += 2) {
    for (int j0 = 0; j0 < out_full; j0 += 16) atb_tile(a, d, gw, k0, j0, batch, in, out);
    if (out_full < out) atb_rows_simple(a, d, gw, k0, k0 + 2, out_full, out, batch, in, out);
  }
  if (in_full < in) atb_rows_simple(a, d, gw, in_full, in, 0, out, batch, in, out);
}

}  // namespace detail

/// Fully-connected network with rectifier hidden layers and an affine output
/// layer. Templated on the scalar so the float32 training path and the
/// double-precision gradient-check path share one implementation.
template <typename S>
struct Mlp {
  std::vector<int> layer_sizes;        // [in, hidden..., out]
  std::vector<std::vector<S>> weights; // layer l: layer_sizes[l] x layer_sizes[l+1], row-major
  std::vector<std::vector<S>> biases;  // layer l: layer_sizes[l+1]

  static Mlp create(std::vector<int> sizes, Rng& rng) {
    if (sizes.size() < 2) throw std::invalid_argument("Mlp: need at least two layer sizes");
    Mlp net;
    net.layer_sizes = std::move(sizes);
    const int n_layers = static_cast<int>(net.layer_sizes.size()) - 1;
    net.weights.resize(n_layers);
    net.biases.resize(n_layers);
    for (int l = 0; l < n_layers; ++l) {
      const int fan_in = net.layer_sizes[l];
      const int fan_out = net.layer_sizes[l + 1];
      const double bound = 1.0 / std::sqrt(static_cast<double>(fan_in));
      net.weights[l].resize(static_cast<std::size_t>(fan_in) * fan_out);
      net.biases[l].resize(fan_out);
      for (auto& w : net.weights[l]) w = static_cast<S>(rng.uniform(-bound, bound));
      for (auto& b : net.biases[l]) b = static_cast<S>(rng.uniform(-bound, bound));
    }
    return net;
  }

  int input_dim() const { return layer_sizes.front(); }
  int output_dim() const { return layer_sizes.back(); }
  int layer_count() const { return static_cast<int>(weights.size()); }

  std::size_t param_count() const {
    std::size_t n = 0;
    for (std::size_t l = 0; l < weights.size(); ++l) n += weights[l].size() + biases[l].size();
    return n;
  }
};

/// Parameter-shaped gradient (or moment) storage plus the input gradient.
template <typename S>
struct MlpGrads {
  std::vector<std::vector<S>> weights;
  std::vector<std::vector<S>> biases;
  std::vector<S> input;  // batch x input_dim

  static MlpGrads zeros_like(const Mlp<S>& net, int batch = 0) {
    MlpGrads g;
    g.weights.resize(net.weights.size());
    g.biases.resize(net.biases.size());
    for (std::size_t l = 0; l < net.weights.size(); ++l) {
      g.weights[l].assign(net.weights[l].size(), S(0));
      g.biases[l].assign(net.biases[l].size(), S(0));
    }
    g.input.assign(static_cast<std::size_t>(batch) * net.input_dim(), S(0));
    return g;
  }

  void accumulate(const MlpGrads& other, S scale = S(1)) {
    for (std::size_t l = 0; l < weights.size(); ++l) {
      for (std::size_t i = 0; i < weights[l].size(); ++i) weights[l][i] += scale * other.weights[l][i];
      for (std::size_t i = 0; i < biases[l].size(); ++i) biases[l][i] += scale * other.biases[l][i];
    }
  }
};

/// Forward-pass activation cache; acts[0] is the input, acts[l+1] the output
/// of layer l (post-rectifier for hidden layers).
template <typename S>
struct MlpActivations {
  int batch = 0;
  std::vector<std::vector<S>> acts;

  std::span<const S> output() const { return acts.back(); }
};

template <typename S>
MlpActivations<S> mlp_forward_cached(const Mlp<S>& net, std::span<const S> input, int batch) {
  const int in_dim = net.input_dim();
  if (static_cast<std::size_t>(batch) * in_dim != input.size()) {
    throw std::invalid_argument("mlp_forward: input size does not match batch x input_dim");
  }
  MlpActivations<S> cache;
  cache.batch = batch;
  cache.acts.resize(net.layer_count() + 1);
  cache.acts[0].assign(input.begin(), input.end());

  for (int l = 0; l < net.layer_count(); ++l) {
    const int n_in = net.layer_sizes[l];
    const int n_out = net.layer_sizes[l + 1];
    auto& y = cache.acts[l + 1];
    y.resize(static_cast<std::size_t>(batch) * n_out);
    // Rows start from the bias, then accumulate the product terms in order.
    for (int i = 0; i < batch; ++i) {
      std::copy_n(net.biases[l].data(), n_out, y.data() + static_cast<std::size_t>(i) * n_out);
    }
    detail::gemm_accumulate<S>(cache.acts[l].data(), net.weights[l].data(), y.data(), batch,
                               n_in, n_out);
    if (l + 1 < net.layer_count()) {
      for (auto& v : y) v = std::max(v, S(0));
    }
  }
  return cache;
}

template <typename S>
std::vector<S> mlp_forward(const Mlp<S>& net, std::span<const S> input, int batch) {
  auto cache = mlp_forward_cached(net, input, batch);
  return std::move(cache.acts.back());
}

/// Reverse-mode gradients of the forward map. `upstream` is dL/d(output),
/// batch x output_dim. Returns parameter gradients and dL/d(input).
template <typename S>
MlpGrads<S> mlp_backward(const Mlp<S>& net, const MlpActivations<S>& cache,
                         std::span<const S> upstream) {
  const int batch = cache.batch;
  if (upstream.size() != static_cast<std::size_t>(batch) * net.output_dim()) {
    throw std::invalid_argument("mlp_backward: upstream size mismatch");
  }
  MlpGrads<S> grads = MlpGrads<S>::zeros_like(net, batch);
  std::vector<S> delta(upstream.begin(), upstream.end());
  std::vector<S> w_transposed;

  for (int l = net.layer_count() - 1; l >= 0; --l) {
    const int n_in = net.layer_sizes[l];
    const int n_out = net.layer_sizes[l + 1];
    detail::gemm_at_b_accumulate<S>(cache.acts[l].data(), delta.data(),
                                    grads.weights[l].data(), batch, n_in, n_out);
    for (int i = 0; i < batch; ++i) {
      const S* d_row = delta.data() + static_cast<std::size_t>(i) * n_out;
      for (int j = 0; j < n_out; ++j) grads.biases[l][j] += d_row[j];
    }

    // prev_delta = delta * W^T, via an explicit transpose so the inner loop
    // stays contiguous and elementwise.
    w_transposed.resize(static_cast<std::size_t>(n_out) * n_in);
    for (int k = 0; k < n_in; ++k) {
      for (int j = 0; j < n_out; ++j) {
        w_transposed[static_cast<std::size_t>(j) * n_in + k] =
            net.weights[l][static_cast<std::size_t>(k) * n_out + j];
      }
    }
    std::vector<S> prev_delta(static_cast<std::size_t>(batch) * n_in, S(0));
    detail::gemm_accumulate<S>(delta.data(), w_transposed.data(), prev_delta.data(), batch,
                               n_out, n_in);
    if (l > 0) {
      // Rectifier mask: hidden activations are post-max(0, .), so > 0 marks
      // the pass-through region.
      const auto& a = cache.acts[l];
      for (std::size_t i = 0; i < prev_delta.size(); ++i) {
        if (!(a[i] > S(0))) prev_delta[i] = S(0);
      }
    }
    delta = std::move(prev_delta);
  }
  grads.input = std::move(delta);
  return grads;
}

/// Adam moments and hyperparameters for one Mlp.
template <typename S>
struct AdamState {
  std::vector<std::vector<S>> m_w, v_w, m_b, v_b;
  std::int64_t step = 0;
  S lr = S(3e-4);
  S beta1 = S(0.9);
  S beta2 = S(0.999);
  S eps = S(1e-8);

  static AdamState like(const Mlp<S>& net, S lr_value) {
    AdamState st;
    st.lr = lr_value;
    const std::size_t n_layers = net.weights.size();
    st.m_w.resize(n_layers);
    st.v_w.resize(n_layers);
    st.m_b.resize(n_layers);
    st.v_b.resize(n_layers);
    for (std::size_t l = 0; l < n_layers; ++l) {
      st.m_w[l].assign(net.weights[l].size(), S(0));
      st.v_w[l].assign(net.weights[l].size(), S(0));
      st.m_b[l].assign(net.biases[l].size(), S(0));
      st.v_b[l].assign(net.biases[l].size(), S(0));
    }
    return st;
  }
};

namespace detail {

template <typename S>
void adam_update_array(std::vector<S>& param, const std::vector<S>& grad,
                       std::vector<S>& m, std::vector<S>& v, S lr, S inv_bias1, S inv_bias2,
                       S beta1, S beta2, S eps) {
  for (std::size_t i = 0; i < param.size(); ++i) {
    const S g = grad[i];
    if (!std::isfinite(static_cast<double>(g))) {
      throw std::runtime_error("adam_step: nonfinite gradient");
    }
    m[i] = beta1 * m[i] + (S(1) - beta1) * g;
    v[i] = beta2 * v[i] + (S(1) - beta2) * g * g;
    const S m_hat = m[i] * inv_bias1;
    const S v_hat = v[i] * inv_bias2;
    param[i] -= lr * m_hat / (std::sqrt(v_hat) + eps);
  }
}

}  // namespace detail

/// One bias-corrected Adam step. Throws on nonfinite gradients.
template <typename S>
void adam_step(Mlp<S>& net, const MlpGrads<S>& grads, AdamState<S>& state) {
  state.step += 1;
  const double t = static_cast<double>(state.step);
  const S inv_bias1 = static_cast<S>(1.0 / (1.0 - std::pow(static_cast<double>(state.beta1), t)));
  const S inv_bias2 = static_cast<S>(1.0 / (1.0 - std::pow(static_cast<double>(state.beta2), t)));
  for (std::size_t l = 0; l < net.weights.size(); ++l) {
    detail::adam_update_array(net.weights[l], grads.weights[l], state.m_w[l], state.v_w[l],
                              state.lr, inv_bias1, inv_bias2, state.beta1, state.beta2, state.eps);
    detail::adam_update_array(net.biases[l], grads.biases[l], state.m_b[l], state.v_b[l],
                              state.lr, inv_bias1, inv_bias2, state.beta1, state.beta2, state.eps);
  }
}

/// target <- tau * online + (1 - tau) * target, elementwise.
template <typename S>
void polyak_update(Mlp<S>& target, const Mlp<S>& online, S tau) {
  if (target.layer_sizes != online.layer_sizes) {
    throw std::invalid_argument("polyak_update: architecture mismatch");
  }
  for (std::size_t l = 0; l < target.weights.size(); ++l) {
    for (std::size_t i = 0; i < target.weights[l].size(); ++i) {
      target.weights[l][i] = tau * online.weights[l][i] + (S(1) - tau) * target.weights[l][i];
    }
    for (std::size_t i = 0; i < target.biases[l].size(); ++i) {
      target.biases[l][i] = tau * online.biases[l][i] + (S(1) - tau) * target.biases[l][i];
    }
  }
}

inline constexpr double kLogStdMin = -20.0;
inline constexpr double kLogStdMax = 2.0;
inline constexpr double kTanhEps = 1e-6;

/// Reparameterized tanh-squashed Gaussian draw with everything the reverse
/// pass needs. The policy net emits rows [mean(dim), log_std_raw(dim)].
template <typename S>
struct SquashedGaussian {
  int batch = 0;
  int dim = 0;
  std::vector<S> mean, log_std_raw, log_std, eps, pre_tanh, action;  // batch x dim
  std::vector<S> log_prob;                                           // batch
};

template <typename S>
SquashedGaussian<S> squashed_gaussian_sample(std::span<const S> policy_raw, int batch, int dim,
                                             Rng& rng) {
  if (policy_raw.size() != static_cast<std::size_t>(batch) * 2 * dim) {
    throw std::invalid_argument("squashed_gaussian_sample: raw output size mismatch");
  }
  SquashedGaussian<S> out;
  out.batch = batch;
  out.dim = dim;
  const std::size_t n = static_cast<std::size_t>(batch) * dim;
  out.mean.resize(n);
  out.log_std_raw.resize(n);
  out.log_std.resize(n);
  out.eps.resize(n);
  out.pre_tanh.resize(n);
  out.action.resize(n);
  out.log_prob.assign(batch, S(0));
  constexpr double kHalfLog2Pi = 0.9189385332046727;  // ln(2 pi) / 2

  for (int i = 0; i < batch; ++i) {
    S lp = S(0);
    for (int d = 0; d < dim; ++d) {
      const std::size_t k = static_cast<std::size_t>(i) * dim + d;
      const S mu = policy_raw[static_cast<std::size_t>(i) * 2 * dim + d];
      const S raw = policy_raw[static_cast<std::size_t>(i) * 2 * dim + dim + d];
      const S ls = std::clamp(raw, static_cast<S>(kLogStdMin), static_cast<S>(kLogStdMax));
      const S sigma = std::exp(ls);
      const S e = static_cast<S>(rng.normal());
      const S u = mu + sigma * e;
      const S a = std::tanh(u);
      out.mean[k] = mu;
      out.log_std_raw[k] = raw;
      out.log_std[k] = ls;
      out.eps[k] = e;
      out.pre_tanh[k] = u;
      out.action[k] = a;
      lp += -ls - static_cast<S>(kHalfLog2Pi) - S(0.5) * e * e -
            std::log(S(1) - a * a + static_cast<S>(kTanhEps));
    }
    out.log_prob[i] = lp;
  }
  return out;
}

/// Deterministic evaluation action: tanh of the mean head.
template <typename S>
std::vector<S> squashed_gaussian_mode(std::span<const S> policy_raw, int batch, int dim) {
  std::vector<S> action(static_cast<std::size_t>(batch) * dim);
  for (int i = 0; i < batch; ++i) {
    for (int d = 0; d < dim; ++d) {
      action[static_cast<std::size_t>(i) * dim + d] =
          std::tanh(policy_raw[static_cast<std::size_t>(i) * 2 * dim + d]);
    }
  }
  return action;
}

/// Chain rule through the squashed draw: converts dL/d(action) and
/// dL/d(log_prob) into dL/d(policy_raw), the upstream for mlp_backward on
/// the policy net.
template <typename S>
std::vector<S> squashed_gaussian_backward(const SquashedGaussian<S>& sg,
                                          std::span<const S> grad_action,
                                          std::span<const S> grad_log_prob) {
  const int batch = sg.batch;
  const int dim = sg.dim;
  std::vector<S> grad_raw(static_cast<std::size_t>(batch) * 2 * dim, S(0));
  for (int i = 0; i < batch; ++i) {
    const S glp = grad_log_prob.empty() ? S(0) : grad_log_prob[i];
    for (int d = 0; d < dim; ++d) {
      const std::size_t k = static_cast<std::size_t>(i) * dim + d;
      const S a = sg.action[k];
      const S v = S(1) - a * a;                       // tanh'
      const S ve = v + static_cast<S>(kTanhEps);
      const S dlp_du = S(2) * a * v / ve;             // d(-ln(1-a^2+eps))/du
      const S ga = grad_action.empty() ? S(0) : grad_action[k];
      const S gu = glp * dlp_du + ga * v;
      const S sigma = std::exp(sg.log_std[k]);
      const bool clamped = sg.log_std_raw[k] <= static_cast<S>(kLogStdMin) ||
                           sg.log_std_raw[k] >= static_cast<S>(kLogStdMax);
      grad_raw[static_cast<std::size_t>(i) * 2 * dim + d] = gu;
      grad_raw[static_cast<std::size_t>(i) * 2 * dim + dim + d] =
          clamped ? S(0) : glp * S(-1) + gu * sigma * sg.eps[k];
    }
  }
  return grad_raw;
}

/// Named-tensor export of the parameters, "<prefix>/w0", "<prefix>/b0", ...
inline void append_mlp_tensors(const Mlp<float>& net, const std::string& prefix,
                               std::vector<NamedTensor>& out) {
  for (int l = 0; l < net.layer_count(); ++l) {
    out.push_back({prefix + "/w" + std::to_string(l),
                   Tensor({net.layer_sizes[l], net.layer_sizes[l + 1]}, net.weights[l])});
    out.push_back({prefix + "/b" + std::to_string(l),
                   Tensor({net.layer_sizes[l + 1]}, net.biases[l])});
  }
}

}  // namespace discs
