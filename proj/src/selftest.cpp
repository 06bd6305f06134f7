#include "discs/selftest.hpp"

#include <cmath>
#include <functional>

#include "discs/directional.hpp"
#include "discs/discriminator.hpp"
#include "discs/morl.hpp"
#include "discs/nn.hpp"

namespace discs {

namespace {

using Check = std::function<std::string()>;  // empty string = pass

std::string bessel_gradient_grid() {
  for (int m : {2, 3, 4}) {
    for (int i = 0; i < 40; ++i) {
      const double kappa = std::pow(10.0, -2.0 + i * (std::log10(50.0) + 2.0) / 39.0);
      const double h = 1e-4;
      const double fd =
          (log_norm_const(m, kappa + h) - log_norm_const(m, kappa - h)) / (2.0 * h);
      const double an = dlog_norm_const_dkappa(m, kappa);
      if (std::abs(an - fd) >= 1e-5) {
        return "m=" + std::to_string(m) + " kappa=" + std::to_string(kappa) +
               " |analytic-fd|=" + std::to_string(std::abs(an - fd));
      }
      if (an > 0.0 || an <= -1.0) return "derivative out of (-1, 0]";
    }
  }
  return "";
}

std::string density_normalization() {
  for (double kappa : {0.0, 1.0, 5.0, 20.0}) {
    const double logc = log_norm_const(2, kappa);
    const int n = 10000;
    const double h = 2.0 * M_PI / n;
    double integral = 0.5 * (std::exp(logc + kappa * std::cos(0.0)) +
                             std::exp(logc + kappa * std::cos(2.0 * M_PI)));
    for (int i = 1; i < n; ++i) integral += std::exp(logc + kappa * std::cos(i * h));
    integral *= h;
    if (std::abs(integral - 1.0) >= 1e-6) {
      return "kappa=" + std::to_string(kappa) + " integral=" + std::to_string(integral);
    }
  }
  return "";
}

std::string sampler_geometry() {
  Rng rng(12345);
  for (int i = 0; i < 200; ++i) {
    auto u = sample_uniform_sphere(3, rng);
    double n = 0.0;
    for (double x : u.v) n += x * x;
    if (std::abs(std::sqrt(n) - 1.0) > 1e-6) return "uniform sample off the sphere";
  }
  PnParams p(UnitVector({1.0, 0.0}), 8.0);
  double sx = 0.0, sy = 0.0;
  const int draws = 20000;
  for (int i = 0; i < draws; ++i) {
    auto u = sample_pn(p, rng);
    sx += u.v[0];
    sy += u.v[1];
  }
  const double angle = std::abs(std::atan2(sy, sx));
  if (angle > 2.0 * M_PI / 180.0) return "PN mean direction off by " + std::to_string(angle);
  const double resultant = std::sqrt(sx * sx + sy * sy) / draws;
  const double expected = std::exp(log_bessel_i(1.0, 8.0) - log_bessel_i(0.0, 8.0));
  if (std::abs(resultant - expected) > 0.05) return "PN resultant mismatch";
  return "";
}

std::string network_gradients() {
  Rng rng(777);
  auto net = Mlp<double>::create({3, 12, 12, 2}, rng);
  const int batch = 6;
  std::vector<double> in(3 * batch);
  for (auto& x : in) x = rng.uniform(-1.0, 1.0);
  std::vector<double> readout(2 * batch);
  for (auto& x : readout) x = rng.uniform(-1.0, 1.0);

  auto loss = [&]() {
    auto out = mlp_forward<double>(net, in, batch);
    double acc = 0.0;
    for (std::size_t i = 0; i < out.size(); ++i) acc += out[i] * readout[i];
    return acc;
  };
  auto cache = mlp_forward_cached<double>(net, in, batch);
  auto grads = mlp_backward<double>(net, cache, readout);
  for (std::size_t l = 0; l < net.weights.size(); ++l) {
    for (std::size_t i = 0; i < net.weights[l].size(); ++i) {
      const double saved = net.weights[l][i];
      net.weights[l][i] = saved + 1e-5;
      const double up = loss();
      net.weights[l][i] = saved - 1e-5;
      const double down = loss();
      net.weights[l][i] = saved;
      const double fd = (up - down) / 2e-5;
      const double scale = std::max({1e-4, std::abs(fd), std::abs(grads.weights[l][i])});
      if (std::abs(fd - grads.weights[l][i]) / scale >= 1e-3) {
        return "weight gradient mismatch at layer " + std::to_string(l);
      }
    }
  }
  return "";
}

std::string scalarization_identity() {
  Rng rng(999);
  auto disc = VmfDiscriminator<double>::create(2, {16, 16}, 2, false, rng);
  for (int i = 0; i < 200; ++i) {
    std::vector<double> f = {rng.uniform(-10.0, 10.0), rng.uniform(-10.0, 10.0)};
    auto vec = reward_vectors<double>(disc, f, 1);
    auto params = predict_vmf<double>(disc, f);
    const double theta = rng.uniform(0.0, 2.0 * M_PI);
    UnitVector w({std::cos(theta), std::sin(theta)});
    const double scal = vec[0] + w.v[0] * vec[1] + w.v[1] * vec[2];
    if (std::abs(scal - vmf_log_density(w, params)) >= 1e-6) {
      return "identity violated at trial " + std::to_string(i);
    }
  }
  return "";
}

std::string tabular_monotonicity() {
  Rng rng(4242);
  auto mdp = random_finite_mdp(5, 3, 2, 0.9, rng);
  for (int p = 0; p < 4; ++p) {
    const double theta = rng.uniform(0.0, 2.0 * M_PI);
    std::vector<double> w = {std::cos(theta), std::sin(theta)};
    auto trace = tabular_soft_policy_iteration(mdp, w, 0.1);
    for (std::size_t it = 1; it < trace.scalarized_q.size(); ++it) {
      for (std::size_t i = 0; i < trace.scalarized_q[it].size(); ++i) {
        if (trace.scalarized_q[it][i] < trace.scalarized_q[it - 1][i] - 1e-9) {
          return "improvement violated at iteration " + std::to_string(it);
        }
      }
    }
  }
  return "";
}

}  // namespace

std::vector<SelftestResult> run_selftests() {
  const std::vector<std::pair<std::string, Check>> suites = {
      {"normalizer_gradient_grid", bessel_gradient_grid},
      {"vmf_density_normalization", density_normalization},
      {"sphere_sampler_geometry", sampler_geometry},
      {"network_gradient_check", network_gradients},
      {"scalarization_identity", scalarization_identity},
      {"tabular_soft_improvement", tabular_monotonicity},
  };
  std::vector<SelftestResult> results;
  for (const auto& [name, check] : suites) {
    SelftestResult r;
    r.name = name;
    try {
      r.detail = check();
      r.passed = r.detail.empty();
    } catch (const std::exception& e) {
      r.passed = false;
      r.detail = e.what();
    }
    results.push_back(std::move(r));
  }
  return results;
}

}  // namespace discs
