#include "discs/directional.hpp"

#include <cmath>
#include <limits>
#include <numeric>
#include <stdexcept>
#include <string>

namespace discs {

namespace {

double norm2(std::span<const double> x) {
  double s = 0.0;
  for (double xi : x) s += xi * xi;
  return std::sqrt(s);
}

void require_unit(std::span<const double> x, const char* what) {
  if (x.size() < 2) {
    throw std::invalid_argument(std::string(what) + ": dimension must be >= 2");
  }
  const double n = norm2(x);
  if (std::abs(n - 1.0) > 1e-6) {
    throw std::invalid_argument(std::string(what) + ": not unit norm (" +
                                std::to_string(n) + ")");
  }
}

}  // namespace

UnitVector::UnitVector(std::vector<double> components) : v(std::move(components)) {
  require_unit(v, "UnitVector");
}

UnitVector UnitVector::normalized(std::vector<double> raw) {
  const double n = norm2(raw);
  if (!(n > 0.0) || !std::isfinite(n)) {
    throw std::invalid_argument("UnitVector::normalized: zero or nonfinite norm");
  }
  for (double& x : raw) x /= n;
  UnitVector u;
  u.v = std::move(raw);
  require_unit(u.v, "UnitVector::normalized");
  return u;
}

double UnitVector::dot(std::span<const double> other) const {
  if (other.size() != v.size()) {
    throw std::invalid_argument("UnitVector::dot: dimension mismatch");
  }
  return std::inner_product(v.begin(), v.end(), other.begin(), 0.0);
}

VmfParams::VmfParams(UnitVector mean, double concentration)
    : mu(std::move(mean)), kappa(concentration) {
  if (kappa < kKappaMin || kappa > kKappaMax) {
    throw std::domain_error("VmfParams: kappa outside [KAPPA_MIN, KAPPA_MAX]");
  }
}

PnParams::PnParams(UnitVector mean, double concentration)
    : mu(std::move(mean)), kappa(concentration) {
  if (!(kappa > 0.0)) {
    throw std::domain_error("PnParams: kappa must be positive");
  }
}

double log_bessel_i(double order, double x) {
  if (order < 0.0) throw std::domain_error("log_bessel_i: negative order");
  if (x < 0.0) throw std::domain_error("log_bessel_i: negative argument");
  if (x == 0.0) {
    return order == 0.0 ? 0.0 : -std::numeric_limits<double>::infinity();
  }

  // The asymptotic branch needs x to dominate order^2; the series is exact
  // (all positive terms) and is kept wherever it stays cheap.
  const double cutoff = std::max(20.0, order * order);
  if (x < cutoff) {
    const double half = 0.5 * x;
    const double h2 = half * half;
    double term = std::exp(order * std::log(half) - std::lgamma(order + 1.0));
    double sum = term;
    for (int k = 1; k < 500; ++k) {
      term *= h2 / (k * (k + order));
      sum += term;
      if (term < sum * 1e-18) break;
    }
    return std::log(sum);
  }

  // Hankel expansion: I_nu(x) ~ e^x / sqrt(2 pi x) * sum_k (-1)^k a_k(nu)/x^k.
  const double mu4 = 4.0 * order * order;
  double term = 1.0;
  double sum = 1.0;
  for (int k = 1; k <= 12; ++k) {
    const double odd = 2.0 * k - 1.0;
    term *= -(mu4 - odd * odd) / (8.0 * k * x);
    sum += term;
    if (std::abs(term) < 1e-18 * std::abs(sum)) break;
  }
  return x - 0.5 * std::log(2.0 * M_PI * x) + std::log(sum);
}

double log_norm_const(int m, double kappa) {
  if (m < 2) throw std::domain_error("log_norm_const: m must be >= 2");
  if (kappa < 0.0) throw std::domain_error("log_norm_const: negative kappa");
  const double half_m = 0.5 * m;
  if (kappa == 0.0) {
    // Uniform density on S^{m-1}: Gamma(m/2) / (2 pi^{m/2}).
    return std::lgamma(half_m) - std::log(2.0) - half_m * std::log(M_PI);
  }
  const double nu = half_m - 1.0;
  return nu * std::log(kappa) - half_m * std::log(2.0 * M_PI) -
         log_bessel_i(nu, kappa);
}

double dlog_norm_const_dkappa(int m, double kappa) {
  if (m < 2) throw std::domain_error("dlog_norm_const_dkappa: m must be >= 2");
  if (kappa < 0.0) throw std::domain_error("dlog_norm_const_dkappa: negative kappa");
  if (kappa == 0.0) return 0.0;
  const double nu = 0.5 * m - 1.0;
  return -std::exp(log_bessel_i(nu + 1.0, kappa) - log_bessel_i(nu, kappa));
}

double vmf_log_density_raw(std::span<const double> w, std::span<const double> mu,
                           double kappa) {
  if (w.size() != mu.size()) {
    throw std::invalid_argument("vmf_log_density: dimension mismatch");
  }
  const double dot = std::inner_product(w.begin(), w.end(), mu.begin(), 0.0);
  return log_norm_const(static_cast<int>(w.size()), kappa) + kappa * dot;
}

double vmf_log_density(const UnitVector& w, const VmfParams& p) {
  return vmf_log_density_raw(w.v, p.mu.v, p.kappa);
}

UnitVector sample_uniform_sphere(int m, Rng& rng) {
  if (m < 2) throw std::domain_error("sample_uniform_sphere: m must be >= 2");
  std::vector<double> x(m);
  while (true) {
    for (double& xi : x) xi = rng.normal();
    double s = 0.0;
    for (double xi : x) s += xi * xi;
    const double n = std::sqrt(s);
    if (n >= 1e-12) {
      for (double& xi : x) xi /= n;
      UnitVector u;
      u.v = std::move(x);
      return u;
    }
  }
}

UnitVector sample_pn(const PnParams& p, Rng& rng) {
  const double sigma = 1.0 / std::sqrt(p.kappa);
  std::vector<double> x(p.mu.v.size());
  while (true) {
    for (std::size_t i = 0; i < x.size(); ++i) {
      x[i] = p.mu.v[i] + sigma * rng.normal();
    }
    double s = 0.0;
    for (double xi : x) s += xi * xi;
    const double n = std::sqrt(s);
    if (n >= 1e-12) {
      for (double& xi : x) xi /= n;
      UnitVector u;
      u.v = std::move(x);
      return u;
    }
  }
}

}  // namespace discs
