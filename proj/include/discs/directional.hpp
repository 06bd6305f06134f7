#pragma once

#include <span>
#include <vector>

#include "discs/rng.hpp"

namespace discs {

// Concentration clamp shared by the discriminator head and the samplers.
// The ceiling keeps rewards finite under confident predictions; the floor
// keeps the m>2 normalizer away from its log-kappa singularity.
inline constexpr double kKappaMin = 1e-4;
inline constexpr double kKappaMax = 100.0;

/// Direction on S^{m-1}; construction enforces unit norm within 1e-6.
struct UnitVector {
  std::vector<double> v;

  UnitVector() = default;
  explicit UnitVector(std::vector<double> components);

  /// Rescales an arbitrary nonzero vector onto the sphere.
  static UnitVector normalized(std::vector<double> raw);

  int dim() const { return static_cast<int>(v.size()); }
  double dot(std::span<const double> other) const;
};

/// von Mises-Fisher parameters: mean direction and concentration.
struct VmfParams {
  UnitVector mu;
  double kappa = 1.0;

  VmfParams() = default;
  VmfParams(UnitVector mean, double concentration);
};

/// Projected-normal parameters: direction of a Gaussian with mean mu and
/// isotropic covariance (1/kappa) I.
struct PnParams {
  UnitVector mu;
  double kappa = 1.0;

  PnParams() = default;
  PnParams(UnitVector mean, double concentration);
};

/// ln I_nu(x) for the modified Bessel function of the first kind.
/// Power series below the order-dependent cutoff, Hankel asymptotic
/// expansion in log space above it; finite up to x = 1e4 and beyond.
/// Returns -inf for nu > 0, x = 0. Throws std::domain_error on negative input.
double log_bessel_i(double order, double x);

/// ln C_m(kappa) of the vMF normalizer on S^{m-1}. kappa = 0 returns the
/// uniform-density limit ln Gamma(m/2) - ln 2 - (m/2) ln pi.
double log_norm_const(int m, double kappa);

/// d/dkappa ln C_m(kappa) = -I_{m/2}(kappa) / I_{m/2-1}(kappa), in (-1, 0].
double dlog_norm_const_dkappa(int m, double kappa);

/// ln C_m(kappa) + kappa * (w . mu).
double vmf_log_density(const UnitVector& w, const VmfParams& p);

/// Same density on raw buffers; hot-path form used by the reward generator.
double vmf_log_density_raw(std::span<const double> w, std::span<const double> mu,
                           double kappa);

/// Direction of an m-dimensional standard Gaussian draw.
UnitVector sample_uniform_sphere(int m, Rng& rng);

/// Draw X ~ N(mu, (1/kappa) I) and return X/||X||. Degenerate draws
/// (norm below 1e-12) are redrawn.
UnitVector sample_pn(const PnParams& p, Rng& rng);

}  // namespace discs
