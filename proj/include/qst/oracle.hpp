#pragma once

#include <complex>
#include <vector>

#include <Eigen/Dense>

#include "qst/open_dynamics.hpp"

namespace qst {

/// Which exponential memory kernel the integrator uses.
///
/// The default reproduces the closed-form bright-state solution exactly:
///   f(tau) = (gamma0 lambda / 2) e^{-(lambda - i E_0) tau}.
/// The residue variant is the contour integral of the Lorentzian density
/// taken literally,
///   f(tau) = (gamma0 / 2) e^{-(lambda + i E_0) tau};
/// it exists so the gap between the two normalizations can be measured.
enum class KernelVariant { eq33_consistent, residue };

/// Fixed-step classical RK4 settings.  The step must resolve the fastest
/// system scale: dt <= min(1/lambda, 1/(M-1), 1/(gamma0 N)) / 20.
struct IntegratorSettings {
  double dt = 1e-4;
  double t_max = 10.0;
  int record_stride = 1;  ///< keep every k-th step in the trajectory

  void validate(const EnsembleConfig& config) const;
};

/// Reservoir continuum replaced by num_modes equally spaced modes on
/// [center - window, center + window], midpoint-sampled:
/// |g_k|^2 = J(w_k) dw.  Faithful only up to the recurrence time 2pi/dw.
struct DiscretizedReservoir {
  Eigen::VectorXd frequencies;
  Eigen::VectorXd couplings;  ///< g_k, real
  double spacing = 0.0;

  static DiscretizedReservoir sample(const EnsembleConfig& config,
                                     int num_modes, double window);
  double recurrence_time() const;
};

/// Time series of system amplitudes produced by an integrator or sampled
/// from the analytic solution.
struct AmplitudeTrajectory {
  enum class Basis { eigen, site };

  Basis basis = Basis::eigen;
  std::vector<double> times;
  std::vector<Eigen::MatrixXcd> frames;  ///< N x M amplitudes per time
  std::complex<double> vacuum{0.0, 0.0};
  std::vector<double> total_norm;  ///< system+reservoir norm^2 (mode runs)
  bool recurrence_warning = false;

  AmplitudeTrajectory to_site(const SpectralBasis& basis_matrix) const;
};

/// Memory kernel f(tau) for tau >= 0 under the chosen variant.
std::complex<double> kernel(double tau, const EnsembleConfig& config,
                            KernelVariant variant);

/// Integrates the bright-sector Volterra equation
///   d/dt c_i(t) = -int_0^t f(t-t') sum_j c_j(t') dt'
/// exactly localized through one auxiliary amplitude per exponential
/// kernel, plus constant dark amplitudes; returns lab-frame amplitudes.
AmplitudeTrajectory integrate_memory_kernel(
    const EnsembleConfig& config, const EigenAmplitudes& init,
    const IntegratorSettings& settings,
    KernelVariant variant = KernelVariant::eq33_consistent);

/// Full Schroedinger integration of the N M system amplitudes plus
/// num_modes reservoir amplitudes; unitary, so the recorded total norm
/// should stay at its initial value.
AmplitudeTrajectory integrate_mode_discretized(
    const EnsembleConfig& config, const DiscretizedReservoir& reservoir,
    const EigenAmplitudes& init, const IntegratorSettings& settings);

/// Max over the grid and all components of |a - b|; grids must coincide.
double compare(const AmplitudeTrajectory& a, const AmplitudeTrajectory& b);

/// |xi_{M-1}^{i=1}(t)| extracted from an eigenbasis trajectory.
FidelitySeries end_site_series(const AmplitudeTrajectory& trajectory,
                               const SpectralBasis& basis_matrix);

}  // namespace qst
