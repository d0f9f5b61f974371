#pragma once

#include <complex>
#include <limits>

#include <Eigen/Dense>

#include "qst/chain_dynamics.hpp"
#include "qst/krawtchouk.hpp"

namespace qst {

/// Lorentzian reservoir J(w) = (1/2pi) gamma0 lambda / ((w-w_c)^2 + lambda^2).
/// The analytic solution requires the reservoir centered on the qubit
/// transition frequency; omega_c = NaN means "use the chain's omega0".
struct ReservoirSpec {
  double gamma0 = 1.0;          ///< coupling strength; sets the time unit
  double spectral_width = 50.0; ///< lambda, in units of gamma0
  double omega_c = std::numeric_limits<double>::quiet_NaN();
};

/// N identical chains sharing one reservoir.  Chains couple to the bath
/// only through their symmetric (bright) eigenstate; the other N(M-1)
/// levels are dark and only pick up phases.
struct EnsembleConfig {
  ChainSpec chain;
  ReservoirSpec reservoir;
  int num_chains = 1;  ///< N >= 1 (N-1 auxiliary chains)

  void validate() const;
  /// Bright-level energy E_0 = M-1.
  double bright_energy() const { return chain.sites - 1.0; }
  /// Reservoir center frequency after resolving the NaN default.
  double reservoir_center() const;
};

/// Amplitudes on the tensor eigenbasis: coeffs(i,l) is the amplitude of
/// level l of chain i (lab frame).  Excitation lost to the reservoir is
/// not stored, so |vacuum|^2 + sum |coeffs|^2 <= 1.
struct EigenAmplitudes {
  Eigen::MatrixXcd coeffs;  ///< N x M
  std::complex<double> vacuum{0.0, 0.0};

  double norm_squared() const;
};

/// Reduced 2x2 state of the last qubit of chain 1.
struct QubitDensityMatrix {
  Eigen::Matrix2cd rho;
};

/// D = sqrt((lambda - i E_0)^2 - 2 gamma0 lambda N), principal branch.
/// Both branches give the same survival amplitude.
std::complex<double> d_factor(const EnsembleConfig& config);
std::complex<double> d_factor(double lambda, double e0, double gamma0,
                              int num_chains);

/// Survival amplitude of the symmetric bright combination,
///   G(t) = e^{-mu t/2} [cosh(Dt/2) + (mu/D) sinh(Dt/2)],  mu = lambda - i E_0,
/// evaluated in overflow-safe exponential form; G(0) = 1 and |G| <= 1.
std::complex<double> survival_g(const EnsembleConfig& config, double t);
std::complex<double> survival_g(double lambda, double e0, double gamma0,
                                int num_chains, double t);

/// Rotating-frame bright amplitudes at time t.  The symmetric part decays
/// with G(t); differences between chains are conserved:
///   C~_0^i(t) = [C~_0^i(0) - S(0)/N] + (S(0)/N) G(t),  S(0) = sum_i C~_0^i(0).
Eigen::VectorXcd bright_amplitudes(const EnsembleConfig& config,
                                   const EigenAmplitudes& init, double t);

/// Eigenbasis coefficients of an excitation at site 0 of chain 1:
/// coeffs(0,l) = U(0,l) xi0, all other chains empty,
/// vacuum = sqrt(1 - |xi0|^2).
EigenAmplitudes initial_coefficients(const EnsembleConfig& config,
                                     std::complex<double> xi0);

/// Lab-frame eigenbasis amplitudes at time t for arbitrary initial data:
/// bright level via bright_amplitudes, dark levels via pure phases.
EigenAmplitudes eigen_amplitudes(const EnsembleConfig& config,
                                 const EigenAmplitudes& init, double t);

/// Site-j propagator from site 0 of chain 1, in closed form:
///   chi_j(t) = P_{j0} e^{-i(w0+E_0)t} [(N-1)/N + G(t)/N]
///            + sum_{l>=1} P_{jl} e^{-i(w0+E_l)t},
/// with P_{jl} = sqrt(w(0) w(l) / (d_l d_j)) K_l(j).  At p = 1/2 this equals
/// transporting the analytic eigen-amplitudes back through the basis.
std::complex<double> chi(const EnsembleConfig& config, int site, double t);

/// Site-basis amplitudes xi_j^i(t) = sum_l U(j,l) C_l^i(t), all chains.
Eigen::MatrixXcd site_amplitudes(const EnsembleConfig& config,
                                 const EigenAmplitudes& init, double t);

/// Reduced state of the last qubit of chain 1 for an initial state of the
/// form xi(0)|vac> + xi0 |site 0 of chain 1>.  Rejects other initial data.
QubitDensityMatrix reduced_density_matrix(const EnsembleConfig& config,
                                          const EigenAmplitudes& init,
                                          double t);

/// Uhlmann fidelity sqrt(<psi|rho|psi>) of a pure qubit state against rho.
double state_fidelity(const Eigen::Vector2cd& psi,
                      const QubitDensityMatrix& rho);

/// |chi_{M-1}(t)| on a strictly increasing grid: the transfer fidelity of
/// chain 1 in the presence of the reservoir and N-1 auxiliary chains.
FidelitySeries open_fidelity_series(const EnsembleConfig& config,
                                    const Eigen::VectorXd& times);

}  // namespace qst
