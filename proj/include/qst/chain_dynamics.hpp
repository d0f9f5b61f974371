#pragma once

#include <complex>

#include <Eigen/Dense>

#include "qst/krawtchouk.hpp"

namespace qst {

/// A single-excitation state of one chain: site amplitudes plus the
/// amplitude of the global ground state.
struct SiteState {
  Eigen::VectorXcd amplitudes;          ///< <j|psi>, length M
  std::complex<double> vacuum{0.0, 0.0};

  double norm_squared() const;
};

/// Fidelity-of-transfer samples on a time grid (units of 1/gamma0).
struct FidelitySeries {
  Eigen::VectorXd times;
  Eigen::VectorXd values;        ///< in [0, 1]
  Eigen::VectorXcd amplitudes;   ///< the complex end-to-end amplitudes
};

/// End-to-end transition amplitude <M-1| exp(-iHt) |0>, including the
/// global phase exp(-i omega0 t).  Its modulus follows |sin t|^(M-1).
std::complex<double> transfer_amplitude(const ChainSpec& spec, double t);

/// Evolves a normalized state spectrally: rotate to the Krawtchouk
/// eigenbasis, apply the phases exp(-i(omega0+E_l)t), rotate back.
/// The vacuum amplitude is untouched.
SiteState evolve_closed(const ChainSpec& spec, const SiteState& state, double t);

/// |transfer_amplitude| sampled on a strictly increasing grid.
FidelitySeries closed_fidelity_series(const ChainSpec& spec,
                                      const Eigen::VectorXd& times);

namespace detail {
/// Throws ValidationError unless the grid is nonempty and strictly increasing.
void check_time_grid(const Eigen::VectorXd& times);
}  // namespace detail

}  // namespace qst
