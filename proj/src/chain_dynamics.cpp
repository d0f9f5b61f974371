#include "qst/chain_dynamics.hpp"

#include <cmath>

#include "qst/errors.hpp"

namespace qst {

namespace {
constexpr std::complex<double> kImag{0.0, 1.0};
}

double SiteState::norm_squared() const {
  return std::norm(vacuum) + amplitudes.squaredNorm();
}

namespace detail {

void check_time_grid(const Eigen::VectorXd& times) {
  if (times.size() == 0) throw ValidationError("time grid is empty");
  for (Eigen::Index k = 1; k < times.size(); ++k) {
    if (!(times(k) > times(k - 1))) {
      throw ValidationError("time grid must be strictly increasing");
    }
  }
}

}  // namespace detail

std::complex<double> transfer_amplitude(const ChainSpec& spec, double t) {
  const SpectralBasis basis = orthonormal_basis(spec);
  const int m = spec.sites;
  std::complex<double> f{0.0, 0.0};
  for (int l = 0; l < m; ++l) {
    f += basis.U(0, l) * basis.U(m - 1, l) *
         std::exp(-kImag * (spec.omega0 + basis.energies(l)) * t);
  }
  return f;
}

SiteState evolve_closed(const ChainSpec& spec, const SiteState& state, double t) {
  spec.validate();
  if (state.amplitudes.size() != spec.sites) {
    throw ValidationError("state has wrong number of site amplitudes");
  }
  if (std::abs(state.norm_squared() - 1.0) > 1e-6) {
    throw ValidationError("state is not normalized");
  }
  const SpectralBasis basis = orthonormal_basis(spec);
  Eigen::VectorXcd modes = basis.U.transpose() * state.amplitudes;
  for (int l = 0; l < spec.sites; ++l) {
    modes(l) *= std::exp(-kImag * (spec.omega0 + basis.energies(l)) * t);
  }
  SiteState out;
  out.amplitudes = basis.U * modes;
  out.vacuum = state.vacuum;
  return out;
}

FidelitySeries closed_fidelity_series(const ChainSpec& spec,
                                      const Eigen::VectorXd& times) {
  spec.validate();
  detail::check_time_grid(times);
  const SpectralBasis basis = orthonormal_basis(spec);
  const int m = spec.sites;

  Eigen::VectorXd overlap(m);  // U(0,l) U(M-1,l)
  for (int l = 0; l < m; ++l) overlap(l) = basis.U(0, l) * basis.U(m - 1, l);

  FidelitySeries series;
  series.times = times;
  series.values.resize(times.size());
  series.amplitudes.resize(times.size());
  for (Eigen::Index k = 0; k < times.size(); ++k) {
    std::complex<double> f{0.0, 0.0};
    for (int l = 0; l < m; ++l) {
      f += overlap(l) *
           std::exp(-kImag * (spec.omega0 + basis.energies(l)) * times(k));
    }
    series.amplitudes(k) = f;
    series.values(k) = std::abs(f);
  }
  return series;
}

}  // namespace qst
