#include "qst/open_dynamics.hpp"

#include <cmath>
#include <vector>

#include "qst/errors.hpp"

namespace qst {

namespace {

constexpr std::complex<double> kImag{0.0, 1.0};

// Closed-form propagator pieces shared by chi / series evaluation.
struct BrightSolution {
  std::complex<double> mu;  // lambda - i E_0
  std::complex<double> d;

  std::complex<double> g(double t) const {
    // G = 0.5 (1 + mu/D) e^{(D-mu)t/2} + 0.5 (1 - mu/D) e^{-(D+mu)t/2}.
    // Re(D) <= Re(mu) (else |G| would grow without bound), so neither
    // exponent has positive real part and nothing overflows.
    const std::complex<double> x = 0.5 * d * t;
    if (std::abs(x) < 1e-4) {
      // cosh(x) + (mu t/2) sinh(x)/x, sinh(x)/x by series; covers D -> 0.
      const std::complex<double> x2 = x * x;
      const std::complex<double> sinhc = 1.0 + x2 / 6.0 + x2 * x2 / 120.0;
      return std::exp(-0.5 * mu * t) * (std::cosh(x) + 0.5 * mu * t * sinhc);
    }
    const std::complex<double> ratio = mu / d;
    return 0.5 * (1.0 + ratio) * std::exp(0.5 * (d - mu) * t) +
           0.5 * (1.0 - ratio) * std::exp(-0.5 * (d + mu) * t);
  }
};

BrightSolution bright_solution(double lambda, double e0, double gamma0,
                               int num_chains) {
  BrightSolution sol;
  sol.mu = std::complex<double>(lambda, -e0);
  sol.d = std::sqrt(sol.mu * sol.mu - 2.0 * gamma0 * lambda * num_chains);
  return sol;
}

// chi_j coefficients P_{jl} = sqrt(w(0) w(l) / (d_l d_j)) K_l(j).
Eigen::VectorXd chi_coefficients(const ChainSpec& spec, int site) {
  const int m = spec.sites;
  const double lw0 = detail::log_weight(0, m, spec.p);
  const double ldj = detail::log_norm_d(site, m, spec.p);
  const std::vector<double> k = detail::krawtchouk_row(m - 1, site, m, spec.p);
  Eigen::VectorXd coeffs(m);
  for (int l = 0; l < m; ++l) {
    const double lwl = detail::log_weight(l, m, spec.p);
    const double ldl = detail::log_norm_d(l, m, spec.p);
    coeffs(l) = std::exp(0.5 * (lw0 + lwl - ldl - ldj)) * k[l];
  }
  return coeffs;
}

void check_init(const EnsembleConfig& config, const EigenAmplitudes& init) {
  if (init.coeffs.rows() != config.num_chains ||
      init.coeffs.cols() != config.chain.sites) {
    throw ValidationError("initial amplitudes have wrong shape");
  }
}

}  // namespace

void EnsembleConfig::validate() const {
  chain.validate();
  if (num_chains < 1) throw ValidationError("N must be >= 1");
  if (!(reservoir.gamma0 > 0.0)) throw ValidationError("gamma0 must be > 0");
  if (!(reservoir.spectral_width > 0.0)) {
    throw ValidationError("lambda must be > 0");
  }
  if (!std::isnan(reservoir.omega_c) &&
      std::abs(reservoir.omega_c - chain.omega0) > 1e-12) {
    throw ValidationError(
        "reservoir must be centered on the chain transition frequency");
  }
}

double EnsembleConfig::reservoir_center() const {
  return std::isnan(reservoir.omega_c) ? chain.omega0 : reservoir.omega_c;
}

double EigenAmplitudes::norm_squared() const {
  return std::norm(vacuum) + coeffs.squaredNorm();
}

std::complex<double> d_factor(double lambda, double e0, double gamma0,
                              int num_chains) {
  return std::sqrt(std::complex<double>(lambda, -e0) *
                       std::complex<double>(lambda, -e0) -
                   2.0 * gamma0 * lambda * num_chains);
}

std::complex<double> d_factor(const EnsembleConfig& config) {
  config.validate();
  return d_factor(config.reservoir.spectral_width, config.bright_energy(),
                  config.reservoir.gamma0, config.num_chains);
}

std::complex<double> survival_g(double lambda, double e0, double gamma0,
                                int num_chains, double t) {
  if (t < 0.0) throw ValidationError("t must be >= 0");
  return bright_solution(lambda, e0, gamma0, num_chains).g(t);
}

std::complex<double> survival_g(const EnsembleConfig& config, double t) {
  config.validate();
  return survival_g(config.reservoir.spectral_width, config.bright_energy(),
                    config.reservoir.gamma0, config.num_chains, t);
}

Eigen::VectorXcd bright_amplitudes(const EnsembleConfig& config,
                                   const EigenAmplitudes& init, double t) {
  config.validate();
  check_init(config, init);
  const int n = config.num_chains;
  const std::complex<double> sym = init.coeffs.col(0).sum() / double(n);
  const std::complex<double> g = survival_g(config, t);
  Eigen::VectorXcd out(n);
  for (int i = 0; i < n; ++i) {
    out(i) = (init.coeffs(i, 0) - sym) + sym * g;
  }
  return out;
}

EigenAmplitudes initial_coefficients(const EnsembleConfig& config,
                                     std::complex<double> xi0) {
  config.validate();
  if (std::abs(xi0) > 1.0 + 1e-12) {
    throw ValidationError("|xi0| must be <= 1");
  }
  const SpectralBasis basis = orthonormal_basis(config.chain);
  EigenAmplitudes init;
  init.coeffs =
      Eigen::MatrixXcd::Zero(config.num_chains, config.chain.sites);
  for (int l = 0; l < config.chain.sites; ++l) {
    init.coeffs(0, l) = basis.U(0, l) * xi0;
  }
  init.vacuum = std::sqrt(std::max(0.0, 1.0 - std::norm(xi0)));
  return init;
}

EigenAmplitudes eigen_amplitudes(const EnsembleConfig& config,
                                 const EigenAmplitudes& init, double t) {
  config.validate();
  check_init(config, init);
  const int m = config.chain.sites;
  const double omega0 = config.chain.omega0;

  EigenAmplitudes out;
  out.coeffs.resize(config.num_chains, m);
  out.vacuum = init.vacuum;

  const Eigen::VectorXcd bright = bright_amplitudes(config, init, t);
  const std::complex<double> bright_phase =
      std::exp(-kImag * (omega0 + config.bright_energy()) * t);
  out.coeffs.col(0) = bright_phase * bright;
  for (int l = 1; l < m; ++l) {
    const double energy = m - 1.0 - 2.0 * l;
    out.coeffs.col(l) =
        std::exp(-kImag * (omega0 + energy) * t) * init.coeffs.col(l);
  }
  return out;
}

std::complex<double> chi(const EnsembleConfig& config, int site, double t) {
  config.validate();
  if (site < 0 || site >= config.chain.sites) {
    throw ValidationError("site out of range [0, M-1]");
  }
  if (t < 0.0) throw ValidationError("t must be >= 0");

  const int m = config.chain.sites;
  const int n = config.num_chains;
  const double omega0 = config.chain.omega0;
  const Eigen::VectorXd coeffs = chi_coefficients(config.chain, site);
  const std::complex<double> g = survival_g(config, t);

  std::complex<double> value =
      coeffs(0) * std::exp(-kImag * (omega0 + config.bright_energy()) * t) *
      ((n - 1.0) / n + g / double(n));
  for (int l = 1; l < m; ++l) {
    const double energy = m - 1.0 - 2.0 * l;
    value += coeffs(l) * std::exp(-kImag * (omega0 + energy) * t);
  }
  return value;
}

Eigen::MatrixXcd site_amplitudes(const EnsembleConfig& config,
                                 const EigenAmplitudes& init, double t) {
  const EigenAmplitudes evolved = eigen_amplitudes(config, init, t);
  const SpectralBasis basis = orthonormal_basis(config.chain);
  return evolved.coeffs * basis.U.transpose();
}

QubitDensityMatrix reduced_density_matrix(const EnsembleConfig& config,
                                          const EigenAmplitudes& init,
                                          double t) {
  config.validate();
  check_init(config, init);

  // Accept only the prepared form xi(0)|vac> + xi0 |chain 1, site 0>.
  const SpectralBasis basis = orthonormal_basis(config.chain);
  const Eigen::MatrixXcd sites0 = init.coeffs * basis.U.transpose();
  const std::complex<double> xi0 = sites0(0, 0);
  for (int i = 0; i < config.num_chains; ++i) {
    for (int j = 0; j < config.chain.sites; ++j) {
      if (i == 0 && j == 0) continue;
      if (std::abs(sites0(i, j)) > 1e-10) {
        throw ValidationError(
            "initial state must occupy only site 0 of chain 1");
      }
    }
  }
  if (std::abs(std::norm(init.vacuum) + std::norm(xi0) - 1.0) > 1e-9) {
    throw ValidationError("initial state is not normalized");
  }

  const std::complex<double> xi_end =
      chi(config, config.chain.sites - 1, t) * xi0;
  QubitDensityMatrix out;
  out.rho(0, 0) = std::norm(xi_end);
  out.rho(0, 1) = xi_end * std::conj(init.vacuum);
  out.rho(1, 0) = std::conj(xi_end) * init.vacuum;
  out.rho(1, 1) = 1.0 - std::norm(xi_end);
  return out;
}

double state_fidelity(const Eigen::Vector2cd& psi,
                      const QubitDensityMatrix& rho) {
  if (std::abs(psi.squaredNorm() - 1.0) > 1e-6) {
    throw ValidationError("psi is not normalized");
  }
  const double expectation = std::real(psi.dot(rho.rho * psi));
  return std::sqrt(std::max(0.0, expectation));
}

FidelitySeries open_fidelity_series(const EnsembleConfig& config,
                                    const Eigen::VectorXd& times) {
  config.validate();
  detail::check_time_grid(times);

  const int m = config.chain.sites;
  const int n = config.num_chains;
  const double omega0 = config.chain.omega0;
  const Eigen::VectorXd coeffs = chi_coefficients(config.chain, m - 1);
  const BrightSolution sol =
      bright_solution(config.reservoir.spectral_width, config.bright_energy(),
                      config.reservoir.gamma0, n);

  FidelitySeries series;
  series.times = times;
  series.values.resize(times.size());
  series.amplitudes.resize(times.size());
  for (Eigen::Index k = 0; k < times.size(); ++k) {
    const double t = times(k);
    if (t < 0.0) throw ValidationError("t must be >= 0");
    std::complex<double> value =
        coeffs(0) * std::exp(-kImag * (omega0 + config.bright_energy()) * t) *
        ((n - 1.0) / n + sol.g(t) / double(n));
    for (int l = 1; l < m; ++l) {
      const double energy = m - 1.0 - 2.0 * l;
      value += coeffs(l) * std::exp(-kImag * (omega0 + energy) * t);
    }
    series.amplitudes(k) = value;
    series.values(k) = std::abs(value);
  }
  return series;
}

}  // namespace qst
