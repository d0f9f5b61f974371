#include "qst/oracle.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>

#include "qst/errors.hpp"

namespace qst {

namespace {

constexpr std::complex<double> kImag{0.0, 1.0};

struct KernelParams {
  std::complex<double> amplitude;
  std::complex<double> rate;  // f(tau) = amplitude * exp(-rate * tau)
};

KernelParams kernel_params(const EnsembleConfig& config, KernelVariant variant) {
  const double gamma0 = config.reservoir.gamma0;
  const double lambda = config.reservoir.spectral_width;
  const double e0 = config.bright_energy();
  if (variant == KernelVariant::eq33_consistent) {
    return {0.5 * gamma0 * lambda, std::complex<double>(lambda, -e0)};
  }
  return {0.5 * gamma0, std::complex<double>(lambda, e0)};
}

double lorentzian_density(double omega, double center, double gamma0,
                          double lambda) {
  const double detuned = omega - center;
  return gamma0 * lambda /
         (2.0 * std::numbers::pi * (detuned * detuned + lambda * lambda));
}

long steps_for(double t_max, double dt) {
  const long n = std::lround(t_max / dt);
  return n > 0 ? n : 1;
}

// Classical fixed-step RK4 over a complex state vector.
template <typename Rhs, typename Record>
void rk4_drive(Eigen::VectorXcd& state, long nsteps, double dt, long stride,
               const Rhs& rhs, const Record& record) {
  const Eigen::Index dim = state.size();
  Eigen::VectorXcd k1(dim), k2(dim), k3(dim), k4(dim), scratch(dim);
  record(0L, state);
  for (long step = 0; step < nsteps; ++step) {
    rhs(state, k1);
    scratch = state + (0.5 * dt) * k1;
    rhs(scratch, k2);
    scratch = state + (0.5 * dt) * k2;
    rhs(scratch, k3);
    scratch = state + dt * k3;
    rhs(scratch, k4);
    state += (dt / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
    if ((step + 1) % stride == 0) record(step + 1, state);
  }
}

}  // namespace

void IntegratorSettings::validate(const EnsembleConfig& config) const {
  if (!(dt > 0.0)) throw ValidationError("dt must be > 0");
  if (!(t_max > 0.0)) throw ValidationError("t_max must be > 0");
  if (record_stride < 1) throw ValidationError("record_stride must be >= 1");
  const double fastest =
      std::min({1.0 / config.reservoir.spectral_width,
                1.0 / (config.chain.sites - 1.0),
                1.0 / (config.reservoir.gamma0 * config.num_chains)});
  if (dt > fastest / 20.0 * (1.0 + 1e-12)) {
    throw ValidationError("dt too large to resolve the fastest timescale");
  }
}

DiscretizedReservoir DiscretizedReservoir::sample(const EnsembleConfig& config,
                                                  int num_modes,
                                                  double window) {
  config.validate();
  if (num_modes < 1) throw ValidationError("num_modes must be >= 1");
  if (!(window > 0.0)) throw ValidationError("window must be > 0");

  const double center = config.reservoir_center();
  DiscretizedReservoir out;
  out.spacing = 2.0 * window / num_modes;
  out.frequencies.resize(num_modes);
  out.couplings.resize(num_modes);
  for (int k = 0; k < num_modes; ++k) {
    const double omega = center - window + (k + 0.5) * out.spacing;
    out.frequencies(k) = omega;
    out.couplings(k) =
        std::sqrt(lorentzian_density(omega, center, config.reservoir.gamma0,
                                     config.reservoir.spectral_width) *
                  out.spacing);
  }
  return out;
}

double DiscretizedReservoir::recurrence_time() const {
  return spacing > 0.0 ? 2.0 * std::numbers::pi / spacing
                       : std::numeric_limits<double>::infinity();
}

std::complex<double> kernel(double tau, const EnsembleConfig& config,
                            KernelVariant variant) {
  config.validate();
  if (tau < 0.0) throw ValidationError("tau must be >= 0");
  const KernelParams params = kernel_params(config, variant);
  return params.amplitude * std::exp(-params.rate * tau);
}

AmplitudeTrajectory integrate_memory_kernel(const EnsembleConfig& config,
                                            const EigenAmplitudes& init,
                                            const IntegratorSettings& settings,
                                            KernelVariant variant) {
  config.validate();
  settings.validate(config);
  const int n = config.num_chains;
  const int m = config.chain.sites;
  if (init.coeffs.rows() != n || init.coeffs.cols() != m) {
    throw ValidationError("initial amplitudes have wrong shape");
  }

  const KernelParams params = kernel_params(config, variant);
  const double omega0 = config.chain.omega0;

  // Rotating frame; state = (c_1..c_N, B) with
  //   B(t) = int_0^t e^{-rate (t-t')} sum_i c_i(t') dt',
  // so the Volterra equation becomes the local system
  //   dc_i/dt = -amplitude * B,   dB/dt = -rate * B + sum_i c_i.
  Eigen::VectorXcd state(n + 1);
  state.head(n) = init.coeffs.col(0);
  state(n) = 0.0;

  const auto rhs = [&](const Eigen::VectorXcd& y, Eigen::VectorXcd& dy) {
    const std::complex<double> aux = y(n);
    const std::complex<double> sum = y.head(n).sum();
    dy.head(n).setConstant(-params.amplitude * aux);
    dy(n) = -params.rate * aux + sum;
  };

  const long nsteps = steps_for(settings.t_max, settings.dt);
  AmplitudeTrajectory traj;
  traj.basis = AmplitudeTrajectory::Basis::eigen;
  traj.vacuum = init.vacuum;
  traj.times.reserve(nsteps / settings.record_stride + 2);
  traj.frames.reserve(nsteps / settings.record_stride + 2);

  const auto record = [&](long step, const Eigen::VectorXcd& y) {
    const double t = step * settings.dt;
    Eigen::MatrixXcd frame(n, m);
    frame.col(0) =
        std::exp(-kImag * (omega0 + config.bright_energy()) * t) * y.head(n);
    for (int l = 1; l < m; ++l) {
      const double energy = m - 1.0 - 2.0 * l;
      frame.col(l) =
          std::exp(-kImag * (omega0 + energy) * t) * init.coeffs.col(l);
    }
    traj.times.push_back(t);
    traj.frames.push_back(std::move(frame));
  };

  rk4_drive(state, nsteps, settings.dt, settings.record_stride, rhs, record);
  return traj;
}

AmplitudeTrajectory integrate_mode_discretized(
    const EnsembleConfig& config, const DiscretizedReservoir& reservoir,
    const EigenAmplitudes& init, const IntegratorSettings& settings) {
  config.validate();
  settings.validate(config);
  const int n = config.num_chains;
  const int m = config.chain.sites;
  const int num_modes = static_cast<int>(reservoir.frequencies.size());
  if (num_modes < 1 || reservoir.couplings.size() != num_modes) {
    throw ValidationError("reservoir discretization is empty or inconsistent");
  }
  if (init.coeffs.rows() != n || init.coeffs.cols() != m) {
    throw ValidationError("initial amplitudes have wrong shape");
  }

  const double omega0 = config.chain.omega0;
  const Eigen::Index dim = static_cast<Eigen::Index>(n) * m + num_modes;

  // Lab frame throughout.  Layout: chain-major system block, then modes.
  Eigen::VectorXcd freq_sys(static_cast<Eigen::Index>(n) * m);
  for (int i = 0; i < n; ++i) {
    for (int l = 0; l < m; ++l) {
      const double energy = m - 1.0 - 2.0 * l;
      freq_sys(i * m + l) = -kImag * (omega0 + energy);
    }
  }
  const Eigen::VectorXcd freq_modes =
      (-kImag * reservoir.frequencies.array()).matrix();
  const Eigen::VectorXcd couplings =
      reservoir.couplings.cast<std::complex<double>>();

  Eigen::VectorXcd state(dim);
  for (int i = 0; i < n; ++i) {
    state.segment(i * m, m) = init.coeffs.row(i).transpose();
  }
  state.tail(num_modes).setZero();

  const Eigen::Index sys_dim = static_cast<Eigen::Index>(n) * m;
  const auto rhs = [&](const Eigen::VectorXcd& y, Eigen::VectorXcd& dy) {
    const auto modes = y.tail(num_modes);
    dy.head(sys_dim) = freq_sys.cwiseProduct(y.head(sys_dim));
    // Only bright-profile couplings: each chain level 0 talks to the bath.
    std::complex<double> bright_sum{0.0, 0.0};
    const std::complex<double> bath = couplings.dot(modes);
    for (int i = 0; i < n; ++i) {
      dy(i * m) -= kImag * bath;
      bright_sum += y(i * m);
    }
    dy.tail(num_modes) = freq_modes.cwiseProduct(modes) -
                         (kImag * bright_sum) * couplings;
  };

  const long nsteps = steps_for(settings.t_max, settings.dt);
  AmplitudeTrajectory traj;
  traj.basis = AmplitudeTrajectory::Basis::eigen;
  traj.vacuum = init.vacuum;
  traj.recurrence_warning = settings.t_max > reservoir.recurrence_time();

  const auto record = [&](long step, const Eigen::VectorXcd& y) {
    Eigen::MatrixXcd frame(n, m);
    for (int i = 0; i < n; ++i) {
      frame.row(i) = y.segment(i * m, m).transpose();
    }
    traj.times.push_back(step * settings.dt);
    traj.frames.push_back(std::move(frame));
    traj.total_norm.push_back(std::norm(traj.vacuum) + y.squaredNorm());
  };

  rk4_drive(state, nsteps, settings.dt, settings.record_stride, rhs, record);
  return traj;
}

double compare(const AmplitudeTrajectory& a, const AmplitudeTrajectory& b) {
  if (a.basis != b.basis) throw ValidationError("trajectories use different bases");
  if (a.times.size() != b.times.size()) {
    throw ValidationError("trajectories have different grid sizes");
  }
  double max_dev = std::abs(a.vacuum - b.vacuum);
  for (std::size_t k = 0; k < a.times.size(); ++k) {
    if (std::abs(a.times[k] - b.times[k]) >
        1e-12 * std::max(1.0, std::abs(a.times[k]))) {
      throw ValidationError("trajectory time grids do not match");
    }
    if (a.frames[k].rows() != b.frames[k].rows() ||
        a.frames[k].cols() != b.frames[k].cols()) {
      throw ValidationError("trajectory frames have different shapes");
    }
    max_dev = std::max(max_dev,
                       (a.frames[k] - b.frames[k]).cwiseAbs().maxCoeff());
  }
  return max_dev;
}

AmplitudeTrajectory AmplitudeTrajectory::to_site(
    const SpectralBasis& basis_matrix) const {
  if (basis == Basis::site) return *this;
  AmplitudeTrajectory out = *this;
  out.basis = Basis::site;
  for (auto& frame : out.frames) {
    frame = frame * basis_matrix.U.transpose();
  }
  return out;
}

FidelitySeries end_site_series(const AmplitudeTrajectory& trajectory,
                               const SpectralBasis& basis_matrix) {
  if (trajectory.frames.empty()) throw ValidationError("trajectory is empty");
  const Eigen::Index m = basis_matrix.U.rows();
  FidelitySeries series;
  series.times.resize(trajectory.times.size());
  series.values.resize(trajectory.times.size());
  series.amplitudes.resize(trajectory.times.size());
  for (std::size_t k = 0; k < trajectory.times.size(); ++k) {
    std::complex<double> xi_end{0.0, 0.0};
    if (trajectory.basis == AmplitudeTrajectory::Basis::eigen) {
      for (Eigen::Index l = 0; l < m; ++l) {
        xi_end += basis_matrix.U(m - 1, l) * trajectory.frames[k](0, l);
      }
    } else {
      xi_end = trajectory.frames[k](0, m - 1);
    }
    series.times(k) = trajectory.times[k];
    series.amplitudes(k) = xi_end;
    series.values(k) = std::abs(xi_end);
  }
  return series;
}

}  // namespace qst
