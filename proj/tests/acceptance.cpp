// Acceptance suite: one checkable claim per criterion, each printing a
// single PASS/FAIL line.  Run with a criterion number (1-7) or no argument
// for all of them; the exit code is the number of failures.

#include <chrono>
#include <cmath>
#include <complex>
#include <cstdio>
#include <functional>
#include <numbers>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "qst/chain_dynamics.hpp"
#include "qst/open_dynamics.hpp"
#include "qst/oracle.hpp"

using qst::EigenAmplitudes;
using qst::EnsembleConfig;
using qst::IntegratorSettings;
using std::complex;

namespace {

constexpr double kPi = std::numbers::pi;

struct Check {
  bool ok = true;
  std::ostringstream detail;

  void require(bool condition, const std::string& what) {
    if (!condition) {
      ok = false;
      detail << (detail.str().empty() ? "" : "; ") << what;
    }
  }
  void note(const std::string& text) {
    detail << (detail.str().empty() ? "" : "; ") << text;
  }
};

EnsembleConfig make_config(int sites, int chains, double omega0 = 1.0) {
  EnsembleConfig config;
  config.chain = {sites, omega0, 0.5};
  config.reservoir.gamma0 = 1.0;
  config.reservoir.spectral_width = 50.0;
  config.num_chains = chains;
  return config;
}

IntegratorSettings make_settings(double dt, double t_max, int stride) {
  IntegratorSettings settings;
  settings.dt = dt;
  settings.t_max = t_max;
  settings.record_stride = stride;
  return settings;
}

std::string fmt(double v) {
  char buffer[32];
  std::snprintf(buffer, sizeof(buffer), "%.6g", v);
  return buffer;
}

// ---- criterion 1: closed-chain transfer law --------------------------------

void criterion_transfer_law(Check& check) {
  for (int m = 2; m <= 10; ++m) {
    const Eigen::VectorXd grid =
        Eigen::VectorXd::LinSpaced(4001, 0.0, 2.0 * kPi);
    const auto series = qst::closed_fidelity_series({m, 1.0, 0.5}, grid);
    double worst = 0.0;
    for (Eigen::Index k = 0; k < grid.size(); ++k) {
      worst = std::max(worst, std::abs(series.values(k) -
                                       std::pow(std::abs(std::sin(grid(k))),
                                                m - 1)));
    }
    check.require(worst <= 1e-10,
                  "M=" + std::to_string(m) + " law residual " + fmt(worst));
    const double at_peak =
        std::abs(qst::transfer_amplitude({m, 1.0, 0.5}, kPi / 2));
    check.require(std::abs(at_peak - 1.0) <= 1e-10,
                  "M=" + std::to_string(m) + " peak " + fmt(at_peak));
  }
}

// ---- criterion 2: unprotected steady value ---------------------------------

void criterion_steady_value(Check& check) {
  const double fidelity = std::abs(qst::chi(make_config(2, 1), 1, 20.0));
  check.note("fidelity(t=20) = " + fmt(fidelity));
  check.require(std::abs(fidelity - 0.5) <= 0.01, "outside 0.5 +- 0.01");
}

// ---- criterion 3: analytic vs memory-kernel oracle -------------------------

void criterion_oracle_equivalence(Check& check) {
  const std::vector<std::pair<int, int>> cases = {{2, 1},  {2, 50}, {3, 1},
                                                  {3, 45}, {4, 1},  {4, 40}};
  for (const auto& [sites, chains] : cases) {
    const auto config = make_config(sites, chains);
    const auto init = qst::initial_coefficients(config, 1.0);
    const auto oracle = qst::integrate_memory_kernel(
        config, init, make_settings(1e-4, 10.0, 10));

    qst::AmplitudeTrajectory analytic;
    analytic.basis = qst::AmplitudeTrajectory::Basis::eigen;
    analytic.times = oracle.times;
    analytic.vacuum = init.vacuum;
    analytic.frames.reserve(oracle.times.size());
    for (double t : oracle.times) {
      analytic.frames.push_back(qst::eigen_amplitudes(config, init, t).coeffs);
    }

    const auto basis = qst::orthonormal_basis(config.chain);
    const double site_dev =
        qst::compare(analytic.to_site(basis), oracle.to_site(basis));
    const auto fid_a = qst::end_site_series(analytic, basis);
    const auto fid_o = qst::end_site_series(oracle, basis);
    const double fid_dev = (fid_a.values - fid_o.values).cwiseAbs().maxCoeff();

    const std::string tag =
        "(M=" + std::to_string(sites) + ",N=" + std::to_string(chains) + ")";
    check.require(site_dev <= 1e-6, tag + " site dev " + fmt(site_dev));
    check.require(fid_dev <= 1e-6, tag + " fidelity dev " + fmt(fid_dev));
  }
}

// ---- criterion 4: protection grows with N ----------------------------------

void criterion_protection_monotonic(Check& check) {
  std::vector<double> fidelities;
  for (int chains : {1, 5, 10, 25, 50}) {
    fidelities.push_back(std::abs(qst::chi(make_config(2, chains), 1, kPi / 2)));
  }
  for (std::size_t k = 1; k < fidelities.size(); ++k) {
    check.require(fidelities[k] >= fidelities[k - 1] - 1e-12,
                  "not nondecreasing at index " + std::to_string(k));
  }
  check.note("f(N=1) = " + fmt(fidelities.front()) +
             ", f(N=50) = " + fmt(fidelities.back()));
  check.require(fidelities.back() - fidelities.front() >= 0.2,
                "N=50 gain below 0.2");
  const double f25 = fidelities[3];
  const double f50 = fidelities[4];
  const double ratio = (1.0 - f25) / (1.0 - f50);
  check.note("infidelity ratio 25/50 = " + fmt(ratio));
  check.require(ratio >= 1.6 && ratio <= 2.4, "1/N scaling violated");
}

// ---- criterion 5: protected/unprotected ratio vs chain length --------------

double first_peak(const EnsembleConfig& config) {
  // global max over the first transfer window [0, pi]; a first *local* max
  // would latch onto the ~1e-3 ripples the oscillatory bright term leaves
  // at early times in the strongly collective regime
  const Eigen::VectorXd grid = Eigen::VectorXd::LinSpaced(20001, 0.0, kPi);
  return qst::open_fidelity_series(config, grid).values.maxCoeff();
}

void criterion_length_ratio(Check& check) {
  const double m2_protected = first_peak(make_config(2, 50));
  const double m2_unprotected = first_peak(make_config(2, 1));
  const double m4_protected = first_peak(make_config(4, 40));
  const double m4_unprotected = first_peak(make_config(4, 1));
  const double ratio_m2 = m2_protected / m2_unprotected;
  const double ratio_m4 = m4_protected / m4_unprotected;
  check.note("M=2: " + fmt(m2_protected) + "/" + fmt(m2_unprotected) + " = " +
             fmt(ratio_m2));
  check.note("M=4: " + fmt(m4_protected) + "/" + fmt(m4_unprotected) + " = " +
             fmt(ratio_m4));
  check.require(ratio_m4 > ratio_m2,
                "ratio(M=4) does not exceed ratio(M=2)");
}

// ---- criterion 6: invariant suites ------------------------------------------

void criterion_invariants(Check& check) {
  // orthonormality up to M = 64
  for (int m : {2, 8, 32, 64}) {
    for (double p : {0.3, 0.5, 0.7}) {
      const auto basis = qst::orthonormal_basis({m, 1.0, p});
      const double residual =
          (basis.U.transpose() * basis.U -
           Eigen::MatrixXd::Identity(m, m)).cwiseAbs().maxCoeff();
      check.require(residual <= 1e-12, "orthonormality M=" + std::to_string(m) +
                                           " p=" + fmt(p) + ": " + fmt(residual));
    }
  }

  // closed-evolution norm conservation
  {
    std::mt19937 rng(3);
    std::normal_distribution<double> gauss;
    qst::SiteState state;
    state.amplitudes.resize(5);
    for (int j = 0; j < 5; ++j) {
      state.amplitudes(j) = complex<double>(gauss(rng), gauss(rng));
    }
    state.amplitudes /= std::sqrt(state.amplitudes.squaredNorm());
    for (int k = 1; k <= 40; ++k) {
      const auto evolved = qst::evolve_closed({5, 1.0, 0.5}, state, 0.25 * k);
      check.require(std::abs(evolved.norm_squared() - 1.0) <= 1e-12,
                    "closed norm drift at t=" + fmt(0.25 * k));
    }
  }

  // dark-sector constancy
  {
    const auto config = make_config(4, 3);
    std::mt19937 rng(17);
    std::normal_distribution<double> gauss;
    EigenAmplitudes init;
    init.coeffs.resize(3, 4);
    for (int i = 0; i < 3; ++i) {
      for (int l = 0; l < 4; ++l) {
        init.coeffs(i, l) = complex<double>(gauss(rng), gauss(rng));
      }
    }
    init.coeffs /= std::sqrt(init.coeffs.squaredNorm());
    for (double t : {0.4, 2.0, 8.0}) {
      const auto evolved = qst::eigen_amplitudes(config, init, t);
      for (int i = 0; i < 3; ++i) {
        for (int l = 1; l < 4; ++l) {
          check.require(std::abs(std::abs(evolved.coeffs(i, l)) -
                                 std::abs(init.coeffs(i, l))) <= 1e-12,
                        "dark modulus moved");
        }
      }
    }
  }

  // mode-discretized total-norm conservation
  {
    const auto config = make_config(2, 1);
    const auto reservoir = qst::DiscretizedReservoir::sample(config, 2000, 1000.0);
    const auto init = qst::initial_coefficients(config, 1.0);
    const auto traj = qst::integrate_mode_discretized(
        config, reservoir, init, make_settings(1e-5, 1.0, 1000));
    double drift = 0.0;
    for (double norm : traj.total_norm) {
      drift = std::max(drift, std::abs(norm - traj.total_norm.front()));
    }
    check.note("mode-run norm drift " + fmt(drift));
    check.require(drift <= 1e-8, "mode-discretized norm drift above 1e-8");
  }

  // density-matrix trace / hermiticity / positivity
  {
    const auto config = make_config(3, 45);
    const auto init = qst::initial_coefficients(config, std::sqrt(0.5));
    for (int k = 0; k <= 60; ++k) {
      const auto rho = qst::reduced_density_matrix(config, init, 0.2 * k).rho;
      check.require(std::abs(rho.trace() - 1.0) <= 1e-12, "trace");
      check.require((rho - rho.adjoint()).cwiseAbs().maxCoeff() <= 1e-12,
                    "hermiticity");
      Eigen::SelfAdjointEigenSolver<Eigen::Matrix2cd> eig(rho);
      check.require(eig.eigenvalues().minCoeff() >= -1e-12, "positivity");
    }
  }

  // omega0-independence of fidelity moduli
  for (int m : {2, 3, 4}) {
    for (int k = 0; k <= 60; ++k) {
      const double t = 0.2 * k;
      const double reference = std::abs(qst::chi(make_config(m, 2, 0.0), m - 1, t));
      for (double omega0 : {1.0, 7.0}) {
        const double modulus =
            std::abs(qst::chi(make_config(m, 2, omega0), m - 1, t));
        check.require(std::abs(modulus - reference) <= 1e-12,
                      "omega0 dependence at M=" + std::to_string(m));
      }
    }
  }
}

// ---- criterion 7: oracle self-consistency -----------------------------------

void criterion_oracle_selfconsistency(Check& check) {
  // RK4 order by Richardson ratio on the (M=2, N=1) run
  {
    const auto config = make_config(2, 1);
    const auto init = qst::initial_coefficients(config, 1.0);
    const auto reference = qst::integrate_memory_kernel(
        config, init, make_settings(1e-4, 5.0, 8));
    const double err_coarse = qst::compare(
        qst::integrate_memory_kernel(config, init, make_settings(8e-4, 5.0, 1)),
        reference);
    const double err_fine = qst::compare(
        qst::integrate_memory_kernel(config, init, make_settings(4e-4, 5.0, 2)),
        reference);
    const double order = std::log2(err_coarse / err_fine);
    check.note("measured order " + fmt(order));
    check.require(order >= 3.8, "order below 3.8");
  }

  // mode-discretized reservoir against the residue-kernel integration
  {
    const auto config = make_config(2, 1);
    const auto reservoir =
        qst::DiscretizedReservoir::sample(config, 4000, 40.0 * 50.0);
    const auto init = qst::initial_coefficients(config, 1.0);
    const auto settings = make_settings(1e-5, 2.0, 100);
    const auto modes =
        qst::integrate_mode_discretized(config, reservoir, init, settings);
    const auto kernel_run = qst::integrate_memory_kernel(
        config, init, settings, qst::KernelVariant::residue);
    const double deviation = qst::compare(modes, kernel_run);
    check.note("mode vs residue-kernel deviation " + fmt(deviation));
    check.require(deviation <= 1e-3, "deviation above 1e-3");
  }
}

struct Criterion {
  const char* name;
  std::function<void(Check&)> run;
};

const std::vector<Criterion>& criteria() {
  static const std::vector<Criterion> all = {
      {"closed-chain transfer law |f| = sin^(M-1)(t)", criterion_transfer_law},
      {"unprotected steady fidelity 0.5 at t = 20", criterion_steady_value},
      {"analytic dynamics match the memory-kernel oracle to 1e-6",
       criterion_oracle_equivalence},
      {"transfer protection grows with N and scales like 1/N",
       criterion_protection_monotonic},
      {"protected/unprotected peak ratio larger for M=4 than M=2",
       criterion_length_ratio},
      {"invariant suites (orthonormality, norms, dark sector, rho, omega0)",
       criterion_invariants},
      {"oracle self-consistency (RK4 order, mode vs residue kernel)",
       criterion_oracle_selfconsistency},
  };
  return all;
}

int run_criterion(std::size_t index) {
  const auto& criterion = criteria()[index];
  Check check;
  const auto start = std::chrono::steady_clock::now();
  criterion.run(check);
  const double seconds =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - start)
          .count();
  std::printf("[%s] criterion %zu: %s (%.2fs)%s%s\n",
              check.ok ? "PASS" : "FAIL", index + 1, criterion.name, seconds,
              check.detail.str().empty() ? "" : " -- ",
              check.detail.str().c_str());
  std::fflush(stdout);
  return check.ok ? 0 : 1;
}

}  // namespace

int main(int argc, char** argv) {
  if (argc > 1) {
    const long requested = std::strtol(argv[1], nullptr, 10);
    if (requested < 1 || requested > long(criteria().size())) {
      std::fprintf(stderr, "criterion number must be 1..%zu\n",
                   criteria().size());
      return 64;
    }
    return run_criterion(static_cast<std::size_t>(requested - 1));
  }
  int failures = 0;
  for (std::size_t k = 0; k < criteria().size(); ++k) {
    failures += run_criterion(k);
  }
  return failures;
}
