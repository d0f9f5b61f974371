#include <pybind11/complex.h>
#include <pybind11/eigen.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "qst/chain_dynamics.hpp"
#include "qst/errors.hpp"
#include "qst/krawtchouk.hpp"
#include "qst/open_dynamics.hpp"
#include "qst/oracle.hpp"

namespace py = pybind11;

PYBIND11_MODULE(_core, m) {
  m.doc() = "Spin-chain state transfer: Krawtchouk spectral basis, closed and "
            "open dynamics, and the numeric oracle.";

  py::register_exception<qst::ValidationError>(m, "ValidationError",
                                               PyExc_ValueError);

  py::class_<qst::ChainSpec>(m, "ChainSpec")
      .def(py::init<int, double, double>(), py::arg("sites"),
           py::arg("omega0") = 1.0, py::arg("p") = 0.5)
      .def_readwrite("sites", &qst::ChainSpec::sites)
      .def_readwrite("omega0", &qst::ChainSpec::omega0)
      .def_readwrite("p", &qst::ChainSpec::p)
      .def("validate", &qst::ChainSpec::validate);

  py::class_<qst::SpectralBasis>(m, "SpectralBasis")
      .def_readonly("U", &qst::SpectralBasis::U)
      .def_readonly("energies", &qst::SpectralBasis::energies)
      .def_readonly("couplings", &qst::SpectralBasis::couplings);

  py::class_<qst::ReservoirSpec>(m, "ReservoirSpec")
      .def(py::init<>())
      .def_readwrite("gamma0", &qst::ReservoirSpec::gamma0)
      .def_readwrite("spectral_width", &qst::ReservoirSpec::spectral_width);

  py::class_<qst::EnsembleConfig>(m, "EnsembleConfig")
      .def(py::init([](const qst::ChainSpec& chain, double gamma0,
                       double spectral_width, int num_chains) {
             qst::EnsembleConfig config;
             config.chain = chain;
             config.reservoir.gamma0 = gamma0;
             config.reservoir.spectral_width = spectral_width;
             config.num_chains = num_chains;
             config.validate();
             return config;
           }),
           py::arg("chain"), py::arg("gamma0") = 1.0,
           py::arg("spectral_width") = 50.0, py::arg("num_chains") = 1)
      .def_readwrite("chain", &qst::EnsembleConfig::chain)
      .def_readwrite("reservoir", &qst::EnsembleConfig::reservoir)
      .def_readwrite("num_chains", &qst::EnsembleConfig::num_chains);

  py::class_<qst::SiteState>(m, "SiteState")
      .def(py::init<>())
      .def_readwrite("amplitudes", &qst::SiteState::amplitudes)
      .def_readwrite("vacuum", &qst::SiteState::vacuum)
      .def("norm_squared", &qst::SiteState::norm_squared);

  py::class_<qst::FidelitySeries>(m, "FidelitySeries")
      .def_readonly("times", &qst::FidelitySeries::times)
      .def_readonly("values", &qst::FidelitySeries::values)
      .def_readonly("amplitudes", &qst::FidelitySeries::amplitudes);

  py::class_<qst::EigenAmplitudes>(m, "EigenAmplitudes")
      .def(py::init<>())
      .def_readwrite("coeffs", &qst::EigenAmplitudes::coeffs)
      .def_readwrite("vacuum", &qst::EigenAmplitudes::vacuum)
      .def("norm_squared", &qst::EigenAmplitudes::norm_squared);

  py::class_<qst::QubitDensityMatrix>(m, "QubitDensityMatrix")
      .def_readonly("rho", &qst::QubitDensityMatrix::rho);

  py::enum_<qst::KernelVariant>(m, "KernelVariant")
      .value("eq33_consistent", qst::KernelVariant::eq33_consistent)
      .value("residue", qst::KernelVariant::residue);

  py::class_<qst::IntegratorSettings>(m, "IntegratorSettings")
      .def(py::init<>())
      .def_readwrite("dt", &qst::IntegratorSettings::dt)
      .def_readwrite("t_max", &qst::IntegratorSettings::t_max)
      .def_readwrite("record_stride", &qst::IntegratorSettings::record_stride);

  py::class_<qst::DiscretizedReservoir>(m, "DiscretizedReservoir")
      .def_static("sample", &qst::DiscretizedReservoir::sample,
                  py::arg("config"), py::arg("num_modes"), py::arg("window"))
      .def_readwrite("frequencies", &qst::DiscretizedReservoir::frequencies)
      .def_readwrite("couplings", &qst::DiscretizedReservoir::couplings)
      .def("recurrence_time", &qst::DiscretizedReservoir::recurrence_time);

  py::class_<qst::AmplitudeTrajectory>(m, "AmplitudeTrajectory")
      .def_readonly("times", &qst::AmplitudeTrajectory::times)
      .def_readonly("frames", &qst::AmplitudeTrajectory::frames)
      .def_readonly("vacuum", &qst::AmplitudeTrajectory::vacuum)
      .def_readonly("total_norm", &qst::AmplitudeTrajectory::total_norm)
      .def_readonly("recurrence_warning",
                    &qst::AmplitudeTrajectory::recurrence_warning)
      .def("to_site", &qst::AmplitudeTrajectory::to_site);

  m.def("krawtchouk_poly", &qst::krawtchouk_poly, py::arg("degree"),
        py::arg("x"), py::arg("sites"), py::arg("p"));
  m.def("weight", &qst::weight, py::arg("x"), py::arg("sites"), py::arg("p"));
  m.def("norm_d", &qst::norm_d, py::arg("degree"), py::arg("sites"),
        py::arg("p"));
  m.def("orthonormal_basis", &qst::orthonormal_basis, py::arg("spec"));
  m.def("hamiltonian", &qst::hamiltonian, py::arg("spec"));

  m.def("transfer_amplitude", &qst::transfer_amplitude, py::arg("spec"),
        py::arg("t"));
  m.def("evolve_closed", &qst::evolve_closed, py::arg("spec"),
        py::arg("state"), py::arg("t"));
  m.def("closed_fidelity_series", &qst::closed_fidelity_series,
        py::arg("spec"), py::arg("times"));

  m.def("d_factor",
        py::overload_cast<const qst::EnsembleConfig&>(&qst::d_factor),
        py::arg("config"));
  m.def("survival_g",
        py::overload_cast<const qst::EnsembleConfig&, double>(&qst::survival_g),
        py::arg("config"), py::arg("t"));
  m.def("bright_amplitudes", &qst::bright_amplitudes, py::arg("config"),
        py::arg("init"), py::arg("t"));
  m.def("initial_coefficients", &qst::initial_coefficients, py::arg("config"),
        py::arg("xi0"));
  m.def("eigen_amplitudes", &qst::eigen_amplitudes, py::arg("config"),
        py::arg("init"), py::arg("t"));
  m.def("chi", &qst::chi, py::arg("config"), py::arg("site"), py::arg("t"));
  m.def("site_amplitudes", &qst::site_amplitudes, py::arg("config"),
        py::arg("init"), py::arg("t"));
  m.def("reduced_density_matrix", &qst::reduced_density_matrix,
        py::arg("config"), py::arg("init"), py::arg("t"));
  m.def("state_fidelity", &qst::state_fidelity, py::arg("psi"), py::arg("rho"));
  m.def("open_fidelity_series", &qst::open_fidelity_series, py::arg("config"),
        py::arg("times"));

  m.def("kernel", &qst::kernel, py::arg("tau"), py::arg("config"),
        py::arg("variant") = qst::KernelVariant::eq33_consistent);
  m.def("integrate_memory_kernel", &qst::integrate_memory_kernel,
        py::arg("config"), py::arg("init"), py::arg("settings"),
        py::arg("variant") = qst::KernelVariant::eq33_consistent);
  m.def("integrate_mode_discretized", &qst::integrate_mode_discretized,
        py::arg("config"), py::arg("reservoir"), py::arg("init"),
        py::arg("settings"));
  m.def("compare_trajectories", &qst::compare, py::arg("a"), py::arg("b"));
}
