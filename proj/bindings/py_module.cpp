// Python bindings for the simulator core: operator algebra, model builders,
// diffusion/master evolutions, spectral estimation, closed-form oracles, and
// the experiment harness.

#include <pybind11/complex.h>
#include <pybind11/eigen.h>
#include <pybind11/functional.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "qmmsim/errors.hpp"
#include "qmmsim/experiment.hpp"
#include "qmmsim/io.hpp"
#include "qmmsim/master.hpp"
#include "qmmsim/model.hpp"
#include "qmmsim/operators.hpp"
#include "qmmsim/oracle_suite.hpp"
#include "qmmsim/oracles.hpp"
#include "qmmsim/qsd.hpp"
#include "qmmsim/semiclassical.hpp"
#include "qmmsim/spectral.hpp"

namespace py = pybind11;
using namespace qmm;

namespace {

Spectrum psd_py(const std::vector<double>& series, double dt, const std::string& window,
                int segments) {
  return psd(series, dt, window, segments);
}

}  // namespace

PYBIND11_MODULE(_qmmsim, m) {
  m.doc() = "Quantum-metamaterial photon wavefront detector simulator";
  m.attr("__version__") = QMMSIM_VERSION;

  py::register_exception<IntegrationError>(m, "IntegrationError", PyExc_RuntimeError);

  py::class_<HilbertLayout>(m, "HilbertLayout")
      .def_static("detector", &HilbertLayout::detector, py::arg("n_qubits"), py::arg("m_a"),
                  py::arg("m_b"))
      .def_static("qubits", &HilbertLayout::qubits, py::arg("n_qubits"))
      .def_static("single_mode", &HilbertLayout::single_mode, py::arg("levels"))
      .def_property_readonly("dims", &HilbertLayout::dims)
      .def_property_readonly("labels", &HilbertLayout::labels)
      .def_property_readonly("total_dim", &HilbertLayout::total_dim)
      .def_property_readonly("n_qubits", &HilbertLayout::n_qubits)
      .def("index_of", &HilbertLayout::index_of)
      .def("__eq__", [](const HilbertLayout& a, const HilbertLayout& b) { return a == b; })
      .def("__repr__", [](const HilbertLayout& lay) {
        std::string s = "HilbertLayout(";
        for (int k = 0; k < lay.n_subsystems(); ++k)
          s += (k ? ", " : "") + lay.label(k) + ":" + std::to_string(lay.dim(k));
        return s + ")";
      });

  py::class_<Operator>(m, "Operator")
      .def(py::init<HilbertLayout, CMat>(), py::arg("layout"), py::arg("matrix"))
      .def_readonly("layout", &Operator::layout)
      .def_property_readonly("matrix", [](const Operator& op) { return op.mat; })
      .def("is_hermitian", &Operator::is_hermitian, py::arg("tol") = 1e-12)
      .def("dagger", &Operator::dagger)
      .def("__add__", [](const Operator& a, const Operator& b) { return a + b; })
      .def("__sub__", [](const Operator& a, const Operator& b) { return a - b; })
      .def("__matmul__", [](const Operator& a, const Operator& b) { return a * b; })
      .def("__mul__", [](const Operator& a, Cx s) { return s * a; })
      .def("__rmul__", [](const Operator& a, Cx s) { return s * a; });

  py::class_<StateVector>(m, "StateVector")
      .def(py::init<HilbertLayout, CVec>(), py::arg("layout"), py::arg("amplitudes"))
      .def_static("basis_state", &StateVector::basis_state, py::arg("layout"),
                  py::arg("occupations"))
      .def_static("coherent", &StateVector::coherent, py::arg("layout"), py::arg("alpha"))
      .def_readonly("layout", &StateVector::layout)
      .def_property_readonly("amplitudes", [](const StateVector& s) { return s.amps; })
      .def("norm", &StateVector::norm);

  m.def("annihilation", &annihilation, py::arg("levels"));
  m.def("creation", &creation, py::arg("levels"));
  m.def("number_op", &number_op, py::arg("levels"));
  m.def("pauli", py::overload_cast<const std::string&>(&pauli), py::arg("axis"));
  m.def("identity", &identity, py::arg("layout"));
  m.def("embed",
        py::overload_cast<const Operator&, const std::string&, const HilbertLayout&>(&embed),
        py::arg("op"), py::arg("label"), py::arg("layout"));
  m.def("embed", py::overload_cast<const Operator&, int, const HilbertLayout&>(&embed),
        py::arg("op"), py::arg("index"), py::arg("layout"));
  m.def("expectation", &expectation, py::arg("state"), py::arg("op"));
  m.def("commutator", &commutator);
  m.def("top_level_population", &top_level_population, py::arg("state"), py::arg("index"));

  py::class_<ModelParams>(m, "ModelParams")
      .def(py::init<>())
      .def_static("defaults", &ModelParams::defaults, py::arg("n_qubits") = 2)
      .def_readwrite("n_qubits", &ModelParams::n_qubits)
      .def_readwrite("eps", &ModelParams::eps)
      .def_readwrite("delta", &ModelParams::delta)
      .def_readwrite("omega_a", &ModelParams::omega_a)
      .def_readwrite("omega_b", &ModelParams::omega_b)
      .def_readwrite("g_a", &ModelParams::g_a)
      .def_readwrite("g_b", &ModelParams::g_b)
      .def_readwrite("gamma_z", &ModelParams::gamma_z)
      .def_readwrite("gamma_xy", &ModelParams::gamma_xy)
      .def_readwrite("gamma_b", &ModelParams::gamma_b)
      .def_readwrite("g_qq", &ModelParams::g_qq)
      .def_readwrite("chain_periodic", &ModelParams::chain_periodic)
      .def_readwrite("noise_d", &ModelParams::noise_d)
      .def_readwrite("drive_amp", &ModelParams::drive_amp)
      .def_readwrite("drive_freq", &ModelParams::drive_freq)
      .def_readwrite("m_a", &ModelParams::m_a)
      .def_readwrite("m_b", &ModelParams::m_b)
      .def_readwrite("f_envelope", &ModelParams::f_envelope)
      .def_readwrite("h_envelope", &ModelParams::h_envelope)
      .def("validate", &ModelParams::validate)
      .def("layout", &ModelParams::layout);

  m.def("build_full_hamiltonian", &build_full_hamiltonian, py::arg("params"), py::arg("t"));
  m.def(
      "build_lindblads",
      [](const ModelParams& p) {
        std::vector<std::tuple<std::string, Operator, double>> out;
        for (auto& ch : build_lindblads(p)) out.emplace_back(ch.label, ch.op, ch.rate);
        return out;
      },
      py::arg("params"));
  m.def("build_chain_hamiltonian", &build_chain_hamiltonian, py::arg("params"), py::arg("t"),
        py::arg("noise_samples"));
  m.def("dispersive_shift", &dispersive_shift, py::arg("params"), py::arg("qubit"));
  m.def("effective_xx_coupling", &effective_xx_coupling, py::arg("params"));

  py::enum_<QsdScheme>(m, "QsdScheme")
      .value("EulerMaruyama", QsdScheme::EulerMaruyama)
      .value("ExponentialEuler", QsdScheme::ExponentialEuler);

  py::class_<RunConfig>(m, "RunConfig")
      .def(py::init<>())
      .def_readwrite("params", &RunConfig::params)
      .def_readwrite("initial_photons", &RunConfig::initial_photons)
      .def_readwrite("initial_alpha", &RunConfig::initial_alpha)
      .def_property(
          "initial_qubits",
          [](const RunConfig& c) {
            switch (c.initial_qubits) {
              case QubitInit::Ground: return "ground";
              case QubitInit::Excited: return "excited";
              default: return "plus";
            }
          },
          [](RunConfig& c, const std::string& tag) {
            c.initial_qubits = qubit_init_from_string(tag);
          })
      .def_readwrite("duration_periods", &RunConfig::duration_periods)
      .def_readwrite("warmup_periods", &RunConfig::warmup_periods)
      .def_readwrite("dt", &RunConfig::dt)
      .def_readwrite("record_stride", &RunConfig::record_stride)
      .def_readwrite("seed", &RunConfig::seed)
      .def_readwrite("scheme", &RunConfig::scheme)
      .def_readwrite("leakage_threshold", &RunConfig::leakage_threshold);

  py::class_<TrajectoryRecord>(m, "TrajectoryRecord")
      .def_readonly("seed", &TrajectoryRecord::seed)
      .def_readonly("dt", &TrajectoryRecord::dt)
      .def_readonly("times", &TrajectoryRecord::times)
      .def_readonly("names", &TrajectoryRecord::names)
      .def_readonly("flagged", &TrajectoryRecord::flagged)
      .def_readonly("max_leakage", &TrajectoryRecord::max_leakage)
      .def_readonly("max_norm_drift", &TrajectoryRecord::max_norm_drift)
      .def_property_readonly("in_window",
                             [](const TrajectoryRecord& r) {
                               std::vector<bool> w(r.in_window.begin(), r.in_window.end());
                               return w;
                             })
      .def("column", &TrajectoryRecord::column, py::arg("name"))
      .def("windowed", &TrajectoryRecord::windowed, py::arg("name"));

  py::class_<EnsembleResult>(m, "EnsembleResult")
      .def_readonly("trajectories", &EnsembleResult::trajectories)
      .def_readonly("mean", &EnsembleResult::mean)
      .def_property_readonly("stderr", [](const EnsembleResult& e) { return e.stderr_; });

  m.def("initial_state", &initial_state, py::arg("config"));
  m.def("run_trajectory", &run_trajectory, py::arg("config"),
        py::call_guard<py::gil_scoped_release>());
  m.def("run_ensemble", &run_ensemble, py::arg("config"), py::arg("n_traj"),
        py::arg("max_threads") = 0, py::call_guard<py::gil_scoped_release>());
  m.def("trajectory_to_csv", &trajectory_to_csv, py::arg("record"), py::arg("path"));
  m.def("trajectory_to_binary", &trajectory_to_binary, py::arg("record"), py::arg("path"));
  m.def("trajectory_from_binary", &trajectory_from_binary, py::arg("path"));

  py::class_<DensityOp>(m, "DensityOp")
      .def(py::init<HilbertLayout, CMat>(), py::arg("layout"), py::arg("matrix"))
      .def_static("pure", &DensityOp::pure, py::arg("state"))
      .def_static("maximally_mixed", &DensityOp::maximally_mixed, py::arg("layout"))
      .def_readonly("layout", &DensityOp::layout)
      .def_property_readonly("matrix", [](const DensityOp& r) { return r.mat; })
      .def("min_eigenvalue", &DensityOp::min_eigenvalue);

  py::class_<BlochTensor>(m, "BlochTensor")
      .def(py::init<>())
      .def_readwrite("pi", &BlochTensor::pi)
      .def_property_readonly("sz_total", &BlochTensor::sz_total);

  m.def("bloch_encode", &bloch_encode, py::arg("rho"));
  m.def("bloch_decode", &bloch_decode, py::arg("pi"));
  m.def(
      "lindblad_rhs",
      [](const DensityOp& rho, const Operator& h,
         const std::vector<std::tuple<std::string, Operator, double>>& lindblads) {
        LindbladSet set;
        for (const auto& [label, op, rate] : lindblads) set.push_back({label, op, rate});
        return lindblad_rhs(rho, h, set);
      },
      py::arg("rho"), py::arg("h"), py::arg("lindblads"));

  py::class_<ScalingRunOptions>(m, "ScalingRunOptions")
      .def(py::init<>())
      .def_readwrite("duration", &ScalingRunOptions::duration)
      .def_readwrite("dt", &ScalingRunOptions::dt)
      .def_readwrite("stride", &ScalingRunOptions::stride)
      .def_readwrite("seed", &ScalingRunOptions::seed)
      .def_readwrite("r0_x", &ScalingRunOptions::r0_x)
      .def_readwrite("r0_y", &ScalingRunOptions::r0_y)
      .def_readwrite("r0_z", &ScalingRunOptions::r0_z);

  m.def(
      "run_uncoupled_ensemble",
      [](const ModelParams& p, int n, const ScalingRunOptions& opts) {
        const SzSeries run = run_uncoupled_ensemble(p, n, opts);
        return py::make_tuple(run.times, run.sz);
      },
      py::arg("params"), py::arg("n_qubits"), py::arg("options"));
  m.def(
      "run_coupled_pair",
      [](const ModelParams& p, const ScalingRunOptions& opts) {
        const CoupledPairRun run = run_coupled_pair(p, opts);
        std::vector<Eigen::Matrix4d> pis;
        pis.reserve(run.bloch.size());
        for (const auto& b : run.bloch) pis.push_back(b.pi);
        return py::make_tuple(run.times, run.sz, pis);
      },
      py::arg("params"), py::arg("options"));

  py::class_<DriveProfile>(m, "DriveProfile")
      .def(py::init<>())
      .def_readwrite("f_envelope", &DriveProfile::f_envelope)
      .def_readwrite("quad_dt", &DriveProfile::quad_dt)
      .def("alpha_sq", &DriveProfile::alpha_sq, py::arg("t"));
  m.def("coherent_photon_number", &coherent_photon_number, py::arg("profile"), py::arg("t"));
  m.def("perturbative_sz", &perturbative_sz, py::arg("gamma"), py::arg("alpha_sq"),
        py::arg("eta_path"), py::arg("delta_eff"), py::arg("t"), py::arg("dt"), py::arg("s_x0"));

  py::class_<CollectiveSz>(m, "CollectiveSz")
      .def_readonly("total", &CollectiveSz::total)
      .def_readonly("coherent_term", &CollectiveSz::coherent_term)
      .def_readonly("noise_term", &CollectiveSz::noise_term)
      .def_readonly("coherent_bracket", &CollectiveSz::coherent_bracket)
      .def_readonly("noise_bracket", &CollectiveSz::noise_bracket);
  m.def("collective_sz", &collective_sz, py::arg("gamma"), py::arg("alpha_sq"),
        py::arg("eta_paths"), py::arg("delta_eff"), py::arg("t"), py::arg("dt"), py::arg("s_x0"));

  py::class_<SpinEnsembleOptions>(m, "SpinEnsembleOptions")
      .def(py::init<>())
      .def_readwrite("n_qubits", &SpinEnsembleOptions::n_qubits)
      .def_readwrite("gamma", &SpinEnsembleOptions::gamma)
      .def_readwrite("delta_eff", &SpinEnsembleOptions::delta_eff)
      .def_readwrite("mean_field", &SpinEnsembleOptions::mean_field)
      .def_readwrite("kappa", &SpinEnsembleOptions::kappa)
      .def_readwrite("alpha_sq", &SpinEnsembleOptions::alpha_sq)
      .def_readwrite("noise_d", &SpinEnsembleOptions::noise_d)
      .def_readwrite("duration", &SpinEnsembleOptions::duration)
      .def_readwrite("dt", &SpinEnsembleOptions::dt)
      .def_readwrite("stride", &SpinEnsembleOptions::stride)
      .def_readwrite("seed", &SpinEnsembleOptions::seed)
      .def_readwrite("sx0", &SpinEnsembleOptions::sx0);
  m.def("run_spin_ensemble", [](const SpinEnsembleOptions& opts) {
    const SpinEnsembleRun run = run_spin_ensemble(opts);
    return py::make_tuple(run.times, run.sz);
  });

  py::class_<Spectrum>(m, "Spectrum")
      .def_readonly("freqs", &Spectrum::freqs)
      .def_readonly("psd", &Spectrum::psd)
      .def_readonly("window", &Spectrum::window)
      .def_readonly("segments", &Spectrum::segments)
      .def_readonly("observable", &Spectrum::observable)
      .def("band_power", &Spectrum::band_power, py::arg("lo"), py::arg("hi"))
      .def_property_readonly("domega", &Spectrum::domega);

  py::class_<SnrReport>(m, "SnrReport")
      .def_readonly("signal_freq", &SnrReport::signal_freq)
      .def_readonly("signal_power", &SnrReport::signal_power)
      .def_readonly("baseline_power", &SnrReport::baseline_power)
      .def_readonly("snr", &SnrReport::snr)
      .def_readonly("method", &SnrReport::method);

  m.def("psd", &psd_py, py::arg("series"), py::arg("dt"), py::arg("window") = "hann",
        py::arg("segments") = 8);
  m.def("autocorrelation", &autocorrelation, py::arg("series"));
  m.def("snr", &snr, py::arg("spectrum"), py::arg("signal_freq"),
        py::arg("signal_halfwidth_bins"), py::arg("baseline_lo"), py::arg("baseline_hi"));
  m.def("average_spectra", &average_spectra, py::arg("spectra"));

  m.def("vacuum_rabi_state", &vacuum_rabi_state, py::arg("g_a"), py::arg("t"), py::arg("m_a") = 2);
  m.def("bell_readout_times", &bell_readout_times, py::arg("g_a"), py::arg("n"));
  m.def("rabi_rwa_hamiltonian", &rabi_rwa_hamiltonian, py::arg("g_a"), py::arg("omega_a"),
        py::arg("eps"), py::arg("m_a") = 2);
  m.def("displacement_apply", &displacement_apply, py::arg("alpha"), py::arg("state"));
  m.def("fidelity", &fidelity, py::arg("a"), py::arg("b"));
  py::class_<ExactPropagator>(m, "ExactPropagator")
      .def(py::init<const Operator&>(), py::arg("hamiltonian"))
      .def("evolve", &ExactPropagator::evolve, py::arg("state"), py::arg("t"));

  py::class_<OracleCheck>(m, "OracleCheck")
      .def_readonly("name", &OracleCheck::name)
      .def_readonly("value", &OracleCheck::value)
      .def_readonly("threshold", &OracleCheck::threshold)
      .def_readonly("passed", &OracleCheck::pass)
      .def_readonly("detail", &OracleCheck::detail);
  m.def("run_oracle_suite", &run_oracle_suite, py::arg("seed") = 20250801,
        py::arg("max_threads") = 0, py::call_guard<py::gil_scoped_release>());
  m.def("format_oracle_table", &format_oracle_table, py::arg("checks"));

  py::class_<ExperimentConfig>(m, "ExperimentConfig")
      .def(py::init<>())
      .def_static("for_tag", &ExperimentConfig::for_tag, py::arg("tag"))
      .def_static("from_file", &ExperimentConfig::from_file, py::arg("path"))
      .def_readwrite("experiment", &ExperimentConfig::experiment)
      .def_readwrite("params", &ExperimentConfig::params)
      .def_readwrite("photons", &ExperimentConfig::photons)
      .def_readwrite("alpha", &ExperimentConfig::alpha)
      .def_readwrite("initial_qubits", &ExperimentConfig::initial_qubits)
      .def_readwrite("duration_periods", &ExperimentConfig::duration_periods)
      .def_readwrite("warmup_periods", &ExperimentConfig::warmup_periods)
      .def_readwrite("steps_per_period", &ExperimentConfig::steps_per_period)
      .def_readwrite("record_stride", &ExperimentConfig::record_stride)
      .def_readwrite("n_traj", &ExperimentConfig::n_traj)
      .def_readwrite("noise_realizations", &ExperimentConfig::noise_realizations)
      .def_readwrite("seed", &ExperimentConfig::seed)
      .def_readwrite("threads", &ExperimentConfig::threads)
      .def_readwrite("segments", &ExperimentConfig::segments)
      .def_readwrite("window", &ExperimentConfig::window)
      .def_readwrite("snr_signal_freq", &ExperimentConfig::snr_signal_freq)
      .def_readwrite("snr_halfwidth_bins", &ExperimentConfig::snr_halfwidth_bins)
      .def_readwrite("snr_baseline_lo", &ExperimentConfig::snr_baseline_lo)
      .def_readwrite("snr_baseline_hi", &ExperimentConfig::snr_baseline_hi)
      .def_readwrite("readout_band_lo", &ExperimentConfig::readout_band_lo)
      .def_readwrite("readout_band_hi", &ExperimentConfig::readout_band_hi)
      .def_readwrite("leakage_threshold", &ExperimentConfig::leakage_threshold)
      .def("echo", &ExperimentConfig::echo)
      .def("resolve", &ExperimentConfig::resolve);

  py::class_<CaseMetrics>(m, "CaseMetrics")
      .def_readonly("label", &CaseMetrics::label)
      .def_readonly("values", &CaseMetrics::values);
  py::class_<ExperimentSummary>(m, "ExperimentSummary")
      .def_readonly("experiment", &ExperimentSummary::experiment)
      .def_readonly("outdir", &ExperimentSummary::outdir)
      .def_readonly("cases", &ExperimentSummary::cases)
      .def_readonly("any_flagged", &ExperimentSummary::any_flagged)
      .def_readonly("ok", &ExperimentSummary::ok)
      .def_readonly("report", &ExperimentSummary::report)
      .def("metric", &ExperimentSummary::metric, py::arg("label"), py::arg("key"));
  m.def("run_experiment", &run_experiment, py::arg("config"), py::arg("outdir"),
        py::call_guard<py::gil_scoped_release>());

  py::class_<SweepResult>(m, "SweepResult")
      .def_readonly("values", &SweepResult::values)
      .def_readonly("snr", &SweepResult::snr)
      .def_readonly("signal_amplitude", &SweepResult::signal_amplitude)
      .def_readonly("peak_freq", &SweepResult::peak_freq)
      .def_readonly("runs", &SweepResult::runs)
      .def_readonly("ok", &SweepResult::ok);
  m.def("sweep", &sweep, py::arg("config"), py::arg("parameter"), py::arg("values"),
        py::arg("outdir"), py::call_guard<py::gil_scoped_release>());
  m.def("sweepable_parameters", &sweepable_parameters);
}
