#include <pybind11/complex.h>
#include <pybind11/eigen.h>
#include <pybind11/functional.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "qslprobe/backend.hpp"
#include "qslprobe/errors.hpp"
#include "qslprobe/estimator.hpp"
#include "qslprobe/gates.hpp"
#include "qslprobe/magnus.hpp"
#include "qslprobe/units.hpp"
#include "qslprobe/verify.hpp"

namespace py = pybind11;
using namespace qslprobe;

namespace {

HamiltonianTrajectory make_trajectory(int dim, double duration,
                                      std::function<ComplexMatrix(double)> evaluator,
                                      bool piecewise_constant) {
    HamiltonianTrajectory traj;
    traj.dim = dim;
    traj.duration = duration;
    traj.evaluator = std::move(evaluator);
    traj.smoothness =
        piecewise_constant ? Smoothness::PiecewiseConstant : Smoothness::Smooth;
    return traj;
}

}  // namespace

PYBIND11_MODULE(_qslprobe, m) {
    m.doc() = "Black-box gate-time amplification and quantum-speed-limit energy inference";

    m.attr("hbar") = units::hbar;

    py::register_exception<Error>(m, "QslprobeError");

    // ---- dynamics core -------------------------------------------------
    py::class_<HamiltonianTrajectory>(m, "HamiltonianTrajectory")
        .def(py::init(&make_trajectory), py::arg("dim"), py::arg("duration"),
             py::arg("evaluator"), py::arg("piecewise_constant") = false)
        .def_readonly("dim", &HamiltonianTrajectory::dim)
        .def_readonly("duration", &HamiltonianTrajectory::duration)
        .def("at", &HamiltonianTrajectory::at);

    m.def("constant_hamiltonian", &constant_hamiltonian, py::arg("h"), py::arg("duration"));
    m.def("scaled", &scaled);
    m.def("restricted", &restricted);

    py::class_<Propagation>(m, "Propagation")
        .def_readonly("times", &Propagation::times)
        .def_readonly("states", &Propagation::states)
        .def_readonly("unitaries", &Propagation::unitaries);

    m.def("expm_hermitian", &expm_hermitian, py::arg("h"), py::arg("scale"));
    m.def("logm_principal_nonneg", &logm_principal_nonneg, py::arg("u"), py::arg("tau"));
    m.def("propagate", &propagate, py::arg("h"), py::arg("psi0"), py::arg("steps"));
    m.def("expectation", &expectation);
    m.def("variance", &variance);
    m.def("overlap", &overlap);

    // ---- qsl -----------------------------------------------------------
    py::class_<EnergyStats>(m, "EnergyStats")
        .def_readonly("mean_energy", &EnergyStats::mean_energy)
        .def_readonly("energy_stddev", &EnergyStats::energy_stddev)
        .def_readonly("effective_energy", &EnergyStats::effective_energy)
        .def_readonly("duration", &EnergyStats::duration);

    py::class_<QslBounds>(m, "QslBounds")
        .def_readonly("t_mt", &QslBounds::t_mt)
        .def_readonly("t_ml", &QslBounds::t_ml)
        .def_readonly("t_effective", &QslBounds::t_effective);

    m.def("time_averaged_stats", &time_averaged_stats, py::arg("h"), py::arg("psi0"),
          py::arg("steps"), py::arg("shift_ground_to_zero") = false);
    m.def("mt_bound", &mt_bound);
    m.def("ml_bound", &ml_bound);
    m.def("combined_bounds", &combined_bounds, py::arg("delta_e"),
          py::arg("e_ground_zero") = std::nullopt);
    m.def("invert_qsl", [](double tau) {
        const EnergyLowerBounds b = invert_qsl(tau);
        return std::make_pair(b.e_lower, b.delta_e_lower);
    });
    m.def("orthogonalization_time", &orthogonalization_time, py::arg("h"), py::arg("psi0"),
          py::arg("tol") = 1e-6, py::arg("steps") = 2048);
    m.def("corrected_mt_bound", &corrected_mt_bound, py::arg("delta_e"), py::arg("epsilon"));

    // ---- magnus / dyson --------------------------------------------------
    py::class_<ExpansionReport>(m, "ExpansionReport")
        .def_readonly("e_eff_exact", &ExpansionReport::e_eff_exact)
        .def_readonly("e_avg_exact", &ExpansionReport::e_avg_exact)
        .def_readonly("first_order_term", &ExpansionReport::first_order_term)
        .def_readonly("second_order_commutator_term",
                      &ExpansionReport::second_order_commutator_term)
        .def_readonly("lambda_scaling_exponent", &ExpansionReport::lambda_scaling_exponent)
        .def_readonly("residual_scaling_exponent", &ExpansionReport::residual_scaling_exponent)
        .def_readonly("difference_saturated", &ExpansionReport::difference_saturated)
        .def_readonly("residual_saturated", &ExpansionReport::residual_saturated)
        .def_readonly("lambdas", &ExpansionReport::lambdas)
        .def_readonly("differences", &ExpansionReport::differences)
        .def_readonly("residuals", &ExpansionReport::residuals);

    m.def("magnus_h_eff_second_order", &magnus_h_eff_second_order, py::arg("h"),
          py::arg("steps"));
    m.def("dyson_unitary_second_order", &dyson_unitary_second_order, py::arg("h"), py::arg("t"),
          py::arg("steps"));
    m.def("energy_difference_formula", &energy_difference_formula, py::arg("h"), py::arg("psi0"),
          py::arg("steps"));
    m.def("verify_second_order_scaling", &verify_second_order_scaling, py::arg("h"),
          py::arg("psi0"), py::arg("lambdas"), py::arg("steps") = 4096);

    // ---- black-box simulator ---------------------------------------------
    py::class_<GateApp>(m, "GateApp")
        .def_readonly("gate", &GateApp::gate)
        .def_readonly("qubits", &GateApp::qubits);

    py::class_<Instruction>(m, "Instruction")
        .def_readonly("body", &Instruction::body)
        .def_readonly("repeat", &Instruction::repeat);

    py::class_<Circuit>(m, "Circuit")
        .def_readonly("n_qubits", &Circuit::n_qubits)
        .def_readonly("instructions", &Circuit::instructions)
        .def("total_gate_count", &Circuit::total_gate_count);

    m.def("parse_circuit", &parse_circuit);
    m.def("gate_unitary_library", &gate_unitary_library, py::arg("name"), py::arg("arity"));
    m.def("known_gates", &known_gates);

    py::class_<DeviceModel>(m, "DeviceModel")
        .def_readonly("name", &DeviceModel::name)
        .def_readonly("n_qubits", &DeviceModel::n_qubits)
        .def_readonly("levels", &DeviceModel::levels);

    m.def("load_device", &load_device, py::arg("config_text"));
    m.def("load_device_file", &load_device_file, py::arg("path"));
    m.def("default_device_config", &default_device_config);

    py::class_<Job>(m, "Job")
        .def(py::init([](std::vector<Circuit> circuits, std::uint64_t shots,
                         std::optional<std::uint64_t> seed) {
                 Job job;
                 job.circuits = std::move(circuits);
                 job.shots = shots;
                 job.seed = seed;
                 return job;
             }),
             py::arg("circuits"), py::arg("shots"), py::arg("seed") = std::nullopt);

    py::class_<JobResult>(m, "JobResult")
        .def_readonly("counts", &JobResult::counts)
        .def_readonly("t_exec_seconds", &JobResult::t_exec_seconds);

    m.def("submit_job", &submit_job, py::arg("device"), py::arg("job"));
    m.def("serialize_job_result", &serialize_job_result);
    m.def("parse_job_result", &parse_job_result);

    py::class_<BackendInterface>(m, "BackendInterface")
        .def("submit", &BackendInterface::submit);
    py::class_<SimBackend, BackendInterface>(m, "SimBackend").def(py::init<DeviceModel>());
    py::class_<ReplayBackend, BackendInterface>(m, "ReplayBackend")
        .def(py::init<std::vector<JobResult>>());

    // ---- estimator -------------------------------------------------------
    py::class_<AmplificationPlan>(m, "AmplificationPlan")
        .def_readwrite("gate", &AmplificationPlan::gate)
        .def_readwrite("qubits", &AmplificationPlan::qubits)
        .def_readwrite("n_gate_values", &AmplificationPlan::n_gate_values)
        .def_readwrite("n_shots", &AmplificationPlan::n_shots)
        .def_readwrite("seed", &AmplificationPlan::seed);

    m.def("default_amplification_plan", &default_amplification_plan, py::arg("gate"),
          py::arg("qubits"), py::arg("seed") = 0);
    m.def("default_threshold", &default_threshold);
    m.def("amplification_circuit_text", &amplification_circuit_text);

    py::class_<RegressionFit>(m, "RegressionFit")
        .def_readonly("slope", &RegressionFit::slope)
        .def_readonly("intercept", &RegressionFit::intercept)
        .def_readonly("r_squared", &RegressionFit::r_squared)
        .def_readonly("slope_stderr", &RegressionFit::slope_stderr)
        .def_readonly("threshold_used", &RegressionFit::threshold_used)
        .def_readonly("points_used", &RegressionFit::points_used);

    py::class_<GateTimeEstimate>(m, "GateTimeEstimate")
        .def_readonly("gate", &GateTimeEstimate::gate)
        .def_readonly("qubits", &GateTimeEstimate::qubits)
        .def_readonly("arity", &GateTimeEstimate::arity)
        .def_readonly("t_gate", &GateTimeEstimate::t_gate)
        .def_readonly("t_gate_stderr", &GateTimeEstimate::t_gate_stderr)
        .def_readonly("fit", &GateTimeEstimate::fit)
        .def_readonly("is_virtual", &GateTimeEstimate::is_virtual);

    py::class_<EnergyEstimate>(m, "EnergyEstimate")
        .def_readonly("arity", &EnergyEstimate::arity)
        .def_readonly("tau_n", &EnergyEstimate::tau_n)
        .def_readonly("e_lower", &EnergyEstimate::e_lower)
        .def_readonly("delta_e_lower", &EnergyEstimate::delta_e_lower);

    m.def(
        "run_amplification",
        [](BackendInterface& backend, const AmplificationPlan& plan,
           const std::string& store_path) {
            ExperimentStore store(store_path);
            const AmplificationData data = run_amplification(backend, plan, store);
            return data.surviving();
        },
        py::arg("backend"), py::arg("plan"), py::arg("store_path") = std::string());
    m.def("fit_gate_time", &fit_gate_time, py::arg("data"), py::arg("n_shots"),
          py::arg("threshold"), py::arg("gate") = std::string(),
          py::arg("qubits") = std::vector<int>());
    m.def("estimate_tau_n", &estimate_tau_n);
    m.def("estimate_energy", &estimate_energy, py::arg("tau_n"), py::arg("arity"));

    // ---- verification suites ----------------------------------------------
    py::class_<SuiteResult>(m, "SuiteResult")
        .def_readonly("name", &SuiteResult::name)
        .def_readonly("trials", &SuiteResult::trials)
        .def_readonly("violations", &SuiteResult::violations)
        .def_readonly("worst_margin", &SuiteResult::worst_margin)
        .def_readonly("lines", &SuiteResult::lines)
        .def("passed", &SuiteResult::passed);

    m.def("verify_qsl", &verify_qsl, py::arg("trials"), py::arg("seed"));
    m.def("verify_magnus", &verify_magnus, py::arg("trials"), py::arg("seed"));
    m.def("verify_error_correction", &verify_error_correction, py::arg("trials"),
          py::arg("seed"));
}
