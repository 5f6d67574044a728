#pragma once

#include <cstdint>
#include <map>
#include <mutex>
#include <string>
#include <vector>

#include "qslprobe/job.hpp"

namespace qslprobe {

struct AmplificationPlan {
    std::string gate;
    std::vector<int> qubits;
    std::vector<long long> n_gate_values;  // ascending
    long long n_shots = 1000;
    std::uint64_t seed = 0;
};

// {0, 1e5, ..., 5e5} at 1000 shots.
AmplificationPlan default_amplification_plan(const std::string& gate,
                                             const std::vector<int>& qubits,
                                             std::uint64_t seed = 0);

// Lower median of the n_gate values; the "sufficiently large" regime is
// device-specific, so this is only a default and callers may override.
long long default_threshold(const std::vector<long long>& n_gate_values);

// Throws on unsorted values or fewer than 4 values at/above the default
// threshold.
void validate_plan(const AmplificationPlan& plan);

// The circuit text submitted for one amplification point.
std::string amplification_circuit_text(const std::string& gate, const std::vector<int>& qubits,
                                       long long n_gate);

struct AmplificationPoint {
    long long n_gate = 0;
    double t_exec = 0.0;
    bool ok = false;
    std::string error;  // backend failure, recorded and skipped
};

struct AmplificationData {
    std::string gate;
    std::vector<int> qubits;
    long long n_shots = 0;
    std::vector<AmplificationPoint> points;

    std::vector<std::pair<long long, double>> surviving() const;
};

// Append-only experiment log; appends are serialized. Empty path keeps rows
// in memory only.
class ExperimentStore {
  public:
    ExperimentStore() = default;
    explicit ExperimentStore(std::string path);
    void append(const std::string& gate, long long n_gate, long long n_shots, double t_exec);
    const std::vector<std::string>& rows() const { return rows_; }
    static const char* header() { return "timestamp,gate,n_gate,n_shots,t_exec_seconds"; }

  private:
    std::string path_;
    std::vector<std::string> rows_;
    std::mutex mutex_;
};

// One job per n_gate value (a single circuit repeating the gate from
// |0...0>). Backend failures are recorded per point and the run continues.
// Raw pairs are persisted to the store before returning.
AmplificationData run_amplification(BackendInterface& backend, const AmplificationPlan& plan,
                                    ExperimentStore& store);

struct RegressionFit {
    double slope = 0.0;      // seconds per gate repetition
    double intercept = 0.0;  // seconds
    double r_squared = 0.0;
    double slope_stderr = 0.0;
    long long threshold_used = 0;
    int points_used = 0;
};

struct GateTimeEstimate {
    std::string gate;
    std::vector<int> qubits;
    int arity = 1;
    double t_gate = 0.0;         // slope / n_shots
    double t_gate_stderr = 0.0;  // slope_stderr / n_shots
    RegressionFit fit;
    bool is_virtual = false;  // slope consistent with zero at two standard errors
};

// Ordinary least squares over the points with n_gate >= threshold.
// Throws InsufficientData (<3 such points) or NegativeSlope (slope below
// -2 standard errors).
GateTimeEstimate fit_gate_time(const std::vector<std::pair<long long, double>>& data,
                               long long n_shots, long long threshold,
                               const std::string& gate = "",
                               const std::vector<int>& qubits = {});

// Minimum t_gate over the non-virtual estimates of the given arity
// (connectivity variants enter as separate estimates). Throws NoPhysicalGate.
double estimate_tau_n(const std::vector<GateTimeEstimate>& estimates, int arity);

struct EnergyEstimate {
    int arity = 0;
    double tau_n = 0.0;          // s
    double e_lower = 0.0;        // J, pi*hbar/(2 tau_n)
    double delta_e_lower = 0.0;  // J, same value
};

EnergyEstimate estimate_energy(double tau_n, int arity);

struct Report {
    std::string table_text;
    std::string estimates_csv;
    std::string energies_csv;
    std::map<std::string, std::string> raw_csv;  // "<gate>_q0-q1..." -> csv
};

// Table-style report (gate, t_gate, arity, tau_n, energy lower bounds with
// the one-sigma band) plus machine-readable CSVs of the fits and raw points.
Report make_report(const std::vector<GateTimeEstimate>& estimates,
                   const std::vector<EnergyEstimate>& energies,
                   const std::map<std::string, std::vector<std::pair<long long, double>>>&
                       raw_data = {});

}  // namespace qslprobe
