#include "qslprobe/estimator.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <ctime>
#include <fstream>
#include <limits>
#include <numbers>
#include <sstream>

#include "qslprobe/errors.hpp"
#include "qslprobe/gates.hpp"
#include "qslprobe/qsl.hpp"
#include "qslprobe/units.hpp"

namespace qslprobe {

AmplificationPlan default_amplification_plan(const std::string& gate,
                                             const std::vector<int>& qubits,
                                             std::uint64_t seed) {
    AmplificationPlan plan;
    plan.gate = gate;
    plan.qubits = qubits;
    plan.n_gate_values = {0, 100000, 200000, 300000, 400000, 500000};
    plan.n_shots = 1000;
    plan.seed = seed;
    return plan;
}

long long default_threshold(const std::vector<long long>& n_gate_values) {
    if (n_gate_values.empty()) throw InsufficientData("no n_gate values");
    std::vector<long long> sorted = n_gate_values;
    std::sort(sorted.begin(), sorted.end());
    return sorted[(sorted.size() - 1) / 2];  // lower median
}

void validate_plan(const AmplificationPlan& plan) {
    if (plan.gate.empty()) throw ConfigError("plan: missing gate name");
    if (plan.n_shots < 1) throw EmptyJob("plan: n_shots must be >= 1");
    if (plan.n_gate_values.size() < 4) throw InsufficientData("plan: need at least 4 n_gate values");
    for (std::size_t k = 0; k < plan.n_gate_values.size(); ++k) {
        if (plan.n_gate_values[k] < 0) throw ConfigError("plan: n_gate values must be >= 0");
        if (k > 0 && plan.n_gate_values[k] <= plan.n_gate_values[k - 1])
            throw ConfigError("plan: n_gate values must be sorted ascending");
    }
    const long long threshold = default_threshold(plan.n_gate_values);
    const auto at_or_above = std::count_if(plan.n_gate_values.begin(), plan.n_gate_values.end(),
                                           [&](long long v) { return v >= threshold; });
    if (at_or_above < 4)
        throw InsufficientData("plan: need at least 4 values at or above the regression threshold");
}

std::string amplification_circuit_text(const std::string& gate, const std::vector<int>& qubits,
                                       long long n_gate) {
    int max_q = 0;
    for (int q : qubits) max_q = std::max(max_q, q);
    std::ostringstream out;
    out << "qubits " << (max_q + 1) << "\n";
    if (n_gate > 0) {
        out << "repeat " << n_gate << " { " << gate;
        for (int q : qubits) out << " q" << q;
        out << " }\n";
    }
    return out.str();
}

std::vector<std::pair<long long, double>> AmplificationData::surviving() const {
    std::vector<std::pair<long long, double>> out;
    for (const auto& p : points)
        if (p.ok) out.emplace_back(p.n_gate, p.t_exec);
    return out;
}

ExperimentStore::ExperimentStore(std::string path) : path_(std::move(path)) {
    if (path_.empty()) return;
    std::ifstream probe(path_);
    const bool fresh = !probe || probe.peek() == std::ifstream::traits_type::eof();
    probe.close();
    if (fresh) {
        std::ofstream out(path_, std::ios::app);
        if (!out) throw IoError("cannot open experiment store '" + path_ + "'");
        out << header() << "\n";
    }
}

void ExperimentStore::append(const std::string& gate, long long n_gate, long long n_shots,
                             double t_exec) {
    const std::lock_guard<std::mutex> lock(mutex_);
    const auto now = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
    std::tm utc{};
    gmtime_r(&now, &utc);
    char stamp[32];
    std::strftime(stamp, sizeof(stamp), "%Y-%m-%dT%H:%M:%SZ", &utc);
    char line[256];
    std::snprintf(line, sizeof(line), "%s,%s,%lld,%lld,%.3f", stamp, gate.c_str(), n_gate, n_shots,
                  t_exec);
    rows_.emplace_back(line);
    if (!path_.empty()) {
        std::ofstream out(path_, std::ios::app);
        if (!out) throw IoError("cannot append to experiment store '" + path_ + "'");
        out << line << "\n";
    }
}

AmplificationData run_amplification(BackendInterface& backend, const AmplificationPlan& plan,
                                    ExperimentStore& store) {
    validate_plan(plan);
    AmplificationData data;
    data.gate = plan.gate;
    data.qubits = plan.qubits;
    data.n_shots = plan.n_shots;

    const std::string text_base = plan.gate;
    for (std::size_t k = 0; k < plan.n_gate_values.size(); ++k) {
        const long long n_gate = plan.n_gate_values[k];
        AmplificationPoint point;
        point.n_gate = n_gate;
        try {
            Job job;
            job.circuits.push_back(
                parse_circuit(amplification_circuit_text(plan.gate, plan.qubits, n_gate)));
            job.shots = static_cast<std::uint64_t>(plan.n_shots);
            job.seed = plan.seed ^ (0x9e3779b97f4a7c15ull * (k + 1));
            const JobResult result = backend.submit(job);
            point.t_exec = result.t_exec_seconds;
            point.ok = true;
            store.append(plan.gate, n_gate, plan.n_shots, point.t_exec);
        } catch (const Error& err) {
            point.ok = false;
            point.error = err.what();
        }
        data.points.push_back(std::move(point));
    }
    return data;
}

GateTimeEstimate fit_gate_time(const std::vector<std::pair<long long, double>>& data,
                               long long n_shots, long long threshold, const std::string& gate,
                               const std::vector<int>& qubits) {
    std::vector<std::pair<double, double>> pts;
    for (const auto& [n, t] : data)
        if (n >= threshold) pts.emplace_back(static_cast<double>(n), t);
    if (pts.size() < 3)
        throw InsufficientData("fit_gate_time: need at least 3 points at or above the threshold");
    if (n_shots < 1) throw EmptyJob("fit_gate_time: n_shots must be >= 1");

    const auto n = static_cast<double>(pts.size());
    double sx = 0, sy = 0;
    for (const auto& [x, y] : pts) {
        sx += x;
        sy += y;
    }
    const double mx = sx / n, my = sy / n;
    double sxx = 0, sxy = 0;
    for (const auto& [x, y] : pts) {
        sxx += (x - mx) * (x - mx);
        sxy += (x - mx) * (y - my);
    }
    if (sxx <= 0.0) throw InsufficientData("fit_gate_time: degenerate n_gate values");
    const double slope = sxy / sxx;
    const double intercept = my - slope * mx;

    double rss = 0, tss = 0;
    for (const auto& [x, y] : pts) {
        const double r = y - (intercept + slope * x);
        rss += r * r;
        tss += (y - my) * (y - my);
    }
    const double dof = n - 2.0;
    const double slope_stderr = dof > 0.0 ? std::sqrt((rss / dof) / sxx) : 0.0;

    GateTimeEstimate est;
    est.gate = gate;
    est.qubits = qubits;
    est.arity = gate.empty() ? 1 : gate_arity(gate);
    est.fit.slope = slope;
    est.fit.intercept = intercept;
    est.fit.slope_stderr = slope_stderr;
    est.fit.r_squared = tss > 0.0 ? 1.0 - rss / tss : (rss <= 1e-30 ? 1.0 : 0.0);
    est.fit.threshold_used = threshold;
    est.fit.points_used = static_cast<int>(pts.size());
    est.is_virtual = std::abs(slope) <= 2.0 * slope_stderr;
    if (!est.is_virtual && slope < 0.0)
        throw NegativeSlope("fit_gate_time: significantly negative slope");
    est.t_gate = slope / static_cast<double>(n_shots);
    est.t_gate_stderr = slope_stderr / static_cast<double>(n_shots);
    return est;
}

double estimate_tau_n(const std::vector<GateTimeEstimate>& estimates, int arity) {
    double best = std::numeric_limits<double>::infinity();
    bool found = false;
    for (const auto& est : estimates) {
        if (est.arity != arity || est.is_virtual) continue;
        found = true;
        best = std::min(best, est.t_gate);
    }
    if (!found)
        throw NoPhysicalGate("estimate_tau_n: no non-virtual estimate of arity " +
                             std::to_string(arity));
    return best;
}

EnergyEstimate estimate_energy(double tau_n, int arity) {
    if (tau_n <= 0.0) throw InvalidDuration("estimate_energy: tau_n must be > 0");
    const EnergyLowerBounds bounds = invert_qsl(tau_n);
    return EnergyEstimate{arity, tau_n, bounds.e_lower, bounds.delta_e_lower};
}

namespace {

std::string qubits_label(const std::vector<int>& qubits) {
    if (qubits.empty()) return "-";
    std::string out;
    for (std::size_t k = 0; k < qubits.size(); ++k) {
        if (k) out += "-";
        out += "q" + std::to_string(qubits[k]);
    }
    return out;
}

std::string format_sig2(double v) {
    char buf[32];
    std::snprintf(buf, sizeof(buf), "%.2g", v);
    return buf;
}

}  // namespace

Report make_report(const std::vector<GateTimeEstimate>& estimates,
                   const std::vector<EnergyEstimate>& energies,
                   const std::map<std::string, std::vector<std::pair<long long, double>>>&
                       raw_data) {
    Report report;
    std::ostringstream table, est_csv, en_csv;

    table << "gate        qubits      arity  t_gate [ns]    virtual  r^2\n";
    est_csv << "gate,qubits,arity,t_gate_seconds,t_gate_stderr_seconds,is_virtual,slope,"
               "intercept,r_squared,points_used,threshold_used\n";
    char line[256];
    for (const auto& est : estimates) {
        std::snprintf(line, sizeof(line), "%-11s %-11s %-6d %-14.6g %-8s %.6f\n", est.gate.c_str(),
                      qubits_label(est.qubits).c_str(), est.arity, est.t_gate * 1e9,
                      est.is_virtual ? "yes" : "no", est.fit.r_squared);
        table << line;
        std::snprintf(line, sizeof(line), "%s,%s,%d,%.12e,%.12e,%d,%.12e,%.12e,%.9f,%d,%lld\n",
                      est.gate.c_str(), qubits_label(est.qubits).c_str(), est.arity, est.t_gate,
                      est.t_gate_stderr, est.is_virtual ? 1 : 0, est.fit.slope, est.fit.intercept,
                      est.fit.r_squared, est.fit.points_used, est.fit.threshold_used);
        est_csv << line;
    }

    table << "\narity  tau_n [ns]     E_lower [J]  dE_lower [J]  band [J]\n";
    en_csv << "arity,tau_n_seconds,e_lower_joules,delta_e_lower_joules,e_band_lo_joules,"
              "e_band_hi_joules\n";
    for (const auto& en : energies) {
        // one-sigma band from the fit uncertainty of the tau_n gate
        double sigma = 0.0;
        for (const auto& est : estimates)
            if (est.arity == en.arity && !est.is_virtual && est.t_gate == en.tau_n)
                sigma = est.t_gate_stderr;
        const double pi_hbar_2 = std::numbers::pi * units::hbar / 2.0;
        const double band_lo = pi_hbar_2 / (en.tau_n + sigma);
        const double band_hi =
            sigma < en.tau_n ? pi_hbar_2 / (en.tau_n - sigma)
                             : std::numeric_limits<double>::infinity();
        std::snprintf(line, sizeof(line), "%-6d %-14.6g %-12s %-13s [%s, %s]\n", en.arity,
                      en.tau_n * 1e9, format_sig2(en.e_lower).c_str(),
                      format_sig2(en.delta_e_lower).c_str(), format_sig2(band_lo).c_str(),
                      format_sig2(band_hi).c_str());
        table << line;
        std::snprintf(line, sizeof(line), "%d,%.12e,%.12e,%.12e,%.12e,%.12e\n", en.arity, en.tau_n,
                      en.e_lower, en.delta_e_lower, band_lo, band_hi);
        en_csv << line;
    }
    if (energies.empty() && !estimates.empty())
        table << "(no physical gate)\n";

    report.table_text = table.str();
    report.estimates_csv = est_csv.str();
    report.energies_csv = en_csv.str();

    for (const auto& [key, pts] : raw_data) {
        std::ostringstream csv;
        csv << "n_gate,t_exec_seconds\n";
        for (const auto& [n, t] : pts) {
            std::snprintf(line, sizeof(line), "%lld,%.3f\n", n, t);
            csv << line;
        }
        report.raw_csv[key] = csv.str();
    }
    return report;
}

}  // namespace qslprobe
