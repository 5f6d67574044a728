#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <set>
#include <sstream>

#include "CLI11.hpp"
#include "qslprobe/backend.hpp"
#include "qslprobe/errors.hpp"
#include "qslprobe/estimator.hpp"
#include "qslprobe/gates.hpp"
#include "qslprobe/verify.hpp"

namespace fs = std::filesystem;
using namespace qslprobe;

namespace {

constexpr int kExitOk = 0;
constexpr int kExitUsage = 1;
constexpr int kExitVerification = 2;
constexpr int kExitBackend = 3;

std::string default_out_dir() {
    if (const char* env = std::getenv("QSLPROBE_OUT"); env && *env) return env;
    return "qslprobe-out";
}

void write_file(const fs::path& path, const std::string& content) {
    fs::create_directories(path.parent_path().empty() ? "." : path.parent_path());
    std::ofstream out(path);
    if (!out) throw IoError("cannot write '" + path.string() + "'");
    out << content;
}

std::vector<long long> parse_ngate_list(const std::string& text) {
    std::vector<long long> values;
    std::istringstream in(text);
    std::string tok;
    while (std::getline(in, tok, ',')) {
        if (tok.empty()) continue;
        values.push_back(std::stoll(tok));
    }
    return values;
}

std::vector<std::string> parse_gate_list(const std::string& text) {
    std::vector<std::string> gates;
    std::istringstream in(text);
    std::string tok;
    while (std::getline(in, tok, ',')) {
        if (!tok.empty()) gates.push_back(tok);
    }
    return gates;
}

std::string tuple_key(const std::string& gate, const std::vector<int>& qubits) {
    std::string key = gate;
    for (int q : qubits) key += "_q" + std::to_string(q);
    return key;
}

// Candidate qubit tuples for a given arity, drawn from the first few qubits.
// Tuples the device cannot execute fail at submit and are skipped.
std::vector<std::vector<int>> candidate_tuples(int arity, int n_qubits) {
    const int limit = std::min(n_qubits, 4);
    std::vector<std::vector<int>> tuples;
    if (arity == 1) {
        tuples.push_back({0});
        return tuples;
    }
    for (int a = 0; a < limit; ++a)
        for (int b = 0; b < limit; ++b) {
            if (b == a) continue;
            if (arity == 2) {
                tuples.push_back({a, b});
                continue;
            }
            for (int c = 0; c < limit; ++c) {
                if (c == a || c == b) continue;
                tuples.push_back({a, b, c});
            }
        }
    return tuples;
}

struct CommonOptions {
    std::string device_path;
    std::string out_dir = default_out_dir();
    std::uint64_t seed = 0;
    double jitter = -1.0;      // < 0: keep the device value
    double resolution = -1.0;  // < 0: keep the device value
};

DeviceModel load_configured_device(const CommonOptions& opt) {
    DeviceModel device = load_device_file(opt.device_path);
    if (opt.jitter >= 0.0) device.overhead.jitter_stddev = opt.jitter;
    if (opt.resolution >= 0.0) device.overhead.time_resolution = opt.resolution;
    return device;
}

int cmd_device_init(const std::string& path, bool force) {
    if (fs::exists(path) && !force)
        throw IoError("'" + path + "' exists; pass --force to overwrite");
    write_file(path, default_device_config());
    std::cout << "wrote " << path << "\n";
    return kExitOk;
}

int cmd_amplify(const CommonOptions& opt, const std::string& gate,
                const std::vector<int>& qubits, const std::vector<long long>& ngate,
                long long shots) {
    if (!is_known_gate(gate)) throw UnknownGate("unknown gate: " + gate);
    const DeviceModel device = load_configured_device(opt);
    SimBackend backend(device);

    AmplificationPlan plan = default_amplification_plan(gate, qubits, opt.seed);
    if (!ngate.empty()) plan.n_gate_values = ngate;
    if (shots >= 0) plan.n_shots = shots;

    fs::create_directories(opt.out_dir);
    ExperimentStore store((fs::path(opt.out_dir) / "experiments.csv").string());
    const AmplificationData data = run_amplification(backend, plan, store);

    std::ostringstream csv;
    csv << "n_gate,t_exec_seconds\n";
    char line[64];
    int surviving = 0;
    for (const auto& p : data.points) {
        if (!p.ok) {
            std::cerr << "point n_gate=" << p.n_gate << " failed: " << p.error << "\n";
            continue;
        }
        ++surviving;
        std::snprintf(line, sizeof(line), "%lld,%.3f\n", p.n_gate, p.t_exec);
        csv << line;
    }
    const fs::path csv_path = fs::path(opt.out_dir) / ("amplify_" + tuple_key(gate, qubits) + ".csv");
    write_file(csv_path, csv.str());
    std::cout << "wrote " << csv_path.string() << "\n";
    if (surviving < 4)
        throw BackendError("only " + std::to_string(surviving) +
                           " amplification points survived; cannot regress");
    return kExitOk;
}

int cmd_estimate(const CommonOptions& opt, const std::string& gate_list, long long shots,
                 const std::vector<long long>& ngate, long long threshold_flag) {
    const DeviceModel device = load_configured_device(opt);
    SimBackend backend(device);

    std::vector<std::string> gates = parse_gate_list(gate_list);
    if (gates.empty())
        for (const auto& [name, _] : device.gates) gates.push_back(name);
    if (gates.empty()) throw ConfigError("device declares no gates");

    fs::create_directories(opt.out_dir);
    ExperimentStore store((fs::path(opt.out_dir) / "experiments.csv").string());

    std::vector<GateTimeEstimate> estimates;
    std::map<std::string, std::vector<std::pair<long long, double>>> raw;
    std::set<int> arities;
    std::uint64_t tuple_index = 0;

    for (const auto& gate : gates) {
        const int arity = gate_arity(gate);  // throws UnknownGate for junk names
        arities.insert(arity);
        for (const auto& qubits : candidate_tuples(arity, device.n_qubits)) {
            AmplificationPlan plan =
                default_amplification_plan(gate, qubits, opt.seed + 1000003 * tuple_index++);
            if (!ngate.empty()) plan.n_gate_values = ngate;
            if (shots >= 0) plan.n_shots = shots;
            const long long threshold =
                threshold_flag >= 0 ? threshold_flag : default_threshold(plan.n_gate_values);

            const AmplificationData data = run_amplification(backend, plan, store);
            try {
                estimates.push_back(
                    fit_gate_time(data.surviving(), plan.n_shots, threshold, gate, qubits));
                raw[tuple_key(gate, qubits)] = data.surviving();
            } catch (const InsufficientData&) {
                // tuple not executable on this device; skip
            }
        }
    }

    if (estimates.empty())
        throw BackendError("no gate produced enough amplification data to fit");

    std::vector<EnergyEstimate> energies;
    for (int arity : arities) {
        try {
            energies.push_back(estimate_energy(estimate_tau_n(estimates, arity), arity));
        } catch (const NoPhysicalGate&) {
            // the report marks virtual-only arities
        }
    }
    if (energies.empty()) throw NoPhysicalGate("every estimated gate is virtual");

    const Report report = make_report(estimates, energies, raw);
    write_file(fs::path(opt.out_dir) / "report.txt", report.table_text);
    write_file(fs::path(opt.out_dir) / "estimates.csv", report.estimates_csv);
    write_file(fs::path(opt.out_dir) / "energies.csv", report.energies_csv);
    for (const auto& [key, csv] : report.raw_csv)
        write_file(fs::path(opt.out_dir) / "raw" / (key + ".csv"), csv);

    std::cout << report.table_text;
    std::cout << "wrote report under " << opt.out_dir << "\n";
    return kExitOk;
}

int cmd_verify(const std::string& kind, int trials, std::uint64_t seed) {
    SuiteResult result;
    if (kind == "qsl")
        result = verify_qsl(trials, seed);
    else if (kind == "magnus")
        result = verify_magnus(trials, seed);
    else if (kind == "error-correction")
        result = verify_error_correction(trials, seed);
    else
        throw CLI::ValidationError("--kind must be qsl|magnus|error-correction");

    for (const auto& line : result.lines) std::cout << line << "\n";
    std::cout << (result.passed() ? "PASS" : "FAIL") << " " << result.name << " ("
              << result.violations << "/" << result.trials << " violations)\n";
    return result.passed() ? kExitOk : kExitVerification;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"qslprobe: black-box gate-time amplification and QSL energy inference"};
    app.require_subcommand(1);

    CommonOptions opt;
    std::string gate = "X";
    std::string gates;
    std::string ngate_text;
    std::string qubits_text = "0";
    std::string kind = "qsl";
    std::string init_path;
    long long shots = -1;
    long long threshold = -1;
    int trials = 100;
    bool force = false;

    auto add_common = [&](CLI::App* sub, bool needs_device) {
        auto* dev = sub->add_option("--device", opt.device_path, "device config file");
        if (needs_device) dev->required();
        sub->add_option("--out", opt.out_dir, "output directory (env QSLPROBE_OUT)");
        sub->add_option("--seed", opt.seed, "rng seed");
        sub->add_option("--jitter", opt.jitter, "override jitter stddev [s]");
        sub->add_option("--resolution", opt.resolution, "override reporting resolution [s]");
    };

    CLI::App* init = app.add_subcommand("device-init", "write the default device config");
    init->add_option("path", init_path, "target file")->required();
    init->add_flag("--force", force, "overwrite an existing file");

    CLI::App* amplify = app.add_subcommand("amplify", "run gate-time amplification, emit CSV");
    add_common(amplify, true);
    amplify->add_option("--gate", gate, "gate name");
    amplify->add_option("--qubits", qubits_text, "comma list of qubit indices");
    amplify->add_option("--ngate", ngate_text, "comma list of n_gate values");
    amplify->add_option("--shots", shots, "shots per circuit");

    CLI::App* estimate = app.add_subcommand("estimate", "full pipeline: durations and energies");
    add_common(estimate, true);
    estimate->add_option("--gate", gates, "comma list of gates (default: all device gates)");
    estimate->add_option("--ngate", ngate_text, "comma list of n_gate values");
    estimate->add_option("--shots", shots, "shots per circuit");
    estimate->add_option("--threshold", threshold, "regression threshold on n_gate");

    CLI::App* verify = app.add_subcommand("verify", "randomized verification suites");
    verify->add_option("--kind", kind, "qsl|magnus|error-correction");
    verify->add_option("--trials", trials, "number of randomized trials")
        ->check(CLI::PositiveNumber);
    verify->add_option("--seed", opt.seed, "rng seed");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& err) {
        const int rc = app.exit(err);
        return rc == 0 ? kExitOk : kExitUsage;
    }

    try {
        if (init->parsed()) return cmd_device_init(init_path, force);
        if (amplify->parsed()) {
            std::vector<int> qubits;
            for (long long v : parse_ngate_list(qubits_text)) qubits.push_back(static_cast<int>(v));
            return cmd_amplify(opt, gate, qubits, parse_ngate_list(ngate_text), shots);
        }
        if (estimate->parsed())
            return cmd_estimate(opt, gates, shots, parse_ngate_list(ngate_text), threshold);
        if (verify->parsed()) return cmd_verify(kind, trials, opt.seed);
    } catch (const CLI::ValidationError& err) {
        std::cerr << "error: " << err.what() << "\n";
        return kExitUsage;
    } catch (const Error& err) {
        std::cerr << "error: " << err.what() << "\n";
        return kExitBackend;
    } catch (const std::exception& err) {
        std::cerr << "error: " << err.what() << "\n";
        return kExitBackend;
    }
    return kExitUsage;
}
