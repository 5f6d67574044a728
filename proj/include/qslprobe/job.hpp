#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "qslprobe/circuit.hpp"

namespace qslprobe {

struct Job {
    std::vector<Circuit> circuits;
    std::uint64_t shots = 0;  // per circuit
    std::optional<std::uint64_t> seed;
};

// Everything a black-box backend exposes: outcome counts per circuit and the
// coarse total execution time. Nothing else is reachable from a result.
struct JobResult {
    std::vector<std::map<std::string, std::uint64_t>> counts;
    double t_exec_seconds = 0.0;
};

std::string serialize_job_result(const JobResult& result);
JobResult parse_job_result(const std::string& text);

class BackendInterface {
  public:
    virtual ~BackendInterface() = default;
    virtual JobResult submit(const Job& job) = 0;
};

}  // namespace qslprobe
