#include "qslprobe/job.hpp"

#include <cstdio>
#include <sstream>

#include "qslprobe/errors.hpp"

namespace qslprobe {

std::string serialize_job_result(const JobResult& result) {
    std::ostringstream out;
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%.3f", result.t_exec_seconds);
    out << "t_exec " << buf << "\n";
    out << "circuits " << result.counts.size() << "\n";
    for (std::size_t c = 0; c < result.counts.size(); ++c) {
        out << "circuit " << c << " " << result.counts[c].size() << "\n";
        for (const auto& [bits, count] : result.counts[c])
            out << bits << " " << count << "\n";
    }
    return out.str();
}

JobResult parse_job_result(const std::string& text) {
    std::istringstream in(text);
    std::string key;
    JobResult result;
    if (!(in >> key) || key != "t_exec" || !(in >> result.t_exec_seconds))
        throw IoError("job result: missing t_exec");
    std::size_t n_circuits = 0;
    if (!(in >> key) || key != "circuits" || !(in >> n_circuits))
        throw IoError("job result: missing circuit count");
    result.counts.resize(n_circuits);
    for (std::size_t c = 0; c < n_circuits; ++c) {
        std::size_t index = 0, n_outcomes = 0;
        if (!(in >> key) || key != "circuit" || !(in >> index >> n_outcomes) || index != c)
            throw IoError("job result: bad circuit header");
        for (std::size_t k = 0; k < n_outcomes; ++k) {
            std::string bits;
            std::uint64_t count = 0;
            if (!(in >> bits >> count)) throw IoError("job result: truncated outcome list");
            result.counts[c][bits] = count;
        }
    }
    return result;
}

}  // namespace qslprobe
