#pragma once

#include "qslprobe/device.hpp"
#include "qslprobe/job.hpp"

namespace qslprobe {

// Execute a job against the hidden device model. Outcomes are sampled from
// the exact final-state distribution (final state computed once per circuit,
// repeated blocks by binary exponentiation of the block unitary); t_exec
// comes from the device timing model, never from wall clock:
//   per_job + sum_c [shots * (t_init + sum_instr duration + t_meas)
//                    + per_circuit] + jitter,
// rounded to the reporting resolution. Pure function of (device, job, seed).
JobResult submit_job(const DeviceModel& device, const Job& job);

class SimBackend final : public BackendInterface {
  public:
    explicit SimBackend(DeviceModel device) : device_(std::move(device)) {}
    JobResult submit(const Job& job) override { return submit_job(device_, job); }

  private:
    DeviceModel device_;
};

// Serves pre-recorded results in order; submitting past the end throws
// BackendError. Used to check that inference depends on the backend only
// through JobResult values.
class ReplayBackend final : public BackendInterface {
  public:
    explicit ReplayBackend(std::vector<JobResult> results) : results_(std::move(results)) {}
    JobResult submit(const Job&) override;

  private:
    std::vector<JobResult> results_;
    std::size_t next_ = 0;
};

}  // namespace qslprobe
