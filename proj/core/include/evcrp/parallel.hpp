#pragma once

#include <cstdint>
#include <functional>

namespace evcrp {

// Maps a requested thread count to an actual one (<= 0 means "all cores").
int resolve_thread_count(int requested);

// Runs jobs 0..job_count-1 on up to `threads` workers. Callers store per-job
// results into preallocated slots and reduce them in job order afterwards,
// which keeps every result independent of scheduling and thread count.
// The first exception thrown by a job is rethrown after all workers join.
void run_jobs(std::uint64_t job_count, int threads,
              const std::function<void(std::uint64_t)>& job);

}  // namespace evcrp
