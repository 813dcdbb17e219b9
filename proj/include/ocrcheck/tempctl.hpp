#pragma once

#include <cstdint>
#include <functional>
#include <set>
#include <vector>

#include "ocrcheck/types.hpp"

namespace ocrcheck::tempctl {

enum class RetryCondition { MissingEos, InvalidFrontMatter, EmptyOutput };

/// Escalating-temperature retry schedule. Retries default to triggering on
/// a missing EOS only; the other conditions are opt-in.
struct TempPolicy {
  double start = 0.1;
  double step = 0.1;
  double max_temp = 0.8;
  int max_attempts = 8;
  std::set<RetryCondition> retry_conditions = {RetryCondition::MissingEos};
};

/// min(start + step * failures_so_far, max_temp), quantized to 1e-9 so the
/// schedule reproduces the nominal ladder values bit-exactly.
double next_temperature(const TempPolicy& policy, int failures_so_far);

struct AttemptRecord {
  int attempt_index = 0;
  double temperature = 0.0;
  enum class Outcome { Accepted, Retry, Exhausted } outcome = Outcome::Accepted;
  RetryCondition retry_reason = RetryCondition::MissingEos;  // for Retry/Exhausted
};

struct RetryResult {
  core::CandidatePage page;  // accepted page, or the last attempt's when exhausted
  bool exhausted = false;
  std::vector<AttemptRecord> attempts;
};

using Generator = std::function<core::CandidatePage(double temperature)>;

/// Invokes the generator at escalating temperatures and accepts the first
/// page that violates no retry condition. A generator exception counts as an
/// empty output. After max_attempts the last page comes back flagged
/// exhausted; downstream scoring applies its own penalty.
RetryResult run_with_retries(const TempPolicy& policy, const Generator& generate);

struct SimulationStats {
  double mean_attempts = 0.0;
  double exhaustion_rate = 0.0;
};

/// Monte-Carlo estimate of attempts per page under a repetition-loop
/// probability curve p_loop(temperature). Deterministic under seed.
SimulationStats simulate_retry_rate(const TempPolicy& policy,
                                    const std::function<double(double)>& p_loop,
                                    int trials, std::uint64_t seed);

}  // namespace ocrcheck::tempctl
