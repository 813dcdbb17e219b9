#include "ocrcheck/tempctl.hpp"

#include <algorithm>
#include <cmath>
#include <random>
#include <stdexcept>

#include "ocrcheck/reward.hpp"

namespace ocrcheck::tempctl {

double next_temperature(const TempPolicy& policy, int failures_so_far) {
  if (failures_so_far < 0) throw std::invalid_argument("failures_so_far must be >= 0");
  double t = std::min(policy.start + policy.step * failures_so_far, policy.max_temp);
  return std::round(t * 1e9) / 1e9;
}

namespace {

bool body_blank(const std::string& body) {
  return body.find_first_not_of(" \t\r\n") == std::string::npos;
}

// First violated retry condition, or nullopt when the page is acceptable.
std::optional<RetryCondition> violation(const core::CandidatePage& page,
                                        const std::set<RetryCondition>& conditions) {
  if (conditions.count(RetryCondition::EmptyOutput) && body_blank(page.body)) {
    return RetryCondition::EmptyOutput;
  }
  if (conditions.count(RetryCondition::MissingEos) && !page.finished) {
    return RetryCondition::MissingEos;
  }
  if (conditions.count(RetryCondition::InvalidFrontMatter)) {
    reward::FrontMatter fm;
    reward::RewardConfig defaults;
    if (page.front_matter) {
      fm = reward::parse_front_matter("---\n" + *page.front_matter + "\n---");
    }
    if (reward::count_valid_meta(fm, defaults.required_meta_keys) !=
        static_cast<int>(defaults.required_meta_keys.size())) {
      return RetryCondition::InvalidFrontMatter;
    }
  }
  return std::nullopt;
}

}  // namespace

RetryResult run_with_retries(const TempPolicy& policy, const Generator& generate) {
  RetryResult result;
  for (int attempt = 0; attempt < policy.max_attempts; ++attempt) {
    AttemptRecord record;
    record.attempt_index = attempt;
    record.temperature = next_temperature(policy, attempt);

    core::CandidatePage page;
    std::optional<RetryCondition> failed;
    try {
      page = generate(record.temperature);
      failed = violation(page, policy.retry_conditions);
    } catch (const std::exception&) {
      failed = RetryCondition::EmptyOutput;
      page = core::CandidatePage{};
    }

    if (!failed) {
      record.outcome = AttemptRecord::Outcome::Accepted;
      result.attempts.push_back(record);
      result.page = std::move(page);
      result.exhausted = false;
      return result;
    }
    bool last = attempt + 1 == policy.max_attempts;
    record.outcome = last ? AttemptRecord::Outcome::Exhausted
                          : AttemptRecord::Outcome::Retry;
    record.retry_reason = *failed;
    result.attempts.push_back(record);
    if (last) {
      result.page = std::move(page);
      result.exhausted = true;
    }
  }
  return result;
}

SimulationStats simulate_retry_rate(const TempPolicy& policy,
                                    const std::function<double(double)>& p_loop,
                                    int trials, std::uint64_t seed) {
  if (trials < 1) throw std::invalid_argument("trials must be >= 1");
  std::mt19937_64 rng(seed);
  auto uniform = [&rng]() {
    return static_cast<double>(rng() >> 11) * 0x1.0p-53;  // [0, 1)
  };
  long long total_attempts = 0;
  long long exhausted = 0;
  for (int t = 0; t < trials; ++t) {
    bool accepted = false;
    for (int attempt = 0; attempt < policy.max_attempts; ++attempt) {
      double temp = next_temperature(policy, attempt);
      total_attempts += 1;
      if (uniform() >= p_loop(temp)) {
        accepted = true;
        break;
      }
    }
    if (!accepted) ++exhausted;
  }
  SimulationStats stats;
  stats.mean_attempts = static_cast<double>(total_attempts) / trials;
  stats.exhaustion_rate = static_cast<double>(exhausted) / trials;
  return stats;
}

}  // namespace ocrcheck::tempctl
