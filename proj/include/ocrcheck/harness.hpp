#pragma once

#include <cstdint>
#include <filesystem>
#include <map>
#include <memory>
#include <string>
#include <vector>

#include "ocrcheck/core.hpp"
#include "ocrcheck/reward.hpp"

namespace ocrcheck::harness {

struct CategoryScore {
  double pass_rate = 0.0;  // fraction in [0,1]
  std::size_t test_count = 0;
};

struct BenchReport {
  std::map<std::string, CategoryScore> per_category;
  double overall = 0.0;       // percent: unweighted mean of category pass rates
  double ci_halfwidth = 0.0;  // percent, central 95% bootstrap interval
  std::vector<std::pair<std::string, std::string>> skipped_docs;  // (doc, reason)
};

/// Scores every test in the store against <candidates_dir>/<doc_id>.md.
/// Missing candidates fail their tests (and are listed as skipped); the CI
/// comes from B bootstrap resamples of documents, deterministic under seed.
BenchReport score_run(const core::TestStore& store,
                      const std::filesystem::path& candidates_dir,
                      int bootstrap_B = 1000, std::uint64_t seed = 0);

std::string format_report(const BenchReport& report);

struct ServeOptions {
  std::string host = "127.0.0.1";
  int port = 8080;
  std::size_t max_body_bytes = 32ull << 20;
  std::size_t parallel_threshold = 16;  // batch size at which items fan out
};

/// POST /v1/reward + GET /healthz over an immutable store. Items are scored
/// independently (in parallel for large batches); an unknown doc_id yields a
/// per-item error entry, never a request failure.
class RewardServer {
 public:
  RewardServer(core::TestStore store, reward::RewardConfig cfg, ServeOptions options);
  ~RewardServer();

  RewardServer(const RewardServer&) = delete;
  RewardServer& operator=(const RewardServer&) = delete;

  /// Blocks until stop(). Returns false when the bind fails.
  bool run();
  /// Binds an ephemeral port and serves on a background thread (for tests
  /// and supervised deployments). Returns the bound port.
  int start_background();
  void stop();

 private:
  struct Impl;
  std::unique_ptr<Impl> impl_;
};

// One service-level scoring step, shared by the server and the CLI `reward`
// subcommand: raw completion text in, PageScore out.
core::PageScore score_completion(const core::TestStore& store,
                                 const reward::RewardConfig& cfg,
                                 const std::string& doc_id, std::string_view raw,
                                 bool finished);

}  // namespace ocrcheck::harness
