#include "ocrcheck/harness.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <random>
#include <set>
#include <sstream>
#include <thread>

namespace ocrcheck::harness {

namespace {

std::string read_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  std::ostringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

// Per-document tallies reused across bootstrap resamples.
struct DocTally {
  std::map<std::string, std::pair<std::size_t, std::size_t>> per_category;  // passed, total
};

double category_mean_percent(const std::vector<const DocTally*>& docs) {
  std::map<std::string, std::pair<std::size_t, std::size_t>> agg;
  for (const DocTally* doc : docs) {
    for (const auto& [category, counts] : doc->per_category) {
      agg[category].first += counts.first;
      agg[category].second += counts.second;
    }
  }
  if (agg.empty()) return 0.0;
  double sum = 0.0;
  std::size_t categories = 0;
  for (const auto& [category, counts] : agg) {
    if (counts.second == 0) continue;
    sum += static_cast<double>(counts.first) / static_cast<double>(counts.second);
    ++categories;
  }
  return categories == 0 ? 0.0 : sum / static_cast<double>(categories) * 100.0;
}

double quantile_sorted(const std::vector<double>& sorted, double p) {
  if (sorted.empty()) return 0.0;
  if (sorted.size() == 1) return sorted[0];
  double h = p * static_cast<double>(sorted.size() - 1);
  std::size_t lo = static_cast<std::size_t>(h);
  std::size_t hi = std::min(lo + 1, sorted.size() - 1);
  double frac = h - static_cast<double>(lo);
  return sorted[lo] + (sorted[hi] - sorted[lo]) * frac;
}

}  // namespace

BenchReport score_run(const core::TestStore& store,
                      const std::filesystem::path& candidates_dir,
                      int bootstrap_B, std::uint64_t seed) {
  if (store.empty()) throw core::StoreError("empty test store");

  BenchReport report;
  std::vector<DocTally> tallies;
  tallies.reserve(store.size());

  for (const auto& [doc_id, tests] : store) {
    std::filesystem::path path = candidates_dir / (doc_id + ".md");
    DocTally tally;
    if (!std::filesystem::exists(path)) {
      // a missing candidate fails everything it was supposed to prove
      report.skipped_docs.emplace_back(doc_id, "missing candidate");
      for (const auto& test : tests) {
        auto& slot = tally.per_category[test.category];
        slot.second += 1;
      }
    } else {
      core::CandidatePage page =
          reward::split_completion(doc_id, read_file(path), /*finished=*/true);
      auto outcomes = core::run_tests(page, tests);
      for (std::size_t i = 0; i < tests.size(); ++i) {
        auto& slot = tally.per_category[tests[i].category];
        slot.first += outcomes[i].passed ? 1 : 0;
        slot.second += 1;
      }
    }
    tallies.push_back(std::move(tally));
  }

  // candidates with no tests do not contribute, but get flagged
  if (std::filesystem::is_directory(candidates_dir)) {
    for (const auto& entry : std::filesystem::directory_iterator(candidates_dir)) {
      if (!entry.is_regular_file() || entry.path().extension() != ".md") continue;
      std::string stem = entry.path().stem().string();
      if (!store.count(stem)) report.skipped_docs.emplace_back(stem, "no tests");
    }
  }
  std::sort(report.skipped_docs.begin(), report.skipped_docs.end());

  std::map<std::string, std::pair<std::size_t, std::size_t>> totals;
  for (const auto& tally : tallies) {
    for (const auto& [category, counts] : tally.per_category) {
      totals[category].first += counts.first;
      totals[category].second += counts.second;
    }
  }
  for (const auto& [category, counts] : totals) {
    CategoryScore score;
    score.test_count = counts.second;
    score.pass_rate = counts.second == 0
                          ? 0.0
                          : static_cast<double>(counts.first) /
                                static_cast<double>(counts.second);
    report.per_category[category] = score;
  }
  {
    std::vector<const DocTally*> all;
    all.reserve(tallies.size());
    for (const auto& t : tallies) all.push_back(&t);
    report.overall = category_mean_percent(all);
  }

  // bootstrap over documents; tests within a document are correlated
  if (bootstrap_B > 0 && !tallies.empty()) {
    std::mt19937_64 rng(seed);
    std::vector<double> stats(static_cast<std::size_t>(bootstrap_B));
    std::vector<const DocTally*> sample(tallies.size());
    for (int b = 0; b < bootstrap_B; ++b) {
      for (std::size_t i = 0; i < tallies.size(); ++i) {
        sample[i] = &tallies[rng() % tallies.size()];
      }
      stats[static_cast<std::size_t>(b)] = category_mean_percent(sample);
    }
    std::sort(stats.begin(), stats.end());
    double lo = quantile_sorted(stats, 0.025);
    double hi = quantile_sorted(stats, 0.975);
    report.ci_halfwidth = (hi - lo) / 2.0;
  }
  return report;
}

std::string format_report(const BenchReport& report) {
  std::ostringstream out;
  std::size_t width = 8;
  for (const auto& [category, _] : report.per_category) {
    width = std::max(width, category.size());
  }
  char line[256];
  std::snprintf(line, sizeof line, "%-*s  %9s  %6s\n", static_cast<int>(width),
                "category", "pass_rate", "tests");
  out << line;
  for (const auto& [category, score] : report.per_category) {
    std::snprintf(line, sizeof line, "%-*s  %8.1f%%  %6zu\n", static_cast<int>(width),
                  category.c_str(), score.pass_rate * 100.0, score.test_count);
    out << line;
  }
  std::snprintf(line, sizeof line, "overall: %.1f ± %.1f\n", report.overall,
                report.ci_halfwidth);
  out << line;
  for (const auto& [doc, reason] : report.skipped_docs) {
    out << "skipped " << doc << ": " << reason << "\n";
  }
  return out.str();
}

core::PageScore score_completion(const core::TestStore& store,
                                 const reward::RewardConfig& cfg,
                                 const std::string& doc_id, std::string_view raw,
                                 bool finished) {
  auto it = store.find(doc_id);
  if (it == store.end() || it->second.empty()) {
    throw std::out_of_range("unknown doc_id: " + doc_id);
  }
  core::CandidatePage page = reward::split_completion(doc_id, raw, finished);
  return reward::compute_reward(page, it->second, cfg);
}

}  // namespace ocrcheck::harness
