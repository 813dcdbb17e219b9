#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>

#include "CLI11.hpp"
#include "json.hpp"
#include "ocrcheck/harness.hpp"
#include "ocrcheck/tempctl.hpp"
#include "ocrcheck/testgen.hpp"

namespace {

using json = nlohmann::json;
using namespace ocrcheck;

constexpr int kExitOk = 0;
constexpr int kExitValidation = 1;
constexpr int kExitIo = 2;

std::string read_file_or_throw(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::ios_base::failure("cannot open " + path);
  std::ostringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

// host[:port] -> (host, port); port falls back to the given default.
std::pair<std::string, int> parse_bind(const std::string& bind, int default_port) {
  std::size_t colon = bind.rfind(':');
  if (colon == std::string::npos) return {bind, default_port};
  return {bind.substr(0, colon), std::atoi(bind.c_str() + colon + 1)};
}

int cmd_score(const std::string& tests_path, const std::string& candidates_dir,
              int bootstrap, std::uint64_t seed, bool as_json) {
  core::TestStore store = core::load_test_store_file(tests_path);
  harness::BenchReport report = harness::score_run(store, candidates_dir, bootstrap, seed);
  if (as_json) {
    json out;
    out["overall"] = report.overall;
    out["ci_halfwidth"] = report.ci_halfwidth;
    json cats = json::object();
    for (const auto& [category, score] : report.per_category) {
      cats[category] = {{"pass_rate", score.pass_rate}, {"tests", score.test_count}};
    }
    out["per_category"] = std::move(cats);
    json skipped = json::array();
    for (const auto& [doc, reason] : report.skipped_docs) {
      skipped.push_back({{"doc_id", doc}, {"reason", reason}});
    }
    out["skipped_docs"] = std::move(skipped);
    std::cout << out.dump(2) << "\n";
  } else {
    std::cout << harness::format_report(report);
  }
  return kExitOk;
}

int cmd_gen_tests(const std::string& html_dir, const std::string& out_path,
                  std::uint64_t seed, const std::vector<std::string>& config_kvs) {
  testgen::GenConfig cfg;
  for (const auto& kv : config_kvs) {
    std::size_t eq = kv.find('=');
    if (eq == std::string::npos) {
      throw CLI::ValidationError("--config expects key=value, got \"" + kv + "\"");
    }
    std::string key = kv.substr(0, eq);
    std::string value = kv.substr(eq + 1);
    if (key == "presence_samples") cfg.presence_samples = std::stoi(value);
    else if (key == "order_samples") cfg.order_samples = std::stoi(value);
    else if (key == "table_cell_samples") cfg.table_cell_samples = std::stoi(value);
    else if (key == "min_anchor_words") cfg.min_anchor_words = std::stoi(value);
    else if (key == "max_anchor_words") cfg.max_anchor_words = std::stoi(value);
    else if (key == "category") cfg.category = value;
    else throw CLI::ValidationError("unknown config key \"" + key + "\"");
  }

  std::vector<std::filesystem::path> pages;
  for (const auto& entry : std::filesystem::directory_iterator(html_dir)) {
    if (entry.is_regular_file() && entry.path().extension() == ".html") {
      pages.push_back(entry.path());
    }
  }
  std::sort(pages.begin(), pages.end());
  if (pages.empty()) {
    std::cerr << "no .html pages under " << html_dir << "\n";
    return kExitIo;
  }

  core::TestStore store;
  std::size_t rejected = 0;
  for (const auto& path : pages) {
    testgen::GroundTruthPage page;
    page.doc_id = path.stem().string();
    page.html = read_file_or_throw(path.string());
    page.seed = testgen::derive_page_seed(seed, page.doc_id);
    try {
      testgen::GenReport report = testgen::generate_with_report(page, cfg);
      for (const auto& warning : report.warnings) {
        std::cerr << page.doc_id << ": " << warning << "\n";
      }
      store[page.doc_id] = std::move(report.tests);
    } catch (const testgen::TestGenError& e) {
      std::cerr << "rejected page " << page.doc_id << ": " << e.what() << "\n";
      ++rejected;
    }
  }

  std::ofstream out(out_path, std::ios::binary);
  if (!out) throw std::ios_base::failure("cannot open " + out_path);
  core::write_test_store(store, out);
  std::size_t total = 0;
  for (const auto& [_, tests] : store) total += tests.size();
  std::cerr << "wrote " << total << " tests for " << store.size() << " pages ("
            << rejected << " rejected) to " << out_path << "\n";
  return kExitOk;
}

int cmd_reward(const std::string& tests_path, const std::string& doc_id,
               const std::string& file, bool finished, bool as_json) {
  core::TestStore store = core::load_test_store_file(tests_path);
  std::string raw = read_file_or_throw(file);
  core::PageScore score =
      harness::score_completion(store, reward::RewardConfig{}, doc_id, raw, finished);
  if (as_json) {
    json out;
    out["doc_id"] = score.doc_id;
    out["composite"] = score.composite;
    out["pass_rate"] = score.pass_rate;
    out["eos_reward"] = score.eos_reward;
    out["metadata_reward"] = score.metadata_reward;
    json outcomes = json::array();
    for (const auto& o : score.outcomes) {
      outcomes.push_back({{"test_id", o.test_id}, {"passed", o.passed}, {"detail", o.detail}});
    }
    out["outcomes"] = std::move(outcomes);
    std::cout << out.dump(2) << "\n";
  } else {
    std::size_t passed = 0;
    for (const auto& o : score.outcomes) passed += o.passed ? 1 : 0;
    std::printf("doc %s: composite %.4f (pass_rate %.2f = %zu/%zu, eos %.0f, metadata %.2f)\n",
                score.doc_id.c_str(), score.composite, score.pass_rate, passed,
                score.outcomes.size(), score.eos_reward, score.metadata_reward);
    for (const auto& o : score.outcomes) {
      std::printf("  [%s] %s%s%s\n", o.passed ? "pass" : "fail", o.test_id.c_str(),
                  o.detail.empty() ? "" : " - ", o.detail.c_str());
    }
  }
  return kExitOk;
}

int cmd_serve(const std::string& tests_path, const std::string& bind) {
  core::TestStore store = core::load_test_store_file(tests_path);
  std::string effective = bind;
  if (const char* env = std::getenv("OCRCHECK_BIND")) effective = env;
  auto [host, port] = parse_bind(effective, 8080);
  harness::ServeOptions options;
  options.host = host;
  options.port = port;
  harness::RewardServer server(std::move(store), reward::RewardConfig{}, options);
  std::cerr << "serving rewards on " << host << ":" << port << "\n";
  if (!server.run()) {
    std::cerr << "failed to bind " << host << ":" << port << "\n";
    return kExitIo;
  }
  return kExitOk;
}

int cmd_soup(const std::vector<std::string>& inputs, const std::string& out_path) {
  std::vector<reward::TensorMap> maps;
  maps.reserve(inputs.size());
  for (const auto& path : inputs) maps.push_back(reward::read_tensor_map_file(path));
  reward::TensorMap averaged = reward::soup(maps);
  reward::write_tensor_map_file(averaged, out_path);
  std::cerr << "souped " << inputs.size() << " checkpoints (" << averaged.size()
            << " tensors) into " << out_path << "\n";
  return kExitOk;
}

int cmd_simulate_temp(const std::string& p_loop_spec, int trials, std::uint64_t seed,
                      bool as_json) {
  std::function<double(double)> p_loop;
  if (p_loop_spec == "linear") {
    p_loop = [](double t) { return 1.0 - t; };
  } else if (p_loop_spec.rfind("const:", 0) == 0) {
    double v = std::stod(p_loop_spec.substr(6));
    if (v < 0.0 || v > 1.0) throw CLI::ValidationError("const probability outside [0,1]");
    p_loop = [v](double) { return v; };
  } else {
    throw CLI::ValidationError("--p-loop expects `linear` or `const:<v>`");
  }
  tempctl::TempPolicy policy;
  tempctl::SimulationStats stats = tempctl::simulate_retry_rate(policy, p_loop, trials, seed);
  if (as_json) {
    std::cout << json{{"mean_attempts", stats.mean_attempts},
                      {"exhaustion_rate", stats.exhaustion_rate}}
                     .dump(2)
              << "\n";
  } else {
    std::printf("mean attempts per page: %.4f\nexhaustion rate: %.4f\n",
                stats.mean_attempts, stats.exhaustion_rate);
  }
  return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"OCR output verification: unit-test scoring, test generation and "
               "reward serving"};
  app.require_subcommand(1);
  app.fallthrough();  // --json may follow the subcommand
  bool as_json = false;
  app.add_flag("--json", as_json, "machine-readable JSON output");

  std::string tests_path, candidates_dir, html_dir, out_path, doc_id, file_path;
  std::string bind = "127.0.0.1:8080";
  std::string p_loop_spec = "linear";
  int bootstrap = 1000;
  int trials = 100000;
  std::uint64_t seed = 0;
  bool finished = false;
  std::vector<std::string> config_kvs;
  std::vector<std::string> soup_inputs;
  std::string soup_out;

  auto* score = app.add_subcommand("score", "score a candidate directory against a test store");
  score->add_option("--tests", tests_path, "JSONL test store")->required();
  score->add_option("--candidates", candidates_dir, "directory of <doc_id>.md files")->required();
  score->add_option("--bootstrap", bootstrap, "bootstrap resamples for the CI");
  score->add_option("--seed", seed, "bootstrap RNG seed");

  auto* gen = app.add_subcommand("gen-tests", "derive test cases from ground-truth HTML pages");
  gen->add_option("--html-dir", html_dir, "directory of <doc_id>.html pages")->required();
  gen->add_option("--out", out_path, "output JSONL path")->required();
  gen->add_option("--seed", seed, "corpus seed");
  gen->add_option("--config", config_kvs, "generation config overrides (key=value)");

  auto* rew = app.add_subcommand("reward", "score one completion file");
  rew->add_option("--tests", tests_path, "JSONL test store")->required();
  rew->add_option("--doc", doc_id, "document id")->required();
  rew->add_option("--file", file_path, "completion markdown file")->required();
  rew->add_flag("--finished", finished, "completion terminated with EOS");

  auto* serve = app.add_subcommand("serve", "run the batch reward service");
  serve->add_option("--tests", tests_path, "JSONL test store")->required();
  serve->add_option("--bind", bind, "host:port (env OCRCHECK_BIND overrides)");

  auto* soup_cmd = app.add_subcommand("soup", "elementwise-average checkpoint tensor maps");
  soup_cmd->add_option("inputs", soup_inputs, "input .tmap files")->expected(2, -1);
  soup_cmd->add_option("-o,--out", soup_out, "output .tmap path")->required();

  auto* sim = app.add_subcommand("simulate-temp", "simulate the retry ladder");
  sim->add_option("--p-loop", p_loop_spec, "loop probability curve: linear | const:<v>");
  sim->add_option("--trials", trials, "Monte-Carlo trials");
  sim->add_option("--seed", seed, "simulation seed");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int code = app.exit(e);  // prints usage or the error
    return code == 0 ? kExitOk : kExitValidation;
  }

  try {
    if (score->parsed()) return cmd_score(tests_path, candidates_dir, bootstrap, seed, as_json);
    if (gen->parsed()) return cmd_gen_tests(html_dir, out_path, seed, config_kvs);
    if (rew->parsed()) return cmd_reward(tests_path, doc_id, file_path, finished, as_json);
    if (serve->parsed()) return cmd_serve(tests_path, bind);
    if (soup_cmd->parsed()) return cmd_soup(soup_inputs, soup_out);
    if (sim->parsed()) return cmd_simulate_temp(p_loop_spec, trials, seed, as_json);
  } catch (const std::ios_base::failure& e) {
    std::cerr << "i/o error: " << e.what() << "\n";
    return kExitIo;
  } catch (const std::filesystem::filesystem_error& e) {
    std::cerr << "i/o error: " << e.what() << "\n";
    return kExitIo;
  } catch (const CLI::ValidationError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitValidation;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitValidation;
  }
  return kExitOk;
}
