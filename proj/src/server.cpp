#include <atomic>
#include <thread>

#include "httplib.h"
#include "json.hpp"
#include "ocrcheck/harness.hpp"

namespace ocrcheck::harness {

using json = nlohmann::json;

struct RewardServer::Impl {
  core::TestStore store;
  reward::RewardConfig cfg;
  ServeOptions options;
  httplib::Server server;
  std::thread background;
  std::atomic<bool> running{false};

  Impl(core::TestStore s, reward::RewardConfig c, ServeOptions o)
      : store(std::move(s)), cfg(std::move(c)), options(o) {
    server.set_payload_max_length(options.max_body_bytes);
    server.Get("/healthz", [](const httplib::Request&, httplib::Response& res) {
      res.set_content("{\"status\":\"ok\"}", "application/json");
    });
    server.Post("/v1/reward", [this](const httplib::Request& req, httplib::Response& res) {
      handle_reward(req, res);
    });
  }

  struct Item {
    std::string doc_id;
    std::string text;
    bool finished = true;
  };

  json score_item(const Item& item, bool include_outcomes) const {
    json entry;
    entry["doc_id"] = item.doc_id;
    try {
      core::PageScore score =
          score_completion(store, cfg, item.doc_id, item.text, item.finished);
      entry["composite"] = score.composite;
      entry["pass_rate"] = score.pass_rate;
      entry["eos_reward"] = score.eos_reward;
      entry["metadata_reward"] = score.metadata_reward;
      entry["test_count"] = score.outcomes.size();
      if (include_outcomes) {
        json outcomes = json::array();
        for (const auto& o : score.outcomes) {
          outcomes.push_back({{"test_id", o.test_id},
                              {"passed", o.passed},
                              {"detail", o.detail}});
        }
        entry["outcomes"] = std::move(outcomes);
      }
    } catch (const std::out_of_range&) {
      entry["error"] = "unknown doc_id";
    } catch (const std::exception& e) {
      entry["error"] = e.what();
    }
    return entry;
  }

  void handle_reward(const httplib::Request& req, httplib::Response& res) {
    json request;
    try {
      request = json::parse(req.body);
    } catch (const json::exception& e) {
      res.status = 400;
      res.set_content(json{{"error", std::string("malformed JSON: ") + e.what()}}.dump(),
                      "application/json");
      return;
    }
    if (!request.is_object() || !request.contains("items") ||
        !request["items"].is_array()) {
      res.status = 400;
      res.set_content(json{{"error", "expected an object with an `items` array"}}.dump(),
                      "application/json");
      return;
    }
    bool include_outcomes = request.value("include_outcomes", false);

    std::vector<Item> items;
    std::vector<bool> malformed;
    items.reserve(request["items"].size());
    for (const auto& raw : request["items"]) {
      Item item;
      bool ok = raw.is_object();
      if (ok) {
        try {
          item.doc_id = raw.value("doc_id", "");
          item.text = raw.value("text", "");
          item.finished = raw.value("finished", true);
        } catch (const json::exception&) {
          ok = false;
        }
      }
      items.push_back(std::move(item));
      malformed.push_back(!ok);
    }

    auto score_slot = [&](std::size_t i) {
      if (malformed[i]) {
        return json{{"error", "malformed item"}};
      }
      return score_item(items[i], include_outcomes);
    };
    std::vector<json> entries(items.size());
    if (items.size() >= options.parallel_threshold) {
      std::size_t workers =
          std::min<std::size_t>(std::thread::hardware_concurrency(), items.size());
      workers = std::max<std::size_t>(workers, 1);
      std::atomic<std::size_t> next{0};
      std::vector<std::thread> pool;
      pool.reserve(workers);
      for (std::size_t w = 0; w < workers; ++w) {
        pool.emplace_back([&] {
          for (std::size_t i = next.fetch_add(1); i < items.size();
               i = next.fetch_add(1)) {
            entries[i] = score_slot(i);
          }
        });
      }
      for (auto& t : pool) t.join();
    } else {
      for (std::size_t i = 0; i < items.size(); ++i) {
        entries[i] = score_slot(i);
      }
    }

    json response;
    response["rewards"] = json::array();
    for (auto& e : entries) response["rewards"].push_back(std::move(e));
    res.set_content(response.dump(), "application/json");
  }
};

RewardServer::RewardServer(core::TestStore store, reward::RewardConfig cfg,
                           ServeOptions options)
    : impl_(std::make_unique<Impl>(std::move(store), std::move(cfg), options)) {}

RewardServer::~RewardServer() { stop(); }

bool RewardServer::run() {
  impl_->running = true;
  return impl_->server.listen(impl_->options.host, impl_->options.port);
}

int RewardServer::start_background() {
  int port = impl_->server.bind_to_any_port(impl_->options.host);
  if (port <= 0) return -1;
  impl_->running = true;
  impl_->background = std::thread([this] { impl_->server.listen_after_bind(); });
  impl_->server.wait_until_ready();
  return port;
}

void RewardServer::stop() {
  if (!impl_ || !impl_->running.exchange(false)) return;
  impl_->server.stop();
  if (impl_->background.joinable()) impl_->background.join();
}

}  // namespace ocrcheck::harness
