// All httplib usage lives in this TU: the chat-completion backend and the
// remote semantic scorer.
#define CPPHTTPLIB_OPENSSL_SUPPORT
#include <httplib.h>

#include <cstdlib>
#include <nlohmann/json.hpp>

#include "paraforge/backend.hpp"
#include "paraforge/metrics.hpp"

namespace paraforge {

namespace {

struct SplitUrl {
  std::string base;  // scheme://host[:port]
  std::string path;
};

SplitUrl split_url(const std::string& url) {
  auto scheme_end = url.find("://");
  if (scheme_end == std::string::npos) throw BackendError("bad URL (missing scheme): " + url);
  auto path_start = url.find('/', scheme_end + 3);
  if (path_start == std::string::npos) return {url, "/"};
  return {url.substr(0, path_start), url.substr(path_start)};
}

}  // namespace

HttpChatBackend::HttpChatBackend(std::string url, std::string api_key_env) : url_(std::move(url)) {
  if (const char* key = std::getenv(api_key_env.c_str())) api_key_ = key;
}

std::string HttpChatBackend::generate(const std::string& system_text, const std::string& user_text,
                                      const BackendParams& params) {
  auto [base, path] = split_url(url_);
  httplib::Client client(base);
  client.set_connection_timeout(30);
  client.set_read_timeout(300);

  nlohmann::json body;
  body["model"] = params.model_name;
  body["messages"] = nlohmann::json::array({
      nlohmann::json{{"role", "system"}, {"content", system_text}},
      nlohmann::json{{"role", "user"}, {"content", user_text}},
  });
  body["temperature"] = params.temperature;
  body["max_tokens"] = params.max_tokens;

  httplib::Headers headers;
  if (!api_key_.empty()) headers.emplace("Authorization", "Bearer " + api_key_);

  auto res = client.Post(path, headers, body.dump(), "application/json");
  if (!res) throw BackendError("transport error to " + url_ + ": " + httplib::to_string(res.error()));
  if (res->status < 200 || res->status >= 300) {
    throw BackendError("HTTP " + std::to_string(res->status) + " from " + url_);
  }
  try {
    auto doc = nlohmann::json::parse(res->body);
    return doc.at("choices").at(0).at("message").at("content").get<std::string>();
  } catch (const nlohmann::json::exception& e) {
    throw BackendError(std::string("unexpected response envelope: ") + e.what());
  }
}

namespace metrics {

HttpScorer::HttpScorer(std::string url) : url_(std::move(url)) {}

std::vector<double> HttpScorer::score(const std::vector<std::string>&,
                                      const std::vector<std::string>& candidates,
                                      const std::vector<std::string>& references) {
  auto [base, path] = split_url(url_);
  httplib::Client client(base);
  client.set_connection_timeout(30);
  client.set_read_timeout(300);

  nlohmann::json body;
  auto pairs = nlohmann::json::array();
  for (std::size_t i = 0; i < candidates.size(); ++i) {
    pairs.push_back({{"candidate", candidates[i]}, {"reference", references[i]}});
  }
  body["pairs"] = std::move(pairs);

  auto res = client.Post(path, body.dump(), "application/json");
  if (!res) throw IoError("scorer endpoint unreachable: " + url_);
  if (res->status < 200 || res->status >= 300) {
    throw IoError("scorer endpoint returned HTTP " + std::to_string(res->status));
  }
  try {
    auto doc = nlohmann::json::parse(res->body);
    return doc.at("scores").get<std::vector<double>>();
  } catch (const nlohmann::json::exception& e) {
    throw IoError(std::string("bad scorer response: ") + e.what());
  }
}

}  // namespace metrics
}  // namespace paraforge
