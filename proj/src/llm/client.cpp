#include "tta/llm/client.hpp"

#include <algorithm>
#include <cstdlib>
#include <regex>

#include <httplib.h>
#include <nlohmann/json.hpp>

#include "tta/util/files.hpp"

namespace tta::llm {

std::string to_string(TransportError::Kind k) {
  switch (k) {
    case TransportError::Kind::Timeout: return "timeout";
    case TransportError::Kind::Http: return "http";
    case TransportError::Kind::Preflight: return "preflight";
  }
  return "unknown";
}

LlmClientConfig LlmClientConfig::from_environment() {
  LlmClientConfig c;
  if (const char* v = std::getenv("TTA_LLM_ENDPOINT")) c.endpoint = v;
  if (const char* v = std::getenv("TTA_LLM_MODEL")) c.model = v;
  if (const char* v = std::getenv("TTA_LLM_API_KEY")) c.api_key = v;
  return c;
}

void LlmClientConfig::validate() const {
  if (retry_limit < 1) throw std::invalid_argument("retry limit must be at least 1");
  if (timeout.count() <= 0) throw std::invalid_argument("timeout must be positive");
  if (max_output_tokens < 1) throw std::invalid_argument("max output tokens must be positive");
}

HttpClient::HttpClient(LlmClientConfig config) : config_(std::move(config)) { config_.validate(); }

std::string HttpClient::complete(const std::string& prompt) {
  if (prompt.size() > config_.max_prompt_chars)
    throw TransportError(TransportError::Kind::Preflight,
                         "prompt of " + std::to_string(prompt.size()) + " chars exceeds the configured context");
  static const std::regex url_re(R"(^(https?://[^/]+)(/.*)?$)");
  std::smatch m;
  if (!std::regex_match(config_.endpoint, m, url_re))
    throw TransportError(TransportError::Kind::Preflight, "malformed endpoint '" + config_.endpoint + "'");
  httplib::Client cli(m[1].str());
  const auto secs = config_.timeout.count() / 1000;
  const auto usecs = (config_.timeout.count() % 1000) * 1000;
  cli.set_connection_timeout(secs, usecs);
  cli.set_read_timeout(secs, usecs);
  cli.set_write_timeout(secs, usecs);
  httplib::Headers headers;
  if (!config_.api_key.empty()) headers.emplace("Authorization", "Bearer " + config_.api_key);
  const nlohmann::json body = {{"model", config_.model},
                               {"messages", {{{"role", "user"}, {"content", prompt}}}},
                               {"temperature", config_.temperature},
                               {"max_tokens", config_.max_output_tokens}};
  const auto res = cli.Post(m[2].matched ? m[2].str() : "/", headers, body.dump(), "application/json");
  if (!res) {
    const auto err = res.error();
    const bool timeout = err == httplib::Error::ConnectionTimeout || err == httplib::Error::Read ||
                         err == httplib::Error::Write;
    throw TransportError(timeout ? TransportError::Kind::Timeout : TransportError::Kind::Http,
                         "request failed: " + httplib::to_string(err));
  }
  if (res->status != 200)
    throw TransportError(TransportError::Kind::Http, "endpoint returned HTTP " + std::to_string(res->status));
  const auto doc = nlohmann::json::parse(res->body, nullptr, false);
  try {
    return doc.at("choices").at(0).at("message").at("content").get<std::string>();
  } catch (const nlohmann::json::exception&) {
    throw TransportError(TransportError::Kind::Http, "response lacks choices[0].message.content");
  }
}

FixtureSet FixtureSet::load(const std::filesystem::path& dir) {
  if (!std::filesystem::is_directory(dir)) throw std::invalid_argument("no fixture directory " + dir.string());
  FixtureSet set;
  for (const auto& e : std::filesystem::directory_iterator(dir))
    if (e.is_regular_file() && e.path().extension() == ".txt")
      set.fixtures.emplace_back(e.path().stem().string(), util::read_file(e.path()));
  std::sort(set.fixtures.begin(), set.fixtures.end());
  return set;
}

const std::string& FixtureSet::text(std::string_view name) const {
  for (const auto& [n, t] : fixtures)
    if (n == name) return t;
  throw std::out_of_range("no fixture named '" + std::string(name) + "'");
}

std::uint64_t fnv1a64(std::string_view s) {
  std::uint64_t h = 14695981039346656037ull;
  for (unsigned char c : s) {
    h ^= c;
    h *= 1099511628211ull;
  }
  return h;
}

MockClient::MockClient(FixtureSet set, std::string fixed_name) : set_(std::move(set)), fixed_(std::move(fixed_name)) {
  if (set_.size() == 0) throw std::invalid_argument("mock client needs at least one fixture");
  if (!fixed_.empty()) set_.text(fixed_);
}

std::string MockClient::complete(const std::string& prompt) {
  ++calls_;
  if (!fixed_.empty()) return set_.text(fixed_);
  return set_.fixtures[fnv1a64(prompt) % set_.size()].second;
}

std::string ScriptedClient::complete(const std::string&) {
  if (responses_.empty()) throw TransportError(TransportError::Kind::Timeout, "no scripted responses");
  const auto i = static_cast<std::size_t>(calls_++) % responses_.size();
  if (responses_[i].empty()) throw TransportError(TransportError::Kind::Timeout, "scripted timeout");
  return responses_[i];
}

}  // namespace tta::llm
