#pragma once

#include <atomic>
#include <chrono>
#include <cstdint>
#include <filesystem>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace tta::llm {

class TransportError : public std::runtime_error {
 public:
  enum class Kind { Timeout, Http, Preflight };
  TransportError(Kind kind, const std::string& what) : std::runtime_error(what), kind_(kind) {}
  Kind kind() const { return kind_; }

 private:
  Kind kind_;
};

std::string to_string(TransportError::Kind k);

struct LlmClientConfig {
  std::string endpoint = "http://127.0.0.1:8000/v1/chat/completions";
  std::string model = "default";
  std::string api_key;
  double temperature = 0.6;
  int max_output_tokens = 1024;
  std::chrono::milliseconds timeout{120000};
  int retry_limit = 3;
  std::size_t max_prompt_chars = 200000;

  /// Defaults overridden by TTA_LLM_ENDPOINT, TTA_LLM_MODEL and TTA_LLM_API_KEY.
  static LlmClientConfig from_environment();
  void validate() const;  // throws std::invalid_argument
};

class LlmClient {
 public:
  virtual ~LlmClient() = default;
  /// The model's text, or TransportError.
  virtual std::string complete(const std::string& prompt) = 0;
};

/// Chat-completions endpoint over plain HTTP.
class HttpClient : public LlmClient {
 public:
  explicit HttpClient(LlmClientConfig config);
  std::string complete(const std::string& prompt) override;

 private:
  LlmClientConfig config_;
};

/// Named canned responses, ordered by name.
struct FixtureSet {
  std::vector<std::pair<std::string, std::string>> fixtures;

  /// Every *.txt file in `dir`; the name is the file stem.
  static FixtureSet load(const std::filesystem::path& dir);
  const std::string& text(std::string_view name) const;  // throws std::out_of_range
  std::size_t size() const { return fixtures.size(); }
};

std::uint64_t fnv1a64(std::string_view s);

/// A pure function of the prompt: the fixture at fnv1a64(prompt) mod size,
/// or always the fixture named at construction.
class MockClient : public LlmClient {
 public:
  explicit MockClient(FixtureSet set, std::string fixed_name = {});
  std::string complete(const std::string& prompt) override;
  int calls() const { return calls_; }

 private:
  FixtureSet set_;
  std::string fixed_;
  std::atomic<int> calls_{0};
};

/// Replays responses in order, cycling; an empty entry raises a transport
/// timeout, which lets tests script failing attempts.
class ScriptedClient : public LlmClient {
 public:
  explicit ScriptedClient(std::vector<std::string> responses) : responses_(std::move(responses)) {}
  std::string complete(const std::string& prompt) override;
  int calls() const { return calls_; }

 private:
  std::vector<std::string> responses_;
  std::atomic<int> calls_{0};
};

}  // namespace tta::llm
