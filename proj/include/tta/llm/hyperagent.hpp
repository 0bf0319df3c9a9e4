#pragma once

#include <functional>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "tta/llm/client.hpp"
#include "tta/llm/output.hpp"
#include "tta/llm/prompt.hpp"

namespace tta::llm {

struct Attempt {
  int index = 0;  // 1-based
  std::optional<Failure> failure;
  std::string detail;  // transport message, if any
  std::string raw;
};

struct SelectionOutcome {
  std::optional<SelectionResult> selection;  // empty once retries are exhausted
  std::vector<Attempt> attempts;
};

using AttemptLog = std::function<void(const Attempt&)>;

/// Query, parse and validate until a valid selection or `retry_limit`
/// attempts. Transport errors count as failed attempts.
SelectionOutcome select_opponent(const gm::PlayingData& data, const archive::ArchiveManifest& manifest,
                                 LlmClient& client, int retry_limit = 3,
                                 IclVariant icl = IclVariant::Full, const AttemptLog& log = {},
                                 const env::Roster& roster = env::default_roster());

/// Shannon entropy in bits of the empirical distribution of `labels`;
/// empty input has no entropy.
std::optional<double> shannon_entropy_bits(const std::vector<std::string>& labels);

struct BenchmarkRun {
  int index = 0;
  std::string raw;
  std::string transport_error;  // empty if the call succeeded
  int json_blocks = 0;
  bool has_reasoning = false;
  bool json_in_output = false;
  bool format_correct = false;
  int word_count = 0;
  std::optional<std::string> chosen_type;       // from the last block
  std::optional<std::string> chosen_character;  // from the last block
};

struct BenchmarkReport {
  int n = 0;
  double json_in_output_rate = 0.0;
  double format_correctness_rate = 0.0;
  std::optional<double> type_entropy_bits;
  std::optional<double> character_entropy_bits;
  std::vector<BenchmarkRun> runs;
};

BenchmarkRun score_output(int index, const std::string& text);
/// Aggregates scored runs: rates over all runs, entropies over runs with
/// at least one JSON object.
BenchmarkReport summarize(std::vector<BenchmarkRun> runs);
/// Issues the same prompt `n` times, up to `parallelism` calls at once.
BenchmarkReport benchmark(LlmClient& client, const std::string& prompt, int n = 20, int parallelism = 1);

nlohmann::ordered_json report_to_json(const BenchmarkReport& r);

}  // namespace tta::llm
