#include "tta/llm/hyperagent.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <stdexcept>
#include <thread>

namespace tta::llm {

SelectionOutcome select_opponent(const gm::PlayingData& data, const archive::ArchiveManifest& manifest,
                                 LlmClient& client, int retry_limit, IclVariant icl, const AttemptLog& log,
                                 const env::Roster& roster) {
  if (retry_limit < 1) throw std::invalid_argument("retry limit must be at least 1");
  if (manifest.empty()) throw std::invalid_argument("the archive has no agents");
  const auto prompt = build_prompt(data, manifest, icl);
  SelectionOutcome out;
  for (int i = 1; i <= retry_limit; ++i) {
    Attempt a;
    a.index = i;
    try {
      a.raw = client.complete(prompt);
      auto v = validate(parse_output(a.raw), manifest, roster);
      if (auto* s = std::get_if<SelectionResult>(&v)) out.selection = *s;
      else a.failure = std::get<Failure>(v);
    } catch (const TransportError& e) {
      a.failure = Failure::Transport;
      a.detail = to_string(e.kind()) + ": " + e.what();
    }
    if (log) log(a);
    out.attempts.push_back(std::move(a));
    if (out.selection) break;
  }
  return out;
}

std::optional<double> shannon_entropy_bits(const std::vector<std::string>& labels) {
  if (labels.empty()) return std::nullopt;
  std::map<std::string, int> counts;
  for (const auto& l : labels) ++counts[l];
  double h = 0.0;
  const double n = static_cast<double>(labels.size());
  for (const auto& [_, c] : counts) {
    const double p = c / n;
    h -= p * std::log2(p);
  }
  return h == 0.0 ? 0.0 : h;  // no negative zero
}

BenchmarkRun score_output(int index, const std::string& text) {
  const auto parsed = parse_output(text);
  BenchmarkRun r;
  r.index = index;
  r.raw = text;
  r.json_blocks = static_cast<int>(parsed.json_blocks.size());
  r.has_reasoning = !parsed.reasoning.empty();
  r.json_in_output = r.json_blocks >= 1;
  r.format_correct = r.json_blocks == 1 && r.has_reasoning;
  r.word_count = parsed.word_count;
  if (r.json_in_output) {
    const auto& last = parsed.json_blocks.back().value;
    if (auto it = last.find("chosen_agent_type"); it != last.end() && it->is_string())
      r.chosen_type = it->get<std::string>();
    if (auto it = last.find("chosen_agent_character"); it != last.end() && it->is_string())
      r.chosen_character = it->get<std::string>();
  }
  return r;
}

BenchmarkReport summarize(std::vector<BenchmarkRun> runs) {
  BenchmarkReport rep;
  rep.n = static_cast<int>(runs.size());
  if (rep.n == 0) throw std::invalid_argument("benchmark needs at least one run");
  int json = 0, format = 0;
  std::vector<std::string> types, characters;
  for (const auto& r : runs) {
    json += r.json_in_output;
    format += r.format_correct;
    if (!r.json_in_output) continue;
    if (r.chosen_type) types.push_back(*r.chosen_type);
    if (r.chosen_character) characters.push_back(*r.chosen_character);
  }
  rep.json_in_output_rate = static_cast<double>(json) / rep.n;
  rep.format_correctness_rate = static_cast<double>(format) / rep.n;
  rep.type_entropy_bits = shannon_entropy_bits(types);
  rep.character_entropy_bits = shannon_entropy_bits(characters);
  rep.runs = std::move(runs);
  return rep;
}

BenchmarkReport benchmark(LlmClient& client, const std::string& prompt, int n, int parallelism) {
  if (n < 1) throw std::invalid_argument("benchmark needs n >= 1");
  std::vector<BenchmarkRun> runs(n);
  std::atomic<int> next{0};
  auto worker = [&] {
    for (int i = next++; i < n; i = next++) {
      try {
        runs[i] = score_output(i + 1, client.complete(prompt));
      } catch (const TransportError& e) {
        runs[i] = score_output(i + 1, "");
        runs[i].transport_error = to_string(e.kind()) + ": " + e.what();
      }
    }
  };
  std::vector<std::thread> pool;
  for (int t = 1; t < std::clamp(parallelism, 1, n); ++t) pool.emplace_back(worker);
  worker();
  for (auto& t : pool) t.join();
  return summarize(std::move(runs));
}

nlohmann::ordered_json report_to_json(const BenchmarkReport& r) {
  const auto opt = [](const std::optional<double>& v) { return v ? nlohmann::ordered_json(*v) : nlohmann::ordered_json(nullptr); };
  nlohmann::ordered_json j;
  j["n"] = r.n;
  j["json_in_output_rate"] = r.json_in_output_rate;
  j["format_correctness_rate"] = r.format_correctness_rate;
  j["type_entropy_bits"] = opt(r.type_entropy_bits);
  j["character_entropy_bits"] = opt(r.character_entropy_bits);
  nlohmann::ordered_json runs = nlohmann::ordered_json::array();
  for (const auto& run : r.runs) {
    nlohmann::ordered_json e;
    e["index"] = run.index;
    e["json_blocks"] = run.json_blocks;
    e["has_reasoning"] = run.has_reasoning;
    e["json_in_output"] = run.json_in_output;
    e["format_correct"] = run.format_correct;
    e["word_count"] = run.word_count;
    e["over_300_words"] = run.word_count > 300;
    e["chosen_agent_type"] = run.chosen_type ? nlohmann::ordered_json(*run.chosen_type) : nlohmann::ordered_json(nullptr);
    e["chosen_agent_character"] = run.chosen_character ? nlohmann::ordered_json(*run.chosen_character) : nlohmann::ordered_json(nullptr);
    if (!run.transport_error.empty()) e["transport_error"] = run.transport_error;
    runs.push_back(std::move(e));
  }
  j["runs"] = std::move(runs);
  return j;
}

}  // namespace tta::llm
