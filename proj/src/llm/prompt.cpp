#include "tta/llm/prompt.hpp"

#include <array>
#include <stdexcept>

namespace tta::llm {

IclVariant parse_icl_variant(std::string_view s) {
  if (s == "full") return IclVariant::Full;
  if (s == "simplified") return IclVariant::Simplified;
  throw std::invalid_argument("ICL variant must be full or simplified");
}

PromptBundle make_bundle(const gm::PlayingData& data, const archive::ArchiveManifest& manifest, IclVariant icl) {
  PromptBundle b;
  b.base_template = base_template();
  b.selection_principles = selection_principles();
  b.output_format_requirement = output_format_requirement();
  b.icl_examples = icl == IclVariant::Full ? icl_example_full() : icl_example_simplified();
  b.archive_info = manifest.to_json().dump(4);
  b.playing_data = data.to_json().dump(2);
  return b;
}

std::string assemble(const PromptBundle& b) {
  const std::array<std::pair<std::string_view, const std::string*>, 5> slots = {{
      {"{SELECTION_PRINCIPLES}", &b.selection_principles},
      {"{OUTPUT_FORMAT_REQUIREMENT}", &b.output_format_requirement},
      {"{PLAYING_DATA}", &b.playing_data},
      {"{ARCHIVE_INFO}", &b.archive_info},
      {"{FEW_SHOT_EXAMPLES}", &b.icl_examples},
  }};
  std::string out;
  std::size_t pos = 0;
  for (const auto& [key, value] : slots) {
    const auto at = b.base_template.find(key, pos);
    if (at == std::string::npos) throw std::invalid_argument("template lacks " + std::string(key));
    out.append(b.base_template, pos, at - pos);
    out += *value;
    pos = at + key.size();
  }
  out.append(b.base_template, pos);
  return out;
}

}  // namespace tta::llm
