#pragma once

#include <string>

#include "tta/archive/archive.hpp"
#include "tta/gm/playing_data.hpp"

namespace tta::llm {

const std::string& base_template();
const std::string& selection_principles();
const std::string& output_format_requirement();
const std::string& icl_example_full();
/// Example without any playing data, for small models that mistake example
/// numbers for real data.
const std::string& icl_example_simplified();

enum class IclVariant { Full, Simplified };
IclVariant parse_icl_variant(std::string_view s);

struct PromptBundle {
  std::string base_template;
  std::string selection_principles;
  std::string output_format_requirement;
  std::string icl_examples;
  std::string archive_info;
  std::string playing_data;
};

PromptBundle make_bundle(const gm::PlayingData& data, const archive::ArchiveManifest& manifest,
                         IclVariant icl = IclVariant::Full);

/// Substitutes the five placeholders of the base template in one pass, so
/// placeholder-like text inside the inserted sections is left alone.
/// Throws std::invalid_argument if the template lacks a placeholder.
std::string assemble(const PromptBundle& b);

inline std::string build_prompt(const gm::PlayingData& data, const archive::ArchiveManifest& manifest,
                                IclVariant icl = IclVariant::Full) {
  return assemble(make_bundle(data, manifest, icl));
}

}  // namespace tta::llm
