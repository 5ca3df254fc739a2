#pragma once

#include <cstddef>
#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "codeperturb/corpus.hpp"
#include "codeperturb/provider.hpp"

namespace codeperturb::instruct {

inline constexpr std::size_t kTemplateCount = 20;

// The shipped template table, in index order.
const std::vector<std::string>& language_templates();

// Index drawn uniformly with derive_seed(seed, "template/<instruction id>").
std::size_t template_index_for(std::uint64_t seed, std::string_view instruction_id);

// Throws ValidationError for an index outside [0, 20) or an unknown language.
std::string instantiate_template(std::size_t index, std::string_view language);

// Generation prompt with Instruction = "<instruction> <suffix>" (just the
// instruction when the suffix is empty) and Language = language.
std::string build_generation_prompt(std::string_view instruction, std::string_view language,
                                    std::string_view suffix);

bool is_invalid(std::string_view response);

struct GenerateOptions {
  std::vector<std::string> languages;  // empty = all ten, in canonical order
  std::optional<std::size_t> total;    // default: instructions x languages
  bool dedup = true;
  bool filter = true;
  std::optional<corpus::FilterRuleSet> rules;  // default: the shipped rules
  std::size_t jobs = 4;
};

struct LanguageCounts {
  std::size_t valid = 0;
  std::size_t invalid = 0;
};

struct GenerateResult {
  std::vector<corpus::Record> records;            // balanced sample, input order
  std::vector<corpus::Rejected> rejected;         // invalid completions
  std::vector<corpus::Record> dropped;            // removed by dedup or filter rules
  std::map<std::string, LanguageCounts> counts;   // per language, before sampling
};

// Dedups and filters the instructions, prompts once per (instruction,
// language), drops "invalid" replies and draws an equal number of records per
// language. Records are "<instruction id>/<language>". Throws ValidationError
// naming a language that lacks enough valid responses.
GenerateResult generate_corpus(const std::vector<corpus::Record>& instructions,
                               provider::Session& session, std::uint64_t seed,
                               const GenerateOptions& options = {});

}  // namespace codeperturb::instruct
