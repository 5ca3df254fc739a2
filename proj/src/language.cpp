#include "codeperturb/language.hpp"

#include <algorithm>
#include <utility>

#include "codeperturb/perturbation.hpp"
#include "codeperturb/util.hpp"

namespace codeperturb {

bool is_canonical_language(std::string_view name) {
  return std::find(kLanguages.begin(), kLanguages.end(), name) != kLanguages.end();
}

std::optional<std::string> canonical_language(std::string_view name) {
  const std::string lowered = to_lower_ascii(trim(name));
  for (auto lang : kLanguages) {
    if (to_lower_ascii(lang) == lowered) return std::string(lang);
  }
  static constexpr std::pair<std::string_view, std::string_view> kAliases[] = {
      {"cpp", "C++"},       {"cxx", "C++"},         {"c plus plus", "C++"},
      {"csharp", "C#"},     {"cs", "C#"},           {"c sharp", "C#"},
      {"js", "JavaScript"}, {"node", "JavaScript"}, {"ts", "TypeScript"},
      {"golang", "Go"},     {"py", "Python"},       {"python3", "Python"},
      {"rs", "Rust"},
  };
  for (const auto& [alias, canonical] : kAliases) {
    if (alias == lowered) return std::string(canonical);
  }
  return std::nullopt;
}

std::string language_file_stem(std::string_view canonical_name) {
  if (canonical_name == "C++") return "cpp";
  if (canonical_name == "C#") return "csharp";
  return to_lower_ascii(canonical_name);
}

namespace {
constexpr std::array<std::pair<PerturbationKind, std::string_view>, 13> kKindNames = {{
    {PerturbationKind::kWhitespaceRemoval, "whitespace_removal"},
    {PerturbationKind::kVariableRenaming, "variable_renaming"},
    {PerturbationKind::kKeywordNonsense, "keyword_replacement_nonsense"},
    {PerturbationKind::kKeywordNonEnglish, "keyword_replacement_non_english"},
    {PerturbationKind::kCommentRemoval, "comment_removal"},
    {PerturbationKind::kCommentSwapLocal, "swap_comments_local"},
    {PerturbationKind::kCommentSwapGlobal, "swap_comments_global"},
    {PerturbationKind::kCommentEnhance, "comment_enhance"},
    {PerturbationKind::kCommentObfuscate, "comment_obfuscate"},
    {PerturbationKind::kPseudocode, "pseudocode"},
    {PerturbationKind::kFlowchart, "flowchart"},
    {PerturbationKind::kStepByStep, "step_by_step"},
    {PerturbationKind::kImaginary, "imaginary"},
}};
}  // namespace

std::string_view to_string(PerturbationKind kind) {
  for (const auto& [k, name] : kKindNames) {
    if (k == kind) return name;
  }
  return "unknown";
}

std::optional<PerturbationKind> parse_perturbation(std::string_view name) {
  for (const auto& [k, n] : kKindNames) {
    if (n == name) return k;
  }
  return std::nullopt;
}

bool is_rule_based(PerturbationKind kind) {
  switch (kind) {
    case PerturbationKind::kWhitespaceRemoval:
    case PerturbationKind::kVariableRenaming:
    case PerturbationKind::kKeywordNonsense:
    case PerturbationKind::kKeywordNonEnglish:
    case PerturbationKind::kCommentRemoval:
    case PerturbationKind::kCommentSwapLocal:
    case PerturbationKind::kCommentSwapGlobal:
      return true;
    default:
      return false;
  }
}

}  // namespace codeperturb
