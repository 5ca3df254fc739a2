#pragma once

#include <array>
#include <optional>
#include <string_view>

namespace codeperturb {

// The thirteen perturbations. The first seven are deterministic lexical
// transforms; the last six are model rewrites.
enum class PerturbationKind {
  kWhitespaceRemoval,
  kVariableRenaming,
  kKeywordNonsense,
  kKeywordNonEnglish,
  kCommentRemoval,
  kCommentSwapLocal,
  kCommentSwapGlobal,
  kCommentEnhance,
  kCommentObfuscate,
  kPseudocode,
  kFlowchart,
  kStepByStep,
  kImaginary,
};

inline constexpr std::array<PerturbationKind, 13> kAllPerturbations = {
    PerturbationKind::kWhitespaceRemoval, PerturbationKind::kVariableRenaming,
    PerturbationKind::kKeywordNonsense,   PerturbationKind::kKeywordNonEnglish,
    PerturbationKind::kCommentRemoval,    PerturbationKind::kCommentSwapLocal,
    PerturbationKind::kCommentSwapGlobal, PerturbationKind::kCommentEnhance,
    PerturbationKind::kCommentObfuscate,  PerturbationKind::kPseudocode,
    PerturbationKind::kFlowchart,         PerturbationKind::kStepByStep,
    PerturbationKind::kImaginary,
};

// Stable wire names, e.g. "whitespace_removal", "swap_comments_global".
std::string_view to_string(PerturbationKind kind);
std::optional<PerturbationKind> parse_perturbation(std::string_view name);

bool is_rule_based(PerturbationKind kind);

}  // namespace codeperturb
