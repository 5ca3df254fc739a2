#pragma once

#include <cstddef>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "codeperturb/corpus.hpp"
#include "codeperturb/perturbation.hpp"
#include "codeperturb/provider.hpp"

namespace codeperturb::gen {

// ---------------------------------------------------------------------------
// Prompt templates
// ---------------------------------------------------------------------------

// Names of the shipped templates: generation, comment_enhance,
// comment_obfuscate, pseudocode, flowchart, step_by_step, imaginary, rubric,
// judge.
std::vector<std::string> template_names();

// Raw template text. Throws ValidationError for an unknown name.
std::string_view prompt_template(std::string_view name);

// Single-pass substitution of "{slot}" for every slot in `values`. Anything
// else, including "{{...}}" output placeholders and unknown "{names}", is
// copied unchanged. Substituted text is never rescanned.
std::string render_template(std::string_view tmpl, const std::map<std::string, std::string>& values);

// Template for a generative kind with {instruction} and {response} filled.
// Throws ValidationError for rule-based kinds.
std::string render_prompt(PerturbationKind kind, std::string_view instruction,
                          std::string_view response);

// ---------------------------------------------------------------------------
// Output checks
// ---------------------------------------------------------------------------

// True when the text, stripped of surrounding whitespace, code fences,
// quotes, backticks and terminal punctuation, is the word "invalid" in any
// case.
bool is_invalid_response(std::string_view text);

// nullopt when the completion has the expected shape, otherwise the reason.
//   flowchart     a ```mermaid block containing Start and End nodes
//   step_by_step  starts with "1." and numbered lines count up by one
//   others        nonempty and not an "invalid" reply
std::optional<std::string> validate_output(PerturbationKind kind, std::string_view text);

// ---------------------------------------------------------------------------
// Applying
// ---------------------------------------------------------------------------

struct GenOptions {
  int max_validation_attempts = 3;
  std::size_t jobs = 4;
};

struct GenOutcome {
  std::optional<corpus::Record> record;
  std::optional<corpus::Rejected> rejected;
};

// Prompts, validates and retries up to max_validation_attempts. The result
// keeps the id, sets perturbation and stores the input response in
// meta["original_response"]. Provider errors propagate.
GenOutcome apply_generative(const corpus::Record& record, PerturbationKind kind,
                            provider::Session& session, const GenOptions& options = {});

struct GenResult {
  std::vector<corpus::Record> perturbed;
  std::vector<corpus::Rejected> rejected;
};

// Every input ends up in exactly one of the two lists, in input order.
GenResult perturb_corpus(const std::vector<corpus::Record>& records, PerturbationKind kind,
                         provider::Session& session, const GenOptions& options = {});

}  // namespace codeperturb::gen
