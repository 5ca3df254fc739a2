#pragma once

#include <cstddef>
#include <map>
#include <string>
#include <string_view>
#include <vector>

#include "codeperturb/corpus.hpp"
#include "codeperturb/error.hpp"
#include "codeperturb/metrics.hpp"
#include "codeperturb/provider.hpp"

namespace codeperturb::judge {

// Parse failures, one class per cause.
class JudgmentParseError : public ValidationError {
 public:
  using ValidationError::ValidationError;
};
class MissingTagError : public JudgmentParseError {
 public:
  using JudgmentParseError::JudgmentParseError;
};
class NonIntegerScoreError : public JudgmentParseError {
 public:
  using JudgmentParseError::JudgmentParseError;
};
class ScoreRangeError : public JudgmentParseError {
 public:
  using JudgmentParseError::JudgmentParseError;
};

struct Judgment {
  std::string id;         // response record id
  int score = 0;          // 1..10
  std::string reasoning;
  std::string rubric_id;  // sha256 of the rubric text
};

std::string build_rubric_prompt(std::string_view code_prompt, std::string_view canonical_solution,
                                std::string_view test_cases);
std::string build_judge_prompt(std::string_view code_prompt, std::string_view rubric,
                               std::string_view model_response);

// Reads the first <reasoning> and <score> blocks. Tags must match exactly;
// failing that, one retry accepts any case and whitespace inside the tags.
// The score must be an integer in [1, 10].
Judgment parse_judgment(std::string_view text);

// The output shape the judge prompt asks for.
std::string render_judgment(const Judgment& judgment);

struct JudgeOptions {
  double temperature = 0.0;
  int max_parse_attempts = 3;
  std::size_t jobs = 4;
};

struct JudgeReport {
  std::vector<Judgment> judgments;         // input order
  std::vector<corpus::Rejected> rejected;  // unparseable after all attempts
  std::map<std::string, std::string> rubrics;  // problem id -> rubric
  // Aggregates keyed "all", "perturbation/<kind>" and "group/<language group>".
  std::map<std::string, metrics::Summary> aggregates;
};

// References carry the code prompt in `instruction`, the canonical solution
// in `response` and the tests in meta["test"]. A response belongs to the
// reference named by its meta["problem_id"], or to the one with its own id.
// Throws ValidationError when a response has no reference. Each problem gets
// exactly one rubric request.
JudgeReport judge_corpus(const std::vector<corpus::Record>& responses,
                         const std::vector<corpus::Record>& references,
                         provider::Session& session, const JudgeOptions& options = {});

std::string judgment_to_json_line(const Judgment& judgment);

// Tab-separated: key, n, mean, stderr.
std::string aggregates_tsv(const std::map<std::string, metrics::Summary>& aggregates);

}  // namespace codeperturb::judge
