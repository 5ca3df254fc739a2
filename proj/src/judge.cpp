#include "codeperturb/judge.hpp"

#include <cstdio>
#include <optional>
#include <regex>

#include <json.hpp>

#include "codeperturb/gen.hpp"
#include "codeperturb/language.hpp"
#include "codeperturb/util.hpp"

namespace codeperturb::judge {

std::string build_rubric_prompt(std::string_view code_prompt, std::string_view canonical_solution,
                                std::string_view test_cases) {
  return gen::render_template(gen::prompt_template("rubric"),
                              {{"code_prompt", std::string(code_prompt)},
                               {"canonical_solution", std::string(canonical_solution)},
                               {"test_case", std::string(test_cases)}});
}

std::string build_judge_prompt(std::string_view code_prompt, std::string_view rubric,
                               std::string_view model_response) {
  return gen::render_template(gen::prompt_template("judge"),
                              {{"code_prompt", std::string(code_prompt)},
                               {"rubric", std::string(rubric)},
                               {"model_response", std::string(model_response)}});
}

namespace {

std::optional<std::string> strict_block(std::string_view text, std::string_view tag) {
  const std::string open = "<" + std::string(tag) + ">";
  const std::string close = "</" + std::string(tag) + ">";
  const auto begin = text.find(open);
  if (begin == std::string_view::npos) return std::nullopt;
  const auto end = text.find(close, begin + open.size());
  if (end == std::string_view::npos) return std::nullopt;
  return std::string(text.substr(begin + open.size(), end - begin - open.size()));
}

std::optional<std::string> loose_block(const std::string& text, const std::regex& pattern) {
  std::smatch m;
  if (!std::regex_search(text, m, pattern)) return std::nullopt;
  return m[1].str();
}

}  // namespace

Judgment parse_judgment(std::string_view text) {
  auto reasoning = strict_block(text, "reasoning");
  auto score = strict_block(text, "score");
  if (!reasoning || !score) {
    static const std::regex loose_reasoning(R"(<\s*reasoning\s*>([\s\S]*?)<\s*/\s*reasoning\s*>)",
                                            std::regex::icase);
    static const std::regex loose_score(R"(<\s*score\s*>([\s\S]*?)<\s*/\s*score\s*>)", std::regex::icase);
    const std::string copy(text);
    if (!reasoning) reasoning = loose_block(copy, loose_reasoning);
    if (!score) score = loose_block(copy, loose_score);
  }
  if (!reasoning) throw MissingTagError("judgment has no <reasoning> block");
  if (!score) throw MissingTagError("judgment has no <score> block");

  static const std::regex integer(R"([+-]?[0-9]+)");
  const std::string value(trim(*score));
  if (!std::regex_match(value, integer)) {
    throw NonIntegerScoreError("score '" + value + "' is not an integer");
  }
  long long parsed = 0;
  try {
    parsed = std::stoll(value);
  } catch (const std::out_of_range&) {
    throw ScoreRangeError("score " + value + " is outside 1..10");
  }
  if (parsed < 1 || parsed > 10) throw ScoreRangeError("score " + value + " is outside 1..10");

  Judgment j;
  j.reasoning = std::move(*reasoning);
  j.score = static_cast<int>(parsed);
  return j;
}

std::string render_judgment(const Judgment& judgment) {
  return "<reasoning>" + judgment.reasoning + "</reasoning>\n<score>" +
         std::to_string(judgment.score) + "</score>";
}

JudgeReport judge_corpus(const std::vector<corpus::Record>& responses,
                         const std::vector<corpus::Record>& references,
                         provider::Session& session, const JudgeOptions& options) {
  std::map<std::string, const corpus::Record*> by_id;
  for (const auto& r : references) {
    if (!by_id.emplace(r.id, &r).second) throw ValidationError("duplicate reference id '" + r.id + "'");
  }

  std::vector<std::string> problem_of(responses.size());
  std::vector<std::string> problems;  // first-appearance order
  std::map<std::string, std::size_t> problem_index;
  for (std::size_t i = 0; i < responses.size(); ++i) {
    const auto& r = responses[i];
    auto it = r.meta.find("problem_id");
    const std::string problem = it == r.meta.end() ? r.id : it->second;
    if (!by_id.count(problem)) {
      throw ValidationError("response '" + r.id + "' has no reference '" + problem + "'");
    }
    problem_of[i] = problem;
    if (problem_index.emplace(problem, problems.size()).second) problems.push_back(problem);
  }

  auto rubrics = parallel_map(problems.size(), options.jobs, [&](std::size_t i) {
    const auto& ref = *by_id.at(problems[i]);
    auto test = ref.meta.find("test");
    const auto prompt = build_rubric_prompt(ref.instruction, ref.response,
                                            test == ref.meta.end() ? std::string() : test->second);
    return session.complete(prompt, options.temperature);
  });

  struct Outcome {
    std::optional<Judgment> judgment;
    std::optional<corpus::Rejected> rejected;
  };
  auto outcomes = parallel_map(responses.size(), options.jobs, [&](std::size_t i) {
    const auto& response = responses[i];
    const auto& ref = *by_id.at(problem_of[i]);
    const auto& rubric = rubrics[problem_index.at(problem_of[i])];
    const auto prompt = build_judge_prompt(ref.instruction, rubric, response.response);
    const int attempts = std::max(1, options.max_parse_attempts);
    std::string last_error;
    Outcome o;
    for (int attempt = 0; attempt < attempts; ++attempt) {
      try {
        auto j = parse_judgment(session.complete(prompt, options.temperature, attempt));
        j.id = response.id;
        j.rubric_id = sha256_hex(rubric);
        o.judgment = std::move(j);
        return o;
      } catch (const JudgmentParseError& e) {
        last_error = e.what();
      }
    }
    o.rejected = corpus::Rejected{
        response, "unparseable judgment after " + std::to_string(attempts) + " attempts: " + last_error};
    return o;
  });

  JudgeReport report;
  for (std::size_t i = 0; i < problems.size(); ++i) report.rubrics[problems[i]] = rubrics[i];
  std::vector<std::pair<std::string, double>> keyed;
  for (std::size_t i = 0; i < outcomes.size(); ++i) {
    auto& o = outcomes[i];
    if (o.rejected) {
      report.rejected.push_back(std::move(*o.rejected));
      continue;
    }
    const auto& r = responses[i];
    const double score = o.judgment->score;
    keyed.emplace_back("all", score);
    keyed.emplace_back("perturbation/" + (r.perturbation ? std::string(to_string(*r.perturbation))
                                                         : std::string("baseline")),
                       score);
    if (r.language && canonical_language(*r.language)) {
      keyed.emplace_back("group/" + std::string(metrics::to_string(metrics::group_of(*r.language))), score);
    }
    report.judgments.push_back(std::move(*o.judgment));
  }
  report.aggregates = metrics::aggregate_by(keyed);
  return report;
}

std::string judgment_to_json_line(const Judgment& judgment) {
  nlohmann::ordered_json j = {
      {"id", judgment.id},
      {"score", judgment.score},
      {"reasoning", judgment.reasoning},
      {"rubric_hash", judgment.rubric_id},
  };
  return j.dump();
}

std::string aggregates_tsv(const std::map<std::string, metrics::Summary>& aggregates) {
  std::string out = "key\tn\tmean\tstderr\n";
  char line[512];
  for (const auto& [key, s] : aggregates) {
    std::snprintf(line, sizeof line, "\t%zu\t%.6f\t%.6f\n", s.n, s.mean, s.stderr_);
    out += key;
    out += line;
  }
  return out;
}

}  // namespace codeperturb::judge
