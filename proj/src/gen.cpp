#include "codeperturb/gen.hpp"

#include <regex>

#include "codeperturb/embedded_data.hpp"
#include "codeperturb/error.hpp"
#include "codeperturb/util.hpp"

namespace codeperturb::gen {

std::vector<std::string> template_names() {
  std::vector<std::string> names;
  for (const auto& path : embedded::list("prompts/")) {
    auto name = path.substr(8);
    if (name.size() > 4 && name.compare(name.size() - 4, 4, ".txt") == 0) {
      names.push_back(name.substr(0, name.size() - 4));
    }
  }
  return names;
}

std::string_view prompt_template(std::string_view name) {
  auto text = embedded::find("prompts/" + std::string(name) + ".txt");
  if (!text) throw ValidationError("unknown prompt template '" + std::string(name) + "'");
  return *text;
}

std::string render_template(std::string_view tmpl, const std::map<std::string, std::string>& values) {
  std::string out;
  out.reserve(tmpl.size());
  std::size_t i = 0;
  while (i < tmpl.size()) {
    const char c = tmpl[i];
    if (c != '{') {
      out += c;
      ++i;
      continue;
    }
    if (i + 1 < tmpl.size() && tmpl[i + 1] == '{') {
      const auto close = tmpl.find("}}", i + 2);
      const auto end = close == std::string_view::npos ? tmpl.size() : close + 2;
      out.append(tmpl.substr(i, end - i));
      i = end;
      continue;
    }
    const auto close = tmpl.find('}', i + 1);
    if (close != std::string_view::npos) {
      auto it = values.find(std::string(tmpl.substr(i + 1, close - i - 1)));
      if (it != values.end()) {
        out += it->second;
        i = close + 1;
        continue;
      }
    }
    out += c;
    ++i;
  }
  return out;
}

std::string render_prompt(PerturbationKind kind, std::string_view instruction,
                          std::string_view response) {
  if (is_rule_based(kind)) {
    throw ValidationError("'" + std::string(to_string(kind)) + "' has no prompt template");
  }
  return render_template(prompt_template(to_string(kind)),
                         {{"instruction", std::string(instruction)}, {"response", std::string(response)}});
}

bool is_invalid_response(std::string_view text) {
  auto t = trim(text);
  if (t.rfind("```", 0) == 0) {
    const auto nl = t.find('\n');
    t = nl == std::string_view::npos ? t.substr(3) : t.substr(nl + 1);
    t = trim(t);
    if (t.size() >= 3 && t.substr(t.size() - 3) == "```") t = trim(t.substr(0, t.size() - 3));
  }
  auto strip = [](char ch) {
    return is_space(ch) || ch == '"' || ch == '\'' || ch == '`' || ch == '.' || ch == '!' ||
           ch == '?' || ch == ',' || ch == ';' || ch == ':';
  };
  while (!t.empty() && strip(t.front())) t.remove_prefix(1);
  while (!t.empty() && strip(t.back())) t.remove_suffix(1);
  return to_lower_ascii(t) == "invalid";
}

namespace {

std::optional<std::string> check_flowchart(std::string_view text) {
  const auto open = text.find("```mermaid");
  if (open == std::string_view::npos) return "no ```mermaid block";
  const auto body_start = text.find('\n', open);
  if (body_start == std::string_view::npos) return "unterminated ```mermaid block";
  const auto close = text.find("```", body_start);
  if (close == std::string_view::npos) return "unterminated ```mermaid block";
  const std::string body(text.substr(body_start, close - body_start));
  static const std::regex start(R"(\bStart\b)");
  static const std::regex end(R"(\bEnd\b)");
  if (!std::regex_search(body, start)) return "flowchart has no Start node";
  if (!std::regex_search(body, end)) return "flowchart has no End node";
  return std::nullopt;
}

std::optional<std::string> check_steps(std::string_view text) {
  const auto t = trim(text);
  if (t.rfind("1.", 0) != 0) return "step list does not start with \"1.\"";
  static const std::regex numbered(R"(^\s*(\d+)\.(\s|$))");
  long expected = 1;
  for (auto line : split_lines(t)) {
    std::match_results<std::string_view::const_iterator> m;
    if (!std::regex_search(line.begin(), line.end(), m, numbered)) continue;
    const long n = std::stol(m[1].str());
    if (n != expected) {
      return "step " + std::to_string(n) + " follows step " + std::to_string(expected - 1);
    }
    ++expected;
  }
  return std::nullopt;
}

}  // namespace

std::optional<std::string> validate_output(PerturbationKind kind, std::string_view text) {
  if (trim(text).empty()) return "empty completion";
  if (is_invalid_response(text)) return "completion is \"invalid\"";
  switch (kind) {
    case PerturbationKind::kFlowchart:
      return check_flowchart(text);
    case PerturbationKind::kStepByStep:
      return check_steps(text);
    default:
      return std::nullopt;
  }
}

GenOutcome apply_generative(const corpus::Record& record, PerturbationKind kind,
                            provider::Session& session, const GenOptions& options) {
  if (is_rule_based(kind)) {
    throw ValidationError("'" + std::string(to_string(kind)) + "' is not a generative perturbation");
  }
  GenOutcome outcome;
  if (trim(record.response).empty()) {
    outcome.rejected = corpus::Rejected{record, "empty response"};
    return outcome;
  }
  const auto prompt = render_prompt(kind, record.instruction, record.response);
  const int attempts = std::max(1, options.max_validation_attempts);
  std::string last_reason;
  for (int attempt = 0; attempt < attempts; ++attempt) {
    auto text = session.complete(prompt, std::nullopt, attempt);
    auto problem = validate_output(kind, text);
    if (!problem) {
      corpus::Record out = record;
      out.meta["original_response"] = record.response;
      out.meta["attempts"] = std::to_string(attempt + 1);
      out.meta["model"] = session.config().model;
      out.response = std::move(text);
      out.perturbation = kind;
      outcome.record = std::move(out);
      return outcome;
    }
    last_reason = *problem;
  }
  outcome.rejected = corpus::Rejected{
      record, "validation failed after " + std::to_string(attempts) + " attempts: " + last_reason};
  return outcome;
}

GenResult perturb_corpus(const std::vector<corpus::Record>& records, PerturbationKind kind,
                         provider::Session& session, const GenOptions& options) {
  auto outcomes = parallel_map(records.size(), options.jobs, [&](std::size_t i) {
    return apply_generative(records[i], kind, session, options);
  });
  GenResult result;
  for (auto& o : outcomes) {
    if (o.record) result.perturbed.push_back(std::move(*o.record));
    if (o.rejected) result.rejected.push_back(std::move(*o.rejected));
  }
  return result;
}

}  // namespace codeperturb::gen
