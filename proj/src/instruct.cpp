#include "codeperturb/instruct.hpp"

#include <random>
#include <unordered_set>

#include "codeperturb/embedded_data.hpp"
#include "codeperturb/error.hpp"
#include "codeperturb/gen.hpp"
#include "codeperturb/language.hpp"
#include "codeperturb/util.hpp"

namespace codeperturb::instruct {

const std::vector<std::string>& language_templates() {
  static const std::vector<std::string> table = [] {
    std::vector<std::string> out;
    for (auto raw : split_lines(embedded::find("language_templates.txt").value())) {
      auto line = trim(raw);
      if (line.empty() || line.front() == '#') continue;
      out.emplace_back(line);
    }
    if (out.size() != kTemplateCount) {
      throw std::runtime_error("template table has " + std::to_string(out.size()) + " entries");
    }
    return out;
  }();
  return table;
}

std::size_t template_index_for(std::uint64_t seed, std::string_view instruction_id) {
  std::mt19937_64 rng(derive_seed(seed, "template/" + std::string(instruction_id)));
  return static_cast<std::size_t>(uniform_below(rng, kTemplateCount));
}

std::string instantiate_template(std::size_t index, std::string_view language) {
  if (index >= kTemplateCount) {
    throw ValidationError("template index " + std::to_string(index) + " out of range [0, 20)");
  }
  auto canonical = canonical_language(language);
  if (!canonical) throw ValidationError("unknown language '" + std::string(language) + "'");
  return gen::render_template(language_templates()[index], {{"language", *canonical}});
}

std::string build_generation_prompt(std::string_view instruction, std::string_view language,
                                    std::string_view suffix) {
  std::string full(instruction);
  if (!suffix.empty()) {
    if (!full.empty()) full += ' ';
    full += suffix;
  }
  return gen::render_template(gen::prompt_template("generation"),
                              {{"instruction", full}, {"language", std::string(language)}});
}

bool is_invalid(std::string_view response) { return gen::is_invalid_response(response); }

GenerateResult generate_corpus(const std::vector<corpus::Record>& instructions,
                               provider::Session& session, std::uint64_t seed,
                               const GenerateOptions& options) {
  if (instructions.empty()) throw ValidationError("no instructions to generate from");

  std::vector<std::string> languages;
  if (options.languages.empty()) {
    languages.assign(kLanguages.begin(), kLanguages.end());
  } else {
    for (const auto& l : options.languages) {
      auto canonical = canonical_language(l);
      if (!canonical) throw ValidationError("unknown language '" + l + "'");
      languages.push_back(*canonical);
    }
  }

  GenerateResult result;
  std::vector<corpus::Record> kept = instructions;
  if (options.dedup) {
    auto unique = corpus::dedup_exact(kept);
    std::unordered_set<std::string> survivors;
    for (const auto& r : unique) survivors.insert(r.id);
    for (const auto& r : kept) {
      if (!survivors.count(r.id)) {
        auto d = r;
        d.meta["dropped_by"] = "duplicate";
        result.dropped.push_back(std::move(d));
      }
    }
    kept = std::move(unique);
  }
  if (options.filter) {
    auto filtered = corpus::filter_by_rules(kept, options.rules.value_or(corpus::default_rules()));
    for (auto& d : filtered.dropped) result.dropped.push_back(std::move(d));
    kept = std::move(filtered.kept);
  }

  struct Task {
    const corpus::Record* source;
    const std::string* language;
  };
  std::vector<Task> tasks;
  for (const auto& r : kept) {
    for (const auto& l : languages) tasks.push_back({&r, &l});
  }

  struct Outcome {
    corpus::Record record;
    bool invalid = false;
  };
  auto outcomes = parallel_map(tasks.size(), options.jobs, [&](std::size_t i) {
    const auto& [source, language] = tasks[i];
    const auto index = template_index_for(seed, source->id);
    const auto suffix = instantiate_template(index, *language);
    const auto prompt = build_generation_prompt(source->instruction, *language, suffix);

    Outcome o;
    o.record.id = source->id + "/" + *language;
    o.record.instruction = source->instruction + " " + suffix;
    o.record.response = session.complete(prompt);
    o.record.language = *language;
    o.record.meta = source->meta;
    o.record.meta["source_id"] = source->id;
    o.record.meta["template_index"] = std::to_string(index);
    o.record.meta["language"] = *language;
    o.invalid = is_invalid(o.record.response);
    return o;
  });

  std::vector<corpus::Record> valid;
  for (auto& o : outcomes) {
    auto& counts = result.counts[*o.record.language];
    if (o.invalid) {
      ++counts.invalid;
      result.rejected.push_back({std::move(o.record), "invalid response"});
    } else {
      ++counts.valid;
      valid.push_back(std::move(o.record));
    }
  }
  for (const auto& l : languages) result.counts[l];

  const std::size_t total = options.total.value_or(kept.size() * languages.size());
  result.records = corpus::sample_balanced(valid, total, "language", derive_seed(seed, "balance"),
                                           languages);
  return result;
}

}  // namespace codeperturb::instruct
