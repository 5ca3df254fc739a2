#include <doctest.h>

#include <cmath>
#include <regex>

#include "codeperturb/error.hpp"
#include "codeperturb/language.hpp"
#include "codeperturb/metrics.hpp"
#include "codeperturb/rules.hpp"
#include "test_support.hpp"

using namespace codeperturb;
using namespace codeperturb::metrics;

namespace {

std::string repeat(std::string_view s, int n) {
  std::string out;
  for (int i = 0; i < n; ++i) out += s;
  return out;
}

corpus::Record rec(std::string id, std::string response) {
  corpus::Record r;
  r.id = std::move(id);
  r.instruction = "i";
  r.response = std::move(response);
  r.language = "Python";
  return r;
}

// Independent count: word runs or single non-space bytes.
std::size_t regex_count(const std::string& text) {
  static const std::regex token(R"([A-Za-z0-9_\x80-\xff]+|[^\s])");
  return static_cast<std::size_t>(
      std::distance(std::sregex_iterator(text.begin(), text.end(), token), std::sregex_iterator()));
}

struct Row {
  PerturbationKind kind;
  const char* ss;
  const char* ecs;
  const char* rid;
  const char* hi;
};

// The appendix axes table, row by row.
const std::vector<Row> kAxes = {
    {PerturbationKind::kWhitespaceRemoval, "Structural", "Broken syntax", "Moderate-reduced", "Medium"},
    {PerturbationKind::kPseudocode, "Structural", "Algorithmic", "Strong-reduced", "High"},
    {PerturbationKind::kImaginary, "Structural", "Broken syntax", "Moderate-reduced", "Low"},
    {PerturbationKind::kStepByStep, "Structural", "NL procedure", "Moderate-reduced", "High"},
    {PerturbationKind::kFlowchart, "Structural", "Graphical", "Strong-reduced", "High"},
    {PerturbationKind::kCommentRemoval, "Semantic", "Runnable", "Moderate-reduced", "Medium"},
    {PerturbationKind::kVariableRenaming, "Semantic", "Runnable", "Increased", "Medium"},
    {PerturbationKind::kKeywordNonsense, "Semantic", "Broken syntax", "Increased", "Low"},
    {PerturbationKind::kKeywordNonEnglish, "Semantic", "Broken syntax", "Increased", "Low"},
    {PerturbationKind::kCommentSwapGlobal, "Semantic", "Runnable", "Near-baseline", "Low"},
    {PerturbationKind::kCommentSwapLocal, "Semantic", "Runnable", "Near-baseline", "Low"},
    {PerturbationKind::kCommentEnhance, "Semantic", "Runnable", "Increased", "High"},
    {PerturbationKind::kCommentObfuscate, "Semantic", "Runnable", "Increased", "Low"},
};

// Report labels hyphenate the two-word table entries.
std::string hyphenate(std::string s) {
  std::replace(s.begin(), s.end(), ' ', '-');
  return s;
}

}  // namespace

TEST_SUITE("metrics") {
  TEST_CASE("tags_for matches the axes table") {
    REQUIRE(kAxes.size() == kAllPerturbations.size());
    for (const auto& row : kAxes) {
      const auto tags = tags_for(row.kind);
      CHECK_MESSAGE(to_string(tags.ss) == row.ss, to_string(row.kind));
      CHECK_MESSAGE(to_string(tags.ecs) == hyphenate(row.ecs), to_string(row.kind));
      CHECK_MESSAGE(to_string(tags.rid) == row.rid, to_string(row.kind));
      CHECK_MESSAGE(to_string(tags.hi) == row.hi, to_string(row.kind));
    }
  }

  TEST_CASE("group_of follows the language grouping") {
    CHECK(group_of("Python") == LanguageGroup::kHighScripting);
    CHECK(group_of("PHP") == LanguageGroup::kHighScripting);
    CHECK(group_of("JavaScript") == LanguageGroup::kHighScripting);
    CHECK(group_of("TypeScript") == LanguageGroup::kHighScripting);
    CHECK(group_of("Java") == LanguageGroup::kIntermediate);
    CHECK(group_of("C#") == LanguageGroup::kIntermediate);
    CHECK(group_of("C") == LanguageGroup::kLowSystem);
    CHECK(group_of("C++") == LanguageGroup::kLowSystem);
    CHECK(group_of("Rust") == LanguageGroup::kLowSystem);
    CHECK(group_of("Go") == LanguageGroup::kLowSystem);
    CHECK_THROWS_AS(group_of("Fortran"), ValidationError);
  }

  TEST_CASE("default tokenizer") {
    CHECK(count_tokens("") == 0);
    CHECK(count_tokens("x=1") == 3);
    CHECK(count_tokens("  foo_bar(12)  \n") == 4);
    CHECK(count_tokens("caf\xc3\xa9 ok") == 2);
    CHECK_THROWS_AS(count_tokens("x", "gpt"), ValidationError);
    for (const auto& s : testing::snippets()) CHECK(count_tokens(s.text) == regex_count(s.text));
  }

  TEST_CASE("hand-counted toy corpus") {
    // Baseline: 10 records of 100 tokens. "x=1;" is 4 tokens, "word " is 1.
    // Perturbed: 10 records of 55 tokens. "a.b " is 3 tokens, "hello world " 2.
    std::vector<corpus::Record> base, pert;
    for (int i = 0; i < 10; ++i) {
      const auto id = std::to_string(i);
      if (i % 2 == 0) {
        base.push_back(rec(id, repeat("x=1;", 25)));
        pert.push_back(rec(id, repeat("a.b ", 18) + "z"));
      } else {
        base.push_back(rec(id, repeat("word ", 100)));
        pert.push_back(rec(id, repeat("hello world ", 27) + "!"));
      }
    }
    TokenizerRegistry registry;
    CHECK(corpus_tokens(base, registry) == 1000);
    CHECK(corpus_tokens(pert, registry) == 550);
    CHECK(std::abs(relative_density(pert, base) - 0.55) <= 1e-12);
    CHECK(relative_density(base, base) == 1.0);

    auto doubled_p = pert, doubled_b = base;
    doubled_p.insert(doubled_p.end(), pert.begin(), pert.end());
    doubled_b.insert(doubled_b.end(), base.begin(), base.end());
    CHECK(relative_density(doubled_p, doubled_b) == relative_density(pert, base));

    CHECK_THROWS_AS(relative_density(pert, {rec("e", "  ")}), ValidationError);
  }

  TEST_CASE("comment removal never raises density") {
    std::vector<corpus::Record> base;
    for (const auto& s : testing::snippets()) {
      corpus::Record r = rec(s.path, s.text);
      r.language = s.language;
      base.push_back(r);
    }
    auto removed = rules::perturb_corpus(base, PerturbationKind::kCommentRemoval, 0, {});
    CHECK(relative_density(removed.perturbed, base) <= 1.0);
    for (std::size_t i = 0; i < base.size(); ++i) {
      CHECK(count_tokens(removed.perturbed[i].response) <= count_tokens(base[i].response));
    }
  }

  TEST_CASE("external tokenizer command") {
    TokenizerRegistry registry;
    registry.register_command("words", "wc -w");
    CHECK(registry.contains("words"));
    CHECK(registry.count("one two three", "words") == 3);
    CHECK(registry.count("x=1", "default") == 3);
    registry.register_command("broken", "echo not-a-number");
    CHECK_THROWS_AS(registry.count("x", "broken"), IoError);
    CHECK_THROWS_AS(registry.count("x", "missing"), ValidationError);
    CHECK_THROWS_AS(registry.register_command("default", "wc -w"), ValidationError);
  }

  TEST_CASE("density classes") {
    CHECK(classify_density(0.3) == DensityClass::kStrongReduced);
    CHECK(classify_density(0.5) == DensityClass::kModerateReduced);
    CHECK(classify_density(0.94) == DensityClass::kModerateReduced);
    CHECK(classify_density(0.95) == DensityClass::kNearBaseline);
    CHECK(classify_density(1.05) == DensityClass::kNearBaseline);
    CHECK(classify_density(1.2) == DensityClass::kIncreased);
  }

  TEST_CASE("aggregate") {
    auto s = aggregate({1, 2, 3});
    CHECK(s.mean == doctest::Approx(2.0));
    CHECK(std::abs(s.stderr_ - 0.5774) <= 1e-4);
    auto one = aggregate({5});
    CHECK(one.mean == 5.0);
    CHECK(one.stderr_ == 0.0);
    CHECK_THROWS_AS(aggregate({}), ValidationError);

    std::mt19937_64 rng(4);
    for (int round = 0; round < 100; ++round) {
      std::vector<double> v(1 + rng() % 20);
      for (auto& x : v) x = static_cast<double>(rng() % 1000) / 10.0;
      auto a = aggregate(v);
      CHECK(a.mean >= *std::min_element(v.begin(), v.end()) - 1e-9);
      CHECK(a.mean <= *std::max_element(v.begin(), v.end()) + 1e-9);
      CHECK(a.stderr_ >= 0.0);
    }

    auto by = aggregate_by({{"b", 1}, {"a", 2}, {"b", 3}});
    REQUIRE(by.size() == 2);
    CHECK(by.at("a").n == 1);
    CHECK(by.at("b").mean == 2.0);
  }
}
