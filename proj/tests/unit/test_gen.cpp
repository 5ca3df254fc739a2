#include <doctest.h>

#include "codeperturb/error.hpp"
#include "codeperturb/gen.hpp"
#include "test_support.hpp"

using namespace codeperturb;
using namespace std::chrono_literals;

namespace {

// Naive oracle: replace each "{slot}" occurrence left to right.
std::string substitute(std::string text, const std::map<std::string, std::string>& values) {
  for (const auto& [slot, value] : values) {
    const std::string marker = "{" + slot + "}";
    std::size_t pos = 0;
    while ((pos = text.find(marker, pos)) != std::string::npos) {
      // "{{slot}}" is an output placeholder, not a slot.
      if (pos > 0 && text[pos - 1] == '{') {
        pos += marker.size();
        continue;
      }
      text.replace(pos, marker.size(), value);
      pos += value.size();
    }
  }
  return text;
}

provider::ProviderConfig quick() {
  provider::ProviderConfig c;
  c.backoff = 1ms;
  return c;
}

corpus::Record record(std::string id, std::string response = "def f():\n    return 1\n") {
  corpus::Record r;
  r.id = std::move(id);
  r.instruction = "Return one.";
  r.response = std::move(response);
  r.language = "Python";
  return r;
}

}  // namespace

TEST_SUITE("gen") {
  TEST_CASE("templates byte-match the goldens") {
    const auto names = gen::template_names();
    CHECK(names.size() == 9);
    for (const auto& name : names) {
      const auto golden = testing::slurp(testing::test_root() / "golden" / "prompts" / (name + ".txt"));
      CHECK_MESSAGE(gen::prompt_template(name) == golden, name);
    }
    CHECK_THROWS_AS(gen::prompt_template("haiku"), ValidationError);
  }

  TEST_CASE("rendering equals golden with slots filled") {
    const std::map<std::string, std::string> values = {{"instruction", "Reverse a string."},
                                                       {"response", "print(s[::-1])"}};
    for (auto kind : kAllPerturbations) {
      if (is_rule_based(kind)) continue;
      const auto golden = testing::slurp(testing::test_root() / "golden" / "prompts" /
                                         (std::string(to_string(kind)) + ".txt"));
      const auto rendered = gen::render_prompt(kind, values.at("instruction"), values.at("response"));
      CHECK_MESSAGE(rendered == substitute(golden, values), to_string(kind));
    }
  }

  TEST_CASE("prompt content") {
    CHECK(gen::render_prompt(PerturbationKind::kPseudocode, "i", "r").find("IF ... THEN ... ENDIF") !=
          std::string::npos);
    CHECK(gen::render_prompt(PerturbationKind::kStepByStep, "i", "r")
              .find("step-by-step implementation guide") != std::string::npos);
    CHECK(gen::render_prompt(PerturbationKind::kFlowchart, "i", "r").find("```mermaid") !=
          std::string::npos);
    const auto empty = gen::render_prompt(PerturbationKind::kImaginary, "", "");
    CHECK(empty.find("{instruction}") == std::string::npos);
    CHECK(empty.find("{response}") == std::string::npos);
    CHECK_THROWS_AS(gen::render_prompt(PerturbationKind::kCommentRemoval, "i", "r"), ValidationError);
  }

  TEST_CASE("render_template leaves output placeholders and unknown slots") {
    CHECK(gen::render_template("{a} {{a}} {b}", {{"a", "X"}}) == "X {{a}} {b}");
    CHECK(gen::render_template("{a}{a}", {{"a", "{a}"}}) == "{a}{a}");
  }

  TEST_CASE("invalid replies") {
    CHECK(gen::is_invalid_response("invalid"));
    CHECK(gen::is_invalid_response("Invalid."));
    CHECK(gen::is_invalid_response("  \"INVALID\"\n"));
    CHECK(gen::is_invalid_response("```\ninvalid\n```"));
    CHECK_FALSE(gen::is_invalid_response("def invalid(): pass"));
    CHECK_FALSE(gen::is_invalid_response(""));
  }

  TEST_CASE("validate_output shapes") {
    using K = PerturbationKind;
    CHECK(gen::validate_output(K::kFlowchart, "flowchart TD\n A([Start]) --> B([End])").has_value());
    CHECK_FALSE(gen::validate_output(K::kFlowchart, "```mermaid\nflowchart TD\n A([Start]) --> B([End])\n```")
                    .has_value());
    CHECK(gen::validate_output(K::kFlowchart, "```mermaid\nflowchart TD\n A[Begin] --> B[Stop]\n```")
              .has_value());
    CHECK_FALSE(gen::validate_output(K::kStepByStep, "1. Read.\n2. Loop.\n3. Print.").has_value());
    CHECK(gen::validate_output(K::kStepByStep, "1. Read.\n3. Print.").has_value());
    CHECK(gen::validate_output(K::kStepByStep, "First, read.").has_value());
    CHECK(gen::validate_output(K::kPseudocode, "").has_value());
    CHECK(gen::validate_output(K::kPseudocode, "invalid").has_value());
    CHECK_FALSE(gen::validate_output(K::kPseudocode, "FUNCTION f\nEND").has_value());
  }

  TEST_CASE("apply_generative: success keeps id and original") {
    auto mock = provider::MockProvider::from_json(R"({"default": "FUNCTION f()\n  RETURN 1\nEND"})");
    provider::Session session(*mock, quick());
    auto r = record("a");
    auto out = gen::apply_generative(r, PerturbationKind::kPseudocode, session);
    REQUIRE(out.record.has_value());
    CHECK_FALSE(out.rejected.has_value());
    CHECK(out.record->id == "a");
    CHECK(out.record->perturbation == PerturbationKind::kPseudocode);
    CHECK(out.record->meta.at("original_response") == r.response);
    CHECK(out.record->meta.at("attempts") == "1");
  }

  TEST_CASE("apply_generative: retries until valid, then rejects") {
    auto seq = provider::MockProvider::from_json(
        R"({"rules": [{"contains": "step-by-step", "sequence": ["Step one: read", "1. Read.\n2. Print."]}]})");
    provider::Session s1(*seq, quick());
    auto ok = gen::apply_generative(record("a"), PerturbationKind::kStepByStep, s1);
    REQUIRE(ok.record.has_value());
    CHECK(ok.record->meta.at("attempts") == "2");

    auto bad = provider::MockProvider::from_json(R"({"default": "invalid"})");
    provider::Session s2(*bad, quick());
    gen::GenOptions options;
    options.max_validation_attempts = 3;
    auto no = gen::apply_generative(record("b"), PerturbationKind::kImaginary, s2, options);
    REQUIRE(no.rejected.has_value());
    CHECK(no.rejected->reason.find("3 attempts") != std::string::npos);
    CHECK(bad->request_count() == 3);

    auto empty = gen::apply_generative(record("c", "  \n"), PerturbationKind::kImaginary, s2, options);
    REQUIRE(empty.rejected.has_value());
    CHECK(empty.rejected->reason == "empty response");
  }

  TEST_CASE("corpus conservation and reproducibility") {
    auto records = corpus::read_jsonl(testing::fixture("corpus50.jsonl"));
    const auto fixture = testing::fixture("mock_pipeline.json");
    for (auto kind : kAllPerturbations) {
      if (is_rule_based(kind)) continue;
      auto m1 = provider::MockProvider::from_file(fixture);
      auto m2 = provider::MockProvider::from_file(fixture);
      provider::Session s1(*m1, quick()), s2(*m2, quick());
      gen::GenOptions one, eight;
      one.jobs = 1;
      eight.jobs = 8;
      auto a = gen::perturb_corpus(records, kind, s1, one);
      auto b = gen::perturb_corpus(records, kind, s2, eight);
      CHECK(a.perturbed.size() + a.rejected.size() == records.size());
      CHECK(a.perturbed == b.perturbed);
      REQUIRE(a.rejected.size() == b.rejected.size());
      for (std::size_t i = 0; i < a.rejected.size(); ++i) {
        CHECK(a.rejected[i].record == b.rejected[i].record);
      }
    }
  }

  TEST_CASE("provider errors propagate") {
    auto mock = provider::MockProvider::from_json(R"({"rules": [{"contains": "", "error": "auth"}]})");
    provider::Session session(*mock, quick());
    CHECK_THROWS_AS(gen::apply_generative(record("a"), PerturbationKind::kFlowchart, session), AuthError);
  }
}
