#pragma once

#include <cstddef>
#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "codeperturb/corpus.hpp"
#include "codeperturb/perturbation.hpp"

namespace codeperturb::metrics {

// ---------------------------------------------------------------------------
// Taxonomy
// ---------------------------------------------------------------------------

enum class StructureAxis { kStructural, kSemantic };
enum class Explicitness { kRunnable, kBrokenSyntax, kAlgorithmic, kGraphical, kNlProcedure };
enum class DensityClass { kStrongReduced, kModerateReduced, kNearBaseline, kIncreased };
enum class Interpretability { kLow, kMedium, kHigh };

struct AxisTags {
  StructureAxis ss;
  Explicitness ecs;
  DensityClass rid;
  Interpretability hi;

  friend bool operator==(const AxisTags&, const AxisTags&) = default;
};

// Labels as printed in reports: "Structural", "Broken-syntax",
// "Moderate-reduced", "Medium", ...
std::string_view to_string(StructureAxis v);
std::string_view to_string(Explicitness v);
std::string_view to_string(DensityClass v);
std::string_view to_string(Interpretability v);

AxisTags tags_for(PerturbationKind kind);

enum class LanguageGroup { kHighScripting, kIntermediate, kLowSystem };

std::string_view to_string(LanguageGroup group);  // "high_scripting", ...
// Throws ValidationError for names canonical_language() does not accept.
LanguageGroup group_of(std::string_view language);

// ---------------------------------------------------------------------------
// Tokens and density
// ---------------------------------------------------------------------------

// Built-in tokenizer "default": a maximal run of ASCII letters, digits and
// '_' (bytes >= 0x80 count as letters) is one token, every other
// non-whitespace byte is one token, whitespace separates.
std::size_t count_tokens_default(std::string_view text);

// Tokenizers by id. "default" is always present; external ones run a command
// that reads text on stdin and prints a count on stdout.
class TokenizerRegistry {
 public:
  TokenizerRegistry();
  void register_command(std::string id, std::string command);
  bool contains(std::string_view id) const;
  // Throws ValidationError for unknown ids, IoError if a command fails.
  std::size_t count(std::string_view text, std::string_view id) const;

 private:
  std::map<std::string, std::string, std::less<>> commands_;
};

std::size_t count_tokens(std::string_view text, std::string_view tokenizer = "default");

// Sum of response tokens over a corpus.
std::uint64_t corpus_tokens(const std::vector<corpus::Record>& records,
                            const TokenizerRegistry& registry, std::string_view tokenizer = "default",
                            std::size_t jobs = 1);

// tokens(perturbed responses) / tokens(baseline responses). Throws
// ValidationError when the baseline has no tokens.
double relative_density(const std::vector<corpus::Record>& perturbed,
                        const std::vector<corpus::Record>& baseline,
                        const TokenizerRegistry& registry, std::string_view tokenizer = "default",
                        std::size_t jobs = 1);
double relative_density(const std::vector<corpus::Record>& perturbed,
                        const std::vector<corpus::Record>& baseline);

// Class of a measured ratio: < 0.5 strong, < 0.95 moderate, <= 1.05 near
// baseline, otherwise increased.
DensityClass classify_density(double ratio);

// ---------------------------------------------------------------------------
// Aggregation
// ---------------------------------------------------------------------------

struct Summary {
  double mean = 0.0;
  double stderr_ = 0.0;  // sample standard deviation / sqrt(n); 0 for n = 1
  std::size_t n = 0;
};

// Throws ValidationError on an empty input.
Summary aggregate(const std::vector<double>& values);

// One summary per key, keys sorted.
std::map<std::string, Summary> aggregate_by(const std::vector<std::pair<std::string, double>>& keyed);

}  // namespace codeperturb::metrics
