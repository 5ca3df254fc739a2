#include "codeperturb/metrics.hpp"

#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <numeric>
#include <random>

#include "codeperturb/error.hpp"
#include "codeperturb/language.hpp"
#include "codeperturb/util.hpp"

namespace codeperturb::metrics {

std::string_view to_string(StructureAxis v) {
  return v == StructureAxis::kStructural ? "Structural" : "Semantic";
}

std::string_view to_string(Explicitness v) {
  switch (v) {
    case Explicitness::kRunnable: return "Runnable";
    case Explicitness::kBrokenSyntax: return "Broken-syntax";
    case Explicitness::kAlgorithmic: return "Algorithmic";
    case Explicitness::kGraphical: return "Graphical";
    case Explicitness::kNlProcedure: return "NL-procedure";
  }
  return "";
}

std::string_view to_string(DensityClass v) {
  switch (v) {
    case DensityClass::kStrongReduced: return "Strong-reduced";
    case DensityClass::kModerateReduced: return "Moderate-reduced";
    case DensityClass::kNearBaseline: return "Near-baseline";
    case DensityClass::kIncreased: return "Increased";
  }
  return "";
}

std::string_view to_string(Interpretability v) {
  switch (v) {
    case Interpretability::kLow: return "Low";
    case Interpretability::kMedium: return "Medium";
    case Interpretability::kHigh: return "High";
  }
  return "";
}

AxisTags tags_for(PerturbationKind kind) {
  using K = PerturbationKind;
  constexpr auto St = StructureAxis::kStructural;
  constexpr auto Se = StructureAxis::kSemantic;
  constexpr auto Run = Explicitness::kRunnable;
  constexpr auto Broken = Explicitness::kBrokenSyntax;
  constexpr auto Strong = DensityClass::kStrongReduced;
  constexpr auto Moderate = DensityClass::kModerateReduced;
  constexpr auto Near = DensityClass::kNearBaseline;
  constexpr auto Up = DensityClass::kIncreased;
  constexpr auto Low = Interpretability::kLow;
  constexpr auto Med = Interpretability::kMedium;
  constexpr auto High = Interpretability::kHigh;

  switch (kind) {
    case K::kWhitespaceRemoval: return {St, Broken, Moderate, Med};
    case K::kPseudocode: return {St, Explicitness::kAlgorithmic, Strong, High};
    case K::kImaginary: return {St, Broken, Moderate, Low};
    case K::kStepByStep: return {St, Explicitness::kNlProcedure, Moderate, High};
    case K::kFlowchart: return {St, Explicitness::kGraphical, Strong, High};
    case K::kCommentRemoval: return {Se, Run, Moderate, Med};
    case K::kVariableRenaming: return {Se, Run, Up, Med};
    case K::kKeywordNonsense: return {Se, Broken, Up, Low};
    case K::kKeywordNonEnglish: return {Se, Broken, Up, Low};
    case K::kCommentSwapGlobal: return {Se, Run, Near, Low};
    case K::kCommentSwapLocal: return {Se, Run, Near, Low};
    case K::kCommentEnhance: return {Se, Run, Up, High};
    case K::kCommentObfuscate: return {Se, Run, Up, Low};
  }
  throw ValidationError("unknown perturbation kind");
}

std::string_view to_string(LanguageGroup group) {
  switch (group) {
    case LanguageGroup::kHighScripting: return "high_scripting";
    case LanguageGroup::kIntermediate: return "intermediate";
    case LanguageGroup::kLowSystem: return "low_system";
  }
  return "";
}

LanguageGroup group_of(std::string_view language) {
  auto canonical = canonical_language(language);
  if (!canonical) throw ValidationError("unknown language '" + std::string(language) + "'");
  const auto& name = *canonical;
  if (name == "Python" || name == "PHP" || name == "JavaScript" || name == "TypeScript") {
    return LanguageGroup::kHighScripting;
  }
  if (name == "Java" || name == "C#") return LanguageGroup::kIntermediate;
  return LanguageGroup::kLowSystem;
}

// ---------------------------------------------------------------------------
// Tokens
// ---------------------------------------------------------------------------

namespace {

bool is_word_byte(unsigned char c) {
  return c >= 0x80 || c == '_' || (c >= '0' && c <= '9') || (c >= 'a' && c <= 'z') ||
         (c >= 'A' && c <= 'Z');
}

}  // namespace

std::size_t count_tokens_default(std::string_view text) {
  std::size_t count = 0;
  std::size_t i = 0;
  while (i < text.size()) {
    const auto c = static_cast<unsigned char>(text[i]);
    if (is_space(static_cast<char>(c))) {
      ++i;
    } else if (is_word_byte(c)) {
      while (i < text.size() && is_word_byte(static_cast<unsigned char>(text[i]))) ++i;
      ++count;
    } else {
      ++i;
      ++count;
    }
  }
  return count;
}

TokenizerRegistry::TokenizerRegistry() = default;

void TokenizerRegistry::register_command(std::string id, std::string command) {
  if (id == "default") throw ValidationError("tokenizer id 'default' is reserved");
  commands_[std::move(id)] = std::move(command);
}

bool TokenizerRegistry::contains(std::string_view id) const {
  return id == "default" || commands_.find(id) != commands_.end();
}

std::size_t TokenizerRegistry::count(std::string_view text, std::string_view id) const {
  if (id == "default") return count_tokens_default(text);
  auto it = commands_.find(id);
  if (it == commands_.end()) throw ValidationError("unknown tokenizer '" + std::string(id) + "'");

  thread_local std::mt19937_64 rng(std::random_device{}());
  const auto input = std::filesystem::temp_directory_path() /
                     ("codeperturb-tok-" + std::to_string(rng()) + ".txt");
  {
    std::ofstream out(input, std::ios::binary);
    out.write(text.data(), static_cast<std::streamsize>(text.size()));
    if (!out) throw IoError("cannot write tokenizer input " + input.string());
  }
  const std::string command = it->second + " < '" + input.string() + "'";
  FILE* pipe = ::popen(command.c_str(), "r");
  if (pipe == nullptr) {
    std::filesystem::remove(input);
    throw IoError("cannot run tokenizer command: " + it->second);
  }
  std::string output;
  char buffer[256];
  while (std::fgets(buffer, sizeof buffer, pipe) != nullptr) output += buffer;
  const int status = ::pclose(pipe);
  std::filesystem::remove(input);
  if (status != 0) throw IoError("tokenizer command failed: " + it->second);
  const auto trimmed = trim(output);
  try {
    std::size_t used = 0;
    const auto value = std::stoull(std::string(trimmed), &used);
    if (used != trimmed.size()) throw std::invalid_argument("trailing output");
    return static_cast<std::size_t>(value);
  } catch (const std::exception&) {
    throw IoError("tokenizer '" + std::string(id) + "' printed '" + std::string(trimmed) +
                  "', expected a count");
  }
}

std::size_t count_tokens(std::string_view text, std::string_view tokenizer) {
  if (tokenizer != "default") throw ValidationError("unknown tokenizer '" + std::string(tokenizer) + "'");
  return count_tokens_default(text);
}

std::uint64_t corpus_tokens(const std::vector<corpus::Record>& records,
                            const TokenizerRegistry& registry, std::string_view tokenizer,
                            std::size_t jobs) {
  if (!registry.contains(tokenizer)) {
    throw ValidationError("unknown tokenizer '" + std::string(tokenizer) + "'");
  }
  auto counts = parallel_map(records.size(), jobs, [&](std::size_t i) {
    return static_cast<std::uint64_t>(registry.count(records[i].response, tokenizer));
  });
  return std::accumulate(counts.begin(), counts.end(), std::uint64_t{0});
}

double relative_density(const std::vector<corpus::Record>& perturbed,
                        const std::vector<corpus::Record>& baseline,
                        const TokenizerRegistry& registry, std::string_view tokenizer,
                        std::size_t jobs) {
  const auto base = corpus_tokens(baseline, registry, tokenizer, jobs);
  if (base == 0) throw ValidationError("baseline corpus has no tokens");
  const auto pert = corpus_tokens(perturbed, registry, tokenizer, jobs);
  return static_cast<double>(pert) / static_cast<double>(base);
}

double relative_density(const std::vector<corpus::Record>& perturbed,
                        const std::vector<corpus::Record>& baseline) {
  return relative_density(perturbed, baseline, TokenizerRegistry{});
}

DensityClass classify_density(double ratio) {
  if (ratio < 0.5) return DensityClass::kStrongReduced;
  if (ratio < 0.95) return DensityClass::kModerateReduced;
  if (ratio <= 1.05) return DensityClass::kNearBaseline;
  return DensityClass::kIncreased;
}

// ---------------------------------------------------------------------------
// Aggregation
// ---------------------------------------------------------------------------

Summary aggregate(const std::vector<double>& values) {
  if (values.empty()) throw ValidationError("cannot aggregate an empty group");
  Summary s;
  s.n = values.size();
  s.mean = std::accumulate(values.begin(), values.end(), 0.0) / static_cast<double>(s.n);
  if (s.n > 1) {
    double sq = 0.0;
    for (double v : values) sq += (v - s.mean) * (v - s.mean);
    const double sd = std::sqrt(sq / static_cast<double>(s.n - 1));
    s.stderr_ = sd / std::sqrt(static_cast<double>(s.n));
  }
  return s;
}

std::map<std::string, Summary> aggregate_by(const std::vector<std::pair<std::string, double>>& keyed) {
  std::map<std::string, std::vector<double>> groups;
  for (const auto& [key, value] : keyed) groups[key].push_back(value);
  std::map<std::string, Summary> out;
  for (const auto& [key, values] : groups) out[key] = aggregate(values);
  return out;
}

}  // namespace codeperturb::metrics
