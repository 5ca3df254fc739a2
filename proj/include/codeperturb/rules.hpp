#pragma once

#include <cstddef>
#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "codeperturb/corpus.hpp"
#include "codeperturb/lexspec.hpp"
#include "codeperturb/perturbation.hpp"

namespace codeperturb::rules {

// ---------------------------------------------------------------------------
// Whitespace
// ---------------------------------------------------------------------------

enum class WhitespaceMode {
  kAggressive,  // delete every whitespace token, newlines included
  kTokenSafe,   // keep one newline per line break and a space where tokens would merge
};

std::string_view to_string(WhitespaceMode mode);
std::optional<WhitespaceMode> parse_whitespace_mode(std::string_view name);

std::string remove_whitespace(std::string_view source, const lex::LanguageSpec& spec,
                              WhitespaceMode mode = WhitespaceMode::kAggressive);

// ---------------------------------------------------------------------------
// Variable renaming
// ---------------------------------------------------------------------------

// original -> placeholder, in placeholder index order. PHP variables keep
// their sigil ("$count" -> "$var_0").
struct RenameMap {
  std::vector<std::pair<std::string, std::string>> entries;

  std::size_t size() const { return entries.size(); }
  bool empty() const { return entries.empty(); }
  std::optional<std::string> placeholder_for(std::string_view original) const;
};

struct Renamed {
  std::string text;
  RenameMap map;
};

Renamed rename_variables(std::string_view source, const lex::LanguageSpec& spec);

// Renames several pieces of one response with a single shared map.
std::pair<std::vector<std::string>, RenameMap> rename_variables(
    const std::vector<std::string_view>& pieces, const lex::LanguageSpec& spec);

// Replaces placeholder identifiers by their originals, token by token.
std::string invert_renaming(std::string_view renamed, const RenameMap& map,
                            const lex::LanguageSpec& spec);

// ---------------------------------------------------------------------------
// Keyword replacement
// ---------------------------------------------------------------------------

enum class LexiconKind { kNonsense, kNonEnglish };

struct KeywordLexicon {
  LexiconKind kind = LexiconKind::kNonsense;
  std::vector<std::string> words;
};

std::string_view to_string(LexiconKind kind);

// One word per line; '#' lines and blank lines are skipped. Throws
// ValidationError on duplicates or words containing whitespace.
KeywordLexicon parse_lexicon(std::string_view text, LexiconKind kind);
const KeywordLexicon& shipped_lexicon(LexiconKind kind);

using KeywordMap = std::vector<std::pair<std::string, std::string>>;

// The n-th keyword of the spec paired with the n-th lexicon word. Throws
// ValidationError if the lexicon is shorter than the keyword list.
KeywordMap keyword_mapping(const lex::LanguageSpec& spec, const KeywordLexicon& lexicon);

struct KeywordReplaced {
  std::string text;
  KeywordMap used;  // entries of the mapping that occurred, in mapping order
};

KeywordReplaced replace_keywords(std::string_view source, const lex::LanguageSpec& spec,
                                 const KeywordLexicon& lexicon);

// `spec` with its keyword list swapped for the mapped words, for re-lexing
// replaced output.
lex::LanguageSpec with_mapped_keywords(const lex::LanguageSpec& spec, const KeywordMap& mapping);

// ---------------------------------------------------------------------------
// Comments
// ---------------------------------------------------------------------------

// Deletes comment tokens. A line left empty or whitespace-only by a deletion
// is removed together with its line break.
std::string remove_comments(std::string_view source, const lex::LanguageSpec& spec);

// Re-fits `body` into the delimiters of an existing comment token. A
// multi-line body in a line slot turns the slot into the language's first
// block form; without one, newlines are flattened to spaces. A block slot
// that ends its line becomes a line comment when the body would close the
// block early; otherwise close delimiters inside the body are broken up.
std::string refit_comment(std::string_view slot, std::string_view body,
                          const lex::LanguageSpec& spec, bool ends_line = false);

struct CommentPool {
  std::vector<std::string> bodies;      // unique, in corpus order
  std::vector<std::string> source_ids;  // id of the record each body came from
};

// Collects the nonempty comment bodies of every code segment in the corpus.
// Records without a known language are skipped.
CommentPool build_comment_pool(const std::vector<corpus::Record>& records);

std::string swap_comments_local(std::string_view source, const lex::LanguageSpec& spec,
                                std::uint64_t seed);
std::vector<std::string> swap_comments_local(const std::vector<std::string_view>& pieces,
                                             const lex::LanguageSpec& spec, std::uint64_t seed);

// Throws ValidationError if the source has comments and the pool is empty.
std::string swap_comments_global(std::string_view source, const lex::LanguageSpec& spec,
                                 const CommentPool& pool, std::uint64_t seed);

// ---------------------------------------------------------------------------
// Whole responses and corpora
// ---------------------------------------------------------------------------

struct RuleOptions {
  WhitespaceMode whitespace_mode = WhitespaceMode::kAggressive;
  const CommentPool* pool = nullptr;  // required for swap_comments_global
};

struct RuleOutput {
  std::string text;
  std::map<std::string, std::string> meta;
};

// Applies a rule-based perturbation to the code segments of a response.
// `seed` is used as given; see record_seed for the per-record derivation.
RuleOutput perturb_text(std::string_view response, std::string_view language,
                        PerturbationKind kind, std::uint64_t seed,
                        const RuleOptions& options = {});

// derive_seed(global_seed, "<kind>/<record id>").
std::uint64_t record_seed(std::uint64_t global_seed, PerturbationKind kind, std::string_view id);

struct CorpusResult {
  std::vector<corpus::Record> perturbed;
  std::vector<corpus::Rejected> rejected;
};

// Perturbs every record; records without a usable language are rejected.
// Output order follows input order for any `jobs`.
CorpusResult perturb_corpus(const std::vector<corpus::Record>& records, PerturbationKind kind,
                            std::uint64_t global_seed, const RuleOptions& options,
                            std::size_t jobs = 1);

}  // namespace codeperturb::rules
