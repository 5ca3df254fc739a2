#include "codeperturb/rules.hpp"

#include <algorithm>
#include <random>
#include <set>
#include <unordered_map>
#include <unordered_set>

#include <json.hpp>

#include "codeperturb/embedded_data.hpp"
#include "codeperturb/error.hpp"
#include "codeperturb/language.hpp"
#include "codeperturb/util.hpp"

namespace codeperturb::rules {

using lex::LanguageSpec;
using lex::Token;
using lex::TokenKind;

namespace {

bool significant(const Token& t) {
  return t.kind != TokenKind::kWhitespace && t.kind != TokenKind::kComment;
}

std::vector<const Token*> significant_tokens(const std::vector<Token>& tokens) {
  std::vector<const Token*> out;
  for (const auto& t : tokens) {
    if (significant(t)) out.push_back(&t);
  }
  return out;
}

bool contains(const std::vector<std::string>& list, std::string_view word) {
  return std::find(list.begin(), list.end(), word) != list.end();
}

std::string keyword_key(const LanguageSpec& spec, std::string_view word) {
  return spec.keywords_case_insensitive ? to_lower_ascii(word) : std::string(word);
}

}  // namespace

// ---------------------------------------------------------------------------
// Whitespace
// ---------------------------------------------------------------------------

std::string_view to_string(WhitespaceMode mode) {
  return mode == WhitespaceMode::kAggressive ? "aggressive" : "token_safe";
}

std::optional<WhitespaceMode> parse_whitespace_mode(std::string_view name) {
  if (name == "aggressive") return WhitespaceMode::kAggressive;
  if (name == "token_safe") return WhitespaceMode::kTokenSafe;
  return std::nullopt;
}

namespace {

// True when `a` immediately followed by `b` still lexes as those two tokens.
bool stays_apart(const Token& a, const Token& b, const LanguageSpec& spec) {
  std::string joined;
  joined.reserve(a.text.size() + b.text.size());
  joined.append(a.text).append(b.text);
  const auto tokens = lex::lex(joined, spec);
  return tokens.size() == 2 && tokens[0].kind == a.kind && tokens[0].text == a.text &&
         tokens[1].kind == b.kind;
}

}  // namespace

std::string remove_whitespace(std::string_view source, const LanguageSpec& spec,
                              WhitespaceMode mode) {
  const auto tokens = lex::lex(source, spec);
  std::string out;
  out.reserve(source.size());
  if (mode == WhitespaceMode::kAggressive) {
    for (const auto& t : tokens) {
      if (t.kind != TokenKind::kWhitespace) out += t.text;
    }
    return out;
  }

  const Token* prev = nullptr;
  for (std::size_t i = 0; i < tokens.size(); ++i) {
    const auto& t = tokens[i];
    if (t.kind != TokenKind::kWhitespace) {
      out += t.text;
      prev = &t;
      continue;
    }
    if (prev == nullptr) continue;
    const Token* next = i + 1 < tokens.size() ? &tokens[i + 1] : nullptr;
    if (t.text.find('\n') != std::string_view::npos) {
      out += '\n';
    } else if (next != nullptr && !stays_apart(*prev, *next, spec)) {
      out += ' ';
    }
  }
  return out;
}

// ---------------------------------------------------------------------------
// Variable renaming
// ---------------------------------------------------------------------------

std::optional<std::string> RenameMap::placeholder_for(std::string_view original) const {
  for (const auto& [from, to] : entries) {
    if (from == original) return to;
  }
  return std::nullopt;
}

namespace {

// Receiver names stay as they are even when they appear as parameters.
const std::set<std::string, std::less<>> kReceivers = {"self", "cls", "this", "$this"};

// Definer keywords that open a parameter list.
const std::set<std::string, std::less<>> kFunctionDefiners = {"def", "function", "fn", "func"};

bool is_member_op(const Token& t, const LanguageSpec& spec) {
  return t.kind == TokenKind::kPunct && contains(spec.member_access, t.text);
}

bool is_definer(const Token& t, const LanguageSpec& spec) {
  if (t.kind != TokenKind::kKeyword) return false;
  const auto key = keyword_key(spec, t.text);
  return contains(spec.definers, key);
}

// Marks identifiers that are parameters of a function definition whose
// keyword sits at sig[k].
void mark_parameters(const std::vector<const Token*>& sig, std::size_t k,
                     std::set<std::string, std::less<>>& defined) {
  std::size_t open = k + 1;
  const std::size_t limit = std::min(sig.size(), k + 12);
  while (open < limit && sig[open]->text != "(") {
    const auto text = sig[open]->text;
    if (text == "{" || text == ";" || text == ":" || text == "=>") return;
    ++open;
  }
  if (open >= limit) return;
  int depth = 0;
  for (std::size_t j = open; j < sig.size(); ++j) {
    const auto text = sig[j]->text;
    if (text == "(" || text == "[" || text == "{") {
      ++depth;
    } else if (text == ")" || text == "]" || text == "}") {
      if (--depth == 0) return;
    } else if (depth == 1 && sig[j]->kind == TokenKind::kIdentifier && j + 1 < sig.size()) {
      const auto before = sig[j - 1]->text;
      const auto after = sig[j + 1]->text;
      const bool starts_param = before == "(" || before == "," || before == "*" || before == "**" ||
                                before == "&" || before == "..." || sig[j - 1]->kind == TokenKind::kKeyword;
      const bool ends_param = after == "," || after == ")" || after == ":" || after == "=";
      if (starts_param && ends_param && !kReceivers.count(sig[j]->text)) {
        defined.emplace(sig[j]->text);
      }
    }
  }
}

std::set<std::string, std::less<>> renamable_names(
    const std::vector<std::vector<Token>>& lexed, const LanguageSpec& spec) {
  std::set<std::string, std::less<>> defined;
  std::set<std::string, std::less<>> plain;
  for (const auto& tokens : lexed) {
    const auto sig = significant_tokens(tokens);
    for (std::size_t k = 0; k < sig.size(); ++k) {
      const Token& t = *sig[k];
      if (t.kind == TokenKind::kKeyword && kFunctionDefiners.count(keyword_key(spec, t.text))) {
        mark_parameters(sig, k, defined);
      }
      if (t.kind != TokenKind::kIdentifier) continue;
      if (spec.is_soft_keyword(t.text)) continue;
      const bool member = k > 0 && is_member_op(*sig[k - 1], spec);
      if (member) continue;

      const bool after_definer = k > 0 && is_definer(*sig[k - 1], spec);
      const bool assigned =
          k + 1 < sig.size() && (sig[k + 1]->text == "=" || sig[k + 1]->text == ":=") &&
          (k == 0 || sig[k - 1]->line < t.line || sig[k - 1]->text == ";" ||
           sig[k - 1]->text == "{" || sig[k - 1]->text == "}");
      if ((after_definer || assigned) && !kReceivers.count(t.text)) {
        defined.emplace(t.text);
      } else if (!spec.builtins.count(std::string(t.text)) && !kReceivers.count(t.text)) {
        plain.emplace(t.text);
      }
    }
  }
  defined.insert(plain.begin(), plain.end());
  return defined;
}

std::string placeholder(std::string_view original, std::size_t index) {
  std::string name = original.rfind('$', 0) == 0 ? "$" : "";
  return name + "var_" + std::to_string(index);
}

}  // namespace

std::pair<std::vector<std::string>, RenameMap> rename_variables(
    const std::vector<std::string_view>& pieces, const LanguageSpec& spec) {
  std::vector<std::vector<Token>> lexed;
  lexed.reserve(pieces.size());
  for (auto piece : pieces) lexed.push_back(lex::lex(piece, spec));
  const auto names = renamable_names(lexed, spec);

  RenameMap map;
  std::unordered_map<std::string, std::string> lookup;
  std::vector<std::string> out;
  out.reserve(pieces.size());
  for (std::size_t p = 0; p < pieces.size(); ++p) {
    std::string text;
    text.reserve(pieces[p].size());
    for (const auto& t : lexed[p]) {
      if (t.kind != TokenKind::kIdentifier || !names.count(t.text)) {
        text += t.text;
        continue;
      }
      std::string key(t.text);
      auto it = lookup.find(key);
      if (it == lookup.end()) {
        auto name = placeholder(key, map.entries.size());
        map.entries.emplace_back(key, name);
        it = lookup.emplace(key, std::move(name)).first;
      }
      text += it->second;
    }
    out.push_back(std::move(text));
  }
  return {std::move(out), std::move(map)};
}

Renamed rename_variables(std::string_view source, const LanguageSpec& spec) {
  auto [texts, map] = rename_variables(std::vector<std::string_view>{source}, spec);
  return {std::move(texts.front()), std::move(map)};
}

std::string invert_renaming(std::string_view renamed, const RenameMap& map,
                            const LanguageSpec& spec) {
  std::unordered_map<std::string_view, std::string_view> back;
  for (const auto& [from, to] : map.entries) back.emplace(to, from);
  std::string out;
  out.reserve(renamed.size());
  for (const auto& t : lex::lex(renamed, spec)) {
    auto it = t.kind == TokenKind::kIdentifier ? back.find(t.text) : back.end();
    out += it == back.end() ? t.text : it->second;
  }
  return out;
}

// ---------------------------------------------------------------------------
// Keyword replacement
// ---------------------------------------------------------------------------

std::string_view to_string(LexiconKind kind) {
  return kind == LexiconKind::kNonsense ? "nonsense" : "non_english";
}

KeywordLexicon parse_lexicon(std::string_view text, LexiconKind kind) {
  KeywordLexicon lexicon{kind, {}};
  std::unordered_set<std::string> seen;
  for (auto raw : split_lines(text)) {
    auto line = trim(raw);
    if (line.empty() || line.front() == '#') continue;
    if (std::any_of(line.begin(), line.end(), is_space)) {
      throw ValidationError("lexicon word contains whitespace: '" + std::string(line) + "'");
    }
    if (!seen.emplace(line).second) {
      throw ValidationError("duplicate lexicon word '" + std::string(line) + "'");
    }
    lexicon.words.emplace_back(line);
  }
  return lexicon;
}

const KeywordLexicon& shipped_lexicon(LexiconKind kind) {
  static const KeywordLexicon nonsense = [] {
    return parse_lexicon(embedded::find("lexicons/nonsense.txt").value(), LexiconKind::kNonsense);
  }();
  static const KeywordLexicon non_english = [] {
    return parse_lexicon(embedded::find("lexicons/non_english.txt").value(),
                         LexiconKind::kNonEnglish);
  }();
  return kind == LexiconKind::kNonsense ? nonsense : non_english;
}

KeywordMap keyword_mapping(const LanguageSpec& spec, const KeywordLexicon& lexicon) {
  if (lexicon.words.size() < spec.keywords.size()) {
    throw ValidationError("lexicon " + std::string(to_string(lexicon.kind)) + " has " +
                          std::to_string(lexicon.words.size()) + " words but " + spec.name +
                          " has " + std::to_string(spec.keywords.size()) + " keywords");
  }
  KeywordMap mapping;
  mapping.reserve(spec.keywords.size());
  for (std::size_t i = 0; i < spec.keywords.size(); ++i) {
    mapping.emplace_back(spec.keywords[i], lexicon.words[i]);
  }
  return mapping;
}

KeywordReplaced replace_keywords(std::string_view source, const LanguageSpec& spec,
                                 const KeywordLexicon& lexicon) {
  const auto mapping = keyword_mapping(spec, lexicon);
  std::unordered_map<std::string, std::size_t> index;
  for (std::size_t i = 0; i < mapping.size(); ++i) index.emplace(keyword_key(spec, mapping[i].first), i);

  std::vector<bool> used(mapping.size(), false);
  KeywordReplaced result;
  result.text.reserve(source.size());
  for (const auto& t : lex::lex(source, spec)) {
    if (t.kind != TokenKind::kKeyword) {
      result.text += t.text;
      continue;
    }
    const auto i = index.at(keyword_key(spec, t.text));
    used[i] = true;
    result.text += mapping[i].second;
  }
  for (std::size_t i = 0; i < mapping.size(); ++i) {
    if (used[i]) result.used.push_back(mapping[i]);
  }
  return result;
}

LanguageSpec with_mapped_keywords(const LanguageSpec& spec, const KeywordMap& mapping) {
  LanguageSpec mapped = spec;
  mapped.keywords.clear();
  for (const auto& entry : mapping) mapped.keywords.push_back(entry.second);
  return mapped;
}

// ---------------------------------------------------------------------------
// Comments
// ---------------------------------------------------------------------------

std::string remove_comments(std::string_view source, const LanguageSpec& spec) {
  std::string out;
  out.reserve(source.size());
  std::vector<std::size_t> cuts;  // output offsets where a comment was deleted
  for (const auto& t : lex::lex(source, spec)) {
    if (t.kind == TokenKind::kComment) {
      cuts.push_back(out.size());
    } else {
      out += t.text;
    }
  }
  if (cuts.empty()) return out;

  std::string cleaned;
  cleaned.reserve(out.size());
  std::size_t start = 0;
  auto cut = cuts.begin();
  while (start < out.size()) {
    const auto nl = out.find('\n', start);
    const std::size_t end = nl == std::string::npos ? out.size() : nl;
    const std::string_view line(out.data() + start, end - start);
    while (cut != cuts.end() && *cut < start) ++cut;
    const bool touched = cut != cuts.end() && *cut <= end;
    const bool blank = trim(line).empty();
    if (!(touched && blank)) {
      cleaned.append(line);
      if (nl != std::string::npos) cleaned += '\n';
    }
    start = nl == std::string::npos ? out.size() : nl + 1;
  }
  return cleaned;
}

namespace {

std::string flatten_newlines(std::string_view body) {
  std::string out;
  out.reserve(body.size());
  std::size_t i = 0;
  while (i < body.size()) {
    if (body[i] == '\n' || body[i] == '\r') {
      while (!out.empty() && (out.back() == ' ' || out.back() == '\t')) out.pop_back();
      while (i < body.size() && is_space(body[i])) ++i;
      out += ' ';
      continue;
    }
    out += body[i++];
  }
  return out;
}

void break_marker(std::string& text, std::string_view marker) {
  if (marker.size() < 2) return;
  const std::string broken = std::string(marker.substr(0, 1)) + " " + std::string(marker.substr(1));
  std::size_t pos = 0;
  while ((pos = text.find(marker, pos)) != std::string::npos) {
    text.replace(pos, marker.size(), broken);
    pos += broken.size();
  }
}

bool lexes_as_one_comment(std::string_view text, const LanguageSpec& spec) {
  const auto tokens = lex::lex(text, spec);
  return tokens.size() == 1 && tokens[0].kind == TokenKind::kComment;
}

}  // namespace

std::string refit_comment(std::string_view slot, std::string_view body, const LanguageSpec& spec,
                          bool ends_line) {
  const auto parts = lex::split_comment(slot, spec);
  const bool multiline = body.find('\n') != std::string_view::npos;
  if (parts.block && ends_line && !multiline && !spec.line_comments.empty()) {
    const auto candidate = std::string(parts.open) + std::string(parts.lead) + std::string(body) +
                           std::string(parts.trail) + std::string(parts.close);
    if (!lexes_as_one_comment(candidate, spec)) {
      // The body closes the block early; a line comment holds it intact.
      auto line = spec.line_comments.front() + " " + std::string(body);
      if (lexes_as_one_comment(line, spec)) return line;
    }
  }
  if (!parts.block && multiline && !spec.block_comments.empty()) {
    // A line comment cannot hold the body; switch the slot to the block form.
    const auto& b = spec.block_comments.front();
    std::string inner(body);
    auto block = [&] { return b.open + " " + inner + " " + b.close; };
    if (lexes_as_one_comment(block(), spec)) return block();
    for (const auto& pair : spec.block_comments) {
      break_marker(inner, pair.close);
      if (spec.nested_block_comments) break_marker(inner, pair.open);
    }
    return block();
  }
  std::string inner = parts.block ? std::string(body) : flatten_newlines(body);
  auto assemble = [&] {
    return std::string(parts.open) + std::string(parts.lead) + inner + std::string(parts.trail) +
           std::string(parts.close);
  };
  auto candidate = assemble();
  if (lexes_as_one_comment(candidate, spec)) return candidate;

  if (parts.block) {
    for (const auto& b : spec.block_comments) {
      break_marker(inner, b.close);
      if (spec.nested_block_comments) break_marker(inner, b.open);
    }
  } else {
    inner = flatten_newlines(inner);
  }
  return assemble();
}

CommentPool build_comment_pool(const std::vector<corpus::Record>& records) {
  CommentPool pool;
  std::unordered_set<std::string> seen;
  for (const auto& record : records) {
    if (!record.language) continue;
    const auto canonical = canonical_language(*record.language);
    if (!canonical) continue;
    const auto& spec = lex::spec_for(*canonical);
    for (const auto& segment : lex::extract_segments(record.response).segments) {
      if (segment.kind != lex::SegmentKind::kCode) continue;
      for (const auto& c : lex::comments_of(lex::lex(segment.text, spec))) {
        const auto body = lex::split_comment(c.text, spec).body;
        if (body.empty()) continue;
        if (seen.emplace(body).second) {
          pool.bodies.emplace_back(body);
          pool.source_ids.push_back(record.id);
        }
      }
    }
  }
  return pool;
}

namespace {

// Rebuilds the pieces with the n-th comment replaced by bodies[n].
std::vector<std::string> replace_comment_bodies(const std::vector<std::vector<Token>>& lexed,
                                                const std::vector<std::string>& bodies,
                                                const LanguageSpec& spec) {
  std::vector<std::string> out;
  std::size_t n = 0;
  for (const auto& tokens : lexed) {
    std::string text;
    for (std::size_t i = 0; i < tokens.size(); ++i) {
      const auto& t = tokens[i];
      if (t.kind == TokenKind::kComment) {
        const bool ends_line = i + 1 == tokens.size() ||
                               (tokens[i + 1].kind == TokenKind::kWhitespace &&
                                tokens[i + 1].text.find_first_of("\r\n") != std::string_view::npos);
        text += refit_comment(t.text, bodies[n++], spec, ends_line);
      } else {
        text += t.text;
      }
    }
    out.push_back(std::move(text));
  }
  return out;
}

}  // namespace

std::vector<std::string> swap_comments_local(const std::vector<std::string_view>& pieces,
                                             const LanguageSpec& spec, std::uint64_t seed) {
  std::vector<std::vector<Token>> lexed;
  std::vector<std::string> bodies;
  for (auto piece : pieces) {
    lexed.push_back(lex::lex(piece, spec));
    for (const auto& c : lex::comments_of(lexed.back())) {
      bodies.emplace_back(lex::split_comment(c.text, spec).body);
    }
  }
  if (bodies.size() < 2) return {pieces.begin(), pieces.end()};
  std::mt19937_64 rng(seed);
  seeded_shuffle(std::span<std::string>(bodies), rng);
  return replace_comment_bodies(lexed, bodies, spec);
}

std::string swap_comments_local(std::string_view source, const LanguageSpec& spec,
                                std::uint64_t seed) {
  return swap_comments_local(std::vector<std::string_view>{source}, spec, seed).front();
}

namespace {

std::vector<std::string> swap_comments_global(const std::vector<std::string_view>& pieces,
                                              const LanguageSpec& spec, const CommentPool& pool,
                                              std::uint64_t seed) {
  std::vector<std::vector<Token>> lexed;
  std::size_t count = 0;
  for (auto piece : pieces) {
    lexed.push_back(lex::lex(piece, spec));
    count += lex::comments_of(lexed.back()).size();
  }
  if (count == 0) return {pieces.begin(), pieces.end()};
  if (pool.bodies.empty()) throw ValidationError("comment pool is empty");
  std::mt19937_64 rng(seed);
  std::vector<std::string> bodies;
  bodies.reserve(count);
  for (std::size_t i = 0; i < count; ++i) {
    bodies.push_back(pool.bodies[uniform_below(rng, pool.bodies.size())]);
  }
  return replace_comment_bodies(lexed, bodies, spec);
}

}  // namespace

std::string swap_comments_global(std::string_view source, const LanguageSpec& spec,
                                 const CommentPool& pool, std::uint64_t seed) {
  return swap_comments_global(std::vector<std::string_view>{source}, spec, pool, seed).front();
}

// ---------------------------------------------------------------------------
// Whole responses
// ---------------------------------------------------------------------------

namespace {

std::string pairs_json(const std::vector<std::pair<std::string, std::string>>& pairs) {
  nlohmann::ordered_json j = nlohmann::ordered_json::object();
  for (const auto& [from, to] : pairs) j[from] = to;
  return j.dump();
}

}  // namespace

RuleOutput perturb_text(std::string_view response, std::string_view language,
                        PerturbationKind kind, std::uint64_t seed, const RuleOptions& options) {
  if (!is_rule_based(kind)) {
    throw ValidationError("'" + std::string(to_string(kind)) + "' is not a rule-based perturbation");
  }
  const auto& spec = lex::spec_for(language);
  auto segmentation = lex::extract_segments(response);
  std::vector<std::string*> code;
  for (auto& s : segmentation.segments) {
    if (s.kind == lex::SegmentKind::kCode) code.push_back(&s.text);
  }
  std::vector<std::string_view> pieces(code.size());
  std::transform(code.begin(), code.end(), pieces.begin(), [](std::string* s) { return std::string_view(*s); });

  RuleOutput result;
  std::vector<std::string> texts;
  switch (kind) {
    case PerturbationKind::kWhitespaceRemoval:
      for (auto p : pieces) texts.push_back(remove_whitespace(p, spec, options.whitespace_mode));
      result.meta["whitespace_mode"] = std::string(to_string(options.whitespace_mode));
      break;
    case PerturbationKind::kVariableRenaming: {
      auto [renamed, map] = rename_variables(pieces, spec);
      texts = std::move(renamed);
      result.meta["rename_map"] = pairs_json(map.entries);
      break;
    }
    case PerturbationKind::kKeywordNonsense:
    case PerturbationKind::kKeywordNonEnglish: {
      const auto lexicon_kind = kind == PerturbationKind::kKeywordNonsense ? LexiconKind::kNonsense
                                                                           : LexiconKind::kNonEnglish;
      const auto& lexicon = shipped_lexicon(lexicon_kind);
      std::set<std::string> seen;
      for (auto p : pieces) {
        auto replaced = replace_keywords(p, spec, lexicon);
        texts.push_back(std::move(replaced.text));
        for (const auto& entry : replaced.used) seen.insert(entry.first);
      }
      const auto full = keyword_mapping(spec, lexicon);
      KeywordMap ordered;
      for (const auto& entry : full) {
        if (seen.count(entry.first)) ordered.push_back(entry);
      }
      result.meta["keyword_map"] = pairs_json(ordered);
      result.meta["lexicon"] = std::string(to_string(lexicon_kind));
      break;
    }
    case PerturbationKind::kCommentRemoval:
      for (auto p : pieces) texts.push_back(remove_comments(p, spec));
      break;
    case PerturbationKind::kCommentSwapLocal:
      texts = swap_comments_local(pieces, spec, seed);
      result.meta["seed"] = std::to_string(seed);
      break;
    case PerturbationKind::kCommentSwapGlobal:
      if (options.pool == nullptr) throw ValidationError("swap_comments_global needs a comment pool");
      texts = swap_comments_global(pieces, spec, *options.pool, seed);
      result.meta["seed"] = std::to_string(seed);
      break;
    default:
      break;
  }
  for (std::size_t i = 0; i < code.size(); ++i) *code[i] = std::move(texts[i]);
  if (segmentation.unterminated_fence) result.meta["unterminated_fence"] = "true";
  result.text = lex::join_segments(segmentation.segments);
  return result;
}

std::uint64_t record_seed(std::uint64_t global_seed, PerturbationKind kind, std::string_view id) {
  return derive_seed(global_seed, std::string(to_string(kind)) + "/" + std::string(id));
}

CorpusResult perturb_corpus(const std::vector<corpus::Record>& records, PerturbationKind kind,
                            std::uint64_t global_seed, const RuleOptions& options,
                            std::size_t jobs) {
  if (kind == PerturbationKind::kCommentSwapGlobal && options.pool == nullptr) {
    throw ValidationError("swap_comments_global needs a comment pool");
  }
  struct Outcome {
    std::optional<corpus::Record> record;
    std::optional<corpus::Rejected> rejected;
  };
  auto outcomes = parallel_map(records.size(), jobs, [&](std::size_t i) {
    const auto& input = records[i];
    Outcome outcome;
    std::optional<std::string> language;
    if (input.language) language = canonical_language(*input.language);
    if (!language) {
      const auto reason = input.language ? "unknown language '" + *input.language + "'"
                                         : std::string("missing language");
      outcome.rejected = corpus::Rejected{input, reason};
      return outcome;
    }
    auto out = perturb_text(input.response, *language, kind, record_seed(global_seed, kind, input.id),
                            options);
    corpus::Record record = input;
    record.response = std::move(out.text);
    record.perturbation = kind;
    for (auto& [k, v] : out.meta) record.meta[k] = std::move(v);
    outcome.record = std::move(record);
    return outcome;
  });

  CorpusResult result;
  for (auto& o : outcomes) {
    if (o.record) result.perturbed.push_back(std::move(*o.record));
    if (o.rejected) result.rejected.push_back(std::move(*o.rejected));
  }
  return result;
}

}  // namespace codeperturb::rules
