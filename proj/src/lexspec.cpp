#include "codeperturb/lexspec.hpp"

#include <algorithm>
#include <array>
#include <map>
#include <mutex>

#include "codeperturb/corpus.hpp"
#include "codeperturb/embedded_data.hpp"
#include "codeperturb/error.hpp"
#include "codeperturb/language.hpp"
#include "codeperturb/util.hpp"

namespace codeperturb::lex {

bool CharClass::contains(unsigned char c) const {
  if (c >= 0x80) return true;
  if (alpha && ((c >= 'a' && c <= 'z') || (c >= 'A' && c <= 'Z'))) return true;
  if (digit && c >= '0' && c <= '9') return true;
  return extra.find(static_cast<char>(c)) != std::string::npos;
}

bool LanguageSpec::is_keyword(std::string_view word) const {
  if (keywords_case_insensitive) {
    return std::any_of(keywords.begin(), keywords.end(), [&](const std::string& k) {
      return k.size() == word.size() && starts_with_icase(word, k);
    });
  }
  return std::find(keywords.begin(), keywords.end(), word) != keywords.end();
}

bool LanguageSpec::is_soft_keyword(std::string_view word) const {
  return std::find(soft_keywords.begin(), soft_keywords.end(), word) != soft_keywords.end();
}

std::string_view to_string(TokenKind kind) {
  switch (kind) {
    case TokenKind::kKeyword: return "keyword";
    case TokenKind::kIdentifier: return "identifier";
    case TokenKind::kComment: return "comment";
    case TokenKind::kString: return "string";
    case TokenKind::kNumber: return "number";
    case TokenKind::kWhitespace: return "whitespace";
    case TokenKind::kPunct: return "punct";
    case TokenKind::kOther: return "other";
  }
  return "other";
}

// ---------------------------------------------------------------------------
// Spec files
// ---------------------------------------------------------------------------

namespace {

bool parse_flag(const std::vector<std::string>& values, std::size_t line_number) {
  if (values.size() == 1 && values[0] == "yes") return true;
  if (values.size() == 1 && values[0] == "no") return false;
  throw ValidationError("spec line " + std::to_string(line_number) + ": expected yes or no");
}

CharClass parse_class(const std::vector<std::string>& values, std::size_t line_number) {
  CharClass cls;
  for (const auto& v : values) {
    if (v == "alpha") {
      cls.alpha = true;
    } else if (v == "digit") {
      cls.digit = true;
    } else if (v.size() == 1) {
      cls.extra += v;
    } else {
      throw ValidationError("spec line " + std::to_string(line_number) +
                            ": unknown character class '" + v + "'");
    }
  }
  return cls;
}

StringDelim parse_string(const std::vector<std::string>& values, std::size_t line_number) {
  const auto where = "spec line " + std::to_string(line_number);
  if (values.size() < 2) throw ValidationError(where + ": string needs open and close delimiters");
  StringDelim d;
  d.open = values[0];
  d.close = values[1];
  for (std::size_t i = 2; i < values.size(); ++i) {
    const auto& attr = values[i];
    if (attr == "multiline") {
      d.multiline = true;
    } else if (attr.rfind("escape=", 0) == 0) {
      if (attr.size() != 8) throw ValidationError(where + ": escape must be one character");
      d.escape = attr[7];
    } else if (attr.rfind("prefixes=", 0) == 0) {
      std::string_view rest = std::string_view(attr).substr(9);
      while (!rest.empty()) {
        const auto comma = rest.find(',');
        d.prefixes.emplace_back(rest.substr(0, comma));
        if (comma == std::string_view::npos) break;
        rest.remove_prefix(comma + 1);
      }
    } else if (attr == "style=cpp_raw") {
      d.style = StringStyle::kCppRaw;
    } else if (attr == "style=rust_raw") {
      d.style = StringStyle::kRustRaw;
    } else if (attr == "style=char") {
      d.style = StringStyle::kChar;
    } else {
      throw ValidationError(where + ": unknown string attribute '" + attr + "'");
    }
  }
  if ((d.style == StringStyle::kCppRaw || d.style == StringStyle::kRustRaw) && d.prefixes.empty()) {
    throw ValidationError(where + ": raw string styles require prefixes");
  }
  return d;
}

void append(std::vector<std::string>& out, const std::vector<std::string>& values) {
  out.insert(out.end(), values.begin(), values.end());
}

}  // namespace

LanguageSpec parse_spec(std::string_view text) {
  LanguageSpec spec;
  bool saw_format = false;
  std::size_t line_number = 0;
  for (auto raw : split_lines(text)) {
    ++line_number;
    auto line = trim(raw);
    if (line.empty() || line.rfind(";;", 0) == 0) continue;
    auto words = split_whitespace(line);
    const std::string directive = words.front();
    std::vector<std::string> values(words.begin() + 1, words.end());
    const auto where = "spec line " + std::to_string(line_number);

    if (!saw_format) {
      if (directive != "format" || values != std::vector<std::string>{"1"}) {
        throw ValidationError(where + ": file must start with 'format 1'");
      }
      saw_format = true;
      continue;
    }
    if (values.empty()) throw ValidationError(where + ": directive '" + directive + "' has no value");

    if (directive == "name") {
      spec.name = std::string(trim(line.substr(4)));
    } else if (directive == "version") {
      try {
        spec.version = std::stoi(values[0]);
      } catch (const std::exception&) {
        throw ValidationError(where + ": version must be an integer");
      }
    } else if (directive == "line_comment") {
      append(spec.line_comments, values);
    } else if (directive == "block_comment") {
      if (values.size() != 2) throw ValidationError(where + ": block_comment needs open and close");
      spec.block_comments.push_back({values[0], values[1]});
    } else if (directive == "nested_block_comments") {
      spec.nested_block_comments = parse_flag(values, line_number);
    } else if (directive == "string") {
      spec.strings.push_back(parse_string(values, line_number));
    } else if (directive == "ident_start") {
      spec.ident_start = parse_class(values, line_number);
    } else if (directive == "ident_continue") {
      spec.ident_continue = parse_class(values, line_number);
    } else if (directive == "keywords") {
      append(spec.keywords, values);
    } else if (directive == "keywords_case_insensitive") {
      spec.keywords_case_insensitive = parse_flag(values, line_number);
    } else if (directive == "soft_keywords") {
      append(spec.soft_keywords, values);
    } else if (directive == "builtins") {
      spec.builtins.insert(values.begin(), values.end());
    } else if (directive == "definers") {
      append(spec.definers, values);
    } else if (directive == "member_access") {
      append(spec.member_access, values);
    } else if (directive == "operators") {
      append(spec.operators, values);
    } else if (directive == "preprocessor_lines") {
      spec.preprocessor_lines = parse_flag(values, line_number);
    } else if (directive == "digit_separator") {
      if (values.size() != 1 || values[0].size() != 1) {
        throw ValidationError(where + ": digit_separator takes one character");
      }
      spec.digit_separator = values[0][0];
    } else {
      throw ValidationError(where + ": unknown directive '" + directive + "'");
    }
  }

  if (!saw_format) throw ValidationError("spec: empty file");
  if (spec.name.empty()) throw ValidationError("spec: missing name");
  if (spec.keywords.empty()) throw ValidationError("spec " + spec.name + ": keywords must be nonempty");
  for (const auto& k : spec.keywords) {
    if (spec.builtins.count(k)) {
      throw ValidationError("spec " + spec.name + ": '" + k + "' is both keyword and builtin");
    }
  }
  if (!spec.ident_start.alpha && spec.ident_start.extra.empty()) {
    throw ValidationError("spec " + spec.name + ": ident_start is empty");
  }
  std::stable_sort(spec.operators.begin(), spec.operators.end(),
                   [](const std::string& a, const std::string& b) { return a.size() > b.size(); });
  return spec;
}

LanguageSpec load_spec_file(const std::filesystem::path& path) {
  return parse_spec(corpus::read_file(path));
}

const LanguageSpec& spec_for(std::string_view language) {
  auto canonical = canonical_language(language);
  if (!canonical) throw ValidationError("unknown language '" + std::string(language) + "'");

  static std::mutex mutex;
  static std::map<std::string, LanguageSpec> cache;
  std::lock_guard lock(mutex);
  auto it = cache.find(*canonical);
  if (it != cache.end()) return it->second;

  const auto path = "languages/" + language_file_stem(*canonical) + ".lang";
  auto text = embedded::find(path);
  if (!text) throw std::runtime_error("embedded spec missing: " + path);
  LanguageSpec spec = parse_spec(*text);
  if (spec.name != *canonical) {
    throw std::runtime_error("spec " + path + " declares name '" + spec.name + "'");
  }
  return cache.emplace(*canonical, std::move(spec)).first->second;
}

// ---------------------------------------------------------------------------
// Lexer
// ---------------------------------------------------------------------------

namespace {

bool is_digit(char c) { return c >= '0' && c <= '9'; }
bool is_alnum(char c) {
  return is_digit(c) || (c >= 'a' && c <= 'z') || (c >= 'A' && c <= 'Z');
}
bool is_ascii_punct(unsigned char c) { return c >= 0x21 && c <= 0x7e && !is_alnum(static_cast<char>(c)); }

// Length of one UTF-8 sequence starting at src[i] (1 for invalid bytes).
std::size_t utf8_length(std::string_view src, std::size_t i) {
  const auto c = static_cast<unsigned char>(src[i]);
  std::size_t len = 1;
  if (c >= 0xf0) {
    len = 4;
  } else if (c >= 0xe0) {
    len = 3;
  } else if (c >= 0xc0) {
    len = 2;
  }
  std::size_t k = 1;
  while (k < len && i + k < src.size() && (static_cast<unsigned char>(src[i + k]) & 0xc0) == 0x80) ++k;
  return k;
}

class Lexer {
 public:
  Lexer(std::string_view src, const LanguageSpec& spec) : src_(src), spec_(spec) {}

  std::vector<Token> run() {
    std::vector<Token> tokens;
    std::size_t i = 0;
    std::size_t line = 1;
    bool line_start = true;
    while (i < src_.size()) {
      auto [kind, end] = next(i, line_start);
      Token t{kind, src_.substr(i, end - i), i, end, line};
      for (char c : t.text) {
        if (c == '\n') ++line;
      }
      if (kind == TokenKind::kWhitespace) {
        if (t.text.find('\n') != std::string_view::npos) line_start = true;
      } else {
        line_start = false;
      }
      tokens.push_back(t);
      i = end;
    }
    return tokens;
  }

 private:
  bool at(std::size_t i, std::string_view s) const { return src_.compare(i, s.size(), s) == 0; }

  std::pair<TokenKind, std::size_t> next(std::size_t i, bool line_start) const {
    const char c = src_[i];
    if (is_space(c)) {
      std::size_t j = i;
      while (j < src_.size() && is_space(src_[j])) ++j;
      return {TokenKind::kWhitespace, j};
    }
    if (spec_.preprocessor_lines && c == '#' && line_start) {
      return {TokenKind::kOther, directive_end(i)};
    }
    if (auto delimited = delimited_token(i)) return *delimited;

    if (is_digit(c) || (c == '.' && i + 1 < src_.size() && is_digit(src_[i + 1]) && !follows_operand(i))) {
      return {TokenKind::kNumber, number_end(i)};
    }
    if (spec_.ident_start.contains(static_cast<unsigned char>(c))) {
      std::size_t j = i + 1;
      while (j < src_.size() && spec_.ident_continue.contains(static_cast<unsigned char>(src_[j]))) ++j;
      const auto word = src_.substr(i, j - i);
      return {spec_.is_keyword(word) ? TokenKind::kKeyword : TokenKind::kIdentifier, j};
    }
    for (const auto& op : spec_.operators) {
      if (at(i, op)) return {TokenKind::kPunct, i + op.size()};
    }
    if (is_ascii_punct(static_cast<unsigned char>(c))) return {TokenKind::kPunct, i + 1};
    return {TokenKind::kOther, i + 1};
  }

  // True when the byte before i ends an operand, so ".5" there is member access.
  bool follows_operand(std::size_t i) const {
    if (i == 0) return false;
    const char p = src_[i - 1];
    return is_alnum(p) || p == '_' || p == ')' || p == ']' ||
           static_cast<unsigned char>(p) >= 0x80;
  }

  std::size_t number_end(std::size_t i) const {
    const bool hex = src_.size() > i + 1 && src_[i] == '0' && (src_[i + 1] == 'x' || src_[i + 1] == 'X');
    std::size_t j = i + 1;
    while (j < src_.size()) {
      const char ch = src_[j];
      const char prev = src_[j - 1];
      if (is_alnum(ch) || ch == '_') {
        ++j;
      } else if (ch == '.' && j + 1 < src_.size() && is_digit(src_[j + 1]) && prev != '.') {
        ++j;
      } else if ((ch == '+' || ch == '-') &&
                 ((!hex && (prev == 'e' || prev == 'E')) || (hex && (prev == 'p' || prev == 'P')))) {
        ++j;
      } else if (spec_.digit_separator && ch == *spec_.digit_separator && j + 1 < src_.size() &&
                 is_alnum(prev) && is_alnum(src_[j + 1])) {
        ++j;
      } else {
        break;
      }
    }
    return j;
  }

  // A '#' directive runs to the end of the line (with backslash
  // continuations) and stops before a trailing comment.
  std::size_t directive_end(std::size_t i) const {
    std::size_t j = i + 1;
    while (j < src_.size()) {
      const char ch = src_[j];
      if (ch == '\n') break;
      if (ch == '\\' && j + 1 < src_.size() && src_[j + 1] == '\n') {
        j += 2;
        continue;
      }
      if (ch == '\\' && j + 2 < src_.size() && src_[j + 1] == '\r' && src_[j + 2] == '\n') {
        j += 3;
        continue;
      }
      if (ch == '"') {
        std::size_t k = j + 1;
        while (k < src_.size() && src_[k] != '"' && src_[k] != '\n') k += (src_[k] == '\\' ? 2 : 1);
        j = std::min(src_.size(), k < src_.size() && src_[k] == '"' ? k + 1 : k);
        continue;
      }
      bool comment = false;
      for (const auto& m : spec_.line_comments) comment = comment || at(j, m);
      for (const auto& b : spec_.block_comments) comment = comment || at(j, b.open);
      if (comment) break;
      ++j;
    }
    return j;
  }

  struct Candidate {
    std::size_t opener = 0;  // length of the opening delimiter incl. prefix
    TokenKind kind = TokenKind::kOther;
    std::size_t end = 0;
  };

  std::optional<std::pair<TokenKind, std::size_t>> delimited_token(std::size_t i) const {
    std::optional<Candidate> best;
    auto offer = [&](Candidate c) {
      if (!best || c.opener > best->opener) best = c;
    };

    for (const auto& m : spec_.line_comments) {
      if (at(i, m)) offer({m.size(), TokenKind::kComment, line_end(i + m.size())});
    }
    for (const auto& b : spec_.block_comments) {
      if (at(i, b.open)) offer({b.open.size(), TokenKind::kComment, block_end(i + b.open.size(), b)});
    }
    for (const auto& d : spec_.strings) {
      string_candidates(i, d, offer);
    }
    if (!best) return std::nullopt;
    return std::make_pair(best->kind, best->end);
  }

  template <typename Offer>
  void string_candidates(std::size_t i, const StringDelim& d, Offer&& offer) const {
    std::vector<std::string_view> prefixes;
    if (d.style != StringStyle::kCppRaw && d.style != StringStyle::kRustRaw) prefixes.push_back("");
    for (const auto& p : d.prefixes) prefixes.push_back(p);

    for (auto p : prefixes) {
      if (!at(i, p)) continue;
      const std::size_t after_prefix = i + p.size();
      switch (d.style) {
        case StringStyle::kPlain:
          if (at(after_prefix, d.open)) {
            offer({p.size() + d.open.size(), TokenKind::kString,
                   plain_string_end(after_prefix + d.open.size(), d)});
          }
          break;
        case StringStyle::kChar:
          if (at(after_prefix, d.open)) {
            if (auto end = char_end(after_prefix + d.open.size(), d)) {
              offer({p.size() + d.open.size(), TokenKind::kString, *end});
            }
          }
          break;
        case StringStyle::kRustRaw: {
          std::size_t j = after_prefix;
          while (j < src_.size() && src_[j] == '#') ++j;
          if (at(j, d.open)) {
            const std::size_t hashes = j - after_prefix;
            std::string closer = d.close + std::string(hashes, '#');
            const auto close = src_.find(closer, j + d.open.size());
            offer({j + d.open.size() - i, TokenKind::kString,
                   close == std::string_view::npos ? src_.size() : close + closer.size()});
          }
          break;
        }
        case StringStyle::kCppRaw: {
          if (!at(after_prefix, d.open)) break;
          std::size_t j = after_prefix + d.open.size();
          const std::size_t delim_start = j;
          while (j < src_.size() && j - delim_start <= 16 && src_[j] != '(' && src_[j] != ')' &&
                 src_[j] != '\\' && !is_space(src_[j]) && src_[j] != '"') {
            ++j;
          }
          if (j >= src_.size() || src_[j] != '(' || j - delim_start > 16) break;
          const std::string closer =
              ")" + std::string(src_.substr(delim_start, j - delim_start)) + d.close;
          const auto close = src_.find(closer, j + 1);
          offer({j + 1 - i, TokenKind::kString,
                 close == std::string_view::npos ? src_.size() : close + closer.size()});
          break;
        }
      }
    }
  }

  std::size_t line_end(std::size_t j) const {
    while (j < src_.size() && src_[j] != '\n' && src_[j] != '\r') ++j;
    return j;
  }

  std::size_t block_end(std::size_t j, const BlockComment& b) const {
    int depth = 1;
    while (j < src_.size()) {
      if (spec_.nested_block_comments && at(j, b.open)) {
        ++depth;
        j += b.open.size();
      } else if (at(j, b.close)) {
        j += b.close.size();
        if (--depth == 0) return j;
      } else {
        ++j;
      }
    }
    return src_.size();
  }

  std::size_t plain_string_end(std::size_t j, const StringDelim& d) const {
    const bool doubled_close = d.escape && !d.close.empty() && *d.escape == d.close[0];
    while (j < src_.size()) {
      const char ch = src_[j];
      if (at(j, d.close)) {
        if (doubled_close && at(j + d.close.size(), d.close)) {
          j += 2 * d.close.size();
          continue;
        }
        return j + d.close.size();
      }
      if (d.escape && !doubled_close && ch == *d.escape) {
        j = std::min(src_.size(), j + 2);
        continue;
      }
      if (!d.multiline && ch == '\n') return j;
      ++j;
    }
    return src_.size();
  }

  // Char literal body: one escape sequence or one UTF-8 character, then the
  // close delimiter. Anything else is not a char literal.
  std::optional<std::size_t> char_end(std::size_t j, const StringDelim& d) const {
    if (j >= src_.size() || src_[j] == '\n') return std::nullopt;
    if (d.escape && src_[j] == *d.escape) {
      std::size_t k = j + 2;
      const std::size_t limit = std::min(src_.size(), j + 12);
      while (k < limit && !at(k, d.close) && src_[k] != '\n') ++k;
      if (k < src_.size() && at(k, d.close)) return k + d.close.size();
      return std::nullopt;
    }
    if (at(j, d.close)) return std::nullopt;
    const std::size_t k = j + utf8_length(src_, j);
    if (at(k, d.close)) return k + d.close.size();
    return std::nullopt;
  }

  std::string_view src_;
  const LanguageSpec& spec_;
};

}  // namespace

std::vector<Token> lex(std::string_view source, const LanguageSpec& spec) {
  return Lexer(source, spec).run();
}

std::vector<Token> comments_of(const std::vector<Token>& tokens) {
  std::vector<Token> out;
  std::copy_if(tokens.begin(), tokens.end(), std::back_inserter(out),
               [](const Token& t) { return t.kind == TokenKind::kComment; });
  return out;
}

CommentParts split_comment(std::string_view text, const LanguageSpec& spec) {
  CommentParts parts;
  std::string_view inner = text;
  for (const auto& b : spec.block_comments) {
    if (text.rfind(b.open, 0) == 0 && b.open.size() > parts.open.size()) {
      parts.open = text.substr(0, b.open.size());
      parts.block = true;
      const bool closed = text.size() >= b.open.size() + b.close.size() &&
                          text.compare(text.size() - b.close.size(), b.close.size(), b.close) == 0;
      parts.close = closed ? text.substr(text.size() - b.close.size()) : std::string_view{};
    }
  }
  for (const auto& m : spec.line_comments) {
    if (text.rfind(m, 0) == 0 && m.size() > parts.open.size()) {
      parts.open = text.substr(0, m.size());
      parts.block = false;
      parts.close = {};
    }
  }
  inner = text.substr(parts.open.size(), text.size() - parts.open.size() - parts.close.size());
  std::size_t a = 0;
  while (a < inner.size() && is_space(inner[a])) ++a;
  std::size_t b = inner.size();
  while (b > a && is_space(inner[b - 1])) --b;
  parts.lead = inner.substr(0, a);
  parts.body = inner.substr(a, b - a);
  parts.trail = inner.substr(b);
  return parts;
}

// ---------------------------------------------------------------------------
// Segmentation
// ---------------------------------------------------------------------------

namespace {

bool is_fence_line(std::string_view line) {
  std::size_t i = 0;
  while (i < line.size() && (line[i] == ' ' || line[i] == '\t')) ++i;
  return line.compare(i, 3, "```") == 0;
}

bool is_closing_fence(std::string_view line) {
  auto t = trim(line);
  if (t.rfind("```", 0) != 0) return false;
  return trim(t.substr(3)).find_first_not_of('`') == std::string_view::npos;
}

}  // namespace

Segmentation extract_segments(std::string_view response) {
  Segmentation result;
  // Lines with their terminators.
  std::vector<std::string_view> lines;
  std::size_t start = 0;
  while (start < response.size()) {
    const auto nl = response.find('\n', start);
    const auto end = nl == std::string_view::npos ? response.size() : nl + 1;
    lines.push_back(response.substr(start, end - start));
    start = end;
  }

  const bool any_fence = std::any_of(lines.begin(), lines.end(), is_fence_line);
  if (!any_fence) {
    result.segments.push_back({SegmentKind::kCode, std::string(response), std::nullopt});
    return result;
  }

  Segment current{SegmentKind::kProse, "", std::nullopt};
  bool in_code = false;
  for (auto line : lines) {
    if (!in_code && is_fence_line(line)) {
      current.text += line;
      result.segments.push_back(std::move(current));
      auto info = trim(trim(line).substr(3));
      current = Segment{SegmentKind::kCode, "", std::nullopt};
      if (!info.empty()) current.language_hint = std::string(info);
      in_code = true;
    } else if (in_code && is_closing_fence(line)) {
      result.segments.push_back(std::move(current));
      current = Segment{SegmentKind::kProse, std::string(line), std::nullopt};
      in_code = false;
    } else {
      current.text += line;
    }
  }
  result.segments.push_back(std::move(current));
  result.unterminated_fence = in_code;
  return result;
}

std::string join_segments(const std::vector<Segment>& segments) {
  std::string out;
  for (const auto& s : segments) out += s.text;
  return out;
}

}  // namespace codeperturb::lex
