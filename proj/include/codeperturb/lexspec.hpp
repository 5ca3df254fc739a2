#pragma once

#include <cstddef>
#include <filesystem>
#include <optional>
#include <set>
#include <string>
#include <string_view>
#include <vector>

namespace codeperturb::lex {

// How a string literal ends beyond "find the close delimiter".
enum class StringStyle {
  kPlain,    // scan for close, honoring the escape character
  kCppRaw,   // R"delim( ... )delim"
  kRustRaw,  // r#"..."# with any number of hashes
  kChar,     // 'x' or '\n'; falls back to punctuation (Rust lifetimes)
};

struct StringDelim {
  std::string open;
  std::string close;
  std::optional<char> escape;         // escape == close[0] means a doubled close
  std::vector<std::string> prefixes;  // e.g. r, b, f, u8; matched case-sensitively
  bool multiline = false;             // single-line literals stop before a newline
  StringStyle style = StringStyle::kPlain;
};

struct BlockComment {
  std::string open;
  std::string close;
};

// Character classes for identifiers. Bytes >= 0x80 always count as letters,
// so UTF-8 identifiers lex as single tokens.
struct CharClass {
  bool alpha = false;
  bool digit = false;
  std::string extra;  // literal characters such as "_" or "$"

  bool contains(unsigned char c) const;
};

struct LanguageSpec {
  std::string name;
  int version = 0;
  std::vector<std::string> keywords;  // reserved words, in file order
  bool keywords_case_insensitive = false;
  std::vector<std::string> soft_keywords;
  std::vector<std::string> line_comments;
  std::vector<BlockComment> block_comments;
  bool nested_block_comments = false;
  std::vector<StringDelim> strings;
  CharClass ident_start;
  CharClass ident_continue;
  std::set<std::string> builtins;
  std::vector<std::string> definers;       // keywords that introduce a name
  std::vector<std::string> member_access;  // ".", "->", "::"
  std::vector<std::string> operators;      // multi-character punctuation
  bool preprocessor_lines = false;         // C-family '#' directives
  std::optional<char> digit_separator;     // 1'000 in C++

  bool is_keyword(std::string_view word) const;
  bool is_soft_keyword(std::string_view word) const;
};

// Parses the plain-text spec format documented in data/languages/README.md.
// Throws ValidationError on schema violations.
LanguageSpec parse_spec(std::string_view text);
LanguageSpec load_spec_file(const std::filesystem::path& path);

// Spec shipped for one of the ten languages. Accepts the aliases of
// canonical_language(); throws ValidationError for anything else.
const LanguageSpec& spec_for(std::string_view language);

enum class TokenKind { kKeyword, kIdentifier, kComment, kString, kNumber, kWhitespace, kPunct, kOther };

std::string_view to_string(TokenKind kind);

struct Token {
  TokenKind kind = TokenKind::kOther;
  std::string_view text;  // view into the lexed source
  std::size_t begin = 0;  // byte offsets, [begin, end)
  std::size_t end = 0;
  std::size_t line = 1;   // 1-based line of `begin`
};

// Total, lossless lexer: token texts concatenate to `source` exactly.
// Tokens view into `source`, which must outlive them.
std::vector<Token> lex(std::string_view source, const LanguageSpec& spec);

// Tokens of kind comment, in order.
std::vector<Token> comments_of(const std::vector<Token>& tokens);

// Splits a comment token into its delimiters and body.
struct CommentParts {
  std::string_view open;        // "//", "#", "/*"
  std::string_view lead;        // whitespace after the opener
  std::string_view body;        // trimmed content
  std::string_view trail;       // whitespace before the closer / end of line
  std::string_view close;       // "*/" or empty for line comments
  bool block = false;
};

CommentParts split_comment(std::string_view comment_text, const LanguageSpec& spec);

// ---------------------------------------------------------------------------
// Response segmentation
// ---------------------------------------------------------------------------

enum class SegmentKind { kCode, kProse };

struct Segment {
  SegmentKind kind = SegmentKind::kCode;
  std::string text;
  std::optional<std::string> language_hint;  // fence info string
};

struct Segmentation {
  std::vector<Segment> segments;
  bool unterminated_fence = false;
};

// Triple-backtick fences split a response into alternating prose and code.
// Fence lines belong to the neighbouring prose segment. A response with no
// fence is a single code segment; an unclosed fence makes the remainder code.
Segmentation extract_segments(std::string_view response);

std::string join_segments(const std::vector<Segment>& segments);

}  // namespace codeperturb::lex
