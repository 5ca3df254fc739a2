#pragma once

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <functional>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "codeperturb/perturbation.hpp"

namespace codeperturb::corpus {

// One instruction-response pair. Serialized as one JSON object per line with
// fields id, instruction, response, language, perturbation, meta; absent
// optionals are omitted.
struct Record {
  std::string id;
  std::string instruction;
  std::string response;
  std::optional<std::string> language;  // canonical name, absent for prose
  std::optional<PerturbationKind> perturbation;
  std::map<std::string, std::string> meta;

  // 1-based line in the file this record was read from, 0 if built in
  // memory. Not serialized and not part of equality.
  std::size_t source_line = 0;

  friend bool operator==(const Record& a, const Record& b) {
    return a.id == b.id && a.instruction == b.instruction && a.response == b.response &&
           a.language == b.language && a.perturbation == b.perturbation && a.meta == b.meta;
  }
};

// A record that could not be processed, with the reason it was set aside.
// Written in the record format plus a top-level "reason" field.
struct Rejected {
  Record record;
  std::string reason;
};

std::string to_json_line(const Record& record);
std::string to_json_line(const Rejected& rejected);
// Throws ValidationError; `line` is only used in messages.
Record parse_json_line(std::string_view line, std::size_t line_number = 0);

std::vector<Record> read_jsonl(const std::filesystem::path& path);
void write_jsonl(const std::vector<Record>& records, const std::filesystem::path& path);
void write_rejects(const std::vector<Rejected>& rejects, const std::filesystem::path& path);
// Writes `content` to `path` through a temporary file and a rename.
void write_file_atomic(const std::filesystem::path& path, std::string_view content);
std::string read_file(const std::filesystem::path& path);

// NFC-normalizes and trims surrounding Unicode whitespace. Case is kept.
std::string normalize_instruction(std::string_view text);

// Keeps the first record for each normalized instruction; order preserved.
std::vector<Record> dedup_exact(const std::vector<Record>& records);

enum class FilterField { kInstruction, kResponse, kBoth };

struct FilterRuleSet {
  std::vector<std::string> drop_substrings;  // matched case-insensitively
  std::vector<std::string> drop_patterns;    // ECMAScript regex; "(?i)" prefix = icase
  FilterField applies_to = FilterField::kInstruction;
};

// Throws ValidationError naming the first pattern that does not compile.
void validate_rules(const FilterRuleSet& rules);

// Parses the plain-text rule format (see data/filter_rules.txt).
FilterRuleSet parse_rules(std::string_view text);
FilterRuleSet load_rules(const std::filesystem::path& path);
// The shipped rule set.
FilterRuleSet default_rules();

struct FilterResult {
  std::vector<Record> kept;
  std::vector<Record> dropped;  // meta["dropped_by"] names the matching rule
};

FilterResult filter_by_rules(const std::vector<Record>& records, const FilterRuleSet& rules);

// Hook for language-of-text screening on the prose side; the default keeps
// every record.
using RecordPredicate = std::function<bool(const Record&)>;
bool accept_all(const Record&);
std::vector<Record> filter_by_predicate(const std::vector<Record>& records,
                                        const RecordPredicate& keep);

// Grouping key: "language", "perturbation", "id", or "meta.<key>". Records
// without the field group under "".
std::string group_key(const Record& record, std::string_view key);

// Draws total / groups records from each group without replacement. Groups
// are `expected_groups` when given, otherwise the distinct key values in the
// input. The result keeps input order. Throws ValidationError if the total
// does not divide evenly or a group is too small (the message names it).
std::vector<Record> sample_balanced(const std::vector<Record>& records, std::size_t total,
                                    std::string_view key, std::uint64_t seed,
                                    const std::vector<std::string>& expected_groups = {});

}  // namespace codeperturb::corpus
