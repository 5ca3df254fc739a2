#include "codeperturb/corpus.hpp"

#include <unicode/normalizer2.h>
#include <unicode/unistr.h>
#include <unicode/utypes.h>

#include <algorithm>
#include <fstream>
#include <random>
#include <regex>
#include <set>
#include <sstream>
#include <unordered_map>
#include <unordered_set>

#include <json.hpp>

#include "codeperturb/embedded_data.hpp"
#include "codeperturb/error.hpp"
#include "codeperturb/language.hpp"
#include "codeperturb/util.hpp"

namespace codeperturb::corpus {

using ordered_json = nlohmann::ordered_json;

namespace {

ordered_json record_to_json(const Record& r) {
  ordered_json j;
  j["id"] = r.id;
  j["instruction"] = r.instruction;
  j["response"] = r.response;
  if (r.language) j["language"] = *r.language;
  if (r.perturbation) j["perturbation"] = std::string(to_string(*r.perturbation));
  if (!r.meta.empty()) {
    ordered_json meta = ordered_json::object();
    for (const auto& [k, v] : r.meta) meta[k] = v;
    j["meta"] = std::move(meta);
  }
  return j;
}

std::string where(std::size_t line_number) {
  return line_number == 0 ? std::string("record") : "line " + std::to_string(line_number);
}

const std::string& required_string(const ordered_json& j, const char* field,
                                   std::size_t line_number) {
  auto it = j.find(field);
  if (it == j.end()) {
    throw ValidationError(where(line_number) + ": missing field '" + field + "'");
  }
  if (!it->is_string()) {
    throw ValidationError(where(line_number) + ": field '" + field + "' must be a string");
  }
  return it->get_ref<const std::string&>();
}

}  // namespace

std::string to_json_line(const Record& record) {
  return record_to_json(record).dump(-1, ' ', false, nlohmann::json::error_handler_t::replace);
}

std::string to_json_line(const Rejected& rejected) {
  auto j = record_to_json(rejected.record);
  j["reason"] = rejected.reason;
  return j.dump(-1, ' ', false, nlohmann::json::error_handler_t::replace);
}

Record parse_json_line(std::string_view line, std::size_t line_number) {
  ordered_json j;
  try {
    j = ordered_json::parse(line);
  } catch (const nlohmann::json::parse_error& e) {
    throw ValidationError(where(line_number) + ": malformed JSON: " + e.what());
  }
  if (!j.is_object()) throw ValidationError(where(line_number) + ": expected a JSON object");

  Record r;
  r.id = required_string(j, "id", line_number);
  if (r.id.empty()) throw ValidationError(where(line_number) + ": empty id");
  r.instruction = required_string(j, "instruction", line_number);
  if (j.contains("response")) r.response = required_string(j, "response", line_number);

  if (auto it = j.find("language"); it != j.end() && !it->is_null()) {
    if (!it->is_string() || !is_canonical_language(it->get_ref<const std::string&>())) {
      throw ValidationError(where(line_number) + ": language must be one of the ten canonical names");
    }
    r.language = it->get<std::string>();
  }
  if (auto it = j.find("perturbation"); it != j.end() && !it->is_null()) {
    if (!it->is_string()) throw ValidationError(where(line_number) + ": perturbation must be a string");
    auto kind = parse_perturbation(it->get_ref<const std::string&>());
    if (!kind) {
      throw ValidationError(where(line_number) + ": unknown perturbation '" + it->get<std::string>() + "'");
    }
    r.perturbation = *kind;
  }
  if (auto it = j.find("meta"); it != j.end() && !it->is_null()) {
    if (!it->is_object()) throw ValidationError(where(line_number) + ": meta must be an object");
    for (const auto& [k, v] : it->items()) {
      if (!v.is_string()) {
        throw ValidationError(where(line_number) + ": meta value for '" + k + "' must be a string");
      }
      r.meta[k] = v.get<std::string>();
    }
  }
  r.source_line = line_number;
  return r;
}

std::string read_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open " + path.string());
  std::ostringstream buffer;
  buffer << in.rdbuf();
  if (in.bad()) throw IoError("read failed: " + path.string());
  return buffer.str();
}

std::vector<Record> read_jsonl(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open " + path.string());

  std::vector<Record> records;
  std::unordered_set<std::string> ids;
  std::string line;
  std::size_t line_number = 0;
  while (std::getline(in, line)) {
    ++line_number;
    if (trim(line).empty()) continue;
    try {
      Record r = parse_json_line(line, line_number);
      if (!ids.insert(r.id).second) {
        throw ValidationError("line " + std::to_string(line_number) + ": duplicate id '" + r.id + "'");
      }
      records.push_back(std::move(r));
    } catch (const ValidationError& e) {
      throw ValidationError(path.string() + ": " + e.what());
    }
  }
  if (in.bad()) throw IoError("read failed: " + path.string());
  return records;
}

void write_file_atomic(const std::filesystem::path& path, std::string_view content) {
  if (path.has_parent_path()) {
    std::error_code ec;
    std::filesystem::create_directories(path.parent_path(), ec);
  }
  auto tmp = path;
  tmp += ".tmp" + std::to_string(fnv1a64(content) & 0xffffff) + "-" +
         std::to_string(std::hash<std::thread::id>{}(std::this_thread::get_id()) & 0xffff);
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw IoError("cannot write " + path.string());
    out.write(content.data(), static_cast<std::streamsize>(content.size()));
    out.flush();
    if (!out) {
      std::error_code ec;
      std::filesystem::remove(tmp, ec);
      throw IoError("write failed: " + path.string());
    }
  }
  std::error_code ec;
  std::filesystem::rename(tmp, path, ec);
  if (ec) {
    std::filesystem::remove(tmp, ec);
    throw IoError("cannot write " + path.string() + ": " + ec.message());
  }
}

void write_jsonl(const std::vector<Record>& records, const std::filesystem::path& path) {
  std::string out;
  for (const auto& r : records) {
    out += to_json_line(r);
    out += '\n';
  }
  write_file_atomic(path, out);
}

void write_rejects(const std::vector<Rejected>& rejects, const std::filesystem::path& path) {
  std::string out;
  for (const auto& r : rejects) {
    out += to_json_line(r);
    out += '\n';
  }
  write_file_atomic(path, out);
}

std::string normalize_instruction(std::string_view text) {
  UErrorCode status = U_ZERO_ERROR;
  const icu::Normalizer2* nfc = icu::Normalizer2::getNFCInstance(status);
  if (U_FAILURE(status)) throw std::runtime_error("ICU NFC normalizer unavailable");
  icu::UnicodeString source =
      icu::UnicodeString::fromUTF8(icu::StringPiece(text.data(), static_cast<int32_t>(text.size())));
  icu::UnicodeString normalized = nfc->normalize(source, status);
  if (U_FAILURE(status)) throw std::runtime_error("ICU NFC normalization failed");
  normalized.trim();
  std::string out;
  normalized.toUTF8String(out);
  return out;
}

std::vector<Record> dedup_exact(const std::vector<Record>& records) {
  std::vector<Record> out;
  std::unordered_set<std::string> seen;
  for (const auto& r : records) {
    if (seen.insert(normalize_instruction(r.instruction)).second) out.push_back(r);
  }
  return out;
}

// ---------------------------------------------------------------------------
// Filtering
// ---------------------------------------------------------------------------

namespace {

struct CompiledPattern {
  std::string source;
  std::regex regex;
};

CompiledPattern compile_pattern(const std::string& pattern) {
  std::string body = pattern;
  auto flags = std::regex::ECMAScript;
  if (body.rfind("(?i)", 0) == 0) {
    body = body.substr(4);
    flags |= std::regex::icase;
  }
  try {
    return {pattern, std::regex(body, flags)};
  } catch (const std::regex_error& e) {
    throw ValidationError("invalid filter pattern '" + pattern + "': " + e.what());
  }
}

}  // namespace

void validate_rules(const FilterRuleSet& rules) {
  for (const auto& p : rules.drop_patterns) compile_pattern(p);
}

FilterRuleSet parse_rules(std::string_view text) {
  FilterRuleSet rules;
  std::size_t line_number = 0;
  for (auto raw : split_lines(text)) {
    ++line_number;
    auto line = trim(raw);
    if (line.empty() || line.front() == '#') continue;
    const auto space = line.find_first_of(" \t");
    const auto directive = line.substr(0, space);
    const auto value = space == std::string_view::npos ? std::string_view{} : trim(line.substr(space));
    if (value.empty()) {
      throw ValidationError("filter rules line " + std::to_string(line_number) + ": missing value");
    }
    if (directive == "substring") {
      rules.drop_substrings.emplace_back(value);
    } else if (directive == "pattern") {
      rules.drop_patterns.emplace_back(value);
    } else if (directive == "applies_to") {
      if (value == "instruction") {
        rules.applies_to = FilterField::kInstruction;
      } else if (value == "response") {
        rules.applies_to = FilterField::kResponse;
      } else if (value == "both") {
        rules.applies_to = FilterField::kBoth;
      } else {
        throw ValidationError("filter rules line " + std::to_string(line_number) +
                              ": applies_to must be instruction, response or both");
      }
    } else {
      throw ValidationError("filter rules line " + std::to_string(line_number) +
                            ": unknown directive '" + std::string(directive) + "'");
    }
  }
  validate_rules(rules);
  return rules;
}

FilterRuleSet load_rules(const std::filesystem::path& path) { return parse_rules(read_file(path)); }

FilterRuleSet default_rules() {
  auto text = embedded::find("filter_rules.txt");
  if (!text) throw std::runtime_error("embedded filter_rules.txt missing");
  return parse_rules(*text);
}

FilterResult filter_by_rules(const std::vector<Record>& records, const FilterRuleSet& rules) {
  std::vector<CompiledPattern> patterns;
  patterns.reserve(rules.drop_patterns.size());
  for (const auto& p : rules.drop_patterns) patterns.push_back(compile_pattern(p));
  std::vector<std::string> lowered_substrings;
  for (const auto& s : rules.drop_substrings) lowered_substrings.push_back(to_lower_ascii(s));

  auto first_match = [&](const std::string& field) -> std::optional<std::string> {
    const std::string lowered = to_lower_ascii(field);
    for (std::size_t i = 0; i < lowered_substrings.size(); ++i) {
      if (lowered.find(lowered_substrings[i]) != std::string::npos) {
        return "substring:" + rules.drop_substrings[i];
      }
    }
    for (const auto& p : patterns) {
      if (std::regex_search(field, p.regex)) return "pattern:" + p.source;
    }
    return std::nullopt;
  };

  FilterResult result;
  for (const auto& r : records) {
    std::optional<std::string> hit;
    if (rules.applies_to != FilterField::kResponse) hit = first_match(r.instruction);
    if (!hit && rules.applies_to != FilterField::kInstruction) hit = first_match(r.response);
    if (hit) {
      Record dropped = r;
      dropped.meta["dropped_by"] = *hit;
      result.dropped.push_back(std::move(dropped));
    } else {
      result.kept.push_back(r);
    }
  }
  return result;
}

bool accept_all(const Record&) { return true; }

std::vector<Record> filter_by_predicate(const std::vector<Record>& records,
                                        const RecordPredicate& keep) {
  std::vector<Record> out;
  std::copy_if(records.begin(), records.end(), std::back_inserter(out), keep);
  return out;
}

// ---------------------------------------------------------------------------
// Balanced sampling
// ---------------------------------------------------------------------------

std::string group_key(const Record& record, std::string_view key) {
  if (key == "language") return record.language.value_or("");
  if (key == "perturbation") {
    return record.perturbation ? std::string(to_string(*record.perturbation)) : std::string();
  }
  if (key == "id") return record.id;
  if (key.rfind("meta.", 0) == 0) {
    auto it = record.meta.find(std::string(key.substr(5)));
    return it == record.meta.end() ? std::string() : it->second;
  }
  throw ValidationError("unknown grouping field '" + std::string(key) + "'");
}

std::vector<Record> sample_balanced(const std::vector<Record>& records, std::size_t total,
                                    std::string_view key, std::uint64_t seed,
                                    const std::vector<std::string>& expected_groups) {
  std::map<std::string, std::vector<std::size_t>> members;
  for (std::size_t i = 0; i < records.size(); ++i) {
    members[group_key(records[i], key)].push_back(i);
  }

  std::vector<std::string> groups = expected_groups;
  if (groups.empty()) {
    for (const auto& [name, _] : members) groups.push_back(name);
  }
  if (groups.empty()) {
    if (total == 0) return {};
    throw ValidationError("cannot sample " + std::to_string(total) + " records from an empty corpus");
  }
  if (total % groups.size() != 0) {
    throw ValidationError("total " + std::to_string(total) + " is not divisible by " +
                          std::to_string(groups.size()) + " groups");
  }
  const std::size_t per_group = total / groups.size();

  std::vector<std::size_t> chosen;
  chosen.reserve(total);
  for (const auto& group : groups) {
    auto it = members.find(group);
    const std::size_t available = it == members.end() ? 0 : it->second.size();
    if (available < per_group) {
      throw ValidationError("group '" + group + "' has " + std::to_string(available) +
                            " records, " + std::to_string(per_group) + " required");
    }
    std::vector<std::size_t> pool = it == members.end() ? std::vector<std::size_t>{} : it->second;
    std::mt19937_64 rng(derive_seed(seed, "sample/" + group));
    seeded_shuffle(std::span<std::size_t>(pool), rng);
    chosen.insert(chosen.end(), pool.begin(), pool.begin() + static_cast<std::ptrdiff_t>(per_group));
  }
  std::sort(chosen.begin(), chosen.end());

  std::vector<Record> out;
  out.reserve(chosen.size());
  for (auto i : chosen) out.push_back(records[i]);
  return out;
}

}  // namespace codeperturb::corpus
