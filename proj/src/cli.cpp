#include "codeperturb/cli.hpp"

#include <algorithm>
#include <filesystem>
#include <iostream>
#include <iterator>
#include <memory>
#include <optional>
#include <sstream>

#include <CLI11.hpp>
#include <json.hpp>

#include "codeperturb/corpus.hpp"
#include "codeperturb/error.hpp"
#include "codeperturb/gen.hpp"
#include "codeperturb/instruct.hpp"
#include "codeperturb/judge.hpp"
#include "codeperturb/language.hpp"
#include "codeperturb/lexspec.hpp"
#include "codeperturb/metrics.hpp"
#include "codeperturb/perturbation.hpp"
#include "codeperturb/provider.hpp"
#include "codeperturb/rules.hpp"
#include "codeperturb/util.hpp"

#ifndef CODEPERTURB_VERSION
#define CODEPERTURB_VERSION "0.0.0"
#endif

namespace codeperturb::cli {

namespace fs = std::filesystem;
using nlohmann::ordered_json;

namespace {

// ---------------------------------------------------------------------------
// Shared flag groups
// ---------------------------------------------------------------------------

struct ProviderFlags {
  std::string provider = "http";
  std::string mock_fixture;
  std::string model = "gpt-4o-mini";
  std::optional<double> temperature;
  int max_retries = 3;
  int timeout_ms = 60000;
  int backoff_ms = 500;
  std::size_t max_in_flight = 4;
  std::string cache_dir;
  std::string base_url = "https://api.openai.com";
};

void add_provider_flags(CLI::App* app, ProviderFlags& f) {
  app->add_option("--provider", f.provider, "Completion provider")
      ->check(CLI::IsMember({"http", "mock"}))
      ->capture_default_str();
  app->add_option("--mock-fixture", f.mock_fixture, "JSON fixture for the mock provider");
  app->add_option("--model", f.model, "Model name")->capture_default_str();
  app->add_option("--temperature", f.temperature, "Sampling temperature");
  app->add_option("--max-retries", f.max_retries, "Retries after transient failures")
      ->check(CLI::NonNegativeNumber)
      ->capture_default_str();
  app->add_option("--timeout-ms", f.timeout_ms, "Per-request timeout")
      ->check(CLI::PositiveNumber)
      ->capture_default_str();
  app->add_option("--backoff-ms", f.backoff_ms, "First retry delay, doubled per retry")
      ->check(CLI::NonNegativeNumber)
      ->capture_default_str();
  app->add_option("--max-in-flight", f.max_in_flight, "Concurrent provider requests")
      ->check(CLI::PositiveNumber)
      ->capture_default_str();
  app->add_option("--cache-dir", f.cache_dir, "Response cache directory");
  app->add_option("--base-url", f.base_url, "Provider endpoint")->capture_default_str();
}

ordered_json provider_json(const ProviderFlags& f, double temperature) {
  return {{"provider", f.provider},       {"mock_fixture", f.mock_fixture},
          {"model", f.model},             {"temperature", temperature},
          {"max_retries", f.max_retries}, {"timeout_ms", f.timeout_ms},
          {"backoff_ms", f.backoff_ms},   {"max_in_flight", f.max_in_flight},
          {"cache_dir", f.cache_dir},     {"base_url", f.base_url}};
}

provider::ProviderConfig make_config(const ProviderFlags& f, double temperature) {
  provider::ProviderConfig c;
  c.model = f.model;
  c.temperature = temperature;
  c.max_retries = f.max_retries;
  c.timeout = std::chrono::milliseconds(f.timeout_ms);
  c.backoff = std::chrono::milliseconds(f.backoff_ms);
  c.max_in_flight = f.max_in_flight;
  c.cache_dir = f.cache_dir;
  c.base_url = f.base_url;
  return c;
}

std::unique_ptr<provider::Provider> make_provider(const ProviderFlags& f, const provider::ProviderConfig& c) {
  if (f.provider == "mock") {
    if (f.mock_fixture.empty()) throw ValidationError("--provider mock needs --mock-fixture");
    return provider::MockProvider::from_file(f.mock_fixture);
  }
  return std::make_unique<provider::HttpProvider>(c);
}

// A provider and session built on first use.
class LazySession {
 public:
  LazySession(const ProviderFlags& flags, double temperature) : flags_(flags), temperature_(temperature) {}

  provider::Session& get() {
    if (!session_) {
      const auto config = make_config(flags_, temperature_);
      provider_ = make_provider(flags_, config);
      session_ = std::make_unique<provider::Session>(*provider_, config);
    }
    return *session_;
  }

  std::optional<provider::SessionStats> stats() const {
    if (!session_) return std::nullopt;
    return session_->stats();
  }

 private:
  const ProviderFlags& flags_;
  double temperature_;
  std::unique_ptr<provider::Provider> provider_;
  std::unique_ptr<provider::Session> session_;
};

ordered_json stats_json(const std::optional<provider::SessionStats>& stats) {
  if (!stats) return nullptr;
  return {{"requests", stats->requests}, {"cache_hits", stats->cache_hits}, {"retries", stats->retries}};
}

void ensure_dir(const fs::path& dir) {
  std::error_code ec;
  fs::create_directories(dir, ec);
  if (ec) throw IoError("cannot create " + dir.string() + ": " + ec.message());
}

std::string config_hash(const ordered_json& config) { return sha256_hex(config.dump()); }

void write_manifest(const fs::path& dir, const std::string& command, const ordered_json& config,
                    std::uint64_t seed, ordered_json inputs, ordered_json outputs, ordered_json counts,
                    ordered_json extra = nullptr) {
  ordered_json m = {
      {"command", command},
      {"version", CODEPERTURB_VERSION},
      {"config_hash", config_hash(config)},
      {"seed", seed},
      {"config", config},
      {"inputs", std::move(inputs)},
      {"outputs", std::move(outputs)},
      {"counts", std::move(counts)},
  };
  if (!extra.is_null()) m["provider_stats"] = std::move(extra);
  corpus::write_file_atomic(dir / "manifest.json", m.dump(2) + "\n");
}

// ---------------------------------------------------------------------------
// generate
// ---------------------------------------------------------------------------

struct GenerateFlags {
  std::string input;
  std::string out_dir;
  std::uint64_t seed = 0;
  std::optional<std::size_t> total;
  std::vector<std::string> languages;
  bool no_dedup = false;
  bool no_filter = false;
  std::string rules;
  std::size_t jobs = 4;
  ProviderFlags provider;
};

int cmd_generate(const GenerateFlags& f, std::ostream& out, std::ostream& err) {
  const double temperature = f.provider.temperature.value_or(0.6);
  ordered_json config = {
      {"input", f.input},
      {"out_dir", f.out_dir},
      {"total", f.total ? ordered_json(*f.total) : ordered_json(nullptr)},
      {"languages", f.languages},
      {"dedup", !f.no_dedup},
      {"filter", !f.no_filter},
      {"rules", f.rules},
      {"provider", provider_json(f.provider, temperature)},
  };

  auto instructions = corpus::read_jsonl(f.input);
  err << "[generate] read " << instructions.size() << " instructions\n";
  instruct::GenerateOptions options;
  options.languages = f.languages;
  options.total = f.total;
  options.dedup = !f.no_dedup;
  options.filter = !f.no_filter;
  if (!f.rules.empty()) options.rules = corpus::load_rules(f.rules);
  options.jobs = f.jobs;

  LazySession session(f.provider, temperature);
  auto result = instruct::generate_corpus(instructions, session.get(), f.seed, options);

  const fs::path dir(f.out_dir);
  ensure_dir(dir);
  corpus::write_jsonl(result.records, dir / "generated.jsonl");
  corpus::write_rejects(result.rejected, dir / "generated.rejects.jsonl");
  corpus::write_jsonl(result.dropped, dir / "dropped.jsonl");

  ordered_json per_language = ordered_json::object();
  for (const auto& [language, c] : result.counts) {
    per_language[language] = {{"valid", c.valid}, {"invalid", c.invalid}};
    err << "[generate] " << language << ": " << c.valid << " valid, " << c.invalid << " invalid\n";
  }
  ordered_json counts = {
      {"instructions", instructions.size()},
      {"dropped", result.dropped.size()},
      {"invalid", result.rejected.size()},
      {"records", result.records.size()},
      {"per_language", per_language},
  };
  write_manifest(dir, "generate", config, f.seed, {{"instructions", f.input}},
                 {{"records", "generated.jsonl"}, {"rejects", "generated.rejects.jsonl"}, {"dropped", "dropped.jsonl"}},
                 counts, stats_json(session.stats()));
  out << result.records.size() << " records written to " << (dir / "generated.jsonl").string() << "\n";
  return kExitOk;
}

// ---------------------------------------------------------------------------
// perturb
// ---------------------------------------------------------------------------

struct PerturbFlags {
  std::string input;
  std::string out_dir;
  std::vector<std::string> kinds;
  std::uint64_t seed = 0;
  std::string mode = "aggressive";
  std::string pool;
  int max_validation_attempts = 3;
  std::size_t jobs = 4;
  ProviderFlags provider;
};

std::vector<PerturbationKind> resolve_kinds(const std::vector<std::string>& names) {
  std::vector<PerturbationKind> kinds;
  for (const auto& name : names) {
    if (name == "all") {
      for (auto k : kAllPerturbations) {
        if (std::find(kinds.begin(), kinds.end(), k) == kinds.end()) kinds.push_back(k);
      }
      continue;
    }
    auto k = parse_perturbation(name);
    if (!k) throw ValidationError("unknown perturbation kind '" + name + "'");
    if (std::find(kinds.begin(), kinds.end(), *k) == kinds.end()) kinds.push_back(*k);
  }
  return kinds;
}

int cmd_perturb(const PerturbFlags& f, std::ostream& out, std::ostream& err) {
  const auto kinds = resolve_kinds(f.kinds);
  const bool all = std::find(f.kinds.begin(), f.kinds.end(), "all") != f.kinds.end();
  const auto mode = rules::parse_whitespace_mode(f.mode);
  if (!mode) throw ValidationError("unknown whitespace mode '" + f.mode + "'");
  const bool needs_pool =
      std::find(kinds.begin(), kinds.end(), PerturbationKind::kCommentSwapGlobal) != kinds.end();
  if (needs_pool && f.pool.empty() && !all) {
    throw ValidationError("swap_comments_global needs --pool");
  }
  const bool generative = std::any_of(kinds.begin(), kinds.end(), [](auto k) { return !is_rule_based(k); });
  const double temperature = f.provider.temperature.value_or(0.6);

  std::vector<std::string> kind_names;
  for (auto k : kinds) kind_names.emplace_back(to_string(k));
  ordered_json config = {
      {"input", f.input},
      {"out_dir", f.out_dir},
      {"kinds", kind_names},
      {"mode", f.mode},
      {"pool", f.pool.empty() && needs_pool ? f.input : f.pool},
      {"max_validation_attempts", f.max_validation_attempts},
  };
  if (generative) config["provider"] = provider_json(f.provider, temperature);

  const auto records = corpus::read_jsonl(f.input);
  err << "[perturb] read " << records.size() << " records\n";

  rules::CommentPool pool;
  rules::RuleOptions rule_options;
  rule_options.whitespace_mode = *mode;
  if (needs_pool) {
    pool = f.pool.empty() ? rules::build_comment_pool(records)
                          : rules::build_comment_pool(corpus::read_jsonl(f.pool));
    rule_options.pool = &pool;
    err << "[perturb] comment pool: " << pool.bodies.size() << " bodies\n";
  }

  const fs::path dir(f.out_dir);
  ensure_dir(dir);
  LazySession session(f.provider, temperature);
  gen::GenOptions gen_options;
  gen_options.max_validation_attempts = f.max_validation_attempts;
  gen_options.jobs = f.jobs;

  ordered_json outputs = ordered_json::object();
  ordered_json counts = ordered_json::object();
  for (auto kind : kinds) {
    const std::string name(to_string(kind));
    std::vector<corpus::Record> perturbed;
    std::vector<corpus::Rejected> rejected;
    if (is_rule_based(kind)) {
      auto r = rules::perturb_corpus(records, kind, f.seed, rule_options, f.jobs);
      perturbed = std::move(r.perturbed);
      rejected = std::move(r.rejected);
    } else {
      auto r = gen::perturb_corpus(records, kind, session.get(), gen_options);
      perturbed = std::move(r.perturbed);
      rejected = std::move(r.rejected);
    }
    corpus::write_jsonl(perturbed, dir / (name + ".jsonl"));
    corpus::write_rejects(rejected, dir / (name + ".rejects.jsonl"));
    outputs[name] = {{"records", name + ".jsonl"}, {"rejects", name + ".rejects.jsonl"}};
    counts[name] = {{"input", records.size()}, {"perturbed", perturbed.size()}, {"rejected", rejected.size()}};
    err << "[perturb] " << name << ": " << perturbed.size() << " perturbed, " << rejected.size()
        << " rejected\n";
  }
  ordered_json inputs = {{"records", f.input}};
  if (needs_pool) inputs["pool"] = f.pool.empty() ? f.input : f.pool;
  write_manifest(dir, "perturb", config, f.seed, inputs, outputs, counts, stats_json(session.stats()));
  out << kinds.size() << " perturbation(s) written to " << dir.string() << "\n";
  return kExitOk;
}

// ---------------------------------------------------------------------------
// stats
// ---------------------------------------------------------------------------

struct StatsFlags {
  std::string baseline;
  std::vector<std::string> perturbed;
  std::string tokenizer = "default";
  std::vector<std::string> tokenizer_commands;  // id=command
  std::string out_dir;
  std::size_t jobs = 4;
};

std::optional<PerturbationKind> uniform_kind(const std::vector<corpus::Record>& records) {
  std::optional<PerturbationKind> kind;
  for (const auto& r : records) {
    if (!r.perturbation) return std::nullopt;
    if (kind && *kind != *r.perturbation) return std::nullopt;
    kind = r.perturbation;
  }
  return kind;
}

std::string format_double(double v) {
  std::ostringstream s;
  s.precision(6);
  s << std::fixed << v;
  return s.str();
}

int cmd_stats(const StatsFlags& f, std::ostream& out, std::ostream& err) {
  metrics::TokenizerRegistry registry;
  for (const auto& spec : f.tokenizer_commands) {
    const auto eq = spec.find('=');
    if (eq == std::string::npos || eq == 0) throw ValidationError("--tokenizer-command expects id=command");
    registry.register_command(spec.substr(0, eq), spec.substr(eq + 1));
  }
  if (!registry.contains(f.tokenizer)) throw ValidationError("unknown tokenizer '" + f.tokenizer + "'");

  const auto baseline = corpus::read_jsonl(f.baseline);
  const auto base_tokens = metrics::corpus_tokens(baseline, registry, f.tokenizer, f.jobs);
  if (base_tokens == 0) throw ValidationError("baseline corpus has no tokens");
  err << "[stats] baseline: " << baseline.size() << " records, " << base_tokens << " tokens\n";

  std::string tsv =
      "name\tperturbation\trecords\ttokens\tbaseline_tokens\tdensity\tmeasured_rid\ttable_rid\tagrees\tss\tecs\thi\n";
  ordered_json values = ordered_json::array();
  for (const auto& path : f.perturbed) {
    const auto records = corpus::read_jsonl(path);
    const auto tokens = metrics::corpus_tokens(records, registry, f.tokenizer, f.jobs);
    const double density = static_cast<double>(tokens) / static_cast<double>(base_tokens);
    const auto measured = metrics::classify_density(density);
    const auto kind = uniform_kind(records);
    const std::string name = fs::path(path).stem().string();

    ordered_json row = {
        {"name", name},
        {"perturbation", kind ? ordered_json(std::string(to_string(*kind))) : ordered_json(nullptr)},
        {"records", records.size()},
        {"tokens", tokens},
        {"baseline_tokens", base_tokens},
        {"density", density},
        {"measured_rid", std::string(metrics::to_string(measured))},
    };
    std::string line = name + "\t" + (kind ? std::string(to_string(*kind)) : "-") + "\t" +
                       std::to_string(records.size()) + "\t" + std::to_string(tokens) + "\t" +
                       std::to_string(base_tokens) + "\t" + format_double(density) + "\t" +
                       std::string(metrics::to_string(measured));
    if (kind) {
      const auto tags = metrics::tags_for(*kind);
      const bool agrees = tags.rid == measured;
      line += "\t" + std::string(metrics::to_string(tags.rid)) + "\t" + (agrees ? "yes" : "no") + "\t" +
              std::string(metrics::to_string(tags.ss)) + "\t" + std::string(metrics::to_string(tags.ecs)) +
              "\t" + std::string(metrics::to_string(tags.hi));
      row["table_rid"] = std::string(metrics::to_string(tags.rid));
      row["agrees"] = agrees;
      row["ss"] = std::string(metrics::to_string(tags.ss));
      row["ecs"] = std::string(metrics::to_string(tags.ecs));
      row["hi"] = std::string(metrics::to_string(tags.hi));
      if (!agrees) {
        err << "[stats] " << name << ": measured " << metrics::to_string(measured) << ", table says "
            << metrics::to_string(tags.rid) << "\n";
      }
    } else {
      line += "\t-\t-\t-\t-\t-";
    }
    tsv += line + "\n";
    values.push_back(std::move(row));
  }
  out << tsv;
  if (!f.out_dir.empty()) {
    const fs::path dir(f.out_dir);
    ensure_dir(dir);
    corpus::write_file_atomic(dir / "stats.tsv", tsv);
    corpus::write_file_atomic(dir / "stats.json", values.dump(2) + "\n");
  }
  return kExitOk;
}

// ---------------------------------------------------------------------------
// judge
// ---------------------------------------------------------------------------

struct JudgeFlags {
  std::string responses;
  std::string references;
  std::string out_dir;
  int max_parse_attempts = 3;
  std::size_t jobs = 4;
  ProviderFlags provider;
};

int cmd_judge(const JudgeFlags& f, std::ostream& out, std::ostream& err) {
  const double temperature = f.provider.temperature.value_or(0.0);
  ordered_json config = {
      {"responses", f.responses},
      {"references", f.references},
      {"out_dir", f.out_dir},
      {"max_parse_attempts", f.max_parse_attempts},
      {"provider", provider_json(f.provider, temperature)},
  };
  const auto responses = corpus::read_jsonl(f.responses);
  const auto references = corpus::read_jsonl(f.references);
  err << "[judge] " << responses.size() << " responses, " << references.size() << " references\n";

  LazySession session(f.provider, temperature);
  judge::JudgeOptions options;
  options.temperature = temperature;
  options.max_parse_attempts = f.max_parse_attempts;
  options.jobs = f.jobs;
  auto report = judge::judge_corpus(responses, references, session.get(), options);

  const fs::path dir(f.out_dir);
  ensure_dir(dir);
  std::string lines;
  for (const auto& j : report.judgments) lines += judge::judgment_to_json_line(j) + "\n";
  corpus::write_file_atomic(dir / "judgments.jsonl", lines);
  corpus::write_rejects(report.rejected, dir / "judgments.rejects.jsonl");
  std::string rubric_lines;
  for (const auto& [problem, rubric] : report.rubrics) {
    ordered_json j = {{"problem_id", problem}, {"rubric_hash", sha256_hex(rubric)}, {"rubric", rubric}};
    rubric_lines += j.dump() + "\n";
  }
  corpus::write_file_atomic(dir / "rubrics.jsonl", rubric_lines);
  const auto tsv = judge::aggregates_tsv(report.aggregates);
  corpus::write_file_atomic(dir / "aggregate.tsv", tsv);

  ordered_json counts = {{"responses", responses.size()},
                         {"judged", report.judgments.size()},
                         {"rejected", report.rejected.size()},
                         {"problems", report.rubrics.size()}};
  write_manifest(dir, "judge", config, 0, {{"responses", f.responses}, {"references", f.references}},
                 {{"judgments", "judgments.jsonl"},
                  {"rejects", "judgments.rejects.jsonl"},
                  {"rubrics", "rubrics.jsonl"},
                  {"aggregate", "aggregate.tsv"}},
                 counts, stats_json(session.stats()));
  err << "[judge] " << report.judgments.size() << " judged, " << report.rejected.size() << " rejected\n";
  out << tsv;
  return kExitOk;
}

// ---------------------------------------------------------------------------
// lex
// ---------------------------------------------------------------------------

struct LexFlags {
  std::string language;
  std::string input = "-";
};

int cmd_lex(const LexFlags& f, std::ostream& out) {
  std::string source;
  if (f.input == "-") {
    source.assign(std::istreambuf_iterator<char>(std::cin), std::istreambuf_iterator<char>());
  } else {
    source = corpus::read_file(f.input);
  }
  const auto& spec = lex::spec_for(f.language);
  for (const auto& t : lex::lex(source, spec)) {
    ordered_json j = {{"kind", std::string(lex::to_string(t.kind))},
                      {"text", std::string(t.text)},
                      {"start", t.begin},
                      {"end", t.end},
                      {"line", t.line}};
    out << j.dump(-1, ' ', false, nlohmann::json::error_handler_t::replace) << "\n";
  }
  return kExitOk;
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Perturbation toolkit for code instruction corpora", "codeperturb"};
  app.set_version_flag("--version", std::string(CODEPERTURB_VERSION));
  app.set_config("--config", "", "TOML config file; flags given on the command line win");
  app.require_subcommand(1);

  GenerateFlags gf;
  auto* generate = app.add_subcommand("generate", "Generate a balanced code instruction corpus");
  generate->add_option("--input", gf.input, "Instruction JSONL")->required();
  generate->add_option("--out-dir", gf.out_dir, "Output directory")->required();
  generate->add_option("--seed", gf.seed, "Global seed")->capture_default_str();
  generate->add_option("--total", gf.total, "Records to keep (default: instructions x languages)");
  generate->add_option("--languages", gf.languages, "Target languages (default: all ten)")->delimiter(',');
  generate->add_flag("--no-dedup", gf.no_dedup, "Keep duplicate instructions");
  generate->add_flag("--no-filter", gf.no_filter, "Skip the instruction filter rules");
  generate->add_option("--rules", gf.rules, "Filter rule file (default: shipped rules)");
  generate->add_option("--jobs", gf.jobs, "Worker threads")->check(CLI::PositiveNumber)->capture_default_str();
  add_provider_flags(generate, gf.provider);

  PerturbFlags pf;
  auto* perturb = app.add_subcommand("perturb", "Apply perturbations to a corpus");
  perturb->add_option("--input", pf.input, "Corpus JSONL")->required();
  perturb->add_option("--out-dir", pf.out_dir, "Output directory")->required();
  perturb->add_option("--kind", pf.kinds, "Perturbation kind, repeatable, or 'all'")->required()->delimiter(',');
  perturb->add_option("--seed", pf.seed, "Global seed")->capture_default_str();
  perturb->add_option("--mode", pf.mode, "Whitespace removal mode")
      ->check(CLI::IsMember({"aggressive", "token_safe"}))
      ->capture_default_str();
  perturb->add_option("--pool", pf.pool, "Corpus whose comments feed swap_comments_global");
  perturb->add_option("--max-validation-attempts", pf.max_validation_attempts,
                      "Completions tried per record for generative kinds")
      ->check(CLI::PositiveNumber)
      ->capture_default_str();
  perturb->add_option("--jobs", pf.jobs, "Worker threads")->check(CLI::PositiveNumber)->capture_default_str();
  add_provider_flags(perturb, pf.provider);

  StatsFlags sf;
  auto* stats = app.add_subcommand("stats", "Token counts, density and taxonomy per corpus");
  stats->add_option("--baseline", sf.baseline, "Unperturbed corpus JSONL")->required();
  stats->add_option("--perturbed", sf.perturbed, "Perturbed corpus JSONL, repeatable")->required();
  stats->add_option("--tokenizer", sf.tokenizer, "Tokenizer id")->capture_default_str();
  stats->add_option("--tokenizer-command", sf.tokenizer_commands,
                    "External tokenizer as id=command (text on stdin, count on stdout)");
  stats->add_option("--out-dir", sf.out_dir, "Also write stats.tsv and stats.json here");
  stats->add_option("--jobs", sf.jobs, "Worker threads")->check(CLI::PositiveNumber)->capture_default_str();

  JudgeFlags jf;
  auto* judge_cmd = app.add_subcommand("judge", "Score responses with rubric-based judging");
  judge_cmd->add_option("--responses", jf.responses, "Responses JSONL")->required();
  judge_cmd->add_option("--references", jf.references, "References JSONL")->required();
  judge_cmd->add_option("--out-dir", jf.out_dir, "Output directory")->required();
  judge_cmd->add_option("--max-parse-attempts", jf.max_parse_attempts, "Judge requests per response")
      ->check(CLI::PositiveNumber)
      ->capture_default_str();
  judge_cmd->add_option("--jobs", jf.jobs, "Worker threads")->check(CLI::PositiveNumber)->capture_default_str();
  add_provider_flags(judge_cmd, jf.provider);

  LexFlags lf;
  auto* lex_cmd = app.add_subcommand("lex", "Print the tokens of a source file as JSON lines");
  lex_cmd->add_option("--language", lf.language, "Language name")->required();
  lex_cmd->add_option("--input", lf.input, "Source file, '-' for stdin")->capture_default_str();

  std::vector<std::string> reversed(args.rbegin(), args.rend());
  try {
    app.parse(reversed);
  } catch (const CLI::CallForHelp& e) {
    out << app.help();
    return kExitOk;
  } catch (const CLI::CallForAllHelp& e) {
    out << app.help("", CLI::AppFormatMode::All);
    return kExitOk;
  } catch (const CLI::CallForVersion& e) {
    out << CODEPERTURB_VERSION << "\n";
    return kExitOk;
  } catch (const CLI::ParseError& e) {
    err << "error: " << e.what() << "\n";
    return kExitValidation;
  }

  try {
    if (generate->parsed()) return cmd_generate(gf, out, err);
    if (perturb->parsed()) return cmd_perturb(pf, out, err);
    if (stats->parsed()) return cmd_stats(sf, out, err);
    if (judge_cmd->parsed()) return cmd_judge(jf, out, err);
    if (lex_cmd->parsed()) return cmd_lex(lf, out);
  } catch (const ValidationError& e) {
    err << "error: " << e.what() << "\n";
    return kExitValidation;
  } catch (const IoError& e) {
    err << "error: " << e.what() << "\n";
    return kExitEnvironment;
  } catch (const ProviderError& e) {
    err << "error: " << e.what() << "\n";
    return kExitEnvironment;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return kExitEnvironment;
  }
  return kExitValidation;
}

}  // namespace codeperturb::cli
