#define CPPHTTPLIB_OPENSSL_SUPPORT
#include "codeperturb/provider.hpp"

#include <cstdio>
#include <cstdlib>
#include <thread>

#include <httplib.h>
#include <json.hpp>

#include "codeperturb/corpus.hpp"
#include "codeperturb/error.hpp"
#include "codeperturb/util.hpp"

namespace codeperturb::provider {

using nlohmann::json;

// ---------------------------------------------------------------------------
// HTTP
// ---------------------------------------------------------------------------

HttpProvider::HttpProvider(const ProviderConfig& config) : base_url_(config.base_url) {
  const char* key = std::getenv(config.api_key_env.c_str());
  if (key == nullptr || *key == '\0') {
    throw AuthError("environment variable " + config.api_key_env + " is not set");
  }
  api_key_ = key;
}

std::string HttpProvider::complete(const CompletionRequest& request) {
  httplib::Client client(base_url_);
  const auto seconds = std::chrono::duration_cast<std::chrono::seconds>(request.timeout);
  const auto micros = std::chrono::duration_cast<std::chrono::microseconds>(request.timeout - seconds);
  client.set_connection_timeout(seconds.count(), micros.count());
  client.set_read_timeout(seconds.count(), micros.count());
  client.set_write_timeout(seconds.count(), micros.count());

  json body = {
      {"model", request.model},
      {"temperature", request.temperature},
      {"messages", json::array({{{"role", "user"}, {"content", request.prompt}}})},
  };
  httplib::Headers headers = {{"Authorization", "Bearer " + api_key_}};

  const auto started = std::chrono::steady_clock::now();
  auto result = client.Post("/v1/chat/completions", headers, body.dump(), "application/json");
  if (!result) {
    const auto err = result.error();
    const auto elapsed = std::chrono::steady_clock::now() - started;
    if (err == httplib::Error::ConnectionTimeout ||
        (err == httplib::Error::Read && elapsed >= request.timeout)) {
      throw TimeoutError("request timed out after " + std::to_string(request.timeout.count()) + " ms");
    }
    throw TransientError("request failed: " + httplib::to_string(err));
  }
  const int status = result->status;
  if (status == 401 || status == 403) throw AuthError("provider rejected the credential (HTTP " + std::to_string(status) + ")");
  if (status == 408) throw TimeoutError("provider reported a timeout (HTTP 408)");
  if (status == 429 || status >= 500) throw TransientError("HTTP " + std::to_string(status));
  if (status != 200) throw ProviderError("HTTP " + std::to_string(status) + ": " + result->body);

  try {
    const auto reply = json::parse(result->body);
    return reply.at("choices").at(0).at("message").at("content").get<std::string>();
  } catch (const json::exception& e) {
    throw ProviderError(std::string("malformed completion: ") + e.what());
  }
}

// ---------------------------------------------------------------------------
// Mock
// ---------------------------------------------------------------------------

namespace {

std::vector<std::string> string_or_list(const json& value, const char* field) {
  if (value.is_string()) return {value.get<std::string>()};
  if (value.is_array()) {
    std::vector<std::string> out;
    for (const auto& v : value) out.push_back(v.get<std::string>());
    return out;
  }
  throw ValidationError(std::string("mock fixture: '") + field + "' must be a string or a list");
}

}  // namespace

std::unique_ptr<MockProvider> MockProvider::from_json(std::string_view json_text) {
  auto mock = std::unique_ptr<MockProvider>(new MockProvider());
  json doc;
  try {
    doc = json::parse(json_text);
  } catch (const json::parse_error& e) {
    throw ValidationError(std::string("mock fixture is not valid JSON: ") + e.what());
  }
  try {
    const auto rules = doc.value("rules", json::array());
    for (const auto& r : rules) {
      Rule rule;
      if (r.contains("contains")) rule.contains = string_or_list(r["contains"], "contains");
      if (r.contains("response")) rule.responses = {r["response"].get<std::string>()};
      if (r.contains("responses")) rule.responses = string_or_list(r["responses"], "responses");
      if (r.contains("sequence")) {
        rule.responses = string_or_list(r["sequence"], "sequence");
        rule.sequence = true;
      }
      if (r.contains("error")) {
        rule.error = r["error"].get<std::string>();
        if (*rule.error != "transient" && *rule.error != "timeout" && *rule.error != "auth") {
          throw ValidationError("mock fixture: unknown error kind '" + *rule.error + "'");
        }
      }
      if (r.contains("times")) rule.times = r["times"].get<int>();
      if (rule.responses.empty() && !rule.error) {
        throw ValidationError("mock fixture: a rule needs a response or an error");
      }
      mock->rules_.push_back(std::move(rule));
    }
    const auto replay = doc.value("replay", json::object());
    for (const auto& [hash, text] : replay.items()) mock->replay_[hash] = text.get<std::string>();
    if (doc.contains("default")) mock->default_ = doc["default"].get<std::string>();
  } catch (const json::exception& e) {
    throw ValidationError(std::string("mock fixture: ") + e.what());
  }
  return mock;
}

std::unique_ptr<MockProvider> MockProvider::from_file(const std::filesystem::path& path) {
  return from_json(corpus::read_file(path));
}

std::string MockProvider::complete(const CompletionRequest& request) {
  const auto hash = sha256_hex(request.prompt);
  std::lock_guard lock(mutex_);
  prompts_.push_back(request.prompt);
  if (auto it = replay_.find(hash); it != replay_.end()) return it->second;

  for (std::size_t i = 0; i < rules_.size(); ++i) {
    const auto& rule = rules_[i];
    const bool match = std::all_of(rule.contains.begin(), rule.contains.end(), [&](const std::string& s) {
      return request.prompt.find(s) != std::string::npos;
    });
    if (!match) continue;
    const int call = calls_[{i, hash}]++;
    if (rule.error && (!rule.times || call < *rule.times)) {
      if (*rule.error == "auth") throw AuthError("mock: credential rejected");
      if (*rule.error == "timeout") throw TimeoutError("mock: request timed out");
      throw TransientError("mock: transient failure");
    }
    if (rule.responses.empty()) break;
    if (rule.sequence) {
      const int index = rule.error && rule.times ? call - *rule.times : call;
      return rule.responses[std::min<std::size_t>(index, rule.responses.size() - 1)];
    }
    return rule.responses[fnv1a64(request.prompt) % rule.responses.size()];
  }
  if (default_) return *default_;
  throw ProviderError("mock: no rule matches the prompt");
}

std::size_t MockProvider::request_count() const {
  std::lock_guard lock(mutex_);
  return prompts_.size();
}

std::size_t MockProvider::request_count_containing(std::string_view needle) const {
  std::lock_guard lock(mutex_);
  return static_cast<std::size_t>(std::count_if(prompts_.begin(), prompts_.end(), [&](const std::string& p) {
    return p.find(needle) != std::string::npos;
  }));
}

// ---------------------------------------------------------------------------
// Session
// ---------------------------------------------------------------------------

std::string cache_key(std::string_view model, double temperature, std::string_view prompt,
                      int attempt) {
  char temp[64];
  std::snprintf(temp, sizeof temp, "%.6f", temperature);
  std::string material;
  material.reserve(model.size() + prompt.size() + 32);
  material.append(model).append("\x1f").append(temp).append("\x1f").append(prompt);
  if (attempt > 0) material.append("#").append(std::to_string(attempt));
  return sha256_hex(material);
}

Session::Session(Provider& provider, ProviderConfig config)
    : provider_(provider), config_(std::move(config)) {
  if (config_.max_retries < 0) throw ValidationError("max retries must be >= 0");
  if (config_.max_in_flight == 0) config_.max_in_flight = 1;
  if (!config_.cache_dir.empty()) {
    std::error_code ec;
    std::filesystem::create_directories(config_.cache_dir, ec);
    if (ec) throw IoError("cannot create cache directory " + config_.cache_dir.string() + ": " + ec.message());
  }
}

SessionStats Session::stats() const {
  std::lock_guard lock(mutex_);
  return stats_;
}

std::optional<std::string> Session::cache_read(const std::string& key) const {
  if (config_.cache_dir.empty()) return std::nullopt;
  const auto path = config_.cache_dir / (key + ".json");
  std::error_code ec;
  if (!std::filesystem::exists(path, ec)) return std::nullopt;
  try {
    return json::parse(corpus::read_file(path)).at("response").get<std::string>();
  } catch (const std::exception&) {
    return std::nullopt;  // unreadable entries are refetched and overwritten
  }
}

void Session::cache_write(const std::string& key, std::string_view prompt, double temperature,
                          std::string_view response) const {
  if (config_.cache_dir.empty()) return;
  nlohmann::ordered_json entry = {
      {"key", key},
      {"model", config_.model},
      {"temperature", temperature},
      {"prompt_sha256", sha256_hex(prompt)},
      {"response", response},
  };
  corpus::write_file_atomic(config_.cache_dir / (key + ".json"), entry.dump() + "\n");
}

std::string Session::call_with_retries(const CompletionRequest& request) {
  auto delay = config_.backoff;
  for (int attempt = 0;; ++attempt) {
    {
      std::lock_guard lock(mutex_);
      ++stats_.requests;
      if (attempt > 0) ++stats_.retries;
    }
    try {
      return provider_.complete(request);
    } catch (const TransientError& e) {
      if (attempt >= config_.max_retries) {
        throw RetriesExhaustedError("giving up after " + std::to_string(attempt + 1) +
                                    " attempts: " + e.what());
      }
    }
    std::this_thread::sleep_for(delay);
    delay *= 2;
  }
}

std::string Session::complete(std::string_view prompt, std::optional<double> temperature,
                              int attempt) {
  const double temp = temperature.value_or(config_.temperature);
  const auto key = cache_key(config_.model, temp, prompt, attempt);
  if (auto cached = cache_read(key)) {
    std::lock_guard lock(mutex_);
    ++stats_.cache_hits;
    return *cached;
  }

  {
    std::unique_lock lock(mutex_);
    slot_free_.wait(lock, [&] { return in_flight_ < config_.max_in_flight; });
    ++in_flight_;
  }
  struct Release {
    Session& s;
    ~Release() {
      {
        std::lock_guard lock(s.mutex_);
        --s.in_flight_;
      }
      s.slot_free_.notify_one();
    }
  } release{*this};

  CompletionRequest request{std::string(prompt), config_.model, temp, config_.timeout};
  auto response = call_with_retries(request);
  cache_write(key, prompt, temp, response);
  return response;
}

}  // namespace codeperturb::provider
