#pragma once

#include <chrono>
#include <condition_variable>
#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <map>
#include <memory>
#include <mutex>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace codeperturb::provider {

struct ProviderConfig {
  std::string model = "gpt-4o-mini";
  double temperature = 0.6;
  int max_retries = 3;  // extra attempts after a transient failure
  std::chrono::milliseconds timeout{60000};
  std::chrono::milliseconds backoff{500};  // first retry delay, doubled each time
  std::size_t max_in_flight = 4;
  std::filesystem::path cache_dir;  // empty disables the cache
  std::string base_url = "https://api.openai.com";
  std::string api_key_env = "OPENAI_API_KEY";
};

struct CompletionRequest {
  std::string prompt;
  std::string model;
  double temperature = 0.0;
  std::chrono::milliseconds timeout{60000};
};

// One completion per call. Implementations throw AuthError, TimeoutError,
// TransientError or ProviderError and must be safe to call concurrently.
class Provider {
 public:
  virtual ~Provider() = default;
  virtual std::string complete(const CompletionRequest& request) = 0;
  virtual std::string name() const = 0;
};

// OpenAI-compatible chat completions endpoint. The API key is read from the
// environment variable named in the config when the provider is built.
class HttpProvider : public Provider {
 public:
  explicit HttpProvider(const ProviderConfig& config);
  std::string complete(const CompletionRequest& request) override;
  std::string name() const override { return "http"; }

 private:
  std::string base_url_;
  std::string api_key_;
};

// Deterministic provider driven by a JSON fixture:
//
//   {
//     "rules": [
//       {"contains": "Mermaid", "response": "..."},
//       {"contains": ["a", "b"], "responses": ["x", "y"]},   // picked by prompt hash
//       {"contains": "c", "sequence": ["bad", "good"]},       // n-th call for a prompt
//       {"contains": "d", "error": "transient", "times": 2, "response": "ok"}
//     ],
//     "replay": {"<sha256 of prompt>": "..."},
//     "default": "..."
//   }
//
// Replay entries win, then the first rule whose substrings all occur in the
// prompt, then the default. "error" is one of transient, timeout, auth and
// fires for the first `times` calls of each prompt (always when omitted).
class MockProvider : public Provider {
 public:
  static std::unique_ptr<MockProvider> from_json(std::string_view json_text);
  static std::unique_ptr<MockProvider> from_file(const std::filesystem::path& path);

  std::string complete(const CompletionRequest& request) override;
  std::string name() const override { return "mock"; }

  std::size_t request_count() const;
  // Number of requests whose prompt contains `needle`.
  std::size_t request_count_containing(std::string_view needle) const;

 private:
  struct Rule {
    std::vector<std::string> contains;
    std::vector<std::string> responses;
    bool sequence = false;
    std::optional<std::string> error;
    std::optional<int> times;
  };

  std::vector<Rule> rules_;
  std::map<std::string, std::string> replay_;
  std::optional<std::string> default_;

  mutable std::mutex mutex_;
  std::map<std::pair<std::size_t, std::string>, int> calls_;  // (rule, prompt hash) -> count
  std::vector<std::string> prompts_;
};

// Cache key: sha256 over model, temperature ("%.6f") and prompt joined by
// 0x1f, with "#<attempt>" appended for attempts after the first.
std::string cache_key(std::string_view model, double temperature, std::string_view prompt,
                      int attempt = 0);

struct SessionStats {
  std::size_t requests = 0;    // provider calls, retries included
  std::size_t cache_hits = 0;
  std::size_t retries = 0;
};

// Adds the response cache, transient-failure retries and the in-flight bound
// on top of a provider. Thread safe.
class Session {
 public:
  Session(Provider& provider, ProviderConfig config);

  // `attempt` distinguishes deliberate re-asks of the same prompt in the cache.
  std::string complete(std::string_view prompt, std::optional<double> temperature = std::nullopt,
                       int attempt = 0);

  const ProviderConfig& config() const { return config_; }
  SessionStats stats() const;

 private:
  std::optional<std::string> cache_read(const std::string& key) const;
  void cache_write(const std::string& key, std::string_view prompt, double temperature,
                   std::string_view response) const;
  std::string call_with_retries(const CompletionRequest& request);

  Provider& provider_;
  ProviderConfig config_;

  mutable std::mutex mutex_;
  std::condition_variable slot_free_;
  std::size_t in_flight_ = 0;
  SessionStats stats_;
};

}  // namespace codeperturb::provider
