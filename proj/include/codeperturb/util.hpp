#pragma once

#include <algorithm>
#include <atomic>
#include <cstddef>
#include <cstdint>
#include <exception>
#include <mutex>
#include <random>
#include <span>
#include <string>
#include <string_view>
#include <thread>
#include <utility>
#include <vector>

namespace codeperturb {

// ---------------------------------------------------------------------------
// Seeding and sampling
//
// Every random decision in the toolkit is made with std::mt19937_64, whose
// output sequence is fixed by the C++ standard, and the two helpers below,
// which do not depend on any library distribution. Results are therefore
// byte-identical across compilers and platforms.
// ---------------------------------------------------------------------------

// 64-bit FNV-1a over the bytes of `text`.
std::uint64_t fnv1a64(std::string_view text);

// SplitMix64 finalizer.
std::uint64_t splitmix64(std::uint64_t x);

// Seed for a labeled sub-stream: splitmix64(seed XOR fnv1a64(label)).
// Labels are "<stage>/<record id>" and similar, so the seed of one record
// never depends on which other records are processed or in what order.
std::uint64_t derive_seed(std::uint64_t seed, std::string_view label);

// Uniform integer in [0, bound) by rejection: draws x = rng() until
// x < 2^64 - (2^64 mod bound), then returns x mod bound. bound must be > 0.
std::uint64_t uniform_below(std::mt19937_64& rng, std::uint64_t bound);

// Fisher-Yates: for i = n-1 down to 1, j = uniform_below(rng, i + 1),
// swap(items[i], items[j]).
template <typename T>
void seeded_shuffle(std::span<T> items, std::mt19937_64& rng) {
  for (std::size_t i = items.size(); i > 1; --i) {
    const auto j = static_cast<std::size_t>(uniform_below(rng, i));
    using std::swap;
    swap(items[i - 1], items[j]);
  }
}

// ---------------------------------------------------------------------------
// Hashing
// ---------------------------------------------------------------------------

// Lowercase hex SHA-256 digest.
std::string sha256_hex(std::string_view data);

// ---------------------------------------------------------------------------
// Text helpers (ASCII semantics)
// ---------------------------------------------------------------------------

inline bool is_space(char c) {
  return c == ' ' || c == '\t' || c == '\n' || c == '\r' || c == '\v' || c == '\f';
}

std::string_view trim(std::string_view text);
std::string to_lower_ascii(std::string_view text);
bool starts_with_icase(std::string_view text, std::string_view prefix);
bool contains_icase(std::string_view haystack, std::string_view needle);
std::vector<std::string_view> split_lines(std::string_view text);
std::vector<std::string> split_whitespace(std::string_view text);

// ---------------------------------------------------------------------------
// Parallelism
// ---------------------------------------------------------------------------

// Applies fn(i) for i in [0, n) on up to `jobs` threads and returns the
// results in index order. The first exception thrown by any call is
// rethrown after all workers have stopped.
template <typename Fn>
auto parallel_map(std::size_t n, std::size_t jobs, Fn&& fn)
    -> std::vector<decltype(fn(std::size_t{}))> {
  using Result = decltype(fn(std::size_t{}));
  std::vector<Result> results(n);
  jobs = std::max<std::size_t>(1, std::min(jobs, n));
  if (jobs <= 1) {
    for (std::size_t i = 0; i < n; ++i) results[i] = fn(i);
    return results;
  }

  std::atomic<std::size_t> next{0};
  std::atomic<bool> failed{false};
  std::exception_ptr error;
  std::mutex error_mutex;
  {
    std::vector<std::jthread> workers;
    workers.reserve(jobs);
    for (std::size_t w = 0; w < jobs; ++w) {
      workers.emplace_back([&] {
        while (!failed.load()) {
          const std::size_t i = next.fetch_add(1);
          if (i >= n) return;
          try {
            results[i] = fn(i);
          } catch (...) {
            std::lock_guard lock(error_mutex);
            if (!error) error = std::current_exception();
            failed.store(true);
          }
        }
      });
    }
  }
  if (error) std::rethrow_exception(error);
  return results;
}

}  // namespace codeperturb
