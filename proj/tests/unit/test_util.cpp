#include <doctest.h>

#include <numeric>
#include <stdexcept>

#include "codeperturb/util.hpp"

using namespace codeperturb;

TEST_SUITE("util") {
  TEST_CASE("fnv1a64 and splitmix64 reference values") {
    CHECK(fnv1a64("") == 0xcbf29ce484222325ULL);
    CHECK(fnv1a64("a") == 0xaf63dc4c8601ec8cULL);
    CHECK(splitmix64(0) == 0xe220a8397b1dcdafULL);
  }

  TEST_CASE("derive_seed matches the reference sampler") {
    // Frozen from tests/oracles/seeded_draws.py.
    CHECK(derive_seed(42, "swap_comments_local/r1") == 16180963640666552101ULL);
  }

  TEST_CASE("seeded_shuffle matches the reference sampler") {
    std::vector<std::string> abc = {"A", "B", "C"};
    std::mt19937_64 rng(7);
    seeded_shuffle(std::span<std::string>(abc), rng);
    CHECK(abc == std::vector<std::string>{"B", "C", "A"});

    std::vector<std::string> five = {"A", "B", "C", "D", "E"};
    std::mt19937_64 rng2(2024);
    seeded_shuffle(std::span<std::string>(five), rng2);
    CHECK(five == std::vector<std::string>{"D", "A", "C", "B", "E"});
  }

  TEST_CASE("uniform_below stays in range and rejects a zero bound") {
    std::mt19937_64 rng(1);
    for (std::uint64_t bound : {1ULL, 2ULL, 3ULL, 7ULL, 1000ULL, (1ULL << 63) + 5}) {
      for (int i = 0; i < 200; ++i) CHECK(uniform_below(rng, bound) < bound);
    }
    CHECK_THROWS_AS(uniform_below(rng, 0), std::invalid_argument);
  }

  TEST_CASE("shuffle is a permutation for random sizes") {
    std::mt19937_64 gen(99);
    for (int round = 0; round < 100; ++round) {
      const std::size_t n = gen() % 40;
      std::vector<int> v(n);
      std::iota(v.begin(), v.end(), 0);
      std::mt19937_64 rng(gen());
      seeded_shuffle(std::span<int>(v), rng);
      auto sorted = v;
      std::sort(sorted.begin(), sorted.end());
      std::vector<int> expected(n);
      std::iota(expected.begin(), expected.end(), 0);
      CHECK(sorted == expected);
    }
  }

  TEST_CASE("sha256_hex known vectors") {
    CHECK(sha256_hex("") == "e3b0c44298fc1c149afbf4c8996fb92427ae41e4649b934ca495991b7852b855");
    CHECK(sha256_hex("abc") == "ba7816bf8f01cfea414140de5dae2223b00361a396177a9cb410ff61f20015ad");
  }

  TEST_CASE("text helpers") {
    CHECK(trim("  a b \n") == "a b");
    CHECK(trim(" \t") == "");
    CHECK(to_lower_ascii("MiXeD") == "mixed");
    CHECK(starts_with_icase("Hello", "hE"));
    CHECK_FALSE(starts_with_icase("He", "hello"));
    CHECK(contains_icase("Write an SQL query", "sql"));
    CHECK(split_whitespace("  a  b\tc\n") == std::vector<std::string>{"a", "b", "c"});
  }

  TEST_CASE("parallel_map keeps input order and propagates errors") {
    for (std::size_t jobs : {1u, 2u, 8u}) {
      auto out = parallel_map(500, jobs, [](std::size_t i) { return i * i; });
      REQUIRE(out.size() == 500);
      for (std::size_t i = 0; i < out.size(); ++i) CHECK(out[i] == i * i);
    }
    CHECK_THROWS_AS(parallel_map(50, 4,
                                 [](std::size_t i) -> int {
                                   if (i == 17) throw std::runtime_error("boom");
                                   return 0;
                                 }),
                    std::runtime_error);
  }
}
