#pragma once

// The verification battery: every identity of the library as a numerical
// check with a fixed tolerance, grouped into ten acceptance criteria.

#include <cstdint>
#include <string>
#include <vector>

#include <json.hpp>

namespace latw {

struct CheckRecord {
  std::string name;
  std::string property;
  int criterion = 0;
  int m = 0;
  std::size_t N = 0;
  int trials = 0;
  double max_residual = 0.0;
  double tolerance = 0.0;
  bool passed = false;
  /// The check hit a guarded hypothesis (co-primality, real even-m root).
  bool expected_failure = false;
  std::string note;
};

struct SuiteSize {
  int m;
  std::size_t N;
};

struct SuiteOptions {
  int trials = 20;
  int triple_trials = 100;
  int pair_trials = 50;
  /// Run sizes concurrently; results are assembled in size order either way.
  bool parallel = true;
};

struct VerificationReport {
  std::uint64_t seed = 0;
  std::vector<SuiteSize> sizes;
  std::vector<CheckRecord> records;
  nlohmann::json environment;

  /// Every record that is not an expected failure passed.
  bool all_passed() const;
  nlohmann::json to_json() const;
};

inline constexpr std::uint64_t kDefaultSeed = 20240611;

/// (2,3), (3,4), (3,5).
std::vector<SuiteSize> default_sizes();
/// The acceptance battery: m = 3, N = 4.
std::vector<SuiteSize> acceptance_sizes();
/// "3:4,3:5" -> {(3,4), (3,5)}.
std::vector<SuiteSize> parse_sizes(const std::string& s);

std::string criterion_title(int criterion);

/// Checks of one acceptance criterion (1..9) at one size.
std::vector<CheckRecord> run_criterion(int criterion, const SuiteSize& size, std::uint64_t seed,
                                       const SuiteOptions& options = {});

/// Criteria 1..9 at every size.
VerificationReport verify_suite(std::uint64_t seed, const std::vector<SuiteSize>& sizes,
                                const SuiteOptions& options = {});

/// Compiler, standard library and numeric settings; no timestamps.
nlohmann::json environment_fingerprint();

}  // namespace latw
