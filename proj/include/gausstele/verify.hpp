#pragma once

#include <cstddef>
#include <cstdint>
#include <string>
#include <vector>

namespace gausstele {

struct CheckResult {
  std::string name;
  double max_deviation = 0.0;
  double tolerance = 0.0;
  std::size_t samples = 0;
  std::string worst_case;  ///< parameter tuple at the largest deviation
  double seconds = 0.0;

  bool passed() const noexcept { return max_deviation <= tolerance; }
};

struct VerifyOptions {
  std::size_t grid_size = 200;
  std::uint64_t seed = 20091014;
  /// Name of a check (or "all") whose closed form is perturbed before
  /// comparison. Used as a negative control; empty means no fault.
  std::string inject_fault;
  /// Worker threads; 0 picks std::thread::hardware_concurrency().
  unsigned threads = 0;
};

struct VerifyReport {
  std::vector<CheckResult> checks;
  double elapsed_seconds = 0.0;

  bool all_passed() const noexcept;
};

/// Pairs every closed form with its oracle on `grid_size` random tuples per
/// check. Results are independent of the thread count.
VerifyReport run_verification(const VerifyOptions& options = {});

std::vector<std::string> verification_check_names();

}  // namespace gausstele
