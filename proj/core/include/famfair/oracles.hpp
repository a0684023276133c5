#pragma once

#include "famfair/fairness.hpp"
#include "famfair/model.hpp"

#include <cstdint>
#include <optional>
#include <span>

namespace famfair {

struct OracleOptions {
  /// Largest k^m the enumeration may visit.
  std::uint64_t cap = std::uint64_t{1} << 24;
  /// Worker threads; 0 means hardware concurrency.
  int threads = 0;
  int mms_cap = kDefaultMmsCap;
};

struct OracleResult {
  Rational best_h;
  /// Lexicographically smallest assignment vector reaching best_h.
  Allocation witness;
  /// Allocations covered by the search (k^m for max_h).
  std::uint64_t allocations_examined = 0;
};

struct ExistsResult {
  bool found = false;
  std::optional<Allocation> witness;
  std::uint64_t allocations_examined = 0;
};

/// Number of total allocations, or nullopt when it exceeds `cap`.
std::optional<std::uint64_t> allocation_count(int k, int m, std::uint64_t cap);

/// Best democratic fraction over all k^m allocations. `criteria` holds one
/// criterion, or one per group. Throws CapExceeded above options.cap.
OracleResult max_h(const Instance& instance, std::span<const Criterion> criteria, const OracleOptions& options = {});
OracleResult max_h(const Instance& instance, const Criterion& criterion, const OracleOptions& options = {});

/// Whether some allocation is h-democratic fair; the witness is the
/// lexicographically smallest one.
ExistsResult exists_h(const Instance& instance, std::span<const Criterion> criteria, const Rational& h,
                      const OracleOptions& options = {});
ExistsResult exists_h(const Instance& instance, const Criterion& criterion, const Rational& h,
                      const OracleOptions& options = {});

}  // namespace famfair
