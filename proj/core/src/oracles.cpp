#include "famfair/oracles.hpp"

#include "famfair/errors.hpp"

#include <algorithm>
#include <atomic>
#include <functional>
#include <string>
#include <thread>
#include <vector>

namespace famfair {

namespace {

struct Range {
  std::uint64_t begin = 0;
  std::uint64_t end = 0;
};

std::vector<Range> shards(std::uint64_t total, int workers) {
  const std::uint64_t count = std::min<std::uint64_t>(total, static_cast<std::uint64_t>(workers) * 8);
  std::vector<Range> out;
  if (count == 0) return out;
  const std::uint64_t step = total / count;
  const std::uint64_t extra = total % count;
  std::uint64_t at = 0;
  for (std::uint64_t i = 0; i < count; ++i) {
    const std::uint64_t len = step + (i < extra ? 1 : 0);
    out.push_back({at, at + len});
    at += len;
  }
  return out;
}

int worker_count(const OracleOptions& options) {
  if (options.threads > 0) return options.threads;
  return std::max(1U, std::thread::hardware_concurrency());
}

/// Runs `body(shard)` for every shard index on a small pool.
void for_each_shard(size_t count, int workers, const std::function<void(size_t)>& body) {
  std::atomic<size_t> next{0};
  auto loop = [&]() {
    for (size_t i = next++; i < count; i = next++) body(i);
  };
  const int extra = std::min<int>(workers, static_cast<int>(count)) - 1;
  std::vector<std::thread> pool;
  for (int t = 0; t < extra; ++t) pool.emplace_back(loop);
  loop();
  for (auto& t : pool) t.join();
}

/// Odometer over assignment vectors, assignment[0] most significant.
class Cursor {
 public:
  Cursor(int k, int m, std::uint64_t code) : k_(k), digits_(static_cast<size_t>(m)), bundles_(static_cast<size_t>(k)) {
    for (int g = m - 1; g >= 0; --g) {
      digits_[static_cast<size_t>(g)] = static_cast<int>(code % static_cast<std::uint64_t>(k));
      code /= static_cast<std::uint64_t>(k);
    }
    for (int g = 0; g < m; ++g) bundles_[static_cast<size_t>(digits_[static_cast<size_t>(g)])].insert(g);
  }

  std::span<const Bundle> bundles() const { return bundles_; }
  const std::vector<int>& digits() const { return digits_; }

  void advance() {
    for (int g = static_cast<int>(digits_.size()) - 1; g >= 0; --g) {
      int& d = digits_[static_cast<size_t>(g)];
      bundles_[static_cast<size_t>(d)].erase(g);
      d = d + 1 == k_ ? 0 : d + 1;
      bundles_[static_cast<size_t>(d)].insert(g);
      if (d != 0) return;
    }
  }

 private:
  int k_;
  std::vector<int> digits_;
  std::vector<Bundle> bundles_;
};

std::uint64_t checked_total(const Instance& instance, const OracleOptions& options) {
  const auto total = allocation_count(instance.k(), instance.m(), options.cap);
  if (!total) {
    throw CapExceeded(std::to_string(instance.k()) + "^" + std::to_string(instance.m()) +
                      " allocations exceed the cap of " + std::to_string(options.cap));
  }
  return *total;
}

std::vector<Criterion> expand(std::span<const Criterion> criteria) {
  if (criteria.empty()) throw ValidationError("no criterion given");
  return {criteria.begin(), criteria.end()};
}

}  // namespace

std::optional<std::uint64_t> allocation_count(int k, int m, std::uint64_t cap) {
  std::uint64_t total = 1;
  for (int i = 0; i < m; ++i) {
    if (total > cap / static_cast<std::uint64_t>(k)) return std::nullopt;
    total *= static_cast<std::uint64_t>(k);
  }
  if (total > cap) return std::nullopt;
  return total;
}

OracleResult max_h(const Instance& instance, std::span<const Criterion> criteria, const OracleOptions& options) {
  const std::uint64_t total = checked_total(instance, options);
  const CriterionEvaluator eval(instance, expand(criteria), options.mms_cap);
  const int k = instance.k();

  struct Best {
    bool any = false;
    long num = 0;
    long den = 1;
    std::vector<int> assignment;
  };
  const auto ranges = shards(total, worker_count(options));
  std::vector<Best> best(ranges.size());

  for_each_shard(ranges.size(), worker_count(options), [&](size_t i) {
    Best& b = best[i];
    Cursor cursor(k, instance.m(), ranges[i].begin);
    for (std::uint64_t code = ranges[i].begin; code < ranges[i].end; ++code, cursor.advance()) {
      long num = 1;
      long den = 1;
      bool beaten = false;
      for (int g = 0; g < k && !beaten; ++g) {
        const long n = instance.group_size(g);
        const long happy = eval.happy_count(g, cursor.bundles());
        if (b.any && happy * b.den <= b.num * n) beaten = true;
        if (happy * den < num * n) {
          num = happy;
          den = n;
        }
      }
      if (!beaten) {
        b.any = true;
        b.num = num;
        b.den = den;
        b.assignment = cursor.digits();
      }
    }
  });

  const Best* winner = nullptr;
  for (const auto& b : best) {
    if (!b.any) continue;
    if (winner == nullptr || b.num * winner->den > winner->num * b.den) winner = &b;
  }
  if (winner == nullptr) return {Rational(1), Allocation(std::vector<int>(), k), total};
  Rational h(winner->num, winner->den);
  h.canonicalize();
  return {h, Allocation(winner->assignment, k), total};
}

OracleResult max_h(const Instance& instance, const Criterion& criterion, const OracleOptions& options) {
  return max_h(instance, std::span<const Criterion>(&criterion, 1), options);
}

ExistsResult exists_h(const Instance& instance, std::span<const Criterion> criteria, const Rational& h,
                      const OracleOptions& options) {
  const int k = instance.k();
  if (h <= 0) {
    return {true, Allocation(std::vector<int>(static_cast<size_t>(instance.m()), 0), k), 1};
  }
  const std::uint64_t total = checked_total(instance, options);
  const CriterionEvaluator eval(instance, expand(criteria), options.mms_cap);

  // Group g is satisfied when happy * den >= num * n_g.
  const BigInt hn = h.get_num();
  const BigInt hd = h.get_den();
  std::vector<int> need(static_cast<size_t>(k));
  for (int g = 0; g < k; ++g) {
    BigInt prod = hn * instance.group_size(g) + hd - 1;
    BigInt ceil = prod / hd;
    need[static_cast<size_t>(g)] = ceil.fits_sint_p() ? static_cast<int>(ceil.get_si()) : INT32_MAX;
  }

  const auto ranges = shards(total, worker_count(options));
  std::vector<std::optional<std::uint64_t>> hit(ranges.size());
  std::vector<std::vector<int>> witness(ranges.size());
  std::atomic<size_t> first_hit{ranges.size()};

  for_each_shard(ranges.size(), worker_count(options), [&](size_t i) {
    if (i > first_hit.load()) return;
    Cursor cursor(k, instance.m(), ranges[i].begin);
    for (std::uint64_t code = ranges[i].begin; code < ranges[i].end; ++code, cursor.advance()) {
      if (((code - ranges[i].begin) & 0xFFF) == 0xFFF && i > first_hit.load()) return;
      bool ok = true;
      for (int g = 0; g < k && ok; ++g) ok = eval.happy_count(g, cursor.bundles()) >= need[static_cast<size_t>(g)];
      if (ok) {
        hit[i] = code;
        witness[i] = cursor.digits();
        size_t seen = first_hit.load();
        while (i < seen && !first_hit.compare_exchange_weak(seen, i)) {
        }
        return;
      }
    }
  });

  for (size_t i = 0; i < ranges.size(); ++i) {
    if (hit[i]) return {true, Allocation(witness[i], k), *hit[i] + 1};
  }
  return {false, std::nullopt, total};
}

ExistsResult exists_h(const Instance& instance, const Criterion& criterion, const Rational& h,
                      const OracleOptions& options) {
  return exists_h(instance, std::span<const Criterion>(&criterion, 1), h, options);
}

}  // namespace famfair
