#pragma once

// Verdict vocabulary and the ladder-trend conventions used wherever an
// infinite-dimensional statement is replaced by behaviour over a ladder of
// truncation sizes.

#include <cstddef>
#include <future>
#include <span>
#include <string>
#include <type_traits>
#include <vector>

namespace rigged {

enum class Verdict { pass, fail, strict, non_strict, inconclusive, tainted };

const char* to_string(Verdict v) noexcept;

struct TrendRule {
  double threshold = 0.5;      // growth exponent separating bounded from growing
  double straddle = 0.10;      // relative band around the threshold treated as undecided
  std::size_t min_points = 4;  // ladder points needed before any trend verdict
};

enum class SlopeSide { below, above, straddle };

/// Least-squares slope of log(y) against log(x).
double loglog_slope(std::span<const double> x, std::span<const double> y);

SlopeSide compare_slope(double slope, double threshold, double straddle);

/// Throws ValidationError unless the ladder is non-empty and strictly increasing.
void validate_ladder(const std::vector<std::size_t>& ladder);

std::vector<double> as_doubles(const std::vector<std::size_t>& ladder);

/// Evaluates fn(N) for every ladder entry concurrently; results come back in
/// ladder order.
template <class Fn>
auto map_ladder(const std::vector<std::size_t>& ladder, Fn fn)
    -> std::vector<std::invoke_result_t<Fn, std::size_t>> {
  using R = std::invoke_result_t<Fn, std::size_t>;
  std::vector<std::future<R>> pending;
  pending.reserve(ladder.size());
  for (std::size_t n : ladder) pending.push_back(std::async(std::launch::async, fn, n));
  std::vector<R> out;
  out.reserve(ladder.size());
  for (auto& f : pending) out.push_back(f.get());
  return out;
}

/// Note attached to every report that draws an infinite-dimensional
/// conclusion from finite truncations.
extern const char* const kTruncationNote;

} // namespace rigged
