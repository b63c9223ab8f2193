#include "rigged/trend.hpp"

#include <cmath>
#include <limits>

#include "rigged/errors.hpp"

namespace rigged {

const char* const kTruncationNote =
    "finite truncation: trends over the ladder are evidence, not a certificate of the "
    "infinite-dimensional property";

const char* to_string(Verdict v) noexcept {
  switch (v) {
  case Verdict::pass:
    return "pass";
  case Verdict::fail:
    return "fail";
  case Verdict::strict:
    return "strict";
  case Verdict::non_strict:
    return "non-strict";
  case Verdict::inconclusive:
    return "inconclusive";
  case Verdict::tainted:
    return "tainted";
  }
  return "?";
}

double loglog_slope(std::span<const double> x, std::span<const double> y) {
  if (x.size() != y.size()) throw DimensionError("slope fit needs equal-length series");
  if (x.size() < 2) return std::numeric_limits<double>::quiet_NaN();
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  const double n = static_cast<double>(x.size());
  for (std::size_t i = 0; i < x.size(); ++i) {
    if (!(x[i] > 0.0) || !(y[i] > 0.0)) return std::numeric_limits<double>::quiet_NaN();
    const double lx = std::log(x[i]);
    const double ly = std::log(y[i]);
    sx += lx;
    sy += ly;
    sxx += lx * lx;
    sxy += lx * ly;
  }
  const double denom = n * sxx - sx * sx;
  if (denom == 0.0) return std::numeric_limits<double>::quiet_NaN();
  return (n * sxy - sx * sy) / denom;
}

SlopeSide compare_slope(double slope, double threshold, double straddle) {
  const double band = std::abs(threshold) * straddle;
  if (slope < threshold - band) return SlopeSide::below;
  if (slope > threshold + band) return SlopeSide::above;
  return SlopeSide::straddle;
}

void validate_ladder(const std::vector<std::size_t>& ladder) {
  if (ladder.empty()) throw ValidationError("ladder is empty");
  if (ladder.front() == 0) throw ValidationError("ladder entries must be positive");
  for (std::size_t i = 1; i < ladder.size(); ++i)
    if (ladder[i] <= ladder[i - 1]) throw ValidationError("ladder must be strictly increasing");
}

std::vector<double> as_doubles(const std::vector<std::size_t>& ladder) {
  return {ladder.begin(), ladder.end()};
}

} // namespace rigged
