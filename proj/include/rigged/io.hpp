#pragma once

// CSV matrices: one row per matrix row, two columns (re, im) per complex
// entry, optional header line. Doubles are written in shortest round-trip
// form so load(save(x)) == x bit for bit.

#include <cstddef>
#include <iosfwd>
#include <optional>
#include <string>
#include <utility>

#include "rigged/function_spaces.hpp"
#include "rigged/types.hpp"

namespace rigged {

using Shape = std::pair<Eigen::Index, Eigen::Index>;

std::string format_double(double v);

/// Throws ParseError with line/column on malformed input; `source` names the
/// stream in messages.
CMatrix parse_matrix_csv(std::istream& in, const std::string& source = "<stream>");

/// Throws DimensionError naming the file when the shape differs from `expected`.
CMatrix load_matrix(const std::string& path, std::optional<Shape> expected = {});

void write_matrix_csv(std::ostream& out, const CMatrix& m, bool header = false);
void save_matrix(const std::string& path, const CMatrix& m, bool header = false);

/// Columns x, re, im.
void write_sampled_csv(std::ostream& out, const SampledFunction& f);

} // namespace rigged
