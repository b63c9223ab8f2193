#include "rigged/io.hpp"

#include <array>
#include <charconv>
#include <fstream>
#include <istream>
#include <ostream>
#include <string_view>
#include <vector>

#include "rigged/errors.hpp"

namespace rigged {

namespace {

struct Field {
  std::string_view text;
  std::size_t column; // 1-based character column
};

std::vector<Field> split_fields(std::string_view line) {
  std::vector<Field> out;
  std::size_t start = 0;
  while (true) {
    const std::size_t comma = line.find(',', start);
    const std::size_t end = comma == std::string_view::npos ? line.size() : comma;
    std::string_view f = line.substr(start, end - start);
    std::size_t lead = 0;
    while (lead < f.size() && (f[lead] == ' ' || f[lead] == '\t')) ++lead;
    f.remove_prefix(lead);
    while (!f.empty() && (f.back() == ' ' || f.back() == '\t')) f.remove_suffix(1);
    out.push_back({f, start + lead + 1});
    if (comma == std::string_view::npos) break;
    start = comma + 1;
  }
  return out;
}

bool parse_double(std::string_view s, double& v) {
  if (!s.empty() && s.front() == '+') s.remove_prefix(1);
  if (s.empty()) return false;
  const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  return ec == std::errc() && ptr == s.data() + s.size();
}

} // namespace

std::string format_double(double v) {
  std::array<char, 32> buf{};
  const auto [ptr, ec] = std::to_chars(buf.data(), buf.data() + buf.size(), v);
  if (ec != std::errc()) throw Error("failed to format double");
  return std::string(buf.data(), ptr);
}

CMatrix parse_matrix_csv(std::istream& in, const std::string& source) {
  std::vector<std::vector<cplx>> rows;
  std::string line;
  std::size_t line_no = 0;
  std::size_t width = 0;
  bool first = true;
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.find_first_not_of(" \t") == std::string::npos) continue;
    const auto fields = split_fields(line);
    std::vector<double> values;
    values.reserve(fields.size());
    bool ok = true;
    std::size_t bad = 0;
    for (std::size_t i = 0; i < fields.size() && ok; ++i) {
      double v = 0.0;
      ok = parse_double(fields[i].text, v);
      if (ok) values.push_back(v); else bad = i;
    }
    if (!ok) {
      if (first) { // header line
        first = false;
        continue;
      }
      throw ParseError(source, line_no, fields[bad].column,
                       "not a number: '" + std::string(fields[bad].text) + "'");
    }
    first = false;
    if (values.size() % 2 != 0)
      throw ParseError(source, line_no, fields.back().column,
                       "odd number of columns (" + std::to_string(values.size()) +
                           "); expected re,im pairs");
    const std::size_t entries = values.size() / 2;
    if (rows.empty()) width = entries;
    else if (entries != width)
      throw ParseError(source, line_no, 1,
                       "row has " + std::to_string(entries) + " entries, expected " +
                           std::to_string(width));
    std::vector<cplx> row(entries);
    for (std::size_t k = 0; k < entries; ++k) row[k] = cplx(values[2 * k], values[2 * k + 1]);
    rows.push_back(std::move(row));
  }
  if (rows.empty()) throw ParseError(source, line_no + 1, 1, "no data rows");
  CMatrix m(static_cast<Eigen::Index>(rows.size()), static_cast<Eigen::Index>(width));
  for (std::size_t i = 0; i < rows.size(); ++i)
    for (std::size_t k = 0; k < width; ++k)
      m(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(k)) = rows[i][k];
  return m;
}

CMatrix load_matrix(const std::string& path, std::optional<Shape> expected) {
  std::ifstream in(path);
  if (!in) throw Error("cannot open " + path);
  CMatrix m = parse_matrix_csv(in, path);
  if (expected && (m.rows() != expected->first || m.cols() != expected->second))
    throw DimensionError(path + ": expected " + std::to_string(expected->first) + "x" +
                         std::to_string(expected->second) + " matrix, got " +
                         std::to_string(m.rows()) + "x" + std::to_string(m.cols()));
  return m;
}

void write_matrix_csv(std::ostream& out, const CMatrix& m, bool header) {
  if (header) {
    for (Eigen::Index k = 0; k < m.cols(); ++k)
      out << (k ? "," : "") << "re" << k << ",im" << k;
    out << '\n';
  }
  for (Eigen::Index i = 0; i < m.rows(); ++i) {
    for (Eigen::Index k = 0; k < m.cols(); ++k)
      out << (k ? "," : "") << format_double(m(i, k).real()) << ',' << format_double(m(i, k).imag());
    out << '\n';
  }
}

void save_matrix(const std::string& path, const CMatrix& m, bool header) {
  std::ofstream out(path);
  if (!out) throw Error("cannot write " + path);
  write_matrix_csv(out, m, header);
  if (!out) throw Error("write failed for " + path);
}

void write_sampled_csv(std::ostream& out, const SampledFunction& f) {
  out << "x,re,im\n";
  for (Eigen::Index j = 0; j < f.values.size(); ++j)
    out << format_double(f.grid.node(static_cast<std::size_t>(j))) << ','
        << format_double(f.values(j).real()) << ',' << format_double(f.values(j).imag()) << '\n';
}

} // namespace rigged
