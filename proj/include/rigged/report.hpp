#pragma once

// Diagnostics report: ordered sections of numeric data plus verdicts, each
// verdict backed by the numbers it was decided from. Rendered as JSON (keys
// sorted, so output is byte-stable) or as a flat CSV of numeric series.

#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "rigged/trend.hpp"
#include "rigged/types.hpp"

namespace rigged {

using Json = nlohmann::json;

inline constexpr int kSchemaVersion = 1;
inline constexpr const char* kToolVersion = "0.1.0";

struct Evidence {
  std::string name;
  Json value;
};

class Section {
public:
  explicit Section(std::string name) : name_(std::move(name)), data_(Json::object()) {}

  const std::string& name() const noexcept { return name_; }

  Section& set(const std::string& key, Json value);
  /// Throws ValidationError when `evidence` is empty.
  Section& verdict(const std::string& name, Verdict v, std::vector<Evidence> evidence,
                   std::string note = {});
  void set_elapsed_ms(double ms) { elapsed_ms_ = ms; }

  Json to_json(bool timing) const;

private:
  std::string name_;
  Json data_;
  Json verdicts_ = Json::array();
  std::optional<double> elapsed_ms_;
};

struct DiagnosticsReport {
  Json meta = Json::object();
  std::vector<Section> sections;
  bool timing = true;
};

enum class ReportFormat { json, csv };

ReportFormat parse_format(const std::string& s);

Json to_json(const DiagnosticsReport& report);
std::string render_json(const DiagnosticsReport& report);
/// Rows section,series,index,value for every numeric leaf and every verdict.
std::string render_csv(const DiagnosticsReport& report);
std::string render(const DiagnosticsReport& report, ReportFormat format);
void save_report(const DiagnosticsReport& report, const std::string& path, ReportFormat format);

/// All verdict strings found in a rendered JSON report.
std::vector<std::string> collect_verdicts(const Json& report);

Json to_json(const RVector& v);
Json to_json(const CVector& v); // {"re": [...], "im": [...]}
Json to_json(const std::vector<double>& v);
Json to_json(const std::vector<std::size_t>& v);

/// Non-finite doubles become null in JSON; the string form keeps them readable.
Json number(double v);

} // namespace rigged
