#include "rigged/report.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <sstream>

#include "rigged/errors.hpp"
#include "rigged/io.hpp"

namespace rigged {

Section& Section::set(const std::string& key, Json value) {
  data_[key] = std::move(value);
  return *this;
}

Section& Section::verdict(const std::string& name, Verdict v, std::vector<Evidence> evidence,
                          std::string note) {
  if (evidence.empty()) throw ValidationError("verdict '" + name + "' has no evidence");
  Json ev = Json::array();
  for (auto& e : evidence) ev.push_back({{"name", e.name}, {"value", std::move(e.value)}});
  Json entry = {{"name", name}, {"verdict", to_string(v)}, {"evidence", std::move(ev)}};
  if (!note.empty()) entry["note"] = std::move(note);
  verdicts_.push_back(std::move(entry));
  return *this;
}

Json Section::to_json(bool timing) const {
  Json j = {{"name", name_}, {"data", data_}, {"verdicts", verdicts_}};
  if (timing && elapsed_ms_) j["elapsed_ms"] = *elapsed_ms_;
  return j;
}

ReportFormat parse_format(const std::string& s) {
  if (s == "json") return ReportFormat::json;
  if (s == "csv") return ReportFormat::csv;
  throw ValidationError("unknown output format '" + s + "' (expected json or csv)");
}

Json to_json(const DiagnosticsReport& report) {
  Json sections = Json::array();
  for (const auto& s : report.sections) sections.push_back(s.to_json(report.timing));
  return {{"meta", report.meta}, {"sections", std::move(sections)}};
}

std::string render_json(const DiagnosticsReport& report) { return to_json(report).dump(2) + "\n"; }

namespace {

void csv_field(std::ostream& out, const std::string& s) {
  if (s.find_first_of(",\"\n") == std::string::npos) {
    out << s;
    return;
  }
  out << '"';
  for (char c : s) {
    if (c == '"') out << '"';
    out << c;
  }
  out << '"';
}

void csv_row(std::ostream& out, const std::string& section, const std::string& series,
             std::size_t index, const std::string& value) {
  csv_field(out, section);
  out << ',';
  csv_field(out, series);
  out << ',' << index << ',';
  csv_field(out, value);
  out << '\n';
}

std::string leaf_text(const Json& v) {
  if (v.is_number_float()) return format_double(v.get<double>());
  if (v.is_number()) return v.dump();
  if (v.is_null()) return "nan";
  if (v.is_boolean()) return v.get<bool>() ? "1" : "0";
  return {};
}

bool is_leaf(const Json& v) { return v.is_number() || v.is_null() || v.is_boolean(); }

void flatten(std::ostream& out, const std::string& section, const std::string& series,
             const Json& v) {
  if (is_leaf(v)) {
    csv_row(out, section, series, 0, leaf_text(v));
  } else if (v.is_array()) {
    const bool flat = std::all_of(v.begin(), v.end(), [](const Json& e) { return is_leaf(e); });
    if (flat) {
      for (std::size_t i = 0; i < v.size(); ++i) csv_row(out, section, series, i, leaf_text(v[i]));
    } else {
      for (std::size_t i = 0; i < v.size(); ++i)
        flatten(out, section, series + "[" + std::to_string(i) + "]", v[i]);
    }
  } else if (v.is_object()) {
    for (const auto& [k, e] : v.items()) flatten(out, section, series.empty() ? k : series + "." + k, e);
  }
}

} // namespace

std::string render_csv(const DiagnosticsReport& report) {
  std::ostringstream out;
  out << "section,series,index,value\n";
  for (const auto& s : report.sections) {
    const Json j = s.to_json(report.timing);
    flatten(out, s.name(), "", j["data"]);
    for (const auto& v : j["verdicts"]) {
      const std::string base = "verdict." + v["name"].get<std::string>();
      csv_row(out, s.name(), base, 0, v["verdict"].get<std::string>());
      for (const auto& e : v["evidence"])
        flatten(out, s.name(), base + "." + e["name"].get<std::string>(), e["value"]);
    }
    if (j.contains("elapsed_ms")) flatten(out, s.name(), "elapsed_ms", j["elapsed_ms"]);
  }
  return out.str();
}

std::string render(const DiagnosticsReport& report, ReportFormat format) {
  return format == ReportFormat::json ? render_json(report) : render_csv(report);
}

void save_report(const DiagnosticsReport& report, const std::string& path, ReportFormat format) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error("cannot write " + path);
  out << render(report, format);
  if (!out) throw Error("write failed for " + path);
}

std::vector<std::string> collect_verdicts(const Json& report) {
  std::vector<std::string> out;
  for (const auto& s : report.at("sections"))
    for (const auto& v : s.at("verdicts")) out.push_back(v.at("verdict").get<std::string>());
  return out;
}

Json number(double v) { return std::isfinite(v) ? Json(v) : Json(nullptr); }

Json to_json(const RVector& v) {
  Json a = Json::array();
  for (Eigen::Index i = 0; i < v.size(); ++i) a.push_back(number(v(i)));
  return a;
}

Json to_json(const CVector& v) {
  Json re = Json::array(), im = Json::array();
  for (Eigen::Index i = 0; i < v.size(); ++i) {
    re.push_back(number(v(i).real()));
    im.push_back(number(v(i).imag()));
  }
  return {{"re", std::move(re)}, {"im", std::move(im)}};
}

Json to_json(const std::vector<double>& v) {
  Json a = Json::array();
  for (double x : v) a.push_back(number(x));
  return a;
}

Json to_json(const std::vector<std::size_t>& v) { return Json(v); }

} // namespace rigged
