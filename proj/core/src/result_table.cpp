#include "bergman/error.hpp"
#include "bergman/experiments.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>

namespace bergman {

std::string format_number(double v) {
  if (std::isnan(v)) return "nan";
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.10g", v);
  return buf;
}

nlohmann::json Check::to_json() const {
  nlohmann::json j{{"name", name}, {"measured", measured}, {"relation", relation}, {"pass", pass}};
  if (relation == "in") {
    j["bounds"] = {lo, hi};
  } else {
    j["bound"] = lo;
  }
  if (!note.empty()) j["note"] = note;
  return j;
}

ResultTable::ResultTable(std::string experiment, std::vector<std::string> columns)
    : experiment_(std::move(experiment)), columns_(std::move(columns)) {}

void ResultTable::add_row(std::vector<Cell> row) {
  if (row.size() != columns_.size()) throw ParameterError("ResultTable: row width differs from the header");
  rows_.push_back(std::move(row));
}

const Check& ResultTable::check(const std::string& name, double measured, const std::string& relation, double lo,
                                double hi, const std::string& note) {
  Check c{name, measured, relation, lo, hi, false, note};
  const bool finite = std::isfinite(measured);
  if (relation == "<") c.pass = finite && measured < lo;
  else if (relation == "<=") c.pass = finite && measured <= lo;
  else if (relation == ">") c.pass = finite && measured > lo;
  else if (relation == ">=") c.pass = finite && measured >= lo;
  else if (relation == "in") c.pass = finite && measured >= lo && measured <= hi;
  else throw ParameterError("ResultTable: unknown relation '" + relation + "'");
  checks_.push_back(c);
  return checks_.back();
}

const Check* ResultTable::find_check(const std::string& name) const {
  for (const auto& c : checks_)
    if (c.name == name) return &c;
  return nullptr;
}

bool ResultTable::passed() const {
  for (const auto& c : checks_)
    if (!c.pass) return false;
  return true;
}

std::string ResultTable::csv() const {
  std::ostringstream os;
  for (std::size_t i = 0; i < columns_.size(); ++i) os << (i ? "," : "") << columns_[i];
  os << '\n';
  for (const auto& row : rows_) {
    for (std::size_t i = 0; i < row.size(); ++i) {
      if (i) os << ',';
      const auto& c = row[i];
      if (c.is_number()) os << format_number(c.get<double>());
      else if (c.is_boolean()) os << (c.get<bool>() ? "true" : "false");
      else if (c.is_string()) {
        const auto s = c.get<std::string>();
        if (s.find_first_of(",\"\n") == std::string::npos) {
          os << s;
        } else {
          os << '"';
          for (char ch : s) os << (ch == '"' ? "\"\"" : std::string(1, ch));
          os << '"';
        }
      } else {
        os << c.dump();
      }
    }
    os << '\n';
  }
  return os.str();
}

nlohmann::json ResultTable::document() const {
  nlohmann::json j = meta_;
  j["experiment"] = experiment_;
  j["columns"] = columns_;
  j["rows"] = rows_.size();
  j["checks"] = nlohmann::json::array();
  for (const auto& c : checks_) j["checks"].push_back(c.to_json());
  j["passed"] = passed();
  return j;
}

void ResultTable::write(const std::filesystem::path& dir) const {
  std::error_code ec;
  std::filesystem::create_directories(dir, ec);
  if (ec) throw ConfigError("cannot create output directory " + dir.string() + ": " + ec.message());
  const auto stem = dir / experiment_;
  std::ofstream c(stem.string() + ".csv");
  std::ofstream m(stem.string() + ".json");
  if (!c || !m) throw ConfigError("cannot write results under " + dir.string());
  c << csv();
  m << document().dump(2) << '\n';
}

}  // namespace bergman
