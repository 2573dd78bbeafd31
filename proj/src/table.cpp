#include "splitsq/table.hpp"

#include <cmath>
#include <cstdio>

#include "splitsq/errors.hpp"

namespace splitsq {

void Table::add(std::string name, std::vector<double> values) {
  if (values.size() != grid.size()) throw DimensionMismatch("Table::add: series '" + name + "' has wrong length");
  names.push_back(std::move(name));
  series.push_back(std::move(values));
}

const std::vector<double>& Table::column(const std::string& name) const {
  for (std::size_t i = 0; i < names.size(); ++i)
    if (names[i] == name) return series[i];
  throw DomainError("Table::column: no series named '" + name + "'");
}

std::string format_number(double x) {
  if (std::isnan(x)) return "nan";
  if (std::isinf(x)) return x > 0 ? "inf" : "-inf";
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", x);
  return buf;
}

std::string to_csv(const Table& t) {
  std::string out = t.grid_name;
  for (const auto& n : t.names) out += "," + n;
  out += "\n";
  for (std::size_t i = 0; i < t.grid.size(); ++i) {
    out += format_number(t.grid[i]);
    for (const auto& s : t.series) out += "," + format_number(s[i]);
    out += "\n";
  }
  return out;
}

namespace {

nlohmann::json values(const std::vector<double>& v) {
  auto out = nlohmann::json::array();
  for (double x : v) {
    if (std::isfinite(x))
      out.push_back(x);
    else
      out.push_back(nullptr);
  }
  return out;
}

}  // namespace

nlohmann::json to_json(const Table& t) {
  nlohmann::json series = nlohmann::json::object();
  for (std::size_t i = 0; i < t.names.size(); ++i) series[t.names[i]] = values(t.series[i]);
  nlohmann::json spec = t.spec;
  spec["grid_name"] = t.grid_name;
  return {{"spec", spec}, {"grid", values(t.grid)}, {"series", series}};
}

}  // namespace splitsq
