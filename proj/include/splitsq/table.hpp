#pragma once

#include <string>
#include <vector>

#include <json.hpp>

namespace splitsq {

// Column data on one grid: `grid` holds the abscissa, each series one value
// per grid point.
struct Table {
  std::string grid_name;
  std::vector<double> grid;
  std::vector<std::string> names;
  std::vector<std::vector<double>> series;
  nlohmann::json spec = nlohmann::json::object();

  void add(std::string name, std::vector<double> values);  // throws DimensionMismatch
  const std::vector<double>& column(const std::string& name) const;  // throws DomainError
};

// %.17g; NaN and infinities as "nan", "inf", "-inf".
std::string format_number(double x);

// Header row of names, one row per grid point.
std::string to_csv(const Table& t);
// {"spec": ..., "grid": [...], "series": {name: [...]}}; non-finite values become null.
nlohmann::json to_json(const Table& t);

}  // namespace splitsq
