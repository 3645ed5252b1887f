#pragma once

// File formats: population tables (CSV `id,p,s,lambda` or the same fields in
// JSON), keyed weight/likelihood columns, ordering reports and run
// manifests.

#include <algorithm>
#include <cctype>
#include <cmath>
#include <cstddef>
#include <fstream>
#include <istream>
#include <map>
#include <optional>
#include <ostream>
#include <sstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "iws/distribution.hpp"
#include "iws/error.hpp"
#include "iws/ordering.hpp"
#include "iws/population.hpp"

namespace iws {

struct PopulationTable {
  Population population;
  std::optional<std::vector<double>> lambda;
};

namespace detail {

inline std::string trim(std::string s) {
  const auto not_space = [](unsigned char c) { return !std::isspace(c); };
  s.erase(s.begin(), std::find_if(s.begin(), s.end(), not_space));
  s.erase(std::find_if(s.rbegin(), s.rend(), not_space).base(), s.end());
  return s;
}

inline std::vector<std::string> split_csv_line(const std::string& line) {
  std::vector<std::string> fields;
  std::string field;
  std::istringstream is(line);
  while (std::getline(is, field, ',')) fields.push_back(trim(field));
  if (!line.empty() && line.back() == ',') fields.emplace_back();
  return fields;
}

inline double parse_number(const std::string& text, const std::string& where) {
  try {
    std::size_t used = 0;
    const double v = std::stod(text, &used);
    if (used != text.size()) throw std::invalid_argument(text);
    return v;
  } catch (const std::exception&) {
    throw validation_error(where + ": `" + text + "` is not a number");
  }
}

/// Header-keyed CSV table; blank lines and `#` comment lines are skipped.
struct CsvTable {
  std::vector<std::string> header;
  std::vector<std::vector<std::string>> rows;

  std::optional<std::size_t> column(const std::string& name) const {
    const auto it = std::find(header.begin(), header.end(), name);
    if (it == header.end()) return std::nullopt;
    return static_cast<std::size_t>(it - header.begin());
  }
};

inline CsvTable read_csv(std::istream& is) {
  CsvTable table;
  std::string line;
  while (std::getline(is, line)) {
    if (!line.empty() && line.back() == '\r') line.pop_back();
    const std::string t = trim(line);
    if (t.empty() || t.front() == '#') continue;
    auto fields = split_csv_line(t);
    if (table.header.empty()) {
      table.header = std::move(fields);
      continue;
    }
    if (fields.size() != table.header.size()) {
      throw validation_error("CSV row " + std::to_string(table.rows.size() + 1) + " has " +
                             std::to_string(fields.size()) + " fields, header has " +
                             std::to_string(table.header.size()));
    }
    table.rows.push_back(std::move(fields));
  }
  if (table.header.empty()) throw validation_error("CSV input is empty");
  return table;
}

inline std::ifstream open_input(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw validation_error("cannot open `" + path + "`");
  return in;
}

inline bool has_json_extension(const std::string& path) {
  return path.size() >= 5 && path.compare(path.size() - 5, 5, ".json") == 0;
}

}  // namespace detail

inline PopulationTable read_population_csv(std::istream& is) {
  const detail::CsvTable table = detail::read_csv(is);
  const auto p_col = table.column("p");
  if (!p_col) throw validation_error("population CSV needs a `p` column");
  const auto id_col = table.column("id");
  const auto s_col = table.column("s");
  const auto lambda_col = table.column("lambda");

  std::vector<double> p, s, lambda;
  std::vector<std::string> ids;
  for (std::size_t r = 0; r < table.rows.size(); ++r) {
    const auto& row = table.rows[r];
    const std::string where = "row " + std::to_string(r + 1);
    p.push_back(detail::parse_number(row[*p_col], where + " p"));
    if (id_col) ids.push_back(row[*id_col]);
    if (s_col) s.push_back(row[*s_col].empty() ? 1.0 : detail::parse_number(row[*s_col], where + " s"));
    if (lambda_col) lambda.push_back(detail::parse_number(row[*lambda_col], where + " lambda"));
  }
  PopulationTable out{validate_population(std::move(p), s_col ? std::optional(std::move(s)) : std::nullopt,
                                          std::move(ids)),
                      std::nullopt};
  if (lambda_col) out.lambda = std::move(lambda);
  return out;
}

/// Accepts either a top-level array of `{id, p, s, lambda}` objects or an
/// object holding that array under "items".
inline PopulationTable read_population_json(std::istream& is) {
  nlohmann::json doc;
  try {
    is >> doc;
  } catch (const nlohmann::json::exception& e) {
    throw validation_error(std::string("population JSON: ") + e.what());
  }
  const nlohmann::json& items = doc.is_object() && doc.contains("items") ? doc["items"] : doc;
  if (!items.is_array()) throw validation_error("population JSON must be an array of items");

  std::vector<double> p, s, lambda;
  std::vector<std::string> ids;
  bool any_s = false, any_lambda = false;
  try {
    for (const auto& item : items) {
      p.push_back(item.at("p").get<double>());
      if (item.contains("id")) {
        ids.push_back(item["id"].is_string() ? item["id"].get<std::string>() : item["id"].dump());
      }
      any_s = any_s || item.contains("s");
      s.push_back(item.value("s", 1.0));
      any_lambda = any_lambda || item.contains("lambda");
      lambda.push_back(item.value("lambda", 0.0));
    }
  } catch (const nlohmann::json::exception& e) {
    throw validation_error(std::string("population JSON: ") + e.what());
  }
  if (!ids.empty() && ids.size() != p.size()) throw validation_error("population JSON: `id` given for only some items");
  PopulationTable out{validate_population(std::move(p), any_s ? std::optional(std::move(s)) : std::nullopt,
                                          std::move(ids)),
                      std::nullopt};
  if (any_lambda) out.lambda = std::move(lambda);
  return out;
}

inline PopulationTable load_population(const std::string& path) {
  auto in = detail::open_input(path);
  return detail::has_json_extension(path) ? read_population_json(in) : read_population_csv(in);
}

inline void write_population_csv(std::ostream& os, const Population& pop,
                                 const std::optional<std::vector<double>>& lambda = std::nullopt) {
  os << "id,p,s" << (lambda ? ",lambda" : "") << '\n';
  for (std::size_t i = 0; i < pop.size(); ++i) {
    os << pop.id(i) << ',' << detail::format_double(pop.p(i)) << ',' << detail::format_double(pop.s(i));
    if (lambda) os << ',' << detail::format_double((*lambda)[i]);
    os << '\n';
  }
}

/// Reads one numeric column aligned to the population. Rows are matched by
/// `id` when the file has an id column, otherwise taken in order.
inline std::vector<double> read_keyed_column(std::istream& is, const Population& pop, const std::string& column) {
  const detail::CsvTable table = detail::read_csv(is);
  auto value_col = table.column(column);
  if (!value_col && table.header.size() == 1) value_col = 0;
  if (!value_col && table.header.size() == 2 && table.column("id")) value_col = 1 - *table.column("id");
  if (!value_col) throw validation_error("CSV needs a `" + column + "` column");
  if (table.rows.size() != pop.size()) {
    throw validation_error("CSV has " + std::to_string(table.rows.size()) + " rows, population has " +
                           std::to_string(pop.size()) + " items");
  }
  std::vector<double> out(pop.size());
  const auto id_col = table.column("id");
  if (!id_col) {
    for (std::size_t r = 0; r < table.rows.size(); ++r) {
      out[r] = detail::parse_number(table.rows[r][*value_col], column + " row " + std::to_string(r + 1));
    }
    return out;
  }
  std::map<std::string, std::size_t> index;
  for (std::size_t i = 0; i < pop.size(); ++i) index.emplace(pop.id(i), i);
  std::vector<bool> seen(pop.size(), false);
  for (const auto& row : table.rows) {
    const auto it = index.find(row[*id_col]);
    if (it == index.end()) throw validation_error("unknown item id `" + row[*id_col] + "`");
    if (seen[it->second]) throw validation_error("duplicate item id `" + row[*id_col] + "`");
    seen[it->second] = true;
    out[it->second] = detail::parse_number(row[*value_col], column + " for id " + row[*id_col]);
  }
  return out;
}

inline std::vector<double> load_keyed_column(const std::string& path, const Population& pop, const std::string& column) {
  auto in = detail::open_input(path);
  return read_keyed_column(in, pop, column);
}

// ---------------------------------------------------------------------------

inline nlohmann::json to_json(const DominanceVerdict& v) {
  nlohmann::json j{{"relation", std::string(to_string(v.relation))}, {"tolerance", v.tolerance}, {"max_gap", v.max_gap}};
  if (v.witnesses) {
    j["witnesses"] = {{"favors_x", v.witnesses->favors_x}, {"favors_y", v.witnesses->favors_y}};
  } else {
    j["witnesses"] = nullptr;
  }
  return j;
}

/// Verdict matrix keyed by model pair, with witnesses and expectations.
inline nlohmann::json to_json(const OrderingReport& report) {
  nlohmann::json j;
  j["law"] = std::string(to_string(report.law));
  j["ikl_q"] = report.ikl_q;
  j["models"] = nlohmann::json::array();
  for (Model m : kAllModels) j["models"].push_back(std::string(to_string(m)));

  nlohmann::json matrix = nlohmann::json::object();
  for (Model a : kAllModels) {
    for (Model b : kAllModels) {
      matrix[std::string(to_string(a))][std::string(to_string(b))] =
          a == b ? "equal" : std::string(to_string(report.relation(a, b)));
    }
  }
  j["matrix"] = matrix;

  j["pairs"] = nlohmann::json::array();
  j["mismatches"] = nlohmann::json::array();
  for (const PairCheck& pc : report.pairs) {
    const std::string key = std::string(to_string(pc.x)) + "|" + std::string(to_string(pc.y));
    nlohmann::json entry = to_json(pc.verdict);
    entry["pair"] = key;
    entry["x"] = std::string(to_string(pc.x));
    entry["y"] = std::string(to_string(pc.y));
    entry["expected"] = std::string(to_string(pc.expected));
    entry["mismatch"] = pc.mismatch;
    j["pairs"].push_back(entry);
    if (pc.mismatch) j["mismatches"].push_back(key);
  }

  j["summaries"] = nlohmann::json::array();
  for (const ModelSummary& s : report.summaries) {
    nlohmann::json entry{{"model", std::string(to_string(s.model))},
                         {"mean_is_infinite", !std::isfinite(s.mean)},
                         {"detected_mean", s.detected_mean},
                         {"atom_at_infinity", s.atom_at_infinity},
                         {"defective", s.defective}};
    entry["mean"] = std::isfinite(s.mean) ? nlohmann::json(s.mean) : nlohmann::json(nullptr);
    j["summaries"].push_back(entry);
  }
  j["corollary_violations"] = report.corollary_violations;
  return j;
}

/// Provenance record written next to every output.
struct RunManifest {
  std::string command;
  std::string input;
  nlohmann::json parameters = nlohmann::json::object();
  std::string version;
  std::vector<std::string> outputs;
};

inline nlohmann::json to_json(const RunManifest& m) {
  return {{"command", m.command},
          {"input", m.input},
          {"parameters", m.parameters},
          {"version", m.version},
          {"outputs", m.outputs}};
}

}  // namespace iws
