#include "fcpd/io.hpp"

#include <cctype>
#include <charconv>
#include <fstream>
#include <json.hpp>
#include <sstream>
#include <vector>

#include "fcpd/errors.hpp"

namespace fcpd {

namespace {

std::vector<std::string> split_csv_line(const std::string& line) {
  std::vector<std::string> fields;
  std::string field;
  std::stringstream ss(line);
  while (std::getline(ss, field, ',')) fields.push_back(field);
  if (!line.empty() && line.back() == ',') fields.emplace_back();
  return fields;
}

bool parse_double(const std::string& raw, double& out) {
  const char* begin = raw.data();
  const char* end = raw.data() + raw.size();
  while (begin < end && std::isspace(static_cast<unsigned char>(*begin)))
    ++begin;
  while (end > begin && std::isspace(static_cast<unsigned char>(end[-1])))
    --end;
  if (begin == end) return false;
  const auto result = std::from_chars(begin, end, out);
  return result.ec == std::errc{} && result.ptr == end;
}

}  // namespace

FunctionalSample load_sample(const std::string& path, SampleFormat format) {
  std::ifstream in(path);
  if (!in) throw DataError("cannot open file: " + path);

  FunctionalSample sample;

  if (format == SampleFormat::csv_rows) {
    std::vector<std::vector<std::string>> rows;
    std::string line;
    while (std::getline(in, line)) {
      if (!line.empty() && line.back() == '\r') line.pop_back();
      if (line.empty()) continue;
      rows.push_back(split_csv_line(line));
    }
    if (rows.empty()) throw FormatError("empty CSV file: " + path);

    // Header detection: a first line whose trailing field is not a
    // number cannot be a data row (labels only ever occupy column 0).
    double probe;
    if (!parse_double(rows.front().back(), probe)) rows.erase(rows.begin());
    if (rows.empty()) throw FormatError("CSV has a header but no data rows");

    const bool has_labels = !parse_double(rows.front().front(), probe);
    const std::size_t n_cols = rows.front().size();
    const std::size_t n_values = n_cols - (has_labels ? 1 : 0);
    if (n_values < 2) throw FormatError("CSV rows need at least 2 values");

    const std::size_t n = rows.size();
    sample.n_obs = n;
    sample.n_components = 1;
    sample.grid = Grid::uniform01(n_values);
    sample.values.resize(static_cast<Eigen::Index>(n),
                         static_cast<Eigen::Index>(n_values));
    if (has_labels) sample.labels.reserve(n);

    for (std::size_t i = 0; i < n; ++i) {
      const auto& fields = rows[i];
      if (fields.size() != n_cols)
        throw FormatError("ragged CSV row " + std::to_string(i + 1) +
                          ": expected " + std::to_string(n_cols) +
                          " fields, got " + std::to_string(fields.size()));
      if (has_labels) sample.labels.push_back(fields[0]);
      for (std::size_t j = 0; j < n_values; ++j) {
        double v;
        if (!parse_double(fields[j + (has_labels ? 1 : 0)], v))
          throw DataError("non-numeric entry in CSV row " +
                          std::to_string(i + 1));
        if (!std::isfinite(v))
          throw DataError("non-finite entry in CSV row " +
                          std::to_string(i + 1));
        sample.values(static_cast<Eigen::Index>(i),
                      static_cast<Eigen::Index>(j)) = v;
      }
    }
  } else {
    nlohmann::json doc;
    try {
      in >> doc;
    } catch (const nlohmann::json::exception& e) {
      throw FormatError("invalid JSON in " + path + ": " + e.what());
    }
    try {
      const auto& jgrid = doc.at("grid");
      sample.grid.dim = jgrid.at("dim").get<std::size_t>();
      sample.grid.points_per_axis =
          jgrid.at("points_per_axis").get<std::vector<std::size_t>>();
      sample.grid.spacing = jgrid.at("spacing").get<std::vector<double>>();
      sample.n_components = doc.at("r").get<std::size_t>();
      const auto& jvalues = doc.at("values");
      if (!jvalues.is_array() || jvalues.empty())
        throw FormatError("JSON 'values' must be a non-empty array");
      sample.n_obs = jvalues.size();
      const std::size_t dim = sample.flat_dim();
      sample.values.resize(static_cast<Eigen::Index>(sample.n_obs),
                           static_cast<Eigen::Index>(dim));
      for (std::size_t i = 0; i < sample.n_obs; ++i) {
        const auto row = jvalues.at(i).get<std::vector<double>>();
        if (row.size() != dim)
          throw FormatError("JSON row " + std::to_string(i) + " has " +
                            std::to_string(row.size()) + " values, expected " +
                            std::to_string(dim));
        for (std::size_t j = 0; j < dim; ++j)
          sample.values(static_cast<Eigen::Index>(i),
                        static_cast<Eigen::Index>(j)) = row[j];
      }
      if (doc.contains("labels"))
        sample.labels = doc.at("labels").get<std::vector<std::string>>();
    } catch (const nlohmann::json::exception& e) {
      throw FormatError("JSON sample schema violation in " + path + ": " +
                        e.what());
    }
    if (!sample.values.allFinite())
      throw DataError("JSON sample contains non-finite values");
  }

  sample.validate();
  return sample;
}

FunctionalSample load_sample(const std::string& path) {
  const auto dot = path.rfind('.');
  const std::string ext = dot == std::string::npos ? "" : path.substr(dot);
  return load_sample(
      path, ext == ".json" ? SampleFormat::json : SampleFormat::csv_rows);
}

void save_sample_csv(const FunctionalSample& sample, const std::string& path) {
  std::ofstream out(path);
  if (!out) throw DataError("cannot write file: " + path);
  out.precision(17);
  for (Eigen::Index i = 0; i < sample.values.rows(); ++i) {
    if (!sample.labels.empty())
      out << sample.labels[static_cast<std::size_t>(i)] << ',';
    for (Eigen::Index j = 0; j < sample.values.cols(); ++j) {
      if (j) out << ',';
      out << sample.values(i, j);
    }
    out << '\n';
  }
}

void save_sample_json(const FunctionalSample& sample, const std::string& path) {
  nlohmann::json doc;
  doc["grid"] = {{"dim", sample.grid.dim},
                 {"points_per_axis", sample.grid.points_per_axis},
                 {"spacing", sample.grid.spacing}};
  doc["r"] = sample.n_components;
  auto rows = nlohmann::json::array();
  for (Eigen::Index i = 0; i < sample.values.rows(); ++i) {
    std::vector<double> row(sample.values.cols());
    for (Eigen::Index j = 0; j < sample.values.cols(); ++j)
      row[static_cast<std::size_t>(j)] = sample.values(i, j);
    rows.push_back(std::move(row));
  }
  doc["values"] = std::move(rows);
  if (!sample.labels.empty()) doc["labels"] = sample.labels;

  std::ofstream out(path);
  if (!out) throw DataError("cannot write file: " + path);
  out << doc.dump(2) << '\n';
}

}  // namespace fcpd
