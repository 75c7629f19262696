#include "emit.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <iostream>

#include <json.hpp>

#include "job.hpp"

namespace commsim_cli {

namespace {

using ordered_json = nlohmann::ordered_json;

void require_grid(const GridData& grid) {
  if (grid.axis1.empty() || grid.axis2.empty() || grid.values.empty()) {
    throw ConfigError("refusing to emit an empty grid");
  }
  if (grid.values.size() != grid.axis1.size() * grid.axis2.size()) {
    throw RunError("grid shape mismatch: " + std::to_string(grid.values.size()) +
                   " values for " + std::to_string(grid.axis1.size()) + "x" +
                   std::to_string(grid.axis2.size()));
  }
  for (double v : grid.values) {
    if (!std::isfinite(v)) throw RunError("grid contains a non-finite value");
  }
}

void require_matrix(const MatrixData& matrix) {
  const auto cells = static_cast<std::size_t>(matrix.dim * matrix.dim);
  if (matrix.dim < 1 || matrix.entries.size() != 2 * cells) {
    throw RunError("matrix shape mismatch");
  }
  if (!matrix.std_errors.empty() && matrix.std_errors.size() != cells) {
    throw RunError("matrix std_error shape mismatch");
  }
}

ordered_json meta_to_json(const Metadata& meta) {
  ordered_json out = ordered_json::object();
  for (const auto& [key, value] : meta) out[key] = value;
  return out;
}

}  // namespace

std::string format_double(double value) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.17g", value);
  return buf;
}

std::string grid_to_csv(const GridData& grid) {
  require_grid(grid);
  std::string out = "axis1,axis2,value\n";
  for (std::size_t i = 0; i < grid.axis1.size(); ++i) {
    for (std::size_t j = 0; j < grid.axis2.size(); ++j) {
      out += format_double(grid.axis1[i]);
      out += ',';
      out += format_double(grid.axis2[j]);
      out += ',';
      out += format_double(grid.values[i * grid.axis2.size() + j]);
      out += '\n';
    }
  }
  return out;
}

std::string grid_to_json_text(const GridData& grid, const Metadata& meta) {
  require_grid(grid);
  ordered_json doc;
  doc["meta"] = meta_to_json(meta);
  doc["axes"] = {
      {"axis1", {{"name", grid.axis1_name}, {"values", grid.axis1}}},
      {"axis2", {{"name", grid.axis2_name}, {"values", grid.axis2}}},
  };
  ordered_json rows = ordered_json::array();
  for (std::size_t i = 0; i < grid.axis1.size(); ++i) {
    ordered_json row = ordered_json::array();
    for (std::size_t j = 0; j < grid.axis2.size(); ++j) {
      row.push_back(grid.values[i * grid.axis2.size() + j]);
    }
    rows.push_back(std::move(row));
  }
  doc["values"] = std::move(rows);
  return doc.dump(2) + "\n";
}

std::string matrix_to_csv(const MatrixData& matrix) {
  require_matrix(matrix);
  const bool with_errors = !matrix.std_errors.empty();
  std::string out = with_errors ? "row,col,re,im,std_error\n" : "row,col,re,im\n";
  for (long long r = 0; r < matrix.dim; ++r) {
    for (long long c = 0; c < matrix.dim; ++c) {
      const std::size_t k = 2 * static_cast<std::size_t>(r * matrix.dim + c);
      out += std::to_string(r);
      out += ',';
      out += std::to_string(c);
      out += ',';
      out += format_double(matrix.entries[k]);
      out += ',';
      out += format_double(matrix.entries[k + 1]);
      if (with_errors) {
        out += ',';
        out += format_double(matrix.std_errors[r * matrix.dim + c]);
      }
      out += '\n';
    }
  }
  return out;
}

std::string matrix_to_json_text(const MatrixData& matrix, const Metadata& meta) {
  require_matrix(matrix);
  ordered_json doc;
  doc["meta"] = meta_to_json(meta);
  doc["dim"] = matrix.dim;
  ordered_json rows = ordered_json::array();
  for (long long r = 0; r < matrix.dim; ++r) {
    ordered_json row = ordered_json::array();
    for (long long c = 0; c < matrix.dim; ++c) {
      const std::size_t k = 2 * static_cast<std::size_t>(r * matrix.dim + c);
      row.push_back({{"re", matrix.entries[k]}, {"im", matrix.entries[k + 1]}});
    }
    rows.push_back(std::move(row));
  }
  doc["values"] = std::move(rows);
  if (!matrix.std_errors.empty()) {
    ordered_json errs = ordered_json::array();
    for (long long r = 0; r < matrix.dim; ++r) {
      ordered_json row = ordered_json::array();
      for (long long c = 0; c < matrix.dim; ++c) {
        row.push_back(matrix.std_errors[r * matrix.dim + c]);
      }
      errs.push_back(std::move(row));
    }
    doc["std_errors"] = std::move(errs);
  }
  return doc.dump(2) + "\n";
}

void write_output(const std::string& path, const std::string& content) {
  if (path.empty()) {
    std::cout << content;
    if (!std::cout) throw RunError("failed writing to stdout");
    return;
  }
  std::ofstream file(path, std::ios::binary);
  if (!file) throw RunError("cannot open \"" + path + "\" for writing");
  file << content;
  if (!file) throw RunError("write failed for \"" + path + "\"");
}

}  // namespace commsim_cli
