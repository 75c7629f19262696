#pragma once

#include <string>
#include <utility>
#include <vector>

namespace commsim_cli {

// Ordered key/value pairs; emitted verbatim so byte-identical inputs give
// byte-identical outputs.
using Metadata = std::vector<std::pair<std::string, std::string>>;

struct GridData {
  std::string axis1_name;
  std::string axis2_name;
  std::vector<double> axis1;
  std::vector<double> axis2;
  std::vector<double> values;  // axis1-major: values[i * axis2.size() + j]
};

struct MatrixData {
  long long dim = 0;
  std::vector<double> entries;     // interleaved re/im, row-major
  std::vector<double> std_errors;  // dim*dim entries, or empty
};

// CSV: header "axis1,axis2,value", one row per cell, 17 significant digits.
std::string grid_to_csv(const GridData& grid);

// JSON: {meta:{...}, axes:{axis1:{name,values}, axis2:{...}}, values:[[...]]}.
std::string grid_to_json_text(const GridData& grid, const Metadata& meta);

// CSV: header "row,col,re,im[,std_error]".
std::string matrix_to_csv(const MatrixData& matrix);

// JSON: {meta:{...}, dim, values:[[{re,im},...]], std_errors?:[[...]]}.
std::string matrix_to_json_text(const MatrixData& matrix, const Metadata& meta);

// Empty path writes to stdout. Failures raise RunError naming the path.
void write_output(const std::string& path, const std::string& content);

std::string format_double(double value);

}  // namespace commsim_cli
