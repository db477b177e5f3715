#pragma once

#include "gard/datagen.hpp"

#include <filesystem>
#include <stdexcept>

// CSV interchange for generated instances, so runs can be replayed elsewhere.
//
//   <prefix>_X.csv       one matrix row per line, comma separated
//   <prefix>_y.csv       single column
//   <prefix>_theta0.csv  single column
//   <prefix>_eta.csv     single column
//   <prefix>_u0.csv      "index,value" lines, 1-based indices
//
// Values are written with 17 significant digits, so a write/read cycle is exact.
namespace gard::io {

class CsvError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

void write_instance(const std::filesystem::path& prefix, const datagen::Instance& inst);

/// The CSV files carry no noise bound; it is supplied by the caller.
datagen::Instance read_instance(const std::filesystem::path& prefix, double epsilon0);

Matrix read_matrix_csv(const std::filesystem::path& file);
void write_matrix_csv(const std::filesystem::path& file, const Matrix& m);

}  // namespace gard::io
