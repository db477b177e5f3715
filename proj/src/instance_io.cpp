#include "gard/instance_io.hpp"

#include <cstdio>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

namespace gard::io {

namespace {

std::filesystem::path with_suffix(const std::filesystem::path& prefix, const char* suffix) {
  return prefix.string() + suffix;
}

std::string format_double(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

std::vector<std::vector<double>> read_rows(const std::filesystem::path& file) {
  std::ifstream in(file);
  if (!in) throw CsvError("cannot open " + file.string());
  std::vector<std::vector<double>> rows;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    std::vector<double> row;
    std::stringstream ss(line);
    std::string cell;
    while (std::getline(ss, cell, ',')) {
      try {
        std::size_t used = 0;
        row.push_back(std::stod(cell, &used));
        if (cell.find_first_not_of(" \t", used) != std::string::npos) throw std::invalid_argument(cell);
      } catch (const std::exception&) {
        throw CsvError(file.string() + ":" + std::to_string(line_no) + ": bad number '" + cell + "'");
      }
    }
    if (!rows.empty() && row.size() != rows.front().size()) {
      throw CsvError(file.string() + ":" + std::to_string(line_no) + ": ragged row");
    }
    rows.push_back(std::move(row));
  }
  return rows;
}

Vector read_column(const std::filesystem::path& file) {
  const Matrix m = read_matrix_csv(file);
  if (m.cols() != 1 && m.rows() > 0) throw CsvError(file.string() + ": expected a single column");
  return m.rows() == 0 ? Vector() : Vector(m.col(0));
}

}  // namespace

Matrix read_matrix_csv(const std::filesystem::path& file) {
  const auto rows = read_rows(file);
  if (rows.empty()) return Matrix(0, 0);
  Matrix m(static_cast<Index>(rows.size()), static_cast<Index>(rows.front().size()));
  for (std::size_t i = 0; i < rows.size(); ++i) {
    for (std::size_t j = 0; j < rows[i].size(); ++j) m(static_cast<Index>(i), static_cast<Index>(j)) = rows[i][j];
  }
  return m;
}

void write_matrix_csv(const std::filesystem::path& file, const Matrix& m) {
  std::ofstream out(file);
  if (!out) throw CsvError("cannot write " + file.string());
  for (Index i = 0; i < m.rows(); ++i) {
    for (Index j = 0; j < m.cols(); ++j) {
      if (j) out << ',';
      out << format_double(m(i, j));
    }
    out << '\n';
  }
}

void write_instance(const std::filesystem::path& prefix, const datagen::Instance& inst) {
  write_matrix_csv(with_suffix(prefix, "_X.csv"), inst.problem.x);
  write_matrix_csv(with_suffix(prefix, "_y.csv"), inst.problem.y);
  write_matrix_csv(with_suffix(prefix, "_theta0.csv"), inst.truth.theta0);
  write_matrix_csv(with_suffix(prefix, "_eta.csv"), inst.truth.eta);
  std::ofstream out(with_suffix(prefix, "_u0.csv"));
  if (!out) throw CsvError("cannot write " + with_suffix(prefix, "_u0.csv").string());
  const auto& idx = inst.truth.u0.indices();
  const auto& val = inst.truth.u0.values();
  for (std::size_t k = 0; k < idx.size(); ++k) out << idx[k] + 1 << ',' << format_double(val[k]) << '\n';
}

datagen::Instance read_instance(const std::filesystem::path& prefix, double epsilon0) {
  datagen::Instance inst;
  inst.problem.x = read_matrix_csv(with_suffix(prefix, "_X.csv"));
  inst.problem.y = read_column(with_suffix(prefix, "_y.csv"));
  inst.problem.epsilon0 = epsilon0;
  inst.truth.theta0 = read_column(with_suffix(prefix, "_theta0.csv"));
  inst.truth.eta = read_column(with_suffix(prefix, "_eta.csv"));
  const Index n = inst.problem.y.size();

  std::vector<Index> idx;
  std::vector<double> val;
  for (const auto& row : read_rows(with_suffix(prefix, "_u0.csv"))) {
    if (row.size() != 2) throw CsvError("u0 rows must be 'index,value'");
    const double raw = row[0];
    if (raw != static_cast<double>(static_cast<Index>(raw)) || raw < 1) {
      throw CsvError("u0 index must be a positive integer");
    }
    idx.push_back(static_cast<Index>(raw) - 1);
    val.push_back(row[1]);
  }
  try {
    inst.truth.u0 = SparseVector(n, std::move(idx), std::move(val));
  } catch (const std::invalid_argument& e) {
    throw CsvError(std::string("u0: ") + e.what());
  }
  inst.problem.validate();
  return inst;
}

}  // namespace gard::io
