#pragma once

#include <cstddef>
#include <iosfwd>
#include <span>
#include <string>
#include <vector>

#include "merit/errors.hpp"

namespace merit {

/// Dense row-major matrix of doubles. All accumulation is 64-bit.
class Matrix {
public:
  Matrix() = default;
  Matrix(std::size_t rows, std::size_t cols, double fill = 0.0)
      : rows_(rows), cols_(cols), data_(rows * cols, fill) {}

  static Matrix identity(std::size_t n);

  std::size_t rows() const { return rows_; }
  std::size_t cols() const { return cols_; }

  double& operator()(std::size_t r, std::size_t c) { return data_[r * cols_ + c]; }
  double operator()(std::size_t r, std::size_t c) const { return data_[r * cols_ + c]; }

  std::span<double> row(std::size_t r) { return {data_.data() + r * cols_, cols_}; }
  std::span<const double> row(std::size_t r) const {
    return {data_.data() + r * cols_, cols_};
  }

  std::vector<double>& data() { return data_; }
  const std::vector<double>& data() const { return data_; }

  bool all_finite() const;

private:
  std::size_t rows_ = 0;
  std::size_t cols_ = 0;
  std::vector<double> data_;
};

Matrix matmul(const Matrix& a, const Matrix& b);
Matrix transpose(const Matrix& a);
std::vector<double> matvec(const Matrix& a, std::span<const double> x);
double dot(std::span<const double> a, std::span<const double> b);
double norm2(std::span<const double> v);
double frobenius_norm(const Matrix& a);

struct SparseEntry {
  std::size_t row;
  std::size_t col;
  double value;
};

/// Row-major sparse matrix; entries sorted, unique, nonzero.
class SparseMatrix {
public:
  SparseMatrix(std::size_t rows, std::size_t cols, std::vector<SparseEntry> entries);

  std::size_t rows() const { return rows_; }
  std::size_t cols() const { return cols_; }
  const std::vector<SparseEntry>& entries() const { return entries_; }

  Matrix to_dense() const;

private:
  std::size_t rows_ = 0;
  std::size_t cols_ = 0;
  std::vector<SparseEntry> entries_;
};

// A * B and A^T * B with A sparse, B dense
Matrix sparse_times_dense(const SparseMatrix& a, const Matrix& b);
Matrix sparse_t_times_dense(const SparseMatrix& a, const Matrix& b);

/// Max-subtracted softmax; entries positive, sum 1, argmax preserved.
std::vector<double> softmax(std::span<const double> v);

double sigmoid(double x);

// Dense matrix file format: header "rows cols", then row-major decimal
// values. Used for embedding import/export.
void save_matrix(std::ostream& out, const Matrix& m);
Matrix load_matrix(std::istream& in);
void save_matrix_file(const std::string& path, const Matrix& m);
Matrix load_matrix_file(const std::string& path);

}  // namespace merit
