#include "merit/linalg.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <limits>

namespace merit {

Matrix Matrix::identity(std::size_t n) {
  Matrix m(n, n);
  for (std::size_t i = 0; i < n; ++i) m(i, i) = 1.0;
  return m;
}

bool Matrix::all_finite() const {
  for (double v : data_)
    if (!std::isfinite(v)) return false;
  return true;
}

Matrix matmul(const Matrix& a, const Matrix& b) {
  if (a.cols() != b.rows())
    throw DimensionMismatch("matmul: " + std::to_string(a.cols()) + " vs " +
                            std::to_string(b.rows()));
  Matrix c(a.rows(), b.cols());
  // k-inner ordering keeps the b access row-contiguous
  for (std::size_t i = 0; i < a.rows(); ++i) {
    for (std::size_t k = 0; k < a.cols(); ++k) {
      double aik = a(i, k);
      if (aik == 0.0) continue;
      const double* brow = b.row(k).data();
      double* crow = c.row(i).data();
      for (std::size_t j = 0; j < b.cols(); ++j) crow[j] += aik * brow[j];
    }
  }
  return c;
}

Matrix transpose(const Matrix& a) {
  Matrix t(a.cols(), a.rows());
  for (std::size_t i = 0; i < a.rows(); ++i)
    for (std::size_t j = 0; j < a.cols(); ++j) t(j, i) = a(i, j);
  return t;
}

std::vector<double> matvec(const Matrix& a, std::span<const double> x) {
  if (a.cols() != x.size())
    throw DimensionMismatch("matvec: " + std::to_string(a.cols()) + " vs " +
                            std::to_string(x.size()));
  std::vector<double> y(a.rows(), 0.0);
  for (std::size_t i = 0; i < a.rows(); ++i) y[i] = dot(a.row(i), x);
  return y;
}

double dot(std::span<const double> a, std::span<const double> b) {
  double s = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
  return s;
}

double norm2(std::span<const double> v) { return std::sqrt(dot(v, v)); }

double frobenius_norm(const Matrix& a) {
  double s = 0.0;
  for (double v : a.data()) s += v * v;
  return std::sqrt(s);
}

SparseMatrix::SparseMatrix(std::size_t rows, std::size_t cols,
                           std::vector<SparseEntry> entries)
    : rows_(rows), cols_(cols), entries_(std::move(entries)) {
  std::sort(entries_.begin(), entries_.end(), [](const SparseEntry& a, const SparseEntry& b) {
    return a.row != b.row ? a.row < b.row : a.col < b.col;
  });
  for (std::size_t i = 0; i < entries_.size(); ++i) {
    const auto& e = entries_[i];
    if (e.row >= rows_ || e.col >= cols_)
      throw DimensionMismatch("sparse entry out of range");
    if (e.value == 0.0) throw DataError("sparse entry with zero value");
    if (i > 0 && entries_[i - 1].row == e.row && entries_[i - 1].col == e.col)
      throw DataError("duplicate sparse entry");
  }
}

Matrix SparseMatrix::to_dense() const {
  Matrix m(rows_, cols_);
  for (const auto& e : entries_) m(e.row, e.col) = e.value;
  return m;
}

Matrix sparse_times_dense(const SparseMatrix& a, const Matrix& b) {
  if (a.cols() != b.rows()) throw DimensionMismatch("sparse_times_dense");
  Matrix c(a.rows(), b.cols());
  for (const auto& e : a.entries()) {
    const double* brow = b.row(e.col).data();
    double* crow = c.row(e.row).data();
    for (std::size_t j = 0; j < b.cols(); ++j) crow[j] += e.value * brow[j];
  }
  return c;
}

Matrix sparse_t_times_dense(const SparseMatrix& a, const Matrix& b) {
  if (a.rows() != b.rows()) throw DimensionMismatch("sparse_t_times_dense");
  Matrix c(a.cols(), b.cols());
  for (const auto& e : a.entries()) {
    const double* brow = b.row(e.row).data();
    double* crow = c.row(e.col).data();
    for (std::size_t j = 0; j < b.cols(); ++j) crow[j] += e.value * brow[j];
  }
  return c;
}

std::vector<double> softmax(std::span<const double> v) {
  double mx = -std::numeric_limits<double>::infinity();
  for (double x : v) {
    if (!std::isfinite(x)) throw NonFiniteInput();
    mx = std::max(mx, x);
  }
  std::vector<double> out(v.size());
  double sum = 0.0;
  for (std::size_t i = 0; i < v.size(); ++i) {
    out[i] = std::exp(v[i] - mx);
    sum += out[i];
  }
  for (double& x : out) x /= sum;
  return out;
}

double sigmoid(double x) {
  // split to avoid exp overflow on large |x|
  if (x >= 0.0) {
    return 1.0 / (1.0 + std::exp(-x));
  }
  double e = std::exp(x);
  return e / (1.0 + e);
}

void save_matrix(std::ostream& out, const Matrix& m) {
  out << m.rows() << ' ' << m.cols() << '\n';
  char buf[40];
  for (std::size_t i = 0; i < m.rows(); ++i) {
    for (std::size_t j = 0; j < m.cols(); ++j) {
      std::snprintf(buf, sizeof(buf), "%.17g", m(i, j));
      out << buf << (j + 1 < m.cols() ? ' ' : '\n');
    }
  }
}

Matrix load_matrix(std::istream& in) {
  std::size_t rows = 0, cols = 0;
  if (!(in >> rows >> cols)) throw DataError("matrix file: bad header");
  Matrix m(rows, cols);
  for (std::size_t i = 0; i < rows; ++i)
    for (std::size_t j = 0; j < cols; ++j)
      if (!(in >> m(i, j))) throw DataError("matrix file: truncated values");
  return m;
}

void save_matrix_file(const std::string& path, const Matrix& m) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw DataError("cannot write " + path);
  save_matrix(out, m);
}

Matrix load_matrix_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw DataError("cannot read " + path);
  return load_matrix(in);
}

}  // namespace merit
