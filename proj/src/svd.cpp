#include "merit/svd.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "merit/rng.hpp"

namespace merit {

Matrix qr_q(const Matrix& a) {
  std::size_t m = a.rows(), n = a.cols();
  if (m < n) throw DimensionMismatch("qr_q needs rows >= cols");
  Matrix r = a;  // reduced in place
  std::vector<std::vector<double>> reflectors;
  reflectors.reserve(n);
  for (std::size_t k = 0; k < n; ++k) {
    std::vector<double> v(m - k);
    double sigma = 0.0;
    for (std::size_t i = k; i < m; ++i) {
      v[i - k] = r(i, k);
      sigma += r(i, k) * r(i, k);
    }
    double alpha = std::sqrt(sigma);
    if (alpha > 0.0) {
      if (v[0] > 0.0) alpha = -alpha;
      v[0] -= alpha;
      double vnorm = norm2(v);
      if (vnorm > 0.0) {
        for (double& x : v) x /= vnorm;
        // apply I - 2 v v^T to remaining columns
        for (std::size_t j = k; j < n; ++j) {
          double s = 0.0;
          for (std::size_t i = k; i < m; ++i) s += v[i - k] * r(i, j);
          s *= 2.0;
          for (std::size_t i = k; i < m; ++i) r(i, j) -= s * v[i - k];
        }
      } else {
        v.assign(m - k, 0.0);
      }
    } else {
      v.assign(m - k, 0.0);
    }
    reflectors.push_back(std::move(v));
  }
  // form the thin Q by applying reflectors to the first n identity columns
  Matrix q(m, n);
  for (std::size_t j = 0; j < n; ++j) q(j, j) = 1.0;
  for (std::size_t k = n; k-- > 0;) {
    const auto& v = reflectors[k];
    if (norm2(v) == 0.0) continue;
    for (std::size_t j = 0; j < n; ++j) {
      double s = 0.0;
      for (std::size_t i = k; i < m; ++i) s += v[i - k] * q(i, j);
      s *= 2.0;
      for (std::size_t i = k; i < m; ++i) q(i, j) -= s * v[i - k];
    }
  }
  return q;
}

namespace {

// One-sided Jacobi: orthogonalizes the columns of g in place while
// accumulating the rotations in v, so that on entry g0 = g * v^T holds
// throughout. Columns of g end up mutually orthogonal.
void one_sided_jacobi(Matrix& g, Matrix& v) {
  const std::size_t n = g.cols();
  const std::size_t m = g.rows();
  const double tol = 1e-14;
  v = Matrix::identity(n);
  for (int sweep = 0; sweep < 60; ++sweep) {
    bool rotated = false;
    for (std::size_t p = 0; p + 1 < n; ++p) {
      for (std::size_t q = p + 1; q < n; ++q) {
        double app = 0.0, aqq = 0.0, apq = 0.0;
        for (std::size_t i = 0; i < m; ++i) {
          double gp = g(i, p), gq = g(i, q);
          app += gp * gp;
          aqq += gq * gq;
          apq += gp * gq;
        }
        if (apq * apq <= tol * tol * app * aqq) continue;
        rotated = true;
        double zeta = (aqq - app) / (2.0 * apq);
        double t = (zeta >= 0.0 ? 1.0 : -1.0) /
                   (std::abs(zeta) + std::sqrt(1.0 + zeta * zeta));
        double c = 1.0 / std::sqrt(1.0 + t * t);
        double s = c * t;
        for (std::size_t i = 0; i < m; ++i) {
          double gp = g(i, p), gq = g(i, q);
          g(i, p) = c * gp - s * gq;
          g(i, q) = s * gp + c * gq;
        }
        for (std::size_t i = 0; i < n; ++i) {
          double vp = v(i, p), vq = v(i, q);
          v(i, p) = c * vp - s * vq;
          v(i, q) = s * vp + c * vq;
        }
      }
    }
    if (!rotated) break;
  }
}

// Replace a (near-)zero column with something orthonormal to the others.
void complete_column(Matrix& u, std::size_t col) {
  const std::size_t m = u.rows();
  for (std::size_t basis = 0; basis < m; ++basis) {
    std::vector<double> cand(m, 0.0);
    cand[basis] = 1.0;
    for (std::size_t j = 0; j < u.cols(); ++j) {
      if (j == col) continue;
      double s = 0.0;
      for (std::size_t i = 0; i < m; ++i) s += cand[i] * u(i, j);
      for (std::size_t i = 0; i < m; ++i) cand[i] -= s * u(i, j);
    }
    double nrm = norm2(cand);
    if (nrm > 1e-6) {
      for (std::size_t i = 0; i < m; ++i) u(i, col) = cand[i] / nrm;
      return;
    }
  }
}

}  // namespace

SvdFactors truncated_svd(const SparseMatrix& a, std::size_t k, std::uint64_t seed,
                         std::size_t oversample, std::size_t power_iters) {
  const std::size_t n = a.rows(), m = a.cols();
  if (a.entries().empty()) throw EmptyMatrix();
  const std::size_t minnm = std::min(n, m);
  if (k < 1 || k > minnm)
    throw RankTooLarge("rank " + std::to_string(k) + " exceeds min(" +
                       std::to_string(n) + "," + std::to_string(m) + ")");
  const std::size_t l = std::min(k + oversample, minnm);

  Rng rng(seed);
  Matrix omega(m, l);
  for (double& x : omega.data()) x = rng.gaussian();

  Matrix q = qr_q(sparse_times_dense(a, omega));  // n x l
  for (std::size_t it = 0; it < power_iters; ++it) {
    Matrix z = qr_q(sparse_t_times_dense(a, q));  // m x l
    q = qr_q(sparse_times_dense(a, z));
  }

  // b = q^T a  (l x m); factor its transpose g = a^T q (m x l)
  Matrix g = sparse_t_times_dense(a, q);
  Matrix rot;  // l x l
  one_sided_jacobi(g, rot);

  // g = w * diag(sigma) * rot^T with w the normalized columns of g, so
  // a ~ q * (q^T a) = (q * rot) * diag(sigma) * w^T
  std::vector<double> sigma(l);
  for (std::size_t j = 0; j < l; ++j) {
    double s = 0.0;
    for (std::size_t i = 0; i < m; ++i) s += g(i, j) * g(i, j);
    sigma[j] = std::sqrt(s);
  }
  std::vector<std::size_t> order(l);
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(),
                   [&](std::size_t x, std::size_t y) { return sigma[x] > sigma[y]; });

  Matrix u_full = matmul(q, rot);  // n x l, orthonormal columns
  SvdFactors f;
  f.u = Matrix(n, k);
  f.v = Matrix(m, k);
  f.s.resize(k);
  for (std::size_t j = 0; j < k; ++j) {
    std::size_t src = order[j];
    f.s[j] = sigma[src];
    for (std::size_t i = 0; i < n; ++i) f.u(i, j) = u_full(i, src);
    if (sigma[src] > 1e-300) {
      for (std::size_t i = 0; i < m; ++i) f.v(i, j) = g(i, src) / sigma[src];
    }
  }
  // zero singular values leave undefined right vectors; fill so the factor
  // stays orthonormal
  for (std::size_t j = 0; j < k; ++j)
    if (f.s[j] <= 1e-300) complete_column(f.v, j);
  return f;
}

}  // namespace merit
