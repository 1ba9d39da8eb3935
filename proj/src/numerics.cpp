#include "qperm/numerics.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "qperm/errors.hpp"
#include "qperm/kernels.hpp"

namespace qperm {

namespace {

constexpr std::size_t kParallelMatmulWork = 32 * 32 * 32;
constexpr int kMaxJacobiSweeps = 100;

void require_same_shape(const CMatrix& a, const CMatrix& b, const char* what) {
  if (a.rows() != b.rows() || a.cols() != b.cols()) {
    throw Error(ErrorKind::ShapeMismatch, what);
  }
}

void require_hermitian(const CMatrix& a, double tol) {
  if (!a.square()) throw Error(ErrorKind::ShapeMismatch, "matrix is not square");
  const double defect = hermitian_defect(a);
  if (defect > tol * std::max(1.0, a.frobenius_norm())) {
    throw Error(ErrorKind::NotHermitian, "||a - a*|| = " + std::to_string(defect));
  }
}

}  // namespace

CMatrix::CMatrix(std::size_t rows, std::size_t cols, std::vector<cplx> entries)
    : rows_(rows), cols_(cols), data_(std::move(entries)) {
  if (data_.size() != rows_ * cols_) {
    throw Error(ErrorKind::ShapeMismatch, "entry count does not match rows x cols");
  }
}

CMatrix::CMatrix(std::initializer_list<std::initializer_list<cplx>> rows) {
  rows_ = rows.size();
  cols_ = rows_ == 0 ? 0 : rows.begin()->size();
  data_.reserve(rows_ * cols_);
  for (const auto& row : rows) {
    if (row.size() != cols_) throw Error(ErrorKind::ShapeMismatch, "ragged initializer");
    data_.insert(data_.end(), row.begin(), row.end());
  }
}

CMatrix CMatrix::identity(std::size_t n) {
  CMatrix m(n, n);
  for (std::size_t i = 0; i < n; ++i) m(i, i) = 1.0;
  return m;
}

CMatrix CMatrix::diagonal(std::span<const cplx> diag) {
  CMatrix m(diag.size(), diag.size());
  for (std::size_t i = 0; i < diag.size(); ++i) m(i, i) = diag[i];
  return m;
}

CMatrix CMatrix::column(std::span<const cplx> v) {
  return CMatrix(v.size(), 1, std::vector<cplx>(v.begin(), v.end()));
}

CMatrix CMatrix::adjoint() const {
  CMatrix m(cols_, rows_);
  for (std::size_t i = 0; i < rows_; ++i)
    for (std::size_t j = 0; j < cols_; ++j) m(j, i) = std::conj((*this)(i, j));
  return m;
}

CMatrix CMatrix::transpose() const {
  CMatrix m(cols_, rows_);
  for (std::size_t i = 0; i < rows_; ++i)
    for (std::size_t j = 0; j < cols_; ++j) m(j, i) = (*this)(i, j);
  return m;
}

cplx CMatrix::trace() const {
  cplx t{};
  for (std::size_t i = 0; i < std::min(rows_, cols_); ++i) t += (*this)(i, i);
  return t;
}

double CMatrix::frobenius_norm() const {
  double s = 0.0;
  for (const auto& z : data_) s += std::norm(z);
  return std::sqrt(s);
}

double CMatrix::max_abs_diff(const CMatrix& other) const {
  require_same_shape(*this, other, "max_abs_diff shape mismatch");
  double m = 0.0;
  for (std::size_t k = 0; k < data_.size(); ++k) m = std::max(m, std::abs(data_[k] - other.data_[k]));
  return m;
}

bool CMatrix::all_finite() const {
  return std::all_of(data_.begin(), data_.end(),
                     [](const cplx& z) { return std::isfinite(z.real()) && std::isfinite(z.imag()); });
}

CMatrix& CMatrix::operator+=(const CMatrix& other) {
  require_same_shape(*this, other, "addition shape mismatch");
  for (std::size_t k = 0; k < data_.size(); ++k) data_[k] += other.data_[k];
  return *this;
}

CMatrix& CMatrix::operator-=(const CMatrix& other) {
  require_same_shape(*this, other, "subtraction shape mismatch");
  for (std::size_t k = 0; k < data_.size(); ++k) data_[k] -= other.data_[k];
  return *this;
}

CMatrix& CMatrix::operator*=(cplx s) {
  for (auto& z : data_) z *= s;
  return *this;
}

CMatrix operator+(CMatrix a, const CMatrix& b) { return a += b; }
CMatrix operator-(CMatrix a, const CMatrix& b) { return a -= b; }
CMatrix operator*(CMatrix a, cplx s) { return a *= s; }
CMatrix operator*(cplx s, CMatrix a) { return a *= s; }

CMatrix operator*(const CMatrix& a, const CMatrix& b) {
  if (a.rows() * a.cols() * b.cols() >= kParallelMatmulWork) return kernels::parallel::matmul(a, b);
  return kernels::serial::matmul(a, b);
}

CMatrix kron(const CMatrix& a, const CMatrix& b) {
  CMatrix out(a.rows() * b.rows(), a.cols() * b.cols());
  for (std::size_t i1 = 0; i1 < a.rows(); ++i1)
    for (std::size_t j1 = 0; j1 < a.cols(); ++j1) {
      const cplx x = a(i1, j1);
      if (x == cplx{}) continue;
      for (std::size_t i2 = 0; i2 < b.rows(); ++i2)
        for (std::size_t j2 = 0; j2 < b.cols(); ++j2)
          out(i1 * b.rows() + i2, j1 * b.cols() + j2) = x * b(i2, j2);
    }
  return out;
}

cplx hs_inner(const CMatrix& a, const CMatrix& b) {
  require_same_shape(a, b, "hs_inner shape mismatch");
  cplx acc{};
  const auto x = a.entries();
  const auto y = b.entries();
  for (std::size_t k = 0; k < x.size(); ++k) acc += std::conj(x[k]) * y[k];
  return acc;
}

double hermitian_defect(const CMatrix& a) {
  if (!a.square()) throw Error(ErrorKind::ShapeMismatch, "matrix is not square");
  double s = 0.0;
  for (std::size_t i = 0; i < a.rows(); ++i)
    for (std::size_t j = 0; j < a.cols(); ++j) s += std::norm(a(i, j) - std::conj(a(j, i)));
  return std::sqrt(s);
}

EigenSystem jacobi_eigensystem(const CMatrix& input, double tol) {
  require_hermitian(input, tol);
  const std::size_t n = input.rows();
  CMatrix a = input;
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = i; j < n; ++j) {
      const cplx avg = 0.5 * (a(i, j) + std::conj(a(j, i)));
      a(i, j) = avg;
      a(j, i) = std::conj(avg);
    }
  CMatrix v = CMatrix::identity(n);
  const double scale = a.frobenius_norm();

  bool converged = scale == 0.0;
  for (int sweep = 0; sweep < kMaxJacobiSweeps && !converged; ++sweep) {
    double off = 0.0;
    for (std::size_t p = 0; p < n; ++p)
      for (std::size_t q = p + 1; q < n; ++q) off += std::norm(a(p, q));
    if (std::sqrt(off) <= 1e-15 * scale) {
      converged = true;
      break;
    }
    for (std::size_t p = 0; p + 1 < n; ++p) {
      for (std::size_t q = p + 1; q < n; ++q) {
        const cplx b = a(p, q);
        const double abs_b = std::abs(b);
        if (abs_b <= 1e-300 || abs_b <= 1e-18 * scale) continue;
        const cplx phase = b / abs_b;
        const double theta = (a(q, q).real() - a(p, p).real()) / (2.0 * abs_b);
        const double t = (theta >= 0.0 ? 1.0 : -1.0) / (std::abs(theta) + std::sqrt(theta * theta + 1.0));
        const double c = 1.0 / std::sqrt(t * t + 1.0);
        const double s = t * c;
        const cplx u_pp = c;
        const cplx u_pq = s;
        const cplx u_qp = -s * std::conj(phase);
        const cplx u_qq = c * std::conj(phase);
        for (std::size_t k = 0; k < n; ++k) {
          const cplx x = a(k, p);
          const cplx y = a(k, q);
          a(k, p) = x * u_pp + y * u_qp;
          a(k, q) = x * u_pq + y * u_qq;
        }
        for (std::size_t k = 0; k < n; ++k) {
          const cplx x = a(p, k);
          const cplx y = a(q, k);
          a(p, k) = std::conj(u_pp) * x + std::conj(u_qp) * y;
          a(q, k) = std::conj(u_pq) * x + std::conj(u_qq) * y;
        }
        a(p, q) = 0.0;
        a(q, p) = 0.0;
        a(p, p) = a(p, p).real();
        a(q, q) = a(q, q).real();
        for (std::size_t k = 0; k < n; ++k) {
          const cplx x = v(k, p);
          const cplx y = v(k, q);
          v(k, p) = x * u_pp + y * u_qp;
          v(k, q) = x * u_pq + y * u_qq;
        }
      }
    }
  }
  if (!converged) throw Error(ErrorKind::NoConvergence, "Jacobi sweeps exhausted");

  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(),
                   [&](std::size_t x, std::size_t y) { return a(x, x).real() < a(y, y).real(); });
  EigenSystem out{std::vector<double>(n), CMatrix(n, n)};
  for (std::size_t k = 0; k < n; ++k) {
    out.values[k] = a(order[k], order[k]).real();
    for (std::size_t i = 0; i < n; ++i) out.vectors(i, k) = v(i, order[k]);
  }
  return out;
}

namespace {

CMatrix outer_sum(const CMatrix& vectors, std::size_t first, std::size_t last) {
  const std::size_t n = vectors.rows();
  CMatrix p(n, n);
  for (std::size_t k = first; k < last; ++k)
    for (std::size_t i = 0; i < n; ++i) {
      const cplx vi = vectors(i, k);
      if (vi == cplx{}) continue;
      for (std::size_t j = 0; j < n; ++j) p(i, j) += vi * std::conj(vectors(j, k));
    }
  return p;
}

}  // namespace

SpectralDecomposition hermitian_eigen(const CMatrix& a, double tol) {
  const EigenSystem es = jacobi_eigensystem(a, tol);
  SpectralDecomposition out;
  const std::size_t n = es.values.size();
  std::size_t start = 0;
  while (start < n) {
    std::size_t end = start + 1;
    while (end < n && es.values[end] - es.values[end - 1] <= tol) ++end;
    double mean = 0.0;
    for (std::size_t k = start; k < end; ++k) mean += es.values[k];
    out.values.push_back(mean / static_cast<double>(end - start));
    out.projections.push_back(outer_sum(es.vectors, start, end));
    start = end;
  }
  return out;
}

CMatrix range_projection(const CMatrix& h, double tol) {
  const EigenSystem es = jacobi_eigensystem(h, tol);
  const std::size_t n = es.values.size();
  if (n > 0 && es.values.front() < -tol) {
    throw Error(ErrorKind::NotPSD, "eigenvalue " + std::to_string(es.values.front()));
  }
  std::size_t first = 0;
  while (first < n && es.values[first] <= tol) ++first;
  return outer_sum(es.vectors, first, n);
}

bool psd_check(const CMatrix& a, double tol) {
  const EigenSystem es = jacobi_eigensystem(a, tol);
  return es.values.empty() || es.values.front() >= -tol;
}

double operator_norm(const CMatrix& a) {
  if (a.size() == 0) return 0.0;
  double max_abs = 0.0;
  for (const auto& z : a.entries()) max_abs = std::max(max_abs, std::abs(z));
  if (max_abs == 0.0) return 0.0;
  const CMatrix scaled = a * cplx(1.0 / max_abs);
  const CMatrix gram = scaled.rows() >= scaled.cols() ? scaled.adjoint() * scaled : scaled * scaled.adjoint();
  const EigenSystem es = jacobi_eigensystem(gram, 1e-6);
  return max_abs * std::sqrt(std::max(0.0, es.values.back()));
}

LeastSquares lstsq(const CMatrix& a, std::span<const cplx> y, double tol) {
  if (y.size() != a.rows()) throw Error(ErrorKind::ShapeMismatch, "lstsq right-hand side length");
  const std::size_t m = a.rows();
  const std::size_t n = a.cols();
  std::vector<std::vector<cplx>> q;      // orthonormal columns
  std::vector<std::size_t> pivots;       // column index per q
  std::vector<std::vector<cplx>> r_cols;  // r_cols[j][k] = <q_k, a_j> for pivot j

  for (std::size_t j = 0; j < n; ++j) {
    std::vector<cplx> v(m);
    double col_norm = 0.0;
    for (std::size_t i = 0; i < m; ++i) {
      v[i] = a(i, j);
      col_norm += std::norm(v[i]);
    }
    col_norm = std::sqrt(col_norm);
    std::vector<cplx> r(q.size());
    for (int pass = 0; pass < 2; ++pass) {
      for (std::size_t k = 0; k < q.size(); ++k) {
        cplx c{};
        for (std::size_t i = 0; i < m; ++i) c += std::conj(q[k][i]) * v[i];
        for (std::size_t i = 0; i < m; ++i) v[i] -= c * q[k][i];
        r[k] += c;
      }
    }
    double rest = 0.0;
    for (const auto& z : v) rest += std::norm(z);
    rest = std::sqrt(rest);
    if (rest <= tol * std::max(1.0, col_norm)) continue;
    for (auto& z : v) z /= rest;
    r.push_back(rest);
    q.push_back(std::move(v));
    pivots.push_back(j);
    r_cols.push_back(std::move(r));
  }

  const std::size_t k = q.size();
  std::vector<cplx> c(k);
  for (std::size_t t = 0; t < k; ++t)
    for (std::size_t i = 0; i < m; ++i) c[t] += std::conj(q[t][i]) * y[i];
  std::vector<cplx> z(k);
  for (std::size_t t = k; t-- > 0;) {
    cplx acc = c[t];
    for (std::size_t s = t + 1; s < k; ++s) acc -= r_cols[s][t] * z[s];
    z[t] = acc / r_cols[t][t];
  }
  LeastSquares out;
  out.solution.assign(n, cplx{});
  for (std::size_t t = 0; t < k; ++t) out.solution[pivots[t]] = z[t];
  double res = 0.0;
  for (std::size_t i = 0; i < m; ++i) {
    cplx acc = y[i];
    for (std::size_t j = 0; j < n; ++j) acc -= a(i, j) * out.solution[j];
    res += std::norm(acc);
  }
  out.residual = std::sqrt(res);
  return out;
}

double max_abs_diff(std::span<const cplx> a, std::span<const cplx> b) {
  if (a.size() != b.size()) throw Error(ErrorKind::ShapeMismatch, "coordinate length mismatch");
  double m = 0.0;
  for (std::size_t k = 0; k < a.size(); ++k) m = std::max(m, std::abs(a[k] - b[k]));
  return m;
}

std::string_view to_string(ErrorKind kind) noexcept {
  switch (kind) {
    case ErrorKind::NotHermitian: return "NotHermitian";
    case ErrorKind::NoConvergence: return "NoConvergence";
    case ErrorKind::NotPSD: return "NotPSD";
    case ErrorKind::ShapeMismatch: return "ShapeMismatch";
    case ErrorKind::TooLarge: return "TooLarge";
    case ErrorKind::NotGenerating: return "NotGenerating";
    case ErrorKind::InvalidTable: return "InvalidTable";
    case ErrorKind::Truncated: return "Truncated";
    case ErrorKind::InconsistentComultiplication: return "InconsistentComultiplication";
    case ErrorKind::NoCounit: return "NoCounit";
    case ErrorKind::NoAntipode: return "NoAntipode";
    case ErrorKind::NoHaar: return "NoHaar";
    case ErrorKind::NonUniqueHaar: return "NonUniqueHaar";
    case ErrorKind::DegenerateCentralElement: return "DegenerateCentralElement";
    case ErrorKind::NotDensity: return "NotDensity";
    case ErrorKind::NotPositiveDefinite: return "NotPositiveDefinite";
    case ErrorKind::NotInGroup: return "NotInGroup";
    case ErrorKind::NullEvent: return "NullEvent";
    case ErrorKind::GroupMismatch: return "GroupMismatch";
    case ErrorKind::NotIdempotent: return "NotIdempotent";
    case ErrorKind::NotAState: return "NotAState";
    case ErrorKind::ProjectionOutsideAlgebra: return "ProjectionOutsideAlgebra";
    case ErrorKind::NotEquivalence: return "NotEquivalence";
    case ErrorKind::SyntaxError: return "SyntaxError";
    case ErrorKind::IndexOutOfRange: return "IndexOutOfRange";
    case ErrorKind::InvalidSpec: return "InvalidSpec";
  }
  return "Unknown";
}

}  // namespace qperm
