#pragma once

#include <complex>
#include <cstddef>
#include <initializer_list>
#include <span>
#include <vector>

namespace qperm {

using cplx = std::complex<double>;

inline constexpr double kDefaultTol = 1e-9;
inline constexpr double kClusterTol = 1e-8;

/// Dense complex matrix, row-major. Value type: operations return fresh
/// matrices and never alias their inputs.
class CMatrix {
 public:
  CMatrix() = default;
  CMatrix(std::size_t rows, std::size_t cols) : rows_(rows), cols_(cols), data_(rows * cols) {}
  CMatrix(std::size_t rows, std::size_t cols, std::vector<cplx> entries);
  CMatrix(std::initializer_list<std::initializer_list<cplx>> rows);

  static CMatrix identity(std::size_t n);
  static CMatrix zeros(std::size_t rows, std::size_t cols) { return {rows, cols}; }
  static CMatrix diagonal(std::span<const cplx> diag);
  static CMatrix column(std::span<const cplx> v);

  std::size_t rows() const noexcept { return rows_; }
  std::size_t cols() const noexcept { return cols_; }
  std::size_t size() const noexcept { return data_.size(); }
  bool square() const noexcept { return rows_ == cols_; }

  cplx operator()(std::size_t i, std::size_t j) const { return data_[i * cols_ + j]; }
  cplx& operator()(std::size_t i, std::size_t j) { return data_[i * cols_ + j]; }

  std::span<const cplx> entries() const noexcept { return data_; }
  std::span<cplx> entries() noexcept { return data_; }

  CMatrix adjoint() const;
  CMatrix transpose() const;
  cplx trace() const;
  double frobenius_norm() const;
  /// Max |a_ij - b_ij|.
  double max_abs_diff(const CMatrix& other) const;
  bool all_finite() const;

  CMatrix& operator+=(const CMatrix& other);
  CMatrix& operator-=(const CMatrix& other);
  CMatrix& operator*=(cplx s);

  bool operator==(const CMatrix& other) const = default;

 private:
  std::size_t rows_ = 0;
  std::size_t cols_ = 0;
  std::vector<cplx> data_;
};

CMatrix operator+(CMatrix a, const CMatrix& b);
CMatrix operator-(CMatrix a, const CMatrix& b);
CMatrix operator*(CMatrix a, cplx s);
CMatrix operator*(cplx s, CMatrix a);
/// Matrix product; dispatches to the OpenMP kernel above a size threshold.
CMatrix operator*(const CMatrix& a, const CMatrix& b);

/// Kronecker product: (a ⊗ b)[(i1,i2),(j1,j2)] = a[i1,j1] b[i2,j2].
CMatrix kron(const CMatrix& a, const CMatrix& b);

/// Hilbert–Schmidt inner product Tr(a* b).
cplx hs_inner(const CMatrix& a, const CMatrix& b);

/// ‖a - a*‖ (Frobenius).
double hermitian_defect(const CMatrix& a);

struct EigenSystem {
  std::vector<double> values;  // ascending
  CMatrix vectors;             // column k is the eigenvector for values[k]
};

/// Raw cyclic-Jacobi eigensystem of a Hermitian matrix, no clustering.
EigenSystem jacobi_eigensystem(const CMatrix& a, double tol = kClusterTol);

struct SpectralDecomposition {
  std::vector<double> values;        // strictly increasing cluster centres
  std::vector<CMatrix> projections;  // orthogonal, sum to identity
};

/// Eigenvalues within `tol` of each other are merged into one cluster.
SpectralDecomposition hermitian_eigen(const CMatrix& a, double tol = kClusterTol);

/// Orthogonal projection onto the eigenvectors of `h` with eigenvalue > tol.
CMatrix range_projection(const CMatrix& h, double tol = kDefaultTol);

bool psd_check(const CMatrix& a, double tol = kDefaultTol);

/// Largest singular value.
double operator_norm(const CMatrix& a);

struct LeastSquares {
  std::vector<cplx> solution;
  double residual = 0.0;
};

/// Minimise ‖a x - y‖ over x. Columns numerically dependent (relative norm
/// below tol after orthogonalisation) get a zero coefficient.
LeastSquares lstsq(const CMatrix& a, std::span<const cplx> y, double tol = kDefaultTol);

/// Max |a_i - b_i| for coordinate vectors.
double max_abs_diff(std::span<const cplx> a, std::span<const cplx> b);

}  // namespace qperm
