#include "qperm/kernels.hpp"

#include <cstddef>

#include "qperm/errors.hpp"

#ifdef _OPENMP
#include <omp.h>
#endif

namespace qperm::kernels {

namespace {

void check_product_shape(const CMatrix& a, const CMatrix& b) {
  if (a.cols() != b.rows()) {
    throw Error(ErrorKind::ShapeMismatch, "matmul inner dimensions differ");
  }
}

cplx hs(const CMatrix& b, const CMatrix& a) {
  const auto x = b.entries();
  const auto y = a.entries();
  cplx acc{};
  for (std::size_t k = 0; k < x.size(); ++k) acc += std::conj(x[k]) * y[k];
  return acc;
}

cplx bilinear(const CMatrix& t, std::span<const cplx> left, std::span<const cplx> right) {
  cplx acc{};
  for (std::size_t s = 0; s < t.rows(); ++s) {
    if (left[s] == cplx{}) continue;
    cplx row{};
    for (std::size_t u = 0; u < t.cols(); ++u) row += t(s, u) * right[u];
    acc += left[s] * row;
  }
  return acc;
}

}  // namespace

namespace serial {

CMatrix matmul(const CMatrix& a, const CMatrix& b) {
  check_product_shape(a, b);
  CMatrix out(a.rows(), b.cols());
  for (std::size_t i = 0; i < a.rows(); ++i) {
    for (std::size_t k = 0; k < a.cols(); ++k) {
      const cplx aik = a(i, k);
      if (aik == cplx{}) continue;
      for (std::size_t j = 0; j < b.cols(); ++j) out(i, j) += aik * b(k, j);
    }
  }
  return out;
}

std::vector<cplx> project(std::span<const CMatrix> basis, const CMatrix& a) {
  std::vector<cplx> out(basis.size());
  for (std::size_t i = 0; i < basis.size(); ++i) out[i] = hs(basis[i], a);
  return out;
}

std::vector<cplx> contract_bilinear(std::span<const CMatrix> tensor, std::span<const cplx> left,
                                    std::span<const cplx> right) {
  std::vector<cplx> out(tensor.size());
  for (std::size_t r = 0; r < tensor.size(); ++r) out[r] = bilinear(tensor[r], left, right);
  return out;
}

}  // namespace serial

namespace parallel {

CMatrix matmul(const CMatrix& a, const CMatrix& b) {
  check_product_shape(a, b);
  CMatrix out(a.rows(), b.cols());
  const auto rows = static_cast<long>(a.rows());
#pragma omp parallel for schedule(static)
  for (long i = 0; i < rows; ++i) {
    const auto ii = static_cast<std::size_t>(i);
    for (std::size_t k = 0; k < a.cols(); ++k) {
      const cplx aik = a(ii, k);
      if (aik == cplx{}) continue;
      for (std::size_t j = 0; j < b.cols(); ++j) out(ii, j) += aik * b(k, j);
    }
  }
  return out;
}

std::vector<cplx> project(std::span<const CMatrix> basis, const CMatrix& a) {
  std::vector<cplx> out(basis.size());
  const auto n = static_cast<long>(basis.size());
#pragma omp parallel for schedule(static)
  for (long i = 0; i < n; ++i) out[static_cast<std::size_t>(i)] = hs(basis[static_cast<std::size_t>(i)], a);
  return out;
}

std::vector<cplx> contract_bilinear(std::span<const CMatrix> tensor, std::span<const cplx> left,
                                    std::span<const cplx> right) {
  std::vector<cplx> out(tensor.size());
  const auto n = static_cast<long>(tensor.size());
#pragma omp parallel for schedule(static)
  for (long r = 0; r < n; ++r) {
    out[static_cast<std::size_t>(r)] = bilinear(tensor[static_cast<std::size_t>(r)], left, right);
  }
  return out;
}

}  // namespace parallel

int thread_count() {
#ifdef _OPENMP
  return omp_get_max_threads();
#else
  return 1;
#endif
}

}  // namespace qperm::kernels
