#pragma once

// Data-parallel inner loops. Every kernel has an OpenMP version in
// `parallel` and a plain loop in `serial`; the serial ones are the
// reference the tests compare against and the baseline for qperm_bench.

#include <span>
#include <vector>

#include "qperm/numerics.hpp"

namespace qperm::kernels {

namespace serial {

CMatrix matmul(const CMatrix& a, const CMatrix& b);

/// out[i] = Tr(basis[i]* a)
std::vector<cplx> project(std::span<const CMatrix> basis, const CMatrix& a);

/// out[r] = Σ_{s,t} tensor[r](s,t) · left[s] · right[t]
std::vector<cplx> contract_bilinear(std::span<const CMatrix> tensor, std::span<const cplx> left,
                                    std::span<const cplx> right);

}  // namespace serial

namespace parallel {

CMatrix matmul(const CMatrix& a, const CMatrix& b);
std::vector<cplx> project(std::span<const CMatrix> basis, const CMatrix& a);
std::vector<cplx> contract_bilinear(std::span<const CMatrix> tensor, std::span<const cplx> left,
                                    std::span<const cplx> right);

}  // namespace parallel

/// Number of threads the parallel kernels will use.
int thread_count();

}  // namespace qperm::kernels
