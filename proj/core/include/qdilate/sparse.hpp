#pragma once

#include <vector>

#include "qdilate/matcore.hpp"

namespace qdilate {

// Compressed-row view used by the verifier; certificates themselves stay dense.
struct SpMat {
    std::size_t rows = 0, cols = 0;
    std::vector<std::size_t> start;  // rows + 1
    std::vector<std::size_t> col;
    std::vector<cplx> val;

    static SpMat from(const Mat& A);
    Mat dense() const;
    std::size_t nnz() const { return val.size(); }

    std::vector<cplx> apply(const std::vector<cplx>& x) const;
};

SpMat sp_adjoint(const SpMat& A);
SpMat sp_mul(const SpMat& A, const SpMat& B);
// max |(A - s B)_ij|
double sp_max_diff(const SpMat& A, const SpMat& B, cplx s);
// max |(A*A - I)_ij|
double sp_unitarity_residual(const SpMat& A);

}  // namespace qdilate
