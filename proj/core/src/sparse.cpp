#include "qdilate/sparse.hpp"

#include <algorithm>
#include <cmath>

namespace qdilate {

SpMat SpMat::from(const Mat& A) {
    SpMat S;
    S.rows = A.rows();
    S.cols = A.cols();
    S.start.assign(S.rows + 1, 0);
    for (std::size_t i = 0; i < S.rows; ++i) {
        for (std::size_t j = 0; j < S.cols; ++j)
            if (A(i, j) != cplx(0.0)) {
                S.col.push_back(j);
                S.val.push_back(A(i, j));
            }
        S.start[i + 1] = S.val.size();
    }
    return S;
}

Mat SpMat::dense() const {
    Mat A(rows, cols);
    for (std::size_t i = 0; i < rows; ++i)
        for (std::size_t t = start[i]; t < start[i + 1]; ++t) A(i, col[t]) += val[t];
    return A;
}

std::vector<cplx> SpMat::apply(const std::vector<cplx>& x) const {
    if (x.size() != cols) throw DimensionError("SpMat::apply: size mismatch");
    std::vector<cplx> y(rows);
    for (std::size_t i = 0; i < rows; ++i) {
        cplx s = 0;
        for (std::size_t t = start[i]; t < start[i + 1]; ++t) s += val[t] * x[col[t]];
        y[i] = s;
    }
    return y;
}

SpMat sp_adjoint(const SpMat& A) {
    SpMat B;
    B.rows = A.cols;
    B.cols = A.rows;
    B.start.assign(B.rows + 1, 0);
    for (std::size_t c : A.col) ++B.start[c + 1];
    for (std::size_t i = 0; i < B.rows; ++i) B.start[i + 1] += B.start[i];
    B.col.resize(A.nnz());
    B.val.resize(A.nnz());
    std::vector<std::size_t> fill(B.start.begin(), B.start.end() - 1);
    for (std::size_t i = 0; i < A.rows; ++i)
        for (std::size_t t = A.start[i]; t < A.start[i + 1]; ++t) {
            const std::size_t pos = fill[A.col[t]]++;
            B.col[pos] = i;
            B.val[pos] = std::conj(A.val[t]);
        }
    return B;
}

SpMat sp_mul(const SpMat& A, const SpMat& B) {
    if (A.cols != B.rows) throw DimensionError("sp_mul: inner dimensions differ");
    SpMat C;
    C.rows = A.rows;
    C.cols = B.cols;
    C.start.assign(C.rows + 1, 0);
    std::vector<cplx> acc(B.cols);
    std::vector<char> seen(B.cols, 0);
    std::vector<std::size_t> touched;
    for (std::size_t i = 0; i < A.rows; ++i) {
        touched.clear();
        for (std::size_t t = A.start[i]; t < A.start[i + 1]; ++t) {
            const std::size_t k = A.col[t];
            for (std::size_t u = B.start[k]; u < B.start[k + 1]; ++u) {
                const std::size_t j = B.col[u];
                if (!seen[j]) {
                    seen[j] = 1;
                    touched.push_back(j);
                }
                acc[j] += A.val[t] * B.val[u];
            }
        }
        std::sort(touched.begin(), touched.end());
        for (std::size_t j : touched) {
            C.col.push_back(j);
            C.val.push_back(acc[j]);
            acc[j] = 0;
            seen[j] = 0;
        }
        C.start[i + 1] = C.val.size();
    }
    return C;
}

double sp_max_diff(const SpMat& A, const SpMat& B, cplx s) {
    if (A.rows != B.rows || A.cols != B.cols) throw DimensionError("sp_max_diff: shape mismatch");
    double worst = 0;
    std::vector<cplx> acc(A.cols);
    std::vector<std::size_t> touched;
    std::vector<char> seen(A.cols, 0);
    for (std::size_t i = 0; i < A.rows; ++i) {
        touched.clear();
        auto add = [&](std::size_t j, cplx v) {
            if (!seen[j]) {
                seen[j] = 1;
                touched.push_back(j);
            }
            acc[j] += v;
        };
        for (std::size_t t = A.start[i]; t < A.start[i + 1]; ++t) add(A.col[t], A.val[t]);
        for (std::size_t t = B.start[i]; t < B.start[i + 1]; ++t) add(B.col[t], -s * B.val[t]);
        for (std::size_t j : touched) {
            worst = std::max(worst, std::abs(acc[j]));
            acc[j] = 0;
            seen[j] = 0;
        }
    }
    return worst;
}

double sp_unitarity_residual(const SpMat& A) {
    const SpMat P = sp_mul(sp_adjoint(A), A);
    SpMat I;
    I.rows = I.cols = A.cols;
    I.start.resize(A.cols + 1);
    for (std::size_t i = 0; i < A.cols; ++i) {
        I.start[i] = i;
        I.col.push_back(i);
        I.val.push_back(1.0);
    }
    I.start[A.cols] = A.cols;
    return sp_max_diff(P, I, 1.0);
}

}  // namespace qdilate
