#pragma once

#include <complex>
#include <cstddef>
#include <stdexcept>
#include <utility>
#include <vector>

namespace qdilate {

using cplx = std::complex<double>;

struct Tol {
    double rel = 1e-9;
    double abs = 1e-12;

    // abs + rel*scale
    double at(double scale) const { return abs + rel * scale; }
};

// Honors QDILATE_TOL (a single number, used as rel).
Tol default_tol();

class Mat {
public:
    Mat() = default;
    Mat(std::size_t rows, std::size_t cols);
    Mat(std::size_t rows, std::size_t cols, std::vector<cplx> entries);
    Mat(std::initializer_list<std::initializer_list<cplx>> rows);

    static Mat identity(std::size_t n);
    static Mat zeros(std::size_t r, std::size_t c) { return Mat(r, c); }
    static Mat diag(const std::vector<cplx>& d);

    std::size_t rows() const { return r_; }
    std::size_t cols() const { return c_; }
    bool square() const { return r_ == c_; }

    cplx& operator()(std::size_t i, std::size_t j) { return a_[i * c_ + j]; }
    const cplx& operator()(std::size_t i, std::size_t j) const { return a_[i * c_ + j]; }

    const std::vector<cplx>& data() const { return a_; }
    std::vector<cplx>& data() { return a_; }

    bool finite() const;

private:
    std::size_t r_ = 0, c_ = 0;
    std::vector<cplx> a_;
};

class DimensionError : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

class ContractionError : public std::domain_error {
public:
    using std::domain_error::domain_error;
};

Mat mul(const Mat& A, const Mat& B);
Mat adjoint(const Mat& A);
Mat operator+(const Mat& A, const Mat& B);
Mat operator-(const Mat& A, const Mat& B);
Mat operator*(cplx s, const Mat& A);
inline Mat operator*(const Mat& A, const Mat& B) { return mul(A, B); }

Mat kron(const Mat& A, const Mat& B);
Mat blockdiag(const std::vector<Mat>& blocks);
Mat power(const Mat& A, unsigned n);
std::vector<cplx> matvec(const Mat& A, const std::vector<cplx>& x);

double fro_norm(const Mat& A);
double max_abs(const Mat& A);
double operator_norm(const Mat& A);

cplx trace(const Mat& A);
cplx det2(const Mat& A);
Mat inv2(const Mat& A);

// Eigen-decomposition of a Hermitian matrix (cyclic Jacobi). Values ascending,
// vectors as columns.
struct HermEig {
    std::vector<double> values;
    Mat vectors;
};
HermEig herm_eig(const Mat& H);

struct EigPair2 {
    cplx value;
    std::vector<cplx> vector;  // length 2, unit norm
};
std::pair<EigPair2, EigPair2> eig2(const Mat& M);

// Double eigenvalue with nonzero nilpotent part.
bool diagonalizable2(const Mat& M, const Tol& tol);

Mat defect(const Mat& T, const Tol& tol = Tol{});
Mat psd_sqrt(const Mat& H, const Tol& tol = Tol{});

// Unitary W with W*F = G for frames of equal Gram matrix.
Mat unitary_completion(const Mat& F, const Mat& G, const Tol& tol = Tol{});

// Orthonormal columns spanning range(F) followed by a complement basis.
Mat orthonormal_extension(const Mat& F, double drop);

// ||A*A - I||_max
double unitarity_residual(const Mat& A);

// Upper-triangular Schur form of a 2x2: returns unitary Q with Q* M Q upper triangular,
// first column an eigenvector for the lexicographically larger eigenvalue.
Mat schur2(const Mat& M);

}  // namespace qdilate
