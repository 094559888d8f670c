#include "qdilate/matcore.hpp"

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <numeric>
#include <string>

namespace qdilate {

Tol default_tol() {
    Tol t;
    if (const char* env = std::getenv("QDILATE_TOL")) {
        char* end = nullptr;
        double v = std::strtod(env, &end);
        if (end != env && v > 0 && std::isfinite(v)) t.rel = v;
    }
    return t;
}

Mat::Mat(std::size_t rows, std::size_t cols) : r_(rows), c_(cols), a_(rows * cols) {}

Mat::Mat(std::size_t rows, std::size_t cols, std::vector<cplx> entries)
    : r_(rows), c_(cols), a_(std::move(entries)) {
    if (a_.size() != r_ * c_) throw DimensionError("entry count does not match shape");
}

Mat::Mat(std::initializer_list<std::initializer_list<cplx>> rows) {
    r_ = rows.size();
    c_ = r_ ? rows.begin()->size() : 0;
    a_.reserve(r_ * c_);
    for (const auto& row : rows) {
        if (row.size() != c_) throw DimensionError("ragged initializer");
        a_.insert(a_.end(), row.begin(), row.end());
    }
}

Mat Mat::identity(std::size_t n) {
    Mat I(n, n);
    for (std::size_t i = 0; i < n; ++i) I(i, i) = 1.0;
    return I;
}

Mat Mat::diag(const std::vector<cplx>& d) {
    Mat D(d.size(), d.size());
    for (std::size_t i = 0; i < d.size(); ++i) D(i, i) = d[i];
    return D;
}

bool Mat::finite() const {
    return std::all_of(a_.begin(), a_.end(),
                       [](cplx z) { return std::isfinite(z.real()) && std::isfinite(z.imag()); });
}

// Skips zero entries of A, so structured products stay cheap.
Mat mul(const Mat& A, const Mat& B) {
    if (A.cols() != B.rows()) throw DimensionError("mul: inner dimensions differ");
    const std::size_t n = A.rows(), m = B.cols(), K = A.cols();
    Mat C(n, m);
    for (std::size_t i = 0; i < n; ++i) {
        cplx* ci = &C(i, 0);
        for (std::size_t k = 0; k < K; ++k) {
            const cplx a = A(i, k);
            if (a == cplx(0.0)) continue;
            const cplx* bk = &B(k, 0);
            for (std::size_t j = 0; j < m; ++j) ci[j] += a * bk[j];
        }
    }
    return C;
}

Mat adjoint(const Mat& A) {
    Mat B(A.cols(), A.rows());
    for (std::size_t i = 0; i < A.rows(); ++i)
        for (std::size_t j = 0; j < A.cols(); ++j) B(j, i) = std::conj(A(i, j));
    return B;
}

Mat operator+(const Mat& A, const Mat& B) {
    if (A.rows() != B.rows() || A.cols() != B.cols()) throw DimensionError("add: shape mismatch");
    Mat C = A;
    for (std::size_t i = 0; i < C.data().size(); ++i) C.data()[i] += B.data()[i];
    return C;
}

Mat operator-(const Mat& A, const Mat& B) {
    if (A.rows() != B.rows() || A.cols() != B.cols()) throw DimensionError("sub: shape mismatch");
    Mat C = A;
    for (std::size_t i = 0; i < C.data().size(); ++i) C.data()[i] -= B.data()[i];
    return C;
}

Mat operator*(cplx s, const Mat& A) {
    Mat C = A;
    for (auto& z : C.data()) z *= s;
    return C;
}

Mat kron(const Mat& A, const Mat& B) {
    Mat C(A.rows() * B.rows(), A.cols() * B.cols());
    for (std::size_t i = 0; i < A.rows(); ++i)
        for (std::size_t j = 0; j < A.cols(); ++j) {
            const cplx a = A(i, j);
            if (a == cplx(0.0)) continue;
            for (std::size_t k = 0; k < B.rows(); ++k)
                for (std::size_t l = 0; l < B.cols(); ++l)
                    C(i * B.rows() + k, j * B.cols() + l) = a * B(k, l);
        }
    return C;
}

Mat blockdiag(const std::vector<Mat>& blocks) {
    std::size_t r = 0, c = 0;
    for (const auto& b : blocks) { r += b.rows(); c += b.cols(); }
    Mat D(r, c);
    std::size_t r0 = 0, c0 = 0;
    for (const auto& b : blocks) {
        for (std::size_t i = 0; i < b.rows(); ++i)
            for (std::size_t j = 0; j < b.cols(); ++j) D(r0 + i, c0 + j) = b(i, j);
        r0 += b.rows();
        c0 += b.cols();
    }
    return D;
}

Mat power(const Mat& A, unsigned n) {
    if (!A.square()) throw DimensionError("power: non-square");
    Mat P = Mat::identity(A.rows());
    for (unsigned i = 0; i < n; ++i) P = mul(A, P);
    return P;
}

std::vector<cplx> matvec(const Mat& A, const std::vector<cplx>& x) {
    if (A.cols() != x.size()) throw DimensionError("matvec: size mismatch");
    std::vector<cplx> y(A.rows());
    for (std::size_t i = 0; i < A.rows(); ++i) {
        cplx s = 0;
        const cplx* ai = &A(i, 0);
        for (std::size_t j = 0; j < A.cols(); ++j)
            if (ai[j] != cplx(0.0)) s += ai[j] * x[j];
        y[i] = s;
    }
    return y;
}

double fro_norm(const Mat& A) {
    double s = 0;
    for (auto z : A.data()) s += std::norm(z);
    return std::sqrt(s);
}

double max_abs(const Mat& A) {
    double m = 0;
    for (auto z : A.data()) m = std::max(m, std::abs(z));
    return m;
}

cplx trace(const Mat& A) {
    cplx t = 0;
    for (std::size_t i = 0; i < std::min(A.rows(), A.cols()); ++i) t += A(i, i);
    return t;
}

cplx det2(const Mat& A) {
    if (A.rows() != 2 || A.cols() != 2) throw DimensionError("det2: not 2x2");
    return A(0, 0) * A(1, 1) - A(0, 1) * A(1, 0);
}

Mat inv2(const Mat& A) {
    const cplx d = det2(A);
    if (d == cplx(0.0)) throw std::domain_error("inv2: singular");
    return Mat{{A(1, 1) / d, -A(0, 1) / d}, {-A(1, 0) / d, A(0, 0) / d}};
}

HermEig herm_eig(const Mat& Hin) {
    if (!Hin.square()) throw DimensionError("herm_eig: non-square");
    const std::size_t n = Hin.rows();
    Mat H = Hin;
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = i + 1; j < n; ++j) {
            cplx avg = 0.5 * (H(i, j) + std::conj(H(j, i)));
            H(i, j) = avg;
            H(j, i) = std::conj(avg);
        }
    for (std::size_t i = 0; i < n; ++i) H(i, i) = H(i, i).real();
    Mat V = Mat::identity(n);
    const double scale = std::max(fro_norm(H), 1e-300);

    for (int sweep = 0; sweep < 100; ++sweep) {
        double off = 0;
        for (std::size_t p = 0; p < n; ++p)
            for (std::size_t q = p + 1; q < n; ++q) off += std::norm(H(p, q));
        if (std::sqrt(off) <= 1e-17 * scale) break;

        for (std::size_t p = 0; p < n; ++p)
            for (std::size_t q = p + 1; q < n; ++q) {
                const cplx b = H(p, q);
                const double beta = std::abs(b);
                if (beta <= 1e-300) continue;
                const cplx ph = b / beta;  // e^{i phi}
                const double a = H(p, p).real(), d = H(q, q).real();
                const double theta = (d - a) / (2.0 * beta);
                const double t = (theta >= 0 ? 1.0 : -1.0) / (std::abs(theta) + std::sqrt(theta * theta + 1.0));
                const double c = 1.0 / std::sqrt(t * t + 1.0), s = t * c;
                const cplx jqp = -s * std::conj(ph), jqq = c * std::conj(ph);
                for (std::size_t k = 0; k < n; ++k) {
                    const cplx hp = H(k, p), hq = H(k, q);
                    H(k, p) = hp * c + hq * jqp;
                    H(k, q) = hp * s + hq * jqq;
                    const cplx vp = V(k, p), vq = V(k, q);
                    V(k, p) = vp * c + vq * jqp;
                    V(k, q) = vp * s + vq * jqq;
                }
                for (std::size_t k = 0; k < n; ++k) {
                    const cplx hp = H(p, k), hq = H(q, k);
                    H(p, k) = c * hp + std::conj(jqp) * hq;
                    H(q, k) = s * hp + std::conj(jqq) * hq;
                }
                H(p, q) = 0;
                H(q, p) = 0;
                H(p, p) = H(p, p).real();
                H(q, q) = H(q, q).real();
            }
    }

    std::vector<std::size_t> idx(n);
    std::iota(idx.begin(), idx.end(), 0);
    std::stable_sort(idx.begin(), idx.end(),
                     [&](std::size_t x, std::size_t y) { return H(x, x).real() < H(y, y).real(); });
    HermEig out{std::vector<double>(n), Mat(n, n)};
    for (std::size_t j = 0; j < n; ++j) {
        out.values[j] = H(idx[j], idx[j]).real();
        for (std::size_t k = 0; k < n; ++k) out.vectors(k, j) = V(k, idx[j]);
    }
    return out;
}

double operator_norm(const Mat& A) {
    if (A.rows() == 0 || A.cols() == 0) return 0.0;
    const Mat G = A.rows() >= A.cols() ? mul(adjoint(A), A) : mul(A, adjoint(A));
    if (G.rows() == 1) return std::sqrt(std::max(G(0, 0).real(), 0.0));
    if (G.rows() == 2) {
        const double a = G(0, 0).real(), d = G(1, 1).real();
        const double b2 = std::norm(G(0, 1));
        const double lmax = 0.5 * (a + d) + std::sqrt(0.25 * (a - d) * (a - d) + b2);
        return std::sqrt(std::max(lmax, 0.0));
    }
    const auto e = herm_eig(G);
    return std::sqrt(std::max(e.values.back(), 0.0));
}

namespace {

std::vector<cplx> null_vector2(const Mat& M, cplx lambda, std::size_t fallback) {
    const cplx a = M(0, 0) - lambda, b = M(0, 1), c = M(1, 0), d = M(1, 1) - lambda;
    std::vector<cplx> v(2);
    const double n1 = std::norm(a) + std::norm(b), n2 = std::norm(c) + std::norm(d);
    if (std::max(n1, n2) <= 1e-30 * std::max(1.0, fro_norm(M) * fro_norm(M))) {
        v[fallback] = 1.0;
        return v;
    }
    if (n1 >= n2) {
        v[0] = b;
        v[1] = -a;
    } else {
        v[0] = d;
        v[1] = -c;
    }
    const double nv = std::sqrt(std::norm(v[0]) + std::norm(v[1]));
    v[0] /= nv;
    v[1] /= nv;
    return v;
}

constexpr double kDoubleRootSlack = 1e-13;

bool lex_less(cplx x, cplx y) {
    if (x.real() != y.real()) return x.real() < y.real();
    return x.imag() < y.imag();
}

}  // namespace

std::pair<EigPair2, EigPair2> eig2(const Mat& M) {
    if (M.rows() != 2 || M.cols() != 2) throw DimensionError("eig2: not 2x2");
    const cplx tr = M(0, 0) + M(1, 1);
    const cplx det = det2(M);
    const cplx disc2 = 0.25 * tr * tr - det;
    // A rounding-level discriminant would split a double root by sqrt(eps).
    double scale = 0;
    for (const auto& x : M.data()) scale = std::max(scale, std::norm(x));
    if (std::abs(disc2) <= kDoubleRootSlack * scale) {
        const cplx l = 0.5 * tr;
        return {EigPair2{l, null_vector2(M, l, 0)}, EigPair2{l, null_vector2(M, l, 1)}};
    }
    const cplx disc = std::sqrt(disc2);
    cplx l1 = 0.5 * tr + disc, l2 = 0.5 * tr - disc;
    // Vieta refinement for the smaller root.
    if (std::abs(l1) < std::abs(l2)) std::swap(l1, l2);
    if (l1 != cplx(0.0)) l2 = det / l1;
    if (lex_less(l2, l1)) std::swap(l1, l2);
    EigPair2 p1{l1, null_vector2(M, l1, 0)};
    EigPair2 p2{l2, null_vector2(M, l2, 1)};
    return {p1, p2};
}

bool diagonalizable2(const Mat& M, const Tol& tol) {
    const auto [p1, p2] = eig2(M);
    const double nm = operator_norm(M);
    if (std::abs(p1.value - p2.value) > tol.at(nm)) return true;
    const cplx lam = 0.5 * (p1.value + p2.value);
    return max_abs(M - lam * Mat::identity(2)) <= tol.at(nm);
}

Mat psd_sqrt(const Mat& H, const Tol& tol) {
    const auto e = herm_eig(H);
    const std::size_t n = H.rows();
    const double floor = tol.at(1.0);
    Mat R(n, n);
    for (std::size_t k = 0; k < n; ++k) {
        double lam = e.values[k];
        if (lam < -floor) throw ContractionError("psd_sqrt: negative eigenvalue");
        lam = std::sqrt(std::max(lam, 0.0));
        if (lam == 0.0) continue;
        for (std::size_t i = 0; i < n; ++i) {
            const cplx vi = e.vectors(i, k) * lam;
            for (std::size_t j = 0; j < n; ++j) R(i, j) += vi * std::conj(e.vectors(j, k));
        }
    }
    return R;
}

Mat defect(const Mat& T, const Tol& tol) {
    if (!T.square()) throw DimensionError("defect: non-square");
    if (operator_norm(T) > 1.0 + tol.at(1.0)) throw ContractionError("defect: not a contraction");
    return psd_sqrt(Mat::identity(T.rows()) - mul(adjoint(T), T), tol);
}

Mat orthonormal_extension(const Mat& F, double drop) {
    const std::size_t n = F.rows();
    std::vector<std::vector<cplx>> Q;
    auto absorb = [&](std::vector<cplx> v) {
        for (int pass = 0; pass < 2; ++pass)
            for (const auto& q : Q) {
                cplx dot = 0;
                for (std::size_t i = 0; i < n; ++i) dot += std::conj(q[i]) * v[i];
                for (std::size_t i = 0; i < n; ++i) v[i] -= dot * q[i];
            }
        double nv = 0;
        for (auto z : v) nv += std::norm(z);
        nv = std::sqrt(nv);
        if (nv <= drop) return false;
        for (auto& z : v) z /= nv;
        Q.push_back(std::move(v));
        return true;
    };
    for (std::size_t j = 0; j < F.cols() && Q.size() < n; ++j) {
        std::vector<cplx> v(n);
        for (std::size_t i = 0; i < n; ++i) v[i] = F(i, j);
        absorb(std::move(v));
    }
    // Pivot over the standard basis by residual weight 1 - sum_k |Q_ik|^2.
    std::vector<double> weight(n, 1.0);
    for (const auto& q : Q)
        for (std::size_t i = 0; i < n; ++i) weight[i] -= std::norm(q[i]);
    std::vector<bool> used(n, false);
    while (Q.size() < n) {
        std::size_t best = n;
        for (std::size_t i = 0; i < n; ++i)
            if (!used[i] && (best == n || weight[i] > weight[best] + 1e-14)) best = i;
        if (best == n) break;
        used[best] = true;
        std::vector<cplx> e(n);
        e[best] = 1.0;
        if (absorb(std::move(e)))
            for (std::size_t i = 0; i < n; ++i) weight[i] -= std::norm(Q.back()[i]);
    }
    Mat out(n, Q.size());
    for (std::size_t j = 0; j < Q.size(); ++j)
        for (std::size_t i = 0; i < n; ++i) out(i, j) = Q[j][i];
    return out;
}

Mat unitary_completion(const Mat& F, const Mat& G, const Tol& tol) {
    if (F.rows() != G.rows() || F.cols() != G.cols()) throw DimensionError("unitary_completion: frame shapes differ");
    const std::size_t n = F.rows(), r = F.cols();
    const Mat KF = mul(adjoint(F), F), KG = mul(adjoint(G), G);
    const double scale = std::max({max_abs(KF), max_abs(KG), 1.0});
    if (max_abs(KF - KG) > tol.at(scale)) throw std::domain_error("unitary_completion: Gram mismatch");
    const auto e = herm_eig(0.5 * (KF + KG));
    const double drop = tol.at(scale);
    std::vector<std::size_t> keep;
    for (std::size_t k = r; k-- > 0;)
        if (e.values[k] > drop) keep.push_back(k);
    Mat UF(n, keep.size()), UG(n, keep.size());
    for (std::size_t c = 0; c < keep.size(); ++c) {
        const std::size_t k = keep[c];
        const double s = 1.0 / std::sqrt(e.values[k]);
        for (std::size_t i = 0; i < n; ++i) {
            cplx f = 0, g = 0;
            for (std::size_t l = 0; l < r; ++l) {
                f += F(i, l) * e.vectors(l, k);
                g += G(i, l) * e.vectors(l, k);
            }
            UF(i, c) = f * s;
            UG(i, c) = g * s;
        }
    }
    const Mat BF = orthonormal_extension(UF, 1e-8);
    const Mat BG = orthonormal_extension(UG, 1e-8);
    if (BF.cols() != n || BG.cols() != n) throw std::domain_error("unitary_completion: basis extension failed");
    return mul(BG, adjoint(BF));
}

double unitarity_residual(const Mat& A) {
    const std::size_t n = A.rows(), m = A.cols();
    // Row-wise nonzero lists keep this near O(nnz^2 / n) for structured operators.
    std::vector<std::vector<std::pair<std::size_t, cplx>>> byRow(n);
    for (std::size_t k = 0; k < n; ++k)
        for (std::size_t j = 0; j < m; ++j)
            if (A(k, j) != cplx(0.0)) byRow[k].emplace_back(j, A(k, j));
    std::vector<std::vector<std::pair<std::size_t, std::size_t>>> byCol(m);
    for (std::size_t k = 0; k < n; ++k)
        for (std::size_t t = 0; t < byRow[k].size(); ++t) byCol[byRow[k][t].first].emplace_back(k, t);
    double worst = 0;
    std::vector<cplx> acc(m);
    for (std::size_t j = 0; j < m; ++j) {
        std::fill(acc.begin(), acc.end(), cplx(0.0));
        for (auto [k, t] : byCol[j]) {
            const cplx akj = byRow[k][t].second;
            for (auto [i, aki] : byRow[k]) acc[i] += std::conj(aki) * akj;
        }
        acc[j] -= 1.0;
        for (auto z : acc) worst = std::max(worst, std::abs(z));
    }
    return worst;
}

Mat schur2(const Mat& M) {
    const auto [p1, p2] = eig2(M);
    (void)p1;
    const auto& v = p2.vector;
    return Mat{{v[0], -std::conj(v[1])}, {v[1], std::conj(v[0])}};
}

}  // namespace qdilate
