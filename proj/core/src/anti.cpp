#include "qdilate/anti.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <random>

namespace qdilate {

namespace {

double scale_of(const Tuple& T) {
    double s = 0;
    for (const auto& t : T) s = std::max(s, operator_norm(t));
    return std::max(s, 1e-300);
}

// Unitary whose first column is the unit vector v.
Mat frame_from(const std::vector<cplx>& v) {
    return Mat{{v[0], -std::conj(v[1])}, {v[1], std::conj(v[0])}};
}

Mat in_frame(const Mat& Q, const Mat& A) { return mul(adjoint(Q), mul(A, Q)); }

std::vector<cplx> kernel_vector(const Mat& A) {
    // A is singular: rows are parallel, take the orthogonal of the larger row
    const double n1 = std::norm(A(0, 0)) + std::norm(A(0, 1));
    const double n2 = std::norm(A(1, 0)) + std::norm(A(1, 1));
    cplx x = n1 >= n2 ? A(0, 0) : A(1, 0), y = n1 >= n2 ? A(0, 1) : A(1, 1);
    std::vector<cplx> v{y, -x};
    const double nv = std::sqrt(std::norm(v[0]) + std::norm(v[1]));
    if (nv == 0) return {1.0, 0.0};
    return {v[0] / nv, v[1] / nv};
}

std::size_t argmax_abs(const std::vector<cplx>& v, const std::vector<std::size_t>& among) {
    std::size_t best = kNone;
    for (std::size_t j : among)
        if (best == kNone || std::abs(v[j]) > std::abs(v[best]) * (1 + 1e-12)) best = j;
    return best;
}

}  // namespace

const char* to_string(AntiKind k) {
    switch (k) {
        case AntiKind::Nilpotent: return "Nilpotent";
        case AntiKind::NonInvertible: return "NonInvertible";
        case AntiKind::NormalTriple: return "NormalTriple";
        case AntiKind::GeneralTriple: return "GeneralTriple";
    }
    return "?";
}

bool is_nilpotent2(const Mat& A, const Tol& tol) {
    const double s = operator_norm(A);
    return std::abs(trace(A)) <= tol.at(s) && std::abs(det2(A)) <= tol.at(s) * s;
}

bool is_singular2(const Mat& A, const Tol& tol) {
    const double s = operator_norm(A);
    return std::abs(det2(A)) <= tol.at(s) * s;
}

bool is_normal(const Mat& A, const Tol& tol) {
    const double s = operator_norm(A);
    const Mat Ah = adjoint(A);
    return operator_norm(mul(A, Ah) - mul(Ah, A)) <= tol.at(s * s);
}

AntiCheck assert_anti(const Tuple& T, const Tol& tol) {
    AntiCheck out;
    const double s = scale_of(T);
    for (std::size_t i = 0; i < T.size(); ++i)
        for (std::size_t j = i + 1; j < T.size(); ++j) {
            const double r = operator_norm(mul(T[i], T[j]) + mul(T[j], T[i]));
            out.residual = std::max(out.residual, r);
            if (r > tol.at(s * s)) {
                out.ok = false;
                out.message = "pair (" + std::to_string(i + 1) + "," + std::to_string(j + 1) + ") does not anti-commute";
                return out;
            }
        }
    for (std::size_t i = 0; i < T.size(); ++i) {
        if (is_singular2(T[i], tol)) continue;
        for (std::size_t j = 0; j < T.size(); ++j) {
            if (j == i) continue;
            if (std::abs(trace(T[j])) > tol.at(s)) {
                out.ok = false;
                out.message = "member " + std::to_string(j + 1) + " has nonzero trace against an invertible partner";
                return out;
            }
        }
    }
    return out;
}

AntiCheck invertible_bound_check(const Tuple& T, const Tol& tol) {
    AntiCheck out;
    for (std::size_t i = 0; i < T.size(); ++i)
        if (is_singular2(T[i], tol)) throw AntiError("member " + std::to_string(i + 1) + " is not invertible");
    if (T.size() > 3) {
        out.ok = false;
        out.message = "invertible anti-commuting 2x2 tuples have at most 3 members, got " + std::to_string(T.size());
    }
    return out;
}

AntiReduction reduce_nilpotent(const Tuple& T, const Tol& tol) {
    const std::size_t k = T.size();
    std::size_t p = kNone;
    for (std::size_t i = 0; i < k && p == kNone; ++i)
        if (max_abs(T[i]) > 0 && is_nilpotent2(T[i], tol)) p = i;
    if (p == kNone) throw AntiError("reduce_nilpotent: no nonzero nilpotent member");

    AntiReduction red;
    red.kind = AntiKind::Nilpotent;
    red.frame = frame_from(kernel_vector(T[p]));
    const double s = scale_of(T);
    const double thr = 10 * tol.at(s);
    std::vector<cplx> c(k), d(k);
    std::vector<std::size_t> twisted;
    for (std::size_t j = 0; j < k; ++j) {
        const Mat C = in_frame(red.frame, T[j]);
        if (std::abs(C(1, 0)) > thr || std::abs(C(0, 0) + C(1, 1)) > thr)
            throw AntiError("reduce_nilpotent: member " + std::to_string(j + 1) + " breaks the forced triangular form");
        c[j] = C(0, 0);
        d[j] = C(0, 1);
        if (std::abs(c[j]) > thr) twisted.push_back(j);
    }
    if (twisted.size() > 1) throw AntiError("reduce_nilpotent: more than one member with nonzero diagonal");

    red.m = twisted.empty() ? kNone : twisted.front();
    red.commutingMarker = twisted.empty();
    std::vector<std::size_t> rest;
    for (std::size_t j = 0; j < k; ++j)
        if (j != red.m) rest.push_back(j);
    red.n = argmax_abs(d, rest);
    red.weights.assign(k, 1.0);
    for (std::size_t j : rest) red.weights[j] = d[j] / d[red.n];
    for (std::size_t j : rest)
        if (max_abs(T[j] - red.weights[j] * T[red.n]) > thr)
            throw AntiError("reduce_nilpotent: member " + std::to_string(j + 1) + " is not a multiple of the pivot");
    return red;
}

AntiReduction reduce_noninvertible(const Tuple& T, const Tol& tol) {
    const std::size_t k = T.size();
    std::size_t p = kNone;
    for (std::size_t i = 0; i < k && p == kNone; ++i)
        if (max_abs(T[i]) > 0 && is_singular2(T[i], tol)) p = i;
    if (p == kNone) throw AntiError("reduce_noninvertible: no nonzero singular member");
    if (is_nilpotent2(T[p], tol)) return reduce_nilpotent(T, tol);

    AntiReduction red;
    red.kind = AntiKind::NonInvertible;
    red.n = p;
    // eigenvector of the nonzero eigenvalue tr(T_p)
    const Mat shifted = T[p] - trace(T[p]) * Mat::identity(2);
    red.frame = frame_from(kernel_vector(shifted));
    const double s = scale_of(T);
    const double thr = 10 * tol.at(s);
    const Mat C1 = in_frame(red.frame, T[p]);
    red.a1 = C1(0, 0);
    red.d1 = C1(0, 1);
    std::vector<cplx> f(k);
    std::vector<std::size_t> rest;
    for (std::size_t j = 0; j < k; ++j) {
        if (j == p) continue;
        const Mat C = in_frame(red.frame, T[j]);
        f[j] = C(1, 1);
        if (std::abs(C(0, 0)) > thr || std::abs(C(1, 0)) > thr || std::abs(C(0, 1) + red.d1 * f[j] / red.a1) > thr)
            throw AntiError("reduce_noninvertible: member " + std::to_string(j + 1) + " is not a multiple of the forced shape");
        rest.push_back(j);
    }
    red.weights.assign(k, 1.0);
    red.m = rest.empty() ? kNone : argmax_abs(f, rest);
    if (red.m == kNone || std::abs(f[red.m]) <= thr) {
        red.commutingMarker = true;
        red.m = kNone;
        return red;
    }
    for (std::size_t j : rest) red.weights[j] = f[j] / f[red.m];
    return red;
}

AntiReduction analyze_triple(const Tuple& T, const Tol& tol) {
    if (T.size() != 3) throw AntiError("analyze_triple: needs exactly three members");
    if (auto chk = assert_anti(T, tol); !chk.ok) throw AntiError("analyze_triple: " + chk.message);
    for (std::size_t i = 0; i < 3; ++i)
        if (is_singular2(T[i], tol)) throw AntiError("analyze_triple: member " + std::to_string(i + 1) + " is singular");
    const double s = scale_of(T);
    const double thr = 10 * tol.at(s);

    AntiReduction red;
    std::size_t normal = kNone;
    for (std::size_t i = 0; i < 3 && normal == kNone; ++i)
        if (is_normal(T[i], tol)) normal = i;

    if (normal != kNone) {
        red.kind = AntiKind::NormalTriple;
        red.frame = schur2(T[normal]);
        const Mat C1 = in_frame(red.frame, T[normal]);
        red.a1 = C1(0, 0);
        std::vector<std::size_t> others;
        for (std::size_t i = 0; i < 3; ++i)
            if (i != normal) others.push_back(i);
        std::vector<cplx> c(3);
        for (std::size_t j : others) {
            const Mat C = in_frame(red.frame, T[j]);
            if (std::abs(C(0, 0)) > thr || std::abs(C(1, 1)) > thr)
                throw AntiError("analyze_triple: partner of the normal member is not anti-diagonal");
            c[j] = C(1, 0);
        }
        if (std::abs(c[others[1]]) < std::abs(c[others[0]]) * (1 - 1e-12)) std::swap(others[0], others[1]);
        red.order = {normal, others[0], others[1]};
        red.lambda = c[others[0]] / c[others[1]];
        red.n = others[1];
        red.m = normal;
        red.weights.assign(3, 1.0);
        red.weights[normal] = red.a1;
        red.weights[others[0]] = red.lambda;
        const Mat R = Mat::diag({1.0, -1.0});
        const Mat lhs = in_frame(red.frame, T[others[0]]);
        const Mat rhs = red.lambda * mul(in_frame(red.frame, T[others[1]]), R);
        if (max_abs(lhs - rhs) > thr) throw AntiError("analyze_triple: normal-triple factorization failed");
        return red;
    }

    red.kind = AntiKind::GeneralTriple;
    red.order = {0, 1, 2};
    red.frame = schur2(T[0]);
    const Mat C1 = in_frame(red.frame, T[0]), C2 = in_frame(red.frame, T[1]), C3 = in_frame(red.frame, T[2]);
    red.a1 = C1(0, 0);
    red.d1 = C1(0, 1);
    const cplx a2 = C2(0, 0), a3 = C3(0, 0), c2 = C2(1, 0), c3 = C3(1, 0), d2 = C2(0, 1), d3 = C3(0, 1);
    red.lambda = c2 / c3;
    if (std::abs(a2 - red.lambda * a3) > thr) throw AntiError("analyze_triple: c2/c3 and a2/a3 disagree");
    red.alpha = c3 * (d2 - red.lambda * d3) / red.a1;
    red.beta = 2.0 / red.alpha;
    red.weights = {red.beta, 1.0, 1.0};
    red.n = 1;
    red.m = 2;
    red.normBound = operator_norm(T[0]) <= operator_norm(mul(T[1], T[2])) + tol.at(s);
    if (max_abs(2.0 * mul(T[1], T[2]) - red.alpha * T[0]) > thr)
        throw AntiError("analyze_triple: product identity failed");
    return red;
}

Tuple gen_anti_triple(std::uint64_t seed, double scale) {
    if (!(scale > 0 && scale <= 1)) throw std::invalid_argument("gen_anti_triple: scale must lie in (0,1]");
    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> rad2(0.04, 1.0), ang(0.0, 2 * std::numbers::pi);
    auto draw = [&] { return std::polar(std::sqrt(rad2(rng)), ang(rng)); };
    for (int attempt = 0; attempt < 64; ++attempt) {
        const cplx a1 = draw(), d1 = draw(), a2 = draw(), a3 = draw(), d2 = draw();
        const cplx c2 = -2.0 * a1 * a2 / d1, c3 = -2.0 * a1 * a3 / d1;
        // T2 T3 + T3 T2 = (2 a2 a3 + d2 c3 + c2 d3) I
        const cplx d3 = -(2.0 * a2 * a3 + d2 * c3) / c2;
        Tuple T{Mat{{a1, d1}, {0, -a1}}, Mat{{a2, d2}, {c2, -a2}}, Mat{{a3, d3}, {c3, -a3}}};
        bool good = true;
        for (auto& t : T) {
            const double n = operator_norm(t);
            if (!(n > 0) || std::abs(det2(t)) < 1e-3 * n * n) good = false;
            t = (scale / n) * t;
        }
        const cplx lam = c2 / c3;
        if (std::abs(d2 - lam * d3) < 1e-3 * (std::abs(d2) + std::abs(lam * d3))) good = false;
        if (good) return T;
    }
    throw std::runtime_error("gen_anti_triple: no admissible draw");
}

AnticommutantResult anticommutant_solve(const Tuple& T, const Tol& tol) {
    // unknown x = vec(X) row-major; rows of L stack (T X + X T) entries
    Mat L(4 * T.size(), 4);
    for (std::size_t t = 0; t < T.size(); ++t)
        for (std::size_t i = 0; i < 2; ++i)
            for (std::size_t j = 0; j < 2; ++j) {
                const std::size_t row = 4 * t + 2 * i + j;
                for (std::size_t l = 0; l < 2; ++l) {
                    L(row, 2 * l + j) += T[t](i, l);  // (T X)_ij
                    L(row, 2 * i + l) += T[t](l, j);  // (X T)_ij
                }
            }
    const auto e = herm_eig(mul(adjoint(L), L));
    const double s = scale_of(T);
    AnticommutantResult out;
    std::vector<Mat> basis;
    for (std::size_t k = 0; k < 4; ++k)
        if (e.values[k] <= tol.at(s * s) * s * s) {
            Mat X(2, 2);
            for (std::size_t q = 0; q < 4; ++q) X(q / 2, q % 2) = e.vectors(q, k);
            basis.push_back(X);
        }
    out.nullity = basis.size();
    auto probe = [&](const Mat& X) {
        const double n = fro_norm(X);
        if (n > 0) out.maxDet = std::max(out.maxDet, std::abs(det2(X)) / (n * n));
    };
    for (std::size_t a = 0; a < basis.size(); ++a) {
        probe(basis[a]);
        for (std::size_t b = a + 1; b < basis.size(); ++b) {
            probe(basis[a] + basis[b]);
            probe(basis[a] + cplx(0, 1) * basis[b]);
            probe(basis[a] - basis[b]);
        }
    }
    return out;
}

}  // namespace qdilate
