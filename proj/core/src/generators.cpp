#include "qdilate/generators.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

namespace qdilate {

namespace {

constexpr double kTwoPi = 2 * std::numbers::pi;

double uniform(Rng& rng, double lo, double hi) { return std::uniform_real_distribution<double>(lo, hi)(rng); }

cplx gaussian(Rng& rng) {
    std::normal_distribution<double> n(0.0, 1.0);
    const double re = n(rng);
    return {re, n(rng)};
}

cplx random_nonzero(Rng& rng, double lo = 0.2, double hi = 1.0) {
    return std::polar(uniform(rng, lo, hi), uniform(rng, 0.0, kTwoPi));
}

bool lex_greater(cplx a, cplx b) { return a.real() != b.real() ? a.real() > b.real() : a.imag() > b.imag(); }

// Per-member rescale to a random norm; relations are homogeneous so they survive.
Tuple conjugate_and_scale(Rng& rng, const Tuple& C, const Mat& P) {
    const Mat Pi = inv2(P);
    Tuple T;
    for (const auto& c : C) {
        Mat t = P * c * Pi;
        t = cplx(uniform(rng, 0.2, 0.95) / operator_norm(t)) * t;
        T.push_back(t);
    }
    return T;
}

Mat conjugator(Rng& rng, Conjugation c, double condMax) {
    bool similar = c == Conjugation::Similar;
    if (c == Conjugation::Any) similar = std::bernoulli_distribution(0.5)(rng);
    return similar ? random_invertible(rng, condMax) : random_unitary(rng, 2);
}

// Pivot diag(a, b) with a the lexicographically larger eigenvalue, |a| = |b|.
std::pair<cplx, cplx> pivot_pair(Rng& rng, cplx r) {
    const cplx x = random_nonzero(rng, 0.3, 1.0);
    const cplx y = r * x;
    return lex_greater(x, y) ? std::pair{x, y} : std::pair{y, x};
}

PlantedTuple plant_triangular(std::uint64_t seed, std::size_t k, Conjugation cj, double condMax, bool upper) {
    if (k < 2) throw std::invalid_argument("plant: need k >= 2");
    Rng rng(seed);
    const auto [a, b] = pivot_pair(rng, random_root(rng));
    const cplx r = b / a;
    Tuple C{Mat{{a, 0}, {0, b}}};
    auto twisted = [&] {
        const cplx x = random_nonzero(rng);
        return upper ? Mat{{0, x}, {0, 0}} : Mat{{0, 0}, {x, 0}};
    };
    C.push_back(twisted());
    const cplx alphas[3] = {1.0, r, std::conj(r)};
    for (std::size_t i = 2; i < k; ++i) {
        if (std::bernoulli_distribution(0.5)(rng)) {
            C.push_back(twisted());
        } else {
            const cplx c = random_nonzero(rng);
            const cplx al = alphas[std::uniform_int_distribution<int>(0, 2)(rng)];
            C.push_back(Mat{{c, 0}, {0, al * c}});
        }
    }
    PlantedTuple p;
    p.P = conjugator(rng, cj, condMax);
    p.T = conjugate_and_scale(rng, C, p.P);
    p.verdict = upper ? Verdict::TypeII : Verdict::TypeI;
    p.label = upper ? "type2" : "type1";
    return p;
}

}  // namespace

cplx random_unimodular(Rng& rng) { return std::polar(1.0, uniform(rng, 0.0, kTwoPi)); }

cplx random_root(Rng& rng, int maxOrder) {
    for (;;) {
        const int n = std::uniform_int_distribution<int>(3, maxOrder)(rng);
        const int p = std::uniform_int_distribution<int>(1, n - 1)(rng);
        if (2 * p == n) continue;
        return std::polar(1.0, kTwoPi * p / n);
    }
}

Mat random_unitary(Rng& rng, std::size_t n) {
    Mat Q(n, n);
    for (std::size_t j = 0; j < n; ++j) {
        std::vector<cplx> v(n);
        for (auto& x : v) x = gaussian(rng);
        for (int pass = 0; pass < 2; ++pass)
            for (std::size_t i = 0; i < j; ++i) {
                cplx ip = 0;
                for (std::size_t t = 0; t < n; ++t) ip += std::conj(Q(t, i)) * v[t];
                for (std::size_t t = 0; t < n; ++t) v[t] -= ip * Q(t, i);
            }
        double nv = 0;
        for (auto x : v) nv += std::norm(x);
        nv = std::sqrt(nv);
        for (std::size_t t = 0; t < n; ++t) Q(t, j) = v[t] / nv;
    }
    return Q;
}

Mat random_contraction(Rng& rng, std::size_t n, double lo, double hi) {
    Mat A(n, n);
    for (auto& x : A.data()) x = gaussian(rng);
    return cplx(uniform(rng, lo, hi) / operator_norm(A)) * A;
}

Mat random_invertible(Rng& rng, double condMax) {
    const Mat W = random_unitary(rng, 2);
    if (condMax <= 1.0) return W;
    // unit columns u, v with |<u,v>| = c have condition number sqrt((1+c)/(1-c))
    const double kappa = uniform(rng, 1.0, condMax);
    const double c = (kappa * kappa - 1) / (kappa * kappa + 1);
    const cplx ph = random_unimodular(rng);
    const double s = std::sqrt(1 - c * c);
    return Mat{{W(0, 0), c * ph * W(0, 0) + s * W(0, 1)}, {W(1, 0), c * ph * W(1, 0) + s * W(1, 1)}};
}

PlantedTuple plant_commuting(std::uint64_t seed, std::size_t k) {
    Rng rng(seed);
    Tuple C;
    const int kind = std::uniform_int_distribution<int>(0, 2)(rng);
    if (kind == 1) {
        // polynomials in one Jordan block
        const Mat N{{0, 1}, {0, 0}};
        for (std::size_t i = 0; i < k; ++i) {
            const cplx x = random_nonzero(rng), y = random_nonzero(rng);
            C.push_back(x * Mat::identity(2) + y * N);
        }
    } else {
        for (std::size_t i = 0; i < k; ++i) {
            const cplx x = random_nonzero(rng);
            if (kind == 2 && i > 0) {
                C.push_back(x * Mat::identity(2));
                continue;
            }
            // unequal moduli on the first member forces the commuting verdict
            const double ratio = i == 0 ? uniform(rng, 0.3, 0.8) : uniform(rng, 0.3, 1.0);
            C.push_back(Mat{{x, 0}, {0, ratio * x * random_unimodular(rng)}});
        }
    }
    PlantedTuple p;
    p.P = conjugator(rng, Conjugation::Any, 10.0);
    p.T = conjugate_and_scale(rng, C, p.P);
    p.verdict = Verdict::Commuting;
    p.label = "commuting";
    return p;
}

PlantedTuple plant_type1(std::uint64_t seed, std::size_t k, Conjugation c, double condMax) {
    return plant_triangular(seed, k, c, condMax, false);
}

PlantedTuple plant_type2(std::uint64_t seed, std::size_t k, Conjugation c, double condMax) {
    return plant_triangular(seed, k, c, condMax, true);
}

PlantedTuple plant_type3(std::uint64_t seed, std::size_t k, Conjugation cj, double condMax) {
    if (k < 2) throw std::invalid_argument("plant: need k >= 2");
    Rng rng(seed);
    const cplx a = random_nonzero(rng, 0.3, 1.0);
    Tuple C{Mat{{a, 0}, {0, -a}}};
    const cplx d = random_nonzero(rng), e = random_nonzero(rng);
    C.push_back(Mat{{0, d}, {e, 0}});
    for (std::size_t i = 2; i < k; ++i) {
        const cplx w = random_nonzero(rng, 0.1, 1.0);
        switch (std::uniform_int_distribution<int>(0, 3)(rng)) {
            case 0: C.push_back(w * Mat::identity(2)); break;
            case 1: C.push_back(Mat{{w, 0}, {0, -w}}); break;
            case 2: C.push_back(Mat{{0, w * d}, {w * e, 0}}); break;
            default: C.push_back(Mat{{0, w * d}, {-w * e, 0}}); break;
        }
    }
    PlantedTuple p;
    p.P = conjugator(rng, cj, condMax);
    p.T = conjugate_and_scale(rng, C, p.P);
    p.verdict = Verdict::TypeIII;
    p.label = "type3";
    return p;
}

PlantedTuple plant_type3_groups(std::uint64_t seed) {
    Rng rng(seed);
    const cplx a = random_nonzero(rng, 0.3, 1.0);
    const cplx d = random_nonzero(rng, 0.5, 1.0), e = random_nonzero(rng, 0.2, 1.0);
    const cplx w = random_nonzero(rng, 0.2, 0.9);
    std::vector<Mat> rest{random_nonzero(rng) * Mat::identity(2), Mat{{0, d}, {e, 0}},
                          Mat{{0, w * d}, {-w * e, 0}}};
    std::shuffle(rest.begin(), rest.end(), rng);
    Tuple C{Mat{{a, 0}, {0, -a}}};
    C.insert(C.end(), rest.begin(), rest.end());
    PlantedTuple p;
    p.P = random_unitary(rng, 2);
    p.T = conjugate_and_scale(rng, C, p.P);
    p.verdict = Verdict::TypeIII;
    p.label = "type3-groups";
    return p;
}

TwistedPair plant_twisted_pair(std::uint64_t seed, cplx q, std::size_t n) {
    Rng rng(seed);
    // R = diag(q^0, q^1, ...) and T supported where q^i = q * q^j
    Mat R(n, n), T(n, n);
    std::vector<cplx> ph(n);
    for (std::size_t i = 0; i < n; ++i) ph[i] = std::pow(q, static_cast<double>(i));
    for (std::size_t i = 0; i < n; ++i) R(i, i) = ph[i];
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j)
            if (std::abs(ph[i] - q * ph[j]) < 1e-12) T(i, j) = gaussian(rng);
    T = cplx(uniform(rng, 0.2, 0.95) / operator_norm(T)) * T;
    const Mat W = random_unitary(rng, n);
    return {W * R * adjoint(W), W * T * adjoint(W), q};
}

std::pair<Mat, Mat> random_anti_pair(std::uint64_t seed) {
    Rng rng(seed);
    Mat A, B;
    if (std::bernoulli_distribution(0.2)(rng)) {
        const Mat N{{0, 1}, {0, 0}};
        A = random_nonzero(rng) * N;
        B = random_nonzero(rng) * N;
    } else {
        const cplx a = random_nonzero(rng);
        A = Mat{{a, 0}, {0, -a}};
        B = Mat{{0, random_nonzero(rng)}, {random_nonzero(rng), 0}};
    }
    const Mat P = random_invertible(rng, 10.0);
    const Tuple T = conjugate_and_scale(rng, {A, B}, P);
    return {T[0], T[1]};
}

Tuple epsilon_triple(double eps) {
    const double e2 = eps * eps;
    return {Mat{{e2, e2}, {0, -e2}}, Mat{{eps, 0}, {-2 * eps, -eps}}, Mat{{-eps, -eps}, {2 * eps, eps}}};
}

}  // namespace qdilate
