#include <doctest.h>

#include <cstdlib>
#include <numbers>

#include "support.hpp"

using namespace qdilate;
using qtest::dist;

TEST_CASE("operator norm of known matrices") {
    CHECK(operator_norm(Mat::diag({3.0, 1.0})) == doctest::Approx(3.0));
    CHECK(operator_norm(Mat{{1, 1}, {0, 1}}) == doctest::Approx(std::numbers::phi));
    CHECK(operator_norm(Mat{{0, cplx(0, 2)}, {0, 0}}) == doctest::Approx(2.0));
}

TEST_CASE("kron and blockdiag shapes") {
    const Mat A{{1, 2}, {3, 4}};
    const Mat K = kron(Mat::identity(3), A);
    CHECK(K.rows() == 6);
    CHECK(K(4, 5) == cplx(2.0));
    CHECK(K(5, 5) == cplx(4.0));
    CHECK(K(0, 2) == cplx(0.0));
    const Mat B = blockdiag({A, Mat{{7}}});
    CHECK(B.rows() == 3);
    CHECK(B(2, 2) == cplx(7.0));
}

TEST_CASE("inv2 and det2") {
    const Mat A{{2, cplx(0, 1)}, {1, 3}};
    CHECK(std::abs(det2(A) - cplx(6, -1)) < 1e-15);
    CHECK(dist(A * inv2(A), Mat::identity(2)) < 1e-15);
    CHECK_THROWS_AS(inv2(Mat{{1, 2}, {2, 4}}), std::domain_error);
}

TEST_CASE("defect squares to I - T*T") {
    const Mat T{{0.3, 0.4}, {cplx(0, 0.2), -0.5}};
    const Mat D = defect(T);
    CHECK(dist(D * D, Mat::identity(2) - adjoint(T) * T) < 1e-14);
    CHECK(dist(D, adjoint(D)) < 1e-15);
    CHECK_THROWS_AS(defect(Mat{{1.2, 0}, {0, 0}}), ContractionError);
}

TEST_CASE("defect of an isometry vanishes") {
    const Mat U{{0, 1}, {1, 0}};
    CHECK(max_abs(defect(U)) < 1e-7);
}

TEST_CASE("herm_eig reconstructs") {
    const Mat H{{2, cplx(1, 1)}, {cplx(1, -1), 3}};
    const HermEig e = herm_eig(H);
    REQUIRE(e.values.size() == 2);
    CHECK(e.values[0] <= e.values[1]);
    CHECK(e.values[0] == doctest::Approx(1.0));
    CHECK(e.values[1] == doctest::Approx(4.0));
    const Mat R = e.vectors * Mat::diag({e.values[0], e.values[1]}) * adjoint(e.vectors);
    CHECK(dist(R, H) < 1e-13);
}

TEST_CASE("eig2 on diagonal and Jordan blocks") {
    const auto [a, b] = eig2(Mat::diag({0.5, cplx(0, 0.5)}));
    CHECK(std::abs(a.value - cplx(0, 0.5)) < 1e-15);
    CHECK(std::abs(b.value - 0.5) < 1e-15);
    CHECK(diagonalizable2(Mat::diag({0.5, 0.3}), Tol{}));
    CHECK_FALSE(diagonalizable2(Mat{{0.3, 0.5}, {0, 0.3}}, Tol{}));
    CHECK_FALSE(diagonalizable2(Mat{{0, 1}, {0, 0}}, Tol{}));
}

TEST_CASE("conjugated nilpotent stays non-diagonalizable") {
    Rng rng(11);
    for (int t = 0; t < 50; ++t) {
        const Mat P = random_invertible(rng, 10.0);
        const Mat N = P * Mat{{0, 0}, {0.7, 0}} * inv2(P);
        CHECK_FALSE(diagonalizable2(N, Tol{}));
        const auto [a, b] = eig2(N);
        CHECK(std::abs(a.value - b.value) == 0.0);
    }
}

TEST_CASE("unitary_completion maps frames") {
    const Mat F{{1, 0}, {0, 0.6}, {0, 0.8}};
    const Mat G{{0, 0.6}, {1, 0}, {0, cplx(0, 0.8)}};
    const Mat W = unitary_completion(F, G);
    CHECK(unitarity_residual(W) < 1e-13);
    CHECK(dist(W * F, G) < 1e-13);
}

TEST_CASE("orthonormal_extension spans then completes") {
    const Mat F{{1, 1}, {1, 1}, {0, 0}};
    const Mat Q = orthonormal_extension(F, 1e-12);
    CHECK(Q.rows() == 3);
    CHECK(Q.cols() == 3);
    CHECK(unitarity_residual(Q) < 1e-13);
    CHECK(std::abs(std::abs(Q(0, 0)) - std::sqrt(0.5)) < 1e-13);
}

TEST_CASE("schur2 triangularizes") {
    const Mat M{{0.2, 0.7}, {cplx(0, -0.3), 0.5}};
    const Mat Q = schur2(M);
    CHECK(unitarity_residual(Q) < 1e-14);
    CHECK(std::abs((adjoint(Q) * M * Q)(1, 0)) < 1e-14);
}

TEST_CASE("QDILATE_TOL sets the relative tolerance") {
    setenv("QDILATE_TOL", "1e-7", 1);
    CHECK(default_tol().rel == doctest::Approx(1e-7));
    setenv("QDILATE_TOL", "junk", 1);
    CHECK(default_tol().rel == doctest::Approx(1e-9));
    unsetenv("QDILATE_TOL");
}

TEST_CASE("shape errors") {
    CHECK_THROWS_AS(Mat(2, 3) * Mat(2, 3), DimensionError);
    CHECK_THROWS_AS(eig2(Mat::identity(3)), DimensionError);
}
