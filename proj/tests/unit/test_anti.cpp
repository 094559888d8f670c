#include <doctest.h>

#include "support.hpp"

using namespace qdilate;

TEST_CASE("theta ledger values") {
    CHECK(theta(0) == 0);
    CHECK(theta(1) == 0);
    CHECK(theta(2) == 1);
    CHECK(theta(5) == 10);
}

TEST_CASE("assert_anti") {
    CHECK(assert_anti(epsilon_triple(), Tol{}).ok);
    CHECK_FALSE(assert_anti({Mat::diag({1, -1}), Mat::diag({1, -1})}, Tol{}).ok);
    CHECK(assert_anti({Mat{{0, 0.5}, {0.5, 0}}, Mat{{0, cplx(0, -0.5)}, {cplx(0, 0.5), 0}}}, Tol{}).ok);
}

TEST_CASE("epsilon example reduction") {
    const Tuple T = epsilon_triple(0.1);
    CHECK(qtest::dist(T[1] * T[2], -1.0 * T[0]) < 1e-15);
    for (const auto& t : T) CHECK(std::abs(trace(t)) < 1e-15);
    CHECK(invertible_bound_check(T, Tol{}).ok);
    const AntiReduction r = analyze_triple(T, Tol{});
    REQUIRE(r.kind == AntiKind::GeneralTriple);
    CHECK(std::abs(r.lambda + 1.0) < 1e-12);
    CHECK(std::abs(r.alpha + 2.0) < 1e-12);
    CHECK(std::abs(r.beta + 1.0) < 1e-12);
    CHECK(r.normBound);
    CHECK(qtest::dist(2.0 * (T[1] * T[2]), r.alpha * T[0]) < 1e-15);
}

TEST_CASE("normal triple") {
    const Tuple T{Mat::diag({0.8, -0.8}), Mat{{0, 0.5}, {0.5, 0}}, Mat{{0, cplx(0, -0.5)}, {cplx(0, 0.5), 0}}};
    const AntiReduction r = analyze_triple(T, Tol{});
    REQUIRE(r.kind == AntiKind::NormalTriple);
    CHECK(std::abs(std::abs(r.a1) - 0.8) < 1e-12);
    CHECK(r.order.front() == 0);
}

TEST_CASE("nilpotent reductions") {
    const Mat N{{0, 0.9}, {0, 0}};
    const AntiReduction r = reduce_nilpotent({N, Mat{{0.3, 0.1}, {0, -0.3}}}, Tol{});
    CHECK(r.kind == AntiKind::Nilpotent);
    CHECK(r.n == 0);
    CHECK(r.m == 1);
    CHECK(std::abs(r.weights[0] - 1.0) < 1e-12);
    CHECK_FALSE(r.commutingMarker);

    const AntiReduction a = reduce_nilpotent({N, Mat{{0, 0.45}, {0, 0}}}, Tol{});
    CHECK(a.commutingMarker);
    CHECK(std::abs(a.weights[1] - 0.5) < 1e-12);
}

TEST_CASE("non-invertible reduction") {
    const Mat A{{0, -0.4}, {0, 1}};
    const Tuple T{Mat{{0.5, 0.2}, {0, 0}}, 0.6 * A, 0.3 * A};
    const AntiReduction r = reduce_noninvertible(T, Tol{});
    CHECK(r.kind == AntiKind::NonInvertible);
    CHECK(r.n == 0);
    CHECK(r.m == 1);
    CHECK(std::abs(r.weights[1] - 1.0) < 1e-12);
    CHECK(std::abs(r.weights[2] - 0.5) < 1e-12);
}

TEST_CASE("traceless singular pivot goes to the nilpotent path") {
    const AntiReduction r = reduce_noninvertible({Mat{{0, 0.9}, {0, 0}}, Mat{{0.3, 0.1}, {0, -0.3}}}, Tol{});
    CHECK(r.kind == AntiKind::Nilpotent);
}

TEST_CASE("generator is deterministic and anti-commuting") {
    const Tuple a = gen_anti_triple(5, 0.9), b = gen_anti_triple(5, 0.9);
    for (int i = 0; i < 3; ++i) CHECK(qtest::dist(a[i], b[i]) == 0.0);
    const AntiCheck c = assert_anti(a, Tol{});
    CHECK(c.ok);
    CHECK(c.residual <= 1e-12);
    CHECK_THROWS(gen_anti_triple(5, 1.5));
}

TEST_CASE("anticommutant of a general triple is singular") {
    const Tuple T = gen_anti_triple(3, 0.9);
    const AnticommutantResult r = anticommutant_solve(T, Tol{});
    CHECK(r.maxDet <= 1e-10);
    const AnticommutantResult pair = anticommutant_solve({T[0]}, Tol{});
    CHECK(pair.nullity >= 1);
}
