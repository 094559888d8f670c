#include <doctest.h>

#include <numbers>

#include "support.hpp"

using namespace qdilate;
using qtest::dist;

namespace {

double schaffer_moment(const Mat& T, const DilationCertificate& c, unsigned s) {
    return dist(adjoint(c.V) * power(c.U[0], s) * c.V, power(T, s));
}

}  // namespace

TEST_CASE("block counts") {
    CHECK(root_order(cplx(0, 1)) == 4);
    CHECK(root_order(std::polar(1.0, 1.0)) == 0);
    CHECK(cyclic_block_count(5, {}) == 5);
    CHECK(cyclic_block_count(5, {-1.0}) == 6);
    CHECK(cyclic_block_count(7, {cplx(0, 1), std::polar(1.0, 2 * std::numbers::pi / 3)}) == 12);
    CHECK(schaffer_sites(6) == 7);
}

TEST_CASE("Schaffer layout reproduces powers up to its span") {
    const Mat T{{0.3, cplx(0.2, 0.1)}, {-0.4, 0.5}};
    const DilationCertificate c = schaffer(T, TruncationConfig{6, 8});
    CHECK(c.U[0].rows() == 16);
    CHECK(unitarity_residual(c.U[0]) < 1e-12);
    for (unsigned s = 0; s <= schaffer_span(8); ++s) CHECK(schaffer_moment(T, c, s) < 1e-12);
    CHECK(schaffer_moment(T, c, 8) > 1e-3);
    CHECK(c.report.passed);
}

TEST_CASE("scalar Schaffer of zero is a cyclic shift") {
    const DilationCertificate c = schaffer(Mat{{0}}, TruncationConfig{5, 6});
    for (unsigned s = 1; s <= 5; ++s) CHECK(std::abs((adjoint(c.V) * power(c.U[0], s) * c.V)(0, 0)) < 1e-15);
    CHECK(dist(power(c.U[0], 6), Mat::identity(6)) < 1e-15);
}

TEST_CASE("twisted diagonal keeps the relation") {
    const Mat R = Mat::diag({1.0, -1.0});
    const Mat T{{0, 0.5}, {0.3, 0}};
    const TruncationConfig cfg{5, 6};
    const Mat Rt = twisted_diag(R, -1.0, cfg);
    const Mat Ut = schaffer(T, cfg).U[0];
    CHECK(dist(Rt * Ut, -1.0 * (Ut * Rt)) < 1e-15);
}

TEST_CASE("twist assertion rejects a wrong phase") {
    CHECK_NOTHROW(assert_twist(Mat::diag({1.0, -1.0}), Mat{{0, 0.5}, {0.3, 0}}, -1.0, Tol{}));
    CHECK_THROWS(assert_twist(Mat::diag({1.0, -1.0}), Mat{{0, 0.5}, {0.3, 0}}, cplx(0, 1), Tol{}));
}

TEST_CASE("unitary-contraction pair with q = i") {
    const TwistedPair p = plant_twisted_pair(4, cplx(0, 1));
    const TruncationConfig cfg{6, 8};
    const DilationCertificate c = pair_unitary_contraction(p.R, p.T, p.q, cfg);
    CHECK(c.report.passed);
    CHECK(c.report.relation <= 1e-12);
    const qtest::Brute b = qtest::brute_check({p.R, p.T}, c, 6);
    CHECK(b.worst() < 1e-12);
}

TEST_CASE("Ando window intertwines the pair") {
    const auto [A, B] = random_anti_pair(9);
    const AndoWindow w = q_ando(A, B, -1.0, 3);
    CHECK(w.V.cols() == 2);
    CHECK(dist(adjoint(w.V) * w.W1 * w.V, A) < 1e-12);
    CHECK(dist(adjoint(w.V) * w.W2 * w.V, B) < 1e-12);
    CHECK(dist(adjoint(w.V) * w.W1 * w.W2 * w.V, A * B) < 1e-12);
    CHECK(unitarity_residual(w.G) < 1e-12);
}

TEST_CASE("cyclic closure gives exact q-commuting unitaries") {
    const Tuple T = epsilon_triple();
    const DilationCertificate c = q_pair(T[1], T[2], -1.0, TruncationConfig{5, 0});
    REQUIRE(c.report.passed);
    CHECK(c.report.unitarity < 1e-13);
    CHECK(c.report.relation < 1e-13);
    const qtest::Brute b = qtest::brute_check({T[1], T[2]}, c, 5);
    CHECK(b.worst() < 1e-12);
}

TEST_CASE("windowed mode flags the edge defect") {
    const auto [A, B] = random_anti_pair(2);
    const DilationCertificate c = q_pair(A, B, -1.0, TruncationConfig{3, 0, TruncMode::Windowed});
    CHECK(c.report.edgeDefectAllowed);
    CHECK(c.report.moment < 1e-12);
    CHECK(c.report.passed);
}

TEST_CASE("verifier catches a wrong target") {
    const Mat T{{0.3, 0.1}, {0, 0.4}};
    const DilationCertificate c = schaffer(T, TruncationConfig{4, 5});
    const VerificationReport r = verify_certificate({Mat{{0.3, 0.1}, {0, 0.41}}}, c, 4, Tol{});
    CHECK_FALSE(r.passed);
    CHECK(r.moment >= 0.009);
    CHECK_FALSE(r.failures.empty());
}

TEST_CASE("ordered product") {
    const Mat A{{0, 1}, {1, 0}}, B = Mat::diag({1, -1});
    CHECK(dist(ordered_product({A, B}, {1, 1}), A * B) == 0.0);
    CHECK(dist(ordered_product({A, B}, {0, 0}), Mat::identity(2)) == 0.0);
}

TEST_CASE("dimension cap") {
    CHECK_THROWS_AS(schaffer(Mat::identity(2), TruncationConfig{5, 3000}), DilationError);
}
