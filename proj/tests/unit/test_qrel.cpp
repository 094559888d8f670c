#include <doctest.h>

#include <numbers>

#include "support.hpp"

using namespace qdilate;

TEST_CASE("snap to low-order roots") {
    CHECK(snap_root_of_unity(cplx(0, 1)).order == 4);
    CHECK(snap_root_of_unity(cplx(-1, 1e-9)).value == cplx(-1.0));
    const cplx w3 = std::polar(1.0, 2 * std::numbers::pi / 3);
    const QEntry e = snap_root_of_unity(w3 * std::polar(1.0, 1e-9));
    CHECK(e.order == 3);
    CHECK(std::abs(e.value - w3) < 1e-15);
    CHECK(snap_root_of_unity(std::polar(1.0, std::numbers::sqrt2)).order == 0);
}

TEST_CASE("detect q on a planted twist") {
    const Mat T1 = Mat::diag({0.5, cplx(0, 0.5)});
    const Mat T3{{0, 0}, {0.9, 0}};
    const auto q = detect_q(T1, T3, Tol{});
    REQUIRE(q);
    REQUIRE(q->exact());
    CHECK(std::abs(q->value - cplx(0, 1)) < 1e-15);
    CHECK(relation_residual(T1, T3, q->value) < 1e-15);
}

TEST_CASE("zero products leave the pair unconstrained") {
    const Mat N{{0, 0.5}, {0, 0}};
    const auto q = detect_q(N, 0.3 * N, Tol{});
    REQUIRE(q);
    CHECK_FALSE(q->exact());
}

TEST_CASE("epsilon triple detects all -1") {
    const QFamily q = detect_family(epsilon_triple(), Tol{});
    CHECK(q.k() == 3);
    for (const auto& e : q.table()) {
        CHECK(e.exact());
        CHECK(e.value == cplx(-1.0));
    }
}

TEST_CASE("unrelated pair names the offenders") {
    const Tuple T{Mat::diag({0.5, 0.3}), Mat{{0.1, 0.2}, {0.3, 0.4}}, Mat{{0.2, 0.1}, {0.4, 0.1}}};
    try {
        detect_family(T, Tol{});
        FAIL("expected RelationError");
    } catch (const RelationError& e) {
        CHECK(e.i == 0);
        CHECK(e.j == 1);
    }
}

TEST_CASE("QFamily stores inverses below the diagonal") {
    QFamily f(3);
    f.set(0, 2, QEntry::exact_of(cplx(0, 1)));
    CHECK(std::abs(f.get(2, 0).value - cplx(0, -1)) < 1e-15);
    CHECK(f.value_or_one(0, 1) == cplx(1.0));
    CHECK_THROWS_AS(f.get(1, 1), std::out_of_range);
}

TEST_CASE("doubly q-commuting check") {
    const Tuple T{Mat::diag({0.5, -0.5}), Mat{{0, 0.4}, {0.4, 0}}};
    const QFamily q = detect_family(T, Tol{});
    CHECK(is_doubly_q(T, q, Tol{}) == std::vector<bool>{true});
    const Tuple eps = epsilon_triple();
    const Tuple S{eps[1], eps[2]};
    CHECK(is_doubly_q(S, detect_family(S, Tol{}), Tol{}) == std::vector<bool>{false});
}

TEST_CASE("row contraction") {
    CHECK(check_row_contraction({Mat::diag({0.6, 0}), Mat::diag({0.8, 0})}, Tol{}));
    CHECK_FALSE(check_row_contraction({Mat::diag({0.7, 0}), Mat::diag({0.8, 0})}, Tol{}));
}
