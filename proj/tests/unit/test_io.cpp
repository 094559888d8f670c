#include <doctest.h>

#include "io.hpp"
#include "support.hpp"

using namespace qdilate;
using io::json;

TEST_CASE("tuple document round trip is byte-identical") {
    io::TupleDocument d;
    d.matrices = plant_type1(3).T;
    d.name = "planted";
    d.seed = 3;
    d.q = detect_family(d.matrices, Tol{});
    const std::string a = io::canonical(io::to_json(d));
    const std::string b = io::canonical(io::to_json(io::tuple_from(json::parse(a))));
    CHECK(a == b);
}

TEST_CASE("doubles survive the round trip exactly") {
    const Mat A{{cplx(0.1, 1.0 / 3.0), cplx(1e-300, -2.5e-17)}, {std::nextafter(1.0, 2.0), -0.0}};
    const Mat B = io::mat_from(json::parse(io::dense_json(A).dump()));
    CHECK(qtest::dist(A, B) == 0.0);
    const Mat S = io::mat_from(json::parse(io::sparse_json(A).dump()));
    CHECK(qtest::dist(A, S) == 0.0);
}

TEST_CASE("keys come out sorted") {
    const std::string s = io::canonical(io::to_json(io::TupleDocument{{Mat::identity(2)}, {}, "x", 1}));
    CHECK(s.find("\"matrices\"") < s.find("\"name\""));
    CHECK(s.find("\"name\"") < s.find("\"seed\""));
}

TEST_CASE("certificate round trip reproduces the report") {
    io::TupleDocument d{epsilon_triple(), {}, "eps", {}};
    const DilationCertificate c = dilate_anti(d.matrices, TruncationConfig{3, 0});
    const io::CertificateDocument doc{d, c, Tol{}, "test", io::sha256_hex(io::canonical(io::to_json(d)))};
    const std::string text = io::canonical(io::to_json(doc));
    const io::CertificateDocument back = io::certificate_from(json::parse(text));
    CHECK(io::canonical(io::to_json(back)) == text);
    const VerificationReport r = verify_certificate(back.input.matrices, back.cert, back.cert.cfg.N, back.tol);
    CHECK(r.passed);
    CHECK(std::abs(r.moment - c.report.moment) <= 1e-12);
    CHECK(std::abs(r.unitarity - c.report.unitarity) <= 1e-12);
}

TEST_CASE("malformed documents") {
    CHECK_THROWS_AS(io::tuple_from(json::parse(R"({"mats": []})")), io::ParseError);
    CHECK_THROWS_AS(io::tuple_from(json::parse(R"({"matrices": [[[1, 2], [3]]]})")), io::ParseError);
    CHECK_THROWS_AS(io::tuple_from(json::parse(R"({"matrices": [[[[1,0],[0,0]],[[0,0],[1,0]]]],
        "q": {"k": 2, "entries": []}})")),
                    io::ParseError);
    CHECK_THROWS_AS(io::qfamily_from(json::parse(R"({"k": 2, "entries": [{"i": 1, "j": 2, "tag": "exact",
        "value": [2, 0]}]})")),
                    io::ParseError);
    CHECK(io::sha256_hex("abc") == "ba7816bf8f01cfea414140de5dae2223b00361a396177a9cb410ff61f20015ad");
}
