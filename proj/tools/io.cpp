#include "io.hpp"

#include <fstream>
#include <iostream>
#include <iterator>
#include <sstream>

#include <openssl/sha.h>

namespace qdilate::io {

namespace {

const json& field(const json& j, const char* key) {
    if (!j.is_object() || !j.contains(key)) throw ParseError(std::string("missing field '") + key + "'");
    return j.at(key);
}

json index_list(const Index& ix) {
    json a = json::array();
    for (std::size_t i : ix) a.push_back(i + 1);
    return a;
}

json complex_list(const std::vector<cplx>& v) {
    json a = json::array();
    for (cplx z : v) a.push_back(to_json(z));
    return a;
}

}  // namespace

json to_json(cplx z) { return json::array({z.real(), z.imag()}); }

cplx complex_from(const json& j) {
    if (j.is_number()) return {j.get<double>(), 0.0};
    if (!j.is_array() || j.size() != 2 || !j[0].is_number() || !j[1].is_number())
        throw ParseError("complex value must be [re, im]");
    return {j[0].get<double>(), j[1].get<double>()};
}

json dense_json(const Mat& A) {
    json rows = json::array();
    for (std::size_t i = 0; i < A.rows(); ++i) {
        json row = json::array();
        for (std::size_t j = 0; j < A.cols(); ++j) row.push_back(to_json(A(i, j)));
        rows.push_back(row);
    }
    return rows;
}

json sparse_json(const Mat& A) {
    json e = json::array();
    for (std::size_t i = 0; i < A.rows(); ++i)
        for (std::size_t j = 0; j < A.cols(); ++j)
            if (A(i, j) != cplx(0.0)) e.push_back(json::array({i, j, A(i, j).real(), A(i, j).imag()}));
    return json{{"rows", A.rows()}, {"cols", A.cols()}, {"entries", e}};
}

Mat mat_from(const json& j) {
    if (j.is_object()) {
        const auto r = field(j, "rows").get<std::size_t>(), c = field(j, "cols").get<std::size_t>();
        Mat A(r, c);
        for (const auto& e : field(j, "entries")) {
            if (!e.is_array() || e.size() != 4) throw ParseError("sparse entry must be [i, j, re, im]");
            const auto i = e[0].get<std::size_t>(), k = e[1].get<std::size_t>();
            if (i >= r || k >= c) throw ParseError("sparse entry out of range");
            A(i, k) = {e[2].get<double>(), e[3].get<double>()};
        }
        return A;
    }
    if (!j.is_array() || j.empty() || !j[0].is_array()) throw ParseError("matrix must be a list of rows");
    const std::size_t r = j.size(), c = j[0].size();
    Mat A(r, c);
    for (std::size_t i = 0; i < r; ++i) {
        if (!j[i].is_array() || j[i].size() != c) throw ParseError("ragged matrix rows");
        for (std::size_t k = 0; k < c; ++k) A(i, k) = complex_from(j[i][k]);
    }
    if (!A.finite()) throw ParseError("matrix has non-finite entries");
    return A;
}

json to_json(const QFamily& q) {
    json entries = json::array();
    for (std::size_t i = 0; i < q.k(); ++i)
        for (std::size_t j = i + 1; j < q.k(); ++j) {
            const QEntry e = q.get(i, j);
            entries.push_back({{"i", i + 1},
                               {"j", j + 1},
                               {"tag", e.exact() ? "exact" : "unconstrained"},
                               {"value", to_json(e.value)},
                               {"raw", to_json(e.raw)},
                               {"order", e.order}});
        }
    return json{{"k", q.k()}, {"entries", entries}};
}

QFamily qfamily_from(const json& j) {
    QFamily q(field(j, "k").get<std::size_t>());
    for (const auto& e : field(j, "entries")) {
        const auto i = field(e, "i").get<std::size_t>(), k = field(e, "j").get<std::size_t>();
        if (i < 1 || k < 1 || i > q.k() || k > q.k() || i == k) throw ParseError("q entry index out of range");
        QEntry x;
        const std::string tag = field(e, "tag").get<std::string>();
        if (tag == "exact") {
            x.tag = QEntry::Tag::Exact;
            x.value = complex_from(field(e, "value"));
            if (std::abs(std::abs(x.value) - 1.0) > 1e-9) throw ParseError("declared q entry is not unimodular");
        } else if (tag != "unconstrained") {
            throw ParseError("q tag must be exact or unconstrained");
        }
        x.raw = e.contains("raw") ? complex_from(e["raw"]) : x.value;
        x.order = e.value("order", 0);
        q.set(i - 1, k - 1, x);
    }
    return q;
}

json to_json(const TupleDocument& d) {
    json m = json::array();
    for (const auto& t : d.matrices) m.push_back(dense_json(t));
    json j{{"matrices", m}};
    if (d.q) j["q"] = to_json(*d.q);
    if (!d.name.empty()) j["name"] = d.name;
    if (d.seed) j["seed"] = *d.seed;
    return j;
}

TupleDocument tuple_from(const json& j) {
    TupleDocument d;
    const json& m = field(j, "matrices");
    if (!m.is_array() || m.empty()) throw ParseError("'matrices' must be a non-empty list");
    for (const auto& t : m) {
        Mat A = mat_from(t);
        if (!A.square()) throw ParseError("matrices must be square");
        if (!d.matrices.empty() && A.rows() != d.matrices.front().rows()) throw ParseError("matrices differ in size");
        d.matrices.push_back(std::move(A));
    }
    if (j.contains("q")) {
        d.q = qfamily_from(j["q"]);
        if (d.q->k() != d.matrices.size()) throw ParseError("q table size differs from the tuple");
    }
    d.name = j.value("name", "");
    if (j.contains("seed")) d.seed = j["seed"].get<std::uint64_t>();
    return d;
}

json to_json(const VerificationReport& r) {
    return json{{"unitarity", r.unitarity},   {"relation", r.relation},
                {"moment", r.moment},         {"isometry", r.isometry},
                {"degree", r.degree},         {"gridPoints", r.gridPoints},
                {"tolerance", r.tolerance},   {"edgeDefectAllowed", r.edgeDefectAllowed},
                {"passed", r.passed},         {"failures", r.failures}};
}

VerificationReport report_from(const json& j) {
    VerificationReport r;
    r.unitarity = field(j, "unitarity").get<double>();
    r.relation = field(j, "relation").get<double>();
    r.moment = field(j, "moment").get<double>();
    r.isometry = field(j, "isometry").get<double>();
    r.degree = field(j, "degree").get<unsigned>();
    r.gridPoints = field(j, "gridPoints").get<std::size_t>();
    r.tolerance = field(j, "tolerance").get<double>();
    r.edgeDefectAllowed = field(j, "edgeDefectAllowed").get<bool>();
    r.passed = field(j, "passed").get<bool>();
    r.failures = field(j, "failures").get<std::vector<std::string>>();
    return r;
}

json to_json(const ClassificationReport& r) {
    json forms = json::array();
    for (const auto& f : r.forms) forms.push_back(dense_json(f));
    json j{{"verdict", to_string(r.verdict)},
           {"P", dense_json(r.P)},
           {"unitarilyEquivalent", r.unitarilyEquivalent},
           {"reason", r.reason},
           {"forms", forms}};
    if (r.canonical) {
        const Canonical& c = *r.canonical;
        j["canonical"] = {{"a", to_json(c.a)},          {"r", to_json(c.r)},
                          {"pivot", c.pivot + 1},       {"eta1", index_list(c.eta1)},
                          {"etaTwist", index_list(c.etaTwist)}, {"c", complex_list(c.c)},
                          {"f", complex_list(c.f)},     {"d", complex_list(c.d)},
                          {"e", complex_list(c.e)},     {"alpha", complex_list(c.alpha)}};
    }
    return j;
}

json to_json(const AntiReduction& r) {
    auto idx = [](std::size_t i) { return i == kNone ? json(nullptr) : json(i + 1); };
    return json{{"kind", to_string(r.kind)},
                {"frame", dense_json(r.frame)},
                {"n", idx(r.n)},
                {"m", idx(r.m)},
                {"weights", complex_list(r.weights)},
                {"commutingMarker", r.commutingMarker},
                {"order", index_list(r.order)},
                {"a1", to_json(r.a1)},
                {"d1", to_json(r.d1)},
                {"lambda", to_json(r.lambda)},
                {"alpha", to_json(r.alpha)},
                {"beta", to_json(r.beta)},
                {"normBound", r.normBound}};
}

json to_json(const CertificateDocument& d) {
    const DilationCertificate& c = d.cert;
    json U = json::array();
    for (const auto& u : c.U) U.push_back(sparse_json(u));
    json cert{{"U", U},
              {"V", sparse_json(c.V)},
              {"qIn", to_json(c.qIn)},
              {"qOut", to_json(c.qOut)},
              {"P", c.P ? dense_json(*c.P) : json(nullptr)},
              {"scale", c.scale},
              {"firstScale", c.firstScale ? to_json(*c.firstScale) : json(nullptr)},
              {"route", c.route},
              {"report", to_json(c.report)}};
    return json{{"tool", "qdilate"},
                {"version", d.toolVersion},
                {"inputHash", d.inputHash},
                {"input", to_json(d.input)},
                {"config",
                 {{"degree", c.cfg.N},
                  {"ring", c.cfg.M},
                  {"mode", to_string(c.cfg.mode)},
                  {"tol", {{"rel", d.tol.rel}, {"abs", d.tol.abs}}}}},
                {"certificate", cert}};
}

CertificateDocument certificate_from(const json& j) {
    CertificateDocument d;
    d.input = tuple_from(field(j, "input"));
    d.toolVersion = j.value("version", "");
    d.inputHash = j.value("inputHash", "");
    const json& cfg = field(j, "config");
    const json& tol = field(cfg, "tol");
    d.tol.rel = field(tol, "rel").get<double>();
    d.tol.abs = field(tol, "abs").get<double>();
    DilationCertificate& c = d.cert;
    c.cfg.N = field(cfg, "degree").get<unsigned>();
    c.cfg.M = field(cfg, "ring").get<unsigned>();
    const std::string mode = field(cfg, "mode").get<std::string>();
    if (mode == to_string(TruncMode::Cyclic)) c.cfg.mode = TruncMode::Cyclic;
    else if (mode == to_string(TruncMode::Windowed)) c.cfg.mode = TruncMode::Windowed;
    else throw ParseError("unknown mode '" + mode + "'");

    const json& cj = field(j, "certificate");
    for (const auto& u : field(cj, "U")) c.U.push_back(mat_from(u));
    c.V = mat_from(field(cj, "V"));
    c.qIn = qfamily_from(field(cj, "qIn"));
    c.qOut = qfamily_from(field(cj, "qOut"));
    if (!field(cj, "P").is_null()) c.P = mat_from(cj["P"]);
    c.scale = field(cj, "scale").get<double>();
    if (!field(cj, "firstScale").is_null()) c.firstScale = complex_from(cj["firstScale"]);
    c.route = cj.value("route", "");
    c.report = report_from(field(cj, "report"));

    if (c.U.size() != d.input.matrices.size()) throw ParseError("certificate has one unitary per member");
    for (const auto& u : c.U)
        if (!u.square() || u.rows() != c.V.rows()) throw ParseError("certificate operators differ in size");
    if (c.V.cols() != d.input.matrices.front().rows()) throw ParseError("isometry does not match the input size");
    return d;
}

std::string canonical(const json& j) { return j.dump(2) + "\n"; }

std::string sha256_hex(const std::string& s) {
    unsigned char h[SHA256_DIGEST_LENGTH];
    SHA256(reinterpret_cast<const unsigned char*>(s.data()), s.size(), h);
    static const char* hex = "0123456789abcdef";
    std::string out;
    for (unsigned char b : h) {
        out.push_back(hex[b >> 4]);
        out.push_back(hex[b & 15]);
    }
    return out;
}

json read_file(const std::string& path) {
    std::string text;
    if (path == "-") {
        text.assign(std::istreambuf_iterator<char>(std::cin), {});
    } else {
        std::ifstream in(path);
        if (!in) throw ParseError("cannot open " + path);
        text.assign(std::istreambuf_iterator<char>(in), {});
    }
    try {
        return json::parse(text);
    } catch (const json::exception& e) {
        throw ParseError(std::string("invalid JSON: ") + e.what());
    }
}

void write_text(const std::string& path, const std::string& text) {
    if (path.empty() || path == "-") {
        std::cout << text;
        return;
    }
    std::ofstream out(path);
    if (!out) throw ParseError("cannot write " + path);
    out << text;
}

}  // namespace qdilate::io
