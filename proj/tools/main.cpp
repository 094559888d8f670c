#include <cstdio>
#include <iostream>
#include <map>
#include <sstream>

#include <CLI11.hpp>

#include "io.hpp"
#include "qdilate/generators.hpp"

using namespace qdilate;
using io::json;

namespace {

enum Exit { kOk = 0, kParse = 1, kMath = 2, kVerify = 3 };

struct Options {
    std::string input = "-";
    std::string out;
    unsigned degree = 5;
    unsigned ring = 0;
    std::string mode = "cyclic";
    std::optional<double> tol;
    std::uint64_t seed = 1;
    std::size_t k = 3;
    double cond = 10.0;
    double scale = 0.9;
    std::string kind;
};

Tol effective_tol(const Options& o) {
    Tol t = default_tol();
    if (o.tol) t.rel = *o.tol;
    return t;
}

TruncationConfig config_of(const Options& o) {
    TruncationConfig c;
    c.N = o.degree;
    c.M = o.ring;
    if (o.mode == "cyclic") c.mode = TruncMode::Cyclic;
    else if (o.mode == "windowed") c.mode = TruncMode::Windowed;
    else throw io::ParseError("--mode must be cyclic or windowed");
    return c;
}

void emit(const Options& o, const json& j) { io::write_text(o.out, io::canonical(j)); }

double max_residual(const VerificationReport& r) {
    return std::max({r.unitarity, r.relation, r.moment, r.isometry});
}

QFamily family_of(const io::TupleDocument& d, const Tol& tol) { return d.q ? *d.q : detect_family(d.matrices, tol); }

int cmd_detect(const Options& o) {
    const auto d = io::tuple_from(io::read_file(o.input));
    const QFamily q = detect_family(d.matrices, effective_tol(o));
    emit(o, io::to_json(q));
    std::cerr << "detected " << q.k() << "-member family\n";
    return kOk;
}

int cmd_classify(const Options& o) {
    const Tol tol = effective_tol(o);
    const auto d = io::tuple_from(io::read_file(o.input));
    const QFamily q = family_of(d, tol);
    const StripResult st = strip_zeros(d.matrices, q, tol);
    json j{{"q", io::to_json(q)}, {"kept", json::array()}};
    for (std::size_t i : st.kept) j["kept"].push_back(i + 1);
    if (st.reduced.empty()) {
        j["classification"] = nullptr;
        emit(o, j);
        std::cerr << "all members vanish\n";
        return kOk;
    }
    const ClassificationReport rep = classify(st.reduced, st.q, tol);
    j["classification"] = io::to_json(rep);
    j["roundTripResidual"] = round_trip_residual(st.reduced, rep);
    emit(o, j);
    std::cerr << "verdict " << to_string(rep.verdict) << (rep.unitarilyEquivalent ? " (unitary frame)" : " (similarity)")
              << "\n";
    return kOk;
}

int cmd_reduce(const Options& o) {
    const Tol tol = effective_tol(o);
    const auto d = io::tuple_from(io::read_file(o.input));
    const Tuple& T = d.matrices;
    if (auto c = assert_anti(T, tol); !c.ok) throw AntiError("reduce: " + c.message);
    bool nil = false, sing = false;
    for (const auto& t : T) {
        nil = nil || is_nilpotent2(t, tol);
        sing = sing || is_singular2(t, tol);
    }
    json j;
    if (nil) j = io::to_json(reduce_nilpotent(T, tol));
    else if (sing) j = io::to_json(reduce_noninvertible(T, tol));
    else {
        if (auto c = invertible_bound_check(T, tol); !c.ok) throw AntiError("reduce: " + c.message);
        if (T.size() != 3) {
            j = json{{"kind", "InvertibleAtMostPair"}, {"members", T.size()}};
        } else {
            j = io::to_json(analyze_triple(T, tol));
        }
    }
    emit(o, j);
    std::cerr << "reduction " << j["kind"].get<std::string>() << "\n";
    return kOk;
}

int cmd_dilate(const Options& o) {
    const Tol tol = effective_tol(o);
    const json raw = io::read_file(o.input);
    const auto d = io::tuple_from(raw);
    const GeneralResult g = dilate_general(d.matrices, config_of(o), tol);
    if (!g.certificate) {
        emit(o, json{{"outcome", "CommutingOutOfScope"}, {"route", g.route}, {"q", io::to_json(g.q)}});
        std::cerr << "commuting tuple outside the normal case: no certificate\n";
        return kOk;
    }
    io::CertificateDocument doc{d, *g.certificate, tol, QDILATE_VERSION, io::sha256_hex(io::canonical(io::to_json(d)))};
    emit(o, io::to_json(doc));
    const auto& r = g.certificate->report;
    std::cerr << "route " << g.route << ", dim " << g.certificate->V.rows() << ", max residual " << max_residual(r)
              << (r.passed ? ", passed\n" : ", FAILED\n");
    return r.passed ? kOk : kVerify;
}

int cmd_verify(const Options& o) {
    const auto doc = io::certificate_from(io::read_file(o.input));
    const Tol tol = o.tol ? effective_tol(o) : doc.tol;
    const VerificationReport fresh = verify_certificate(doc.input.matrices, doc.cert, doc.cert.cfg.N, tol);
    const VerificationReport& old = doc.cert.report;
    const double drift = std::max({std::abs(fresh.unitarity - old.unitarity), std::abs(fresh.relation - old.relation),
                                   std::abs(fresh.moment - old.moment), std::abs(fresh.isometry - old.isometry)});
    const bool hashOk = doc.inputHash.empty() || doc.inputHash == io::sha256_hex(io::canonical(io::to_json(doc.input)));
    const bool ok = fresh.passed && hashOk;
    emit(o, json{{"recomputed", io::to_json(fresh)},
                 {"stored", io::to_json(old)},
                 {"drift", drift},
                 {"maxResidual", max_residual(fresh)},
                 {"inputHashOk", hashOk},
                 {"passed", ok}});
    std::cerr << (ok ? "verified" : "verification FAILED") << ", max residual " << max_residual(fresh) << "\n";
    return ok ? kOk : kVerify;
}

std::string q_summary(const QFamily& q) {
    std::map<std::string, int> seen;
    std::ostringstream s;
    for (const auto& e : q.table()) {
        if (!e.exact()) continue;
        char buf[64];
        std::snprintf(buf, sizeof buf, "%.3g%+.3gi", e.value.real() + 0.0, e.value.imag() + 0.0);
        seen[buf]++;
    }
    s << "{";
    bool first = true;
    for (const auto& [v, n] : seen) {
        s << (first ? "" : ", ") << v;
        first = false;
    }
    return s.str() + "}";
}

int cmd_demo(const Options& o) {
    const Tol tol = effective_tol(o);
    TruncationConfig cfg = config_of(o);
    struct Row {
        std::string name;
        Tuple T;
    };
    const std::vector<Row> rows{{"epsilon=0.1", epsilon_triple(0.1)},
                                {"planted type1", plant_type1(o.seed, 3, Conjugation::Unitary).T},
                                {"planted type2", plant_type2(o.seed, 3, Conjugation::Unitary).T},
                                {"planted type3", plant_type3_groups(o.seed).T}};
    std::printf("%-15s %-10s %-34s %-8s %-10s %s\n", "tuple", "verdict", "q~", "beta", "residual", "route");
    int status = kOk;
    for (const auto& row : rows) {
        const GeneralResult g = dilate_general(row.T, cfg, tol);
        const std::string verdict = g.classification ? to_string(g.classification->verdict) : "anti";
        if (!g.certificate) {
            std::printf("%-15s %-10s no certificate\n", row.name.c_str(), verdict.c_str());
            status = kVerify;
            continue;
        }
        const auto& c = *g.certificate;
        const double beta = c.firstScale ? std::abs(*c.firstScale) : c.scale;
        const double res = max_residual(c.report);
        std::printf("%-15s %-10s %-34s %-8.4g %-10.2e %s\n", row.name.c_str(), verdict.c_str(),
                    q_summary(c.qOut).c_str(), beta, res, g.route.c_str());
        if (!c.report.passed || res > 1e-9) status = kVerify;
    }
    return status;
}

int cmd_gen(const Options& o) {
    io::TupleDocument d;
    d.name = o.kind;
    d.seed = o.seed;
    const std::string& k = o.kind;
    if (k == "commuting") d.matrices = plant_commuting(o.seed, o.k).T;
    else if (k == "type1") d.matrices = plant_type1(o.seed, o.k).T;
    else if (k == "type2") d.matrices = plant_type2(o.seed, o.k).T;
    else if (k == "type3") d.matrices = plant_type3(o.seed, o.k).T;
    else if (k == "type3-groups") d.matrices = plant_type3_groups(o.seed).T;
    else if (k == "anti-triple") d.matrices = gen_anti_triple(o.seed, o.scale);
    else if (k == "anti-pair") {
        auto [a, b] = random_anti_pair(o.seed);
        d.matrices = {a, b};
    } else if (k == "epsilon") {
        d.matrices = epsilon_triple(0.1);
        d.seed.reset();
    } else if (k == "contraction") {
        Rng rng(o.seed);
        for (std::size_t i = 0; i < o.k; ++i) d.matrices.push_back(random_contraction(rng, 2));
    } else {
        throw io::ParseError("unknown generator '" + k + "'");
    }
    emit(o, io::to_json(d));
    return kOk;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"qdilate: q-commuting 2x2 contraction tuples, classification and unitary dilation certificates"};
    app.require_subcommand(1);
    Options o;

    auto common = [&](CLI::App* s, bool input) {
        if (input) s->add_option("input", o.input, "input JSON file, - for stdin");
        s->add_option("--tol", o.tol, "relative tolerance (overrides QDILATE_TOL)");
        s->add_option("--out", o.out, "output file (default stdout)");
    };
    auto truncation = [&](CLI::App* s) {
        s->add_option("--degree", o.degree, "certified moment degree N");
        s->add_option("--ring", o.ring, "ring / window block count M, 0 = automatic");
        s->add_option("--mode", o.mode, "cyclic or windowed")->check(CLI::IsMember({"cyclic", "windowed"}));
    };

    auto* detect = app.add_subcommand("detect", "detect the q-relation table");
    common(detect, true);
    auto* cls = app.add_subcommand("classify", "canonical type and change of basis");
    common(cls, true);
    auto* red = app.add_subcommand("reduce", "anti-commuting reductions");
    common(red, true);
    auto* dil = app.add_subcommand("dilate", "build and verify a dilation certificate");
    common(dil, true);
    truncation(dil);
    auto* ver = app.add_subcommand("verify", "recompute a certificate's report from scratch");
    common(ver, true);
    auto* demo = app.add_subcommand("demo", "run the bundled corpus");
    common(demo, false);
    truncation(demo);
    demo->add_option("--seed", o.seed, "seed for the planted rows");
    auto* gen = app.add_subcommand("gen", "write a generated tuple document");
    common(gen, false);
    gen->add_option("kind", o.kind,
                    "commuting | type1 | type2 | type3 | type3-groups | anti-triple | anti-pair | epsilon | contraction")
        ->required();
    gen->add_option("--seed", o.seed, "generator seed");
    gen->add_option("--k", o.k, "number of members");
    gen->add_option("--scale", o.scale, "member norm for anti-triple");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int rc = app.exit(e);
        return rc == 0 ? kOk : kParse;
    }

    try {
        if (*detect) return cmd_detect(o);
        if (*cls) return cmd_classify(o);
        if (*red) return cmd_reduce(o);
        if (*dil) return cmd_dilate(o);
        if (*ver) return cmd_verify(o);
        if (*demo) return cmd_demo(o);
        if (*gen) return cmd_gen(o);
    } catch (const io::ParseError& e) {
        std::cerr << "parse error: " << e.what() << "\n";
        return kParse;
    } catch (const json::exception& e) {
        std::cerr << "parse error: " << e.what() << "\n";
        return kParse;
    } catch (const DimensionError& e) {
        std::cerr << "parse error: " << e.what() << "\n";
        return kParse;
    } catch (const RelationError& e) {
        std::cerr << "not q-commuting: " << e.what() << " (members " << e.i + 1 << ", " << e.j + 1 << ")\n";
        return kMath;
    } catch (const std::domain_error& e) {
        std::cerr << "hypothesis violated: " << e.what() << "\n";
        return kMath;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kMath;
    }
    return kOk;
}
