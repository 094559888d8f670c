#include <chrono>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <numbers>
#include <sstream>
#include <sys/wait.h>
#include <unistd.h>

#include "io.hpp"
#include "support.hpp"

using namespace qdilate;
using qtest::dist;

namespace {

int failures = 0;

void line(int n, bool ok, const std::string& detail) {
    std::printf("criterion %d: %s  %s\n", n, ok ? "PASS" : "FAIL", detail.c_str());
    std::fflush(stdout);
    if (!ok) ++failures;
}

std::string fmt(const char* f, double a, double b = 0, double c = 0) {
    char buf[256];
    std::snprintf(buf, sizeof buf, f, a, b, c);
    return buf;
}

void epsilon_example() {
    const auto t0 = std::chrono::steady_clock::now();
    const Tol tol{1e-9, 1e-12};
    const Tuple T = epsilon_triple(0.1);
    bool ok = true;
    const QFamily q = detect_family(T, tol);
    for (const auto& e : q.table()) ok = ok && e.exact() && e.value == cplx(-1.0);
    const double prod = dist(T[1] * T[2], -1.0 * T[0]);
    ok = ok && prod <= 1e-12;
    for (const auto& t : T) ok = ok && std::abs(trace(t)) <= 1e-15;
    const AntiReduction r = analyze_triple(T, tol);
    ok = ok && std::abs(r.lambda + 1.0) <= 1e-12 && std::abs(r.alpha + 2.0) <= 1e-12 && std::abs(r.beta + 1.0) <= 1e-12;
    const DilationCertificate c = dilate_anti(T, TruncationConfig{5, 0}, tol);
    const VerificationReport v = verify_certificate(T, c, 5, tol);
    const double brute = qtest::brute_check(T, c, 5).worst();
    ok = ok && v.passed && c.report.passed && brute <= 1e-9 && !c.firstScale;
    for (const auto& e : c.qOut.table()) ok = ok && e.exact() && e.value == cplx(-1.0);
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    ok = ok && secs < 5.0;
    line(1, ok,
         fmt("|T2T3+T1|=%.1e lambda=%.0f alpha=%.0f", prod, r.lambda.real(), r.alpha.real()) +
             fmt(" beta=%.0f dim=%.0f", r.beta.real(), double(c.V.rows())) +
             fmt(" residual=%.1e dense=%.1e time=%.2fs", std::max({v.unitarity, v.relation, v.moment}), brute, secs));
}

void classification() {
    const Tol tol;
    int wrong = 0, total = 0;
    double worst = 0;
    std::string first;
    const char* names[] = {"commuting", "type1", "type2", "type3"};
    for (int cls = 0; cls < 4; ++cls)
        for (std::uint64_t s = 0; s < 500; ++s) {
            const std::uint64_t seed = 1000003 * (cls + 1) + s;
            const PlantedTuple p = cls == 0   ? plant_commuting(seed)
                                   : cls == 1 ? plant_type1(seed)
                                   : cls == 2 ? plant_type2(seed)
                                              : plant_type3(seed);
            ++total;
            try {
                const ClassificationReport r = classify(p.T, detect_family(p.T, tol), tol);
                if (r.verdict != p.verdict) {
                    ++wrong;
                    if (first.empty()) first = std::string(" first=") + names[cls] + "/" + std::to_string(seed);
                    continue;
                }
                if (r.verdict != Verdict::Commuting) worst = std::max(worst, round_trip_residual(p.T, r));
            } catch (const std::exception& e) {
                ++wrong;
                if (first.empty()) first = std::string(" first=") + names[cls] + "/" + std::to_string(seed) + " " + e.what();
            }
        }
    line(2, wrong == 0 && worst <= 1e-8,
         fmt("%.0f tuples, %.0f misclassified, worst round trip %.1e", total, wrong, worst) + first);
}

void pair_engine() {
    Rng rng(3);
    double unit = 0, mom = 0;
    for (int t = 0; t < 200; ++t) {
        const Mat T = random_contraction(rng, 2, 0.05, 1.0);
        const DilationCertificate c = schaffer(T, TruncationConfig{6, 8});
        unit = std::max(unit, unitarity_residual(c.U[0]));
        Mat X = c.V;
        for (unsigned s = 0; s <= 6; ++s) {
            mom = std::max(mom, dist(adjoint(c.V) * X, power(T, s)));
            X = c.U[0] * X;
        }
    }
    line(3, unit <= 1e-12 && mom <= 1e-10, fmt("200 contractions, M=8: unitarity %.1e, moments s<=6 %.1e", unit, mom));
}

void twisted_pairs() {
    const Tol tol;
    const cplx qs[] = {-1.0, cplx(0, 1), std::polar(1.0, 2 * std::numbers::pi / 3)};
    double rel = 0, mom = 0;
    int failed = 0;
    for (std::uint64_t s = 0; s < 200; ++s) {
        const cplx q = qs[s % 3];
        const TwistedPair p = plant_twisted_pair(77 + s, q, 2 + s % 2);
        TruncationConfig cfg{6, 0};
        cfg.M = cyclic_block_count(schaffer_sites(6), {q});
        try {
            const DilationCertificate c = pair_unitary_contraction(p.R, p.T, q, cfg, tol);
            const qtest::Brute b = qtest::brute_check({p.R, p.T}, c, 6);
            rel = std::max(rel, b.relation);
            mom = std::max(mom, b.moment);
            if (!c.report.passed || b.worst() > 1e-9) ++failed;
        } catch (const std::exception&) {
            ++failed;
        }
    }
    line(4, failed == 0 && rel <= 1e-9 && mom <= 1e-9,
         fmt("200 pairs over q in {-1, i, w3}: %.0f failed, relation %.1e, moments a+b<=6 %.1e", failed, rel, mom));
}

void theta_ledger() {
    double worst = 0;
    for (std::uint64_t s = 0; s < 200; ++s) {
        const auto [A, B] = random_anti_pair(500 + s);
        for (unsigned n = 0; n <= 8; ++n) {
            const double sign = theta(n) % 2 ? -1.0 : 1.0;
            worst = std::max(worst, dist(power(A * B, n), sign * (power(A, n) * power(B, n))));
        }
    }
    line(5, worst <= 1e-10, fmt("200 anti-commuting pairs, n<=8: worst %.1e", worst));
}

void type3_end_to_end() {
    const Tol tol;
    int failed = 0, groupsMissing = 0, notContained = 0;
    double worst = 0;
    for (std::uint64_t s = 0; s < 100; ++s) {
        const PlantedTuple p = plant_type3_groups(9000 + s);
        try {
            const QFamily q = detect_family(p.T, tol);
            const ClassificationReport rep = classify(p.T, q, tol);
            const Canonical& C = *rep.canonical;
            std::size_t m = C.etaTwist.front();
            for (std::size_t j : C.etaTwist)
                if (std::abs(C.d[j]) > std::abs(C.d[m])) m = j;
            const OrderingPlan o = ordering_plan(C, q, m);
            if (!(o.i > 0 && o.j > o.i && o.l > o.j && o.sigma.size() > o.l)) ++groupsMissing;
            const DilationCertificate c = dilate_type3(p.T, q, rep, TruncationConfig{5, 0}, tol);
            if (!qtilde_contained(q, c.qOut)) ++notContained;
            worst = std::max({worst, c.report.moment, c.report.relation, c.report.unitarity});
            if (!c.report.passed) ++failed;
        } catch (const std::exception&) {
            ++failed;
        }
    }
    line(6, failed == 0 && groupsMissing == 0 && notContained == 0,
         fmt("100 planted k=4 tuples: %.0f failed, %.0f missing a group, ", failed, groupsMissing) +
             fmt("%.0f outside q+{1}, worst residual %.1e", notContained, worst));
}

void invertible_bound() {
    const Tol tol;
    int bad = 0;
    double worst = 0;
    for (std::uint64_t s = 0; s < 100; ++s) {
        const double scale = 0.9;
        const Tuple T = gen_anti_triple(4000 + s, scale);
        const AntiReduction r = analyze_triple(T, tol);
        const AnticommutantResult a = anticommutant_solve(T, tol);
        worst = std::max(worst, a.maxDet / (scale * scale));
        if (r.kind != AntiKind::GeneralTriple || a.maxDet > 1e-10 * scale * scale) ++bad;
    }
    line(7, bad == 0, fmt("100 general triples: %.0f admit an invertible fourth member, worst |det|/scale^2 %.1e", bad, worst));
}

void similarity() {
    const Tol tol;
    int bad = 0, unitaryCases = 0, betaOne = 0;
    double worst = 0;
    for (std::uint64_t s = 0; s < 50; ++s) {
        const bool unitary = s % 5 == 0;
        const PlantedTuple p = plant_type1(7000 + s, 3, unitary ? Conjugation::Unitary : Conjugation::Similar, 10.0);
        const double kappa = operator_norm(p.P) * operator_norm(inv2(p.P));
        try {
            const GeneralResult g = dilate_general(p.T, TruncationConfig{4, 0}, tol);
            const double beta = g.similarity ? g.similarity->beta : 1.0;
            const double err = std::abs(beta - kappa) / kappa;
            worst = std::max(worst, err);
            unitaryCases += unitary;
            const bool one = std::abs(beta - 1.0) <= 1e-12;
            betaOne += one;
            if (err > 1e-10 || one != unitary || !g.certificate || !g.certificate->report.passed) ++bad;
        } catch (const std::exception&) {
            ++bad;
        }
    }
    line(8, bad == 0,
         fmt("50 conjugated Type-I tuples (cond<=10): %.0f bad, worst beta error %.1e, ", bad, worst) +
             fmt("beta=1 in %.0f of %.0f unitary controls", betaOne, unitaryCases));
}

struct Run {
    int code = -1;
    double residual = 0;
};

Run run_verify(const std::string& cli, const std::filesystem::path& file) {
    const std::filesystem::path out = file.string() + ".out";
    const std::string cmd = "'" + cli + "' verify '" + file.string() + "' --out '" + out.string() + "' 2>/dev/null";
    const int st = std::system(cmd.c_str());
    Run r;
    r.code = WIFEXITED(st) ? WEXITSTATUS(st) : -1;
    try {
        r.residual = io::read_file(out.string()).at("maxResidual").get<double>();
    } catch (const std::exception&) {
        r.residual = -1;
    }
    return r;
}

void tamper(const std::string& cli) {
    namespace fs = std::filesystem;
    const fs::path dir = fs::temp_directory_path() / ("qdilate_tamper_" + std::to_string(::getpid()));
    fs::create_directories(dir);
    const Tol tol;
    const std::vector<io::TupleDocument> inputs{{epsilon_triple(), {}, "epsilon", {}},
                                                {plant_type1(5, 3, Conjugation::Unitary).T, {}, "type1", 5}};
    Rng rng(99);
    int tried = 0, missed = 0, weak = 0, tinyV = 0, tinyWeak = 0;
    double minMain = 1e300, minTiny = 1e300;
    bool cleanOk = true;
    for (std::size_t d = 0; d < inputs.size(); ++d) {
        const GeneralResult g = dilate_general(inputs[d].matrices, TruncationConfig{4, 0}, tol);
        const io::CertificateDocument doc{inputs[d], *g.certificate, tol, "acceptance",
                                          io::sha256_hex(io::canonical(io::to_json(inputs[d])))};
        const io::json base = io::to_json(doc);
        const fs::path clean = dir / ("clean" + std::to_string(d) + ".json");
        io::write_text(clean.string(), io::canonical(base));
        cleanOk = cleanOk && run_verify(cli, clean).code == 0;

        auto attempt = [&](io::json j, bool tiny) {
            const fs::path f = dir / "tampered.json";
            io::write_text(f.string(), io::canonical(j));
            const Run r = run_verify(cli, f);
            ++tried;
            if (r.code != 3) ++missed;
            if (r.residual < 1e-4) ++weak;
            if (tiny) {
                ++tinyV;
                tinyWeak += r.residual < 1e-4;
                minTiny = std::min(minTiny, r.residual);
            } else {
                minMain = std::min(minMain, r.residual);
            }
        };
        const std::size_t n = g.certificate->V.rows();
        std::uniform_int_distribution<std::size_t> pos(0, n - 1);
        for (std::size_t i = 0; i < g.certificate->U.size(); ++i) {
            const io::json& entries = base["certificate"]["U"][i]["entries"];
            // stored entries
            for (int t = 0; t < 12; ++t) {
                io::json j = base;
                const std::size_t e = std::uniform_int_distribution<std::size_t>(0, entries.size() - 1)(rng);
                j["certificate"]["U"][i]["entries"][e][2] = entries[e][2].get<double>() + 1e-3;
                attempt(j, false);
            }
            // structural zeros
            for (int t = 0; t < 6; ++t) {
                io::json j = base;
                j["certificate"]["U"][i]["entries"].push_back(io::json::array({pos(rng), pos(rng), 1e-3, 0.0}));
                attempt(j, false);
            }
        }
        const io::json& ve = base["certificate"]["V"]["entries"];
        for (std::size_t e = 0; e < ve.size(); ++e) {
            io::json j = base;
            const double re = ve[e][2].get<double>(), im = ve[e][3].get<double>();
            j["certificate"]["V"]["entries"][e][2] = re + 1e-3;
            attempt(j, std::hypot(re, im) < 1e-3);
        }
        for (int t = 0; t < 4; ++t) {
            io::json j = base;
            j["certificate"]["V"]["entries"].push_back(io::json::array({pos(rng), std::size_t(t % 2), 1e-3, 0.0}));
            attempt(j, true);
        }
    }
    fs::remove_all(dir);
    line(9, cleanOk && missed == 0 && weak == 0,
         fmt("%.0f tampered certificates: %.0f not rejected, %.0f with residual < 1e-4; ", tried, missed, weak) +
             fmt("unitary and large isometry entries min residual %.1e; ", minMain) +
             fmt("near-zero isometry entries: %.0f of %.0f below 1e-4, min %.1e", tinyWeak, tinyV, minTiny));
}

}  // namespace

int main(int argc, char** argv) {
    if (argc < 2) {
        std::fprintf(stderr, "usage: qdilate_acceptance <path to qdilate cli>\n");
        return 2;
    }
    epsilon_example();
    classification();
    pair_engine();
    twisted_pairs();
    theta_ledger();
    type3_end_to_end();
    invertible_bound();
    similarity();
    tamper(argv[1]);
    std::printf("%d of 9 criteria failed\n", failures);
    return failures == 0 ? 0 : 1;
}
