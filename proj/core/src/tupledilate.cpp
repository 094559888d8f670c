#include "qdilate/tupledilate.hpp"

#include <algorithm>
#include <cmath>

namespace qdilate {

namespace {

constexpr double kUnimodularSlack = 1e-12;
constexpr double kPhaseSlack = 1e-7;

// Every assembly reduces to: member i = weight_i * (product of base generators along word_i),
// generators acting on K0 with isometry V0 from the working frame, H = frame * (working frame).
struct Plan {
    std::vector<Mat> gens;
    Mat V0;
    std::vector<cplx> weights;
    std::vector<std::vector<std::size_t>> words;
    Mat frame = Mat::identity(2);
    bool adjointAll = false;
    std::optional<cplx> firstScale;
    TruncationConfig cfg;
    std::string route;
};

bool unimodular(cplx w) { return std::abs(std::abs(w) - 1.0) <= kUnimodularSlack; }

cplx snap_phase(cplx z) {
    const QEntry e = snap_root_of_unity(z);
    return e.order > 0 ? e.value : z / std::abs(z);
}

Mat word_unitary(const Plan& p, const std::vector<std::size_t>& w) {
    const std::size_t d = p.V0.rows();
    Mat B = Mat::identity(d);
    for (std::size_t g : w) B = B * p.gens[g];
    return B;
}

// Scalar c with A = c B, or nullopt.
std::optional<cplx> scalar_ratio(const Mat& A, const Mat& B, const Tol& tol) {
    cplx num = 0;
    double den = 0;
    for (std::size_t t = 0; t < A.data().size(); ++t) {
        num += std::conj(B.data()[t]) * A.data()[t];
        den += std::norm(B.data()[t]);
    }
    if (den == 0) return std::nullopt;
    const cplx c = num / den;
    if (max_abs(A - c * B) > tol.at(1.0)) return std::nullopt;
    return c;
}

QFamily measured_family(const std::vector<Mat>& B, const Tol& tol) {
    const std::size_t k = B.size();
    QFamily f(k);
    for (std::size_t i = 0; i < k; ++i)
        for (std::size_t j = i + 1; j < k; ++j) {
            const auto c = scalar_ratio(B[i] * B[j], B[j] * B[i], tol);
            if (!c) throw DilationError("assembly: base words do not satisfy a scalar relation");
            f.set(i, j, QEntry::exact_of(snap_phase(*c)));
        }
    return f;
}

std::vector<std::size_t> twist_list(const std::vector<bool>& twisted, bool want) {
    std::vector<std::size_t> out;
    for (std::size_t j = 0; j < twisted.size(); ++j)
        if (twisted[j] == want) out.push_back(j);
    return out;
}

TruncationConfig lattice_config(const TruncationConfig& cfg, const std::vector<cplx>& twists) {
    TruncationConfig c = cfg;
    bool periodicOk = true;
    for (cplx q : twists)
        if (root_order(q) <= 0) periodicOk = false;
    if (cfg.mode == TruncMode::Cyclic && periodicOk) {
        c.M = cyclic_block_count(std::max(cfg.M, schaffer_sites(cfg.N)), twists);
    } else {
        c.mode = TruncMode::Windowed;
        c.M = std::max(cfg.M, schaffer_sites(cfg.N));
    }
    return c;
}

Plan single_plan(const Mat& T, const TruncationConfig& cfg, const Tol& tol) {
    const DilationCertificate s = schaffer(T, cfg, tol);
    Plan p;
    p.gens = {s.U[0]};
    p.V0 = s.V;
    p.weights = {1.0};
    p.words = {{0}};
    p.frame = Mat::identity(T.rows());
    p.cfg = s.cfg;
    p.route = "schaffer";
    return p;
}

// Diagonal members diag(x, alpha x) and strictly lower twisted members, given in the working frame.
Plan plan_lower(const Tuple& forms, const std::vector<bool>& twisted, const Mat& frame, const TruncationConfig& cfg,
                const Tol& tol) {
    const std::size_t k = forms.size();
    Plan p;
    p.frame = frame;
    p.weights.assign(k, 1.0);
    p.words.assign(k, {});
    p.route = "lower";

    std::vector<cplx> alpha(k, 1.0);
    for (std::size_t i : twist_list(twisted, false)) {
        const cplx x = forms[i](0, 0), y = forms[i](1, 1);
        if (x == cplx(0.0)) throw DilationError("assembly: diagonal member with zero scalar");
        alpha[i] = snap_phase(y / x);
        p.weights[i] = x;
    }
    const auto tw = twist_list(twisted, true);
    if (tw.empty()) {
        // K0 = C^2, generators are the diagonal unitaries themselves.
        p.V0 = Mat::identity(2);
        for (std::size_t i = 0; i < k; ++i) {
            p.gens.push_back(Mat::diag({1.0, alpha[i]}));
            p.words[i] = {i};
        }
        p.cfg = cfg;
        return p;
    }

    std::size_t m = tw.front();
    for (std::size_t j : tw)
        if (std::abs(forms[j](1, 0)) > std::abs(forms[m](1, 0))) m = j;
    const cplx em = forms[m](1, 0);
    if (em == cplx(0.0)) throw DilationError("assembly: twisted members vanish");
    const Mat Tm{{0, 0}, {em, 0}};

    std::vector<cplx> distinct;
    for (std::size_t i : twist_list(twisted, false)) {
        if (std::abs(alpha[i] - 1.0) <= kPhaseSlack) continue;
        if (std::none_of(distinct.begin(), distinct.end(), [&](cplx a) { return std::abs(a - alpha[i]) <= kPhaseSlack; }))
            distinct.push_back(alpha[i]);
    }
    p.cfg = lattice_config(cfg, distinct);
    const DilationCertificate s = schaffer(Tm, p.cfg, tol);
    p.gens.push_back(s.U[0]);
    p.V0 = s.V;
    for (cplx a : distinct) {
        const Mat R = Mat::diag({1.0, a});
        assert_twist(R, Tm, a, tol);
        p.gens.push_back(twisted_diag(R, a, p.cfg, tol));
    }
    for (std::size_t i : twist_list(twisted, false))
        for (std::size_t g = 0; g < distinct.size(); ++g)
            if (std::abs(distinct[g] - alpha[i]) <= kPhaseSlack) p.words[i] = {g + 1};
    for (std::size_t j : tw) {
        p.weights[j] = forms[j](1, 0) / em;
        p.words[j] = {0};
    }
    return p;
}

Tuple adjoint_tuple(const Tuple& T) {
    Tuple out;
    for (const auto& t : T) out.push_back(adjoint(t));
    return out;
}

Plan plan_upper(const Tuple& forms, const std::vector<bool>& twisted, const Mat& frame, const TruncationConfig& cfg,
                const Tol& tol) {
    Plan p = plan_lower(adjoint_tuple(forms), twisted, frame, cfg, tol);
    p.adjointAll = true;
    p.route = "upper(adjoint of lower)";
    return p;
}

Plan plan_anti_diag(const Tuple& forms, const std::vector<bool>& twisted, const Mat& frame,
                    const TruncationConfig& cfg, const Tol& tol) {
    const std::size_t k = forms.size();
    const auto tw = twist_list(twisted, true);
    double dmax = 0, emax = 0;
    std::size_t m = tw.empty() ? 0 : tw.front();
    for (std::size_t j : tw) {
        if (std::abs(forms[j](0, 1)) > dmax) {
            dmax = std::abs(forms[j](0, 1));
            m = j;
        }
        emax = std::max(emax, std::abs(forms[j](1, 0)));
    }
    const double thr = tol.at(1.0);
    if (tw.empty() || dmax <= thr) {
        Plan p = plan_lower(forms, twisted, frame, cfg, tol);
        p.route = "anti-diagonal with d = 0 -> lower";
        return p;
    }
    if (emax <= thr) {
        Plan p = plan_upper(forms, twisted, frame, cfg, tol);
        p.route = "anti-diagonal with e = 0 -> upper";
        return p;
    }

    const Mat R = Mat::diag({1.0, -1.0});
    const Mat& Tm = forms[m];
    TruncationConfig c = cfg;
    c.M = cyclic_block_count(std::max(cfg.M, schaffer_sites(cfg.N)), {-1.0});
    c.mode = TruncMode::Cyclic;
    const DilationCertificate base = pair_unitary_contraction(R, Tm, -1.0, c, tol);

    Plan p;
    p.frame = frame;
    p.gens = base.U;  // (R~, U~_m)
    p.V0 = base.V;
    p.cfg = base.cfg;
    p.weights.assign(k, 1.0);
    p.words.assign(k, {});
    p.route = "anti-diagonal";
    for (std::size_t i : twist_list(twisted, false)) {
        const cplx x = forms[i](0, 0);
        const cplx a = snap_phase(forms[i](1, 1) / x);
        p.weights[i] = x;
        if (std::abs(a + 1.0) <= kPhaseSlack)
            p.words[i] = {0};
        else if (std::abs(a - 1.0) > kPhaseSlack)
            throw DilationError("assembly: diagonal ratio outside {1,-1}");
    }
    const cplx dm = Tm(0, 1), em = Tm(1, 0);
    for (std::size_t j : tw) {
        const cplx w = forms[j](0, 1) / dm;
        const cplx e = forms[j](1, 0);
        const double scale = std::max(1.0, std::abs(e));
        p.weights[j] = w;
        if (std::abs(e - w * em) <= 10 * tol.at(scale))
            p.words[j] = {1};
        else if (std::abs(e + w * em) <= 10 * tol.at(scale))
            p.words[j] = {0, 1};
        else
            throw DilationError("assembly: twisted member is not w R_{+-1} T_m");
    }
    return p;
}

Plan plan_anti(const Tuple& T, const TruncationConfig& cfg, const Tol& tol) {
    const std::size_t k = T.size();
    if (auto chk = assert_anti(T, tol); !chk.ok) throw AntiError("dilate_anti: " + chk.message);
    if (k == 1) return single_plan(T[0], cfg, tol);

    auto pair_plan = [&](std::size_t a, std::size_t b, unsigned degree) {
        TruncationConfig c = cfg;
        c.N = degree;
        c.mode = TruncMode::Cyclic;
        const DilationCertificate base = q_pair(T[a], T[b], -1.0, c, tol);
        if (!base.report.passed) throw DilationError("dilate_anti: pair engine failed verification");
        Plan p;
        p.gens = base.U;
        p.V0 = base.V;
        p.cfg = base.cfg;
        p.weights.assign(k, 1.0);
        p.words.assign(k, {});
        return p;
    };

    bool anyNil = false, anySing = false;
    for (const auto& t : T) {
        anyNil = anyNil || is_nilpotent2(t, tol);
        anySing = anySing || is_singular2(t, tol);
    }
    if (anyNil || anySing) {
        const AntiReduction red = anyNil ? reduce_nilpotent(T, tol) : reduce_noninvertible(T, tol);
        const bool nil = red.kind == AntiKind::Nilpotent;
        const std::size_t lead = red.n;  // nilpotent pivot, or singular pivot
        if (red.commutingMarker) {
            Plan p = single_plan(T[lead], cfg, tol);
            p.weights.assign(k, 0.0);
            p.words.assign(k, {});
            for (std::size_t j = 0; j < k; ++j) {
                if (nil) {
                    p.weights[j] = red.weights[j];
                    p.words[j] = {0};
                } else if (j == lead) {
                    p.weights[j] = 1.0;
                    p.words[j] = {0};
                }
            }
            p.route = nil ? "anti/nilpotent (commuting marker)" : "anti/noninvertible (commuting marker)";
            return p;
        }
        Plan p = pair_plan(lead, red.m, cfg.N);
        for (std::size_t j = 0; j < k; ++j) {
            if (nil) {
                p.words[j] = {j == red.m ? std::size_t{1} : std::size_t{0}};
                p.weights[j] = j == red.m ? cplx(1.0) : red.weights[j];
            } else {
                p.words[j] = {j == lead ? std::size_t{0} : std::size_t{1}};
                p.weights[j] = j == lead ? cplx(1.0) : red.weights[j];
            }
        }
        p.route = nil ? "anti/nilpotent" : "anti/noninvertible";
        return p;
    }

    if (auto chk = invertible_bound_check(T, tol); !chk.ok) throw AntiError("dilate_anti: " + chk.message);
    if (k == 2) {
        Plan p = pair_plan(0, 1, cfg.N);
        p.words = {{0}, {1}};
        p.route = "anti/invertible pair";
        return p;
    }
    const AntiReduction red = analyze_triple(T, tol);
    if (red.kind == AntiKind::NormalTriple) {
        const std::size_t o1 = red.order[0], o2 = red.order[1], o3 = red.order[2];
        const Mat F = red.frame;
        const Mat T3 = adjoint(F) * T[o3] * F;
        TruncationConfig c = cfg;
        c.M = cyclic_block_count(std::max(cfg.M, schaffer_sites(cfg.N)), {-1.0});
        c.mode = TruncMode::Cyclic;
        const DilationCertificate base = pair_unitary_contraction(Mat::diag({1.0, -1.0}), T3, -1.0, c, tol);
        Plan p;
        p.frame = F;
        p.gens = base.U;
        p.V0 = base.V;
        p.cfg = base.cfg;
        p.weights.assign(3, 1.0);
        p.words.assign(3, {});
        p.weights[o1] = red.a1;
        p.words[o1] = {0};
        p.weights[o2] = red.lambda;
        p.words[o2] = {1, 0};
        p.words[o3] = {1};
        p.route = "anti/normal triple";
        return p;
    }
    // General triple: the first member is beta U2 U3, so the base needs twice the degree.
    Plan p = pair_plan(1, 2, 2 * cfg.N);
    p.cfg.N = cfg.N;
    p.words = {{0, 1}, {0}, {1}};
    if (std::abs(red.beta) <= 1.0 + kUnimodularSlack) {
        p.weights[0] = red.beta;
    } else {
        p.weights[0] = 1.0;
        p.firstScale = red.beta;
    }
    p.route = "anti/general triple";
    return p;
}

// Expand a plan on the kept members to the full tuple; dropped members become zero-weight rings.
Plan expand(Plan p, const Index& kept, std::size_t k) {
    std::vector<cplx> w(k, 0.0);
    std::vector<std::vector<std::size_t>> words(k);
    for (std::size_t t = 0; t < kept.size(); ++t) {
        w[kept[t]] = p.weights[t];
        words[kept[t]] = p.words[t];
    }
    if (p.firstScale && (kept.empty() || kept[0] != 0)) throw DilationError("assembly: scaled member moved");
    p.weights = std::move(w);
    p.words = std::move(words);
    return p;
}

DilationCertificate realize(const Plan& p, const Tuple& T, const QFamily& qIn, const Tol& tol) {
    BaseAssignment base;
    for (const auto& w : p.words) base.unitaries.push_back(word_unitary(p, w));
    base.V = p.V0 * adjoint(p.frame);
    DilationCertificate c = scalar_tensor_lift(p.weights, base, p.cfg, tol);
    if (p.adjointAll)
        for (auto& U : c.U) U = adjoint(U);
    c.firstScale = p.firstScale;
    c.qIn = qIn;
    c.route = p.route;
    c.report = verify_certificate(T, c, p.cfg.N, tol);
    return c;
}

std::vector<bool> twisted_mask(const Canonical& C, std::size_t k) {
    std::vector<bool> m(k, false);
    for (std::size_t j : C.etaTwist) m[j] = true;
    return m;
}

}  // namespace

long OrderingPlan::p(const std::vector<unsigned>& mult) const {
    long s = 0, acc = 0;
    for (std::size_t x = l; x < sigma.size(); ++x) {
        s += acc * static_cast<long>(mult[sigma[x]]);
        acc += mult[sigma[x]];
    }
    return s;
}

long OrderingPlan::t(const std::vector<unsigned>& mult) const {
    long a = 0, b = 0;
    for (std::size_t x = j; x < l; ++x) a += mult[sigma[x]];
    for (std::size_t x = l; x < sigma.size(); ++x) b += mult[sigma[x]];
    return a * b;
}

long OrderingPlan::sign_exponent(const std::vector<unsigned>& mult) const {
    long th = 0;
    for (std::size_t x = l; x < sigma.size(); ++x) th += theta(static_cast<long>(mult[sigma[x]]));
    return th + p(mult) + t(mult);
}

OrderingPlan ordering_plan(const Canonical& C, const QFamily& q, std::size_t pivot) {
    OrderingPlan o;
    o.m = pivot;
    const std::size_t k = C.alpha.size();
    std::vector<bool> twisted(k, false);
    for (std::size_t j : C.etaTwist) twisted[j] = true;
    std::vector<std::size_t> g[4];
    for (std::size_t x = 0; x < k; ++x) {
        if (!twisted[x]) {
            g[std::abs(C.alpha[x] - 1.0) <= kPhaseSlack ? 0 : 1].push_back(x);
        } else {
            const cplx qm = x == pivot ? cplx(1.0) : q.value_or_one(pivot, x);
            g[std::abs(qm - 1.0) <= kPhaseSlack ? 2 : 3].push_back(x);
        }
    }
    for (int a = 0; a < 4; ++a) o.sigma.insert(o.sigma.end(), g[a].begin(), g[a].end());
    o.i = g[0].size();
    o.j = o.i + g[1].size();
    o.l = o.j + g[2].size();
    return o;
}

SimilarityPlan similarity_plan(const Mat& P) {
    SimilarityPlan s;
    s.P = P;
    s.beta = operator_norm(P) * operator_norm(inv2(P));
    return s;
}

bool qtilde_contained(const QFamily& qIn, const QFamily& qOut) {
    std::vector<cplx> allowed{1.0};
    for (const auto& e : qIn.table())
        if (e.exact()) allowed.push_back(e.value);
    for (const auto& e : qOut.table()) {
        if (!e.exact()) return false;
        if (std::none_of(allowed.begin(), allowed.end(), [&](cplx a) { return std::abs(a - e.value) <= kPhaseSlack; }))
            return false;
    }
    return true;
}

DilationCertificate scalar_tensor_lift(const std::vector<cplx>& weights, const BaseAssignment& base,
                                       const TruncationConfig& cfg, const Tol& tol) {
    const std::size_t k = weights.size();
    if (base.unitaries.size() != k) throw DimensionError("scalar_tensor_lift: one base unitary per weight");
    for (cplx w : weights)
        if (std::abs(w) > 1.0 + tol.at(1.0)) throw ContractionError("scalar_tensor_lift: weight outside the disc");
    const QFamily rel = measured_family(base.unitaries, tol);

    const unsigned ringSites = schaffer_sites(cfg.N);
    TruncationConfig rc{cfg.N, ringSites, TruncMode::Cyclic};
    std::vector<std::size_t> ringOf(k, static_cast<std::size_t>(-1));
    std::vector<Mat> rings;
    for (std::size_t i = 0; i < k; ++i)
        if (!unimodular(weights[i])) {
            ringOf[i] = rings.size();
            rings.push_back(schaffer(Mat{{weights[i]}}, rc, tol).U[0]);
        }
    const std::size_t d0 = base.V.rows();
    std::size_t ringDim = 1;
    for (std::size_t r = 0; r < rings.size(); ++r) ringDim *= ringSites;
    if (ringDim * d0 > kDimensionCap)
        throw DilationError("scalar_tensor_lift: dimension " + std::to_string(ringDim * d0) + " exceeds cap");

    DilationCertificate c;
    c.cfg = cfg;
    c.qOut = rel;
    c.qIn = rel;
    c.route = "scalar_tensor_lift";
    for (std::size_t i = 0; i < k; ++i) {
        Mat leg = Mat::identity(1);
        for (std::size_t r = 0; r < rings.size(); ++r)
            leg = kron(leg, ringOf[i] == r ? rings[r] : Mat::identity(ringSites));
        const Mat B = unimodular(weights[i]) ? weights[i] * base.unitaries[i] : base.unitaries[i];
        c.U.push_back(kron(leg, B));
    }
    Mat e0(ringDim, 1);
    e0(0, 0) = 1.0;
    c.V = kron(e0, base.V);

    Tuple target;
    const Mat Vs = adjoint(base.V);
    for (std::size_t i = 0; i < k; ++i) target.push_back(weights[i] * (Vs * base.unitaries[i] * base.V));
    c.report = verify_certificate(target, c, cfg.N, tol);
    return c;
}

DilationCertificate dilate_type1(const Tuple& T, const QFamily& q, const ClassificationReport& rep,
                                 const TruncationConfig& cfg, const Tol& tol) {
    if (rep.verdict != Verdict::TypeI || !rep.canonical || !rep.unitarilyEquivalent)
        throw DilationError("dilate_type1: needs a unitarily equivalent Type-I classification");
    Plan p = plan_lower(rep.forms, twisted_mask(*rep.canonical, T.size()), rep.P, cfg, tol);
    p.route = "type1";
    return realize(p, T, q, tol);
}

DilationCertificate dilate_type2(const Tuple& T, const QFamily& q, const TruncationConfig& cfg, const Tol& tol) {
    const ClassificationReport rep = classify(T, q, tol);
    if (rep.verdict != Verdict::TypeII || !rep.canonical || !rep.unitarilyEquivalent)
        throw DilationError("dilate_type2: needs a unitarily equivalent Type-II classification");
    Plan p = plan_upper(rep.forms, twisted_mask(*rep.canonical, T.size()), rep.P, cfg, tol);
    p.route = "type2";
    return realize(p, T, q, tol);
}

DilationCertificate dilate_type3(const Tuple& T, const QFamily& q, const ClassificationReport& rep,
                                 const TruncationConfig& cfg, const Tol& tol) {
    if (rep.verdict != Verdict::TypeIII || !rep.canonical || !rep.unitarilyEquivalent)
        throw DilationError("dilate_type3: needs a unitarily equivalent Type-III classification");
    Plan p = plan_anti_diag(rep.forms, twisted_mask(*rep.canonical, T.size()), rep.P, cfg, tol);
    p.route = "type3/" + p.route;
    return realize(p, T, q, tol);
}

DilationCertificate dilate_anti(const Tuple& T, const TruncationConfig& cfg, const Tol& tol) {
    QFamily q(T.size());
    for (std::size_t i = 0; i < T.size(); ++i)
        for (std::size_t j = i + 1; j < T.size(); ++j) q.set(i, j, QEntry::exact_of(-1.0));
    return realize(plan_anti(T, cfg, tol), T, q, tol);
}

namespace {

// Normal, pairwise commuting members share an orthonormal eigenbasis.
std::optional<Mat> common_unitary_frame(const Tuple& T, const Tol& tol) {
    for (const auto& t : T)
        if (!is_normal(t, tol)) return std::nullopt;
    for (std::size_t i = 0; i < T.size(); ++i)
        for (std::size_t j = i + 1; j < T.size(); ++j)
            if (relation_residual(T[i], T[j], 1.0) > tol.at(1.0)) return std::nullopt;
    Mat F = Mat::identity(2);
    for (const auto& t : T) {
        const auto [a, b] = eig2(t);
        if (std::abs(a.value - b.value) > tol.at(operator_norm(t))) {
            const auto& v = b.vector;
            F = Mat{{v[0], -std::conj(v[1])}, {v[1], std::conj(v[0])}};
            break;
        }
    }
    for (const auto& t : T) {
        const Mat D = adjoint(F) * t * F;
        if (std::abs(D(0, 1)) > 10 * tol.at(1.0) || std::abs(D(1, 0)) > 10 * tol.at(1.0)) return std::nullopt;
    }
    return F;
}

DilationCertificate dilate_normal_commuting(const Tuple& T, const Mat& F, const QFamily& q,
                                            const TruncationConfig& cfg, const Tol& tol) {
    const std::size_t k = T.size();
    std::vector<cplx> x(k), y(k);
    for (std::size_t i = 0; i < k; ++i) {
        const Mat D = adjoint(F) * T[i] * F;
        x[i] = D(0, 0);
        y[i] = D(1, 1);
    }
    BaseAssignment one{std::vector<Mat>(k, Mat::identity(1)), Mat::identity(1)};
    const DilationCertificate a = scalar_tensor_lift(x, one, cfg, tol);
    const DilationCertificate b = scalar_tensor_lift(y, one, cfg, tol);
    DilationCertificate c;
    for (std::size_t i = 0; i < k; ++i) c.U.push_back(blockdiag({a.U[i], b.U[i]}));
    c.V = blockdiag({a.V, b.V}) * adjoint(F);
    c.qIn = q;
    c.qOut = QFamily(k);
    for (std::size_t i = 0; i < k; ++i)
        for (std::size_t j = i + 1; j < k; ++j) c.qOut.set(i, j, QEntry::exact_of(1.0));
    c.cfg = cfg;
    c.route = "commuting normal (scalar lift)";
    c.report = verify_certificate(T, c, cfg.N, tol);
    return c;
}

bool all_minus_one(const QFamily& q) {
    if (q.k() < 2) return false;
    for (const auto& e : q.table())
        if (!e.exact() || std::abs(e.value + 1.0) > kPhaseSlack) return false;
    return true;
}

}  // namespace

GeneralResult dilate_general(const Tuple& T, const TruncationConfig& cfg, const Tol& tol) {
    if (T.empty()) throw DimensionError("dilate_general: empty tuple");
    const std::size_t k = T.size();
    GeneralResult res;
    res.q = detect_family(T, tol);
    const StripResult st = strip_zeros(T, res.q, tol);
    const Tuple& R = st.reduced;

    auto finish = [&](Plan p, const std::string& route) {
        p = expand(std::move(p), st.kept, k);
        res.certificate = realize(p, T, res.q, tol);
        res.route = route;
        return res;
    };

    if (R.empty()) {
        Plan p;
        p.V0 = Mat::identity(2);
        p.cfg = cfg;
        p.route = "all zero";
        return finish(std::move(p), "all zero");
    }
    if (R.size() == 1) return finish(single_plan(R[0], cfg, tol), "single contraction");
    if (all_minus_one(st.q)) return finish(plan_anti(R, cfg, tol), "anti");

    const ClassificationReport rep = classify(R, st.q, tol);
    res.classification = rep;
    const std::vector<bool> mask = rep.canonical ? twisted_mask(*rep.canonical, R.size()) : std::vector<bool>{};

    if (rep.verdict == Verdict::Commuting) {
        const auto F = common_unitary_frame(R, tol);
        if (!F) {
            res.outcome = Outcome::CommutingOutOfScope;
            res.route = "commuting (Holbrook), no certificate";
            return res;
        }
        Tuple full(T);
        res.certificate = dilate_normal_commuting(full, *F, res.q, cfg, tol);
        res.route = "commuting normal";
        return res;
    }

    auto plan_for = [&](const Tuple& forms, const Mat& frame) {
        switch (rep.verdict) {
            case Verdict::TypeI: return plan_lower(forms, mask, frame, cfg, tol);
            case Verdict::TypeII: return plan_upper(forms, mask, frame, cfg, tol);
            default: return plan_anti_diag(forms, mask, frame, cfg, tol);
        }
    };
    const std::string type = to_string(rep.verdict);
    if (rep.unitarilyEquivalent) return finish(plan_for(rep.forms, rep.P), type);

    const SimilarityPlan sp = similarity_plan(rep.P);
    Tuple scaled;
    for (const auto& f : rep.forms) scaled.push_back(cplx(1.0 / sp.beta) * f);
    Plan p = plan_for(scaled, Mat::identity(2));
    res.similarity = sp;
    p = expand(std::move(p), st.kept, k);
    DilationCertificate c;
    {
        BaseAssignment base;
        for (const auto& w : p.words) base.unitaries.push_back(word_unitary(p, w));
        base.V = p.V0;
        c = scalar_tensor_lift(p.weights, base, p.cfg, tol);
        if (p.adjointAll)
            for (auto& U : c.U) U = adjoint(U);
    }
    c.P = sp.P;
    c.scale = sp.beta;
    c.qIn = res.q;
    c.route = type + "/similarity";
    c.report = verify_certificate(T, c, p.cfg.N, tol);
    res.certificate = std::move(c);
    res.route = type + "/similarity";
    return res;
}

}  // namespace qdilate
