#include "qdilate/classify.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

namespace qdilate {

namespace {

constexpr double kPhaseSlack = 1e-7;

bool near(cplx x, cplx y) { return std::abs(x - y) <= kPhaseSlack; }

std::string list(const Index& ix) {
    std::string s = "{";
    for (std::size_t t = 0; t < ix.size(); ++t) s += (t ? "," : "") + std::to_string(ix[t] + 1);
    return s + "}";
}

}  // namespace

const char* to_string(Verdict v) {
    switch (v) {
        case Verdict::Commuting: return "Commuting";
        case Verdict::TypeI: return "TypeI";
        case Verdict::TypeII: return "TypeII";
        case Verdict::TypeIII: return "TypeIII";
    }
    return "?";
}

DiagPartition partition_diag(const Tuple& T, const Tol& tol) {
    DiagPartition p;
    for (std::size_t i = 0; i < T.size(); ++i)
        (diagonalizable2(T[i], tol) ? p.lambda1 : p.lambda2).push_back(i);
    return p;
}

StripResult strip_zeros(const Tuple& T, const QFamily& q, const Tol& tol) {
    double scale = 0;
    for (const auto& t : T) scale = std::max(scale, operator_norm(t));
    StripResult s;
    for (std::size_t i = 0; i < T.size(); ++i) {
        if (operator_norm(T[i]) <= tol.abs + tol.rel * scale) s.reinserted.push_back(i);
        else {
            s.kept.push_back(i);
            s.reduced.push_back(T[i]);
        }
    }
    s.q = QFamily(s.kept.size());
    if (q.k() == T.size())
        for (std::size_t a = 0; a < s.kept.size(); ++a)
            for (std::size_t b = a + 1; b < s.kept.size(); ++b) s.q.set(a, b, q.get(s.kept[a], s.kept[b]));
    return s;
}

bool commuting_by_spectrum(const Tuple& T, const QFamily&, const Tol& tol) {
    for (const auto& t : T) {
        const auto [p1, p2] = eig2(t);
        if (std::abs(p1.value - p2.value) > tol.at(operator_norm(t))) return false;
    }
    return true;
}

ClassificationReport classify(const Tuple& T, const QFamily& q, const Tol& tol) {
    ClassificationReport rep;
    const std::size_t k = T.size();
    for (std::size_t i = 0; i < k; ++i) {
        if (T[i].rows() != 2 || T[i].cols() != 2) throw DimensionError("classify: members must be 2x2");
        if (operator_norm(T[i]) > 1.0 + tol.at(1.0)) throw ContractionError("classify: member " + std::to_string(i + 1) + " is not a contraction");
        if (max_abs(T[i]) == 0.0) throw ClassifyError("classify: zero member; strip zeros first");
    }
    auto commuting = [&](const std::string& why) {
        rep.verdict = Verdict::Commuting;
        rep.reason.push_back(why);
        rep.forms = T;
        return rep;
    };

    const DiagPartition part = partition_diag(T, tol);
    rep.reason.push_back("diagonalizable=" + list(part.lambda1) + " nondiagonalizable=" + list(part.lambda2));
    if (part.lambda1.empty()) return commuting("all_nondiagonalizable");

    struct Spec { std::size_t i; cplx r; };
    std::vector<Spec> twisted;
    for (std::size_t i : part.lambda1) {
        const auto [p1, p2] = eig2(T[i]);
        const double ma = std::abs(p1.value), mb = std::abs(p2.value);
        if (std::abs(ma - mb) > tol.at(std::max(ma, mb))) return commuting("eigen_modulus_split member=" + std::to_string(i + 1));
        if (std::abs(p1.value - p2.value) <= tol.at(std::max(ma, mb))) continue;
        const cplx r = p1.value / p2.value;
        twisted.push_back({i, r / std::abs(r)});
    }
    if (twisted.empty()) return commuting("diagonalizable_all_scalar");

    // Prefer a pivot with r outside {1,-1}; most twisted first, lowest index on ties.
    std::optional<Spec> pivot;
    for (const auto& s : twisted) {
        if (near(s.r, -1.0)) continue;
        if (!pivot || std::abs(std::arg(s.r)) > std::abs(std::arg(pivot->r)) + 1e-12) pivot = s;
    }
    const bool anti = !pivot;
    if (anti) pivot = twisted.front();
    const std::size_t p = pivot->i;

    const auto [lo, hi] = eig2(T[p]);
    Canonical C;
    C.pivot = p;
    C.a = hi.value;  // lexicographically larger eigenvalue
    C.r = anti ? cplx(-1.0) : lo.value / hi.value;
    if (!anti) C.r /= std::abs(C.r);
    rep.reason.push_back(std::string(anti ? "anti_pivot" : "twist_pivot") + " member=" + std::to_string(p + 1));

    std::vector<cplx> va = hi.vector, vb = lo.vector;
    const cplx ip = std::conj(va[0]) * vb[0] + std::conj(va[1]) * vb[1];
    rep.unitarilyEquivalent = std::abs(ip) <= tol.at(1.0);
    if (rep.unitarilyEquivalent) {
        vb = {-std::conj(va[1]), std::conj(va[0])};
        // keep the phase of the computed eigenvector
        const cplx ph = std::conj(vb[0]) * lo.vector[0] + std::conj(vb[1]) * lo.vector[1];
        if (std::abs(ph) > 0) {
            vb[0] *= ph / std::abs(ph);
            vb[1] *= ph / std::abs(ph);
        }
    }
    Mat P{{va[0], vb[0]}, {va[1], vb[1]}};
    const Mat Pi = rep.unitarilyEquivalent ? adjoint(P) : inv2(P);
    const double kappa = operator_norm(P) * operator_norm(Pi);

    C.c.assign(k, 0.0);
    C.f.assign(k, 0.0);
    C.d.assign(k, 0.0);
    C.e.assign(k, 0.0);
    C.alpha.assign(k, 0.0);
    rep.forms.assign(k, Mat::zeros(2, 2));
    bool lower = false, upper = false;

    for (std::size_t j = 0; j < k; ++j) {
        const Mat Cj = mul(Pi, mul(T[j], P));
        const double thr = 10.0 * kappa * tol.at(operator_norm(T[j]));
        auto zero = [&](std::initializer_list<std::pair<int, int>> at) {
            for (auto [r, c] : at)
                if (std::abs(Cj(r, c)) > thr)
                    throw ClassifyError("classify: member " + std::to_string(j + 1) + " does not fit the canonical pattern");
        };
        cplx qj = 1.0;
        if (j != p) {
            const QEntry e = q.get(p, j);
            if (!e.exact()) throw ClassifyError("classify: unconstrained relation against an invertible pivot");
            qj = e.value;
        }
        if (j == p || near(qj, 1.0)) {
            zero({{0, 1}, {1, 0}});
            const cplx c = Cj(0, 0), f = Cj(1, 1);
            if (std::abs(c) <= thr) throw ClassifyError("classify: vanishing diagonal scalar");
            if (std::abs(std::abs(c) - std::abs(f)) > thr) throw ClassifyError("classify: diagonal member with unequal moduli");
            C.eta1.push_back(j);
            C.c[j] = c;
            C.f[j] = f;
            cplx al = f / c;
            al /= std::abs(al);
            if (anti) {
                if (near(al, 1.0)) al = 1.0;
                else if (near(al, -1.0)) al = -1.0;
                else throw ClassifyError("classify: diagonal member ratio outside {1,-1}");
            }
            if (j == p) al = C.r;
            C.alpha[j] = al;
            rep.forms[j] = Mat{{c, 0}, {0, al * c}};
            if (j == p) rep.forms[j] = Mat{{C.a, 0}, {0, C.r * C.a}};
            continue;
        }
        C.etaTwist.push_back(j);
        if (anti) {
            if (!near(qj, -1.0)) throw ClassifyError("classify: relation outside {1,-1} for an anti pivot");
            zero({{0, 0}, {1, 1}});
            C.d[j] = Cj(0, 1);
            C.e[j] = Cj(1, 0);
            rep.forms[j] = Mat{{0, C.d[j]}, {C.e[j], 0}};
        } else if (near(qj, C.r)) {
            zero({{0, 0}, {0, 1}, {1, 1}});
            lower = true;
            C.e[j] = Cj(1, 0);
            rep.forms[j] = Mat{{0, 0}, {C.e[j], 0}};
        } else if (near(qj, std::conj(C.r))) {
            zero({{0, 0}, {1, 0}, {1, 1}});
            upper = true;
            C.d[j] = Cj(0, 1);
            rep.forms[j] = Mat{{0, C.d[j]}, {0, 0}};
        } else {
            throw ClassifyError("classify: relation with the pivot is neither 1, r nor conj(r)");
        }
    }
    if (lower && upper) throw ClassifyError("classify: both r and conj(r) twists present");

    rep.verdict = anti ? Verdict::TypeIII : (upper ? Verdict::TypeII : Verdict::TypeI);
    rep.P = P;
    rep.reason.push_back("eta1=" + list(C.eta1) + " twist=" + list(C.etaTwist));
    rep.canonical = C;
    return rep;
}

double round_trip_residual(const Tuple& T, const ClassificationReport& rep) {
    const Mat Pi = inv2(rep.P);
    double worst = 0;
    for (std::size_t i = 0; i < T.size(); ++i) {
        const double n = std::max(operator_norm(T[i]), 1e-300);
        worst = std::max(worst, operator_norm(mul(Pi, mul(T[i], rep.P)) - rep.forms[i]) / n);
    }
    return worst;
}

}  // namespace qdilate
