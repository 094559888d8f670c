#pragma once

#include <algorithm>
#include <cmath>
#include <functional>
#include <vector>

#include "qdilate/generators.hpp"
#include "qdilate/tupledilate.hpp"

namespace qtest {

using namespace qdilate;

inline double dist(const Mat& A, const Mat& B) { return max_abs(A - B); }

// Calls f on every multi-index of length k with sum <= N.
inline void each_exponent(std::size_t k, unsigned N, const std::function<void(const std::vector<unsigned>&)>& f) {
    std::vector<unsigned> m(k, 0);
    std::function<void(std::size_t, unsigned)> rec = [&](std::size_t i, unsigned left) {
        if (i == k) {
            f(m);
            return;
        }
        for (unsigned e = 0; e <= left; ++e) {
            m[i] = e;
            rec(i + 1, left - e);
        }
        m[i] = 0;
    };
    rec(0, N);
}

// Dense recomputation of every certificate residual; shares no code with verify_certificate.
struct Brute {
    double unitarity = 0, relation = 0, moment = 0, isometry = 0;
    double worst() const { return std::max({unitarity, relation, moment, isometry}); }
};

inline Brute brute_check(const Tuple& T, const DilationCertificate& c, unsigned N) {
    Brute b;
    const std::size_t k = T.size();
    const std::size_t n = c.V.rows();
    const Mat I = Mat::identity(n);
    std::vector<Mat> U = c.U;
    for (std::size_t i = 0; i < k; ++i) {
        cplx s = c.scale;
        if (i == 0 && c.firstScale) s *= *c.firstScale;
        U[i] = s * U[i];
        const Mat G = adjoint(c.U[i]) * c.U[i];
        b.unitarity = std::max(b.unitarity, max_abs(G - I));
    }
    for (std::size_t i = 0; i < k; ++i)
        for (std::size_t j = i + 1; j < k; ++j) {
            const QEntry e = c.qOut.get(i, j);
            if (!e.exact()) continue;
            b.relation = std::max(b.relation, max_abs(c.U[i] * c.U[j] - e.value * (c.U[j] * c.U[i])));
        }
    b.isometry = max_abs(adjoint(c.V) * c.V - Mat::identity(c.V.cols()));
    Tuple target = T;
    if (c.P) {
        const Mat Pi = inv2(*c.P);
        for (auto& t : target) t = Pi * t * *c.P;
    }
    each_exponent(k, N, [&](const std::vector<unsigned>& m) {
        Mat X = c.V;
        Mat S = Mat::identity(T[0].rows());
        for (std::size_t i = k; i-- > 0;)
            for (unsigned e = 0; e < m[i]; ++e) X = U[i] * X;
        for (std::size_t i = 0; i < k; ++i) S = S * power(target[i], m[i]);
        b.moment = std::max(b.moment, max_abs(adjoint(c.V) * X - S));
    });
    return b;
}

inline bool in_set(cplx z, const std::vector<cplx>& s, double slack = 1e-9) {
    return std::any_of(s.begin(), s.end(), [&](cplx w) { return std::abs(z - w) <= slack; });
}

}  // namespace qtest
