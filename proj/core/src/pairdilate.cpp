#include "qdilate/pairdilate.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "qdilate/sparse.hpp"

namespace qdilate {

namespace {

constexpr double kPhaseSlack = 1e-7;
// Truncation of the embedded space in the cyclic closure stops once ||A^t|| drops below this.
constexpr double kTailCutoff = 1e-15;
constexpr unsigned kTailLimit = 400;

void put_block(Mat& A, std::size_t r0, std::size_t c0, const Mat& B, cplx s = 1.0) {
    for (std::size_t i = 0; i < B.rows(); ++i)
        for (std::size_t j = 0; j < B.cols(); ++j) A(r0 + i, c0 + j) += s * B(i, j);
}

Mat get_block(const Mat& A, std::size_t r0, std::size_t c0, std::size_t r, std::size_t c) {
    Mat B(r, c);
    for (std::size_t i = 0; i < r; ++i)
        for (std::size_t j = 0; j < c; ++j) B(i, j) = A(r0 + i, c0 + j);
    return B;
}

Mat site_embedding(std::size_t dim, std::size_t n) {
    Mat V(dim, n);
    for (std::size_t i = 0; i < n; ++i) V(i, i) = 1.0;
    return V;
}

void check_cap(std::size_t dim, const char* who) {
    if (dim > kDimensionCap)
        throw DilationError(std::string(who) + ": dimension " + std::to_string(dim) + " exceeds cap " +
                            std::to_string(kDimensionCap));
}

bool periodic(cplx q, unsigned M) { return std::abs(std::pow(q, static_cast<double>(M)) - 1.0) <= kPhaseSlack; }

cplx ipow(cplx z, unsigned e) {
    cplx r = 1.0;
    for (unsigned i = 0; i < e; ++i) r *= z;
    return r;
}

QFamily pair_family(cplx q) {
    QFamily f(2);
    f.set(0, 1, QEntry::exact_of(q));
    return f;
}

}  // namespace

const char* to_string(TruncMode m) { return m == TruncMode::Cyclic ? "cyclic" : "windowed"; }

int root_order(cplx q) {
    const QEntry e = snap_root_of_unity(q);
    return e.order;
}

unsigned cyclic_block_count(unsigned minimum, const std::vector<cplx>& twists) {
    unsigned l = 1;
    for (cplx q : twists) {
        const int s = root_order(q);
        if (s <= 0) throw DilationError("cyclic_block_count: twist is not a root of unity");
        l = std::lcm(l, static_cast<unsigned>(s));
    }
    const unsigned m = std::max(minimum, 2u);
    return ((m + l - 1) / l) * l;
}

Mat ordered_product(const Tuple& T, const std::vector<unsigned>& m) {
    if (T.empty()) throw DimensionError("ordered_product: empty tuple");
    Mat P = Mat::identity(T[0].rows());
    for (std::size_t i = 0; i < T.size(); ++i)
        for (unsigned e = 0; e < m[i]; ++e) P = mul(P, T[i]);
    return P;
}

DilationCertificate schaffer(const Mat& T, const TruncationConfig& cfg, const Tol& tol) {
    if (!T.square()) throw DimensionError("schaffer: non-square input");
    if (operator_norm(T) > 1.0 + tol.at(1.0)) throw ContractionError("schaffer: input is not a contraction");
    const std::size_t n = T.rows();
    const unsigned M = cfg.M ? cfg.M : schaffer_sites(cfg.N);
    if (M < 2) throw DilationError("schaffer: at least two sites required");
    if (schaffer_span(M) < cfg.N) throw DilationError("schaffer: block count too small for degree");
    check_cap(M * n, "schaffer");

    const Mat Ts = adjoint(T);
    Mat U(M * n, M * n);
    put_block(U, 0, 0, T);
    put_block(U, n, 0, defect(T, tol));
    put_block(U, 0, (M - 1) * n, defect(Ts, tol));
    put_block(U, n, (M - 1) * n, Ts, -1.0);
    for (unsigned j = 1; j + 1 < M; ++j) put_block(U, (j + 1) * n, j * n, Mat::identity(n));

    DilationCertificate c;
    c.U = {std::move(U)};
    c.V = site_embedding(M * n, n);
    c.qIn = QFamily(1);
    c.qOut = QFamily(1);
    c.cfg = cfg;
    c.cfg.M = M;
    c.route = "schaffer";
    c.report = verify_certificate({T}, c, cfg.N, tol);
    return c;
}

Mat twisted_diag(const Mat& R, cplx q, const TruncationConfig& cfg, const Tol& tol) {
    if (!R.square()) throw DimensionError("twisted_diag: non-square input");
    if (unitarity_residual(R) > tol.at(1.0)) throw DilationError("twisted_diag: R is not unitary");
    const unsigned M = cfg.M ? cfg.M : schaffer_sites(cfg.N);
    if (cfg.mode == TruncMode::Cyclic && !periodic(q, M))
        throw DilationError("twisted_diag: q^M != 1 in cyclic mode");
    check_cap(M * R.rows(), "twisted_diag");
    const std::size_t n = R.rows();
    Mat D(M * n, M * n);
    cplx ph = 1.0;
    for (unsigned j = 0; j < M; ++j, ph *= q) put_block(D, j * n, j * n, R, ph);
    return D;
}

void assert_twist(const Mat& R, const Mat& T, cplx q, const Tol& tol) {
    if (unitarity_residual(R) > tol.at(1.0)) throw DilationError("twist: R is not unitary");
    const double scale = std::max(1.0, operator_norm(T));
    if (relation_residual(R, T, q) > tol.at(scale)) throw RelationError("twist: R T != q T R", 0, 1);
    const Mat DT = defect(T, tol), DTs = defect(adjoint(T), tol);
    const double slack = std::max(tol.at(1.0), kPhaseSlack);
    if (max_abs(R * DT - DT * R) > slack || max_abs(R * DTs - DTs * R) > slack ||
        max_abs(R * adjoint(T) - std::conj(q) * (adjoint(T) * R)) > slack)
        throw DilationError("twist: R fails to intertwine the defects");
}

DilationCertificate pair_unitary_contraction(const Mat& R, const Mat& T, cplx q, const TruncationConfig& cfg,
                                             const Tol& tol) {
    if (R.rows() != T.rows() || !R.square() || !T.square())
        throw DimensionError("pair_unitary_contraction: shape mismatch");
    assert_twist(R, T, q, tol);

    TruncationConfig c2 = cfg;
    if (!c2.M)
        c2.M = cfg.mode == TruncMode::Cyclic ? cyclic_block_count(schaffer_sites(cfg.N), {q}) : schaffer_sites(cfg.N);
    const DilationCertificate s = schaffer(T, c2, tol);
    DilationCertificate c;
    c.U = {twisted_diag(R, q, c2, tol), s.U[0]};
    c.V = s.V;
    c.qIn = pair_family(q);
    c.qOut = pair_family(q);
    c.cfg = c2;
    c.route = "pair_unitary_contraction";
    c.report = verify_certificate({R, T}, c, cfg.N, tol);
    return c;
}

AndoWindow q_ando(const Mat& T1, const Mat& T2, cplx q, unsigned depth, const Tol& tol) {
    if (T1.rows() != T2.rows() || !T1.square() || !T2.square()) throw DimensionError("q_ando: shape mismatch");
    if (depth < 2) throw DilationError("q_ando: depth must be at least 2");
    const std::size_t n = T1.rows();
    const double scale = std::max(1.0, operator_norm(T1) * operator_norm(T2));
    if (relation_residual(T1, T2, q) > tol.at(scale)) throw RelationError("q_ando: T1 T2 != q T2 T1", 0, 1);

    const Mat D1 = defect(T1, tol), D2 = defect(T2, tol);
    Mat F(4 * n, n), Fp(4 * n, n);
    put_block(F, 0, 0, D1 * T2);
    put_block(F, 2 * n, 0, D2);
    put_block(Fp, 0, 0, D2 * T1);
    put_block(Fp, 2 * n, 0, D1);
    Mat G;
    try {
        G = unitary_completion(F, Fp, tol);
    } catch (const std::domain_error& e) {
        throw RelationError(std::string("q_ando: defect Gram mismatch (") + e.what() + ")", 0, 1);
    }

    const std::size_t pos = 1 + 4 * static_cast<std::size_t>(depth);
    const std::size_t K = pos * n;
    check_cap(K, "q_ando");
    auto elementary = [&](const Mat& T, const Mat& D) {
        Mat W(K, K);
        put_block(W, 0, 0, T);
        put_block(W, n, 0, D);
        for (std::size_t p = 1; p + 2 < pos; ++p) put_block(W, (p + 2) * n, p * n, Mat::identity(n));
        return W;
    };
    Mat Gh(K, K);
    put_block(Gh, 0, 0, Mat::identity(n));
    cplx ph = q;
    for (unsigned g = 0; g < depth; ++g, ph *= q) put_block(Gh, n + 4 * n * g, n + 4 * n * g, G, ph);

    AndoWindow w;
    w.W1 = Gh * elementary(T1, D1);
    w.W2 = elementary(T2, D2) * adjoint(Gh);
    w.V = site_embedding(K, n);
    w.G = std::move(G);
    w.depth = depth;
    return w;
}

DilationCertificate close_to_unitaries(const AndoWindow& w, cplx q, const TruncationConfig& cfg, const Tol& tol) {
    const std::size_t n = w.V.cols();
    const std::size_t K = w.V.rows();
    const Mat Vs = adjoint(w.V);
    const Mat T1 = Vs * w.W1 * w.V, T2 = Vs * w.W2 * w.V;

    DilationCertificate c;
    c.qIn = pair_family(q);
    c.qOut = pair_family(q);
    c.cfg = cfg;
    if (cfg.mode == TruncMode::Windowed) {
        c.U = {w.W1, w.W2};
        c.V = w.V;
        c.cfg.M = w.depth;
        c.route = "q_ando/windowed";
        c.report = verify_certificate({T1, T2}, c, cfg.N, tol);
        return c;
    }
    if (root_order(q) <= 0) throw DilationError("close_to_unitaries: phase ladder infeasible, q is not a root of unity");
    if (w.depth < 3) throw DilationError("close_to_unitaries: window too shallow");

    // Wold picture of the product isometry P = W1 W2: wandering space Wd = (H + first group) minus P(H).
    const Mat P = w.W1 * w.W2;
    const Mat Ps = adjoint(P);
    const std::size_t top = 5 * n;
    const Mat head = get_block(P * w.V, 0, 0, top, n);
    const Mat basis = orthonormal_extension(head, 1e-10);
    if (basis.cols() != top) throw DilationError("close_to_unitaries: degenerate head column");
    const std::size_t wd = top - n;
    Mat J(K, wd);
    for (std::size_t i = 0; i < top; ++i)
        for (std::size_t j = 0; j < wd; ++j) J(i, j) = basis(i, n + j);
    const Mat Js = adjoint(J);

    // W1 on Wd expands as Theta_0 + P Theta_1; analyticity forces higher terms to vanish.
    Mat X = w.W1 * J;
    const Mat Th0 = Js * X;
    X = Ps * X;
    const Mat Th1 = Js * X;
    X = Ps * X;
    if (max_abs(Js * X) > 1e-8) throw DilationError("close_to_unitaries: symbol has degree above one");

    // Coordinates of H along P^t Wd.
    const Mat A = Vs * P * w.V;
    std::vector<Mat> xi;
    Mat Y = w.V;
    Mat Ak = Mat::identity(n);
    while (true) {
        xi.push_back(Js * Y);
        Y = Ps * Y;
        Ak = Ak * A;
        if (operator_norm(Ak) <= kTailCutoff) break;
        if (xi.size() >= kTailLimit) throw DilationError("close_to_unitaries: product is not pure enough to truncate");
    }
    const unsigned M0 = static_cast<unsigned>(xi.size());

    const unsigned L = cyclic_block_count(std::max(cfg.M, M0 + cfg.N + 1), {q});
    const std::size_t dim = static_cast<std::size_t>(L) * wd;
    check_cap(dim, "close_to_unitaries");

    Mat U1(dim, dim), S(dim, dim);
    cplx ph = 1.0;
    for (unsigned j = 0; j < L; ++j, ph *= q) {
        const std::size_t next = (j + 1) % L;
        put_block(U1, j * wd, j * wd, Th0, ph);
        put_block(U1, next * wd, j * wd, Th1, ph);
        put_block(S, next * wd, j * wd, Mat::identity(wd));
    }
    Mat Vemb(dim, n);
    for (unsigned t = 0; t < M0; ++t) put_block(Vemb, t * wd, 0, xi[t]);

    c.U = {U1, adjoint(U1) * S};
    c.V = std::move(Vemb);
    c.cfg.M = L;
    c.route = "q_ando/cyclic";
    c.report = verify_certificate({T1, T2}, c, cfg.N, tol);
    (void)K;
    return c;
}

DilationCertificate q_pair(const Mat& T1, const Mat& T2, cplx q, const TruncationConfig& cfg, const Tol& tol) {
    const unsigned depth = cfg.mode == TruncMode::Windowed ? std::max(3u, cfg.N + 2) : 3u;
    const AndoWindow w = q_ando(T1, T2, q, depth, tol);
    DilationCertificate c = close_to_unitaries(w, q, cfg, tol);
    c.report = verify_certificate({T1, T2}, c, cfg.N, tol);
    return c;
}

VerificationReport verify_certificate(const Tuple& T, const DilationCertificate& cert, unsigned N, const Tol& tol) {
    VerificationReport rep;
    rep.degree = N;
    rep.tolerance = tol.at(1.0);
    rep.edgeDefectAllowed = cert.cfg.mode == TruncMode::Windowed;
    const std::size_t k = T.size();
    if (k == 0 || cert.U.size() != k) {
        rep.failures.push_back("operator count mismatch");
        return rep;
    }
    const std::size_t n = T[0].rows();
    const std::size_t dim = cert.U[0].rows();
    for (const auto& U : cert.U)
        if (U.rows() != dim || U.cols() != dim) {
            rep.failures.push_back("operator shape mismatch");
            return rep;
        }
    if (cert.V.rows() != dim || cert.V.cols() != n) {
        rep.failures.push_back("isometry shape mismatch");
        return rep;
    }

    std::vector<SpMat> S;
    S.reserve(k);
    for (const auto& U : cert.U) S.push_back(SpMat::from(U));

    for (const auto& s : S) rep.unitarity = std::max(rep.unitarity, sp_unitarity_residual(s));
    if (cert.qOut.k() == k)
        for (std::size_t i = 0; i < k; ++i)
            for (std::size_t j = i + 1; j < k; ++j) {
                const QEntry e = cert.qOut.get(i, j);
                if (!e.exact()) continue;
                rep.relation = std::max(rep.relation, sp_max_diff(sp_mul(S[i], S[j]), sp_mul(S[j], S[i]), e.value));
            }
    rep.isometry = max_abs(adjoint(cert.V) * cert.V - Mat::identity(n));

    // Targets in the frame the certificate speaks about.
    Tuple target = T;
    if (cert.P) {
        const Mat Pi = inv2(*cert.P);
        for (auto& t : target) t = Pi * t * *cert.P;
    }
    std::vector<cplx> factor(k, cert.scale);
    if (cert.firstScale) factor[0] *= *cert.firstScale;

    // Depth-first over exponents, applying U_k first so prefixes are shared.
    std::vector<std::vector<cplx>> cols(n, std::vector<cplx>(dim));
    for (std::size_t j = 0; j < n; ++j)
        for (std::size_t i = 0; i < dim; ++i) cols[j][i] = cert.V(i, j);
    std::vector<unsigned> m(k, 0);
    std::vector<Mat> tPow(k);
    auto leaf = [&](const std::vector<std::vector<cplx>>& X) {
        Mat ref = ordered_product(target, m);
        cplx f = 1.0;
        for (std::size_t i = 0; i < k; ++i) f *= ipow(factor[i], m[i]);
        double worst = 0;
        for (std::size_t r = 0; r < n; ++r)
            for (std::size_t cidx = 0; cidx < n; ++cidx) {
                cplx s = 0;
                for (std::size_t i = 0; i < dim; ++i) s += std::conj(cert.V(i, r)) * X[cidx][i];
                worst = std::max(worst, std::abs(f * s - ref(r, cidx)));
            }
        rep.moment = std::max(rep.moment, worst);
        ++rep.gridPoints;
    };
    auto rec = [&](auto&& self, std::size_t level, unsigned budget, std::vector<std::vector<cplx>> X) -> void {
        const std::size_t i = level;  // operator index being exponentiated
        for (unsigned e = 0;; ++e) {
            m[i] = e;
            if (i == 0)
                leaf(X);
            else
                self(self, i - 1, budget - e, X);
            if (e == budget) break;
            for (auto& col : X) col = S[i].apply(col);
        }
        m[i] = 0;
    };
    rec(rec, k - 1, N, cols);

    const double lim = rep.tolerance;
    if (!rep.edgeDefectAllowed) {
        if (rep.unitarity > lim) rep.failures.push_back("unitarity residual " + std::to_string(rep.unitarity));
        if (rep.relation > lim) rep.failures.push_back("relation residual " + std::to_string(rep.relation));
    }
    if (rep.isometry > lim) rep.failures.push_back("isometry residual " + std::to_string(rep.isometry));
    if (rep.moment > lim) rep.failures.push_back("moment residual " + std::to_string(rep.moment));
    rep.passed = rep.failures.empty();
    return rep;
}

}  // namespace qdilate
