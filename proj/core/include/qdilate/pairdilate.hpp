#pragma once

#include <optional>
#include <string>
#include <vector>

#include "qdilate/qrel.hpp"

namespace qdilate {

enum class TruncMode { Cyclic, Windowed };
const char* to_string(TruncMode m);

struct TruncationConfig {
    unsigned N = 5;  // certified moment degree
    unsigned M = 0;  // ring / window block count, 0 = choose automatically
    TruncMode mode = TruncMode::Cyclic;
};

// The cyclic Egervary layout with M sites reproduces T^s exactly for s <= M - 1.
constexpr unsigned kSchafferSpanOffset = 1;
inline unsigned schaffer_span(unsigned M) { return M - kSchafferSpanOffset; }
inline unsigned schaffer_sites(unsigned N) { return N + kSchafferSpanOffset; }

constexpr std::size_t kDimensionCap = 4096;

struct VerificationReport {
    double unitarity = 0;  // max ||U_i*U_i - I||_max
    double relation = 0;   // max ||U_iU_j - q U_jU_i||_max over exact qOut entries
    double moment = 0;     // max over the grid of ||V*U^m V - T^m||_max
    double isometry = 0;   // ||V*V - I||_max
    unsigned degree = 0;
    std::size_t gridPoints = 0;
    double tolerance = 0;
    bool edgeDefectAllowed = false;  // Windowed certificates skip unitarity/relations
    bool passed = false;
    std::vector<std::string> failures;
};

struct DilationCertificate {
    std::vector<Mat> U;
    Mat V;
    QFamily qIn;
    QFamily qOut;
    TruncationConfig cfg;
    VerificationReport report;
    // Similarity path: P^{-1} T^m P = V* (scale U)^m V
    std::optional<Mat> P;
    double scale = 1.0;
    // dilate_anti with |beta| > 1: first member is beta U_1
    std::optional<cplx> firstScale;
    std::string route;
};

class DilationError : public std::domain_error {
public:
    using std::domain_error::domain_error;
};

// Root-of-unity order of q (0 if it does not snap).
int root_order(cplx q);
// Block count for a set of twists: at least `minimum`, multiple of every order.
unsigned cyclic_block_count(unsigned minimum, const std::vector<cplx>& twists);

DilationCertificate schaffer(const Mat& T, const TruncationConfig& cfg, const Tol& tol = Tol{});
// Runtime check that R (unitary) intertwines T, T* and both defects with phase q.
void assert_twist(const Mat& R, const Mat& T, cplx q, const Tol& tol);

Mat twisted_diag(const Mat& R, cplx q, const TruncationConfig& cfg, const Tol& tol = Tol{});
DilationCertificate pair_unitary_contraction(const Mat& R, const Mat& T, cplx q,
                                             const TruncationConfig& cfg, const Tol& tol = Tol{});

struct AndoWindow {
    Mat W1, W2, V;
    Mat G;
    unsigned depth = 0;
};
AndoWindow q_ando(const Mat& T1, const Mat& T2, cplx q, unsigned depth, const Tol& tol = Tol{});

DilationCertificate close_to_unitaries(const AndoWindow& w, cplx q, const TruncationConfig& cfg,
                                       const Tol& tol = Tol{});

// Full general-pair engine: q_ando followed by close_to_unitaries.
DilationCertificate q_pair(const Mat& T1, const Mat& T2, cplx q, const TruncationConfig& cfg,
                           const Tol& tol = Tol{});

VerificationReport verify_certificate(const Tuple& T, const DilationCertificate& cert, unsigned N,
                                      const Tol& tol);

// T_1^{m_1} ... T_k^{m_k}
Mat ordered_product(const Tuple& T, const std::vector<unsigned>& m);

}  // namespace qdilate
