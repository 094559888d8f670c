#pragma once

#include <optional>
#include <string>
#include <vector>

#include "qdilate/anti.hpp"
#include "qdilate/classify.hpp"
#include "qdilate/pairdilate.hpp"

namespace qdilate {

// Case III bookkeeping: sigma lists member indices group by group,
// (alpha = 1 | alpha = -1 | q_m. = 1 | q_m. = -1).
struct OrderingPlan {
    std::vector<std::size_t> sigma;
    std::size_t i = 0, j = 0, l = 0;  // group ends inside sigma (exclusive)
    std::size_t m = 0;                // pivot of the twisted members

    // exponents are indexed by original member position
    long p(const std::vector<unsigned>& mult) const;
    long t(const std::vector<unsigned>& mult) const;
    long sign_exponent(const std::vector<unsigned>& mult) const;  // theta(n) + p + t
};

struct SimilarityPlan {
    Mat P = Mat::identity(2);
    double beta = 1.0;
};
SimilarityPlan similarity_plan(const Mat& P);

// Per-member unitary on the base space K0 and the isometry H -> K0.
struct BaseAssignment {
    std::vector<Mat> unitaries;
    Mat V;
};

DilationCertificate scalar_tensor_lift(const std::vector<cplx>& weights, const BaseAssignment& base,
                                       const TruncationConfig& cfg, const Tol& tol = Tol{});

OrderingPlan ordering_plan(const Canonical& C, const QFamily& q, std::size_t pivot);

DilationCertificate dilate_type1(const Tuple& T, const QFamily& q, const ClassificationReport& rep,
                                 const TruncationConfig& cfg, const Tol& tol = Tol{});
DilationCertificate dilate_type2(const Tuple& T, const QFamily& q, const TruncationConfig& cfg,
                                 const Tol& tol = Tol{});
DilationCertificate dilate_type3(const Tuple& T, const QFamily& q, const ClassificationReport& rep,
                                 const TruncationConfig& cfg, const Tol& tol = Tol{});
DilationCertificate dilate_anti(const Tuple& T, const TruncationConfig& cfg, const Tol& tol = Tol{});

enum class Outcome { Certified, CommutingOutOfScope };

struct GeneralResult {
    Outcome outcome = Outcome::Certified;
    std::optional<ClassificationReport> classification;
    QFamily q;
    std::optional<DilationCertificate> certificate;
    std::optional<SimilarityPlan> similarity;
    std::string route;
};
GeneralResult dilate_general(const Tuple& T, const TruncationConfig& cfg, const Tol& tol = Tol{});

// Set containment {qOut} within {qIn} + {1} after snapping.
bool qtilde_contained(const QFamily& qIn, const QFamily& qOut);

}  // namespace qdilate
