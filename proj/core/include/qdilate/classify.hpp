#pragma once

#include <optional>
#include <string>
#include <vector>

#include "qdilate/qrel.hpp"

namespace qdilate {

using Index = std::vector<std::size_t>;

struct DiagPartition {
    Index lambda1;  // diagonalizable
    Index lambda2;  // not diagonalizable
};

enum class Verdict { Commuting, TypeI, TypeII, TypeIII };
const char* to_string(Verdict v);

struct StripResult {
    Tuple reduced;
    Index kept;       // original positions of the reduced members
    Index reinserted; // original positions of the dropped zeros
    QFamily q;        // family restricted to the kept members
};

// One canonical record covers all three types; unused scalars stay zero.
struct Canonical {
    cplx a;
    cplx r;
    std::size_t pivot = 0;
    Index eta1;      // includes the pivot
    Index etaTwist;  // eta_r (I), eta_{conj r} (II), eta_{-1} (III)
    // per original index
    std::vector<cplx> c, f, d, e, alpha;
};

struct ClassificationReport {
    Verdict verdict = Verdict::Commuting;
    Mat P = Mat::identity(2);
    std::optional<Canonical> canonical;
    std::vector<Mat> forms;  // idealized canonical matrices, original order
    bool unitarilyEquivalent = true;
    std::vector<std::string> reason;
};

class ClassifyError : public std::domain_error {
public:
    using std::domain_error::domain_error;
};

DiagPartition partition_diag(const Tuple& T, const Tol& tol);
StripResult strip_zeros(const Tuple& T, const QFamily& q, const Tol& tol);
bool commuting_by_spectrum(const Tuple& T, const QFamily& q, const Tol& tol);
ClassificationReport classify(const Tuple& T, const QFamily& q, const Tol& tol);

// max_i ||P^{-1} T_i P - C_i|| / max(||T_i||, tiny)
double round_trip_residual(const Tuple& T, const ClassificationReport& rep);

}  // namespace qdilate
