#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "qdilate/qrel.hpp"

namespace qdilate {

enum class AntiKind { Nilpotent, NonInvertible, NormalTriple, GeneralTriple };
const char* to_string(AntiKind k);

constexpr std::size_t kNone = static_cast<std::size_t>(-1);

struct AntiReduction {
    AntiKind kind = AntiKind::Nilpotent;
    Mat frame = Mat::identity(2);  // unitary; columns are the working basis
    std::size_t n = kNone;         // role depends on kind, see below
    std::size_t m = kNone;
    std::vector<cplx> weights;     // one per member
    bool commutingMarker = false;  // every pairwise product vanishes

    // Nilpotent:     T_j = w_j T_n for j != m
    // NonInvertible: n is the singular pivot, T_j = w_j T_m for j != n
    // NormalTriple:  order = (normal, second, third) with |c2| <= |c3|
    // GeneralTriple: order = (0, 1, 2)
    std::vector<std::size_t> order;
    cplx a1 = 0, d1 = 0, lambda = 0, alpha = 0, beta = 0;
    bool normBound = false;  // ||T1|| <= ||T2 T3||
};

class AntiError : public std::domain_error {
public:
    using std::domain_error::domain_error;
};

struct AntiCheck {
    bool ok = true;
    std::string message;
    double residual = 0;
};

inline long theta(long n) { return n * (n - 1) / 2; }

bool is_nilpotent2(const Mat& A, const Tol& tol);
bool is_singular2(const Mat& A, const Tol& tol);
bool is_normal(const Mat& A, const Tol& tol);

AntiCheck assert_anti(const Tuple& T, const Tol& tol);
AntiCheck invertible_bound_check(const Tuple& T, const Tol& tol);

AntiReduction reduce_nilpotent(const Tuple& T, const Tol& tol);
AntiReduction reduce_noninvertible(const Tuple& T, const Tol& tol);
AntiReduction analyze_triple(const Tuple& T, const Tol& tol);

Tuple gen_anti_triple(std::uint64_t seed, double scale);

struct AnticommutantResult {
    std::size_t nullity = 0;
    double maxDet = 0;  // over unit-Frobenius solutions
};
// X with T_i X + X T_i = 0 for every member.
AnticommutantResult anticommutant_solve(const Tuple& T, const Tol& tol);

}  // namespace qdilate
