#pragma once

#include <cstdint>
#include <random>
#include <string>

#include "qdilate/classify.hpp"

namespace qdilate {

using Rng = std::mt19937_64;

cplx random_unimodular(Rng& rng);
// Primitive-ish root of unity e^{2 pi i p / n} with n in [3, maxOrder], never +-1.
cplx random_root(Rng& rng, int maxOrder = 8);
Mat random_unitary(Rng& rng, std::size_t n);
// Operator norm drawn uniformly from [lo, hi].
Mat random_contraction(Rng& rng, std::size_t n, double lo = 0.1, double hi = 0.95);
// Unit-norm columns, condition number in [1, condMax]; exactly unitary when condMax == 1.
Mat random_invertible(Rng& rng, double condMax);

struct PlantedTuple {
    Tuple T;
    Verdict verdict = Verdict::Commuting;
    Mat P = Mat::identity(2);  // T_i = P C_i P^{-1} up to per-member scaling
    std::string label;
};

enum class Conjugation { Unitary, Similar, Any };

PlantedTuple plant_commuting(std::uint64_t seed, std::size_t k = 3);
PlantedTuple plant_type1(std::uint64_t seed, std::size_t k = 3, Conjugation c = Conjugation::Any,
                         double condMax = 10.0);
PlantedTuple plant_type2(std::uint64_t seed, std::size_t k = 3, Conjugation c = Conjugation::Any,
                         double condMax = 10.0);
PlantedTuple plant_type3(std::uint64_t seed, std::size_t k = 3, Conjugation c = Conjugation::Any,
                         double condMax = 10.0);
// k = 4 with one member in each ordering group: scalar, pivot, q_m. = 1 twist, q_m. = -1 twist.
PlantedTuple plant_type3_groups(std::uint64_t seed);

struct TwistedPair {
    Mat R, T;
    cplx q;
};
// R unitary, T contraction with R T = q T R, both n x n and conjugated by a random unitary.
TwistedPair plant_twisted_pair(std::uint64_t seed, cplx q, std::size_t n = 3);

// Random anti-commuting pair (A B = -B A), contractions.
std::pair<Mat, Mat> random_anti_pair(std::uint64_t seed);

Tuple epsilon_triple(double eps = 0.1);

}  // namespace qdilate
