#pragma once

#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "qdilate/matcore.hpp"

namespace qdilate {

using Tuple = std::vector<Mat>;

struct QEntry {
    enum class Tag { Exact, Unconstrained };
    Tag tag = Tag::Unconstrained;
    cplx value{1.0, 0.0};  // meaningful iff Exact
    cplx raw{1.0, 0.0};    // value before snapping
    int order = 0;         // root-of-unity order after snapping, 0 when not snapped

    bool exact() const { return tag == Tag::Exact; }
    static QEntry exact_of(cplx q);
    static QEntry unconstrained() { return {}; }
    QEntry inverse() const;
};

class QFamily {
public:
    QFamily() = default;
    explicit QFamily(std::size_t k);

    std::size_t k() const { return k_; }
    // i != j; for i > j the inverse of the stored entry.
    QEntry get(std::size_t i, std::size_t j) const;
    void set(std::size_t i, std::size_t j, const QEntry& e);
    // q value with Unconstrained read as 1.
    cplx value_or_one(std::size_t i, std::size_t j) const;

    const std::vector<QEntry>& table() const { return table_; }
    static std::size_t pair_index(std::size_t i, std::size_t j, std::size_t k);

private:
    std::size_t k_ = 0;
    std::vector<QEntry> table_;  // (i, j), i < j, lexicographic
};

class RelationError : public std::domain_error {
public:
    RelationError(const std::string& what, std::size_t i, std::size_t j)
        : std::domain_error(what), i(i), j(j) {}
    std::size_t i, j;
};

// Smallest order s <= 64 with |q - e^{2 pi i p / s}| <= 1e-7.
QEntry snap_root_of_unity(cplx q);

bool product_is_zero(const Mat& Ti, const Mat& Tj, const Mat& P, const Tol& tol);

std::optional<QEntry> detect_q(const Mat& Ti, const Mat& Tj, const Tol& tol);
QFamily detect_family(const Tuple& T, const Tol& tol);
std::vector<bool> is_doubly_q(const Tuple& T, const QFamily& q, const Tol& tol);
bool check_row_contraction(const Tuple& T, const Tol& tol);

double relation_residual(const Mat& A, const Mat& B, cplx q);

}  // namespace qdilate
