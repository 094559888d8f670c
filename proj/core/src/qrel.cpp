#include "qdilate/qrel.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

namespace qdilate {

QEntry QEntry::exact_of(cplx q) {
    QEntry e = snap_root_of_unity(q);
    return e;
}

QEntry QEntry::inverse() const {
    if (!exact()) return *this;
    QEntry e = *this;
    e.value = std::conj(value);
    e.raw = 1.0 / raw;
    return e;
}

QFamily::QFamily(std::size_t k) : k_(k), table_(k > 1 ? k * (k - 1) / 2 : 0) {}

std::size_t QFamily::pair_index(std::size_t i, std::size_t j, std::size_t k) {
    // row i contributes k-1-i entries
    return i * (2 * k - i - 1) / 2 + (j - i - 1);
}

QEntry QFamily::get(std::size_t i, std::size_t j) const {
    if (i == j || i >= k_ || j >= k_) throw std::out_of_range("QFamily::get");
    if (i < j) return table_[pair_index(i, j, k_)];
    return table_[pair_index(j, i, k_)].inverse();
}

void QFamily::set(std::size_t i, std::size_t j, const QEntry& e) {
    if (i == j || i >= k_ || j >= k_) throw std::out_of_range("QFamily::set");
    if (i < j) table_[pair_index(i, j, k_)] = e;
    else table_[pair_index(j, i, k_)] = e.inverse();
}

cplx QFamily::value_or_one(std::size_t i, std::size_t j) const {
    const QEntry e = get(i, j);
    return e.exact() ? e.value : cplx(1.0);
}

QEntry snap_root_of_unity(cplx q) {
    QEntry e;
    e.tag = QEntry::Tag::Exact;
    e.raw = q;
    e.value = q / std::abs(q);
    e.order = 0;
    for (int s = 1; s <= 64; ++s) {
        const double ang = std::arg(q) * s / (2 * std::numbers::pi);
        const long p = std::lround(ang);
        const cplx root = std::polar(1.0, 2 * std::numbers::pi * double(p) / s);
        if (std::abs(q - root) <= 1e-7) {
            e.order = s;
            // exact representatives for the common cases
            const long pm = ((p % s) + s) % s;
            if (s == 1) e.value = 1.0;
            else if (s == 2) e.value = -1.0;
            else if (s == 4) e.value = pm == 1 ? cplx(0, 1) : cplx(0, -1);
            else e.value = root;
            break;
        }
    }
    return e;
}

double relation_residual(const Mat& A, const Mat& B, cplx q) {
    return max_abs(mul(A, B) - q * mul(B, A));
}

bool product_is_zero(const Mat& Ti, const Mat& Tj, const Mat& P, const Tol& tol) {
    return fro_norm(P) <= tol.abs + tol.rel * operator_norm(Ti) * operator_norm(Tj);
}

std::optional<QEntry> detect_q(const Mat& Ti, const Mat& Tj, const Tol& tol) {
    if (!Ti.square() || !Tj.square() || Ti.rows() != Tj.rows())
        throw DimensionError("detect_q: members must be square of equal size");
    const Mat AB = mul(Ti, Tj), BA = mul(Tj, Ti);
    if (product_is_zero(Ti, Tj, AB, tol) && product_is_zero(Ti, Tj, BA, tol)) return QEntry::unconstrained();
    const double den = fro_norm(BA) * fro_norm(BA);
    if (den == 0.0) return std::nullopt;
    cplx num = 0;
    for (std::size_t t = 0; t < AB.data().size(); ++t) num += std::conj(BA.data()[t]) * AB.data()[t];
    const cplx q = num / den;
    const double res = operator_norm(AB - q * BA);
    if (res > tol.at(std::max(operator_norm(AB), 1.0))) return std::nullopt;
    if (std::abs(std::abs(q) - 1.0) > tol.at(1.0)) return std::nullopt;
    return snap_root_of_unity(q);
}

QFamily detect_family(const Tuple& T, const Tol& tol) {
    QFamily F(T.size());
    for (std::size_t i = 0; i < T.size(); ++i)
        for (std::size_t j = i + 1; j < T.size(); ++j) {
            auto e = detect_q(T[i], T[j], tol);
            if (!e)
                throw RelationError("no unimodular q fits pair (" + std::to_string(i + 1) + "," +
                                        std::to_string(j + 1) + ")",
                                    i, j);
            F.set(i, j, *e);
        }
    return F;
}

std::vector<bool> is_doubly_q(const Tuple& T, const QFamily& q, const Tol& tol) {
    std::vector<bool> out;
    for (std::size_t i = 0; i < T.size(); ++i)
        for (std::size_t j = i + 1; j < T.size(); ++j) {
            const cplx qij = q.value_or_one(i, j);
            const Mat Tj_ = adjoint(T[j]);
            const double scale = std::max(operator_norm(T[i]) * operator_norm(T[j]), 1.0);
            out.push_back(operator_norm(mul(T[i], Tj_) - std::conj(qij) * mul(Tj_, T[i])) <= tol.at(scale));
        }
    return out;
}

bool check_row_contraction(const Tuple& T, const Tol& tol) {
    if (T.empty()) return true;
    Mat S = Mat::identity(T[0].rows());
    for (const auto& t : T) S = S - mul(adjoint(t), t);
    return herm_eig(S).values.front() >= -tol.at(1.0);
}

}  // namespace qdilate
