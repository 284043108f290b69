/*******************************************************************************
 * Copyright (c) 2026 the spinad developers.
 * All rights reserved.
 *
 * This source code and the accompanying materials are made available under
 * the terms of the Apache License 2.0 which accompanies this distribution.
 ******************************************************************************/
#pragma once

#include <algorithm>
#include <bit>
#include <cmath>
#include <cstdint>
#include <random>
#include <span>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace spinad {

enum class Spin : std::uint8_t { alpha = 0, beta = 1 };

inline char spin_label(Spin s) { return s == Spin::alpha ? 'a' : 'b'; }

/// A spin orbital: spatial orbital index plus spin. Spin orbitals are
/// interleaved in the occupation bitmask, bit 2p for p-alpha and bit 2p+1 for
/// p-beta, so the two spin orbitals of a spatial orbital are adjacent.
struct SpinOrbital {
    int spatial = 0;
    Spin spin = Spin::alpha;

    int linear_index() const { return 2 * spatial + (spin == Spin::beta ? 1 : 0); }

    static SpinOrbital from_linear(int idx) {
        return SpinOrbital{idx / 2, (idx % 2) ? Spin::beta : Spin::alpha};
    }

    std::string str() const { return std::to_string(spatial) + spin_label(spin); }

    friend bool operator==(const SpinOrbital&, const SpinOrbital&) = default;
};

/// Occupation bitmask over 2*n_orb spin orbitals (interleaved convention).
using Determinant = std::uint64_t;

inline constexpr Determinant k_alpha_bits = 0x5555555555555555ULL;

inline int alpha_count(Determinant d) { return std::popcount(d & k_alpha_bits); }
inline int beta_count(Determinant d) { return std::popcount(d & ~k_alpha_bits); }

inline bool occupied(Determinant d, int linear) { return (d >> linear) & 1ULL; }

/// Fermionic phase of creating/annihilating the spin orbital with the given
/// linearized index: (-1)^(number of occupied spin orbitals strictly below).
inline int jordan_wigner_sign(Determinant d, int linear) {
    const Determinant below = d & ((Determinant{1} << linear) - 1);
    return (std::popcount(below) & 1) ? -1 : 1;
}

inline std::uint64_t binomial(int n, int k) {
    if (k < 0 || k > n)
        return 0;
    k = std::min(k, n - k);
    std::uint64_t r = 1;
    for (int i = 1; i <= k; ++i)
        r = r * static_cast<std::uint64_t>(n - k + i) / static_cast<std::uint64_t>(i);
    return r;
}

/// Ordered determinant basis of the (n_alpha, n_beta) particle-number sector
/// of n_orb spatial orbitals. Determinants are unique and sorted ascending by
/// bitmask value, which fixes the matrix representation of every operator.
class SectorBasis {
public:
    SectorBasis() = default;

    SectorBasis(int n_orb, int n_alpha, int n_beta)
        : n_orb_(n_orb), n_alpha_(n_alpha), n_beta_(n_beta) {
        if (n_orb < 0 || n_orb > 30)
            throw std::invalid_argument("SectorBasis: n_orb out of range");
        if (n_alpha < 0 || n_alpha > n_orb || n_beta < 0 || n_beta > n_orb)
            throw std::invalid_argument("SectorBasis: invalid electron counts");
        const auto alpha_masks = spatial_combinations(n_orb, n_alpha);
        const auto beta_masks = spatial_combinations(n_orb, n_beta);
        dets_.reserve(alpha_masks.size() * beta_masks.size());
        for (const auto am : alpha_masks)
            for (const auto bm : beta_masks)
                dets_.push_back(interleave(am, bm));
        std::sort(dets_.begin(), dets_.end());
    }

    int n_orbitals() const { return n_orb_; }
    int n_alpha() const { return n_alpha_; }
    int n_beta() const { return n_beta_; }
    std::size_t size() const { return dets_.size(); }
    Determinant determinant(std::size_t i) const { return dets_[i]; }
    const std::vector<Determinant>& determinants() const { return dets_; }

    /// Index of a determinant in the basis, or -1 when absent.
    std::int64_t index_of(Determinant d) const {
        const auto it = std::lower_bound(dets_.begin(), dets_.end(), d);
        if (it == dets_.end() || *it != d)
            return -1;
        return it - dets_.begin();
    }

    friend bool operator==(const SectorBasis&, const SectorBasis&) = default;

private:
    static std::vector<std::uint32_t> spatial_combinations(int n, int k) {
        std::vector<std::uint32_t> out;
        if (k == 0) {
            out.push_back(0);
            return out;
        }
        // Gosper's hack enumerates k-subsets in increasing mask order.
        std::uint32_t mask = (1u << k) - 1;
        const std::uint32_t limit = 1u << n;
        while (mask < limit) {
            out.push_back(mask);
            const std::uint32_t c = mask & static_cast<std::uint32_t>(-static_cast<std::int32_t>(mask));
            const std::uint32_t r = mask + c;
            mask = (((r ^ mask) >> 2) / c) | r;
        }
        return out;
    }

    static Determinant interleave(std::uint32_t alpha_mask, std::uint32_t beta_mask) {
        Determinant d = 0;
        for (int p = 0; alpha_mask >> p || beta_mask >> p; ++p) {
            if ((alpha_mask >> p) & 1u)
                d |= Determinant{1} << (2 * p);
            if ((beta_mask >> p) & 1u)
                d |= Determinant{1} << (2 * p + 1);
        }
        return d;
    }

    int n_orb_ = 0;
    int n_alpha_ = 0;
    int n_beta_ = 0;
    std::vector<Determinant> dets_;
};

inline SectorBasis build_sector_basis(int n_orb, int n_alpha, int n_beta) {
    return SectorBasis(n_orb, n_alpha, n_beta);
}

/// All (n_alpha, n_beta) sectors of n_orb spatial orbitals, n_alpha-major
/// ascending. This order is the canonical block order for direct sums.
inline std::vector<std::pair<int, int>> all_sectors(int n_orb) {
    std::vector<std::pair<int, int>> out;
    out.reserve(static_cast<std::size_t>((n_orb + 1) * (n_orb + 1)));
    for (int na = 0; na <= n_orb; ++na)
        for (int nb = 0; nb <= n_orb; ++nb)
            out.emplace_back(na, nb);
    return out;
}

/// Real sparse matrix in compressed-row form, columns sorted ascending within
/// each row, no explicitly stored zeros. Rectangular in general; operators on
/// a single sector are square with dim == sector size.
class SparseOperator {
public:
    using Index = std::int32_t;

    struct Triplet {
        Index row;
        Index col;
        double value;
    };

    SparseOperator() : SparseOperator(0, 0) {}

    SparseOperator(Index rows, Index cols) : rows_(rows), cols_(cols), row_start_(rows + 1, 0) {
        if (rows < 0 || cols < 0)
            throw std::invalid_argument("SparseOperator: negative dimension");
    }

    static SparseOperator zero(Index rows, Index cols) { return SparseOperator(rows, cols); }

    static SparseOperator identity(Index n) {
        SparseOperator m(n, n);
        m.col_.resize(n);
        m.val_.assign(n, 1.0);
        for (Index i = 0; i < n; ++i) {
            m.col_[i] = i;
            m.row_start_[i + 1] = i + 1;
        }
        return m;
    }

    static SparseOperator from_triplets(Index rows, Index cols, std::vector<Triplet> t) {
        for (const auto& e : t)
            if (e.row < 0 || e.row >= rows || e.col < 0 || e.col >= cols)
                throw std::invalid_argument("SparseOperator: triplet out of range");
        std::sort(t.begin(), t.end(), [](const Triplet& a, const Triplet& b) {
            return a.row != b.row ? a.row < b.row : a.col < b.col;
        });
        SparseOperator m(rows, cols);
        m.col_.reserve(t.size());
        m.val_.reserve(t.size());
        std::size_t i = 0;
        while (i < t.size()) {
            double v = t[i].value;
            std::size_t j = i + 1;
            while (j < t.size() && t[j].row == t[i].row && t[j].col == t[i].col)
                v += t[j++].value;
            if (v != 0.0) {
                m.col_.push_back(t[i].col);
                m.val_.push_back(v);
                ++m.row_start_[t[i].row + 1];
            }
            i = j;
        }
        for (Index r = 0; r < rows; ++r)
            m.row_start_[r + 1] += m.row_start_[r];
        return m;
    }

    Index rows() const { return rows_; }
    Index cols() const { return cols_; }
    bool is_square() const { return rows_ == cols_; }
    std::size_t nnz() const { return val_.size(); }

    std::span<const Index> row_columns(Index i) const {
        return {col_.data() + row_start_[i], col_.data() + row_start_[i + 1]};
    }
    std::span<const double> row_values(Index i) const {
        return {val_.data() + row_start_[i], val_.data() + row_start_[i + 1]};
    }

    double coeff(Index i, Index j) const {
        const auto cs = row_columns(i);
        const auto it = std::lower_bound(cs.begin(), cs.end(), j);
        if (it == cs.end() || *it != j)
            return 0.0;
        return row_values(i)[it - cs.begin()];
    }

    std::vector<double> apply(std::span<const double> x) const {
        if (static_cast<Index>(x.size()) != cols_)
            throw std::invalid_argument("SparseOperator::apply: dimension mismatch");
        std::vector<double> y(static_cast<std::size_t>(rows_), 0.0);
        for (Index i = 0; i < rows_; ++i) {
            double s = 0.0;
            for (Index k = row_start_[i]; k < row_start_[i + 1]; ++k)
                s += val_[k] * x[static_cast<std::size_t>(col_[k])];
            y[static_cast<std::size_t>(i)] = s;
        }
        return y;
    }

    SparseOperator transposed() const {
        SparseOperator m(cols_, rows_);
        m.col_.resize(nnz());
        m.val_.resize(nnz());
        std::vector<Index> count(cols_ + 1, 0);
        for (const Index c : col_)
            ++count[c + 1];
        for (Index c = 0; c < cols_; ++c)
            count[c + 1] += count[c];
        m.row_start_ = count;
        for (Index i = 0; i < rows_; ++i)
            for (Index k = row_start_[i]; k < row_start_[i + 1]; ++k) {
                const Index pos = count[col_[k]]++;
                m.col_[pos] = i;
                m.val_[pos] = val_[k];
            }
        return m;
    }

    SparseOperator multiply(const SparseOperator& b) const {
        if (cols_ != b.rows_)
            throw std::invalid_argument("SparseOperator::multiply: dimension mismatch");
        SparseOperator m(rows_, b.cols_);
        std::vector<double> acc(static_cast<std::size_t>(b.cols_), 0.0);
        std::vector<Index> touched;
        m.col_.reserve(nnz());
        m.val_.reserve(nnz());
        for (Index i = 0; i < rows_; ++i) {
            touched.clear();
            for (Index k = row_start_[i]; k < row_start_[i + 1]; ++k) {
                const double a = val_[k];
                const Index mid = col_[k];
                for (Index l = b.row_start_[mid]; l < b.row_start_[mid + 1]; ++l) {
                    const Index j = b.col_[l];
                    if (acc[j] == 0.0)
                        touched.push_back(j);
                    acc[j] += a * b.val_[l];
                }
            }
            std::sort(touched.begin(), touched.end());
            for (const Index j : touched) {
                if (acc[j] != 0.0) {
                    m.col_.push_back(j);
                    m.val_.push_back(acc[j]);
                    ++m.row_start_[i + 1];
                }
                acc[j] = 0.0;
            }
        }
        for (Index r = 0; r < rows_; ++r)
            m.row_start_[r + 1] += m.row_start_[r];
        return m;
    }

    /// a*A + b*B with matching shapes.
    static SparseOperator linear_combination(double a, const SparseOperator& A, double b,
                                             const SparseOperator& B) {
        if (A.rows_ != B.rows_ || A.cols_ != B.cols_)
            throw std::invalid_argument("SparseOperator: shape mismatch in linear combination");
        SparseOperator m(A.rows_, A.cols_);
        m.col_.reserve(A.nnz() + B.nnz());
        m.val_.reserve(A.nnz() + B.nnz());
        for (Index i = 0; i < A.rows_; ++i) {
            Index ka = A.row_start_[i], kb = B.row_start_[i];
            const Index ea = A.row_start_[i + 1], eb = B.row_start_[i + 1];
            while (ka < ea || kb < eb) {
                Index j;
                double v;
                if (kb >= eb || (ka < ea && A.col_[ka] < B.col_[kb])) {
                    j = A.col_[ka];
                    v = a * A.val_[ka++];
                } else if (ka >= ea || B.col_[kb] < A.col_[ka]) {
                    j = B.col_[kb];
                    v = b * B.val_[kb++];
                } else {
                    j = A.col_[ka];
                    v = a * A.val_[ka++] + b * B.val_[kb++];
                }
                if (v != 0.0) {
                    m.col_.push_back(j);
                    m.val_.push_back(v);
                    ++m.row_start_[i + 1];
                }
            }
        }
        for (Index r = 0; r < A.rows_; ++r)
            m.row_start_[r + 1] += m.row_start_[r];
        return m;
    }

    SparseOperator scaled(double s) const {
        if (s == 0.0)
            return zero(rows_, cols_);
        SparseOperator m = *this;
        for (double& v : m.val_)
            v *= s;
        return m;
    }

    double max_abs() const {
        double m = 0.0;
        for (const double v : val_)
            m = std::max(m, std::abs(v));
        return m;
    }

    double frobenius_norm() const {
        double s = 0.0;
        for (const double v : val_)
            s += v * v;
        return std::sqrt(s);
    }

    /// Sum_ij A_ij * B_ij, the trace inner product <A, B> = tr(A^T B).
    static double dot(const SparseOperator& A, const SparseOperator& B) {
        if (A.rows_ != B.rows_ || A.cols_ != B.cols_)
            throw std::invalid_argument("SparseOperator::dot: shape mismatch");
        double s = 0.0;
        for (Index i = 0; i < A.rows_; ++i) {
            Index ka = A.row_start_[i], kb = B.row_start_[i];
            const Index ea = A.row_start_[i + 1], eb = B.row_start_[i + 1];
            while (ka < ea && kb < eb) {
                if (A.col_[ka] < B.col_[kb])
                    ++ka;
                else if (B.col_[kb] < A.col_[ka])
                    ++kb;
                else
                    s += A.val_[ka++] * B.val_[kb++];
            }
        }
        return s;
    }

    static double max_abs_diff(const SparseOperator& A, const SparseOperator& B) {
        return linear_combination(1.0, A, -1.0, B).max_abs();
    }

    friend SparseOperator operator+(const SparseOperator& a, const SparseOperator& b) {
        return linear_combination(1.0, a, 1.0, b);
    }
    friend SparseOperator operator-(const SparseOperator& a, const SparseOperator& b) {
        return linear_combination(1.0, a, -1.0, b);
    }
    friend SparseOperator operator*(const SparseOperator& a, const SparseOperator& b) {
        return a.multiply(b);
    }
    friend SparseOperator operator*(double s, const SparseOperator& a) { return a.scaled(s); }

private:
    Index rows_;
    Index cols_;
    std::vector<Index> row_start_;
    std::vector<Index> col_;
    std::vector<double> val_;
};

/// Direct sum of blocks along the diagonal, in the given order.
inline SparseOperator block_diagonal(std::span<const SparseOperator> blocks) {
    SparseOperator::Index rows = 0, cols = 0;
    for (const auto& b : blocks) {
        rows += b.rows();
        cols += b.cols();
    }
    std::vector<SparseOperator::Triplet> t;
    SparseOperator::Index r0 = 0, c0 = 0;
    for (const auto& b : blocks) {
        for (SparseOperator::Index i = 0; i < b.rows(); ++i) {
            const auto cs = b.row_columns(i);
            const auto vs = b.row_values(i);
            for (std::size_t k = 0; k < cs.size(); ++k)
                t.push_back({r0 + i, c0 + cs[k], vs[k]});
        }
        r0 += b.rows();
        c0 += b.cols();
    }
    return SparseOperator::from_triplets(rows, cols, std::move(t));
}

enum class FieldOpKind : std::uint8_t { create, annihilate };

using OperatorString = std::vector<std::pair<FieldOpKind, SpinOrbital>>;

/// Matrix of a single creation or annihilation operator between two sectors
/// that differ by exactly one electron of the matching spin. Entries are the
/// Jordan-Wigner phases, all in {-1, 0, +1}.
inline SparseOperator elementary(FieldOpKind kind, SpinOrbital orb, const SectorBasis& from,
                                 const SectorBasis& to) {
    if (from.n_orbitals() != to.n_orbitals())
        throw std::invalid_argument("elementary: orbital count mismatch between sectors");
    if (orb.spatial < 0 || orb.spatial >= from.n_orbitals())
        throw std::invalid_argument("elementary: spatial orbital out of range");
    const int delta = (kind == FieldOpKind::create) ? 1 : -1;
    const int da = (orb.spin == Spin::alpha) ? delta : 0;
    const int db = (orb.spin == Spin::beta) ? delta : 0;
    if (to.n_alpha() != from.n_alpha() + da || to.n_beta() != from.n_beta() + db)
        throw std::invalid_argument("elementary: sector mismatch for requested operator");

    const int linear = orb.linear_index();
    const Determinant bit = Determinant{1} << linear;
    std::vector<SparseOperator::Triplet> t;
    t.reserve(from.size());
    for (std::size_t j = 0; j < from.size(); ++j) {
        const Determinant d = from.determinant(j);
        if (kind == FieldOpKind::create ? (d & bit) != 0 : (d & bit) == 0)
            continue;
        const int sign = jordan_wigner_sign(d, linear);
        const Determinant dnew = (kind == FieldOpKind::create) ? (d | bit) : (d & ~bit);
        const auto i = to.index_of(dnew);
        if (i < 0)
            throw std::logic_error("elementary: image determinant not in target basis");
        t.push_back({static_cast<SparseOperator::Index>(i), static_cast<SparseOperator::Index>(j),
                     static_cast<double>(sign)});
    }
    return SparseOperator::from_triplets(static_cast<SparseOperator::Index>(to.size()),
                                         static_cast<SparseOperator::Index>(from.size()),
                                         std::move(t));
}

/// Matrix of a normal product of elementary operators on one sector. The
/// string is given in operator order (leftmost factor acts last); it must
/// conserve the electron count of each spin. Impossible intermediates
/// (annihilating an empty orbital, creating an occupied one) contribute zero,
/// so the result is well defined on every sector.
inline SparseOperator compose_number_conserving(std::span<const std::pair<FieldOpKind, SpinOrbital>> factors,
                                                const SectorBasis& basis) {
    int net_alpha = 0, net_beta = 0;
    for (const auto& [kind, orb] : factors) {
        if (orb.spatial < 0 || orb.spatial >= basis.n_orbitals())
            throw std::invalid_argument("compose_number_conserving: orbital out of range");
        const int delta = (kind == FieldOpKind::create) ? 1 : -1;
        (orb.spin == Spin::alpha ? net_alpha : net_beta) += delta;
    }
    if (net_alpha != 0 || net_beta != 0)
        throw std::invalid_argument("compose_number_conserving: string does not conserve electron counts");

    const auto n = static_cast<SparseOperator::Index>(basis.size());
    std::vector<SparseOperator::Triplet> t;
    for (SparseOperator::Index j = 0; j < n; ++j) {
        Determinant d = basis.determinant(static_cast<std::size_t>(j));
        int sign = 1;
        bool dead = false;
        for (auto it = factors.rbegin(); it != factors.rend(); ++it) {
            const int linear = it->second.linear_index();
            const Determinant bit = Determinant{1} << linear;
            if (it->first == FieldOpKind::create ? (d & bit) != 0 : (d & bit) == 0) {
                dead = true;
                break;
            }
            sign *= jordan_wigner_sign(d, linear);
            d = (it->first == FieldOpKind::create) ? (d | bit) : (d & ~bit);
        }
        if (dead)
            continue;
        const auto i = basis.index_of(d);
        if (i < 0)
            throw std::logic_error("compose_number_conserving: image left the sector");
        t.push_back({static_cast<SparseOperator::Index>(i), j, static_cast<double>(sign)});
    }
    return SparseOperator::from_triplets(n, n, std::move(t));
}

inline SparseOperator compose_number_conserving(const OperatorString& factors,
                                                const SectorBasis& basis) {
    return compose_number_conserving(std::span<const std::pair<FieldOpKind, SpinOrbital>>(factors),
                                     basis);
}

// Small dense-vector helpers used throughout the test and driver code.

inline double dot(std::span<const double> a, std::span<const double> b) {
    double s = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i)
        s += a[i] * b[i];
    return s;
}

inline double norm2(std::span<const double> a) { return std::sqrt(dot(a, a)); }

inline void axpy(double a, std::span<const double> x, std::span<double> y) {
    for (std::size_t i = 0; i < x.size(); ++i)
        y[i] += a * x[i];
}

inline std::vector<double> random_unit_vector(std::size_t dim, std::mt19937_64& rng) {
    std::normal_distribution<double> gauss(0.0, 1.0);
    std::vector<double> v(dim);
    double n = 0.0;
    while (n == 0.0) {
        for (auto& x : v)
            x = gauss(rng);
        n = norm2(v);
    }
    for (auto& x : v)
        x /= n;
    return v;
}

} // namespace spinad
