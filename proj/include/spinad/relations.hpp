/*******************************************************************************
 * Copyright (c) 2026 the spinad developers.
 * All rights reserved.
 *
 * This source code and the accompanying materials are made available under
 * the terms of the Apache License 2.0 which accompanies this distribution.
 ******************************************************************************/
#pragma once

#include <array>
#include <mutex>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include "spinad/fock.hpp"

namespace spinad {

/// Closed-form family of a generator: the shape of its minimal polynomial
/// relation and therefore of its exact exponential.
///   cubic          G^3 = -G                    (fermionic singles/doubles, paired double)
///   sa_single_pair product of two commuting cubic factors (spin-summed single)
///   quintic        G^5 = -1/2 G - 3/2 G^3      (aiaj and aibi doubles)
///   ninth          degree-9 relation           (aibj, singlet intermediate)
///   eleventh       degree-11 relation          (aibj, triplet intermediate)
enum class ClosedFormFamily { cubic, sa_single_pair, quintic, ninth, eleventh };

inline std::string to_string(ClosedFormFamily f) {
    switch (f) {
    case ClosedFormFamily::cubic: return "cubic";
    case ClosedFormFamily::sa_single_pair: return "sa_single_pair";
    case ClosedFormFamily::quintic: return "quintic";
    case ClosedFormFamily::ninth: return "ninth";
    case ClosedFormFamily::eleventh: return "eleventh";
    }
    return "?";
}

/// Odd polynomial relation G^order = sum_j coefficients[j] G^(2j+1),
/// j = 0..m-1, order = 2m+1.
struct PolynomialRelation {
    int order = 3;
    std::vector<double> coefficients;

    int half_degree() const { return static_cast<int>(coefficients.size()); }
};

/// One frequency row of a closed-form exponential: k[p-1] multiplies G^p,
/// attached to sin(S theta) for odd p and to cos(S theta) - 1 for even p.
struct ClosedFormEntry {
    double frequency = 0.0;
    std::vector<double> k;
};

/// Full coefficient set of exp(theta G) = I + sum_p f_p(theta) G^p with
///   f_p(theta) = sum_n k_n^(p) sin(S_n theta)        (p odd)
///   f_p(theta) = sum_n k_n^(p) (cos(S_n theta) - 1)  (p even)
/// Entries are sorted by descending frequency.
struct ClosedFormCoefficients {
    int half_degree = 0; // m; there are m entries and 2m amplitudes per entry
    std::vector<ClosedFormEntry> entries;
};

namespace detail {

/// Extended-precision CSR matrix used internally when precomputing generator
/// powers and evaluating the closed form. The trigonometric amplitudes grow
/// into the hundreds for the high-degree families and largely cancel, so the
/// evaluation pipeline keeps long double until the final result.
struct LongSparse {
    SparseOperator::Index rows = 0;
    SparseOperator::Index cols = 0;
    std::vector<SparseOperator::Index> row_start{0};
    std::vector<SparseOperator::Index> col;
    std::vector<long double> val;

    static LongSparse from(const SparseOperator& s) {
        LongSparse m;
        m.rows = s.rows();
        m.cols = s.cols();
        m.row_start.assign(static_cast<std::size_t>(s.rows()) + 1, 0);
        m.col.reserve(s.nnz());
        m.val.reserve(s.nnz());
        for (SparseOperator::Index i = 0; i < s.rows(); ++i) {
            const auto cs = s.row_columns(i);
            const auto vs = s.row_values(i);
            for (std::size_t k = 0; k < cs.size(); ++k) {
                m.col.push_back(cs[k]);
                m.val.push_back(static_cast<long double>(vs[k]));
            }
            m.row_start[static_cast<std::size_t>(i) + 1] =
                static_cast<SparseOperator::Index>(m.col.size());
        }
        return m;
    }

    LongSparse multiply(const LongSparse& b) const {
        LongSparse m;
        m.rows = rows;
        m.cols = b.cols;
        m.row_start.assign(static_cast<std::size_t>(rows) + 1, 0);
        std::vector<long double> acc(static_cast<std::size_t>(b.cols), 0.0L);
        std::vector<SparseOperator::Index> touched;
        for (SparseOperator::Index i = 0; i < rows; ++i) {
            touched.clear();
            for (SparseOperator::Index k = row_start[i]; k < row_start[i + 1]; ++k) {
                const long double a = val[static_cast<std::size_t>(k)];
                const SparseOperator::Index mid = col[static_cast<std::size_t>(k)];
                for (SparseOperator::Index l = b.row_start[mid]; l < b.row_start[mid + 1]; ++l) {
                    const auto j = b.col[static_cast<std::size_t>(l)];
                    if (acc[static_cast<std::size_t>(j)] == 0.0L)
                        touched.push_back(j);
                    acc[static_cast<std::size_t>(j)] += a * b.val[static_cast<std::size_t>(l)];
                }
            }
            std::sort(touched.begin(), touched.end());
            for (const auto j : touched) {
                if (acc[static_cast<std::size_t>(j)] != 0.0L) {
                    m.col.push_back(j);
                    m.val.push_back(acc[static_cast<std::size_t>(j)]);
                }
                acc[static_cast<std::size_t>(j)] = 0.0L;
            }
            m.row_start[static_cast<std::size_t>(i) + 1] =
                static_cast<SparseOperator::Index>(m.col.size());
        }
        return m;
    }

    SparseOperator rounded() const {
        std::vector<SparseOperator::Triplet> t;
        t.reserve(val.size());
        for (SparseOperator::Index i = 0; i < rows; ++i)
            for (SparseOperator::Index k = row_start[i]; k < row_start[i + 1]; ++k)
                t.push_back({i, col[static_cast<std::size_t>(k)],
                             static_cast<double>(val[static_cast<std::size_t>(k)])});
        return SparseOperator::from_triplets(rows, cols, std::move(t));
    }

    void apply_into(std::span<const long double> x, std::span<long double> y) const {
        for (SparseOperator::Index i = 0; i < rows; ++i) {
            long double s = 0.0L;
            for (SparseOperator::Index k = row_start[i]; k < row_start[i + 1]; ++k)
                s += val[static_cast<std::size_t>(k)] * x[static_cast<std::size_t>(col[static_cast<std::size_t>(k)])];
            y[static_cast<std::size_t>(i)] = s;
        }
    }
};

/// Long-double closed-form table (frequencies descending, k[q][p-1]).
struct ClosedFormTable {
    int half_degree = 0;
    std::vector<long double> frequency;
    std::vector<std::vector<long double>> k;
};

} // namespace detail

/// Per-generator cache for apply_exponential: coefficients and sparse powers
/// are computed once under the flag and immutable afterwards.
struct ExpWorkspace {
    std::once_flag once;
    detail::ClosedFormTable table;
    std::vector<detail::LongSparse> powers;                     // G^1 .. G^2m
    std::array<std::vector<detail::LongSparse>, 2> part_powers; // sa_single: part, part^2
};

/// Coefficients a_1..a_5 of the low-power identity
///   G = a_1 G^3 + a_2 G^5 + a_3 G^7 + a_4 G^9 + a_5 G^11
/// satisfied by the triplet-intermediate doubles; the eleventh-order
/// relation below is this identity solved for G^11.
inline constexpr std::array<double, 5> k_eleventh_low_power_form = {
    -113.0 / 6.0, -587.0 / 6.0, -613.0 / 3.0, -176.0, -48.0};

namespace detail {

/// Family relation coefficients at extended precision. The eleventh family
/// has non-dyadic fractions whose double rounding would already cost ~2e-12
/// in the synthesized amplitudes of the closest-frequency rows.
inline std::vector<long double> family_relation_ld(ClosedFormFamily f) {
    switch (f) {
    case ClosedFormFamily::cubic:
        return {-1.0L};
    case ClosedFormFamily::sa_single_pair:
        return {-1.0L, -2.5L};
    case ClosedFormFamily::quintic:
        return {-0.5L, -1.5L};
    case ClosedFormFamily::ninth:
        return {-1.0L / 4.0L, -15.0L / 8.0L, -35.0L / 8.0L, -15.0L / 4.0L};
    case ClosedFormFamily::eleventh:
        // Solving G = a1 G^3 + ... + a5 G^11 for G^11 gives
        // G^11 = (1/a5) G - (a1/a5) G^3 - (a2/a5) G^5 - (a3/a5) G^7 - (a4/a5) G^9.
        return {-1.0L / 48.0L, -113.0L / 288.0L, -587.0L / 288.0L, -613.0L / 144.0L,
                -11.0L / 3.0L};
    }
    throw std::invalid_argument("family_relation: unknown family");
}

} // namespace detail

/// The family's polynomial relation. The sa_single_pair entry is the quintic
/// variant satisfied by the spin-summed single (frequencies sqrt(2) and
/// sqrt(2)/2 of the commuting-pair spectrum).
inline PolynomialRelation family_relation(ClosedFormFamily f) {
    const auto ld = detail::family_relation_ld(f);
    PolynomialRelation rel;
    rel.order = 2 * static_cast<int>(ld.size()) + 1;
    rel.coefficients.reserve(ld.size());
    for (const long double c : ld)
        rel.coefficients.push_back(static_cast<double>(c));
    return rel;
}

} // namespace spinad
