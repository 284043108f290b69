/*******************************************************************************
 * Copyright (c) 2026 the spinad developers.
 * All rights reserved.
 *
 * This source code and the accompanying materials are made available under
 * the terms of the Apache License 2.0 which accompanies this distribution.
 ******************************************************************************/
#pragma once

#include <algorithm>
#include <cmath>
#include <complex>
#include <mutex>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include "spinad/errors.hpp"
#include "spinad/fock.hpp"
#include "spinad/operators.hpp"
#include "spinad/relations.hpp"
#include "spinad/tolerances.hpp"

// Minimal-polynomial relations of the excitation generators, synthesis of the
// closed-form exponential coefficients from a relation, the reference tables,
// and application of exp(theta G) through the truncated polynomial form.

namespace spinad {

/// G^1 .. G^max_power. Products are accumulated in extended precision and
/// rounded once per entry, so high powers carry single-rounding errors only.
inline std::vector<SparseOperator> operator_powers(const SparseOperator& g, int max_power) {
    if (!g.is_square())
        throw std::invalid_argument("operator_powers: matrix must be square");
    const auto base = detail::LongSparse::from(g);
    std::vector<SparseOperator> out;
    out.reserve(static_cast<std::size_t>(max_power));
    detail::LongSparse acc = base;
    out.push_back(acc.rounded());
    for (int p = 2; p <= max_power; ++p) {
        acc = acc.multiply(base);
        out.push_back(acc.rounded());
    }
    return out;
}

struct RelationResidual {
    double absolute = 0.0; // max-abs of G^order - sum_j c_j G^(2j+1)
    double scale = 0.0;    // max-abs of G^order
    double relative() const { return scale > 0.0 ? absolute / scale : absolute; }
};

inline RelationResidual relation_residual(const SparseOperator& g, const PolynomialRelation& rel) {
    if (rel.order != 2 * rel.half_degree() + 1)
        throw std::invalid_argument("relation_residual: order and coefficient count disagree");
    const auto powers = operator_powers(g, rel.order);
    SparseOperator residual = powers[static_cast<std::size_t>(rel.order) - 1];
    for (int j = 0; j < rel.half_degree(); ++j)
        residual = SparseOperator::linear_combination(1.0, residual, -rel.coefficients[static_cast<std::size_t>(j)],
                                                      powers[static_cast<std::size_t>(2 * j)]);
    return RelationResidual{residual.max_abs(),
                            powers[static_cast<std::size_t>(rel.order) - 1].max_abs()};
}

/// Max-abs residual of the relation on the operator; callers compare against
/// tol::relation_relative times the max-abs of the highest power.
inline double verify_relation(const SparseOperator& g, const PolynomialRelation& rel) {
    return relation_residual(g, rel).absolute;
}

inline RelationResidual relation_residual(const Generator& g, const PolynomialRelation& rel) {
    return relation_residual(g.matrix, rel);
}

inline double verify_relation(const Generator& g, const PolynomialRelation& rel) {
    return verify_relation(g.matrix, rel);
}

namespace detail {

inline long double sparse_dot_ld(const SparseOperator& a, const SparseOperator& b) {
    long double s = 0.0L;
    for (SparseOperator::Index i = 0; i < a.rows(); ++i) {
        const auto ca = a.row_columns(i);
        const auto va = a.row_values(i);
        const auto cb = b.row_columns(i);
        const auto vb = b.row_values(i);
        std::size_t ka = 0, kb = 0;
        while (ka < ca.size() && kb < cb.size()) {
            if (ca[ka] < cb[kb])
                ++ka;
            else if (cb[kb] < ca[ka])
                ++kb;
            else
                s += static_cast<long double>(va[ka++]) * static_cast<long double>(vb[kb++]);
        }
    }
    return s;
}

/// Gaussian elimination with partial pivoting; returns false when singular.
inline bool solve_ld(std::vector<long double>& a, std::vector<long double>& b, int n) {
    for (int k = 0; k < n; ++k) {
        int piv = k;
        for (int i = k + 1; i < n; ++i)
            if (std::abs(a[static_cast<std::size_t>(i) * n + k]) >
                std::abs(a[static_cast<std::size_t>(piv) * n + k]))
                piv = i;
        if (a[static_cast<std::size_t>(piv) * n + k] == 0.0L)
            return false;
        if (piv != k) {
            for (int j = 0; j < n; ++j)
                std::swap(a[static_cast<std::size_t>(k) * n + j],
                          a[static_cast<std::size_t>(piv) * n + j]);
            std::swap(b[static_cast<std::size_t>(k)], b[static_cast<std::size_t>(piv)]);
        }
        for (int i = k + 1; i < n; ++i) {
            const long double f =
                a[static_cast<std::size_t>(i) * n + k] / a[static_cast<std::size_t>(k) * n + k];
            if (f == 0.0L)
                continue;
            for (int j = k; j < n; ++j)
                a[static_cast<std::size_t>(i) * n + j] -= f * a[static_cast<std::size_t>(k) * n + j];
            b[static_cast<std::size_t>(i)] -= f * b[static_cast<std::size_t>(k)];
        }
    }
    for (int i = n - 1; i >= 0; --i) {
        long double s = b[static_cast<std::size_t>(i)];
        for (int j = i + 1; j < n; ++j)
            s -= a[static_cast<std::size_t>(i) * n + j] * b[static_cast<std::size_t>(j)];
        b[static_cast<std::size_t>(i)] = s / a[static_cast<std::size_t>(i) * n + i];
    }
    return true;
}

} // namespace detail

/// Discover the lowest odd order 2m+1 and coefficients with
/// ||G^(2m+1) - sum_j c_j G^(2j+1)||_max <= tol::relation_discovery_relative
/// times ||G^(2m+1)||_max, by least squares over the vectorized odd powers
/// (normal equations accumulated in extended precision, residual re-checked
/// explicitly on the sparse matrices).
inline PolynomialRelation find_minimal_polynomial(const SparseOperator& g, int max_order = 13) {
    if (!g.is_square())
        throw std::invalid_argument("find_minimal_polynomial: matrix must be square");
    if (max_order < 3 || max_order % 2 == 0)
        throw std::invalid_argument("find_minimal_polynomial: max_order must be odd and >= 3");
    const double gmax = g.max_abs();
    if (SparseOperator::max_abs_diff(g, g.transposed().scaled(-1.0)) >
        1e-10 * std::max(1.0, gmax))
        throw std::invalid_argument("find_minimal_polynomial: matrix is not skew-symmetric");
    if (gmax == 0.0)
        return PolynomialRelation{3, {0.0}}; // zero operator: G^3 = 0 * G

    const auto powers = operator_powers(g, max_order);
    auto odd = [&](int j) -> const SparseOperator& { return powers[static_cast<std::size_t>(2 * j)]; };

    for (int m = 1; 2 * m + 1 <= max_order; ++m) {
        const SparseOperator& target = odd(m);
        std::vector<long double> gram(static_cast<std::size_t>(m) * m);
        std::vector<long double> rhs(static_cast<std::size_t>(m));
        for (int r = 0; r < m; ++r) {
            for (int c = r; c < m; ++c) {
                const long double v = detail::sparse_dot_ld(odd(r), odd(c));
                gram[static_cast<std::size_t>(r) * m + c] = v;
                gram[static_cast<std::size_t>(c) * m + r] = v;
            }
            rhs[static_cast<std::size_t>(r)] = detail::sparse_dot_ld(odd(r), target);
        }
        if (!detail::solve_ld(gram, rhs, m))
            continue;

        PolynomialRelation rel;
        rel.order = 2 * m + 1;
        rel.coefficients.resize(static_cast<std::size_t>(m));
        for (int j = 0; j < m; ++j)
            rel.coefficients[static_cast<std::size_t>(j)] = static_cast<double>(rhs[static_cast<std::size_t>(j)]);

        const auto res = relation_residual(g, rel);
        if (res.absolute <= tol::relation_discovery_relative * std::max(res.scale, 1e-300))
            return rel;
    }
    throw RelationNotFoundError("find_minimal_polynomial: no odd relation up to order " +
                                std::to_string(max_order));
}

inline PolynomialRelation find_minimal_polynomial(const Generator& g, int max_order = 13) {
    return find_minimal_polynomial(g.matrix, max_order);
}

namespace detail {

/// All roots of a monic polynomial (ascending coefficients, leading 1 implied
/// present as the last element) by the Durand-Kerner iteration with a Newton
/// polish. Degree is small here (<= 6) and roots of interest are simple.
inline std::vector<std::complex<long double>> polynomial_roots(std::vector<long double> monic) {
    using C = std::complex<long double>;
    const int deg = static_cast<int>(monic.size()) - 1;
    auto eval = [&](C z) {
        C v = monic[static_cast<std::size_t>(deg)];
        for (int k = deg - 1; k >= 0; --k)
            v = v * z + monic[static_cast<std::size_t>(k)];
        return v;
    };
    auto eval_d = [&](C z) {
        C v = monic[static_cast<std::size_t>(deg)] * static_cast<long double>(deg);
        for (int k = deg - 1; k >= 1; --k)
            v = v * z + monic[static_cast<std::size_t>(k)] * static_cast<long double>(k);
        return v;
    };

    long double radius = 0.0L;
    for (int k = 0; k < deg; ++k)
        radius = std::max(radius, std::abs(monic[static_cast<std::size_t>(k)]));
    radius += 1.0L;

    std::vector<C> z(static_cast<std::size_t>(deg));
    for (int k = 0; k < deg; ++k) {
        const long double phi = 2.0L * 3.14159265358979323846L * (k + 0.25L) / deg;
        z[static_cast<std::size_t>(k)] = radius * C(std::cos(phi), std::sin(phi));
    }
    for (int iter = 0; iter < 500; ++iter) {
        long double shift = 0.0L;
        for (int k = 0; k < deg; ++k) {
            C denom(1.0L, 0.0L);
            for (int l = 0; l < deg; ++l)
                if (l != k)
                    denom *= z[static_cast<std::size_t>(k)] - z[static_cast<std::size_t>(l)];
            if (denom == C(0.0L, 0.0L))
                denom = C(1e-30L, 0.0L);
            const C delta = eval(z[static_cast<std::size_t>(k)]) / denom;
            z[static_cast<std::size_t>(k)] -= delta;
            shift = std::max(shift, std::abs(delta));
        }
        if (shift < 1e-25L * std::max(1.0L, radius))
            break;
    }
    for (auto& root : z)
        for (int it = 0; it < 3; ++it) {
            const C d = eval_d(root);
            if (std::abs(d) == 0.0L)
                break;
            root -= eval(root) / d;
        }
    return z;
}

inline std::vector<long double> poly_from_roots(std::span<const long double> pts) {
    std::vector<long double> c{1.0L};
    for (const long double r : pts) {
        c.push_back(0.0L);
        for (std::size_t k = c.size() - 1; k > 0; --k)
            c[k] = c[k - 1] - r * c[k];
        c[0] *= -r;
    }
    return c; // ascending coefficients of prod (x - r)
}

/// Closed-form synthesis in extended precision. The characteristic roots
/// lambda_n of the relation give the frequencies S_n = sqrt(-lambda_n); the
/// amplitudes are the coefficients of the Lagrange polynomials through the
/// points x_n = lambda_n:
///   odd p:  Q_q(x) = (1/S_q)   prod_{r != q} (x - x_r)/(x_q - x_r),  k_q^(2j-1) = [x^(j-1)] Q_q
///   even p: P_q(x) = (x / x_q) prod_{r != q} (x - x_r)/(x_q - x_r),  k_q^(2j)   = [x^j] P_q
/// which is exactly the requirement that I + sum_p f_p(theta) G^p equals
/// e^(theta mu) on every spectrum point mu in {0, +-i S_n}.
inline ClosedFormTable synthesize_closed_form(const std::vector<long double>& coefficients) {
    const int m = static_cast<int>(coefficients.size());
    if (m < 1)
        throw std::invalid_argument("derive_closed_form: empty relation");

    std::vector<long double> monic(static_cast<std::size_t>(m) + 1);
    for (int j = 0; j < m; ++j)
        monic[static_cast<std::size_t>(j)] = -coefficients[static_cast<std::size_t>(j)];
    monic[static_cast<std::size_t>(m)] = 1.0L;

    const auto roots = polynomial_roots(monic);
    long double scale = 1.0L;
    for (const auto& z : roots)
        scale = std::max(scale, std::abs(z));

    auto as_double_roots = [&] {
        std::vector<std::complex<double>> out;
        out.reserve(roots.size());
        for (const auto& z : roots)
            out.emplace_back(static_cast<double>(z.real()), static_cast<double>(z.imag()));
        return out;
    };

    std::vector<long double> lambda;
    for (const auto& z : roots) {
        if (std::abs(z.imag()) > tol::root_imaginary * scale)
            throw DegeneracyError("derive_closed_form: complex characteristic root", as_double_roots());
        if (z.real() > -tol::root_negative_margin * scale)
            throw DegeneracyError("derive_closed_form: non-negative characteristic root",
                                  as_double_roots());
        lambda.push_back(z.real());
    }
    std::sort(lambda.begin(), lambda.end()); // most negative first -> descending frequency
    for (std::size_t i = 1; i < lambda.size(); ++i)
        if (lambda[i] - lambda[i - 1] < tol::root_separation * scale)
            throw DegeneracyError("derive_closed_form: repeated characteristic root",
                                  as_double_roots());

    ClosedFormTable table;
    table.half_degree = m;
    table.frequency.resize(static_cast<std::size_t>(m));
    table.k.assign(static_cast<std::size_t>(m), std::vector<long double>(2 * static_cast<std::size_t>(m), 0.0L));
    for (int q = 0; q < m; ++q) {
        const long double xq = lambda[static_cast<std::size_t>(q)];
        const long double sq = std::sqrt(-xq);
        table.frequency[static_cast<std::size_t>(q)] = sq;
        std::vector<long double> others;
        long double denom = 1.0L;
        for (int r = 0; r < m; ++r)
            if (r != q) {
                others.push_back(lambda[static_cast<std::size_t>(r)]);
                denom *= xq - lambda[static_cast<std::size_t>(r)];
            }
        const auto num = poly_from_roots(others); // degree m-1, ascending
        for (int j = 1; j <= m; ++j) {
            table.k[static_cast<std::size_t>(q)][static_cast<std::size_t>(2 * j - 2)] =
                num[static_cast<std::size_t>(j - 1)] / (denom * sq);
            table.k[static_cast<std::size_t>(q)][static_cast<std::size_t>(2 * j - 1)] =
                num[static_cast<std::size_t>(j - 1)] / (denom * xq);
        }
    }
    return table;
}

inline ClosedFormCoefficients round_table(const ClosedFormTable& table) {
    ClosedFormCoefficients cf;
    cf.half_degree = table.half_degree;
    cf.entries.resize(static_cast<std::size_t>(table.half_degree));
    for (int q = 0; q < table.half_degree; ++q) {
        auto& e = cf.entries[static_cast<std::size_t>(q)];
        e.frequency = static_cast<double>(table.frequency[static_cast<std::size_t>(q)]);
        e.k.assign(table.k[static_cast<std::size_t>(q)].begin(),
                   table.k[static_cast<std::size_t>(q)].end());
    }
    return cf;
}

} // namespace detail

/// Synthesize the closed-form coefficients of exp(theta G) from a polynomial
/// relation. Frequencies come out sorted descending.
inline ClosedFormCoefficients derive_closed_form(const PolynomialRelation& rel) {
    if (rel.order != 2 * rel.half_degree() + 1)
        throw std::invalid_argument("derive_closed_form: order and coefficient count disagree");
    std::vector<long double> c(rel.coefficients.begin(), rel.coefficients.end());
    return detail::round_table(detail::synthesize_closed_form(c));
}

/// Family synthesis from the exact relation coefficients; reproduces the
/// reference tables entry-wise.
inline ClosedFormCoefficients derive_closed_form(ClosedFormFamily family) {
    return detail::round_table(detail::synthesize_closed_form(detail::family_relation_ld(family)));
}

/// Reference coefficient tables for the three non-trivial families, rows
/// sorted by descending frequency. Entries are exact rationals and quadratic
/// surds evaluated in double precision.
inline const ClosedFormCoefficients& tabulated_coefficients(ClosedFormFamily family) {
    static const ClosedFormCoefficients quintic = [] {
        const double r2 = std::sqrt(2.0);
        ClosedFormCoefficients cf;
        cf.half_degree = 2;
        cf.entries = {
            {1.0, {-1.0, 1.0, -2.0, 2.0}},
            {r2 / 2.0, {2.0 * r2, -4.0, 2.0 * r2, -4.0}},
        };
        return cf;
    }();
    static const ClosedFormCoefficients ninth = [] {
        const double r2 = std::sqrt(2.0);
        ClosedFormCoefficients cf;
        cf.half_degree = 4;
        cf.entries = {
            {r2,
             {-r2 / 42.0, 1.0 / 42.0, -r2 / 6.0, 1.0 / 6.0, -r2 / 3.0, 1.0 / 3.0, -4.0 * r2 / 21.0,
              4.0 / 21.0}},
            {1.0,
             {2.0 / 3.0, -2.0 / 3.0, 13.0 / 3.0, -13.0 / 3.0, 22.0 / 3.0, -22.0 / 3.0, 8.0 / 3.0,
              -8.0 / 3.0}},
            {r2 / 2.0,
             {-8.0 * r2 / 3.0, 16.0 / 3.0, -44.0 * r2 / 3.0, 88.0 / 3.0, -52.0 * r2 / 3.0,
              104.0 / 3.0, -16.0 * r2 / 3.0, 32.0 / 3.0}},
            {0.5,
             {128.0 / 21.0, -256.0 / 21.0, 64.0 / 3.0, -128.0 / 3.0, 64.0 / 3.0, -128.0 / 3.0,
              128.0 / 21.0, -256.0 / 21.0}},
        };
        return cf;
    }();
    static const ClosedFormCoefficients eleventh = [] {
        const double r2 = std::sqrt(2.0);
        const double r3 = std::sqrt(3.0);
        ClosedFormCoefficients cf;
        cf.half_degree = 5;
        cf.entries = {
            {r2,
             {r2 / 1150.0, -1.0 / 1150.0, 11.0 * r2 / 690.0, -11.0 / 690.0, 133.0 * r2 / 1725.0,
              -133.0 / 1725.0, 16.0 * r2 / 115.0, -16.0 / 115.0, 48.0 * r2 / 575.0, -48.0 / 575.0}},
            {r3 / 2.0,
             {-16.0 * r3 / 75.0, 32.0 / 75.0, -56.0 * r3 / 15.0, 112.0 / 15.0, -1192.0 * r3 / 75.0,
              2384.0 / 75.0, -112.0 * r3 / 5.0, 224.0 / 5.0, -192.0 * r3 / 25.0, 384.0 / 25.0}},
            {r2 / 2.0,
             {8.0 * r2 / 5.0, -16.0 / 5.0, 404.0 * r2 / 15.0, -808.0 / 15.0, 308.0 * r2 / 3.0,
              -616.0 / 3.0, 608.0 * r2 / 5.0, -1216.0 / 5.0, 192.0 * r2 / 5.0, -384.0 / 5.0}},
            {r3 / 3.0,
             {-54.0 * r3 / 25.0, 162.0 / 25.0, -171.0 * r3 / 5.0, 513.0 / 5.0, -2718.0 * r3 / 25.0,
              8154.0 / 25.0, -576.0 * r3 / 5.0, 1728.0 / 5.0, -864.0 * r3 / 25.0, 2592.0 / 25.0}},
            {r3 / 6.0,
             {432.0 * r3 / 115.0, -2592.0 / 115.0, 2952.0 * r3 / 115.0, -17712.0 / 115.0,
              1368.0 * r3 / 23.0, -8208.0 / 23.0, 6192.0 * r3 / 115.0, -37152.0 / 115.0,
              1728.0 * r3 / 115.0, -10368.0 / 115.0}},
        };
        return cf;
    }();
    switch (family) {
    case ClosedFormFamily::quintic: return quintic;
    case ClosedFormFamily::ninth: return ninth;
    case ClosedFormFamily::eleventh: return eleventh;
    case ClosedFormFamily::cubic:
    case ClosedFormFamily::sa_single_pair:
        throw std::invalid_argument("tabulated_coefficients: " + to_string(family) +
                                    " uses a dedicated formula, not a table");
    }
    throw std::invalid_argument("tabulated_coefficients: unknown family");
}

namespace detail {

inline void populate_workspace(ExpWorkspace& ws, const Generator& g) {
    if (g.family == ClosedFormFamily::sa_single_pair) {
        if (g.pair_parts.size() != 2)
            throw std::logic_error("apply_exponential: sa_single generator lacks its pair parts");
        for (int part = 0; part < 2; ++part) {
            const auto base = LongSparse::from(g.pair_parts[static_cast<std::size_t>(part)]);
            ws.part_powers[static_cast<std::size_t>(part)] = {base, base.multiply(base)};
        }
        return;
    }
    ws.table = synthesize_closed_form(family_relation_ld(g.family));
    const auto base = LongSparse::from(g.matrix);
    LongSparse acc = base;
    ws.powers.push_back(acc);
    for (int p = 2; p <= 2 * ws.table.half_degree; ++p) {
        acc = acc.multiply(base);
        ws.powers.push_back(acc);
    }
}

inline void apply_pair_factor(std::span<const LongSparse> powers, long double angle,
                              std::vector<long double>& u, std::vector<long double>& scratch1,
                              std::vector<long double>& scratch2) {
    const long double s = std::sin(angle);
    const long double c = 1.0L - std::cos(angle);
    powers[0].apply_into(u, scratch1);
    powers[1].apply_into(u, scratch2);
    for (std::size_t i = 0; i < u.size(); ++i)
        u[i] += s * scratch1[i] + c * scratch2[i];
}

} // namespace detail

/// exp(theta G) v through the family's closed form: the identity term plus
/// the cached sparse powers G^p weighted by the trigonometric coefficients.
/// The spin-summed single is evaluated as the product of its two commuting
/// cubic factors at angle theta / sqrt(2) each. Evaluation runs in extended
/// precision; the amplitudes largely cancel for the high-degree families.
inline std::vector<double> apply_exponential(const Generator& g, double theta,
                                             std::span<const double> v) {
    if (static_cast<SparseOperator::Index>(v.size()) != g.matrix.rows())
        throw std::invalid_argument("apply_exponential: vector dimension mismatch");

    ExpWorkspace local;
    ExpWorkspace* ws = g.workspace.get();
    if (ws)
        std::call_once(ws->once, [&] { detail::populate_workspace(*ws, g); });
    else {
        detail::populate_workspace(local, g);
        ws = &local;
    }

    std::vector<long double> u(v.begin(), v.end());
    if (g.family == ClosedFormFamily::sa_single_pair) {
        const long double angle = static_cast<long double>(theta) / std::sqrt(2.0L);
        std::vector<long double> s1(u.size()), s2(u.size());
        detail::apply_pair_factor(ws->part_powers[1], angle, u, s1, s2);
        detail::apply_pair_factor(ws->part_powers[0], angle, u, s1, s2);
    } else {
        const auto& table = ws->table;
        const int m = table.half_degree;
        std::vector<long double> sins(static_cast<std::size_t>(m)), cosm1(static_cast<std::size_t>(m));
        for (int n = 0; n < m; ++n) {
            const long double st = table.frequency[static_cast<std::size_t>(n)] *
                                   static_cast<long double>(theta);
            sins[static_cast<std::size_t>(n)] = std::sin(st);
            cosm1[static_cast<std::size_t>(n)] = std::cos(st) - 1.0L;
        }
        std::vector<long double> x(v.begin(), v.end());
        std::vector<long double> w(u.size());
        for (int p = 1; p <= 2 * m; ++p) {
            long double f = 0.0L;
            for (int n = 0; n < m; ++n)
                f += table.k[static_cast<std::size_t>(n)][static_cast<std::size_t>(p - 1)] *
                     ((p % 2) ? sins[static_cast<std::size_t>(n)] : cosm1[static_cast<std::size_t>(n)]);
            if (f == 0.0L)
                continue;
            ws->powers[static_cast<std::size_t>(p - 1)].apply_into(x, w);
            for (std::size_t i = 0; i < u.size(); ++i)
                u[i] += f * w[i];
        }
    }
    std::vector<double> out(u.size());
    for (std::size_t i = 0; i < u.size(); ++i)
        out[i] = static_cast<double>(u[i]);
    return out;
}

/// Dense matrix of exp(theta G), assembled column by column (test harnesses
/// use this for unitarity checks; row-major, dim x dim).
inline std::vector<double> exponential_matrix(const Generator& g, double theta) {
    const auto n = static_cast<std::size_t>(g.matrix.rows());
    std::vector<double> result(n * n, 0.0);
    std::vector<double> e(n, 0.0);
    for (std::size_t j = 0; j < n; ++j) {
        e.assign(n, 0.0);
        e[j] = 1.0;
        const auto col = apply_exponential(g, theta, e);
        for (std::size_t i = 0; i < n; ++i)
            result[i * n + j] = col[i];
    }
    return result;
}

} // namespace spinad
