/*******************************************************************************
 * Copyright (c) 2026 the spinad developers.
 * All rights reserved.
 *
 * This source code and the accompanying materials are made available under
 * the terms of the Apache License 2.0 which accompanies this distribution.
 ******************************************************************************/
#pragma once

#include <cmath>
#include <cstddef>
#include <span>
#include <stdexcept>
#include <vector>

#include "spinad/errors.hpp"
#include "spinad/fock.hpp"
#include "spinad/tolerances.hpp"

// Independent ground truth for the closed-form machinery. Everything here is
// dense and deliberately shares no code with the sparse implementation it
// certifies: its own storage, its own multiply, its own least squares.

namespace spinad::oracle {

class DenseMatrix {
public:
    DenseMatrix() = default;

    DenseMatrix(std::size_t rows, std::size_t cols)
        : rows_(rows), cols_(cols), a_(rows * cols, 0.0) {}

    static DenseMatrix identity(std::size_t n) {
        DenseMatrix m(n, n);
        for (std::size_t i = 0; i < n; ++i)
            m(i, i) = 1.0;
        return m;
    }

    std::size_t rows() const { return rows_; }
    std::size_t cols() const { return cols_; }

    double& operator()(std::size_t i, std::size_t j) { return a_[i * cols_ + j]; }
    double operator()(std::size_t i, std::size_t j) const { return a_[i * cols_ + j]; }

    std::span<const double> data() const { return a_; }

    DenseMatrix multiply(const DenseMatrix& b) const {
        if (cols_ != b.rows_)
            throw std::invalid_argument("DenseMatrix::multiply: dimension mismatch");
        DenseMatrix m(rows_, b.cols_);
        for (std::size_t i = 0; i < rows_; ++i)
            for (std::size_t k = 0; k < cols_; ++k) {
                const double aik = a_[i * cols_ + k];
                if (aik == 0.0)
                    continue;
                const double* brow = &b.a_[k * b.cols_];
                double* mrow = &m.a_[i * b.cols_];
                for (std::size_t j = 0; j < b.cols_; ++j)
                    mrow[j] += aik * brow[j];
            }
        return m;
    }

    void add_scaled(double s, const DenseMatrix& b) {
        if (rows_ != b.rows_ || cols_ != b.cols_)
            throw std::invalid_argument("DenseMatrix::add_scaled: shape mismatch");
        for (std::size_t i = 0; i < a_.size(); ++i)
            a_[i] += s * b.a_[i];
    }

    void scale(double s) {
        for (double& v : a_)
            v *= s;
    }

    std::vector<double> apply(std::span<const double> x) const {
        if (x.size() != cols_)
            throw std::invalid_argument("DenseMatrix::apply: dimension mismatch");
        std::vector<double> y(rows_, 0.0);
        for (std::size_t i = 0; i < rows_; ++i) {
            double s = 0.0;
            for (std::size_t j = 0; j < cols_; ++j)
                s += a_[i * cols_ + j] * x[j];
            y[i] = s;
        }
        return y;
    }

    double max_abs() const {
        double m = 0.0;
        for (const double v : a_)
            m = std::max(m, std::abs(v));
        return m;
    }

    /// Maximum absolute column sum.
    double norm1() const {
        double m = 0.0;
        for (std::size_t j = 0; j < cols_; ++j) {
            double s = 0.0;
            for (std::size_t i = 0; i < rows_; ++i)
                s += std::abs(a_[i * cols_ + j]);
            m = std::max(m, s);
        }
        return m;
    }

    bool all_finite() const {
        for (const double v : a_)
            if (!std::isfinite(v))
                return false;
        return true;
    }

private:
    std::size_t rows_ = 0;
    std::size_t cols_ = 0;
    std::vector<double> a_;
};

inline DenseMatrix from_sparse(const SparseOperator& s) {
    DenseMatrix m(static_cast<std::size_t>(s.rows()), static_cast<std::size_t>(s.cols()));
    for (SparseOperator::Index i = 0; i < s.rows(); ++i) {
        const auto cs = s.row_columns(i);
        const auto vs = s.row_values(i);
        for (std::size_t k = 0; k < cs.size(); ++k)
            m(static_cast<std::size_t>(i), static_cast<std::size_t>(cs[k])) = vs[k];
    }
    return m;
}

/// Dense matrix exponential by scaling and squaring around a 20-term Taylor
/// core: scale by 2^-s so the 1-norm drops below 1/2, sum the series, square
/// s times. The truncation error of the core is below 1e-26; rounding during
/// the squarings keeps the total below ~1e-13 for ||M||_1 <= 16.
inline DenseMatrix expm(const DenseMatrix& m) {
    if (m.rows() != m.cols())
        throw std::invalid_argument("expm: matrix must be square");
    if (!m.all_finite())
        throw std::invalid_argument("expm: non-finite entries");

    int squarings = 0;
    double norm = m.norm1();
    while (norm > 0.5) {
        norm *= 0.5;
        ++squarings;
    }

    DenseMatrix scaled = m;
    scaled.scale(std::ldexp(1.0, -squarings));

    DenseMatrix result = DenseMatrix::identity(m.rows());
    DenseMatrix term = DenseMatrix::identity(m.rows());
    for (int k = 1; k <= 20; ++k) {
        term = term.multiply(scaled);
        term.scale(1.0 / k);
        result.add_scaled(1.0, term);
    }
    for (int k = 0; k < squarings; ++k)
        result = result.multiply(result);
    return result;
}

/// Monic odd polynomial annihilating a matrix:
///   M^degree + sum_j coefficients[j] M^(2j+1) = 0,  degree = 2*coefficients.size()+1.
struct OddPolynomial {
    int degree = 3;
    std::vector<double> coefficients;
};

namespace detail {

/// Householder-QR least squares for a tall column-major matrix; returns the
/// minimizer of ||A x - b||_2. Destroys its inputs.
inline std::vector<double> qr_least_squares(std::vector<double>& a, std::size_t rows,
                                            std::size_t ncols, std::vector<double>& b) {
    auto col = [&](std::size_t j) { return a.data() + j * rows; };
    for (std::size_t k = 0; k < ncols; ++k) {
        double* x = col(k);
        double norm = 0.0;
        for (std::size_t i = k; i < rows; ++i)
            norm += x[i] * x[i];
        norm = std::sqrt(norm);
        if (norm == 0.0)
            continue;
        const double alpha = (x[k] > 0.0) ? -norm : norm;
        const double vnorm2 = norm * norm - x[k] * alpha; // ||v||^2 / 2 with v = x - alpha e_k
        x[k] -= alpha;
        for (std::size_t j = k + 1; j < ncols; ++j) {
            double* y = col(j);
            double s = 0.0;
            for (std::size_t i = k; i < rows; ++i)
                s += x[i] * y[i];
            s /= vnorm2;
            for (std::size_t i = k; i < rows; ++i)
                y[i] -= s * x[i];
        }
        double s = 0.0;
        for (std::size_t i = k; i < rows; ++i)
            s += x[i] * b[i];
        s /= vnorm2;
        for (std::size_t i = k; i < rows; ++i)
            b[i] -= s * x[i];
        // store R on the diagonal position; below the diagonal the column keeps v
        x[k] = alpha;
    }
    // Back substitution on the implicit R (upper triangle of the reduced A).
    std::vector<double> x(ncols, 0.0);
    for (std::size_t jj = ncols; jj-- > 0;) {
        double s = b[jj];
        for (std::size_t k = jj + 1; k < ncols; ++k)
            s -= a[k * rows + jj] * x[k];
        const double r = a[jj * rows + jj];
        if (r == 0.0)
            throw std::runtime_error("qr_least_squares: rank deficient system");
        x[jj] = s / r;
    }
    return x;
}

} // namespace detail

/// Smallest-degree monic odd polynomial annihilating M within a relative
/// max-abs residual of tol::bruteforce_residual_relative. Powers are
/// vectorized and fitted by Householder-QR least squares, scanning degrees
/// 3, 5, ... up to max_order.
inline OddPolynomial minimal_odd_polynomial(const DenseMatrix& m, int max_order = 13) {
    if (m.rows() != m.cols())
        throw std::invalid_argument("minimal_odd_polynomial: matrix must be square");
    const std::size_t n = m.rows();
    const std::size_t vec = n * n;

    const DenseMatrix m2 = m.multiply(m);
    std::vector<DenseMatrix> odd_powers; // M^1, M^3, ...
    odd_powers.push_back(m);
    while (2 * static_cast<int>(odd_powers.size()) + 1 <= max_order)
        odd_powers.push_back(odd_powers.back().multiply(m2));

    for (std::size_t d = 1; 2 * d + 1 <= static_cast<std::size_t>(max_order); ++d) {
        const DenseMatrix& target = odd_powers[d];
        std::vector<double> a(vec * d);
        for (std::size_t j = 0; j < d; ++j) {
            const auto src = odd_powers[j].data();
            std::copy(src.begin(), src.end(), a.begin() + static_cast<std::ptrdiff_t>(j * vec));
        }
        std::vector<double> b(target.data().begin(), target.data().end());
        for (double& v : b)
            v = -v;

        std::vector<double> coeff;
        try {
            coeff = detail::qr_least_squares(a, vec, d, b);
        } catch (const std::runtime_error&) {
            continue; // rank deficient at this degree, try higher
        }

        DenseMatrix residual = target;
        for (std::size_t j = 0; j < d; ++j)
            residual.add_scaled(coeff[j], odd_powers[j]);
        const double scale = std::max(target.max_abs(), 1e-300);
        if (residual.max_abs() <= tol::bruteforce_residual_relative * scale)
            return OddPolynomial{static_cast<int>(2 * d + 1), coeff};
    }
    throw RelationNotFoundError("no odd polynomial of degree <= " + std::to_string(max_order) +
                                " annihilates the matrix");
}

} // namespace spinad::oracle
