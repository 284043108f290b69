/*******************************************************************************
 * Copyright (c) 2026 the spinad developers.
 * All rights reserved.
 *
 * This source code and the accompanying materials are made available under
 * the terms of the Apache License 2.0 which accompanies this distribution.
 ******************************************************************************/
#pragma once

#include <array>
#include <cstdint>
#include <istream>
#include <ostream>
#include <random>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "spinad/closedform.hpp"
#include "spinad/fock.hpp"
#include "spinad/operators.hpp"

// Unitary product states over generator pools, synthetic spin-free
// Hamiltonians, reverse-sweep gradients, and pool counting.

namespace spinad {

enum class PoolMode { fermionic_sd, sa_singlet_only, sa_with_prime };

inline std::string to_string(PoolMode m) {
    switch (m) {
    case PoolMode::fermionic_sd: return "fermionic_sd";
    case PoolMode::sa_singlet_only: return "sa_sd_singlet_only";
    case PoolMode::sa_with_prime: return "sa_sd_with_prime";
    }
    return "?";
}

/// Active space of n_occ occupied and n_virt virtual spatial orbitals;
/// occupied orbitals are [0, n_occ), virtuals [n_occ, n_occ + n_virt).
struct PoolSpec {
    int n_occ = 1;
    int n_virt = 1;
    PoolMode mode = PoolMode::sa_singlet_only;
};

/// Number of variational parameters of the pool:
///   fermionic_sd      2ov + o^2 v^2 + 2 C(o,2) C(v,2)
///   sa_singlet_only   ov + ov(ov+1)/2
///   sa_with_prime     adds C(o,2) C(v,2)
inline long count_parameters(const PoolSpec& spec) {
    if (spec.n_occ < 1 || spec.n_virt < 1)
        throw std::invalid_argument("count_parameters: need at least one occupied and one virtual");
    const long o = spec.n_occ;
    const long v = spec.n_virt;
    const long co2 = o * (o - 1) / 2;
    const long cv2 = v * (v - 1) / 2;
    switch (spec.mode) {
    case PoolMode::fermionic_sd:
        return 2 * o * v + o * o * v * v + 2 * co2 * cv2;
    case PoolMode::sa_singlet_only:
        return o * v + (o * v) * (o * v + 1) / 2;
    case PoolMode::sa_with_prime:
        return o * v + (o * v) * (o * v + 1) / 2 + co2 * cv2;
    }
    throw std::invalid_argument("count_parameters: unknown mode");
}

/// Canonical, duplicate-free generator ids of the pool; the length equals
/// count_parameters. Order: singles, paired doubles, aiaj, aibi, aibj (both
/// couplings of each index quadruple), then primed doubles when requested.
inline std::vector<GeneratorId> enumerate_pool(const PoolSpec& spec) {
    if (spec.n_occ < 1 || spec.n_virt < 1)
        throw std::invalid_argument("enumerate_pool: need at least one occupied and one virtual");
    const int o = spec.n_occ;
    const int first_virt = spec.n_occ;
    const int end_virt = spec.n_occ + spec.n_virt;
    std::vector<GeneratorId> pool;

    if (spec.mode == PoolMode::fermionic_sd) {
        for (int i = 0; i < o; ++i)
            for (int a = first_virt; a < end_virt; ++a)
                for (const Spin s : {Spin::alpha, Spin::beta})
                    pool.push_back(GeneratorId::fermionic_single(a, i, s));
        for (int i = 0; i < o; ++i)
            for (int j = 0; j < o; ++j)
                for (int a = first_virt; a < end_virt; ++a)
                    for (int b = first_virt; b < end_virt; ++b)
                        pool.push_back(
                            GeneratorId::fermionic_double(a, i, Spin::alpha, b, j, Spin::beta));
        for (const Spin s : {Spin::alpha, Spin::beta})
            for (int i = 0; i < o; ++i)
                for (int j = i + 1; j < o; ++j)
                    for (int a = first_virt; a < end_virt; ++a)
                        for (int b = a + 1; b < end_virt; ++b)
                            pool.push_back(GeneratorId::fermionic_double(a, i, s, b, j, s));
        return pool;
    }

    for (int i = 0; i < o; ++i)
        for (int a = first_virt; a < end_virt; ++a)
            pool.push_back(GeneratorId::sa_single(a, i));
    for (int i = 0; i < o; ++i)
        for (int a = first_virt; a < end_virt; ++a)
            pool.push_back(GeneratorId::sa_double_aiai(a, i));
    for (int a = first_virt; a < end_virt; ++a)
        for (int i = 0; i < o; ++i)
            for (int j = i + 1; j < o; ++j)
                pool.push_back(GeneratorId::sa_double_aiaj(a, i, j));
    for (int a = first_virt; a < end_virt; ++a)
        for (int b = a + 1; b < end_virt; ++b)
            for (int i = 0; i < o; ++i)
                pool.push_back(GeneratorId::sa_double_aibi(a, b, i));
    for (int a = first_virt; a < end_virt; ++a)
        for (int b = a + 1; b < end_virt; ++b)
            for (int i = 0; i < o; ++i)
                for (int j = 0; j < o; ++j)
                    if (i != j)
                        pool.push_back(GeneratorId::sa_double_aibj(a, i, b, j));
    if (spec.mode == PoolMode::sa_with_prime)
        for (int a = first_virt; a < end_virt; ++a)
            for (int b = a + 1; b < end_virt; ++b)
                for (int i = 0; i < o; ++i)
                    for (int j = i + 1; j < o; ++j)
                        pool.push_back(GeneratorId::sa_double_prime_aibj(a, i, b, j));
    return pool;
}

/// Spin-free electronic Hamiltonian H = sum h_pq E_pq
///  + 1/2 sum g_pqrs (E_pq E_rs - delta_qr E_ps), with symmetric h and
/// 8-fold symmetric g. Spin-free by construction, so the assembled matrix
/// commutes with S^2 and S_z on every sector.
class SpinFreeHamiltonian {
public:
    explicit SpinFreeHamiltonian(int n_orb) : n_(n_orb) {
        if (n_orb < 1 || n_orb > 12)
            throw std::invalid_argument("SpinFreeHamiltonian: n_orb out of range");
        h_.assign(static_cast<std::size_t>(n_) * n_, 0.0);
        g_.assign(static_cast<std::size_t>(n_) * n_ * n_ * n_, 0.0);
    }

    int n_orbitals() const { return n_; }

    double one_body(int p, int q) const { return h_[idx2(p, q)]; }

    void set_one_body(int p, int q, double v) {
        h_[idx2(p, q)] = v;
        h_[idx2(q, p)] = v;
    }

    double two_body(int p, int q, int r, int s) const { return g_[idx4(p, q, r, s)]; }

    void set_two_body(int p, int q, int r, int s, double v) {
        for (const auto& t : orbit(p, q, r, s))
            g_[idx4(t[0], t[1], t[2], t[3])] = v;
    }

    /// Canonical representative of the 8-fold symmetry orbit of (p,q,r,s).
    static std::array<int, 4> canonical_quadruple(int p, int q, int r, int s) {
        std::array<int, 4> best{p, q, r, s};
        for (const auto& t : orbit(p, q, r, s))
            if (t < best)
                best = t;
        return best;
    }

    /// Seeded random Hamiltonian: h in [-1, 1], g in [-0.5, 0.5], both with
    /// the full index symmetries. One draw per canonical index tuple.
    static SpinFreeHamiltonian random(int n_orb, std::uint64_t seed) {
        SpinFreeHamiltonian out(n_orb);
        std::mt19937_64 rng(seed);
        std::uniform_real_distribution<double> dh(-1.0, 1.0);
        std::uniform_real_distribution<double> dg(-0.5, 0.5);
        for (int p = 0; p < n_orb; ++p)
            for (int q = p; q < n_orb; ++q)
                out.set_one_body(p, q, dh(rng));
        for (int p = 0; p < n_orb; ++p)
            for (int q = 0; q < n_orb; ++q)
                for (int r = 0; r < n_orb; ++r)
                    for (int s = 0; s < n_orb; ++s)
                        if (canonical_quadruple(p, q, r, s) == std::array<int, 4>{p, q, r, s})
                            out.set_two_body(p, q, r, s, dg(rng));
        return out;
    }

    SparseOperator matrix(const SectorBasis& basis) const {
        if (basis.n_orbitals() != n_)
            throw std::invalid_argument("SpinFreeHamiltonian::matrix: orbital count mismatch");
        const auto dim = static_cast<SparseOperator::Index>(basis.size());
        std::vector<SparseOperator> e(static_cast<std::size_t>(n_) * n_);
        for (int p = 0; p < n_; ++p)
            for (int q = 0; q < n_; ++q)
                e[idx2(p, q)] = singlet_excitation(p, q, basis);

        std::vector<double> dense(static_cast<std::size_t>(dim) * dim, 0.0);
        auto add = [&](double w, const SparseOperator& m) {
            if (w == 0.0)
                return;
            for (SparseOperator::Index i = 0; i < m.rows(); ++i) {
                const auto cs = m.row_columns(i);
                const auto vs = m.row_values(i);
                for (std::size_t k = 0; k < cs.size(); ++k)
                    dense[static_cast<std::size_t>(i) * dim + static_cast<std::size_t>(cs[k])] +=
                        w * vs[k];
            }
        };

        for (int p = 0; p < n_; ++p)
            for (int q = 0; q < n_; ++q)
                add(one_body(p, q), e[idx2(p, q)]);
        for (int p = 0; p < n_; ++p)
            for (int q = 0; q < n_; ++q)
                for (int r = 0; r < n_; ++r)
                    for (int s = 0; s < n_; ++s) {
                        const double g = two_body(p, q, r, s);
                        if (g == 0.0)
                            continue;
                        add(0.5 * g, e[idx2(p, q)] * e[idx2(r, s)]);
                        if (q == r)
                            add(-0.5 * g, e[idx2(p, s)]);
                    }

        std::vector<SparseOperator::Triplet> t;
        for (SparseOperator::Index i = 0; i < dim; ++i)
            for (SparseOperator::Index j = 0; j < dim; ++j) {
                const double v = dense[static_cast<std::size_t>(i) * dim + static_cast<std::size_t>(j)];
                if (v != 0.0)
                    t.push_back({i, j, v});
            }
        return SparseOperator::from_triplets(dim, dim, std::move(t));
    }

    /// Flat text export: `p q value` and `p q r s value` lines, 0-based,
    /// canonical index tuples only, zeros omitted.
    void write(std::ostream& os) const {
        os.precision(17);
        for (int p = 0; p < n_; ++p)
            for (int q = p; q < n_; ++q)
                if (one_body(p, q) != 0.0)
                    os << p << ' ' << q << ' ' << one_body(p, q) << '\n';
        for (int p = 0; p < n_; ++p)
            for (int q = 0; q < n_; ++q)
                for (int r = 0; r < n_; ++r)
                    for (int s = 0; s < n_; ++s)
                        if (canonical_quadruple(p, q, r, s) == std::array<int, 4>{p, q, r, s} &&
                            two_body(p, q, r, s) != 0.0)
                            os << p << ' ' << q << ' ' << r << ' ' << s << ' '
                               << two_body(p, q, r, s) << '\n';
    }

    /// Inverse of write. Blank lines and `#` comments are skipped; a line has
    /// either three tokens (one-body) or five (two-body); listing two
    /// symmetry-equivalent index tuples is an error; unlisted terms are zero.
    static SpinFreeHamiltonian read(std::istream& is, int n_orb) {
        SpinFreeHamiltonian out(n_orb);
        std::set<std::array<int, 4>> seen2, seen4;
        std::string line;
        int lineno = 0;
        while (std::getline(is, line)) {
            ++lineno;
            const auto hash = line.find('#');
            if (hash != std::string::npos)
                line.erase(hash);
            std::istringstream ss(line);
            std::vector<std::string> tok;
            std::string t;
            while (ss >> t)
                tok.push_back(t);
            if (tok.empty())
                continue;
            const std::string where = " (line " + std::to_string(lineno) + ")";
            if (tok.size() != 3 && tok.size() != 5)
                throw std::invalid_argument("hamiltonian file: expected 3 or 5 tokens" + where);
            std::vector<int> idx;
            for (std::size_t k = 0; k + 1 < tok.size(); ++k) {
                std::size_t pos = 0;
                const int v = std::stoi(tok[k], &pos);
                if (pos != tok[k].size() || v < 0 || v >= n_orb)
                    throw std::invalid_argument("hamiltonian file: bad orbital index" + where);
                idx.push_back(v);
            }
            std::size_t pos = 0;
            const double value = std::stod(tok.back(), &pos);
            if (pos != tok.back().size())
                throw std::invalid_argument("hamiltonian file: bad value" + where);
            if (tok.size() == 3) {
                const std::array<int, 4> key{std::min(idx[0], idx[1]), std::max(idx[0], idx[1]), 0, 0};
                if (!seen2.insert(key).second)
                    throw std::invalid_argument(
                        "hamiltonian file: symmetry-equivalent one-body duplicate" + where);
                out.set_one_body(idx[0], idx[1], value);
            } else {
                const auto key = canonical_quadruple(idx[0], idx[1], idx[2], idx[3]);
                if (!seen4.insert(key).second)
                    throw std::invalid_argument(
                        "hamiltonian file: symmetry-equivalent two-body duplicate" + where);
                out.set_two_body(idx[0], idx[1], idx[2], idx[3], value);
            }
        }
        return out;
    }

private:
    static std::array<std::array<int, 4>, 8> orbit(int p, int q, int r, int s) {
        return {{{p, q, r, s},
                 {q, p, r, s},
                 {p, q, s, r},
                 {q, p, s, r},
                 {r, s, p, q},
                 {s, r, p, q},
                 {r, s, q, p},
                 {s, r, q, p}}};
    }

    std::size_t idx2(int p, int q) const {
        return static_cast<std::size_t>(p) * static_cast<std::size_t>(n_) +
               static_cast<std::size_t>(q);
    }
    std::size_t idx4(int p, int q, int r, int s) const {
        return ((static_cast<std::size_t>(p) * n_ + q) * n_ + r) * n_ + s;
    }

    int n_;
    std::vector<double> h_;
    std::vector<double> g_;
};

/// Ordered product of one-parameter unitaries acting on a reference
/// determinant: |psi> = U_0 U_1 ... U_(N-1) |ref>, factors applied
/// right-to-left (the last factor in the list hits the reference first).
struct ProductAnsatz {
    SectorBasis basis;
    Determinant reference = 0;

    struct Factor {
        Generator generator;
        double theta = 0.0;
    };
    std::vector<Factor> factors;

    /// Closed-shell reference: the lowest n_occ spatial orbitals doubly
    /// occupied, on the (n_occ, n_occ) sector.
    static ProductAnsatz closed_shell(int n_orb, int n_occ) {
        ProductAnsatz a;
        a.basis = build_sector_basis(n_orb, n_occ, n_occ);
        for (int p = 0; p < n_occ; ++p)
            a.reference |= Determinant{3} << (2 * p);
        return a;
    }

    void add_factor(const GeneratorId& id, double theta) {
        factors.push_back({build_generator(id, basis), theta});
    }

    void set_angle(std::size_t j, double theta) { factors.at(j).theta = theta; }

    std::vector<double> state() const {
        const auto ref = basis.index_of(reference);
        if (ref < 0)
            throw std::invalid_argument("ProductAnsatz: reference not in the sector");
        std::vector<double> v(basis.size(), 0.0);
        v[static_cast<std::size_t>(ref)] = 1.0;
        for (auto it = factors.rbegin(); it != factors.rend(); ++it)
            v = apply_exponential(it->generator, it->theta, v);
        return v;
    }
};

struct EnergyGradient {
    double energy = 0.0;
    std::vector<double> gradient;
};

/// Expectation value <psi|H|psi> and all angle derivatives in one forward and
/// one reverse sweep: dE/dtheta_J = 2 <lambda_J| G_J |psi_J> with psi_J the
/// partial state including factor J and lambda_J the back-propagated costate.
/// Cost is O(#factors) exponential applications.
inline EnergyGradient energy_and_gradient(const ProductAnsatz& ansatz, const SparseOperator& h) {
    if (h.rows() != static_cast<SparseOperator::Index>(ansatz.basis.size()) || !h.is_square())
        throw std::invalid_argument("energy_and_gradient: Hamiltonian sector mismatch");
    EnergyGradient out;
    std::vector<double> psi = ansatz.state();
    std::vector<double> costate = h.apply(psi);
    out.energy = dot(psi, costate);
    out.gradient.resize(ansatz.factors.size(), 0.0);
    std::vector<double> partial = std::move(psi);
    for (std::size_t j = 0; j < ansatz.factors.size(); ++j) {
        const auto& f = ansatz.factors[j];
        const auto gv = f.generator.matrix.apply(partial);
        out.gradient[j] = 2.0 * dot(costate, gv);
        if (j + 1 < ansatz.factors.size()) {
            partial = apply_exponential(f.generator, -f.theta, partial);
            costate = apply_exponential(f.generator, -f.theta, costate);
        }
    }
    return out;
}

inline EnergyGradient energy_and_gradient(const ProductAnsatz& ansatz,
                                          const SpinFreeHamiltonian& h) {
    return energy_and_gradient(ansatz, h.matrix(ansatz.basis));
}

} // namespace spinad
