/*******************************************************************************
 * Copyright (c) 2026 the spinad developers.
 * All rights reserved.
 *
 * This source code and the accompanying materials are made available under
 * the terms of the Apache License 2.0 which accompanies this distribution.
 ******************************************************************************/
#include <catch2/catch.hpp>

#include <random>
#include <set>
#include <sstream>

#include "spinad/ansatz.hpp"
#include "spinad/oracle.hpp"

using namespace spinad;

namespace {

double vec_distance(std::span<const double> a, std::span<const double> b) {
    double s = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i)
        s += (a[i] - b[i]) * (a[i] - b[i]);
    return std::sqrt(s);
}

/// Finite-difference gradient oracle: central differences on full state
/// rebuilds, step 1e-5.
std::vector<double> gradient_central_differences(ProductAnsatz ansatz, const SparseOperator& h) {
    const double step = 1e-5;
    std::vector<double> grad(ansatz.factors.size());
    for (std::size_t j = 0; j < ansatz.factors.size(); ++j) {
        const double theta = ansatz.factors[j].theta;
        ansatz.set_angle(j, theta + step);
        const auto up = ansatz.state();
        const double eplus = dot(up, h.apply(up));
        ansatz.set_angle(j, theta - step);
        const auto dn = ansatz.state();
        const double eminus = dot(dn, h.apply(dn));
        ansatz.set_angle(j, theta);
        grad[j] = (eplus - eminus) / (2.0 * step);
    }
    return grad;
}

/// Quadratic-cost gradient oracle: dE/dtheta_J = 2 <psi| H U_0..U_(J-1) G_J
/// U_J..U_(N-1) |ref>, each derivative state rebuilt from scratch.
std::vector<double> gradient_naive(const ProductAnsatz& ansatz, const SparseOperator& h) {
    const auto psi = ansatz.state();
    const auto hpsi = h.apply(psi);
    std::vector<double> grad(ansatz.factors.size());
    for (std::size_t j = 0; j < ansatz.factors.size(); ++j) {
        const auto ref = ansatz.basis.index_of(ansatz.reference);
        std::vector<double> v(ansatz.basis.size(), 0.0);
        v[static_cast<std::size_t>(ref)] = 1.0;
        for (std::size_t k = ansatz.factors.size(); k-- > 0;) {
            v = apply_exponential(ansatz.factors[k].generator, ansatz.factors[k].theta, v);
            if (k == j)
                v = ansatz.factors[k].generator.matrix.apply(v);
        }
        grad[j] = 2.0 * dot(hpsi, v);
    }
    return grad;
}

} // namespace

TEST_CASE("product ansatz states", "[ansatz]") {
    SECTION("no factors returns the reference basis vector") {
        auto ansatz = ProductAnsatz::closed_shell(2, 1);
        const auto v = ansatz.state();
        const auto ref = ansatz.basis.index_of(ansatz.reference);
        for (std::size_t i = 0; i < v.size(); ++i)
            CHECK(v[i] == (static_cast<std::int64_t>(i) == ref ? 1.0 : 0.0));
    }

    SECTION("a paired double at theta = pi/2 rotates the reference into the paired excitation") {
        auto ansatz = ProductAnsatz::closed_shell(2, 1);
        ansatz.add_factor(GeneratorId::sa_double_aiai(1, 0), 1.5707963267948966);
        const auto v = ansatz.state();
        const auto target = ansatz.basis.index_of(0b1100);
        REQUIRE(target >= 0);
        CHECK(std::abs(v[static_cast<std::size_t>(target)]) == Approx(1.0).margin(1e-12));
        CHECK(std::abs(norm2(v) - 1.0) <= tol::state_norm_deviation);

        // against the dense exponential of the 4x4 generator
        const auto g = ansatz.factors[0].generator;
        std::vector<double> e(ansatz.basis.size(), 0.0);
        e[static_cast<std::size_t>(ansatz.basis.index_of(0b0011))] = 1.0;
        const auto w =
            oracle::expm(oracle::from_sparse(g.matrix.scaled(1.5707963267948966))).apply(e);
        CHECK(vec_distance(v, w) <= 1e-12);
    }

    SECTION("norm is preserved through a random factor sequence") {
        std::mt19937_64 rng(31);
        std::uniform_real_distribution<double> angle(-2.5, 2.5);
        auto ansatz = ProductAnsatz::closed_shell(4, 2);
        const auto pool = enumerate_pool({2, 2, PoolMode::sa_with_prime});
        for (int k = 0; k < 5; ++k)
            ansatz.add_factor(pool[rng() % pool.size()], angle(rng));
        CHECK(std::abs(norm2(ansatz.state()) - 1.0) <= tol::state_norm_deviation);
    }

    SECTION("a reference outside the sector is rejected") {
        ProductAnsatz bad;
        bad.basis = build_sector_basis(2, 1, 1);
        bad.reference = 0b0101; // two alpha electrons, not in (1,1)
        CHECK_THROWS_AS(bad.state(), std::invalid_argument);
    }
}

TEST_CASE("spin-sector preservation and the fermionic contrast", "[ansatz][spin]") {
    SECTION("sa factor sequences keep a closed shell a numerical singlet") {
        std::mt19937_64 rng(77);
        std::uniform_real_distribution<double> angle(-2.0, 2.0);
        auto ansatz = ProductAnsatz::closed_shell(4, 2);
        const auto pool = enumerate_pool({2, 2, PoolMode::sa_with_prime});
        for (int k = 0; k < 8; ++k)
            ansatz.add_factor(pool[rng() % pool.size()], angle(rng));
        const auto psi = ansatz.state();
        const auto ops = spin_operators(ansatz.basis);
        CHECK(norm2(ops.s_squared.apply(psi)) <= tol::spin_state_residual);
    }

    SECTION("one generic mixed-spin fermionic double leaves the singlet space") {
        auto ansatz = ProductAnsatz::closed_shell(3, 1);
        ansatz.add_factor(GeneratorId::fermionic_double(1, 0, Spin::alpha, 2, 0, Spin::beta), 0.5);
        const auto psi = ansatz.state();
        const auto ops = spin_operators(ansatz.basis);
        CHECK(norm2(ops.s_squared.apply(psi)) > tol::symmetry_break_floor);
    }
}

TEST_CASE("spin-free Hamiltonians", "[ansatz]") {
    SECTION("assembled matrix is symmetric and commutes with the spin operators") {
        const auto h = SpinFreeHamiltonian::random(3, 421);
        for (const auto& [na, nb] : {std::pair{1, 1}, std::pair{2, 1}, std::pair{2, 2}}) {
            const auto basis = build_sector_basis(3, na, nb);
            const auto m = h.matrix(basis);
            CHECK(SparseOperator::max_abs_diff(m, m.transposed()) <= 1e-12);
            const auto ops = spin_operators(basis);
            CHECK(SparseOperator::max_abs_diff(m * ops.s_squared, ops.s_squared * m) <=
                  tol::hamiltonian_spin_commutator);
            CHECK(SparseOperator::max_abs_diff(m * ops.s_z, ops.s_z * m) <=
                  tol::hamiltonian_spin_commutator);
        }
    }

    SECTION("diagonal one-body Hamiltonian gives the orbital-sum energy") {
        SpinFreeHamiltonian h(3);
        h.set_one_body(0, 0, -1.25);
        h.set_one_body(1, 1, 0.5);
        h.set_one_body(2, 2, 2.0);
        auto ansatz = ProductAnsatz::closed_shell(3, 1);
        const auto [energy, grad] = energy_and_gradient(ansatz, h);
        CHECK(energy == Approx(2.0 * -1.25).margin(1e-14)); // doubly occupied lowest orbital
        CHECK(grad.empty());
    }

    SECTION("two-body symmetry is enforced on set") {
        SpinFreeHamiltonian h(3);
        h.set_two_body(0, 1, 2, 0, 0.25);
        CHECK(h.two_body(1, 0, 2, 0) == 0.25);
        CHECK(h.two_body(2, 0, 0, 1) == 0.25);
        CHECK(h.two_body(0, 2, 1, 0) == 0.25);
    }
}

TEST_CASE("energy gradients", "[ansatz][gradient]") {
    SECTION("zero angles on a diagonal Hamiltonian") {
        SpinFreeHamiltonian h(2);
        h.set_one_body(0, 0, -0.7);
        h.set_one_body(1, 1, 0.3);
        auto ansatz = ProductAnsatz::closed_shell(2, 1);
        ansatz.add_factor(GeneratorId::sa_single(1, 0), 0.0);
        ansatz.add_factor(GeneratorId::sa_double_aiai(1, 0), 0.0);
        const auto hmat = h.matrix(ansatz.basis);
        const auto [energy, grad] = energy_and_gradient(ansatz, hmat);
        CHECK(energy == Approx(-1.4).margin(1e-14));
        const auto fd = gradient_central_differences(ansatz, hmat);
        for (std::size_t j = 0; j < grad.size(); ++j)
            CHECK(grad[j] == Approx(fd[j]).margin(1e-6));
    }

    SECTION("reverse sweep matches central differences on seeded six-factor ansatze") {
        for (const std::uint64_t seed : {1u, 2u, 3u, 4u, 5u}) {
            std::mt19937_64 rng(seed);
            std::uniform_real_distribution<double> angle(-1.5, 1.5);
            const auto h = SpinFreeHamiltonian::random(4, 1000 + seed);
            auto ansatz = ProductAnsatz::closed_shell(4, 2);
            const auto pool = enumerate_pool({2, 2, PoolMode::sa_with_prime});
            for (int k = 0; k < 6; ++k)
                ansatz.add_factor(pool[rng() % pool.size()], angle(rng));
            const auto hmat = h.matrix(ansatz.basis);
            const auto [energy, grad] = energy_and_gradient(ansatz, hmat);
            (void)energy;
            const auto fd = gradient_central_differences(ansatz, hmat);
            for (std::size_t j = 0; j < grad.size(); ++j) {
                const double scale = std::max(1.0, std::abs(fd[j]));
                CHECK(std::abs(grad[j] - fd[j]) / scale <= tol::gradient_fd_relative);
            }
        }
    }

    SECTION("reverse sweep equals the quadratic-cost recomputation") {
        std::mt19937_64 rng(9001);
        std::uniform_real_distribution<double> angle(-1.0, 1.0);
        const auto h = SpinFreeHamiltonian::random(3, 2718);
        auto ansatz = ProductAnsatz::closed_shell(3, 1);
        const auto pool = enumerate_pool({1, 2, PoolMode::sa_with_prime});
        for (int k = 0; k < 4; ++k)
            ansatz.add_factor(pool[rng() % pool.size()], angle(rng));
        const auto hmat = h.matrix(ansatz.basis);
        const auto [energy, grad] = energy_and_gradient(ansatz, hmat);
        (void)energy;
        const auto naive = gradient_naive(ansatz, hmat);
        for (std::size_t j = 0; j < grad.size(); ++j)
            CHECK(std::abs(grad[j] - naive[j]) <= tol::gradient_naive_abs);
    }

    SECTION("a factor whose generator annihilates the state has zero gradient") {
        const auto h = SpinFreeHamiltonian::random(3, 5);
        auto ansatz = ProductAnsatz::closed_shell(3, 1);
        // both the excitation and de-excitation parts act on empty orbitals
        ansatz.add_factor(GeneratorId::fermionic_single(2, 1, Spin::alpha), 0.8);
        const auto [energy, grad] = energy_and_gradient(ansatz, h.matrix(ansatz.basis));
        (void)energy;
        CHECK(grad[0] == 0.0);
    }

    SECTION("sector mismatch is an argument error") {
        auto ansatz = ProductAnsatz::closed_shell(3, 1);
        const auto h = SpinFreeHamiltonian::random(2, 1);
        const auto wrong = h.matrix(build_sector_basis(2, 1, 1));
        CHECK_THROWS_AS(energy_and_gradient(ansatz, wrong), std::invalid_argument);
    }
}

TEST_CASE("pool counting reproduces the parameter table", "[ansatz][pool]") {
    // (n_elec, n_orb) columns (2,2) ... (16,16) with o = v = n_elec/2
    const long fermionic[8] = {3, 26, 117, 360, 875, 1818, 3381, 5792};
    const long adapted[8] = {2, 14, 54, 152, 350, 702, 1274, 2144};
    double previous_ratio = 0.0;
    for (int k = 1; k <= 8; ++k) {
        const PoolSpec f{k, k, PoolMode::fermionic_sd};
        const PoolSpec s{k, k, PoolMode::sa_singlet_only};
        CHECK(count_parameters(f) == fermionic[k - 1]);
        CHECK(count_parameters(s) == adapted[k - 1]);
        const double ratio =
            1.0 - static_cast<double>(adapted[k - 1]) / static_cast<double>(fermionic[k - 1]);
        CHECK(ratio > previous_ratio); // reduction grows with system size
        CHECK(ratio < 2.0 / 3.0);      // and stays below the asymptote
        previous_ratio = ratio;
    }
    CHECK(count_parameters({2, 2, PoolMode::sa_with_prime}) == 15);
    CHECK(count_parameters({8, 8, PoolMode::sa_with_prime}) == 2144 + 28 * 28);
}

TEST_CASE("pool enumeration", "[ansatz][pool]") {
    SECTION("the minimal active space has one single and one paired double") {
        const auto pool = enumerate_pool({1, 1, PoolMode::sa_singlet_only});
        REQUIRE(pool.size() == 2);
        CHECK(pool[0] == GeneratorId::sa_single(1, 0));
        CHECK(pool[1] == GeneratorId::sa_double_aiai(1, 0));
    }

    SECTION("(2,2) splits 4 singles + 4 aiai + 2 aiaj + 2 aibi + 2 aibj") {
        const auto pool = enumerate_pool({2, 2, PoolMode::sa_singlet_only});
        REQUIRE(pool.size() == 14);
        int counts[5] = {0, 0, 0, 0, 0};
        for (const auto& id : pool)
            switch (id.kind) {
            case GeneratorKind::sa_single: ++counts[0]; break;
            case GeneratorKind::sa_double_aiai: ++counts[1]; break;
            case GeneratorKind::sa_double_aiaj: ++counts[2]; break;
            case GeneratorKind::sa_double_aibi: ++counts[3]; break;
            case GeneratorKind::sa_double_aibj: ++counts[4]; break;
            default: FAIL("unexpected kind in singlet-only pool");
            }
        CHECK(counts[0] == 4);
        CHECK(counts[1] == 4);
        CHECK(counts[2] == 2);
        CHECK(counts[3] == 2);
        CHECK(counts[4] == 2);

        const auto with_prime = enumerate_pool({2, 2, PoolMode::sa_with_prime});
        CHECK(with_prime.size() == 15);
        CHECK(with_prime.back().kind == GeneratorKind::sa_double_prime_aibj);
    }

    SECTION("lengths equal the counting formulas and ids are unique") {
        for (int o = 1; o <= 4; ++o)
            for (int v = 1; v <= 4; ++v)
                for (const auto mode :
                     {PoolMode::fermionic_sd, PoolMode::sa_singlet_only, PoolMode::sa_with_prime}) {
                    const PoolSpec spec{o, v, mode};
                    const auto pool = enumerate_pool(spec);
                    CHECK(static_cast<long>(pool.size()) == count_parameters(spec));
                    const std::set<GeneratorId> unique(pool.begin(), pool.end());
                    CHECK(unique.size() == pool.size());
                }
    }
}

TEST_CASE("hamiltonian text import and export", "[ansatz][io]") {
    SECTION("round trip preserves every coefficient") {
        const auto h = SpinFreeHamiltonian::random(3, 321);
        std::ostringstream out;
        h.write(out);
        std::istringstream in(out.str());
        const auto back = SpinFreeHamiltonian::read(in, 3);
        for (int p = 0; p < 3; ++p)
            for (int q = 0; q < 3; ++q) {
                CHECK(back.one_body(p, q) == h.one_body(p, q));
                for (int r = 0; r < 3; ++r)
                    for (int s = 0; s < 3; ++s)
                        CHECK(back.two_body(p, q, r, s) == h.two_body(p, q, r, s));
            }
    }

    SECTION("comments and blank lines are tolerated") {
        std::istringstream in("# one-body\n\n0 1 0.5\n0 0 1 1 0.125  # tail comment\n");
        const auto h = SpinFreeHamiltonian::read(in, 2);
        CHECK(h.one_body(1, 0) == 0.5);
        CHECK(h.two_body(1, 1, 0, 0) == 0.125);
    }

    SECTION("symmetry-equivalent duplicates are rejected") {
        std::istringstream one("0 1 0.5\n1 0 0.25\n");
        CHECK_THROWS_AS(SpinFreeHamiltonian::read(one, 2), std::invalid_argument);
        std::istringstream two("0 1 1 0 0.5\n1 0 0 1 0.25\n");
        CHECK_THROWS_AS(SpinFreeHamiltonian::read(two, 2), std::invalid_argument);
    }

    SECTION("malformed lines are rejected") {
        std::istringstream bad_tokens("0 1 2 0.5\n");
        CHECK_THROWS_AS(SpinFreeHamiltonian::read(bad_tokens, 3), std::invalid_argument);
        std::istringstream bad_index("0 7 0.5\n");
        CHECK_THROWS_AS(SpinFreeHamiltonian::read(bad_index, 3), std::invalid_argument);
        std::istringstream bad_value("0 1 abc\n");
        CHECK_THROWS_AS(SpinFreeHamiltonian::read(bad_value, 3), std::invalid_argument);
    }
}
