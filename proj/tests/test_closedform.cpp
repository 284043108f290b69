/*******************************************************************************
 * Copyright (c) 2026 the spinad developers.
 * All rights reserved.
 *
 * This source code and the accompanying materials are made available under
 * the terms of the Apache License 2.0 which accompanies this distribution.
 ******************************************************************************/
#include <catch2/catch.hpp>

#include <cmath>
#include <random>
#include <thread>

#include <json.hpp>

#include "spinad/closedform.hpp"
#include "spinad/oracle.hpp"
#include "spinad/serialize.hpp"

using namespace spinad;

namespace {

double vec_distance(std::span<const double> a, std::span<const double> b) {
    double s = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i)
        s += (a[i] - b[i]) * (a[i] - b[i]);
    return std::sqrt(s);
}

std::vector<double> oracle_exp_apply(const SparseOperator& g, double theta,
                                     std::span<const double> v) {
    return oracle::expm(oracle::from_sparse(g.scaled(theta))).apply(v);
}

double max_table_difference(const ClosedFormCoefficients& a, const ClosedFormCoefficients& b) {
    REQUIRE(a.half_degree == b.half_degree);
    REQUIRE(a.entries.size() == b.entries.size());
    double worst = 0.0;
    for (std::size_t q = 0; q < a.entries.size(); ++q) {
        worst = std::max(worst, std::abs(a.entries[q].frequency - b.entries[q].frequency));
        REQUIRE(a.entries[q].k.size() == b.entries[q].k.size());
        for (std::size_t p = 0; p < a.entries[q].k.size(); ++p)
            worst = std::max(worst, std::abs(a.entries[q].k[p] - b.entries[q].k[p]));
    }
    return worst;
}

} // namespace

TEST_CASE("find_minimal_polynomial discovers the family relations", "[closedform]") {
    SECTION("fermionic single: order 3, coefficient -1") {
        const auto basis = build_sector_basis(2, 1, 1);
        const auto g =
            fermionic_generator(GeneratorId::fermionic_single(1, 0, Spin::alpha), basis);
        const auto rel = find_minimal_polynomial(g);
        REQUIRE(rel.order == 3);
        CHECK(rel.coefficients[0] == Approx(-1.0).margin(1e-10));
    }

    SECTION("aiaj on the stacked sectors of three orbitals: order 5, [-1/2, -3/2]") {
        const auto g = generator_on_all_sectors(GeneratorId::sa_double_aiaj(2, 0, 1), 3);
        const auto rel = find_minimal_polynomial(g);
        REQUIRE(rel.order == 5);
        CHECK(rel.coefficients[0] == Approx(-0.5).margin(1e-9));
        CHECK(rel.coefficients[1] == Approx(-1.5).margin(1e-9));
    }

    SECTION("triplet-intermediate aibj on four orbitals: order 11") {
        const auto g = generator_on_all_sectors(GeneratorId::sa_double_prime_aibj(2, 0, 3, 1), 4);
        const auto rel = find_minimal_polynomial(g);
        REQUIRE(rel.order == 11);
        const auto expect = family_relation(ClosedFormFamily::eleventh);
        for (std::size_t j = 0; j < 5; ++j)
            CHECK(rel.coefficients[j] == Approx(expect.coefficients[j]).margin(1e-9));
    }

    SECTION("spin-summed single satisfies its own quintic variant") {
        const auto g = generator_on_all_sectors(GeneratorId::sa_single(1, 0), 2);
        const auto rel = find_minimal_polynomial(g);
        REQUIRE(rel.order == 5);
        CHECK(rel.coefficients[0] == Approx(-1.0).margin(1e-9));
        CHECK(rel.coefficients[1] == Approx(-2.5).margin(1e-9));
    }

    SECTION("preconditions") {
        const auto basis = build_sector_basis(2, 1, 1);
        const auto e = singlet_excitation(1, 0, basis); // not skew-symmetric
        CHECK_THROWS_AS(find_minimal_polynomial(e), std::invalid_argument);
        const auto g =
            fermionic_generator(GeneratorId::fermionic_single(1, 0, Spin::alpha), basis);
        CHECK_THROWS_AS(find_minimal_polynomial(g.matrix, 4), std::invalid_argument);
    }
}

TEST_CASE("verify_relation measures relation residuals", "[closedform]") {
    SECTION("the paired double satisfies the cubic relation") {
        const auto g = generator_on_all_sectors(GeneratorId::sa_double_aiai(1, 0), 2);
        const auto res = relation_residual(g, family_relation(ClosedFormFamily::cubic));
        CHECK(res.absolute <= 1e-13 * std::max(1.0, res.scale));
    }

    SECTION("aibj satisfies the ninth-order relation on the union of sectors") {
        const auto g = generator_on_all_sectors(GeneratorId::sa_double_aibj(2, 0, 3, 1), 4);
        const auto res = relation_residual(g, family_relation(ClosedFormFamily::ninth));
        CHECK(res.relative() <= tol::relation_relative);
    }

    SECTION("the eleventh-order relation holds for the triplet-intermediate double") {
        const auto g = generator_on_all_sectors(GeneratorId::sa_double_prime_aibj(2, 0, 3, 1), 4);
        const auto res = relation_residual(g, family_relation(ClosedFormFamily::eleventh));
        CHECK(res.relative() <= tol::relation_relative);
    }

    SECTION("the equivalent low-power identity holds with the tabulated constants") {
        // G = a1 G^3 + a2 G^5 + a3 G^7 + a4 G^9 + a5 G^11
        const auto g = generator_on_all_sectors(GeneratorId::sa_double_prime_aibj(2, 0, 3, 1), 4);
        const auto powers = operator_powers(g.matrix, 11);
        SparseOperator residual = powers[0];
        for (int j = 0; j < 5; ++j)
            residual = SparseOperator::linear_combination(
                1.0, residual, -k_eleventh_low_power_form[static_cast<std::size_t>(j)],
                powers[static_cast<std::size_t>(2 * j + 2)]);
        CHECK(residual.max_abs() <= tol::relation_relative * powers[0].max_abs());
    }

    SECTION("a zero generator has zero residual for any relation") {
        const auto basis = build_sector_basis(2, 1, 1);
        const auto g = fermionic_generator(GeneratorId::fermionic_single(0, 0, Spin::alpha), basis);
        REQUIRE(g.matrix.nnz() == 0);
        CHECK(verify_relation(g, family_relation(ClosedFormFamily::quintic)) == 0.0);
    }
}

TEST_CASE("derive_closed_form reproduces the reference tables", "[closedform]") {
    SECTION("quintic: frequencies and all amplitudes") {
        const auto cf = derive_closed_form(ClosedFormFamily::quintic);
        REQUIRE(cf.half_degree == 2);
        // characteristic roots -1 and -1/2
        CHECK(cf.entries[0].frequency * cf.entries[0].frequency == Approx(1.0).margin(1e-13));
        CHECK(cf.entries[1].frequency * cf.entries[1].frequency == Approx(0.5).margin(1e-13));
        CHECK(max_table_difference(cf, tabulated_coefficients(ClosedFormFamily::quintic)) <=
              tol::coefficient_match_abs);
    }

    SECTION("ninth and eleventh, entry-wise") {
        for (const auto fam : {ClosedFormFamily::ninth, ClosedFormFamily::eleventh})
            CHECK(max_table_difference(derive_closed_form(fam), tabulated_coefficients(fam)) <=
                  tol::coefficient_match_abs);
    }

    SECTION("cubic reduces to sin / (1 - cos) with unit frequency") {
        const auto cf = derive_closed_form(PolynomialRelation{3, {-1.0}});
        REQUIRE(cf.half_degree == 1);
        CHECK(cf.entries[0].frequency == Approx(1.0).margin(1e-15));
        CHECK(cf.entries[0].k[0] == Approx(1.0).margin(1e-15));
        CHECK(cf.entries[0].k[1] == Approx(-1.0).margin(1e-15));
    }

    SECTION("frequencies come out sorted descending") {
        const auto cf = derive_closed_form(ClosedFormFamily::eleventh);
        for (std::size_t q = 1; q < cf.entries.size(); ++q)
            CHECK(cf.entries[q - 1].frequency > cf.entries[q].frequency);
    }

    SECTION("degenerate relations are rejected with a root report") {
        // x - 1 = 0: positive root
        CHECK_THROWS_AS(derive_closed_form(PolynomialRelation{3, {1.0}}), DegeneracyError);
        // x^2 + 2x + 1: repeated root -1
        try {
            derive_closed_form(PolynomialRelation{5, {-1.0, -2.0}});
            FAIL("expected DegeneracyError");
        } catch (const DegeneracyError& e) {
            REQUIRE(e.roots().size() == 2);
            CHECK(std::abs(e.roots()[0].real() + 1.0) < 1e-6);
        }
    }

    SECTION("the table lookup rejects the formula families") {
        CHECK_THROWS_AS(tabulated_coefficients(ClosedFormFamily::cubic), std::invalid_argument);
        CHECK_THROWS_AS(tabulated_coefficients(ClosedFormFamily::sa_single_pair),
                        std::invalid_argument);
    }
}

TEST_CASE("first-order sum rule: sum_n k_n^(1) S_n = 1", "[closedform]") {
    for (const auto fam : {ClosedFormFamily::cubic, ClosedFormFamily::sa_single_pair,
                           ClosedFormFamily::quintic, ClosedFormFamily::ninth,
                           ClosedFormFamily::eleventh}) {
        const auto cf = derive_closed_form(fam);
        double sum = 0.0;
        for (const auto& e : cf.entries)
            sum += e.k[0] * e.frequency;
        CHECK(sum == Approx(1.0).margin(tol::coefficient_match_abs));
    }
}

TEST_CASE("apply_exponential", "[closedform]") {
    std::mt19937_64 rng(2024);

    SECTION("theta = 0 returns the vector unchanged") {
        const auto basis = build_sector_basis(3, 1, 1);
        const auto g = spin_adapted_generator(GeneratorId::sa_double_aiaj(2, 0, 1), basis);
        const auto v = random_unit_vector(basis.size(), rng);
        const auto u = apply_exponential(g, 0.0, v);
        CHECK(vec_distance(u, v) == 0.0);
    }

    SECTION("cubic at theta = pi collapses to I + 2 G^2") {
        const auto basis = build_sector_basis(2, 1, 1);
        const auto g =
            fermionic_generator(GeneratorId::fermionic_single(1, 0, Spin::alpha), basis);
        const auto v = random_unit_vector(basis.size(), rng);
        const double pi = 3.14159265358979323846;
        const auto u = apply_exponential(g, pi, v);
        auto expect = v;
        const auto g2v = g.matrix.apply(g.matrix.apply(v));
        axpy(1.0 - std::cos(pi), g2v, expect); // the sin(pi) term vanishes up to rounding
        axpy(std::sin(pi), g.matrix.apply(v), expect);
        CHECK(vec_distance(u, expect) <= 1e-14);
        CHECK(vec_distance(u, oracle_exp_apply(g.matrix, pi, v)) <= tol::oracle_vector_2norm);
    }

    SECTION("quintic at theta = 0.37 matches the dense oracle") {
        const auto basis = build_sector_basis(3, 1, 1);
        const auto g = spin_adapted_generator(GeneratorId::sa_double_aiaj(2, 0, 1), basis);
        const auto v = random_unit_vector(basis.size(), rng);
        const auto u = apply_exponential(g, 0.37, v);
        CHECK(vec_distance(u, oracle_exp_apply(g.matrix, 0.37, v)) <= tol::oracle_vector_2norm);
    }

    SECTION("group property exp(t1 G) exp(t2 G) = exp((t1+t2) G)") {
        const auto basis = build_sector_basis(4, 2, 2);
        const auto g =
            spin_adapted_generator(GeneratorId::sa_double_prime_aibj(2, 0, 3, 1), basis);
        std::uniform_real_distribution<double> angle(-3.0, 3.0);
        for (int trial = 0; trial < 25; ++trial) {
            const double t1 = angle(rng), t2 = angle(rng);
            const auto v = random_unit_vector(basis.size(), rng);
            const auto lhs = apply_exponential(g, t1, apply_exponential(g, t2, v));
            const auto rhs = apply_exponential(g, t1 + t2, v);
            CHECK(vec_distance(lhs, rhs) <= tol::group_property_2norm);
        }
    }

    SECTION("unitarity of the assembled matrix across the theta set") {
        const auto basis = build_sector_basis(4, 1, 1);
        const double pi = 3.14159265358979323846;
        for (const auto& id :
             {GeneratorId::sa_single(3, 0), GeneratorId::sa_double_aibj(2, 0, 3, 1),
              GeneratorId::sa_double_prime_aibj(2, 0, 3, 1)}) {
            const auto g = build_generator(id, basis);
            const auto n = basis.size();
            for (const double theta : {0.1, 0.37, 1.0, pi, 10.0})
                for (const double sign : {1.0, -1.0}) {
                    const auto u = exponential_matrix(g, sign * theta);
                    double worst = 0.0;
                    for (std::size_t i = 0; i < n; ++i)
                        for (std::size_t j = 0; j < n; ++j) {
                            double s = 0.0;
                            for (std::size_t k = 0; k < n; ++k)
                                s += u[k * n + i] * u[k * n + j];
                            worst = std::max(worst, std::abs(s - (i == j ? 1.0 : 0.0)));
                        }
                    CHECK(worst <= tol::unitarity_max_abs);
                }
        }
    }

    SECTION("d/dtheta exp(theta G) v = G exp(theta G) v with O(h^2) central differences") {
        const auto basis = build_sector_basis(3, 1, 1);
        const auto g = spin_adapted_generator(GeneratorId::sa_double_aibi(1, 2, 0), basis);
        const auto v = random_unit_vector(basis.size(), rng);
        const double theta = 0.61;
        const auto exact = g.matrix.apply(apply_exponential(g, theta, v));
        double previous = -1.0;
        for (const double h : {1e-3, 1e-4, 1e-5}) {
            const auto plus = apply_exponential(g, theta + h, v);
            const auto minus = apply_exponential(g, theta - h, v);
            std::vector<double> fd(v.size());
            for (std::size_t i = 0; i < v.size(); ++i)
                fd[i] = (plus[i] - minus[i]) / (2.0 * h);
            const double err = vec_distance(fd, exact);
            CHECK(err <= 5.0 * h * h + 5e-12); // |f'''| <= S_max^3 < 3 here
            if (previous > 0.0)
                CHECK(err < previous);
            previous = err;
        }
    }

    SECTION("dimension mismatch is an argument error") {
        const auto basis = build_sector_basis(2, 1, 1);
        const auto g = spin_adapted_generator(GeneratorId::sa_double_aiai(1, 0), basis);
        std::vector<double> wrong(basis.size() + 1, 0.0);
        CHECK_THROWS_AS(apply_exponential(g, 0.3, wrong), std::invalid_argument);
    }
}

TEST_CASE("concurrent first use populates the power cache exactly once", "[closedform]") {
    const auto basis = build_sector_basis(4, 2, 2);
    const auto g = spin_adapted_generator(GeneratorId::sa_double_prime_aibj(2, 0, 3, 1), basis);
    std::mt19937_64 rng(8);
    const auto v = random_unit_vector(basis.size(), rng);
    const double theta = 0.81;

    std::vector<std::vector<double>> results(8);
    std::vector<std::thread> workers;
    for (std::size_t t = 0; t < results.size(); ++t)
        workers.emplace_back([&, t] { results[t] = apply_exponential(g, theta, v); });
    for (auto& w : workers)
        w.join();
    for (std::size_t t = 1; t < results.size(); ++t)
        CHECK(vec_distance(results[t], results[0]) == 0.0);
    CHECK(vec_distance(results[0], oracle_exp_apply(g.matrix, theta, v)) <=
          tol::oracle_vector_2norm);
}

TEST_CASE("the recurrence route cross-checks the quintic closed form", "[closedform]") {
    // Iterate the amplitude recurrence K_n^[1] = A K_(n-1)^[3],
    // K_n^[3] = B K_(n-1)^[3] + K_(n-1)^[1] with K_1^[1] = A, K_1^[3] = B and
    // compare the partial series f_1 = theta + sum theta^(2n+3)/(2n+3)! K_n^[1]
    // (f_3 analogous) against the trigonometric closed form.
    const long double a = -0.5L, b = -1.5L;
    const long double theta = 0.37L;
    long double k1 = a, k3 = b;
    long double f1 = theta, f3 = theta * theta * theta / 6.0L;
    long double factorial = 6.0L; // 3!
    long double theta_pow = theta * theta * theta;
    for (int n = 1; n <= 12; ++n) {
        theta_pow *= theta * theta;
        factorial *= (2 * n + 2) * (2 * n + 3);
        f1 += theta_pow / factorial * k1;
        f3 += theta_pow / factorial * k3;
        const long double k1_next = a * k3;
        const long double k3_next = b * k3 + k1;
        k1 = k1_next;
        k3 = k3_next;
    }

    const auto cf = derive_closed_form(ClosedFormFamily::quintic);
    long double f1_closed = 0.0L, f3_closed = 0.0L;
    for (const auto& e : cf.entries) {
        f1_closed += static_cast<long double>(e.k[0]) *
                     std::sin(static_cast<long double>(e.frequency) * theta);
        f3_closed += static_cast<long double>(e.k[2]) *
                     std::sin(static_cast<long double>(e.frequency) * theta);
    }
    CHECK(std::abs(static_cast<double>(f1 - f1_closed)) <= 1e-10);
    CHECK(std::abs(static_cast<double>(f3 - f3_closed)) <= 1e-10);
}

TEST_CASE("spin eigenstates stay in their spin sector under sa exponentials", "[closedform]") {
    const auto basis = build_sector_basis(3, 1, 1);
    const auto ops = spin_operators(basis);
    std::vector<double> v(basis.size(), 0.0);
    v[static_cast<std::size_t>(basis.index_of(0b000011))] = 1.0; // closed shell, s = 0

    std::mt19937_64 rng(5);
    std::uniform_real_distribution<double> angle(-2.0, 2.0);
    for (const auto& id : {GeneratorId::sa_single(2, 0), GeneratorId::sa_double_aiai(1, 0),
                           GeneratorId::sa_double_aiaj(2, 0, 1),
                           GeneratorId::sa_double_aibi(1, 2, 0)}) {
        const auto g = build_generator(id, basis);
        const auto u = apply_exponential(g, angle(rng), v);
        const auto s2u = ops.s_squared.apply(u);
        const double rayleigh = dot(u, s2u) / dot(u, u);
        CHECK(std::abs(rayleigh - 0.0) <= 1e-12);
        CHECK(norm2(s2u) <= tol::spin_state_residual);
    }
}

TEST_CASE("coefficient tables serialize to stable JSON", "[closedform][serialize]") {
    const auto cf = derive_closed_form(ClosedFormFamily::quintic);
    const auto rel = family_relation(ClosedFormFamily::quintic);
    const auto text = to_json(cf, "quintic", rel);

    const auto parsed = nlohmann::json::parse(text);
    CHECK(parsed.at("family").get<std::string>() == "quintic");
    REQUIRE(parsed.at("relation").size() == 2);
    CHECK(parsed.at("relation")[0].get<double>() == rel.coefficients[0]);
    CHECK(parsed.at("relation")[1].get<double>() == rel.coefficients[1]);
    REQUIRE(parsed.at("entries").size() == 2);
    for (std::size_t q = 0; q < 2; ++q) {
        // 17 significant digits round-trip doubles exactly
        CHECK(parsed.at("entries")[q].at("S").get<double>() == cf.entries[q].frequency);
        REQUIRE(parsed.at("entries")[q].at("k").size() == 4);
        for (std::size_t p = 0; p < 4; ++p)
            CHECK(parsed.at("entries")[q].at("k")[p].get<double>() == cf.entries[q].k[p]);
    }
}
