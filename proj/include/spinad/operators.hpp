/*******************************************************************************
 * Copyright (c) 2026 the spinad developers.
 * All rights reserved.
 *
 * This source code and the accompanying materials are made available under
 * the terms of the Apache License 2.0 which accompanies this distribution.
 ******************************************************************************/
#pragma once

#include <array>
#include <memory>
#include <string>
#include <vector>

#include "spinad/fock.hpp"
#include "spinad/relations.hpp"

namespace spinad {

enum class GeneratorKind {
    fermionic_single,
    fermionic_double,
    sa_single,
    sa_double_aiai,
    sa_double_aiaj,
    sa_double_aibi,
    sa_double_aibj,
    sa_double_prime_aibj,
};

inline std::string to_string(GeneratorKind k) {
    switch (k) {
    case GeneratorKind::fermionic_single: return "fermionic_single";
    case GeneratorKind::fermionic_double: return "fermionic_double";
    case GeneratorKind::sa_single: return "sa_single";
    case GeneratorKind::sa_double_aiai: return "sa_double_aiai";
    case GeneratorKind::sa_double_aiaj: return "sa_double_aiaj";
    case GeneratorKind::sa_double_aibi: return "sa_double_aibi";
    case GeneratorKind::sa_double_aibj: return "sa_double_aibj";
    case GeneratorKind::sa_double_prime_aibj: return "sa_double_prime_aibj";
    }
    return "?";
}

/// Identifier of an excitation generator. Spatial orbital labels are stored
/// in `orb`; the layout depends on the kind:
///   fermionic_single / sa_single / sa_double_aiai : {a, i}
///   sa_double_aiaj                                : {a, i, j}      with i < j
///   sa_double_aibi                                : {a, b, i}      with a < b
///   sa_double_aibj                                : {a, i, b, j}   with a < b, i != j
///   sa_double_prime_aibj                          : {a, i, b, j}   with a < b, i < j
///   fermionic_double                              : {a, i, b, j}, spins {sigma(a,i), tau(b,j)}
/// The aibj label order is meaningful: (a,i,b,j) and (a,j,b,i) are two
/// distinct canonical ids (two couplings of the same index quadruple). For
/// the primed kind non-canonical labels are normalized and the sign flip of
/// the antisymmetric coupling is recorded in `sign`.
struct GeneratorId {
    GeneratorKind kind = GeneratorKind::fermionic_single;
    std::array<int, 4> orb{-1, -1, -1, -1};
    std::array<Spin, 2> spin{Spin::alpha, Spin::alpha};
    int sign = 1;

    static GeneratorId fermionic_single(int a, int i, Spin s) {
        require_valid_indices(a, i);
        GeneratorId id;
        id.kind = GeneratorKind::fermionic_single;
        id.orb = {a, i, -1, -1};
        id.spin = {s, s};
        return id;
    }

    static GeneratorId fermionic_double(int a, int i, Spin s_ai, int b, int j, Spin s_bj) {
        require_valid_indices(a, i);
        require_valid_indices(b, j);
        GeneratorId id;
        id.kind = GeneratorKind::fermionic_double;
        id.orb = {a, i, b, j};
        id.spin = {s_ai, s_bj};
        return id;
    }

    static GeneratorId sa_single(int a, int i) {
        GeneratorId id;
        id.kind = GeneratorKind::sa_single;
        id.orb = {a, i, -1, -1};
        return id;
    }

    static GeneratorId sa_double_aiai(int a, int i) {
        GeneratorId id;
        id.kind = GeneratorKind::sa_double_aiai;
        id.orb = {a, i, -1, -1};
        return id;
    }

    static GeneratorId sa_double_aiaj(int a, int i, int j) {
        if (i == j)
            throw std::invalid_argument("sa_double_aiaj requires i != j");
        if (i > j)
            std::swap(i, j); // symmetric coupling, no sign
        GeneratorId id;
        id.kind = GeneratorKind::sa_double_aiaj;
        id.orb = {a, i, j, -1};
        return id;
    }

    static GeneratorId sa_double_aibi(int a, int b, int i) {
        if (a == b)
            throw std::invalid_argument("sa_double_aibi requires a != b");
        if (a > b)
            std::swap(a, b);
        GeneratorId id;
        id.kind = GeneratorKind::sa_double_aibi;
        id.orb = {a, b, i, -1};
        return id;
    }

    static GeneratorId sa_double_aibj(int a, int i, int b, int j) {
        if (a == b || i == j)
            throw std::invalid_argument("sa_double_aibj requires a != b and i != j");
        if (a > b) {
            std::swap(a, b); // simultaneous pair swap leaves the operator unchanged
            std::swap(i, j);
        }
        GeneratorId id;
        id.kind = GeneratorKind::sa_double_aibj;
        id.orb = {a, i, b, j};
        return id;
    }

    static GeneratorId sa_double_prime_aibj(int a, int i, int b, int j) {
        if (a == b || i == j)
            throw std::invalid_argument("sa_double_prime_aibj requires a != b and i != j");
        int sign = 1;
        if (a > b) {
            std::swap(a, b);
            std::swap(i, j); // pair swap: even, sign unchanged
        }
        if (i > j) {
            std::swap(i, j);
            sign = -sign; // antisymmetric under exchanging i and j alone
        }
        GeneratorId id;
        id.kind = GeneratorKind::sa_double_prime_aibj;
        id.orb = {a, i, b, j};
        id.sign = sign;
        return id;
    }

    ClosedFormFamily family() const {
        switch (kind) {
        case GeneratorKind::fermionic_single:
        case GeneratorKind::fermionic_double:
        case GeneratorKind::sa_double_aiai: return ClosedFormFamily::cubic;
        case GeneratorKind::sa_single: return ClosedFormFamily::sa_single_pair;
        case GeneratorKind::sa_double_aiaj:
        case GeneratorKind::sa_double_aibi: return ClosedFormFamily::quintic;
        case GeneratorKind::sa_double_aibj: return ClosedFormFamily::ninth;
        case GeneratorKind::sa_double_prime_aibj: return ClosedFormFamily::eleventh;
        }
        return ClosedFormFamily::cubic;
    }

    /// Smallest spatial-orbital count on which the id is defined.
    int min_orbitals() const {
        int m = 0;
        for (const int p : orb)
            m = std::max(m, p + 1);
        return m;
    }

    std::string str() const {
        switch (kind) {
        case GeneratorKind::fermionic_single:
            return "G(" + std::to_string(orb[0]) + spin_label(spin[0]) + "<-" +
                   std::to_string(orb[1]) + spin_label(spin[0]) + ")";
        case GeneratorKind::fermionic_double:
            return "G(" + std::to_string(orb[0]) + spin_label(spin[0]) + "," +
                   std::to_string(orb[2]) + spin_label(spin[1]) + "<-" + std::to_string(orb[1]) +
                   spin_label(spin[0]) + "," + std::to_string(orb[3]) + spin_label(spin[1]) + ")";
        case GeneratorKind::sa_single:
            return "SA_single(a=" + std::to_string(orb[0]) + ",i=" + std::to_string(orb[1]) + ")";
        case GeneratorKind::sa_double_aiai:
            return "SA_aiai(a=" + std::to_string(orb[0]) + ",i=" + std::to_string(orb[1]) + ")";
        case GeneratorKind::sa_double_aiaj:
            return "SA_aiaj(a=" + std::to_string(orb[0]) + ",i=" + std::to_string(orb[1]) +
                   ",j=" + std::to_string(orb[2]) + ")";
        case GeneratorKind::sa_double_aibi:
            return "SA_aibi(a=" + std::to_string(orb[0]) + ",b=" + std::to_string(orb[1]) +
                   ",i=" + std::to_string(orb[2]) + ")";
        case GeneratorKind::sa_double_aibj:
            return "SA_aibj(a=" + std::to_string(orb[0]) + ",i=" + std::to_string(orb[1]) +
                   ",b=" + std::to_string(orb[2]) + ",j=" + std::to_string(orb[3]) + ")";
        case GeneratorKind::sa_double_prime_aibj:
            return std::string("SA_aibj'(a=") + std::to_string(orb[0]) +
                   ",i=" + std::to_string(orb[1]) + ",b=" + std::to_string(orb[2]) +
                   ",j=" + std::to_string(orb[3]) + (sign < 0 ? ",sign=-1)" : ")");
        }
        return "?";
    }

    friend bool operator==(const GeneratorId&, const GeneratorId&) = default;
    friend auto operator<=>(const GeneratorId&, const GeneratorId&) = default;

private:
    static void require_valid_indices(int a, int i) {
        if (a < 0 || i < 0)
            throw std::invalid_argument("GeneratorId: negative orbital index");
    }
};

/// An anti-Hermitian excitation generator on one sector (or on a direct sum
/// of sectors): G = T - T^dagger, real skew-symmetric.
struct Generator {
    GeneratorId id;
    ClosedFormFamily family = ClosedFormFamily::cubic;
    SparseOperator matrix;
    /// sa_single only: the two commuting one-spin parts G_alpha, G_beta
    /// (unnormalized), whose cubic exponentials compose the product form.
    std::vector<SparseOperator> pair_parts;
    std::shared_ptr<ExpWorkspace> workspace;
};

/// Spin-summed singlet single excitation E_ai = a+_{a,alpha} a_{i,alpha}
///                                            + a+_{a,beta}  a_{i,beta}.
inline SparseOperator singlet_excitation(int a, int i, const SectorBasis& basis) {
    if (a < 0 || a >= basis.n_orbitals() || i < 0 || i >= basis.n_orbitals())
        throw std::invalid_argument("singlet_excitation: orbital out of range");
    OperatorString alpha_part = {{FieldOpKind::create, {a, Spin::alpha}},
                                 {FieldOpKind::annihilate, {i, Spin::alpha}}};
    OperatorString beta_part = {{FieldOpKind::create, {a, Spin::beta}},
                                {FieldOpKind::annihilate, {i, Spin::beta}}};
    return compose_number_conserving(alpha_part, basis) +
           compose_number_conserving(beta_part, basis);
}

namespace detail {

inline SparseOperator anti_hermitian(const SparseOperator& t) {
    return SparseOperator::linear_combination(1.0, t, -1.0, t.transposed());
}

inline void check_orbitals(const GeneratorId& id, const SectorBasis& basis) {
    if (id.min_orbitals() > basis.n_orbitals())
        throw std::invalid_argument("generator " + id.str() + " needs more orbitals than sector has");
}

} // namespace detail

/// Generator of a generic fermionic excitation (kind fermionic_single or
/// fermionic_double), G = T - T^T with T the elementary operator string.
inline Generator fermionic_generator(const GeneratorId& id, const SectorBasis& basis) {
    detail::check_orbitals(id, basis);
    SparseOperator t;
    if (id.kind == GeneratorKind::fermionic_single) {
        OperatorString s = {{FieldOpKind::create, {id.orb[0], id.spin[0]}},
                            {FieldOpKind::annihilate, {id.orb[1], id.spin[0]}}};
        t = compose_number_conserving(s, basis);
    } else if (id.kind == GeneratorKind::fermionic_double) {
        OperatorString s = {{FieldOpKind::create, {id.orb[0], id.spin[0]}},
                            {FieldOpKind::create, {id.orb[2], id.spin[1]}},
                            {FieldOpKind::annihilate, {id.orb[3], id.spin[1]}},
                            {FieldOpKind::annihilate, {id.orb[1], id.spin[0]}}};
        t = compose_number_conserving(s, basis);
    } else {
        throw std::invalid_argument("fermionic_generator: id is not a fermionic kind");
    }
    return Generator{id, id.family(), detail::anti_hermitian(t), {},
                     std::make_shared<ExpWorkspace>()};
}

/// Generator of a spin-adapted excitation. Normalizations:
///   sa_single      T = E_ai / sqrt(2)
///   aiai           T = E_ai E_ai / 2
///   aiaj           T = (E_ai E_aj + E_aj E_ai) / (2 sqrt(2))
///   aibi           T = E_ai E_bi / sqrt(2)
///   aibj           T = (E_ai E_bj + E_aj E_bi) / 2
///   primed aibj    T = (E_ai E_bj - E_aj E_bi) / (2 sqrt(3))
inline Generator spin_adapted_generator(const GeneratorId& id, const SectorBasis& basis) {
    detail::check_orbitals(id, basis);
    const double inv_sqrt2 = 1.0 / std::sqrt(2.0);
    Generator g;
    g.id = id;
    g.family = id.family();
    switch (id.kind) {
    case GeneratorKind::sa_single: {
        OperatorString sa = {{FieldOpKind::create, {id.orb[0], Spin::alpha}},
                             {FieldOpKind::annihilate, {id.orb[1], Spin::alpha}}};
        OperatorString sb = {{FieldOpKind::create, {id.orb[0], Spin::beta}},
                             {FieldOpKind::annihilate, {id.orb[1], Spin::beta}}};
        const auto ga = detail::anti_hermitian(compose_number_conserving(sa, basis));
        const auto gb = detail::anti_hermitian(compose_number_conserving(sb, basis));
        g.matrix = SparseOperator::linear_combination(inv_sqrt2, ga, inv_sqrt2, gb);
        g.pair_parts = {ga, gb};
        break;
    }
    case GeneratorKind::sa_double_aiai: {
        const auto e = singlet_excitation(id.orb[0], id.orb[1], basis);
        g.matrix = detail::anti_hermitian((e * e).scaled(0.5));
        break;
    }
    case GeneratorKind::sa_double_aiaj: {
        const auto e1 = singlet_excitation(id.orb[0], id.orb[1], basis);
        const auto e2 = singlet_excitation(id.orb[0], id.orb[2], basis);
        const auto t = SparseOperator::linear_combination(1.0, e1 * e2, 1.0, e2 * e1)
                           .scaled(0.5 * inv_sqrt2);
        g.matrix = detail::anti_hermitian(t);
        break;
    }
    case GeneratorKind::sa_double_aibi: {
        const auto e1 = singlet_excitation(id.orb[0], id.orb[2], basis);
        const auto e2 = singlet_excitation(id.orb[1], id.orb[2], basis);
        g.matrix = detail::anti_hermitian((e1 * e2).scaled(inv_sqrt2));
        break;
    }
    case GeneratorKind::sa_double_aibj: {
        const auto eai = singlet_excitation(id.orb[0], id.orb[1], basis);
        const auto ebj = singlet_excitation(id.orb[2], id.orb[3], basis);
        const auto eaj = singlet_excitation(id.orb[0], id.orb[3], basis);
        const auto ebi = singlet_excitation(id.orb[2], id.orb[1], basis);
        const auto t =
            SparseOperator::linear_combination(1.0, eai * ebj, 1.0, eaj * ebi).scaled(0.5);
        g.matrix = detail::anti_hermitian(t);
        break;
    }
    case GeneratorKind::sa_double_prime_aibj: {
        const auto eai = singlet_excitation(id.orb[0], id.orb[1], basis);
        const auto ebj = singlet_excitation(id.orb[2], id.orb[3], basis);
        const auto eaj = singlet_excitation(id.orb[0], id.orb[3], basis);
        const auto ebi = singlet_excitation(id.orb[2], id.orb[1], basis);
        const double norm = id.sign / (2.0 * std::sqrt(3.0));
        const auto t =
            SparseOperator::linear_combination(1.0, eai * ebj, -1.0, eaj * ebi).scaled(norm);
        g.matrix = detail::anti_hermitian(t);
        break;
    }
    default:
        throw std::invalid_argument("spin_adapted_generator: id is not a spin-adapted kind");
    }
    g.workspace = std::make_shared<ExpWorkspace>();
    return g;
}

inline Generator build_generator(const GeneratorId& id, const SectorBasis& basis) {
    if (id.kind == GeneratorKind::fermionic_single || id.kind == GeneratorKind::fermionic_double)
        return fermionic_generator(id, basis);
    return spin_adapted_generator(id, basis);
}

/// The generator assembled block-diagonally over every (n_alpha, n_beta)
/// sector of n_orb orbitals, in canonical sector order. The polynomial
/// relation of a family is an operator identity; single small sectors can
/// satisfy shorter relations, the direct sum exhibits the full one.
inline Generator generator_on_all_sectors(const GeneratorId& id, int n_orb) {
    std::vector<SparseOperator> blocks;
    std::vector<SparseOperator> part_a, part_b;
    for (const auto& [na, nb] : all_sectors(n_orb)) {
        const SectorBasis basis(n_orb, na, nb);
        auto g = build_generator(id, basis);
        blocks.push_back(std::move(g.matrix));
        if (!g.pair_parts.empty()) {
            part_a.push_back(std::move(g.pair_parts[0]));
            part_b.push_back(std::move(g.pair_parts[1]));
        }
    }
    Generator g;
    g.id = id;
    g.family = id.family();
    g.matrix = block_diagonal(blocks);
    if (!part_a.empty())
        g.pair_parts = {block_diagonal(part_a), block_diagonal(part_b)};
    g.workspace = std::make_shared<ExpWorkspace>();
    return g;
}

/// Total-spin operators on a sector. s_plus maps the (n_alpha, n_beta) sector
/// into the (n_alpha+1, n_beta-1) sector basis (an empty matrix when that
/// sector does not exist); s_minus is its transpose, and
/// s_squared = s_minus s_plus + s_z (s_z + 1) is square on the sector.
struct SpinOperators {
    SparseOperator s_z;
    SparseOperator s_plus;
    SparseOperator s_minus;
    SparseOperator s_squared;
};

inline SpinOperators spin_operators(const SectorBasis& basis) {
    const auto n = static_cast<SparseOperator::Index>(basis.size());
    const int n_orb = basis.n_orbitals();

    SparseOperator s_z = SparseOperator::zero(n, n);
    for (int p = 0; p < n_orb; ++p) {
        OperatorString na = {{FieldOpKind::create, {p, Spin::alpha}},
                             {FieldOpKind::annihilate, {p, Spin::alpha}}};
        OperatorString nb = {{FieldOpKind::create, {p, Spin::beta}},
                             {FieldOpKind::annihilate, {p, Spin::beta}}};
        const auto diff = SparseOperator::linear_combination(
            0.5, compose_number_conserving(na, basis), -0.5, compose_number_conserving(nb, basis));
        s_z = s_z + diff;
    }

    SparseOperator s_plus;
    const int na_up = basis.n_alpha() + 1;
    const int nb_dn = basis.n_beta() - 1;
    if (na_up <= n_orb && nb_dn >= 0) {
        const SectorBasis mid(n_orb, basis.n_alpha(), nb_dn);
        const SectorBasis up(n_orb, na_up, nb_dn);
        s_plus = SparseOperator::zero(static_cast<SparseOperator::Index>(up.size()), n);
        for (int p = 0; p < n_orb; ++p) {
            const auto lower = elementary(FieldOpKind::annihilate, {p, Spin::beta}, basis, mid);
            const auto raise = elementary(FieldOpKind::create, {p, Spin::alpha}, mid, up);
            s_plus = s_plus + raise * lower;
        }
    } else {
        s_plus = SparseOperator::zero(0, n);
    }

    SparseOperator s_minus = s_plus.transposed();
    SparseOperator s_squared = s_minus * s_plus + s_z * s_z + s_z;
    return SpinOperators{std::move(s_z), std::move(s_plus), std::move(s_minus),
                         std::move(s_squared)};
}

} // namespace spinad
