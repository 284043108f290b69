/*******************************************************************************
 * Copyright (c) 2026 the spinad developers.
 * All rights reserved.
 *
 * This source code and the accompanying materials are made available under
 * the terms of the Apache License 2.0 which accompanies this distribution.
 ******************************************************************************/

// Command-line front door: verification against the dense oracle, coefficient
// derivation, pool counting, and benchmarking, with machine-readable JSON
// output for CI. Exit codes: 0 pass, 1 check failure, 2 usage error,
// 3 numerical degeneracy.

#include <atomic>
#include <chrono>
#include <cstdlib>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <thread>
#include <vector>

#include <CLI11.hpp>

#include "spinad/ansatz.hpp"
#include "spinad/closedform.hpp"
#include "spinad/oracle.hpp"
#include "spinad/serialize.hpp"
#include "spinad/tolerances.hpp"

namespace {

using namespace spinad;
using Clock = std::chrono::steady_clock;

class UsageError : public std::runtime_error {
public:
    explicit UsageError(const std::string& what) : std::runtime_error(what) {}
};

double elapsed_ms(Clock::time_point start) {
    return std::chrono::duration<double, std::milli>(Clock::now() - start).count();
}

struct CheckRow {
    std::string name;
    double residual = 0.0;
    double tolerance = 0.0;
    bool pass = false;
};

struct RunReport {
    std::string command;
    std::vector<std::pair<std::string, std::string>> inputs;
    bool has_seed = false;
    std::uint64_t seed = 0;
    std::vector<CheckRow> checks;
    double wall_ms = 0.0;

    bool pass() const {
        for (const auto& c : checks)
            if (!c.pass)
                return false;
        return true;
    }

    std::string json() const {
        JsonWriter w;
        w.begin_object();
        w.key("command").value(command);
        w.key("inputs").begin_object();
        for (const auto& [k, v] : inputs)
            w.key(k).value(v);
        w.end_object();
        if (has_seed)
            w.key("seed").value(static_cast<long>(seed));
        w.key("checks").begin_array();
        for (const auto& c : checks) {
            w.begin_object();
            w.key("name").value(c.name);
            w.key("residual").value(c.residual);
            w.key("tolerance").value(c.tolerance);
            w.key("pass").value(c.pass);
            w.end_object();
        }
        w.end_array();
        w.key("wall_ms").value(wall_ms);
        w.key("pass").value(pass());
        w.end_object();
        return w.str();
    }

    void print_human(std::ostream& os) const {
        os << command;
        for (const auto& [k, v] : inputs)
            os << "  " << k << "=" << v;
        if (has_seed)
            os << "  seed=" << seed;
        os << "\n";
        for (const auto& c : checks) {
            char buf[160];
            std::snprintf(buf, sizeof(buf), "  [%s] %-34s residual %10.3e  tol %7.1e\n",
                          c.pass ? "pass" : "FAIL", c.name.c_str(), c.residual, c.tolerance);
            os << buf;
        }
        char tail[96];
        std::snprintf(tail, sizeof(tail), "%s (%.1f ms)\n", pass() ? "PASS" : "FAIL", wall_ms);
        os << tail;
    }
};

unsigned worker_count(std::size_t jobs) {
    unsigned workers = std::thread::hardware_concurrency();
    if (workers == 0)
        workers = 1;
    if (const char* env = std::getenv("SPINAD_THREADS")) {
        char* end = nullptr;
        const long v = std::strtol(env, &end, 10);
        if (end && *end == '\0' && v > 0)
            workers = static_cast<unsigned>(std::min<long>(v, 256));
    }
    return static_cast<unsigned>(std::min<std::size_t>(workers, std::max<std::size_t>(jobs, 1)));
}

/// Runs f(0..n-1) on a small worker pool; results must go into pre-sized
/// per-index slots so the assembly order stays deterministic.
template <typename F> void parallel_for(std::size_t n, F&& f) {
    const unsigned workers = worker_count(n);
    if (workers <= 1) {
        for (std::size_t i = 0; i < n; ++i)
            f(i);
        return;
    }
    std::atomic<std::size_t> next{0};
    std::vector<std::thread> pool;
    pool.reserve(workers);
    for (unsigned w = 0; w < workers; ++w)
        pool.emplace_back([&] {
            while (true) {
                const std::size_t i = next.fetch_add(1);
                if (i >= n)
                    break;
                f(i);
            }
        });
    for (auto& t : pool)
        t.join();
}

GeneratorId case_id(const std::string& name, int n_orb) {
    auto need = [&](int min_orb) {
        if (n_orb < min_orb)
            throw UsageError("case '" + name + "' needs at least " + std::to_string(min_orb) +
                             " orbitals");
    };
    if (name == "fermionic-single") {
        need(2);
        return GeneratorId::fermionic_single(n_orb - 1, 0, Spin::alpha);
    }
    if (name == "fermionic-double") {
        need(2);
        return GeneratorId::fermionic_double(n_orb - 1, 0, Spin::alpha, n_orb - 2, 1, Spin::beta);
    }
    if (name == "sa-single") {
        need(2);
        return GeneratorId::sa_single(n_orb - 1, 0);
    }
    if (name == "aiai") {
        need(2);
        return GeneratorId::sa_double_aiai(n_orb - 1, 0);
    }
    if (name == "aiaj") {
        need(3);
        return GeneratorId::sa_double_aiaj(n_orb - 1, 0, 1);
    }
    if (name == "aibi") {
        need(3);
        return GeneratorId::sa_double_aibi(n_orb - 2, n_orb - 1, 0);
    }
    if (name == "aibj") {
        need(4);
        return GeneratorId::sa_double_aibj(n_orb - 2, 0, n_orb - 1, 1);
    }
    if (name == "prime-aibj") {
        need(4);
        return GeneratorId::sa_double_prime_aibj(n_orb - 2, 0, n_orb - 1, 1);
    }
    throw UsageError("unknown case '" + name +
                     "' (expected fermionic-single, fermionic-double, sa-single, aiai, aiaj, "
                     "aibi, aibj or prime-aibj)");
}

bool is_spin_adapted(GeneratorKind kind) {
    return kind != GeneratorKind::fermionic_single && kind != GeneratorKind::fermionic_double;
}

std::string join_thetas(const std::vector<double>& thetas) {
    std::string out;
    for (std::size_t i = 0; i < thetas.size(); ++i) {
        if (i)
            out += ',';
        out += format_float17(thetas[i]);
    }
    return out;
}

int emit(const RunReport& report, bool json) {
    if (json)
        std::cout << report.json() << "\n";
    else
        report.print_human(std::cout);
    return report.pass() ? 0 : 1;
}

// ---------------------------------------------------------------- verify

int run_verify(const std::string& case_name, int n_orb, std::vector<double> thetas,
               std::uint64_t seed, bool json) {
    if (n_orb < 1 || n_orb > 6)
        throw UsageError("--orbitals must be in [1, 6]");
    const auto id = case_id(case_name, n_orb);
    if (thetas.empty())
        thetas = {0.1, 0.37, 1.0};

    const auto start = Clock::now();
    RunReport report;
    report.command = "verify";
    report.has_seed = true;
    report.seed = seed;
    report.inputs = {{"case", case_name},
                     {"orbitals", std::to_string(n_orb)},
                     {"theta", join_thetas(thetas)},
                     {"family", to_string(id.family())}};

    // operator identity on the direct sum of every sector
    {
        const auto g = generator_on_all_sectors(id, n_orb);
        const auto res = relation_residual(g, family_relation(id.family()));
        report.checks.push_back({"relation(" + to_string(id.family()) + ")", res.relative(),
                                 tol::relation_relative, res.relative() <= tol::relation_relative});
    }

    const auto sectors = all_sectors(n_orb);
    std::vector<std::vector<CheckRow>> rows(sectors.size());
    parallel_for(sectors.size(), [&](std::size_t si) {
        const auto [na, nb] = sectors[si];
        const auto basis = build_sector_basis(n_orb, na, nb);
        const auto g = build_generator(id, basis);
        const std::string tag = "(" + std::to_string(na) + "," + std::to_string(nb) + ")";
        std::mt19937_64 rng(seed + 0x9e3779b97f4a7c15ULL * (si + 1));

        double worst_oracle = 0.0;
        double worst_unitary = 0.0;
        const std::size_t dim = basis.size();
        for (const double theta : thetas) {
            const auto v = random_unit_vector(dim, rng);
            const auto u = apply_exponential(g, theta, v);
            const auto w = oracle::expm(oracle::from_sparse(g.matrix.scaled(theta))).apply(v);
            double err2 = 0.0;
            for (std::size_t i = 0; i < dim; ++i)
                err2 += (u[i] - w[i]) * (u[i] - w[i]);
            worst_oracle = std::max(worst_oracle, std::sqrt(err2));

            const auto mat = exponential_matrix(g, theta);
            for (std::size_t i = 0; i < dim; ++i)
                for (std::size_t j = 0; j < dim; ++j) {
                    double s = 0.0;
                    for (std::size_t k = 0; k < dim; ++k)
                        s += mat[k * dim + i] * mat[k * dim + j];
                    worst_unitary = std::max(worst_unitary, std::abs(s - (i == j ? 1.0 : 0.0)));
                }
        }
        auto& out = rows[si];
        out.push_back({"oracle" + tag, worst_oracle, tol::oracle_vector_2norm,
                       worst_oracle <= tol::oracle_vector_2norm});
        out.push_back({"unitarity" + tag, worst_unitary, tol::unitarity_max_abs,
                       worst_unitary <= tol::unitarity_max_abs});

        const auto ops = spin_operators(basis);
        const double sz_comm =
            SparseOperator::max_abs_diff(g.matrix * ops.s_z, ops.s_z * g.matrix);
        if (is_spin_adapted(id.kind)) {
            const double s2_comm = SparseOperator::max_abs_diff(g.matrix * ops.s_squared,
                                                                ops.s_squared * g.matrix);
            out.push_back({"spin-s2" + tag, s2_comm, tol::spin_commutator_max_abs,
                           s2_comm <= tol::spin_commutator_max_abs});
        }
        out.push_back({"spin-sz" + tag, sz_comm, tol::spin_commutator_max_abs,
                       sz_comm <= tol::spin_commutator_max_abs});
    });
    for (auto& r : rows)
        for (auto& c : r)
            report.checks.push_back(std::move(c));

    report.wall_ms = elapsed_ms(start);
    return emit(report, json);
}

// ---------------------------------------------------------------- derive

void print_table_human(const ClosedFormCoefficients& cf, std::ostream& os) {
    const int m = cf.half_degree;
    os << "  n    S";
    for (int p = 1; p <= 2 * m; ++p)
        os << "        k(" << p << ")";
    os << "\n";
    for (std::size_t q = 0; q < cf.entries.size(); ++q) {
        char head[48];
        std::snprintf(head, sizeof(head), "  %zu  %9.6f", q + 1, cf.entries[q].frequency);
        os << head;
        for (const double k : cf.entries[q].k) {
            char cell[32];
            std::snprintf(cell, sizeof(cell), "  %10.6f", k);
            os << cell;
        }
        os << "\n";
    }
}

int run_derive(const std::string& family_name, const std::string& coeff_list, bool json) {
    if (family_name.empty() == coeff_list.empty())
        throw UsageError("derive needs exactly one of --family or --coeffs");

    const auto start = Clock::now();
    ClosedFormCoefficients cf;
    PolynomialRelation rel;
    std::string label;
    std::optional<double> table_diff;

    if (!family_name.empty()) {
        ClosedFormFamily family;
        if (family_name == "cubic")
            family = ClosedFormFamily::cubic;
        else if (family_name == "sa-single-pair")
            family = ClosedFormFamily::sa_single_pair;
        else if (family_name == "quintic")
            family = ClosedFormFamily::quintic;
        else if (family_name == "ninth")
            family = ClosedFormFamily::ninth;
        else if (family_name == "eleventh")
            family = ClosedFormFamily::eleventh;
        else
            throw UsageError("unknown family '" + family_name + "'");
        label = to_string(family);
        rel = family_relation(family);
        cf = derive_closed_form(family);
        if (family == ClosedFormFamily::quintic || family == ClosedFormFamily::ninth ||
            family == ClosedFormFamily::eleventh) {
            const auto& table = tabulated_coefficients(family);
            double diff = 0.0;
            for (std::size_t q = 0; q < table.entries.size(); ++q) {
                diff = std::max(diff, std::abs(cf.entries[q].frequency -
                                               table.entries[q].frequency));
                for (std::size_t p = 0; p < table.entries[q].k.size(); ++p)
                    diff = std::max(diff,
                                    std::abs(cf.entries[q].k[p] - table.entries[q].k[p]));
            }
            table_diff = diff;
        }
    } else {
        label = "custom";
        std::stringstream ss(coeff_list);
        std::string token;
        while (std::getline(ss, token, ',')) {
            try {
                std::size_t pos = 0;
                const double c = std::stod(token, &pos);
                if (pos != token.size())
                    throw std::invalid_argument(token);
                rel.coefficients.push_back(c);
            } catch (const std::exception&) {
                throw UsageError("bad coefficient '" + token + "' in --coeffs");
            }
        }
        if (rel.coefficients.empty())
            throw UsageError("--coeffs is empty");
        rel.order = 2 * static_cast<int>(rel.coefficients.size()) + 1;
        cf = derive_closed_form(rel); // DegeneracyError propagates to exit 3
    }

    RunReport report;
    report.command = "derive";
    report.inputs = {{"family", label}, {"order", std::to_string(rel.order)}};
    if (table_diff)
        report.checks.push_back({"table-diff(" + label + ")", *table_diff,
                                 tol::coefficient_match_abs,
                                 *table_diff <= tol::coefficient_match_abs});
    report.wall_ms = elapsed_ms(start);

    if (json) {
        // merge the run report and the coefficient table into one document
        JsonWriter w;
        w.begin_object();
        w.key("command").value("derive");
        w.key("family").value(label);
        w.key("relation").begin_array();
        for (const double c : rel.coefficients)
            w.value(c);
        w.end_array();
        w.key("entries").begin_array();
        for (const auto& e : cf.entries) {
            w.begin_object();
            w.key("S").value(e.frequency);
            w.key("k").begin_array();
            for (const double k : e.k)
                w.value(k);
            w.end_array();
            w.end_object();
        }
        w.end_array();
        if (table_diff)
            w.key("table_diff").value(*table_diff);
        w.key("wall_ms").value(report.wall_ms);
        w.key("pass").value(report.pass());
        w.end_object();
        std::cout << w.str() << "\n";
    } else {
        std::cout << "closed form for '" << label << "' (order " << rel.order << ")\n";
        print_table_human(cf, std::cout);
        if (table_diff)
            std::cout << "max difference to the reference table: " << format_float17(*table_diff)
                      << "\n";
        report.print_human(std::cout);
    }
    return report.pass() ? 0 : 1;
}

// ---------------------------------------------------------------- count

int run_count(const std::vector<std::string>& actives, const std::string& mode_name, bool json) {
    PoolMode mode;
    if (mode_name == "singlet-only")
        mode = PoolMode::sa_singlet_only;
    else if (mode_name == "with-prime")
        mode = PoolMode::sa_with_prime;
    else
        throw UsageError("unknown --mode '" + mode_name + "' (singlet-only or with-prime)");
    if (actives.empty())
        throw UsageError("count needs at least one --active ne,no pair");

    struct Row {
        int ne, no;
        long fermionic, adapted;
        double reduction;
    };
    std::vector<Row> table;
    for (const auto& active : actives) {
        int ne = 0, no = 0;
        char comma = 0;
        std::stringstream ss(active);
        if (!(ss >> ne >> comma >> no) || comma != ',' || !(ss >> std::ws).eof())
            throw UsageError("malformed --active '" + active + "' (expected ne,no)");
        if (ne <= 0 || ne % 2 != 0)
            throw UsageError("--active electron count must be positive and even (closed shell)");
        const int occ = ne / 2;
        const int virt = no - occ;
        if (virt < 1)
            throw UsageError("--active " + active + " leaves no virtual orbitals");
        const long fermionic = count_parameters({occ, virt, PoolMode::fermionic_sd});
        const long adapted = count_parameters({occ, virt, mode});
        table.push_back({ne, no, fermionic, adapted,
                         1.0 - static_cast<double>(adapted) / static_cast<double>(fermionic)});
    }

    if (json) {
        JsonWriter w;
        w.begin_object();
        w.key("command").value("count");
        w.key("mode").value(to_string(mode));
        w.key("rows").begin_array();
        for (const auto& r : table) {
            w.begin_object();
            w.key("n_electrons").value(r.ne);
            w.key("n_orbitals").value(r.no);
            w.key("fermionic").value(r.fermionic);
            w.key("spin_adapted").value(r.adapted);
            w.key("reduction").value(r.reduction);
            w.end_object();
        }
        w.end_array();
        w.end_object();
        std::cout << w.str() << "\n";
    } else {
        std::cout << "  (ne,no)   fermionic   spin-adapted   reduction  [" << to_string(mode)
                  << "]\n";
        for (const auto& r : table) {
            char buf[120];
            std::snprintf(buf, sizeof(buf), "  (%d,%d)  %10ld   %12ld   %8.2f%%\n", r.ne, r.no,
                          r.fermionic, r.adapted, 100.0 * r.reduction);
            std::cout << buf;
        }
    }
    return 0;
}

// ---------------------------------------------------------------- bench

int run_bench(const std::string& case_name, int n_orb, long repetitions, std::uint64_t seed,
              bool json) {
    if (n_orb < 1 || n_orb > 6)
        throw UsageError("--orbitals must be in [1, 6]");
    if (repetitions < 1)
        throw UsageError("--repetitions must be >= 1");
    const auto id = case_id(case_name, n_orb);

    const auto basis = build_sector_basis(n_orb, n_orb / 2, n_orb / 2);
    const auto g = build_generator(id, basis);
    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> angle(-3.141592653589793, 3.141592653589793);
    const auto v = random_unit_vector(basis.size(), rng);
    (void)apply_exponential(g, 0.5, v); // populate the power cache before timing

    std::vector<double> closed_ms, dense_ms;
    closed_ms.reserve(static_cast<std::size_t>(repetitions));
    dense_ms.reserve(static_cast<std::size_t>(repetitions));
    volatile double sink = 0.0;
    for (long r = 0; r < repetitions; ++r) {
        const double theta = angle(rng);
        auto t0 = Clock::now();
        const auto u = apply_exponential(g, theta, v);
        closed_ms.push_back(elapsed_ms(t0));
        sink = sink + u[0];
        t0 = Clock::now();
        const auto w = oracle::expm(oracle::from_sparse(g.matrix.scaled(theta))).apply(v);
        dense_ms.push_back(elapsed_ms(t0));
        sink = sink + w[0];
    }
    auto median = [](std::vector<double> xs) {
        std::sort(xs.begin(), xs.end());
        return xs[xs.size() / 2];
    };
    const double closed = median(std::move(closed_ms));
    const double dense = median(std::move(dense_ms));
    const double ratio = dense > 0.0 ? closed / dense : 0.0;

    if (json) {
        JsonWriter w;
        w.begin_object();
        w.key("command").value("bench");
        w.key("case").value(case_name);
        w.key("orbitals").value(n_orb);
        w.key("sector_dim").value(basis.size());
        w.key("repetitions").value(repetitions);
        w.key("seed").value(static_cast<long>(seed));
        w.key("closed_form_ms").value(closed);
        w.key("dense_expm_ms").value(dense);
        w.key("ratio").value(ratio);
        w.end_object();
        std::cout << w.str() << "\n";
    } else {
        char buf[200];
        std::snprintf(buf, sizeof(buf),
                      "bench %s orbitals=%d dim=%zu reps=%ld\n"
                      "  closed-form apply  median %.6f ms\n"
                      "  dense expm+apply   median %.6f ms\n"
                      "  ratio              %.4f\n",
                      case_name.c_str(), n_orb, basis.size(), repetitions, closed, dense, ratio);
        std::cout << buf;
    }
    return 0;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"spin-adapted excitation generators: exact closed-form exponentials,\n"
                 "minimal-polynomial relations, operator pools and gradients"};
    app.require_subcommand(1);

    std::string case_name;
    int n_orb = 4;
    std::vector<double> thetas;
    std::uint64_t seed = 42;
    bool json = false;

    auto* verify = app.add_subcommand("verify", "certify a case against the dense oracle");
    verify->add_option("--case", case_name, "generator case")->required();
    verify->add_option("--orbitals", n_orb, "spatial orbital count (<= 6)");
    verify->add_option("--theta", thetas, "rotation angles")->delimiter(',');
    verify->add_option("--seed", seed, "random seed");
    verify->add_flag("--json", json, "machine-readable output");

    std::string family_name, coeff_list;
    auto* derive = app.add_subcommand("derive", "synthesize closed-form coefficients");
    derive->add_option("--family", family_name, "cubic, sa-single-pair, quintic, ninth, eleventh");
    derive->add_option("--coeffs", coeff_list, "relation coefficients c1,c3,...");
    derive->add_flag("--json", json, "machine-readable output");

    std::vector<std::string> actives;
    std::string mode_name = "singlet-only";
    auto* count = app.add_subcommand("count", "variational parameter counts");
    count->add_option("--active", actives, "active space ne,no (repeatable)");
    count->add_option("--mode", mode_name, "singlet-only or with-prime");
    count->add_flag("--json", json, "machine-readable output");

    long repetitions = 101;
    auto* bench = app.add_subcommand("bench", "closed form vs dense exponential timing");
    bench->add_option("--case", case_name, "generator case")->required();
    bench->add_option("--orbitals", n_orb, "spatial orbital count (<= 6)");
    bench->add_option("--repetitions", repetitions, "number of timed applications");
    bench->add_option("--seed", seed, "random seed");
    bench->add_flag("--json", json, "machine-readable output");

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        std::cerr << "usage error: " << e.what() << "\n";
        return 2;
    }

    try {
        if (*verify)
            return run_verify(case_name, n_orb, thetas, seed, json);
        if (*derive)
            return run_derive(family_name, coeff_list, json);
        if (*count)
            return run_count(actives, mode_name, json);
        if (*bench)
            return run_bench(case_name, n_orb, repetitions, seed, json);
    } catch (const UsageError& e) {
        std::cerr << "usage error: " << e.what() << "\n";
        return 2;
    } catch (const DegeneracyError& e) {
        std::cerr << "degeneracy: " << e.what() << "\n  roots:";
        for (const auto& z : e.roots())
            std::cerr << " (" << format_float17(z.real()) << (z.imag() < 0 ? "-" : "+")
                      << format_float17(std::abs(z.imag())) << "i)";
        std::cerr << "\n";
        return 3;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
    return 2;
}
