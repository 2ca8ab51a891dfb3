// Copyright 2026 The wzsim Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include <chrono>
#include <cstdio>
#include <fstream>
#include <functional>
#include <numbers>
#include <random>
#include <sstream>
#include <string>

#include "test_support.hpp"
#include "wz/experiments.hpp"
#include "wz/kinetic.hpp"
#include "wz/potential.hpp"

namespace {

using namespace wz;
namespace fs = std::filesystem;

struct Outcome {
    bool pass = false;
    std::string detail;
};

std::string fmt(const char *pattern, auto... args) {
    char buf[512];
    std::snprintf(buf, sizeof buf, pattern, args...);
    return buf;
}

fs::path scratch(const std::string &name) {
    const auto dir = fs::temp_directory_path() / ("wzsim_acceptance_" + name);
    fs::remove_all(dir);
    return dir;
}

std::string slurp(const fs::path &p) {
    std::ifstream in(p, std::ios::binary);
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

const std::vector<ParticleSpec> kElectron{ParticleSpec::electron()};

StateVector flat_interior(const GridSpec &grid) {
    const std::size_t last = grid.cells_per_axis() - 1;
    return encode_state(grid, kElectron, [&](const Configuration &c) {
        return (grid.cells_per_axis() > 2 && (c.cells[0] == 0 || c.cells[0] == last)) ? Complex(0.0) : Complex(1.0);
    });
}

EvolutionPlan box_plan(KineticMethod method, Splitting splitting, std::size_t steps) {
    EvolutionPlan plan;
    plan.total_time = 1e-3;
    plan.steps = steps;
    plan.method = method;
    plan.splitting = splitting;
    plan.terms.kinetic_electrons = true;
    plan.terms.wall = true;
    plan.snapshot_count = 0;
    return plan;
}

Outcome unitarity() {
    double worst = 0.0;
    for (auto method : {KineticMethod::trotter, KineticMethod::spectral}) {
        for (int n : {4, 6, 8, 10}) {
            const auto grid = build_grid(1.0, n, 1);
            const auto report = evolve(flat_interior(grid), box_plan(method, Splitting::first_order, 1000), kElectron);
            worst = std::max(worst, std::abs(report.final_state.norm() - 1.0));
        }
    }
    return {worst < 1e-10, fmt("max |norm - 1| = %.3e over both methods, n in {4,6,8,10}", worst)};
}

Outcome oracle_equivalence() {
    const auto grid = build_grid(1.0, 5, 1);
    const auto initial = flat_interior(grid);
    TermSet terms;
    terms.kinetic_electrons = true;
    terms.wall = true;
    const DenseEvolutionOracle oracle(grid, kElectron, terms, 1e6);
    const auto exact = oracle.apply(initial, 1e-3);

    const std::vector<std::size_t> steps{10, 100, 1000};
    std::vector<double> eps;
    std::vector<double> first;
    std::vector<double> strang;
    for (auto s : steps) {
        eps.push_back(1e-3 / static_cast<double>(s));
        const auto a = evolve(initial, box_plan(KineticMethod::trotter, Splitting::first_order, s), kElectron);
        const auto b = evolve(initial, box_plan(KineticMethod::trotter, Splitting::strang, s), kElectron);
        first.push_back(l2_distance(a.final_state.amplitudes(), exact.amplitudes()));
        strang.push_back(l2_distance(b.final_state.amplitudes(), exact.amplitudes()));
    }
    const double slope_first = loglog_slope(eps, first);
    const double slope_strang = loglog_slope(eps, strang);
    const bool pass = first.back() < 1e-4 && slope_first >= 0.9 && slope_strang >= 1.8;
    return {pass, fmt("L2(N_t=1000) = %.3e, slope first-order = %.3f, slope strang = %.3f", first.back(), slope_first,
                      slope_strang)};
}

Outcome spatial_convergence() {
    const auto c = default_config(Experiment::convergence_spatial);
    const auto r = run_convergence(c, scratch("spatial"));
    const double gap = r.e_yb_slope - r.rmse_slope;
    const bool pass = std::abs(r.rmse_slope - 0.25) <= 0.10 && std::abs(gap - 0.5) <= 1e-10;
    return {pass, fmt("RMSE slope = %.4f (target 0.25 +- 0.10), E_YB slope = %.4f, gap - 0.5 = %.1e", r.rmse_slope,
                      r.e_yb_slope, gap - 0.5)};
}

Outcome mp_closed_form() {
    std::mt19937_64 rng(20260101);
    std::uniform_real_distribution<double> u(-10.0, 10.0);
    Eigen::MatrixXcd gen = Eigen::MatrixXcd::Zero(3, 3);
    gen(0, 2) = 1.0;
    gen(2, 0) = 1.0;
    gen(1, 1) = -2.0;
    double match = 0.0;
    double unitary = 0.0;
    for (int i = 0; i < 100; ++i) {
        const Complex xi(0.0, u(rng));
        const Eigen::Matrix3cd block = mp_block(xi);
        match = std::max(match, (Eigen::MatrixXcd(block) - testing::expm_taylor(xi * gen)).cwiseAbs().maxCoeff());
        unitary = std::max(unitary, (block.adjoint() * block - Eigen::Matrix3cd::Identity()).cwiseAbs().maxCoeff());
    }
    return {match < 1e-12 && unitary < 1e-12,
            fmt("max |M_P - expm| = %.2e, max |M_P^dag M_P - I| = %.2e over 100 xi", match, unitary)};
}

Outcome fourier_diagonalization() {
    std::vector<double> sizes;
    std::vector<double> off;
    double worst_ratio = 0.0; // diagonal error divided by the 2/D allowance
    for (std::size_t cells : {8u, 16u, 32u, 64u, 128u}) {
        const auto d = fourier_conjugation_diagnostic(cells, 1.0);
        sizes.push_back(static_cast<double>(cells));
        off.push_back(d.max_off_diagonal);
        for (std::size_t k = 0; k < cells; ++k) {
            const double expected = -std::sin(2.0 * std::numbers::pi * static_cast<double>(k) / static_cast<double>(cells));
            const double err = std::abs(d.diagonal[k] - expected);
            // Relative error where the eigenvalue is nonzero; absolute at k = 0 and k = D/2.
            const double scaled = std::abs(expected) > 1e-12 ? err / std::abs(expected) : err;
            worst_ratio = std::max(worst_ratio, scaled / (2.0 / static_cast<double>(cells)));
        }
    }
    const double exponent = -loglog_slope(sizes, off);
    return {exponent >= 0.9 && worst_ratio <= 1.0,
            fmt("off-diagonal ~ D^-%.3f, worst diagonal error = %.3f of the 2/D allowance", exponent, worst_ratio)};
}

Outcome parity_circuit() {
    std::mt19937_64 rng(7);
    std::uniform_real_distribution<double> angle(-std::numbers::pi, std::numbers::pi);
    double worst = 0.0;
    bool counts = true;
    for (int trial = 0; trial < 50; ++trial) {
        const double t1 = angle(rng), t2 = angle(rng), t3 = angle(rng), t4 = angle(rng);
        const std::array<double, 8> phases{t1, t2, t3, t4, t3, t4, t1, t2};
        const auto compressed = synthesize_diagonal(phases);
        const auto naive = synthesize_diagonal_naive(phases);
        counts = counts && compressed.controlled_phase_count() == 2 && naive.controlled_phase_count() == 4;
        const auto u = circuit_unitary(compressed);
        for (Eigen::Index i = 0; i < 8; ++i) {
            for (Eigen::Index j = 0; j < 8; ++j) {
                const Complex target = i == j ? std::polar(1.0, phases[static_cast<std::size_t>(i)]) : Complex(0.0);
                worst = std::max(worst, std::abs(u(i, j) - target));
            }
        }
    }
    return {worst <= 1e-12 && counts,
            fmt("max entry error = %.2e over 50 quadruples, 2 vs 4 controlled phases: %s", worst, counts ? "yes" : "no")};
}

Outcome antidiagonal_symmetry() {
    std::size_t checked = 0;
    std::size_t failed = 0;
    const std::array<double, 3> charges{-1.0, 1.0, 2.0};
    for (int d = 1; d <= 3; ++d) {
        for (int nq = 1; nq <= 3; ++nq) {
            for (int n = 1; n * d * nq <= 16; ++n) {
                const auto grid = build_grid(1.0, n, d);
                std::size_t rosters = 1;
                for (int p = 0; p < nq; ++p) {
                    rosters *= charges.size();
                }
                for (std::size_t code = 0; code < rosters; ++code) {
                    std::vector<ParticleSpec> particles;
                    std::size_t rest = code;
                    for (int p = 0; p < nq; ++p) {
                        const double z = charges[rest % charges.size()];
                        rest /= charges.size();
                        particles.push_back(z < 0 ? ParticleSpec::electron() : ParticleSpec::quantum_nucleus(z, 1836.0 * z));
                    }
                    // A mirror-symmetric pair of clamped nuclei keeps the reflection symmetry.
                    if (code % 2 == 1 && grid.cells_per_axis() >= 2) {
                        std::vector<std::size_t> a(static_cast<std::size_t>(d), 0);
                        std::vector<std::size_t> b(static_cast<std::size_t>(d), grid.cells_per_axis() - 1);
                        particles.push_back(ParticleSpec::clamped_nucleus(1.0, 1836.0, a));
                        particles.push_back(ParticleSpec::clamped_nucleus(1.0, 1836.0, b));
                    }
                    for (auto sel : {CoulombSelection::ee, CoulombSelection::en, CoulombSelection::nn,
                                     CoulombSelection::all}) {
                        ++checked;
                        failed += antidiagonal_symmetry_check(build_coulomb_diagonal(grid, particles, sel)) ? 0 : 1;
                    }
                }
            }
        }
    }
    return {failed == 0, fmt("%zu Coulomb diagonals with joint dimension <= 2^16 checked, %zu asymmetric", checked, failed)};
}

Outcome gate_counts() {
    std::size_t mismatches = 0;
    for (int big_n = 1; big_n <= 3; ++big_n) {
        for (int n = 1; n <= 8; ++n) {
            const std::uint64_t expected = 3ull * static_cast<std::uint64_t>(big_n) * (1ull << n);
            mismatches += count_kinetic_gates(big_n, n, KineticMethod::trotter) == expected ? 0 : 1;
        }
    }
    return {mismatches == 0, fmt("24 (N, n) pairs, %zu mismatches against 3N 2^n", mismatches)};
}

Outcome level_quantization() {
    std::vector<double> cells;
    std::vector<double> counts;
    bool within = true;
    std::string detail;
    for (int n = 2; n <= 5; ++n) {
        const auto grid = build_grid(1.0, n, 1);
        const std::vector<ParticleSpec> particles{ParticleSpec::electron(), ParticleSpec::electron()};
        const auto q = quantize_levels(build_coulomb_diagonal(grid, particles, CoulombSelection::all), grid);
        const auto b = potential_bounds(grid, particles);
        const double bound = (b.max_energy - b.min_energy) / q.increment + 1.0;
        within = within && static_cast<double>(q.level_count) <= bound;
        cells.push_back(static_cast<double>(grid.cells_per_axis()));
        counts.push_back(static_cast<double>(q.level_count));
        detail += fmt("n=%d: %zu<=%.0f ", n, q.level_count, bound);
    }
    const double growth = loglog_slope(cells, counts);
    return {within && growth <= 3.5, detail + fmt("growth exponent %.3f", growth)};
}

Outcome molecule_symmetry() {
    auto h = default_config(Experiment::molecule2d);
    auto h2 = h;
    h2.particles = {h.particles[0],
                    ParticleConfig{ParticleSpec::clamped_nucleus(1.0, 1836.15267343, {5, 7}), {}},
                    ParticleConfig{ParticleSpec::clamped_nucleus(1.0, 1836.15267343, {9, 7}), {}}};
    double worst = 0.0;
    double norm_err = 0.0;
    for (const auto &[name, config] : {std::pair{"h", h}, std::pair{"h2plus", h2}}) {
        const auto r = run_molecule2d(config, scratch(std::string("molecule_") + name));
        for (const auto &per_particle : r.asymmetry) {
            for (double a : per_particle) {
                worst = std::max(worst, a);
            }
        }
        for (const auto &m : r.marginals) {
            double total = 0.0;
            for (double v : m) {
                total += v;
            }
            norm_err = std::max(norm_err, std::abs(total - 1.0));
        }
    }
    return {worst < 0.05 && norm_err < 1e-10,
            fmt("H and H2+ (n=4, T=1, N_t=1000): worst relative L1 asymmetry %.2e, marginal norm error %.1e", worst,
                norm_err)};
}

Outcome wall_insensitivity() {
    auto c = default_config(Experiment::box_evolve);
    c.snapshot_count = 1;
    c.wall_height = 1e6;
    const double a = run_box_evolve(c, scratch("wall_1e6")).snapshots.back().comparison.rmse;
    c.wall_height = 1e7;
    const double b = run_box_evolve(c, scratch("wall_1e7")).snapshots.back().comparison.rmse;
    const double rel = std::abs(a - b) / a;
    return {rel < 0.05, fmt("RMSE %.6f (1e6) vs %.6f (1e7), relative difference %.2e", a, b, rel)};
}

Outcome sampling() {
    auto c = default_config(Experiment::sample);
    const auto a = scratch("sample_a");
    const auto b = scratch("sample_b");
    const auto r = run_sample(c, a);
    run_sample(c, b);
    const bool identical = slurp(a / "histogram.csv") == slurp(b / "histogram.csv");
    return {r.tv_distance < 0.05 && identical && r.histogram.size() == 64,
            fmt("TV distance %.4f over %zu states, identical rerun: %s", r.tv_distance, r.histogram.size(),
                identical ? "yes" : "no")};
}

struct Criterion {
    int id;
    const char *name;
    double budget_seconds;
    std::function<Outcome()> run;
};

} // namespace

int main() {
    const std::vector<Criterion> criteria{
        {1, "unitarity", 60.0, unitarity},
        {2, "oracle equivalence", 60.0, oracle_equivalence},
        {3, "spatial convergence", 600.0, spatial_convergence},
        {4, "M_P closed form", 10.0, mp_closed_form},
        {5, "Fourier diagonalization", 10.0, fourier_diagonalization},
        {6, "parity-compressed circuit", 10.0, parity_circuit},
        {7, "antidiagonal symmetry", 60.0, antidiagonal_symmetry},
        {8, "kinetic gate counts", 10.0, gate_counts},
        {9, "level quantization", 60.0, level_quantization},
        {10, "molecule symmetry", 300.0, molecule_symmetry},
        {11, "wall-height insensitivity", 600.0, wall_insensitivity},
        {12, "sampling", 60.0, sampling},
    };
    int failures = 0;
    for (const auto &c : criteria) {
        const auto start = std::chrono::steady_clock::now();
        Outcome outcome;
        try {
            outcome = c.run();
        } catch (const std::exception &e) {
            outcome = {false, std::string("exception: ") + e.what()};
        }
        const double seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
        const bool pass = outcome.pass && seconds <= c.budget_seconds;
        failures += pass ? 0 : 1;
        std::printf("%s %2d %-26s %s [%.2f s of %.0f s]\n", pass ? "PASS" : "FAIL", c.id, c.name,
                    outcome.detail.c_str(), seconds, c.budget_seconds);
        std::fflush(stdout);
    }
    std::printf("%d of %zu criteria passed\n", static_cast<int>(criteria.size()) - failures, criteria.size());
    return failures == 0 ? 0 : 1;
}
