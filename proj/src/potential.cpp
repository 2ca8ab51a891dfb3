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

#include "wz/potential.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <set>
#include <string>

#include "wz/error.hpp"

namespace wz {

std::string_view to_string(PotentialTerm term) {
    switch (term) {
    case PotentialTerm::electron_electron:
        return "ee";
    case PotentialTerm::electron_nucleus:
        return "en";
    case PotentialTerm::nucleus_nucleus:
        return "nn";
    case PotentialTerm::wall:
        return "wall";
    case PotentialTerm::composite:
        break;
    }
    return "composite";
}

DiagonalOperator &DiagonalOperator::operator+=(const DiagonalOperator &other) {
    if (other.size() != size()) {
        throw ValidationError("diagonal operator dimension mismatch");
    }
    for (std::size_t i = 0; i < energies.size(); ++i) {
        energies[i] += other.energies[i];
    }
    if (label != other.label) {
        label = PotentialTerm::composite;
    }
    return *this;
}

double pair_energy(std::span<const double> r_p, std::span<const double> r_q, double charge_product,
                   double cell_width) {
    if (r_p.size() != r_q.size()) {
        throw ValidationError("pair_energy positions differ in dimension");
    }
    double dist2 = 0.0;
    for (std::size_t a = 0; a < r_p.size(); ++a) {
        const double diff = r_p[a] - r_q[a];
        dist2 += diff * diff;
    }
    // Cell centers on one grid are either identical or at least delta apart.
    if (dist2 < 0.25 * cell_width * cell_width) {
        return charge_product / cell_width;
    }
    return charge_product / std::sqrt(dist2);
}

namespace {

bool pair_selected(const ParticleSpec &a, const ParticleSpec &b, CoulombSelection sel) {
    const bool na = a.is_nucleus();
    const bool nb = b.is_nucleus();
    switch (sel) {
    case CoulombSelection::ee:
        return !na && !nb;
    case CoulombSelection::nn:
        return na && nb;
    case CoulombSelection::en:
        return na != nb;
    case CoulombSelection::all:
        return true;
    }
    return false;
}

PotentialTerm label_of(CoulombSelection sel) {
    switch (sel) {
    case CoulombSelection::ee:
        return PotentialTerm::electron_electron;
    case CoulombSelection::en:
        return PotentialTerm::electron_nucleus;
    case CoulombSelection::nn:
        return PotentialTerm::nucleus_nucleus;
    case CoulombSelection::all:
        break;
    }
    return PotentialTerm::composite;
}

} // namespace

DiagonalOperator build_coulomb_diagonal(const GridSpec &grid, std::span<const ParticleSpec> particles,
                                        CoulombSelection selection) {
    std::vector<int> quantum_slot(particles.size(), -1);
    int nq = 0;
    for (std::size_t i = 0; i < particles.size(); ++i) {
        validate_particle(grid, particles[i]);
        if (particles[i].is_quantum()) {
            quantum_slot[i] = nq++;
        }
    }
    if (nq == 0) {
        throw ValidationError("Coulomb diagonal needs at least one quantum particle");
    }
    check_joint_size(grid, nq);
    const IndexCodec codec(grid.qubits_per_axis, grid.dimensions, nq);
    const auto d = static_cast<std::size_t>(grid.dimensions);

    struct Pair {
        std::size_t p;
        std::size_t q;
        double charge_product;
    };
    std::vector<Pair> pairs;
    double constant = 0.0; // clamped-clamped pairs do not depend on the configuration
    std::vector<std::vector<double>> fixed(particles.size());
    for (std::size_t i = 0; i < particles.size(); ++i) {
        if (!particles[i].is_quantum()) {
            fixed[i] = cell_center(grid, particles[i].clamped_cell);
        }
    }
    for (std::size_t p = 0; p < particles.size(); ++p) {
        for (std::size_t q = p + 1; q < particles.size(); ++q) {
            if (!pair_selected(particles[p], particles[q], selection)) {
                continue;
            }
            const double qq = particles[p].charge * particles[q].charge;
            if (quantum_slot[p] < 0 && quantum_slot[q] < 0) {
                constant += pair_energy(fixed[p], fixed[q], qq, grid.cell_width);
            } else {
                pairs.push_back({p, q, qq});
            }
        }
    }

    DiagonalOperator out{std::vector<double>(codec.size(), constant), label_of(selection)};
    if (pairs.empty()) {
        return out;
    }
    std::vector<std::vector<double>> pos = fixed;
    for (std::size_t flat = 0; flat < codec.size(); ++flat) {
        for (std::size_t i = 0; i < particles.size(); ++i) {
            if (quantum_slot[i] < 0) {
                continue;
            }
            auto &r = pos[i];
            r.resize(d);
            for (std::size_t a = 0; a < d; ++a) {
                const auto reg = static_cast<int>(static_cast<std::size_t>(quantum_slot[i]) * d + a);
                r[a] = grid.cell_width * (static_cast<double>(codec.register_cell(flat, reg)) + 0.5);
            }
        }
        double e = constant;
        for (const auto &pr : pairs) {
            e += pair_energy(pos[pr.p], pos[pr.q], pr.charge_product, grid.cell_width);
        }
        out.energies[flat] = e;
    }
    return out;
}

DiagonalOperator wall_potential(const GridSpec &grid, double wall_height) {
    return wall_potential(grid, wall_height, 1);
}

DiagonalOperator wall_potential(const GridSpec &grid, double wall_height, int quantum_particles) {
    if (!(wall_height > 0.0)) {
        throw ValidationError("wall height must be positive");
    }
    check_joint_size(grid, quantum_particles);
    const IndexCodec codec(grid.qubits_per_axis, grid.dimensions, quantum_particles);
    const std::size_t last = codec.cells_per_axis() - 1;
    DiagonalOperator out{std::vector<double>(codec.size(), 0.0), PotentialTerm::wall};
    for (std::size_t flat = 0; flat < codec.size(); ++flat) {
        double e = 0.0;
        for (int r = 0; r < codec.registers(); ++r) {
            const auto c = codec.register_cell(flat, r);
            if (c == 0 || c == last) {
                e += wall_height;
            }
        }
        out.energies[flat] = e;
    }
    return out;
}

void apply_diagonal_phase(StateVector &state, const DiagonalOperator &diag, double time_step) {
    if (diag.size() != state.dimension()) {
        throw ValidationError("diagonal has " + std::to_string(diag.size()) + " entries, state has " +
                              std::to_string(state.dimension()));
    }
    auto amps = state.amplitudes();
    for (std::size_t m = 0; m < amps.size(); ++m) {
        amps[m] *= std::polar(1.0, -time_step * diag.energies[m]);
    }
}

PotentialBounds potential_bounds(const GridSpec &grid, std::span<const ParticleSpec> particles) {
    double electrons = 0.0;
    std::vector<double> charges;
    for (const auto &p : particles) {
        if (p.is_nucleus()) {
            charges.push_back(p.charge);
        } else {
            electrons += 1.0;
        }
    }
    double nuclear_pairs = 0.0;
    double charge_sum = 0.0;
    for (std::size_t i = 0; i < charges.size(); ++i) {
        charge_sum += charges[i];
        for (std::size_t j = i + 1; j < charges.size(); ++j) {
            nuclear_pairs += charges[i] * charges[j];
        }
    }
    const double scale = 1.0 / grid.cell_width;
    const double max_e = scale * (electrons * (electrons - 1.0) / 2.0 + nuclear_pairs);
    return {-scale * charge_sum, max_e};
}

LevelQuantization quantize_levels(const DiagonalOperator &diag, const GridSpec &grid) {
    const double l = grid.length;
    LevelQuantization out;
    out.increment = grid.cell_width * grid.cell_width / (2.0 * l * l * l);
    if (diag.energies.empty()) {
        return out;
    }
    const auto [lo, hi] = std::minmax_element(diag.energies.begin(), diag.energies.end());
    out.min_energy = *lo;
    out.max_energy = *hi;
    std::set<long long> buckets;
    for (double e : diag.energies) {
        buckets.insert(std::llround(e / out.increment));
    }
    out.level_count = buckets.size();
    return out;
}

bool antidiagonal_symmetry_check(const DiagonalOperator &diag, double tolerance) {
    const std::size_t dim = diag.size();
    for (std::size_t x = 0; x < dim / 2; ++x) {
        if (std::abs(diag.energies[x] - diag.energies[dim - 1 - x]) > tolerance) {
            return false;
        }
    }
    return true;
}

} // namespace wz
