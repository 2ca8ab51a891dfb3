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

/**
 * @file
 * Diagonal potential-energy operators over the joint position basis.
 *
 * Coulomb pairs use e' = 1 and the same-cell rule e' q_p q_q / delta when
 * two particles occupy one cell. Clamped particles enter through their
 * fixed cell centers.
 */

#pragma once

#include <cstddef>
#include <span>
#include <string_view>
#include <vector>

#include "wz/grid.hpp"

namespace wz {

enum class PotentialTerm { electron_electron, electron_nucleus, nucleus_nucleus, wall, composite };

std::string_view to_string(PotentialTerm term);

/// Which pair classes build_coulomb_diagonal sums.
enum class CoulombSelection { ee, en, nn, all };

struct DiagonalOperator {
    std::vector<double> energies; ///< hartree, one per joint basis state
    PotentialTerm label = PotentialTerm::composite;

    [[nodiscard]] std::size_t size() const { return energies.size(); }
    DiagonalOperator &operator+=(const DiagonalOperator &other);
};

struct LevelQuantization {
    double increment = 0.0; ///< Delta U = delta^2 / (2 L^3)
    double min_energy = 0.0;
    double max_energy = 0.0;
    std::size_t level_count = 0;
};

struct PotentialBounds {
    double min_energy = 0.0;
    double max_energy = 0.0;
};

double pair_energy(std::span<const double> r_p, std::span<const double> r_q, double charge_product,
                   double cell_width);

/// Sum of pair energies for every joint basis state. Quantum particles are
/// indexed in the order they appear in `particles`.
DiagonalOperator build_coulomb_diagonal(const GridSpec &grid, std::span<const ParticleSpec> particles,
                                        CoulombSelection selection);

/// V_wall on cells 0 and 2^n-1 of each axis, for a single particle register set.
DiagonalOperator wall_potential(const GridSpec &grid, double wall_height);

/// Same wall, repeated for every quantum particle of a joint state.
DiagonalOperator wall_potential(const GridSpec &grid, double wall_height, int quantum_particles);

/// amplitude[m] *= exp(-i eps E[m]).
void apply_diagonal_phase(StateVector &state, const DiagonalOperator &diag, double time_step);

/// Extreme-value estimates (e'/delta)(Ne(Ne-1)/2 + sum_{i<j} Zi Zj) and -(e'/delta) sum Zi.
PotentialBounds potential_bounds(const GridSpec &grid, std::span<const ParticleSpec> particles);

LevelQuantization quantize_levels(const DiagonalOperator &diag, const GridSpec &grid);

bool antidiagonal_symmetry_check(const DiagonalOperator &diag, double tolerance = 1e-10);

} // namespace wz
