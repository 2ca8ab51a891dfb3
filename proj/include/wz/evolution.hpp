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
 * Split-operator time stepping and measurement sampling.
 *
 * First-order steps apply the potential phase and then the kinetic factor.
 * Strang steps apply half the potential, the kinetic factor, then the other
 * half. Under Strang the Trotter-block kinetic factor is itself symmetrized
 * (ascending sweep at eps/2, then descending sweep at eps/2) so the whole
 * step is second order.
 */

#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <string_view>
#include <variant>
#include <vector>

#include "wz/grid.hpp"
#include "wz/kinetic.hpp"
#include "wz/potential.hpp"

namespace wz {

enum class KineticMethod { trotter, spectral };
enum class Splitting { first_order, strang };

std::string_view to_string(KineticMethod method);
std::string_view to_string(Splitting splitting);

/// Hamiltonian terms included in a run.
struct TermSet {
    bool kinetic_electrons = false; // T_e
    bool kinetic_nuclei = false;    // T_n
    bool electron_electron = false; // U_ee
    bool electron_nucleus = false;  // U_en
    bool nucleus_nucleus = false;   // U_nn
    bool wall = false;

    [[nodiscard]] bool any_potential() const {
        return electron_electron || electron_nucleus || nucleus_nucleus || wall;
    }
};

struct EvolutionPlan {
    double total_time = 0.0;
    std::size_t steps = 1;
    KineticMethod method = KineticMethod::spectral;
    TermSet terms;
    Splitting splitting = Splitting::first_order;
    double wall_height = 1e6;
    std::size_t snapshot_count = 10;

    [[nodiscard]] double time_step() const { return total_time / static_cast<double>(steps); }
    /// Throws ValidationError for steps == 0, negative or non-finite T, or a bad wall height.
    void validate() const;
};

/// Operators built once for a fixed grid, particle roster and plan.
class PreparedOperators {
  public:
    PreparedOperators(const GridSpec &grid, std::span<const ParticleSpec> particles, const EvolutionPlan &plan);

    [[nodiscard]] const DiagonalOperator &potential() const { return potential_; }
    [[nodiscard]] bool has_potential() const { return has_potential_; }
    [[nodiscard]] std::size_t dimension() const { return dimension_; }

    void apply_potential(StateVector &state, bool half) const;
    void apply_kinetic(StateVector &state) const;

  private:
    struct RegisterKinetic {
        int reg;
        std::size_t plan;
    };
    using KineticPlan = std::variant<KineticTrotterPlan, SpectralKineticPlan>;

    Splitting splitting_;
    std::size_t dimension_ = 0;
    bool has_potential_ = false;
    DiagonalOperator potential_;
    std::vector<Complex> full_phase_;
    std::vector<Complex> half_phase_;
    std::vector<KineticPlan> plans_;
    std::vector<RegisterKinetic> kinetic_;
};

void step(StateVector &state, const EvolutionPlan &plan, const PreparedOperators &operators);

struct Snapshot {
    std::size_t step = 0;
    double time = 0.0;
    std::vector<double> density;
};

struct EvolutionReport {
    std::vector<double> norm_drift; ///< |norm - 1| after each step
    StateVector final_state;
    std::vector<Snapshot> snapshots;
};

inline constexpr double kNormAbortThreshold = 1e-6;

/// Evenly spaced snapshot steps in [1, steps].
std::vector<std::size_t> snapshot_steps(std::size_t steps, std::size_t count);

/// Runs plan.steps steps; throws NumericalError if the norm drifts past 1e-6.
EvolutionReport evolve(StateVector state, const EvolutionPlan &plan, const PreparedOperators &operators);

/// Convenience overload that prepares operators from the state's quantum particles
/// plus the given clamped particles.
EvolutionReport evolve(StateVector state, const EvolutionPlan &plan, std::span<const ParticleSpec> all_particles);

/// Counter-based uniform generator: value i depends only on (seed, i).
class CounterRng {
  public:
    explicit CounterRng(std::uint64_t seed) : seed_(seed) {}
    [[nodiscard]] std::uint64_t bits(std::uint64_t counter) const;
    [[nodiscard]] double uniform(std::uint64_t counter) const; ///< in [0, 1)

  private:
    std::uint64_t seed_;
};

/// Histogram (one bin per joint basis state) of `shots` measurements.
std::vector<std::uint64_t> sample_configurations(const StateVector &state, std::uint64_t shots, std::uint64_t seed);

} // namespace wz
