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

#include "wz/evolution.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <string>

#include "wz/error.hpp"

namespace wz {

std::string_view to_string(KineticMethod method) {
    return method == KineticMethod::trotter ? "trotter" : "spectral";
}

std::string_view to_string(Splitting splitting) {
    return splitting == Splitting::strang ? "strang" : "first_order";
}

void EvolutionPlan::validate() const {
    if (steps == 0) {
        throw ValidationError("step count must be at least 1");
    }
    if (!(total_time >= 0.0) || !std::isfinite(total_time)) {
        throw ValidationError("total time must be finite and non-negative");
    }
    if (terms.wall && !(wall_height > 0.0)) {
        throw ValidationError("wall height must be positive");
    }
}

PreparedOperators::PreparedOperators(const GridSpec &grid, std::span<const ParticleSpec> particles,
                                     const EvolutionPlan &plan)
    : splitting_(plan.splitting) {
    plan.validate();
    int nq = 0;
    for (const auto &p : particles) {
        validate_particle(grid, p);
        nq += p.is_quantum() ? 1 : 0;
    }
    if (nq == 0) {
        throw ValidationError("evolution needs at least one quantum particle");
    }
    check_joint_size(grid, nq);
    const IndexCodec codec(grid.qubits_per_axis, grid.dimensions, nq);
    dimension_ = codec.size();
    const double eps = plan.time_step();

    potential_ = DiagonalOperator{std::vector<double>(dimension_, 0.0), PotentialTerm::composite};
    const auto add_coulomb = [&](bool on, CoulombSelection sel) {
        if (on) {
            potential_ += build_coulomb_diagonal(grid, particles, sel);
            has_potential_ = true;
        }
    };
    add_coulomb(plan.terms.electron_electron, CoulombSelection::ee);
    add_coulomb(plan.terms.electron_nucleus, CoulombSelection::en);
    add_coulomb(plan.terms.nucleus_nucleus, CoulombSelection::nn);
    if (plan.terms.wall) {
        potential_ += wall_potential(grid, plan.wall_height, nq);
        has_potential_ = true;
    }
    if (has_potential_) {
        full_phase_.resize(dimension_);
        half_phase_.resize(dimension_);
        for (std::size_t m = 0; m < dimension_; ++m) {
            full_phase_[m] = std::polar(1.0, -eps * potential_.energies[m]);
            half_phase_[m] = std::polar(1.0, -0.5 * eps * potential_.energies[m]);
        }
    }

    const bool symmetric_blocks = plan.method == KineticMethod::trotter && plan.splitting == Splitting::strang;
    const double kinetic_eps = symmetric_blocks ? 0.5 * eps : eps;
    int slot = 0;
    for (const auto &p : particles) {
        if (!p.is_quantum()) {
            continue;
        }
        const bool moves = p.is_nucleus() ? plan.terms.kinetic_nuclei : plan.terms.kinetic_electrons;
        if (moves) {
            if (plan.method == KineticMethod::trotter) {
                plans_.emplace_back(
                    KineticTrotterPlan::make(grid.cells_per_axis(), grid.cell_width, p.mass, kinetic_eps));
            } else {
                plans_.emplace_back(
                    SpectralKineticPlan::make(grid.cells_per_axis(), grid.cell_width, p.mass, kinetic_eps));
            }
            for (int a = 0; a < grid.dimensions; ++a) {
                kinetic_.push_back({slot * grid.dimensions + a, plans_.size() - 1});
            }
        }
        ++slot;
    }
}

void PreparedOperators::apply_potential(StateVector &state, bool half) const {
    if (!has_potential_) {
        return;
    }
    const auto &phase = half ? half_phase_ : full_phase_;
    auto amps = state.amplitudes();
    for (std::size_t m = 0; m < amps.size(); ++m) {
        amps[m] *= phase[m];
    }
}

void PreparedOperators::apply_kinetic(StateVector &state) const {
    for (const auto &rk : kinetic_) {
        const auto &plan = plans_[rk.plan];
        if (const auto *trotter = std::get_if<KineticTrotterPlan>(&plan)) {
            apply_register(state, rk.reg, *trotter, BlockSweep::ascending);
            if (splitting_ == Splitting::strang) {
                apply_register(state, rk.reg, *trotter, BlockSweep::descending);
            }
        } else {
            apply_register(state, rk.reg, std::get<SpectralKineticPlan>(plan));
        }
    }
}

void step(StateVector &state, const EvolutionPlan &plan, const PreparedOperators &operators) {
    if (state.dimension() != operators.dimension()) {
        throw ValidationError("prepared operators do not match the state dimension");
    }
    if (plan.splitting == Splitting::strang) {
        operators.apply_potential(state, true);
        operators.apply_kinetic(state);
        operators.apply_potential(state, true);
    } else {
        operators.apply_potential(state, false);
        operators.apply_kinetic(state);
    }
}

std::vector<std::size_t> snapshot_steps(std::size_t steps, std::size_t count) {
    std::vector<std::size_t> out;
    if (count == 0 || steps == 0) {
        return out;
    }
    count = std::min(count, steps);
    for (std::size_t k = 1; k <= count; ++k) {
        // Integer rounding of k*steps/count.
        const std::size_t s = (2 * k * steps + count) / (2 * count);
        if (out.empty() || out.back() != s) {
            out.push_back(s);
        }
    }
    return out;
}

EvolutionReport evolve(StateVector state, const EvolutionPlan &plan, const PreparedOperators &operators) {
    plan.validate();
    const auto snaps = snapshot_steps(plan.steps, plan.snapshot_count);
    const double eps = plan.time_step();

    std::vector<double> drift;
    drift.reserve(plan.steps);
    std::vector<Snapshot> snapshots;
    auto next_snap = snaps.begin();
    for (std::size_t s = 1; s <= plan.steps; ++s) {
        step(state, plan, operators);
        const double d = std::abs(state.norm() - 1.0);
        drift.push_back(d);
        if (!(d <= kNormAbortThreshold)) {
            throw NumericalError("norm drift " + std::to_string(d) + " at step " + std::to_string(s) +
                                 " exceeds the abort threshold");
        }
        if (next_snap != snaps.end() && *next_snap == s) {
            snapshots.push_back({s, eps * static_cast<double>(s), density(state)});
            ++next_snap;
        }
    }
    return EvolutionReport{std::move(drift), std::move(state), std::move(snapshots)};
}

EvolutionReport evolve(StateVector state, const EvolutionPlan &plan, std::span<const ParticleSpec> all_particles) {
    const PreparedOperators ops(state.grid(), all_particles, plan);
    return evolve(std::move(state), plan, ops);
}

std::uint64_t CounterRng::bits(std::uint64_t counter) const {
    // SplitMix64 finalizer applied to a Weyl sequence position.
    std::uint64_t z = seed_ + (counter + 1) * 0x9E3779B97F4A7C15ull;
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ull;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBull;
    return z ^ (z >> 31);
}

double CounterRng::uniform(std::uint64_t counter) const {
    return static_cast<double>(bits(counter) >> 11) * 0x1.0p-53;
}

std::vector<std::uint64_t> sample_configurations(const StateVector &state, std::uint64_t shots, std::uint64_t seed) {
    if (shots == 0) {
        throw ValidationError("shot count must be at least 1");
    }
    const auto probs = density(state);
    std::vector<double> cdf(probs.size());
    std::partial_sum(probs.begin(), probs.end(), cdf.begin());
    const double total = cdf.back();

    const CounterRng rng(seed);
    std::vector<std::uint64_t> hist(probs.size(), 0);
    for (std::uint64_t s = 0; s < shots; ++s) {
        const double u = rng.uniform(s) * total;
        const auto it = std::upper_bound(cdf.begin(), cdf.end(), u);
        std::size_t idx = 0;
        if (it != cdf.end()) {
            idx = static_cast<std::size_t>(it - cdf.begin());
        } else {
            // u rounded up to the total: take the last bin with support.
            idx = probs.size() - 1;
            while (idx > 0 && probs[idx] == 0.0) {
                --idx;
            }
        }
        ++hist[idx];
    }
    return hist;
}

} // namespace wz
