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

#include "wz/grid.hpp"

#include <cmath>
#include <numeric>
#include <string>

#include "wz/error.hpp"

namespace wz {

GridSpec build_grid(double length, int qubits_per_axis, int dimensions) {
    if (!(length > 0.0) || !std::isfinite(length)) {
        throw ValidationError("box length must be positive and finite, got " + std::to_string(length));
    }
    if (qubits_per_axis < 1 || qubits_per_axis > kMaxQubitsPerAxis) {
        throw ValidationError("qubits per axis must be in [1, " + std::to_string(kMaxQubitsPerAxis) +
                              "], got " + std::to_string(qubits_per_axis));
    }
    if (dimensions < 1 || dimensions > 3) {
        throw ValidationError("dimensionality must be 1, 2 or 3, got " + std::to_string(dimensions));
    }
    // ldexp is exact, so cell_width * 2^n == length bit for bit.
    return GridSpec{length, qubits_per_axis, dimensions, std::ldexp(length, -qubits_per_axis)};
}

std::vector<double> cell_center(const GridSpec &grid, std::span<const std::size_t> cell) {
    if (cell.size() != static_cast<std::size_t>(grid.dimensions)) {
        throw ValidationError("cell_center expects " + std::to_string(grid.dimensions) + " indices");
    }
    std::vector<double> r(cell.size());
    for (std::size_t a = 0; a < cell.size(); ++a) {
        if (cell[a] >= grid.cells_per_axis()) {
            throw ValidationError("cell index " + std::to_string(cell[a]) + " out of range");
        }
        r[a] = grid.cell_width * (static_cast<double>(cell[a]) + 0.5);
    }
    return r;
}

void validate_particle(const GridSpec &grid, const ParticleSpec &particle) {
    if (!(particle.mass > 0.0) || !std::isfinite(particle.mass)) {
        throw ValidationError("particle mass must be positive");
    }
    if (!std::isfinite(particle.charge)) {
        throw ValidationError("particle charge must be finite");
    }
    if (particle.kind == ParticleKind::clamped) {
        if (particle.clamped_cell.size() != static_cast<std::size_t>(grid.dimensions)) {
            throw ValidationError("clamped particle needs one cell index per axis");
        }
        for (auto c : particle.clamped_cell) {
            if (c >= grid.cells_per_axis()) {
                throw ValidationError("clamped cell index out of range");
            }
        }
    } else if (!particle.clamped_cell.empty()) {
        throw ValidationError("quantum particle must not carry a clamped cell");
    }
}

void check_joint_size(const GridSpec &grid, int quantum_particles) {
    const long long qubits = static_cast<long long>(grid.dimensions) * grid.qubits_per_axis * quantum_particles;
    if (qubits > kMaxJointQubits) {
        throw ResourceError("joint register of " + std::to_string(qubits) + " qubits exceeds the guard of " +
                            std::to_string(kMaxJointQubits));
    }
}

IndexCodec::IndexCodec(int qubits_per_axis, int dimensions, int quantum_particles)
    : n_(qubits_per_axis), d_(dimensions), nq_(quantum_particles) {
    if (n_ < 1 || d_ < 1 || d_ > 3 || nq_ < 0) {
        throw ValidationError("invalid index codec shape");
    }
    if (static_cast<long long>(n_) * d_ * nq_ > kMaxJointQubits) {
        throw ResourceError("index codec exceeds the joint-qubit guard");
    }
}

std::size_t IndexCodec::flat_index(std::span<const std::size_t> cells) const {
    if (cells.size() != static_cast<std::size_t>(registers())) {
        throw ValidationError("flat_index expects " + std::to_string(registers()) + " register cells");
    }
    std::size_t flat = 0;
    for (auto c : cells) {
        if (c >= cells_per_axis()) {
            throw ValidationError("register cell " + std::to_string(c) + " out of range");
        }
        flat = (flat << n_) | c;
    }
    return flat;
}

std::vector<std::size_t> IndexCodec::cells(std::size_t flat) const {
    if (flat >= size()) {
        throw ValidationError("flat index " + std::to_string(flat) + " out of range");
    }
    std::vector<std::size_t> out(static_cast<std::size_t>(registers()));
    for (int r = registers() - 1; r >= 0; --r) {
        out[static_cast<std::size_t>(r)] = flat & (cells_per_axis() - 1);
        flat >>= n_;
    }
    return out;
}

StateVector::StateVector(GridSpec grid, std::vector<ParticleSpec> quantum_particles, AmplitudeVector amplitudes)
    : grid_(grid), particles_(std::move(quantum_particles)),
      codec_(grid_.qubits_per_axis, grid_.dimensions, static_cast<int>(particles_.size())),
      amplitudes_(std::move(amplitudes)) {
    if (particles_.empty()) {
        throw ValidationError("a state vector needs at least one quantum particle");
    }
    for (const auto &p : particles_) {
        if (!p.is_quantum()) {
            throw ValidationError("state vector particle list must contain quantum particles only");
        }
    }
    if (amplitudes_.size() != codec_.size()) {
        throw ValidationError("amplitude vector has length " + std::to_string(amplitudes_.size()) +
                              ", expected " + std::to_string(codec_.size()));
    }
}

double StateVector::norm() const {
    double sum = 0.0;
    for (const auto &a : amplitudes_) {
        sum += std::norm(a);
    }
    return std::sqrt(sum);
}

void StateVector::normalize() {
    const double nrm = norm();
    if (!(nrm > 0.0) || !std::isfinite(nrm)) {
        throw NumericalError("cannot normalize a zero or non-finite state");
    }
    const double scale = 1.0 / nrm;
    for (auto &a : amplitudes_) {
        a *= scale;
    }
}

namespace {

std::vector<ParticleSpec> quantum_only(const GridSpec &grid, std::span<const ParticleSpec> particles) {
    std::vector<ParticleSpec> out;
    for (const auto &p : particles) {
        validate_particle(grid, p);
        if (p.is_quantum()) {
            out.push_back(p);
        }
    }
    if (out.empty()) {
        throw ValidationError("at least one quantum particle is required");
    }
    check_joint_size(grid, static_cast<int>(out.size()));
    return out;
}

} // namespace

StateVector encode_state(const GridSpec &grid, std::span<const ParticleSpec> particles, const Sampler &sampler) {
    auto quantum = quantum_only(grid, particles);
    const IndexCodec codec(grid.qubits_per_axis, grid.dimensions, static_cast<int>(quantum.size()));
    const auto d = static_cast<std::size_t>(grid.dimensions);

    AmplitudeVector amps(codec.size());
    std::vector<std::vector<double>> positions(quantum.size(), std::vector<double>(d));
    for (std::size_t flat = 0; flat < codec.size(); ++flat) {
        const auto cells = codec.cells(flat);
        for (std::size_t p = 0; p < quantum.size(); ++p) {
            for (std::size_t a = 0; a < d; ++a) {
                positions[p][a] = grid.cell_width * (static_cast<double>(cells[p * d + a]) + 0.5);
            }
        }
        amps[flat] = sampler(Configuration{cells, positions});
    }

    StateVector state(grid, std::move(quantum), std::move(amps));
    if (!(state.norm() > 0.0)) {
        throw ValidationError("sampler returned zero amplitude everywhere; cannot normalize");
    }
    state.normalize();
    return state;
}

StateVector make_state(const GridSpec &grid, std::span<const ParticleSpec> particles, AmplitudeVector amplitudes) {
    StateVector state(grid, quantum_only(grid, particles), std::move(amplitudes));
    if (!(state.norm() > 0.0)) {
        throw ValidationError("zero amplitude vector cannot be normalized");
    }
    state.normalize();
    return state;
}

std::vector<double> density(const StateVector &state) {
    std::vector<double> out(state.dimension());
    const auto amps = state.amplitudes();
    for (std::size_t i = 0; i < out.size(); ++i) {
        out[i] = std::norm(amps[i]);
    }
    return out;
}

std::vector<double> marginal_density(const StateVector &state, int particle) {
    const auto &codec = state.codec();
    if (particle < 0 || particle >= codec.quantum_particles()) {
        throw ValidationError("particle index " + std::to_string(particle) + " out of range");
    }
    const int n = codec.qubits_per_axis();
    const int d = codec.dimensions();
    // The particle's d registers are contiguous bits, so its cell is a bit field.
    const int low_bits = n * d * (codec.quantum_particles() - 1 - particle);
    const std::size_t mask = (std::size_t{1} << (n * d)) - 1;

    std::vector<double> out(std::size_t{1} << (n * d), 0.0);
    const auto amps = state.amplitudes();
    for (std::size_t flat = 0; flat < amps.size(); ++flat) {
        out[(flat >> low_bits) & mask] += std::norm(amps[flat]);
    }
    return out;
}

} // namespace wz
