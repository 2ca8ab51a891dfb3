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
 * Spatial discretization, position-basis index layout and state vectors.
 *
 * All quantities are in atomic units: hbar = 1, electron mass = 1,
 * e^2/(4 pi eps0) = 1. Lengths are in bohr, energies in hartree.
 *
 * Register layout of a joint basis index (frozen):
 *   particle-major, then axis order x, y, z, then big-endian bits inside
 *   each n-qubit axis register. Register r = p*d + a occupies bits
 *   [(R-1-r)*n, (R-r)*n) of the flat index, where R = d*N_q; register 0
 *   is the most significant.
 */

#pragma once

#include <complex>
#include <cstddef>
#include <cstdint>
#include <functional>
#include <span>
#include <vector>

#ifndef WZ_MAX_JOINT_QUBITS
#define WZ_MAX_JOINT_QUBITS 30
#endif

namespace wz {

using Complex = std::complex<double>;
using AmplitudeVector = std::vector<Complex>;

inline constexpr int kMaxQubitsPerAxis = 20;
inline constexpr int kMaxJointQubits = WZ_MAX_JOINT_QUBITS;

struct GridSpec {
    double length = 1.0;     ///< box edge L (bohr)
    int qubits_per_axis = 1; ///< n
    int dimensions = 1;      ///< d in {1, 2, 3}
    double cell_width = 0.5; ///< delta = L / 2^n

    [[nodiscard]] std::size_t cells_per_axis() const { return std::size_t{1} << qubits_per_axis; }
    [[nodiscard]] std::size_t cells_per_particle() const {
        return std::size_t{1} << (qubits_per_axis * dimensions);
    }
};

/// Validates (L, n, d) and returns the grid with delta = L / 2^n.
GridSpec build_grid(double length, int qubits_per_axis, int dimensions);

/// Cell center delta*(i + 1/2, ...) for d per-axis indices.
std::vector<double> cell_center(const GridSpec &grid, std::span<const std::size_t> cell);

enum class ParticleKind { quantum, clamped };

struct ParticleSpec {
    double mass = 1.0;   ///< electron masses
    double charge = -1.; ///< elementary charges, signed
    ParticleKind kind = ParticleKind::quantum;
    std::vector<std::size_t> clamped_cell; ///< per-axis cell, only for clamped particles

    /// Positive charges are treated as nuclei; everything else is electron-like.
    [[nodiscard]] bool is_nucleus() const { return charge > 0.0; }
    [[nodiscard]] bool is_quantum() const { return kind == ParticleKind::quantum; }

    static ParticleSpec electron() { return {}; }
    static ParticleSpec clamped_nucleus(double charge, double mass, std::vector<std::size_t> cell) {
        return {mass, charge, ParticleKind::clamped, std::move(cell)};
    }
    static ParticleSpec quantum_nucleus(double charge, double mass) {
        return {mass, charge, ParticleKind::quantum, {}};
    }
};

/// Throws ValidationError on non-positive mass or a malformed clamped cell.
void validate_particle(const GridSpec &grid, const ParticleSpec &particle);

/// Bijection between flat joint indices and per-register cell indices.
class IndexCodec {
  public:
    IndexCodec(int qubits_per_axis, int dimensions, int quantum_particles);

    [[nodiscard]] int qubits_per_axis() const { return n_; }
    [[nodiscard]] int dimensions() const { return d_; }
    [[nodiscard]] int quantum_particles() const { return nq_; }
    [[nodiscard]] int registers() const { return d_ * nq_; }
    [[nodiscard]] std::size_t cells_per_axis() const { return std::size_t{1} << n_; }
    [[nodiscard]] std::size_t size() const { return std::size_t{1} << (n_ * registers()); }

    /// Flat-index distance between neighbouring cells of register r.
    [[nodiscard]] std::size_t register_stride(int r) const {
        return std::size_t{1} << (n_ * (registers() - 1 - r));
    }
    [[nodiscard]] std::size_t register_cell(std::size_t flat, int r) const {
        return (flat / register_stride(r)) & (cells_per_axis() - 1);
    }

    /// cells has one entry per register (particle-major, then axis).
    [[nodiscard]] std::size_t flat_index(std::span<const std::size_t> cells) const;
    [[nodiscard]] std::vector<std::size_t> cells(std::size_t flat) const;

  private:
    int n_;
    int d_;
    int nq_;
};

/// Calls fn(base, stride) once per 1D line of register r; the line's
/// elements sit at base + c*stride for c in [0, 2^n).
template <class Fn> void for_each_register_line(const IndexCodec &codec, int r, Fn &&fn) {
    const std::size_t stride = codec.register_stride(r);
    const std::size_t block = stride * codec.cells_per_axis();
    const std::size_t total = codec.size();
    for (std::size_t outer = 0; outer < total; outer += block) {
        for (std::size_t inner = 0; inner < stride; ++inner) {
            fn(outer + inner, stride);
        }
    }
}

class StateVector {
  public:
    StateVector(GridSpec grid, std::vector<ParticleSpec> quantum_particles, AmplitudeVector amplitudes);

    [[nodiscard]] const GridSpec &grid() const { return grid_; }
    [[nodiscard]] const std::vector<ParticleSpec> &particles() const { return particles_; }
    [[nodiscard]] const IndexCodec &codec() const { return codec_; }
    [[nodiscard]] std::size_t dimension() const { return amplitudes_.size(); }

    [[nodiscard]] std::span<const Complex> amplitudes() const { return amplitudes_; }
    [[nodiscard]] std::span<Complex> amplitudes() { return amplitudes_; }
    [[nodiscard]] const AmplitudeVector &data() const { return amplitudes_; }

    [[nodiscard]] double norm() const;
    /// Rescales to unit norm; throws NumericalError for the zero vector.
    void normalize();

  private:
    GridSpec grid_;
    std::vector<ParticleSpec> particles_;
    IndexCodec codec_;
    AmplitudeVector amplitudes_;
};

/// One joint configuration handed to an encode_state sampler.
struct Configuration {
    std::span<const std::size_t> cells;            ///< per register
    std::span<const std::vector<double>> positions; ///< per quantum particle, d components
};

using Sampler = std::function<Complex(const Configuration &)>;

/// Samples at every cell-center configuration, then normalizes the joint vector.
/// Clamped particles in `particles` are skipped.
StateVector encode_state(const GridSpec &grid, std::span<const ParticleSpec> particles,
                         const Sampler &sampler);

/// Builds a state from explicit amplitudes, normalizing them.
StateVector make_state(const GridSpec &grid, std::span<const ParticleSpec> particles,
                       AmplitudeVector amplitudes);

std::vector<double> density(const StateVector &state);

/// Probability per cell of one quantum particle, summed over the others.
std::vector<double> marginal_density(const StateVector &state, int particle);

/// Throws ResourceError when d*n*N_q exceeds the joint-qubit guard.
void check_joint_size(const GridSpec &grid, int quantum_particles);

} // namespace wz
