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
 * Discrete derivative and momentum operators, and the two ways of applying
 * the kinetic propagator exp(-i eps P^2 / 2M) to one axis register:
 *
 *  - Trotter blocks: exp(xi A^2) with A the +-1 off-diagonal stencil and
 *    xi = i eps / (8 M delta^2), split into two endpoint phases and the
 *    3x3 blocks M_P acting on cells (i-1, i, i+1), i = 1 .. D-2.
 *  - Spectral: QFT, multiply by exp(-i eps p_k^2 / 2M) with
 *    p_k = -(1/delta) sin(2 pi k / D), inverse QFT. This operator is
 *    periodic; box problems need an explicit wall potential.
 *
 * The squared momentum stencil couples next-nearest neighbours
 * only, so even and odd sublattices evolve independently under both methods.
 */

#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include <Eigen/Dense>

#include "wz/grid.hpp"

namespace wz {

/// (1/2delta) * stencil with one-sided rows at both ends. Requires D >= 2.
Eigen::MatrixXd derivative_matrix(std::size_t cells, double cell_width);

/// -i/(2 delta) * (superdiagonal +1, subdiagonal -1). Hermitian, zero diagonal.
Eigen::MatrixXcd momentum_matrix(std::size_t cells, double cell_width);

/// exp([[0,0,xi],[0,-2xi,0],[xi,0,0]]) in closed form.
Eigen::Matrix3cd mp_block(Complex xi);

/// In-place transform F = D^{-1/2} sum_jk exp(+i 2 pi j k / D) |j><k| of length D = 2^m.
class FourierTransform {
  public:
    explicit FourierTransform(std::size_t length);

    [[nodiscard]] std::size_t length() const { return length_; }
    void forward(std::span<Complex> values) const;
    void inverse(std::span<Complex> values) const;

  private:
    void transform(std::span<Complex> values, bool conjugate) const;

    std::size_t length_;
    std::vector<std::size_t> bit_reverse_;
    std::vector<Complex> twiddles_; // exp(+i 2 pi k / D), k < D/2
};

AmplitudeVector qft(std::span<const Complex> values);
AmplitudeVector iqft(std::span<const Complex> values);

/// -(1/delta) sin(2 pi k / D).
double momentum_eigenvalue(std::size_t k, std::size_t cells, double cell_width);

/// Order in which the Trotter factors are applied to the state.
enum class BlockSweep {
    ascending,  ///< phase on |0>, blocks i = 1 .. D-2, phase on |D-1>
    descending, ///< exact reverse of ascending
};

struct KineticTrotterPlan {
    std::size_t cells = 2;
    Complex xi;             ///< i eps / (8 M delta^2)
    Eigen::Matrix3cd block; ///< mp_block(xi)
    Complex endpoint_phase; ///< exp(-xi)

    static KineticTrotterPlan make(std::size_t cells, double cell_width, double mass, double time_step);
};

struct SpectralKineticPlan {
    std::vector<Complex> phases; ///< exp(-i eps p_k^2 / 2M)
    FourierTransform transform;

    static SpectralKineticPlan make(std::size_t cells, double cell_width, double mass, double time_step);
};

/// Apply a prepared plan to register r (= particle*d + axis) of the state.
void apply_register(StateVector &state, int reg, const KineticTrotterPlan &plan,
                    BlockSweep sweep = BlockSweep::ascending);
void apply_register(StateVector &state, int reg, const SpectralKineticPlan &plan);

void apply_kinetic_trotter(StateVector &state, int particle, int axis, double mass, double time_step,
                           BlockSweep sweep = BlockSweep::ascending);
void apply_kinetic_spectral(StateVector &state, int particle, int axis, double mass, double time_step);

struct FourierDiagnostic {
    double max_off_diagonal = 0.0;
    std::vector<double> diagonal; ///< real parts of diag(F P F^dagger)
    double max_diagonal_imag = 0.0;
};

inline constexpr std::size_t kMaxDiagnosticCells = 4096;

/// Dense F P F^dagger for the momentum matrix at fixed delta.
FourierDiagnostic fourier_conjugation_diagnostic(std::size_t cells, double cell_width);

} // namespace wz
