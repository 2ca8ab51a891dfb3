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
 * Diagonal-operator circuits.
 *
 * Qubit 0 is the most significant bit of a basis index, matching the grid
 * register layout. Two synthesis strategies are provided:
 *
 *  - parity compression: when the phase of |x> depends only on the parity
 *    of a qubit subset S and on the last qubit, CNOTs fold the parity onto
 *    one qubit t in S, two phase gates controlled by t (with an X flip in
 *    between) set the four distinct phases, and the CNOTs are undone;
 *  - naive multiplexing: every pattern of the leading w-1 qubits controls
 *    its own two-phase gate on the last qubit.
 */

#pragma once

#include <array>
#include <cstddef>
#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "wz/evolution.hpp"
#include "wz/potential.hpp"

namespace wz {

enum class GateKind { x, cnot, phase, controlled_phase };

struct Gate {
    GateKind kind = GateKind::x;
    int target = 0;
    std::vector<int> controls;       ///< CNOT: exactly one; controlled phase: one or more
    std::array<double, 2> phases{}; ///< phase gates: diag(e^{i a}, e^{i b}) on the target

    static Gate pauli_x(int target) { return {GateKind::x, target, {}, {}}; }
    static Gate cnot(int control, int target) { return {GateKind::cnot, target, {control}, {}}; }
    static Gate phase(int target, double a, double b) { return {GateKind::phase, target, {}, {a, b}}; }
    static Gate controlled_phase(std::vector<int> controls, int target, double a, double b) {
        return {GateKind::controlled_phase, target, std::move(controls), {a, b}};
    }

    [[nodiscard]] bool is_phase_gate() const {
        return kind == GateKind::phase || kind == GateKind::controlled_phase;
    }
};

struct Circuit {
    int width = 0;
    std::vector<Gate> gates;

    /// Throws ValidationError on bad qubit indices or control lists.
    void validate() const;
    [[nodiscard]] std::size_t phase_gate_count() const;
    [[nodiscard]] std::size_t controlled_phase_count() const;
};

inline constexpr int kMaxDenseCircuitWidth = 12;

/// Applies one gate to a 2^width amplitude vector in place.
void apply_gate(std::span<Complex> amplitudes, int width, const Gate &gate);

Eigen::MatrixXcd circuit_unitary(const Circuit &circuit);

/// Circuit for diag(exp(i phases[m])); uses parity compression when it applies.
Circuit synthesize_diagonal(std::span<const double> phases);

/// Always the naive multiplexed construction.
Circuit synthesize_diagonal_naive(std::span<const double> phases);

/// Half of an antidiagonally symmetric diagonal; entry dim-1-x mirrors entry x.
struct FoldedDiagonal {
    std::vector<double> half;
    PotentialTerm label = PotentialTerm::composite;

    [[nodiscard]] std::size_t full_size() const { return 2 * half.size(); }
    [[nodiscard]] DiagonalOperator unfold() const;
};

FoldedDiagonal antidiagonal_fold(const DiagonalOperator &diag);

/// trotter: 3 N 2^n. spectral: 3 N (2^n + n(n+1)/2), the QFT supplying n(n+1)/2.
std::uint64_t count_kinetic_gates(int particles, int qubits_per_axis, KineticMethod method);

/// One gate per line: `KIND target [control[,control...]] [theta_a theta_b]`,
/// preceded by a `# width w` comment. Angles carry 17 significant digits.
std::string serialize_circuit(const Circuit &circuit);
Circuit parse_circuit(const std::string &text);

} // namespace wz
