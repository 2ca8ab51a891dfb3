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

#include "wz/synthesis.hpp"

#include <algorithm>
#include <bit>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <optional>
#include <sstream>

#include "wz/error.hpp"

namespace wz {

namespace {

constexpr double kPatternTolerance = 1e-12;

std::size_t bit_of(int width, int qubit) { return std::size_t{1} << (width - 1 - qubit); }

int width_of(std::span<const double> phases) {
    const std::size_t len = phases.size();
    if (len < 2 || !std::has_single_bit(len)) {
        throw ValidationError("phase vector length must be a power of two >= 2, got " + std::to_string(len));
    }
    const int width = std::countr_zero(len);
    if (width > kMaxDenseCircuitWidth) {
        throw ResourceError("diagonal synthesis limited to " + std::to_string(kMaxDenseCircuitWidth) + " qubits");
    }
    return width;
}

const char *kind_name(GateKind kind) {
    switch (kind) {
    case GateKind::x:
        return "X";
    case GateKind::cnot:
        return "CNOT";
    case GateKind::phase:
        return "PHASE";
    case GateKind::controlled_phase:
        return "CPHASE";
    }
    return "?";
}

std::string format_angle(double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

/// phase(parity, last) table if phases depend only on parity of `subset` and the last qubit.
std::optional<std::array<double, 4>> parity_pattern(std::span<const double> phases, std::size_t subset) {
    std::array<double, 4> table{};
    std::array<bool, 4> seen{};
    for (std::size_t x = 0; x < phases.size(); ++x) {
        const auto parity = static_cast<std::size_t>(std::popcount((x >> 1) & subset) & 1);
        const std::size_t key = 2 * parity + (x & 1u);
        if (!seen[key]) {
            seen[key] = true;
            table[key] = phases[x];
        } else if (std::abs(table[key] - phases[x]) > kPatternTolerance) {
            return std::nullopt;
        }
    }
    return table;
}

} // namespace

void Circuit::validate() const {
    if (width < 1) {
        throw ValidationError("circuit width must be positive");
    }
    auto check_qubit = [&](int q) {
        if (q < 0 || q >= width) {
            throw ValidationError("qubit index " + std::to_string(q) + " outside circuit width " +
                                  std::to_string(width));
        }
    };
    for (const auto &g : gates) {
        check_qubit(g.target);
        for (int c : g.controls) {
            check_qubit(c);
            if (c == g.target) {
                throw ValidationError("control equals target");
            }
        }
        for (std::size_t i = 0; i < g.controls.size(); ++i) {
            for (std::size_t j = i + 1; j < g.controls.size(); ++j) {
                if (g.controls[i] == g.controls[j]) {
                    throw ValidationError("duplicate control qubit");
                }
            }
        }
        switch (g.kind) {
        case GateKind::x:
        case GateKind::phase:
            if (!g.controls.empty()) {
                throw ValidationError("uncontrolled gate carries controls");
            }
            break;
        case GateKind::cnot:
            if (g.controls.size() != 1) {
                throw ValidationError("CNOT needs exactly one control");
            }
            break;
        case GateKind::controlled_phase:
            if (g.controls.empty()) {
                throw ValidationError("controlled phase needs at least one control");
            }
            break;
        }
    }
}

std::size_t Circuit::phase_gate_count() const {
    return static_cast<std::size_t>(std::count_if(gates.begin(), gates.end(), [](const Gate &g) {
        return g.is_phase_gate();
    }));
}

std::size_t Circuit::controlled_phase_count() const {
    return static_cast<std::size_t>(std::count_if(gates.begin(), gates.end(), [](const Gate &g) {
        return g.kind == GateKind::controlled_phase;
    }));
}

void apply_gate(std::span<Complex> amplitudes, int width, const Gate &gate) {
    const std::size_t tbit = bit_of(width, gate.target);
    std::size_t cmask = 0;
    for (int c : gate.controls) {
        cmask |= bit_of(width, c);
    }
    switch (gate.kind) {
    case GateKind::x:
    case GateKind::cnot:
        for (std::size_t i = 0; i < amplitudes.size(); ++i) {
            if ((i & tbit) == 0 && (i & cmask) == cmask) {
                std::swap(amplitudes[i], amplitudes[i | tbit]);
            }
        }
        break;
    case GateKind::phase:
    case GateKind::controlled_phase: {
        const Complex pa = std::polar(1.0, gate.phases[0]);
        const Complex pb = std::polar(1.0, gate.phases[1]);
        for (std::size_t i = 0; i < amplitudes.size(); ++i) {
            if ((i & cmask) == cmask) {
                amplitudes[i] *= (i & tbit) ? pb : pa;
            }
        }
        break;
    }
    }
}

Eigen::MatrixXcd circuit_unitary(const Circuit &circuit) {
    if (circuit.width > kMaxDenseCircuitWidth) {
        throw ResourceError("dense circuit unitary limited to width " + std::to_string(kMaxDenseCircuitWidth));
    }
    circuit.validate();
    const auto dim = static_cast<Eigen::Index>(std::size_t{1} << circuit.width);
    Eigen::MatrixXcd u = Eigen::MatrixXcd::Identity(dim, dim);
    for (Eigen::Index col = 0; col < dim; ++col) {
        std::span<Complex> column(u.col(col).data(), static_cast<std::size_t>(dim));
        for (const auto &g : circuit.gates) {
            apply_gate(column, circuit.width, g);
        }
    }
    return u;
}

Circuit synthesize_diagonal_naive(std::span<const double> phases) {
    const int width = width_of(phases);
    Circuit circuit{width, {}};
    const int last = width - 1;
    if (width == 1) {
        circuit.gates.push_back(Gate::phase(0, phases[0], phases[1]));
        return circuit;
    }
    std::vector<int> controls(static_cast<std::size_t>(width - 1));
    for (int q = 0; q < width - 1; ++q) {
        controls[static_cast<std::size_t>(q)] = q;
    }
    const std::size_t patterns = std::size_t{1} << (width - 1);
    for (std::size_t c = 0; c < patterns; ++c) {
        // Controls fire on |1>, so zero bits of the pattern are flipped around the gate.
        std::vector<int> flips;
        for (int q = 0; q < width - 1; ++q) {
            if ((c & (std::size_t{1} << (width - 2 - q))) == 0) {
                flips.push_back(q);
            }
        }
        for (int q : flips) {
            circuit.gates.push_back(Gate::pauli_x(q));
        }
        circuit.gates.push_back(Gate::controlled_phase(controls, last, phases[2 * c], phases[2 * c + 1]));
        for (int q : flips) {
            circuit.gates.push_back(Gate::pauli_x(q));
        }
    }
    return circuit;
}

Circuit synthesize_diagonal(std::span<const double> phases) {
    const int width = width_of(phases);
    Circuit circuit{width, {}};
    if (std::all_of(phases.begin(), phases.end(), [](double t) { return t == 0.0; })) {
        return circuit;
    }
    const int last = width - 1;
    const std::size_t leading = std::size_t{1} << (width - 1);

    // Smallest subset first; subsets are bit masks over the leading qubits
    // with bit (width-2-q) standing for qubit q.
    std::vector<std::size_t> subsets(leading);
    for (std::size_t s = 0; s < leading; ++s) {
        subsets[s] = s;
    }
    std::stable_sort(subsets.begin(), subsets.end(),
                     [](std::size_t a, std::size_t b) { return std::popcount(a) < std::popcount(b); });

    for (std::size_t subset : subsets) {
        const auto table = parity_pattern(phases, subset);
        if (!table) {
            continue;
        }
        if (subset == 0) {
            circuit.gates.push_back(Gate::phase(last, (*table)[0], (*table)[1]));
            return circuit;
        }
        std::vector<int> members;
        for (int q = 0; q < width - 1; ++q) {
            if (subset & (std::size_t{1} << (width - 2 - q))) {
                members.push_back(q);
            }
        }
        const int fold = members.back();
        for (int q : members) {
            if (q != fold) {
                circuit.gates.push_back(Gate::cnot(q, fold));
            }
        }
        circuit.gates.push_back(Gate::controlled_phase({fold}, last, (*table)[2], (*table)[3]));
        circuit.gates.push_back(Gate::pauli_x(fold));
        circuit.gates.push_back(Gate::controlled_phase({fold}, last, (*table)[0], (*table)[1]));
        circuit.gates.push_back(Gate::pauli_x(fold));
        for (auto it = members.rbegin(); it != members.rend(); ++it) {
            if (*it != fold) {
                circuit.gates.push_back(Gate::cnot(*it, fold));
            }
        }
        return circuit;
    }
    return synthesize_diagonal_naive(phases);
}

DiagonalOperator FoldedDiagonal::unfold() const {
    DiagonalOperator out{std::vector<double>(full_size()), label};
    const std::size_t dim = full_size();
    for (std::size_t x = 0; x < half.size(); ++x) {
        out.energies[x] = half[x];
        out.energies[dim - 1 - x] = half[x];
    }
    return out;
}

FoldedDiagonal antidiagonal_fold(const DiagonalOperator &diag) {
    if (diag.size() < 2 || diag.size() % 2 != 0) {
        throw ValidationError("antidiagonal fold needs an even-length diagonal");
    }
    // Exact equality: the fold must reconstruct bit for bit.
    if (!antidiagonal_symmetry_check(diag, 0.0)) {
        throw ValidationError("diagonal is not symmetric about the antidiagonal");
    }
    return FoldedDiagonal{std::vector<double>(diag.energies.begin(),
                                              diag.energies.begin() + static_cast<std::ptrdiff_t>(diag.size() / 2)),
                          diag.label};
}

std::uint64_t count_kinetic_gates(int particles, int qubits_per_axis, KineticMethod method) {
    if (particles < 1 || qubits_per_axis < 1 || qubits_per_axis > 62) {
        throw ValidationError("gate count needs N >= 1 and 1 <= n <= 62");
    }
    const auto n = static_cast<std::uint64_t>(qubits_per_axis);
    const std::uint64_t per_axis = std::uint64_t{1} << n;
    const std::uint64_t qft = method == KineticMethod::spectral ? n * (n + 1) / 2 : 0;
    return 3 * static_cast<std::uint64_t>(particles) * (per_axis + qft);
}

std::string serialize_circuit(const Circuit &circuit) {
    circuit.validate();
    std::ostringstream out;
    out << "# width " << circuit.width << '\n';
    for (const auto &g : circuit.gates) {
        out << kind_name(g.kind) << ' ' << g.target;
        if (!g.controls.empty()) {
            out << ' ';
            for (std::size_t i = 0; i < g.controls.size(); ++i) {
                out << (i ? "," : "") << g.controls[i];
            }
        }
        if (g.is_phase_gate()) {
            out << ' ' << format_angle(g.phases[0]) << ' ' << format_angle(g.phases[1]);
        }
        out << '\n';
    }
    return out.str();
}

Circuit parse_circuit(const std::string &text) {
    std::istringstream in(text);
    std::string line;
    Circuit circuit;
    int max_qubit = -1;
    while (std::getline(in, line)) {
        if (line.empty()) {
            continue;
        }
        std::istringstream ls(line);
        std::string kind;
        ls >> kind;
        if (kind == "#") {
            std::string key;
            ls >> key;
            if (key == "width") {
                ls >> circuit.width;
            }
            continue;
        }
        Gate g;
        if (!(ls >> g.target)) {
            throw ValidationError("missing target in circuit line: " + line);
        }
        auto read_controls = [&] {
            std::string field;
            if (!(ls >> field)) {
                throw ValidationError("missing control in circuit line: " + line);
            }
            std::istringstream fs(field);
            std::string tok;
            while (std::getline(fs, tok, ',')) {
                int q = -1;
                const auto [ptr, ec] = std::from_chars(tok.data(), tok.data() + tok.size(), q);
                if (ec != std::errc{} || ptr != tok.data() + tok.size()) {
                    throw ValidationError("malformed control '" + tok + "' in circuit line: " + line);
                }
                g.controls.push_back(q);
            }
        };
        auto read_phases = [&] {
            if (!(ls >> g.phases[0] >> g.phases[1])) {
                throw ValidationError("missing phases in circuit line: " + line);
            }
        };
        if (kind == "X") {
            g.kind = GateKind::x;
        } else if (kind == "CNOT") {
            g.kind = GateKind::cnot;
            read_controls();
        } else if (kind == "PHASE") {
            g.kind = GateKind::phase;
            read_phases();
        } else if (kind == "CPHASE") {
            g.kind = GateKind::controlled_phase;
            read_controls();
            read_phases();
        } else {
            throw ValidationError("unknown gate kind '" + kind + "'");
        }
        max_qubit = std::max(max_qubit, g.target);
        for (int c : g.controls) {
            max_qubit = std::max(max_qubit, c);
        }
        circuit.gates.push_back(std::move(g));
    }
    if (circuit.width == 0) {
        circuit.width = max_qubit + 1;
    }
    circuit.validate();
    return circuit;
}

} // namespace wz
