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

#include "wz/kinetic.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <string>

#include "wz/error.hpp"

namespace wz {

namespace {

void require_stencil_size(std::size_t cells) {
    if (cells < 2) {
        throw ValidationError("operator dimension must be at least 2, got " + std::to_string(cells));
    }
}

bool is_power_of_two(std::size_t v) { return v != 0 && (v & (v - 1)) == 0; }

int register_of(const StateVector &state, int particle, int axis) {
    const auto &codec = state.codec();
    if (particle < 0 || particle >= codec.quantum_particles()) {
        throw ValidationError("particle index " + std::to_string(particle) + " out of range");
    }
    if (axis < 0 || axis >= codec.dimensions()) {
        throw ValidationError("axis index " + std::to_string(axis) + " out of range");
    }
    return particle * codec.dimensions() + axis;
}

void require_register(const StateVector &state, int reg, std::size_t plan_cells) {
    if (reg < 0 || reg >= state.codec().registers()) {
        throw ValidationError("register index " + std::to_string(reg) + " out of range");
    }
    if (plan_cells != state.codec().cells_per_axis()) {
        throw ValidationError("kinetic plan size does not match the state's grid");
    }
}

} // namespace

Eigen::MatrixXd derivative_matrix(std::size_t cells, double cell_width) {
    require_stencil_size(cells);
    const auto n = static_cast<Eigen::Index>(cells);
    Eigen::MatrixXd m = Eigen::MatrixXd::Zero(n, n);
    m(0, 0) = -2.0;
    m(0, 1) = 2.0;
    for (Eigen::Index k = 1; k + 1 < n; ++k) {
        m(k, k - 1) = -1.0;
        m(k, k + 1) = 1.0;
    }
    m(n - 1, n - 2) = -2.0;
    m(n - 1, n - 1) = 2.0;
    return m / (2.0 * cell_width);
}

Eigen::MatrixXcd momentum_matrix(std::size_t cells, double cell_width) {
    require_stencil_size(cells);
    const auto n = static_cast<Eigen::Index>(cells);
    const Complex alpha(0.0, -1.0 / (2.0 * cell_width));
    Eigen::MatrixXcd p = Eigen::MatrixXcd::Zero(n, n);
    for (Eigen::Index k = 0; k + 1 < n; ++k) {
        p(k, k + 1) = alpha;
        p(k + 1, k) = -alpha;
    }
    return p;
}

Eigen::Matrix3cd mp_block(Complex xi) {
    const Complex c = std::cosh(xi);
    const Complex s = std::sinh(xi);
    Eigen::Matrix3cd m;
    m << c, 0.0, s,
         0.0, std::exp(-2.0 * xi), 0.0,
         s, 0.0, c;
    return m;
}

FourierTransform::FourierTransform(std::size_t length) : length_(length) {
    if (!is_power_of_two(length)) {
        throw ValidationError("QFT length must be a power of two, got " + std::to_string(length));
    }
    int bits = 0;
    while ((std::size_t{1} << bits) < length) {
        ++bits;
    }
    bit_reverse_.resize(length);
    for (std::size_t i = 0; i < length; ++i) {
        std::size_t r = 0;
        for (int b = 0; b < bits; ++b) {
            r |= ((i >> b) & 1u) << (bits - 1 - b);
        }
        bit_reverse_[i] = r;
    }
    twiddles_.resize(std::max<std::size_t>(length / 2, 1));
    for (std::size_t k = 0; k < twiddles_.size(); ++k) {
        twiddles_[k] = std::polar(1.0, 2.0 * std::numbers::pi * static_cast<double>(k) / static_cast<double>(length));
    }
}

void FourierTransform::forward(std::span<Complex> values) const { transform(values, false); }
void FourierTransform::inverse(std::span<Complex> values) const { transform(values, true); }

void FourierTransform::transform(std::span<Complex> values, bool conjugate) const {
    if (values.size() != length_) {
        throw ValidationError("QFT input length mismatch");
    }
    for (std::size_t i = 0; i < length_; ++i) {
        if (i < bit_reverse_[i]) {
            std::swap(values[i], values[bit_reverse_[i]]);
        }
    }
    for (std::size_t len = 2; len <= length_; len <<= 1) {
        const std::size_t half = len / 2;
        const std::size_t step = length_ / len;
        for (std::size_t start = 0; start < length_; start += len) {
            for (std::size_t j = 0; j < half; ++j) {
                Complex w = twiddles_[j * step];
                if (conjugate) {
                    w = std::conj(w);
                }
                const Complex u = values[start + j];
                const Complex t = w * values[start + j + half];
                values[start + j] = u + t;
                values[start + j + half] = u - t;
            }
        }
    }
    const double scale = 1.0 / std::sqrt(static_cast<double>(length_));
    for (auto &v : values) {
        v *= scale;
    }
}

AmplitudeVector qft(std::span<const Complex> values) {
    AmplitudeVector out(values.begin(), values.end());
    FourierTransform(out.size()).forward(out);
    return out;
}

AmplitudeVector iqft(std::span<const Complex> values) {
    AmplitudeVector out(values.begin(), values.end());
    FourierTransform(out.size()).inverse(out);
    return out;
}

double momentum_eigenvalue(std::size_t k, std::size_t cells, double cell_width) {
    if (k >= cells) {
        throw ValidationError("momentum index " + std::to_string(k) + " out of range");
    }
    return -std::sin(2.0 * std::numbers::pi * static_cast<double>(k) / static_cast<double>(cells)) / cell_width;
}

KineticTrotterPlan KineticTrotterPlan::make(std::size_t cells, double cell_width, double mass, double time_step) {
    require_stencil_size(cells);
    if (!(mass > 0.0)) {
        throw ValidationError("mass must be positive");
    }
    const Complex xi(0.0, time_step / (8.0 * mass * cell_width * cell_width));
    return KineticTrotterPlan{cells, xi, mp_block(xi), std::exp(-xi)};
}

SpectralKineticPlan SpectralKineticPlan::make(std::size_t cells, double cell_width, double mass, double time_step) {
    if (!(mass > 0.0)) {
        throw ValidationError("mass must be positive");
    }
    FourierTransform transform(cells);
    std::vector<Complex> phases(cells);
    for (std::size_t k = 0; k < cells; ++k) {
        const double p = momentum_eigenvalue(k, cells, cell_width);
        phases[k] = std::polar(1.0, -time_step * p * p / (2.0 * mass));
    }
    return SpectralKineticPlan{std::move(phases), std::move(transform)};
}

void apply_register(StateVector &state, int reg, const KineticTrotterPlan &plan, BlockSweep sweep) {
    require_register(state, reg, plan.cells);
    const std::size_t cells = plan.cells;
    const Complex b00 = plan.block(0, 0), b02 = plan.block(0, 2), b11 = plan.block(1, 1),
                  b20 = plan.block(2, 0), b22 = plan.block(2, 2);
    const Complex ep = plan.endpoint_phase;
    auto amps = state.amplitudes();

    auto apply_block = [&](std::size_t base, std::size_t stride, std::size_t i) {
        Complex &lo = amps[base + (i - 1) * stride];
        Complex &mid = amps[base + i * stride];
        Complex &hi = amps[base + (i + 1) * stride];
        const Complex a = lo;
        const Complex b = hi;
        lo = b00 * a + b02 * b;
        hi = b20 * a + b22 * b;
        mid *= b11;
    };

    for_each_register_line(state.codec(), reg, [&](std::size_t base, std::size_t stride) {
        if (sweep == BlockSweep::ascending) {
            amps[base] *= ep;
            for (std::size_t i = 1; i + 1 < cells; ++i) {
                apply_block(base, stride, i);
            }
            amps[base + (cells - 1) * stride] *= ep;
        } else {
            amps[base + (cells - 1) * stride] *= ep;
            for (std::size_t i = cells - 2; i >= 1; --i) {
                apply_block(base, stride, i);
            }
            amps[base] *= ep;
        }
    });
}

void apply_register(StateVector &state, int reg, const SpectralKineticPlan &plan) {
    require_register(state, reg, plan.phases.size());
    const std::size_t cells = plan.phases.size();
    auto amps = state.amplitudes();
    std::vector<Complex> line(cells);

    for_each_register_line(state.codec(), reg, [&](std::size_t base, std::size_t stride) {
        for (std::size_t c = 0; c < cells; ++c) {
            line[c] = amps[base + c * stride];
        }
        plan.transform.forward(line);
        for (std::size_t k = 0; k < cells; ++k) {
            line[k] *= plan.phases[k];
        }
        plan.transform.inverse(line);
        for (std::size_t c = 0; c < cells; ++c) {
            amps[base + c * stride] = line[c];
        }
    });
}

void apply_kinetic_trotter(StateVector &state, int particle, int axis, double mass, double time_step,
                           BlockSweep sweep) {
    const int reg = register_of(state, particle, axis);
    const auto &grid = state.grid();
    apply_register(state, reg, KineticTrotterPlan::make(grid.cells_per_axis(), grid.cell_width, mass, time_step),
                   sweep);
}

void apply_kinetic_spectral(StateVector &state, int particle, int axis, double mass, double time_step) {
    const int reg = register_of(state, particle, axis);
    const auto &grid = state.grid();
    apply_register(state, reg, SpectralKineticPlan::make(grid.cells_per_axis(), grid.cell_width, mass, time_step));
}

FourierDiagnostic fourier_conjugation_diagnostic(std::size_t cells, double cell_width) {
    require_stencil_size(cells);
    if (cells > kMaxDiagnosticCells) {
        throw ResourceError("dense Fourier diagnostic limited to D <= " + std::to_string(kMaxDiagnosticCells));
    }
    const FourierTransform transform(cells);
    const Complex alpha(0.0, -1.0 / (2.0 * cell_width));
    const double inv_sqrt = 1.0 / std::sqrt(static_cast<double>(cells));

    FourierDiagnostic out;
    out.diagonal.resize(cells);
    std::vector<Complex> col(cells);
    std::vector<Complex> pcol(cells);
    // Column k of F P F^dagger = F (P (F^dagger e_k)); F^dagger e_k = conj(F e_k).
    for (std::size_t k = 0; k < cells; ++k) {
        for (std::size_t j = 0; j < cells; ++j) {
            const auto phase = static_cast<double>((j * k) % cells);
            col[j] = std::polar(inv_sqrt, -2.0 * std::numbers::pi * phase / static_cast<double>(cells));
        }
        for (std::size_t j = 0; j < cells; ++j) {
            Complex acc = 0.0;
            if (j + 1 < cells) {
                acc += alpha * col[j + 1];
            }
            if (j > 0) {
                acc -= alpha * col[j - 1];
            }
            pcol[j] = acc;
        }
        transform.forward(pcol);
        for (std::size_t j = 0; j < cells; ++j) {
            if (j == k) {
                out.diagonal[k] = pcol[j].real();
                out.max_diagonal_imag = std::max(out.max_diagonal_imag, std::abs(pcol[j].imag()));
            } else {
                out.max_off_diagonal = std::max(out.max_off_diagonal, std::abs(pcol[j]));
            }
        }
    }
    return out;
}

} // namespace wz
