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

#include "wz/oracles.hpp"

#include <cmath>
#include <numbers>
#include <string>

#include "wz/error.hpp"
#include "wz/kinetic.hpp"
#include "wz/potential.hpp"

namespace wz {

void BoxSeriesSpec::validate() const {
    if (!(length > 0.0) || !(mass > 0.0)) {
        throw ValidationError("box series needs positive length and mass");
    }
    if (terms < 1) {
        throw ValidationError("box series needs at least one term");
    }
    if (!std::isfinite(time)) {
        throw ValidationError("box series time must be finite");
    }
}

Complex box_exact_amplitude(double x, const BoxSeriesSpec &spec) {
    spec.validate();
    if (!(x > 0.0 && x < spec.length)) {
        throw ValidationError("box series position must lie strictly inside (0, L)");
    }
    const double pi = std::numbers::pi;
    const double l = spec.length;
    const double energy_unit = pi * pi / (2.0 * spec.mass * l * l);
    Complex sum = 0.0;
    for (std::size_t k = 1; k <= spec.terms; ++k) {
        const auto a = static_cast<double>(2 * k - 1);
        const double mode = std::sin(a * pi * x / l);
        sum += (mode / a) * std::polar(1.0, -a * a * energy_unit * spec.time);
    }
    // (2^{3/2}/pi) * sqrt(2/L) = 4 / (pi sqrt(L))
    return sum * (4.0 / (pi * std::sqrt(l)));
}

double box_exact_density(double x, const BoxSeriesSpec &spec) { return std::norm(box_exact_amplitude(x, spec)); }

std::vector<double> box_exact_density_at_cells(const GridSpec &grid, const BoxSeriesSpec &spec) {
    if (grid.dimensions != 1) {
        throw ValidationError("box comparison is one-dimensional");
    }
    if (std::abs(grid.length - spec.length) > 1e-12 * spec.length) {
        throw ValidationError("grid length and series box length differ");
    }
    std::vector<double> out(grid.cells_per_axis());
    for (std::size_t i = 0; i < out.size(); ++i) {
        out[i] = box_exact_density(grid.cell_width * (static_cast<double>(i) + 0.5), spec);
    }
    return out;
}

double rmse(std::span<const double> simulated, std::span<const double> exact) {
    if (simulated.size() != exact.size()) {
        throw ValidationError("rmse inputs differ in length");
    }
    if (simulated.empty() || (simulated.size() & (simulated.size() - 1)) != 0) {
        throw ValidationError("rmse inputs must have length 2^n");
    }
    double sum = 0.0;
    for (std::size_t i = 0; i < simulated.size(); ++i) {
        const double diff = simulated[i] - exact[i];
        sum += diff * diff;
    }
    return std::sqrt(sum / static_cast<double>(simulated.size()));
}

double e_yb(double rmse_value, int qubits_per_axis) {
    if (!(rmse_value >= 0.0)) {
        throw ValidationError("rmse must be non-negative");
    }
    return rmse_value * std::pow(2.0, -0.5 * qubits_per_axis);
}

double loglog_slope(std::span<const double> x, std::span<const double> y) {
    if (x.size() != y.size() || x.size() < 2) {
        throw ValidationError("log-log fit needs at least two (x, y) pairs");
    }
    const auto count = static_cast<double>(x.size());
    double mx = 0.0;
    double my = 0.0;
    for (std::size_t i = 0; i < x.size(); ++i) {
        if (!(x[i] > 0.0) || !(y[i] > 0.0)) {
            throw ValidationError("log-log fit needs positive coordinates");
        }
        mx += std::log(x[i]);
        my += std::log(y[i]);
    }
    mx /= count;
    my /= count;
    double sxy = 0.0;
    double sxx = 0.0;
    for (std::size_t i = 0; i < x.size(); ++i) {
        const double dx = std::log(x[i]) - mx;
        sxy += dx * (std::log(y[i]) - my);
        sxx += dx * dx;
    }
    if (sxx == 0.0) {
        throw ValidationError("log-log fit needs at least two distinct x values");
    }
    return sxy / sxx;
}

BoxComparison compare_box(const GridSpec &grid, std::span<const double> per_cell_probability,
                          const BoxSeriesSpec &spec) {
    BoxComparison out;
    out.exact_density = box_exact_density_at_cells(grid, spec);
    if (per_cell_probability.size() != out.exact_density.size()) {
        throw ValidationError("simulated density does not match the grid");
    }
    out.simulated_density.resize(per_cell_probability.size());
    for (std::size_t i = 0; i < per_cell_probability.size(); ++i) {
        out.simulated_density[i] = per_cell_probability[i] / grid.cell_width;
    }
    out.rmse = rmse(out.simulated_density, out.exact_density);
    out.e_yb = e_yb(out.rmse, grid.qubits_per_axis);
    return out;
}

Eigen::MatrixXcd dense_hamiltonian(const GridSpec &grid, std::span<const ParticleSpec> particles,
                                   const TermSet &terms, double wall_height) {
    int nq = 0;
    for (const auto &p : particles) {
        validate_particle(grid, p);
        nq += p.is_quantum() ? 1 : 0;
    }
    if (nq == 0) {
        throw ValidationError("dense Hamiltonian needs a quantum particle");
    }
    check_joint_size(grid, nq);
    const IndexCodec codec(grid.qubits_per_axis, grid.dimensions, nq);
    if (codec.size() > kMaxOracleDimension) {
        throw ResourceError("dense oracle limited to joint dimension " + std::to_string(kMaxOracleDimension));
    }
    const auto dim = static_cast<Eigen::Index>(codec.size());
    Eigen::MatrixXcd h = Eigen::MatrixXcd::Zero(dim, dim);

    const std::size_t cells = grid.cells_per_axis();
    const Eigen::MatrixXcd p = momentum_matrix(cells, grid.cell_width);
    const Eigen::MatrixXcd p2 = p * p;
    int slot = 0;
    for (const auto &part : particles) {
        if (!part.is_quantum()) {
            continue;
        }
        const bool moves = part.is_nucleus() ? terms.kinetic_nuclei : terms.kinetic_electrons;
        if (moves) {
            const Eigen::MatrixXcd k = p2 / (2.0 * part.mass);
            for (int a = 0; a < grid.dimensions; ++a) {
                const int reg = slot * grid.dimensions + a;
                const std::size_t stride = codec.register_stride(reg);
                for (std::size_t col = 0; col < codec.size(); ++col) {
                    const std::size_t c = codec.register_cell(col, reg);
                    const std::size_t base = col - c * stride;
                    for (std::size_t r = 0; r < cells; ++r) {
                        const Complex v = k(static_cast<Eigen::Index>(r), static_cast<Eigen::Index>(c));
                        if (v != Complex(0.0)) {
                            h(static_cast<Eigen::Index>(base + r * stride), static_cast<Eigen::Index>(col)) += v;
                        }
                    }
                }
            }
        }
        ++slot;
    }

    DiagonalOperator pot{std::vector<double>(codec.size(), 0.0), PotentialTerm::composite};
    if (terms.electron_electron) {
        pot += build_coulomb_diagonal(grid, particles, CoulombSelection::ee);
    }
    if (terms.electron_nucleus) {
        pot += build_coulomb_diagonal(grid, particles, CoulombSelection::en);
    }
    if (terms.nucleus_nucleus) {
        pot += build_coulomb_diagonal(grid, particles, CoulombSelection::nn);
    }
    if (terms.wall) {
        pot += wall_potential(grid, wall_height, nq);
    }
    for (Eigen::Index m = 0; m < dim; ++m) {
        h(m, m) += pot.energies[static_cast<std::size_t>(m)];
    }
    return h;
}

DenseEvolutionOracle::DenseEvolutionOracle(const GridSpec &grid, std::span<const ParticleSpec> particles,
                                           const TermSet &terms, double wall_height)
    : hamiltonian_(dense_hamiltonian(grid, particles, terms, wall_height)) {
    const Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> solver(hamiltonian_);
    if (solver.info() != Eigen::Success) {
        throw NumericalError("Hermitian eigensolver failed");
    }
    eigenvalues_ = solver.eigenvalues();
    eigenvectors_ = solver.eigenvectors();
}

Eigen::MatrixXcd DenseEvolutionOracle::propagator(double time) const {
    Eigen::VectorXcd phases(eigenvalues_.size());
    for (Eigen::Index i = 0; i < phases.size(); ++i) {
        phases(i) = std::polar(1.0, -eigenvalues_(i) * time);
    }
    return eigenvectors_ * phases.asDiagonal() * eigenvectors_.adjoint();
}

StateVector DenseEvolutionOracle::apply(const StateVector &state, double time) const {
    const auto dim = static_cast<Eigen::Index>(state.dimension());
    if (dim != eigenvalues_.size()) {
        throw ValidationError("state dimension does not match the oracle");
    }
    const Eigen::Map<const Eigen::VectorXcd> psi(state.amplitudes().data(), dim);
    Eigen::VectorXcd coeffs = eigenvectors_.adjoint() * psi;
    for (Eigen::Index i = 0; i < dim; ++i) {
        coeffs(i) *= std::polar(1.0, -eigenvalues_(i) * time);
    }
    const Eigen::VectorXcd out = eigenvectors_ * coeffs;
    return StateVector(state.grid(), state.particles(), AmplitudeVector(out.data(), out.data() + dim));
}

double l2_distance(std::span<const Complex> a, std::span<const Complex> b) {
    if (a.size() != b.size()) {
        throw ValidationError("l2_distance inputs differ in length");
    }
    double sum = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) {
        sum += std::norm(a[i] - b[i]);
    }
    return std::sqrt(sum);
}

} // namespace wz
