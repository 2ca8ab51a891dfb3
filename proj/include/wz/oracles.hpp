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
 * Reference solutions and error metrics.
 *
 * The dense oracle exponentiates the same momentum matrices the simulator
 * uses, so it measures splitting error only, not discretization error.
 */

#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include <Eigen/Dense>

#include "wz/evolution.hpp"
#include "wz/grid.hpp"

namespace wz {

/// Particle in [0, L] started from the flat state 1/sqrt(L).
struct BoxSeriesSpec {
    double length = 1.0;
    double mass = 1.0;
    std::size_t terms = 1000; ///< K; only odd quantum numbers 2k-1 appear
    double time = 0.0;

    void validate() const;
};

/// psi_exact(x, t) = (2^{3/2}/pi) sum_{k<=K} psi_{2k-1}(x) exp(-i E_{2k-1} t) / (2k-1).
Complex box_exact_amplitude(double x, const BoxSeriesSpec &spec);

/// |psi_exact(x, t)|^2; x must lie strictly inside (0, L).
double box_exact_density(double x, const BoxSeriesSpec &spec);

/// Exact density at every cell center of a 1D grid whose length matches spec.length.
std::vector<double> box_exact_density_at_cells(const GridSpec &grid, const BoxSeriesSpec &spec);

/// 2^{-n/2} * sqrt(sum_i (sim_i - exact_i)^2) with 2^n = size of the inputs.
double rmse(std::span<const double> simulated, std::span<const double> exact);

/// 2^{-n/2} * rmse.
double e_yb(double rmse_value, int qubits_per_axis);

/// Least-squares slope of log y against log x.
double loglog_slope(std::span<const double> x, std::span<const double> y);

/// Result of comparing a simulated 1D box state against the series solution.
/// Both densities are probability densities (per-cell probability / delta
/// for the simulation), which is the convention the RMSE is reported in.
struct BoxComparison {
    std::vector<double> simulated_density;
    std::vector<double> exact_density;
    double rmse = 0.0;
    double e_yb = 0.0;
};

BoxComparison compare_box(const GridSpec &grid, std::span<const double> per_cell_probability,
                          const BoxSeriesSpec &spec);

inline constexpr std::size_t kMaxOracleDimension = std::size_t{1} << 12;

/// H = sum over moving registers of P^2/2M plus the selected diagonal potentials.
Eigen::MatrixXcd dense_hamiltonian(const GridSpec &grid, std::span<const ParticleSpec> particles,
                                   const TermSet &terms, double wall_height = 1e6);

/// exp(-i H T) through the eigendecomposition of the Hermitian H.
class DenseEvolutionOracle {
  public:
    DenseEvolutionOracle(const GridSpec &grid, std::span<const ParticleSpec> particles, const TermSet &terms,
                         double wall_height = 1e6);

    [[nodiscard]] const Eigen::MatrixXcd &hamiltonian() const { return hamiltonian_; }
    [[nodiscard]] const Eigen::VectorXd &eigenvalues() const { return eigenvalues_; }

    [[nodiscard]] Eigen::MatrixXcd propagator(double time) const;
    [[nodiscard]] StateVector apply(const StateVector &state, double time) const;

  private:
    Eigen::MatrixXcd hamiltonian_;
    Eigen::VectorXd eigenvalues_;
    Eigen::MatrixXcd eigenvectors_;
};

/// Euclidean distance between two amplitude vectors of equal length.
double l2_distance(std::span<const Complex> a, std::span<const Complex> b);

} // namespace wz
