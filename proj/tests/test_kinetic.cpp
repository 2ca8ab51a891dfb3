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

#include <gtest/gtest.h>

#include <numbers>
#include <random>

#include <Eigen/Eigenvalues>

#include "test_support.hpp"
#include "wz/error.hpp"
#include "wz/kinetic.hpp"

namespace wz {
namespace {

using testing::dense_fourier;
using testing::dense_trotter_product;
using testing::expm_taylor;
using testing::max_abs_diff;
using testing::random_amplitudes;
using testing::to_eigen;

const std::vector<ParticleSpec> kElectron{ParticleSpec::electron()};

StateVector random_state(const GridSpec &grid, std::size_t particles, std::mt19937_64 &rng) {
    const std::vector<ParticleSpec> roster(particles, ParticleSpec::electron());
    const std::size_t size = std::size_t{1} << (grid.qubits_per_axis * grid.dimensions * static_cast<int>(particles));
    return make_state(grid, roster, random_amplitudes(size, rng));
}

TEST(DerivativeMatrix, SmallestSize) {
    const auto m = derivative_matrix(2, 0.5);
    Eigen::Matrix2d expected;
    expected << -2.0, 2.0, -2.0, 2.0;
    EXPECT_LT((m - expected).cwiseAbs().maxCoeff(), 1e-15);
}

TEST(DerivativeMatrix, RowsSumToZero) {
    for (std::size_t cells : {2u, 3u, 8u, 33u}) {
        const auto m = derivative_matrix(cells, 0.1);
        EXPECT_LT(m.rowwise().sum().cwiseAbs().maxCoeff(), 1e-12) << cells;
    }
}

TEST(DerivativeMatrix, ExactOnLinearRamp) {
    const auto m = derivative_matrix(4, 0.25);
    Eigen::Vector4d ramp(0.125, 0.375, 0.625, 0.875);
    const Eigen::Vector4d slope = m * ramp;
    for (int i = 0; i < 4; ++i) {
        EXPECT_NEAR(slope(i), 1.0, 1e-14);
    }
    EXPECT_THROW(derivative_matrix(1, 1.0), ValidationError);
}

TEST(MomentumMatrix, SmallestSize) {
    const auto p = momentum_matrix(2, 0.5);
    EXPECT_EQ(p(0, 0), Complex(0.0));
    EXPECT_EQ(p(0, 1), Complex(0.0, -1.0));
    EXPECT_EQ(p(1, 0), Complex(0.0, 1.0));
    EXPECT_EQ(p(1, 1), Complex(0.0));
}

TEST(MomentumMatrix, HermitianWithSymmetricSpectrum) {
    for (std::size_t cells : {2u, 4u, 7u, 16u}) {
        const auto p = momentum_matrix(cells, 0.3);
        EXPECT_EQ((p - p.adjoint()).cwiseAbs().maxCoeff(), 0.0);
    }
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> solver(momentum_matrix(4, 0.25));
    const auto &ev = solver.eigenvalues();
    for (Eigen::Index i = 0; i < 4; ++i) {
        EXPECT_NEAR(ev(i), -ev(3 - i), 1e-12);
    }
}

TEST(MpBlock, ZeroIsIdentity) {
    EXPECT_LT((mp_block(0.0) - Eigen::Matrix3cd::Identity()).cwiseAbs().maxCoeff(), 1e-15);
}

TEST(MpBlock, QuarterTurn) {
    const Complex i(0.0, 1.0);
    Eigen::Matrix3cd expected;
    expected << 0.0, 0.0, i, 0.0, -1.0, 0.0, i, 0.0, 0.0;
    EXPECT_LT((mp_block(i * std::numbers::pi / 2.0) - expected).cwiseAbs().maxCoeff(), 1e-15);
}

TEST(MpBlock, MatchesSeriesExponentialAndIsUnitary) {
    std::mt19937_64 rng(2024);
    std::uniform_real_distribution<double> u(-20.0, 20.0);
    Eigen::MatrixXcd gen = Eigen::MatrixXcd::Zero(3, 3);
    gen(0, 2) = 1.0;
    gen(2, 0) = 1.0;
    gen(1, 1) = -2.0;
    for (int trial = 0; trial < 100; ++trial) {
        const Complex xi(0.0, u(rng));
        const Eigen::Matrix3cd block = mp_block(xi);
        const Eigen::MatrixXcd reference = expm_taylor(xi * gen);
        EXPECT_LT((Eigen::MatrixXcd(block) - reference).cwiseAbs().maxCoeff(), 1e-12) << xi;
        EXPECT_LT((block.adjoint() * block - Eigen::Matrix3cd::Identity()).cwiseAbs().maxCoeff(), 1e-12);
    }
}

TEST(Qft, PointMassAndSmallCases) {
    const AmplitudeVector e0{1.0, 0.0, 0.0, 0.0, 0.0, 0.0, 0.0, 0.0};
    for (const auto &a : qft(e0)) {
        EXPECT_NEAR(std::abs(a - Complex(1.0 / std::sqrt(8.0))), 0.0, 1e-15);
    }
    const AmplitudeVector two{1.0, 0.0};
    const auto out = qft(two);
    EXPECT_NEAR(std::abs(out[0] - Complex(1.0 / std::sqrt(2.0))), 0.0, 1e-15);
    EXPECT_NEAR(std::abs(out[1] - Complex(1.0 / std::sqrt(2.0))), 0.0, 1e-15);
    EXPECT_THROW(FourierTransform(6), ValidationError);
}

TEST(Qft, MatchesDenseMatrixAndInverts) {
    std::mt19937_64 rng(5);
    for (std::size_t cells : {1u, 2u, 4u, 32u, 256u}) {
        const auto v = random_amplitudes(cells, rng);
        const auto forward = qft(v);
        const Eigen::VectorXcd expected = dense_fourier(cells) * to_eigen(v);
        EXPECT_LT(max_abs_diff(forward, expected), 1e-12) << cells;
        const auto back = iqft(forward);
        EXPECT_LT(max_abs_diff(back, to_eigen(v)), 1e-12) << cells;
    }
}

TEST(MomentumEigenvalue, Examples) {
    EXPECT_EQ(momentum_eigenvalue(0, 16, 0.1), 0.0);
    EXPECT_NEAR(momentum_eigenvalue(1, 4, 0.125), -8.0, 1e-14);
    for (std::size_t k = 1; k < 16; ++k) {
        EXPECT_NEAR(momentum_eigenvalue(k, 16, 0.1), -momentum_eigenvalue(16 - k, 16, 0.1), 1e-12);
    }
}

TEST(KineticTrotter, ZeroStepIsIdentity) {
    std::mt19937_64 rng(1);
    const auto grid = build_grid(1.0, 3, 1);
    auto state = random_state(grid, 1, rng);
    const auto before = state.data();
    apply_kinetic_trotter(state, 0, 0, 1.0, 0.0);
    EXPECT_EQ(state.data(), before);
}

TEST(KineticTrotter, RegisterMatchesDenseFactorProduct) {
    std::mt19937_64 rng(3);
    const double mass = 1.7;
    const double eps = 3e-4;
    for (int n = 1; n <= 4; ++n) {
        const auto grid = build_grid(1.0, n, 1);
        const std::size_t cells = grid.cells_per_axis();
        const Complex xi(0.0, eps / (8.0 * mass * grid.cell_width * grid.cell_width));
        const Eigen::MatrixXcd ascending = dense_trotter_product(cells, xi);

        auto state = random_state(grid, 1, rng);
        const Eigen::VectorXcd expected = ascending * to_eigen(state.amplitudes());
        apply_kinetic_trotter(state, 0, 0, mass, eps, BlockSweep::ascending);
        EXPECT_LT(max_abs_diff(state.amplitudes(), expected), 1e-12) << n;

        // Descending applies the same factors in reverse order; each factor is
        // symmetric, so the product is the transpose.
        auto state2 = random_state(grid, 1, rng);
        const Eigen::VectorXcd expected2 = ascending.transpose() * to_eigen(state2.amplitudes());
        apply_kinetic_trotter(state2, 0, 0, mass, eps, BlockSweep::descending);
        EXPECT_LT(max_abs_diff(state2.amplitudes(), expected2), 1e-12) << n;
    }
}

TEST(KineticTrotter, PointMassStaysOnItsSublattice) {
    const auto grid = build_grid(1.0, 3, 1);
    auto state = make_state(grid, kElectron, AmplitudeVector{0, 0, 0, 1.0, 0, 0, 0, 0});
    const Complex xi(0.0, 1e-3 / (8.0 * grid.cell_width * grid.cell_width));
    const Eigen::VectorXcd expected = dense_trotter_product(8, xi) * to_eigen(state.amplitudes());
    apply_kinetic_trotter(state, 0, 0, 1.0, 1e-3);
    EXPECT_LT(max_abs_diff(state.amplitudes(), expected), 1e-12);
    for (std::size_t c = 0; c < 8; c += 2) {
        EXPECT_EQ(state.amplitudes()[c], Complex(0.0)) << c;
    }
    EXPECT_GT(std::abs(state.amplitudes()[5]), 0.0);
    EXPECT_GT(std::abs(state.amplitudes()[1]), 0.0);
}

TEST(KineticTrotter, ActsOnOneRegisterOfAJointState) {
    std::mt19937_64 rng(9);
    const auto grid = build_grid(1.0, 2, 2);
    const double mass = 2.0;
    const double eps = 1e-3;
    const Complex xi(0.0, eps / (8.0 * mass * grid.cell_width * grid.cell_width));
    const Eigen::MatrixXcd u = dense_trotter_product(4, xi);
    const Eigen::MatrixXcd id = Eigen::MatrixXcd::Identity(4, 4);
    // Two particles in 2D: registers (p0 x, p0 y, p1 x, p1 y), register 0 most significant.
    for (int p = 0; p < 2; ++p) {
        for (int a = 0; a < 2; ++a) {
            const int reg = p * 2 + a;
            Eigen::MatrixXcd full = Eigen::MatrixXcd::Ones(1, 1);
            for (int r = 0; r < 4; ++r) {
                const Eigen::MatrixXcd &f = r == reg ? u : id;
                Eigen::MatrixXcd next(full.rows() * 4, full.cols() * 4);
                for (Eigen::Index i = 0; i < full.rows(); ++i) {
                    for (Eigen::Index j = 0; j < full.cols(); ++j) {
                        next.block(i * 4, j * 4, 4, 4) = full(i, j) * f;
                    }
                }
                full = next;
            }
            auto state = random_state(grid, 2, rng);
            const Eigen::VectorXcd expected = full * to_eigen(state.amplitudes());
            apply_kinetic_trotter(state, p, a, mass, eps);
            EXPECT_LT(max_abs_diff(state.amplitudes(), expected), 1e-12) << reg;
        }
    }
}

TEST(KineticTrotter, RejectsBadIndices) {
    std::mt19937_64 rng(1);
    auto state = random_state(build_grid(1.0, 2, 1), 1, rng);
    EXPECT_THROW(apply_kinetic_trotter(state, 1, 0, 1.0, 1e-3), ValidationError);
    EXPECT_THROW(apply_kinetic_trotter(state, 0, 1, 1.0, 1e-3), ValidationError);
    EXPECT_THROW(apply_kinetic_trotter(state, 0, 0, 0.0, 1e-3), ValidationError);
}

TEST(KineticSpectral, ZeroStepIsIdentity) {
    std::mt19937_64 rng(1);
    const auto grid = build_grid(1.0, 4, 1);
    auto state = random_state(grid, 1, rng);
    const auto before = state.data();
    apply_kinetic_spectral(state, 0, 0, 1.0, 0.0);
    EXPECT_LT(max_abs_diff(state.amplitudes(), to_eigen(before)), 1e-14);
}

TEST(KineticSpectral, FourierModeOnlyAcquiresPhase) {
    const auto grid = build_grid(1.0, 5, 1);
    const std::size_t cells = grid.cells_per_axis();
    for (std::size_t k : {0u, 1u, 5u, 16u, 31u}) {
        AmplitudeVector mode(cells);
        for (std::size_t j = 0; j < cells; ++j) {
            mode[j] = std::polar(1.0, 2.0 * std::numbers::pi * static_cast<double>(j * k) / static_cast<double>(cells));
        }
        auto state = make_state(grid, kElectron, mode);
        const auto before = state.data();
        apply_kinetic_spectral(state, 0, 0, 1.0, 1e-3);
        const Complex ratio = state.amplitudes()[0] / before[0];
        EXPECT_NEAR(std::abs(ratio), 1.0, 1e-12);
        for (std::size_t j = 0; j < cells; ++j) {
            EXPECT_NEAR(std::abs(state.amplitudes()[j] - ratio * before[j]), 0.0, 1e-12) << k;
        }
    }
}

TEST(KineticSpectral, MatchesDenseExponentialOfFourierHamiltonian) {
    const auto grid = build_grid(1.0, 8, 1);
    const std::size_t cells = grid.cells_per_axis();
    const double mass = 1.0;
    const double eps = 1e-6;
    const double total = 1000 * eps;
    AmplitudeVector packet(cells);
    for (std::size_t j = 0; j < cells; ++j) {
        const double x = (static_cast<double>(j) + 0.5) * grid.cell_width - 0.5;
        packet[j] = std::exp(-x * x / (2.0 * 0.05 * 0.05));
    }
    auto state = make_state(grid, kElectron, packet);
    const Eigen::VectorXcd initial = to_eigen(state.amplitudes());

    const Eigen::MatrixXcd f = dense_fourier(cells);
    Eigen::VectorXcd diag(static_cast<Eigen::Index>(cells));
    for (std::size_t k = 0; k < cells; ++k) {
        const double p = -std::sin(2.0 * std::numbers::pi * static_cast<double>(k) / static_cast<double>(cells)) /
                         grid.cell_width;
        diag(static_cast<Eigen::Index>(k)) = std::polar(1.0, -total * p * p / (2.0 * mass));
    }
    const Eigen::VectorXcd expected = f.adjoint() * (diag.asDiagonal() * (f * initial));

    for (int s = 0; s < 1000; ++s) {
        apply_kinetic_spectral(state, 0, 0, mass, eps);
    }
    EXPECT_NEAR(state.norm(), 1.0, 1e-10);
    EXPECT_LT(max_abs_diff(state.amplitudes(), expected), 1e-10);

    const auto rho = density(state);
    for (std::size_t j = 0; j < cells / 2; ++j) {
        EXPECT_NEAR(rho[j], rho[cells - 1 - j], 1e-12);
    }
    EXPECT_LT(rho[cells / 2], std::norm(initial(static_cast<Eigen::Index>(cells / 2))));
}

TEST(FourierDiagnostic, TwoCellsMapsSigmaYToMinusItself) {
    // Without wrap-around, P at D = 2 is sigma_y / (2 delta) and the two-point
    // transform is a Hadamard, which flips its sign instead of diagonalizing it.
    const auto diag = fourier_conjugation_diagnostic(2, 0.5);
    EXPECT_NEAR(diag.max_off_diagonal, 1.0, 1e-15);
    EXPECT_NEAR(diag.diagonal[0], 0.0, 1e-15);
    EXPECT_NEAR(diag.diagonal[1], 0.0, 1e-15);
}

TEST(FourierDiagnostic, AgreesWithDenseConjugation) {
    for (std::size_t cells : {4u, 8u, 16u}) {
        const double delta = 0.3;
        const Eigen::MatrixXcd f = dense_fourier(cells);
        const Eigen::MatrixXcd conj = f * momentum_matrix(cells, delta) * f.adjoint();
        double off = 0.0;
        for (Eigen::Index i = 0; i < conj.rows(); ++i) {
            for (Eigen::Index j = 0; j < conj.cols(); ++j) {
                if (i != j) {
                    off = std::max(off, std::abs(conj(i, j)));
                }
            }
        }
        const auto d = fourier_conjugation_diagnostic(cells, delta);
        EXPECT_NEAR(d.max_off_diagonal, off, 1e-12);
        for (std::size_t k = 0; k < cells; ++k) {
            EXPECT_NEAR(d.diagonal[k], conj(static_cast<Eigen::Index>(k), static_cast<Eigen::Index>(k)).real(), 1e-12);
        }
    }
}

TEST(FourierDiagnostic, OffDiagonalHalvesWithDoubling) {
    const double r = fourier_conjugation_diagnostic(64, 1.0).max_off_diagonal /
                     fourier_conjugation_diagnostic(32, 1.0).max_off_diagonal;
    EXPECT_NEAR(r, 0.5, 0.125);
    for (std::size_t cells : {2u, 8u, 64u, 256u}) {
        EXPECT_NEAR(fourier_conjugation_diagnostic(cells, 0.2).diagonal[0], 0.0, 1e-12);
    }
    EXPECT_THROW(fourier_conjugation_diagnostic(kMaxDiagnosticCells * 2, 1.0), ResourceError);
}

} // namespace
} // namespace wz
