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
 * Reproducible experiment runs driven by a JSON run configuration.
 *
 * Every run writes plain CSV/JSON/text outputs into the output directory and
 * returns the in-memory results so callers (tests, the acceptance suite)
 * can inspect them without re-parsing files.
 */

#pragma once

#include <array>
#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <string>
#include <vector>

#include "json.hpp"

#include "wz/evolution.hpp"
#include "wz/grid.hpp"
#include "wz/oracles.hpp"
#include "wz/synthesis.hpp"

namespace wz {

enum class Experiment { box_evolve, convergence_spatial, convergence_temporal, molecule2d, sample, synth_report };

std::string to_string(Experiment experiment);
Experiment experiment_from_string(const std::string &name);

struct ParticleConfig {
    ParticleSpec spec;
    /// Inclusive [lo, hi] cell range per axis; the initial state of a quantum
    /// particle is the uniform superposition over this sub-box.
    std::vector<std::array<std::size_t, 2>> initial_box;
};

/// Mirror i -> (2c - i) mod 2^n along one axis.
struct ReflectionCheck {
    int axis = 0;
    std::size_t mirror_cell = 0;
};

struct RunConfig {
    Experiment experiment = Experiment::box_evolve;

    double box_length = 1.0;
    int qubits_per_axis = 10;
    int dimensions = 1;
    std::vector<ParticleConfig> particles;

    double total_time = 1e-3;
    std::size_t steps = 1000;
    KineticMethod kinetic_method = KineticMethod::spectral;
    Splitting splitting = Splitting::first_order;
    TermSet terms;
    double wall_height = 1e6;

    bool interior_only = true;
    std::size_t series_terms = 1000;
    std::size_t snapshot_count = 10;
    std::vector<double> evaluation_times; ///< box-evolve: independent runs ending at these times

    int sweep_n_min = 1;
    int sweep_n_max = 10;
    std::vector<std::size_t> sweep_steps; ///< temporal convergence

    std::vector<ReflectionCheck> reflections;

    std::uint64_t shots = 100000;
    std::string sample_state = "box_evolved"; ///< uniform | point | box_evolved
    std::size_t sample_cell = 0;
    std::uint64_t seed = 1;

    std::array<double, 4> circuit_angles{0.1, 0.2, 0.3, 0.4};

    std::string output_dir = "out";

    [[nodiscard]] GridSpec grid() const { return build_grid(box_length, qubits_per_axis, dimensions); }
    [[nodiscard]] EvolutionPlan plan() const;
    [[nodiscard]] std::vector<ParticleSpec> particle_specs() const;
};

/// Defaults for one experiment (L = 1, n = 10, T = 1e-3, N_t = 1000
/// for box runs; n = 4, d = 2, T = 1 for molecules).
RunConfig default_config(Experiment experiment);

/// Accepts a run configuration or a manifest (whose "config" member is used).
/// Unknown keys are rejected. Throws ValidationError.
RunConfig parse_config(const nlohmann::json &doc);
nlohmann::json to_json(const RunConfig &config);

void validate_config(const RunConfig &config);

struct BoxSnapshotResult {
    double time = 0.0;
    std::size_t steps = 0;
    std::vector<double> per_cell_probability;
    BoxComparison comparison;
};

struct BoxEvolveResult {
    std::vector<BoxSnapshotResult> snapshots;
    double max_norm_drift = 0.0;
};

struct ConvergenceRow {
    std::size_t parameter = 0; ///< n (spatial) or N_t (temporal)
    double spacing = 0.0;      ///< delta or eps
    double rmse = 0.0;
    double e_yb = 0.0;
};

struct ConvergenceResult {
    bool spatial = true;
    std::vector<ConvergenceRow> rows;
    double rmse_slope = 0.0;
    double e_yb_slope = 0.0;
    std::vector<double> envelope_maxima; ///< temporal: max RMSE per decade of eps, largest eps first
    bool envelope_monotone = false;
};

struct MoleculeResult {
    std::vector<std::vector<double>> marginals; ///< one per quantum particle
    /// asymmetry[p][r]: relative L1 distance between marginal p and its mirror image under reflection r
    std::vector<std::vector<double>> asymmetry;
    double max_norm_drift = 0.0;
};

struct SampleResult {
    std::vector<std::uint64_t> histogram;
    std::vector<double> exact;
    double tv_distance = 0.0;
};

struct SynthReport {
    Circuit compressed;
    Circuit naive;
    double compressed_error = 0.0; ///< max |U - target| entry
    double naive_error = 0.0;
    std::vector<std::array<std::uint64_t, 4>> gate_counts; ///< (N, n, trotter, spectral)
};

/// Initial state for a run: box runs use the flat state (interior cells only
/// when interior_only is set and an interior exists), other runs use each
/// particle's initial_box.
StateVector initial_state(const RunConfig &config);

/// Relative L1 asymmetry sum |rho - rho o R| / sum rho of a d-dimensional grid density.
double reflection_asymmetry(std::span<const double> marginal, int qubits_per_axis, int dimensions,
                            const ReflectionCheck &reflection);

/// Total-variation distance between a histogram and exact probabilities.
double tv_distance(std::span<const std::uint64_t> histogram, std::span<const double> exact);

/// Worker cap from WZ_THREADS (default: hardware concurrency, at least 1).
unsigned worker_threads();

BoxEvolveResult run_box_evolve(const RunConfig &config, const std::filesystem::path &out);
ConvergenceResult run_convergence(const RunConfig &config, const std::filesystem::path &out);
MoleculeResult run_molecule2d(const RunConfig &config, const std::filesystem::path &out);
SampleResult run_sample(const RunConfig &config, const std::filesystem::path &out);
SynthReport run_synth_report(const RunConfig &config, const std::filesystem::path &out);

/// Runs the configured experiment into `out`, then writes manifest.json with
/// the resolved config, artifact version and SHA-256 of every output file.
/// Returns the paths written (manifest last).
std::vector<std::filesystem::path> run_experiment(const RunConfig &config, const std::filesystem::path &out);

std::string sha256_hex(const std::filesystem::path &file);
nlohmann::json write_manifest(const RunConfig &config, const std::filesystem::path &out,
                              const std::vector<std::filesystem::path> &outputs);

inline constexpr const char *kArtifactVersion = "0.1.0";

} // namespace wz
