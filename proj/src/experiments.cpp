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

#include "wz/experiments.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <exception>
#include <fstream>
#include <map>
#include <set>
#include <thread>

#include "wz/error.hpp"
#include "wz/potential.hpp"

namespace wz {

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

constexpr double kProtonMass = 1836.15267343;

const std::map<std::string, Experiment> &experiment_names() {
    static const std::map<std::string, Experiment> names{
        {"box-evolve", Experiment::box_evolve},       {"convergence-spatial", Experiment::convergence_spatial},
        {"convergence-temporal", Experiment::convergence_temporal}, {"molecule2d", Experiment::molecule2d},
        {"sample", Experiment::sample},               {"synth-report", Experiment::synth_report},
    };
    return names;
}

std::string fmt17(double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

void write_text(const fs::path &path, const std::string &text, std::vector<fs::path> &files) {
    std::ofstream f(path, std::ios::binary | std::ios::trunc);
    if (!f) {
        throw ValidationError("cannot open output file " + path.string());
    }
    f << text;
    files.push_back(path);
}

void write_json(const fs::path &path, const json &doc, std::vector<fs::path> &files) {
    write_text(path, doc.dump(2) + "\n", files);
}

std::vector<std::string> term_names(const TermSet &t) {
    std::vector<std::string> out;
    if (t.kinetic_electrons) out.emplace_back("t_e");
    if (t.kinetic_nuclei) out.emplace_back("t_n");
    if (t.electron_electron) out.emplace_back("u_ee");
    if (t.electron_nucleus) out.emplace_back("u_en");
    if (t.nucleus_nucleus) out.emplace_back("u_nn");
    if (t.wall) out.emplace_back("wall");
    return out;
}

TermSet parse_terms(const json &list) {
    TermSet t;
    for (const auto &item : list) {
        const auto name = item.get<std::string>();
        if (name == "t_e") {
            t.kinetic_electrons = true;
        } else if (name == "t_n") {
            t.kinetic_nuclei = true;
        } else if (name == "u_ee") {
            t.electron_electron = true;
        } else if (name == "u_en") {
            t.electron_nucleus = true;
        } else if (name == "u_nn") {
            t.nucleus_nucleus = true;
        } else if (name == "wall") {
            t.wall = true;
        } else {
            throw ValidationError("unknown Hamiltonian term '" + name + "'");
        }
    }
    return t;
}

ParticleConfig box_particle() { return ParticleConfig{ParticleSpec{1.0, -1.0, ParticleKind::quantum, {}}, {}}; }

template <class Fn> void parallel_for(std::size_t count, Fn &&fn) {
    const auto threads = static_cast<std::size_t>(std::min<std::size_t>(worker_threads(), count));
    if (threads <= 1) {
        for (std::size_t i = 0; i < count; ++i) {
            fn(i);
        }
        return;
    }
    std::vector<std::exception_ptr> errors(count);
    std::atomic<std::size_t> next{0};
    std::vector<std::thread> pool;
    pool.reserve(threads);
    for (std::size_t t = 0; t < threads; ++t) {
        pool.emplace_back([&] {
            for (std::size_t i = next++; i < count; i = next++) {
                try {
                    fn(i);
                } catch (...) {
                    errors[i] = std::current_exception();
                }
            }
        });
    }
    for (auto &th : pool) {
        th.join();
    }
    for (auto &e : errors) {
        if (e) {
            std::rethrow_exception(e);
        }
    }
}

void require_box_setup(const RunConfig &c) {
    if (c.dimensions != 1) {
        throw ValidationError("box experiments are one-dimensional");
    }
    if (c.particles.size() != 1 || !c.particles.front().spec.is_quantum()) {
        throw ValidationError("box experiments need exactly one quantum particle");
    }
    if (!c.terms.wall) {
        throw ValidationError("box experiments need the wall term");
    }
}

StateVector box_initial_state(const GridSpec &grid, const std::vector<ParticleSpec> &particles, bool interior_only) {
    const std::size_t last = grid.cells_per_axis() - 1;
    // With n = 1 both cells are walls and there is no interior to fill.
    const bool skip_walls = interior_only && grid.cells_per_axis() > 2;
    return encode_state(grid, particles, [&](const Configuration &cfg) {
        const auto c = cfg.cells[0];
        return (skip_walls && (c == 0 || c == last)) ? Complex(0.0) : Complex(1.0);
    });
}

BoxSeriesSpec series_for(const RunConfig &c, double time) {
    return BoxSeriesSpec{c.box_length, c.particles.front().spec.mass, c.series_terms, time};
}

/// Evolves the flat box state for `steps` steps of a run ending at `time`.
BoxSnapshotResult box_run(const RunConfig &c, const GridSpec &grid, double time, std::size_t steps) {
    RunConfig local = c;
    local.total_time = time;
    local.steps = steps;
    local.snapshot_count = 0;
    const auto particles = local.particle_specs();
    auto report = evolve(box_initial_state(grid, particles, c.interior_only), local.plan(), particles);
    BoxSnapshotResult snap;
    snap.time = time;
    snap.steps = steps;
    snap.per_cell_probability = density(report.final_state);
    snap.comparison = compare_box(grid, snap.per_cell_probability, series_for(c, time));
    return snap;
}

std::string box_csv(const GridSpec &grid, const BoxSnapshotResult &snap) {
    std::string out = "cell,center,simulated_probability,exact_probability\n";
    for (std::size_t i = 0; i < snap.per_cell_probability.size(); ++i) {
        out += std::to_string(i) + "," + fmt17(grid.cell_width * (static_cast<double>(i) + 0.5)) + "," +
               fmt17(snap.per_cell_probability[i]) + "," +
               fmt17(snap.comparison.exact_density[i] * grid.cell_width) + "\n";
    }
    return out;
}

BoxEvolveResult box_evolve_impl(const RunConfig &c, const fs::path &out, std::vector<fs::path> &files) {
    require_box_setup(c);
    const auto grid = c.grid();
    BoxEvolveResult result;

    if (!c.evaluation_times.empty()) {
        result.snapshots.resize(c.evaluation_times.size());
        parallel_for(c.evaluation_times.size(), [&](std::size_t i) {
            result.snapshots[i] = box_run(c, grid, c.evaluation_times[i], c.steps);
        });
        // Norm drift per run is checked inside evolve; report the final drift.
        for (const auto &s : result.snapshots) {
            double total = 0.0;
            for (double p : s.per_cell_probability) {
                total += p;
            }
            result.max_norm_drift = std::max(result.max_norm_drift, std::abs(std::sqrt(total) - 1.0));
        }
    } else {
        const auto particles = c.particle_specs();
        const auto report = evolve(box_initial_state(grid, particles, c.interior_only), c.plan(), particles);
        for (double d : report.norm_drift) {
            result.max_norm_drift = std::max(result.max_norm_drift, d);
        }
        for (const auto &s : report.snapshots) {
            BoxSnapshotResult snap;
            snap.time = s.time;
            snap.steps = s.step;
            snap.per_cell_probability = s.density;
            snap.comparison = compare_box(grid, s.density, series_for(c, s.time));
            result.snapshots.push_back(std::move(snap));
        }
    }

    json summary;
    summary["max_norm_drift"] = result.max_norm_drift;
    summary["snapshots"] = json::array();
    for (std::size_t i = 0; i < result.snapshots.size(); ++i) {
        const auto &s = result.snapshots[i];
        const auto name = "box_snapshot_" + std::to_string(i) + ".csv";
        write_text(out / name, box_csv(grid, s), files);
        summary["snapshots"].push_back(
            {{"file", name}, {"time", s.time}, {"steps", s.steps}, {"rmse", s.comparison.rmse},
             {"e_yb", s.comparison.e_yb}});
    }
    write_json(out / "box_summary.json", summary, files);
    return result;
}

ConvergenceResult convergence_impl(const RunConfig &c, const fs::path &out, std::vector<fs::path> &files) {
    require_box_setup(c);
    ConvergenceResult result;
    result.spatial = c.experiment == Experiment::convergence_spatial;

    if (result.spatial) {
        const auto count = static_cast<std::size_t>(c.sweep_n_max - c.sweep_n_min + 1);
        result.rows.resize(count);
        parallel_for(count, [&](std::size_t i) {
            const int n = c.sweep_n_min + static_cast<int>(i);
            const auto grid = build_grid(c.box_length, n, 1);
            const auto snap = box_run(c, grid, c.total_time, c.steps);
            result.rows[i] = {static_cast<std::size_t>(n), grid.cell_width, snap.comparison.rmse, snap.comparison.e_yb};
        });
    } else {
        const auto grid = c.grid();
        result.rows.resize(c.sweep_steps.size());
        parallel_for(c.sweep_steps.size(), [&](std::size_t i) {
            const std::size_t steps = c.sweep_steps[i];
            const auto snap = box_run(c, grid, c.total_time, steps);
            result.rows[i] = {steps, c.total_time / static_cast<double>(steps), snap.comparison.rmse,
                              snap.comparison.e_yb};
        });
    }

    std::vector<double> x;
    std::vector<double> r;
    std::vector<double> e;
    for (const auto &row : result.rows) {
        x.push_back(row.spacing);
        r.push_back(row.rmse);
        e.push_back(row.e_yb);
    }
    if (result.rows.size() >= 2) {
        result.rmse_slope = loglog_slope(x, r);
        result.e_yb_slope = loglog_slope(x, e);
    }

    if (!result.spatial) {
        // Upper envelope: maximum RMSE within each decade of eps, largest eps first.
        std::map<long, double, std::greater<>> decade_max;
        for (const auto &row : result.rows) {
            const auto decade = static_cast<long>(std::floor(std::log10(row.spacing) + 1e-9));
            auto [it, inserted] = decade_max.emplace(decade, row.rmse);
            if (!inserted) {
                it->second = std::max(it->second, row.rmse);
            }
        }
        for (const auto &[decade, value] : decade_max) {
            result.envelope_maxima.push_back(value);
        }
        result.envelope_monotone =
            std::is_sorted(result.envelope_maxima.begin(), result.envelope_maxima.end(), std::greater_equal<>());
    }

    const std::string stem = result.spatial ? "convergence_spatial" : "convergence_temporal";
    std::string csv = result.spatial ? "n,delta,rmse,e_yb\n" : "steps,epsilon,rmse,e_yb\n";
    json rows = json::array();
    for (const auto &row : result.rows) {
        csv += std::to_string(row.parameter) + "," + fmt17(row.spacing) + "," + fmt17(row.rmse) + "," +
               fmt17(row.e_yb) + "\n";
        rows.push_back({{result.spatial ? "n" : "steps", row.parameter},
                        {result.spatial ? "delta" : "epsilon", row.spacing},
                        {"rmse", row.rmse},
                        {"e_yb", row.e_yb}});
    }
    write_text(out / (stem + ".csv"), csv, files);

    json summary{{"axis", result.spatial ? "spatial" : "temporal"},
                 {"rows", rows},
                 {"rmse_slope", result.rmse_slope},
                 {"e_yb_slope", result.e_yb_slope},
                 {"slope_gap", result.e_yb_slope - result.rmse_slope}};
    if (!result.spatial) {
        summary["envelope_maxima"] = result.envelope_maxima;
        summary["envelope_monotone"] = result.envelope_monotone;
    }
    write_json(out / (stem + ".json"), summary, files);
    return result;
}

MoleculeResult molecule_impl(const RunConfig &c, const fs::path &out, std::vector<fs::path> &files) {
    const auto grid = c.grid();
    const auto particles = c.particle_specs();
    auto report = evolve(initial_state(c), c.plan(), particles);

    MoleculeResult result;
    for (double d : report.norm_drift) {
        result.max_norm_drift = std::max(result.max_norm_drift, d);
    }
    const std::size_t side = grid.cells_per_axis();
    json summary{{"max_norm_drift", result.max_norm_drift}, {"electrons", json::array()}};
    const int nq = report.final_state.codec().quantum_particles();
    for (int p = 0; p < nq; ++p) {
        auto marginal = marginal_density(report.final_state, p);
        std::vector<double> asym;
        for (const auto &refl : c.reflections) {
            asym.push_back(reflection_asymmetry(marginal, grid.qubits_per_axis, grid.dimensions, refl));
        }
        std::string csv;
        for (std::size_t i = 0; i < side; ++i) {
            for (std::size_t j = 0; j < side; ++j) {
                csv += (j ? "," : "") + fmt17(marginal[i * side + j]);
            }
            csv += "\n";
        }
        const auto name = "molecule_particle_" + std::to_string(p) + ".csv";
        write_text(out / name, csv, files);
        double total = 0.0;
        for (double v : marginal) {
            total += v;
        }
        summary["electrons"].push_back({{"file", name}, {"marginal_sum", total}, {"reflection_asymmetry", asym}});
        result.marginals.push_back(std::move(marginal));
        result.asymmetry.push_back(std::move(asym));
    }
    write_json(out / "molecule_summary.json", summary, files);
    return result;
}

SampleResult sample_impl(const RunConfig &c, const fs::path &out, std::vector<fs::path> &files) {
    const auto grid = c.grid();
    const auto particles = c.particle_specs();
    StateVector state = [&] {
        if (c.sample_state == "box_evolved") {
            require_box_setup(c);
            return evolve(box_initial_state(grid, particles, c.interior_only), c.plan(), particles).final_state;
        }
        if (c.sample_state == "uniform") {
            return encode_state(grid, particles, [](const Configuration &) { return Complex(1.0); });
        }
        const IndexCodec codec(grid.qubits_per_axis, grid.dimensions, 1);
        const std::size_t target = c.sample_cell;
        return encode_state(grid, particles, [&](const Configuration &cfg) {
            return codec.flat_index(cfg.cells) == target ? Complex(1.0) : Complex(0.0);
        });
    }();

    SampleResult result;
    result.histogram = sample_configurations(state, c.shots, c.seed);
    result.exact = density(state);
    result.tv_distance = tv_distance(result.histogram, result.exact);

    std::string csv = "configuration,count\n";
    for (std::size_t i = 0; i < result.histogram.size(); ++i) {
        csv += std::to_string(i) + "," + std::to_string(result.histogram[i]) + "\n";
    }
    write_text(out / "histogram.csv", csv, files);
    write_json(out / "sample_summary.json",
               {{"shots", c.shots}, {"seed", c.seed}, {"states", result.histogram.size()},
                {"tv_distance", result.tv_distance}},
               files);
    return result;
}

double max_entry_error(const Eigen::MatrixXcd &u, std::span<const double> phases) {
    double err = 0.0;
    for (Eigen::Index i = 0; i < u.rows(); ++i) {
        for (Eigen::Index j = 0; j < u.cols(); ++j) {
            const Complex target = i == j ? std::polar(1.0, phases[static_cast<std::size_t>(i)]) : Complex(0.0);
            err = std::max(err, std::abs(u(i, j) - target));
        }
    }
    return err;
}

SynthReport synth_impl(const RunConfig &c, const fs::path &out, std::vector<fs::path> &files) {
    const auto &a = c.circuit_angles;
    const std::array<double, 8> phases{a[0], a[1], a[2], a[3], a[2], a[3], a[0], a[1]};
    SynthReport report;
    report.compressed = synthesize_diagonal(phases);
    report.naive = synthesize_diagonal_naive(phases);
    report.compressed_error = max_entry_error(circuit_unitary(report.compressed), phases);
    report.naive_error = max_entry_error(circuit_unitary(report.naive), phases);
    for (int n_particles = 1; n_particles <= 3; ++n_particles) {
        for (int n = 1; n <= 8; ++n) {
            report.gate_counts.push_back({static_cast<std::uint64_t>(n_particles), static_cast<std::uint64_t>(n),
                                          count_kinetic_gates(n_particles, n, KineticMethod::trotter),
                                          count_kinetic_gates(n_particles, n, KineticMethod::spectral)});
        }
    }
    write_text(out / "parity_circuit.txt", serialize_circuit(report.compressed), files);
    write_text(out / "naive_circuit.txt", serialize_circuit(report.naive), files);
    json counts = json::array();
    for (const auto &row : report.gate_counts) {
        counts.push_back({{"particles", row[0]}, {"qubits_per_axis", row[1]}, {"trotter", row[2]}, {"spectral", row[3]}});
    }
    write_json(out / "synth_report.json",
               {{"kinetic_gate_counts", counts},
                {"parity_circuit",
                 {{"compressed_gates", report.compressed.gates.size()},
                  {"compressed_phase_gates", report.compressed.phase_gate_count()},
                  {"naive_gates", report.naive.gates.size()},
                  {"naive_phase_gates", report.naive.phase_gate_count()},
                  {"compressed_max_error", report.compressed_error},
                  {"naive_max_error", report.naive_error}}}},
               files);
    return report;
}

std::vector<fs::path> dispatch(const RunConfig &c, const fs::path &out) {
    validate_config(c);
    fs::create_directories(out);
    std::vector<fs::path> files;
    switch (c.experiment) {
    case Experiment::box_evolve:
        box_evolve_impl(c, out, files);
        break;
    case Experiment::convergence_spatial:
    case Experiment::convergence_temporal:
        convergence_impl(c, out, files);
        break;
    case Experiment::molecule2d:
        molecule_impl(c, out, files);
        break;
    case Experiment::sample:
        sample_impl(c, out, files);
        break;
    case Experiment::synth_report:
        synth_impl(c, out, files);
        break;
    }
    return files;
}

template <class Result, class Impl> Result run_with(const RunConfig &c, const fs::path &out, Impl impl) {
    validate_config(c);
    fs::create_directories(out);
    std::vector<fs::path> files;
    return impl(c, out, files);
}

} // namespace

std::string to_string(Experiment experiment) {
    for (const auto &[name, value] : experiment_names()) {
        if (value == experiment) {
            return name;
        }
    }
    return "unknown";
}

Experiment experiment_from_string(const std::string &name) {
    const auto it = experiment_names().find(name);
    if (it == experiment_names().end()) {
        throw ValidationError("unknown experiment '" + name + "'");
    }
    return it->second;
}

EvolutionPlan RunConfig::plan() const {
    EvolutionPlan p;
    p.total_time = total_time;
    p.steps = steps;
    p.method = kinetic_method;
    p.terms = terms;
    p.splitting = splitting;
    p.wall_height = wall_height;
    p.snapshot_count = snapshot_count;
    return p;
}

std::vector<ParticleSpec> RunConfig::particle_specs() const {
    std::vector<ParticleSpec> out;
    out.reserve(particles.size());
    for (const auto &p : particles) {
        out.push_back(p.spec);
    }
    return out;
}

RunConfig default_config(Experiment experiment) {
    RunConfig c;
    c.experiment = experiment;
    c.particles = {box_particle()};
    c.terms.kinetic_electrons = true;
    c.terms.wall = true;
    switch (experiment) {
    case Experiment::box_evolve:
    case Experiment::convergence_spatial:
    case Experiment::synth_report:
        break;
    case Experiment::convergence_temporal:
        c.qubits_per_axis = 6;
        for (std::size_t s = 10; s <= 1000; s += 10) {
            c.sweep_steps.push_back(s);
        }
        break;
    case Experiment::sample:
        c.qubits_per_axis = 6;
        break;
    case Experiment::molecule2d:
        c.box_length = 8.0;
        c.qubits_per_axis = 4;
        c.dimensions = 2;
        c.total_time = 1.0;
        c.terms = TermSet{};
        c.terms.kinetic_electrons = true;
        c.terms.electron_electron = true;
        c.terms.electron_nucleus = true;
        c.snapshot_count = 0;
        c.particles = {
            ParticleConfig{ParticleSpec::electron(), {{3, 11}, {3, 11}}},
            ParticleConfig{ParticleSpec::clamped_nucleus(1.0, kProtonMass, {7, 7}), {}},
        };
        c.reflections = {{0, 7}, {1, 7}};
        break;
    }
    return c;
}

void validate_config(const RunConfig &c) {
    const auto grid = c.grid();
    c.plan().validate();
    if (c.particles.empty()) {
        throw ValidationError("particle roster is empty");
    }
    int quantum = 0;
    for (const auto &p : c.particles) {
        validate_particle(grid, p.spec);
        if (p.spec.is_quantum()) {
            ++quantum;
            for (const auto &range : p.initial_box) {
                if (range[0] > range[1] || range[1] >= grid.cells_per_axis()) {
                    throw ValidationError("initial_box range out of order or outside the grid");
                }
            }
            if (!p.initial_box.empty() && p.initial_box.size() != static_cast<std::size_t>(grid.dimensions)) {
                throw ValidationError("initial_box needs one range per axis");
            }
        }
    }
    if (quantum == 0) {
        throw ValidationError("at least one quantum particle is required");
    }
    check_joint_size(grid, quantum);
    if (c.series_terms < 1) {
        throw ValidationError("series_terms must be at least 1");
    }
    for (double t : c.evaluation_times) {
        if (!(t >= 0.0) || !std::isfinite(t)) {
            throw ValidationError("evaluation times must be finite and non-negative");
        }
    }
    switch (c.experiment) {
    case Experiment::box_evolve:
        require_box_setup(c);
        break;
    case Experiment::convergence_spatial:
        require_box_setup(c);
        if (c.sweep_n_min < 1 || c.sweep_n_max > kMaxQubitsPerAxis || c.sweep_n_min > c.sweep_n_max) {
            throw ValidationError("spatial sweep range must satisfy 1 <= n_min <= n_max <= 20");
        }
        break;
    case Experiment::convergence_temporal:
        require_box_setup(c);
        if (c.sweep_steps.empty() ||
            std::any_of(c.sweep_steps.begin(), c.sweep_steps.end(), [](std::size_t s) { return s == 0; })) {
            throw ValidationError("temporal sweep needs a non-empty list of positive step counts");
        }
        break;
    case Experiment::molecule2d:
        if (c.dimensions != 2) {
            throw ValidationError("molecule2d runs in two dimensions");
        }
        for (const auto &p : c.particles) {
            if (p.spec.is_quantum() && p.spec.is_nucleus()) {
                throw ValidationError("molecule2d clamps every nucleus; quantum nuclei are rejected");
            }
            if (p.spec.is_quantum() && p.initial_box.empty()) {
                throw ValidationError("every electron needs an initial_box");
            }
        }
        for (const auto &r : c.reflections) {
            if (r.axis < 0 || r.axis >= c.dimensions || r.mirror_cell >= grid.cells_per_axis()) {
                throw ValidationError("reflection axis or mirror cell out of range");
            }
        }
        break;
    case Experiment::sample:
        if (c.shots < 1) {
            throw ValidationError("shots must be at least 1");
        }
        if (c.sample_state != "box_evolved" && c.sample_state != "uniform" && c.sample_state != "point") {
            throw ValidationError("sample_state must be box_evolved, uniform or point");
        }
        if (c.sample_state == "point") {
            if (quantum != 1 || c.sample_cell >= grid.cells_per_particle()) {
                throw ValidationError("point sample needs one quantum particle and a valid sample_cell");
            }
        }
        break;
    case Experiment::synth_report:
        break;
    }
}

RunConfig parse_config(const json &input) {
    try {
        const json &doc = input.contains("config") ? input.at("config") : input;
        if (!doc.is_object()) {
            throw ValidationError("run configuration must be a JSON object");
        }
        RunConfig c = default_config(experiment_from_string(doc.at("experiment").get<std::string>()));

        static const std::set<std::string> known{
            "experiment",   "box_length",     "qubits_per_axis", "dimensions",     "particles",
            "total_time",   "steps",          "kinetic_method",  "splitting",      "terms",
            "wall_height",  "interior_only",  "series_terms",    "snapshot_count", "evaluation_times",
            "sweep_n_min",  "sweep_n_max",    "sweep_steps",     "reflections",    "shots",
            "sample_state", "sample_cell",    "seed",            "circuit_angles", "output_dir"};
        for (const auto &[key, value] : doc.items()) {
            if (!known.contains(key)) {
                throw ValidationError("unknown configuration key '" + key + "'");
            }
        }

        auto get = [&](const char *key, auto &field) {
            if (doc.contains(key)) {
                field = doc.at(key).get<std::remove_reference_t<decltype(field)>>();
            }
        };
        get("box_length", c.box_length);
        get("qubits_per_axis", c.qubits_per_axis);
        get("dimensions", c.dimensions);
        get("total_time", c.total_time);
        get("steps", c.steps);
        get("wall_height", c.wall_height);
        get("interior_only", c.interior_only);
        get("series_terms", c.series_terms);
        get("snapshot_count", c.snapshot_count);
        get("evaluation_times", c.evaluation_times);
        get("sweep_n_min", c.sweep_n_min);
        get("sweep_n_max", c.sweep_n_max);
        get("sweep_steps", c.sweep_steps);
        get("shots", c.shots);
        get("sample_state", c.sample_state);
        get("sample_cell", c.sample_cell);
        get("seed", c.seed);
        get("circuit_angles", c.circuit_angles);
        get("output_dir", c.output_dir);

        if (doc.contains("kinetic_method")) {
            const auto m = doc.at("kinetic_method").get<std::string>();
            if (m == "trotter") {
                c.kinetic_method = KineticMethod::trotter;
            } else if (m == "spectral") {
                c.kinetic_method = KineticMethod::spectral;
            } else {
                throw ValidationError("kinetic_method must be trotter or spectral");
            }
        }
        if (doc.contains("splitting")) {
            const auto s = doc.at("splitting").get<std::string>();
            if (s == "first_order") {
                c.splitting = Splitting::first_order;
            } else if (s == "strang") {
                c.splitting = Splitting::strang;
            } else {
                throw ValidationError("splitting must be first_order or strang");
            }
        }
        if (doc.contains("terms")) {
            c.terms = parse_terms(doc.at("terms"));
        }
        if (doc.contains("particles")) {
            c.particles.clear();
            for (const auto &p : doc.at("particles")) {
                ParticleConfig pc;
                pc.spec.mass = p.value("mass", 1.0);
                pc.spec.charge = p.value("charge", -1.0);
                const auto kind = p.value("kind", std::string("quantum"));
                if (kind == "clamped") {
                    pc.spec.kind = ParticleKind::clamped;
                    pc.spec.clamped_cell = p.at("cell").get<std::vector<std::size_t>>();
                } else if (kind != "quantum") {
                    throw ValidationError("particle kind must be quantum or clamped");
                }
                if (p.contains("initial_box")) {
                    pc.initial_box = p.at("initial_box").get<std::vector<std::array<std::size_t, 2>>>();
                }
                c.particles.push_back(std::move(pc));
            }
        }
        if (doc.contains("reflections")) {
            c.reflections.clear();
            for (const auto &r : doc.at("reflections")) {
                c.reflections.push_back({r.at("axis").get<int>(), r.at("mirror_cell").get<std::size_t>()});
            }
        }
        validate_config(c);
        return c;
    } catch (const json::exception &e) {
        throw ValidationError(std::string("malformed configuration: ") + e.what());
    }
}

json to_json(const RunConfig &c) {
    json particles = json::array();
    for (const auto &p : c.particles) {
        json j{{"mass", p.spec.mass},
               {"charge", p.spec.charge},
               {"kind", p.spec.is_quantum() ? "quantum" : "clamped"}};
        if (!p.spec.is_quantum()) {
            j["cell"] = p.spec.clamped_cell;
        }
        if (!p.initial_box.empty()) {
            j["initial_box"] = p.initial_box;
        }
        particles.push_back(std::move(j));
    }
    json reflections = json::array();
    for (const auto &r : c.reflections) {
        reflections.push_back({{"axis", r.axis}, {"mirror_cell", r.mirror_cell}});
    }
    return json{{"experiment", to_string(c.experiment)},
                {"box_length", c.box_length},
                {"qubits_per_axis", c.qubits_per_axis},
                {"dimensions", c.dimensions},
                {"particles", particles},
                {"total_time", c.total_time},
                {"steps", c.steps},
                {"kinetic_method", std::string(to_string(c.kinetic_method))},
                {"splitting", std::string(to_string(c.splitting))},
                {"terms", term_names(c.terms)},
                {"wall_height", c.wall_height},
                {"interior_only", c.interior_only},
                {"series_terms", c.series_terms},
                {"snapshot_count", c.snapshot_count},
                {"evaluation_times", c.evaluation_times},
                {"sweep_n_min", c.sweep_n_min},
                {"sweep_n_max", c.sweep_n_max},
                {"sweep_steps", c.sweep_steps},
                {"reflections", reflections},
                {"shots", c.shots},
                {"sample_state", c.sample_state},
                {"sample_cell", c.sample_cell},
                {"seed", c.seed},
                {"circuit_angles", c.circuit_angles},
                {"output_dir", c.output_dir}};
}

StateVector initial_state(const RunConfig &c) {
    const auto grid = c.grid();
    const auto particles = c.particle_specs();
    switch (c.experiment) {
    case Experiment::box_evolve:
    case Experiment::convergence_spatial:
    case Experiment::convergence_temporal:
    case Experiment::sample:
        return box_initial_state(grid, particles, c.interior_only);
    case Experiment::molecule2d:
    case Experiment::synth_report:
        break;
    }
    std::vector<const ParticleConfig *> quantum;
    for (const auto &p : c.particles) {
        if (p.spec.is_quantum()) {
            quantum.push_back(&p);
        }
    }
    const auto d = static_cast<std::size_t>(grid.dimensions);
    return encode_state(grid, particles, [&](const Configuration &cfg) {
        for (std::size_t q = 0; q < quantum.size(); ++q) {
            const auto &box = quantum[q]->initial_box;
            if (box.empty()) {
                continue;
            }
            for (std::size_t a = 0; a < d; ++a) {
                const auto cell = cfg.cells[q * d + a];
                if (cell < box[a][0] || cell > box[a][1]) {
                    return Complex(0.0);
                }
            }
        }
        return Complex(1.0);
    });
}

double reflection_asymmetry(std::span<const double> marginal, int qubits_per_axis, int dimensions,
                            const ReflectionCheck &reflection) {
    const IndexCodec codec(qubits_per_axis, dimensions, 1);
    if (marginal.size() != codec.size()) {
        throw ValidationError("marginal size does not match the grid");
    }
    if (reflection.axis < 0 || reflection.axis >= dimensions) {
        throw ValidationError("reflection axis out of range");
    }
    const std::size_t side = codec.cells_per_axis();
    const auto axis = static_cast<std::size_t>(reflection.axis);
    double diff = 0.0;
    double total = 0.0;
    for (std::size_t i = 0; i < marginal.size(); ++i) {
        auto cells = codec.cells(i);
        cells[axis] = (2 * reflection.mirror_cell + side - cells[axis] % side) % side;
        diff += std::abs(marginal[i] - marginal[codec.flat_index(cells)]);
        total += marginal[i];
    }
    return total > 0.0 ? diff / total : 0.0;
}

double tv_distance(std::span<const std::uint64_t> histogram, std::span<const double> exact) {
    if (histogram.size() != exact.size()) {
        throw ValidationError("histogram and exact density differ in length");
    }
    std::uint64_t shots = 0;
    for (auto h : histogram) {
        shots += h;
    }
    if (shots == 0) {
        throw ValidationError("empty histogram");
    }
    double tv = 0.0;
    for (std::size_t i = 0; i < exact.size(); ++i) {
        tv += std::abs(static_cast<double>(histogram[i]) / static_cast<double>(shots) - exact[i]);
    }
    return 0.5 * tv;
}

unsigned worker_threads() {
    unsigned hw = std::max(1u, std::thread::hardware_concurrency());
    if (const char *env = std::getenv("WZ_THREADS")) {
        char *end = nullptr;
        const long v = std::strtol(env, &end, 10);
        if (end != env && v >= 1) {
            hw = std::min(hw, static_cast<unsigned>(v));
        }
    }
    return hw;
}

BoxEvolveResult run_box_evolve(const RunConfig &config, const fs::path &out) {
    return run_with<BoxEvolveResult>(config, out, box_evolve_impl);
}

ConvergenceResult run_convergence(const RunConfig &config, const fs::path &out) {
    return run_with<ConvergenceResult>(config, out, convergence_impl);
}

MoleculeResult run_molecule2d(const RunConfig &config, const fs::path &out) {
    return run_with<MoleculeResult>(config, out, molecule_impl);
}

SampleResult run_sample(const RunConfig &config, const fs::path &out) {
    return run_with<SampleResult>(config, out, sample_impl);
}

SynthReport run_synth_report(const RunConfig &config, const fs::path &out) {
    return run_with<SynthReport>(config, out, synth_impl);
}

std::vector<fs::path> run_experiment(const RunConfig &config, const fs::path &out) {
    auto files = dispatch(config, out);
    write_manifest(config, out, files);
    files.push_back(out / "manifest.json");
    return files;
}

} // namespace wz
