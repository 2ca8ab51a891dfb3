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

#include <cstdio>
#include <fstream>
#include <iostream>
#include <optional>

#include "CLI11.hpp"
#include "json.hpp"

#include "wz/error.hpp"
#include "wz/experiments.hpp"

namespace {

struct Overrides {
    std::string config_path;
    std::string out_dir = "./out";
    std::optional<int> qubits_per_axis;
    std::optional<double> box_length;
    std::optional<double> total_time;
    std::optional<std::size_t> steps;
    std::optional<std::string> kinetic_method;
    std::optional<std::string> splitting;
    std::optional<double> wall_height;
    std::optional<std::uint64_t> seed;
    std::optional<std::uint64_t> shots;
};

void add_common(CLI::App *cmd, Overrides &o) {
    cmd->add_option("--config", o.config_path, "JSON run configuration or manifest")->required()->check(CLI::ExistingFile);
    cmd->add_option("--out", o.out_dir, "output directory");
    cmd->add_option("--qubits-per-axis", o.qubits_per_axis);
    cmd->add_option("--box-length", o.box_length);
    cmd->add_option("--total-time", o.total_time);
    cmd->add_option("--steps", o.steps);
    cmd->add_option("--kinetic-method", o.kinetic_method)->check(CLI::IsMember({"trotter", "spectral"}));
    cmd->add_option("--splitting", o.splitting)->check(CLI::IsMember({"first_order", "strang"}));
    cmd->add_option("--wall-height", o.wall_height);
    cmd->add_option("--seed", o.seed);
    cmd->add_option("--shots", o.shots);
}

template <class T> void put(nlohmann::json &doc, const char *key, const std::optional<T> &v) {
    if (v) {
        doc[key] = *v;
    }
}

int run(const Overrides &o, const std::string &experiment) {
    nlohmann::json doc;
    {
        std::ifstream in(o.config_path);
        try {
            doc = nlohmann::json::parse(in);
        } catch (const nlohmann::json::exception &e) {
            throw wz::ValidationError(std::string("cannot parse config: ") + e.what());
        }
    }
    if (doc.contains("config")) {
        doc = doc.at("config");
    }
    doc["experiment"] = experiment;
    put(doc, "qubits_per_axis", o.qubits_per_axis);
    put(doc, "box_length", o.box_length);
    put(doc, "total_time", o.total_time);
    put(doc, "steps", o.steps);
    put(doc, "kinetic_method", o.kinetic_method);
    put(doc, "splitting", o.splitting);
    put(doc, "wall_height", o.wall_height);
    put(doc, "seed", o.seed);
    put(doc, "shots", o.shots);
    doc["output_dir"] = o.out_dir;

    const auto config = wz::parse_config(doc);
    const auto files = wz::run_experiment(config, o.out_dir);
    for (const auto &f : files) {
        std::cout << f.string() << "\n";
    }
    return 0;
}

} // namespace

int main(int argc, char **argv) {
    CLI::App app{"wzsim: discretized Schrodinger evolution on qubit registers"};
    app.require_subcommand(1);

    Overrides o;
    std::string axis = "spatial";
    auto *box = app.add_subcommand("box-evolve", "evolve the flat particle-in-a-box state and compare to the exact series");
    add_common(box, o);
    auto *conv = app.add_subcommand("convergence", "RMSE and E_YB sweeps over n or N_t");
    add_common(conv, o);
    conv->add_option("--axis", axis)->check(CLI::IsMember({"spatial", "temporal"}));
    auto *mol = app.add_subcommand("molecule2d", "clamped-nucleus 2D molecule run");
    add_common(mol, o);
    auto *sample = app.add_subcommand("sample", "measurement histogram of a prepared state");
    add_common(sample, o);
    auto *synth = app.add_subcommand("synth-report", "kinetic gate counts and the two-controlled-phase diagonal circuit");
    add_common(synth, o);

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError &e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : 2;
    }

    try {
        if (box->parsed()) {
            return run(o, "box-evolve");
        }
        if (conv->parsed()) {
            return run(o, "convergence-" + axis);
        }
        if (mol->parsed()) {
            return run(o, "molecule2d");
        }
        if (sample->parsed()) {
            return run(o, "sample");
        }
        return run(o, "synth-report");
    } catch (const wz::ValidationError &e) {
        std::cerr << "config error: " << e.what() << "\n";
        return 2;
    } catch (const wz::ResourceError &e) {
        std::cerr << "resource limit: " << e.what() << "\n";
        return 3;
    } catch (const wz::NumericalError &e) {
        std::cerr << "numerical invariant violated: " << e.what() << "\n";
        return 4;
    } catch (const std::exception &e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
}
