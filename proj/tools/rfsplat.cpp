// SPDX-License-Identifier: Apache-2.0
//
// rfsplat: radio-frequency rendering and inverse rendering over Gaussian primitives
// Copyright (C) 2026 rfsplat contributors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
// http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.
// ------------------------------------------------------------------------

// rfsplat command line: rcs, map, fit, oracle and serve.
//
// Exit codes: 0 success, 1 a check or fit did not pass, 2 invalid input.

#include "rfsplat/checks.hpp"
#include "rfsplat/service.hpp"

#include <CLI11.hpp>
#include <httplib.h>

#include <cstdio>
#include <cstdlib>
#include <iostream>

using namespace rfsplat;

namespace {

constexpr int kExitFailed = 1;
constexpr int kExitInput = 2;

void emit(const std::string& path, const std::string& content)
{
    if (path.empty() || path == "-") std::cout << content;
    else io::write_file(path, content);
}

struct RcsArgs {
    std::string scene, band, out;
    double range = 5.0, step = 1.0, freq = 0.0;
};

int run_rcs(const RcsArgs& a)
{
    const io::SceneDocument doc = io::load_scene(a.scene);
    FrequencyGrid grid = FrequencyGrid::single(a.freq > 0.0 ? a.freq : doc.grid[0]);
    if (!a.band.empty()) grid = service::parse_band(a.band);
    const Bvh bvh = Bvh::build(doc.scene);
    emit(a.out, io::rcs_csv(service::compute_rcs(doc, bvh, a.range, grid, a.step)));
    return 0;
}

struct MapArgs {
    std::string scene, tx, grid = "64x64", out;
    double freq = 0.0;
};

int run_map(const MapArgs& a)
{
    const io::SceneDocument doc = io::load_scene(a.scene);
    service::MapRequest req;
    req.tx = a.tx;
    std::tie(req.height, req.width) = service::parse_grid(a.grid);
    if (a.freq > 0.0) req.frequency_hz = a.freq;
    const Bvh bvh = Bvh::build(doc.scene);
    const RadioMap map = service::compute_map(doc, bvh, req);
    if (a.out.empty() || a.out == "-") {
        std::cout << io::map_csv(map);
        return 0;
    }
    io::write_file(a.out + ".csv", io::map_csv(map));
    io::write_file(a.out + ".cells.json", io::map_cells_json(map));
    io::Json extra = io::map_to_json(map);
    extra.erase("cells_db");
    io::write_grid(a.out, map.grid.height, map.grid.width, 1, map.rssi_db, extra);
    return 0;
}

struct FitArgs {
    std::string scene, data, out, scene_out;
    std::size_t iters = 2000;
    std::uint64_t seed = 0;
    bool wideband = false;
    bool train_alpha = false;
    double lr_start = 0.01, lr_end = 0.001, jitter = 0.0;
};

int run_fit(const FitArgs& a)
{
    io::SceneDocument doc = io::load_scene(a.scene);
    const ObservationSet data = io::load_dataset(a.data);
    if (data.scene_id != doc.id)
        throw ValidationError("dataset refers to scene '" + data.scene_id + "' but the scene file is '" + doc.id + "'");
    ProblemOptions options;
    options.los = doc.los;
    const InverseProblem problem(doc.scene, data, options);
    AttributeBank init = AttributeBank::from_scene(doc.scene);

    if (a.wideband) {
        FamConfig fc;
        fc.seed = a.seed;
        const FamNetwork net(fc, init.gaussians(), data.grid[0], data.grid[data.grid.size() - 1]);
        WidebandConfig wc;
        wc.iterations = a.iters;
        wc.lr_start = a.lr_start;
        wc.lr_end = a.lr_end;
        const WidebandReport report = fit_wideband(problem, init, net, wc);
        emit(a.out, io::wideband_report_to_json(report, init, data.grid).dump(2) + "\n");
        return report.converged ? 0 : kExitFailed;
    }

    FitConfig config;
    config.iterations = a.iters;
    config.seed = a.seed;
    config.lr_start = a.lr_start;
    config.lr_end = a.lr_end;
    config.init_jitter = a.jitter;
    config.trainable = {a.train_alpha, true, true, true};
    const FitReport report = fit(problem, init, config);
    emit(a.out, io::fit_report_to_json(report).dump(2) + "\n");
    if (!a.scene_out.empty()) {
        doc.scene = report.bank.apply_to(doc.scene);
        io::save_scene(a.scene_out, doc);
    }
    return report.converged ? 0 : kExitFailed;
}

int run_oracle(const std::string& check, std::uint64_t seed)
{
    oracle::CheckReport report;
    if (check == "gradients") report = oracle::gradient_suite(seed);
    else if (check == "blend") {
        report = oracle::blend_suite(seed);
        const oracle::CheckReport plate = oracle::plate_binning_check();
        for (const auto& row : plate.rows) report.add(row.label + " [relative to 3%]", row.value / row.limit * 1e-12, 1e-12);
        report.seconds += plate.seconds;
    } else if (check == "cross-section") report = oracle::cross_section_suite(seed);
    else if (check == "visibility") report = oracle::visibility_suite(seed);
    else {
        std::cerr << "rfsplat oracle: unknown check '" << check << "' (expected gradients, blend, cross-section or visibility)\n";
        return kExitInput;
    }
    std::cout << report.table();
    return report.passed ? 0 : kExitFailed;
}

int run_serve(const std::string& host, int port, const std::string& scene_dir)
{
    service::Service svc;
    if (!scene_dir.empty()) std::cerr << "loaded " << svc.load_directory(scene_dir) << " scene(s) from " << scene_dir << "\n";
    httplib::Server server;
    svc.install(server);
    std::cerr << "listening on " << host << ":" << port << "\n";
    if (!server.listen(host, port)) {
        std::cerr << "rfsplat serve: cannot listen on " << host << ":" << port << "\n";
        return kExitInput;
    }
    return 0;
}

std::string env_or(const char* name, const std::string& fallback)
{
    const char* v = std::getenv(name);
    return v && *v ? std::string(v) : fallback;
}

} // namespace

int main(int argc, char** argv)
{
    CLI::App app{"rfsplat: RF rendering over Gaussian primitives"};
    app.require_subcommand(1);

    RcsArgs rcs;
    auto* rcs_cmd = app.add_subcommand("rcs", "monostatic sweep over [0, 360) degrees, CSV output");
    rcs_cmd->add_option("--scene", rcs.scene, "scene file")->required();
    rcs_cmd->add_option("--range", rcs.range, "radar distance from the origin (m)");
    auto* freq_opt = rcs_cmd->add_option("--freq", rcs.freq, "frequency (Hz), default: first in the scene file");
    rcs_cmd->add_option("--band", rcs.band, "f0:f1:n linear frequency grid (Hz)")->excludes(freq_opt);
    rcs_cmd->add_option("--step-deg", rcs.step, "angular step (degrees)");
    rcs_cmd->add_option("--out", rcs.out, "CSV path (default: stdout)");

    MapArgs map;
    auto* map_cmd = app.add_subcommand("map", "radio map: <out>.csv, <out>.bin/.json grid and <out>.cells.json");
    map_cmd->add_option("--scene", map.scene, "scene file")->required();
    map_cmd->add_option("--tx", map.tx, "antenna id or x,y,z")->required();
    map_cmd->add_option("--grid", map.grid, "HxW cells");
    map_cmd->add_option("--freq", map.freq, "frequency (Hz)");
    map_cmd->add_option("--out", map.out, "output stem (default: CSV on stdout)");

    FitArgs fitargs;
    auto* fit_cmd = app.add_subcommand("fit", "recover attributes from a dataset, JSON report");
    fit_cmd->add_option("--scene", fitargs.scene, "scene file with geometry and initial attributes")->required();
    fit_cmd->add_option("--data", fitargs.data, "dataset file")->required();
    fit_cmd->add_option("--iters", fitargs.iters, "iterations");
    fit_cmd->add_option("--seed", fitargs.seed, "seed for jitter and network initialization");
    fit_cmd->add_option("--out", fitargs.out, "report path (default: stdout)");
    fit_cmd->add_option("--scene-out", fitargs.scene_out, "write the scene with the fitted attributes");
    fit_cmd->add_flag("--wideband", fitargs.wideband, "train the frequency-aware modulation network");
    fit_cmd->add_flag("--train-alpha", fitargs.train_alpha, "also optimize opacity");
    fit_cmd->add_option("--lr-start", fitargs.lr_start, "initial learning rate");
    fit_cmd->add_option("--lr-end", fitargs.lr_end, "final learning rate");
    fit_cmd->add_option("--jitter", fitargs.jitter, "relative jitter of the initial raw parameters");

    std::string check;
    std::uint64_t seed = 0;
    auto* oracle_cmd = app.add_subcommand("oracle", "property suites against the reference implementations");
    oracle_cmd->add_option("--check", check, "gradients, blend, cross-section or visibility")->required();
    oracle_cmd->add_option("--seed", seed, "suite seed");

    std::string host = "127.0.0.1";
    int port = std::atoi(env_or("RFSPLAT_PORT", "8080").c_str());
    std::string scene_dir = env_or("RFSPLAT_SCENE_DIR", "");
    auto* serve_cmd = app.add_subcommand("serve", "HTTP API (RFSPLAT_PORT, RFSPLAT_SCENE_DIR)");
    serve_cmd->add_option("--host", host, "bind address");
    serve_cmd->add_option("--port", port, "port");
    serve_cmd->add_option("--scene-dir", scene_dir, "directory of scene files to preload");

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::CallForAllHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return kExitInput;
    }

    try {
        if (*rcs_cmd) return run_rcs(rcs);
        if (*map_cmd) return run_map(map);
        if (*fit_cmd) return run_fit(fitargs);
        if (*oracle_cmd) return run_oracle(check, seed);
        if (*serve_cmd) return run_serve(host, port, scene_dir);
    } catch (const ValidationError& e) {
        std::cerr << "rfsplat: " << e.what() << "\n";
        return kExitInput;
    } catch (const DegenerateGeometryError& e) {
        std::cerr << "rfsplat: " << e.what() << "\n";
        return kExitInput;
    } catch (const PreconditionError& e) {
        std::cerr << "rfsplat: " << e.what() << "\n";
        return kExitInput;
    } catch (const io::Json::exception& e) {
        std::cerr << "rfsplat: malformed JSON: " << e.what() << "\n";
        return kExitInput;
    } catch (const std::exception& e) {
        std::cerr << "rfsplat: " << e.what() << "\n";
        return kExitFailed;
    }
    return kExitInput;
}
