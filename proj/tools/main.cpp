// This file is part of the reidmstc toolkit.
//
// Copyright 2026 the reidmstc authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include <CLI11.hpp>

#include <cstdio>
#include <filesystem>
#include <iostream>
#include <string>

#include "reidmstc/common.hpp"
#include "reidmstc/config.hpp"
#include "reidmstc/feature_cache.hpp"
#include "reidmstc/part_layout.hpp"
#include "reidmstc/report.hpp"
#include "reidmstc/selfcheck.hpp"
#include "reidmstc/synthetic.hpp"

namespace {

namespace fs = std::filesystem;
using namespace reid;

/// Finds --config in argv before CLI11 runs so that flag values override
/// the file instead of the other way around.
RunConfig preload_config(int argc, char** argv) {
    RunConfig config;
    for (int i = 1; i < argc; ++i) {
        const std::string arg = argv[i];
        if (arg == "--config" && i + 1 < argc)
            return parse_config_file(argv[i + 1], config);
        if (arg.rfind("--config=", 0) == 0)
            return parse_config_file(arg.substr(9), config);
    }
    return config;
}

void add_common_flags(CLI::App* cmd, RunConfig& config, std::string& pca_dims_text) {
    cmd->add_option("--config", "flat key = value config file (parsed first)")
        ->expected(1);
    cmd->add_option("--manifest", config.manifest_path, "dataset manifest (JSON)");
    cmd->add_option("--out", config.out_dir, "output directory");
    cmd->add_option("--seed", config.seed, "master seed");
    cmd->add_option("--trials", config.trials, "number of evaluation trials");
    cmd->add_option("--train-fraction", config.train_fraction,
                    "fraction of identities used for training");
    cmd->add_option("--max-iters", config.solver.max_iters, "ADMM iteration cap");
    cmd->add_option("--rho", config.solver.rho, "ADMM penalty");
    cmd->add_option("--eta", config.solver.eta, "gradient step size");
    cmd->add_option("--inner-steps", config.solver.inner_steps,
                    "gradient steps per loss block");
    cmd->add_option("--primal-tol", config.solver.primal_tol, "primal stop tolerance");
    cmd->add_option("--dual-tol", config.solver.dual_tol, "dual stop tolerance");
    cmd->add_option("--lambda", config.solver.lambda, "row-sparsity weight");
    cmd->add_option("--alpha1", config.solver.alpha1, "per-probe margin");
    cmd->add_option("--alpha2", config.solver.alpha2, "inter-class margin");
    cmd->add_option("--subset-size", config.solver.subset_size,
                    "gallery subsample for the inter-class average");
    cmd->add_option("--pca-dims", pca_dims_text,
                    "reduced dimensions as part:local:global");
    cmd->add_option("--threads", config.threads, "extraction threads");
    cmd->add_option("--feature-cache", config.feature_cache,
                    "raw-feature cache file (read if present, written otherwise)");
    cmd->add_flag("--bitexact", config.bitexact,
                  "single-threaded fixed-order reductions");
}

std::vector<RawImageFeatures> load_or_extract(const Manifest& manifest,
                                              const RunConfig& config) {
    if (!config.feature_cache.empty() && fs::exists(config.feature_cache)) {
        log_info("reading feature cache " + config.feature_cache);
        return load_feature_cache(manifest, config.feature_cache);
    }
    const int threads = config.bitexact ? 1 : config.threads;
    std::vector<RawImageFeatures> raw = extract_raw_features(manifest, threads);
    if (!config.feature_cache.empty()) {
        save_feature_cache(raw, manifest, config.feature_cache);
        log_info("wrote feature cache " + config.feature_cache);
    }
    return raw;
}

struct TrialModel {
    ModelBundle bundle;
    std::vector<TraceRow> trace;
};

TrialModel train_on_split(const Manifest& manifest,
                          const std::vector<RawImageFeatures>& raw,
                          const SplitSpec& split, const RunConfig& config) {
    const PairedRecords train_pairs = pair_records(manifest, split.train_ids);

    std::vector<std::size_t> fit_indices;
    for (std::size_t i = 0; i < train_pairs.ids.size(); ++i) {
        fit_indices.push_back(train_pairs.probe_record[i]);
        fit_indices.push_back(train_pairs.gallery_record[i]);
    }

    TrialModel out;
    out.bundle.pca = fit_pca_models(raw, fit_indices, config.pca_dims);
    out.bundle.image_height = manifest.image_height;
    out.bundle.image_width = manifest.image_width;

    const std::vector<PersonDescriptor> descriptors =
        project_descriptors(raw, out.bundle.pca);
    const TrainBatch batch = build_train_batch(descriptors, train_pairs);

    SolverConfig solver = config.solver;
    solver.seed = config.seed;
    TrainResult result = reid::train(batch, solver);
    out.bundle.metric = std::move(result.model);
    out.trace = std::move(result.trace);
    return out;
}

int run_synth(const RunConfig& config) {
    const Manifest manifest =
        generate_synthetic(config.synth_ids, config.synth_views, config.seed,
                           config.out_dir);
    std::cout << "wrote " << manifest.records.size() << " images and "
              << (fs::path(config.out_dir) / "manifest.json").string() << "\n";
    return 0;
}

int run_train(const RunConfig& config) {
    if (config.manifest_path.empty())
        throw std::runtime_error("train: --manifest is required");
    const LoadedManifest loaded = load_manifest(config.manifest_path);
    for (const auto& warning : loaded.warnings) log_warn(warning);

    const std::vector<RawImageFeatures> raw = load_or_extract(loaded.manifest, config);

    const std::vector<SplitSpec> splits =
        make_splits(loaded.manifest, config.train_fraction, 1, config.seed);
    const TrialModel trial = train_on_split(loaded.manifest, raw, splits[0], config);

    fs::create_directories(config.out_dir);
    const std::string model_path = (fs::path(config.out_dir) / "model.mstc").string();
    save_model(trial.bundle, model_path);
    write_convergence_csv(trial.trace,
                          (fs::path(config.out_dir) / "convergence.csv").string());
    write_convergence_svg(trial.trace,
                          (fs::path(config.out_dir) / "convergence.svg").string());

    std::cout << "trained on " << splits[0].train_ids.size() << " identities in "
              << (trial.trace.size() - 1) << " iterations; objective "
              << trial.trace.front().objective << " -> " << trial.trace.back().objective
              << "\nmodel: " << model_path << "\n";
    return 0;
}

int run_eval(const RunConfig& config) {
    if (config.manifest_path.empty())
        throw std::runtime_error("eval: --manifest is required");
    if (config.model_path.empty())
        throw std::runtime_error("eval: --model is required");

    const ModelBundle bundle = load_model(config.model_path);
    const LoadedManifest loaded = load_manifest(config.manifest_path);
    for (const auto& warning : loaded.warnings) log_warn(warning);
    if (loaded.manifest.image_height != bundle.image_height ||
        loaded.manifest.image_width != bundle.image_width)
        throw std::runtime_error("eval: manifest image size differs from the model");

    const std::vector<RawImageFeatures> raw = load_or_extract(loaded.manifest, config);
    const std::vector<PersonDescriptor> descriptors =
        project_descriptors(raw, bundle.pca);

    const std::vector<SplitSpec> splits = make_splits(
        loaded.manifest, config.train_fraction, config.trials, config.seed);

    std::vector<CmcCurve> curves;
    for (const SplitSpec& split : splits) {
        const PairedRecords pairs = pair_records(loaded.manifest, split.test_ids);
        const EvalInputs inputs =
            build_eval_inputs(descriptors, pairs, true, loaded.manifest);
        curves.push_back(compute_cmc(inputs.probes, inputs.probe_ids, inputs.gallery,
                                     inputs.gallery_ids, bundle.metric));
    }
    const CmcCurve mean = average_trials(curves);

    const ReportFiles files = emit_report(mean, {}, config.out_dir);
    for (const auto& note : files.notes) log_info(note);
    std::cout << "rank-1 " << mean.rates.front() << " over " << curves.size()
              << " trial(s); report in " << config.out_dir << "\n";
    return 0;
}

int run_rank(const RunConfig& config, const std::string& probe_path) {
    if (config.manifest_path.empty())
        throw std::runtime_error("rank: --manifest is required");
    if (config.model_path.empty()) throw std::runtime_error("rank: --model is required");

    const ModelBundle bundle = load_model(config.model_path);
    const LoadedManifest loaded = load_manifest(config.manifest_path);
    const std::vector<RawImageFeatures> raw = load_or_extract(loaded.manifest, config);
    const std::vector<PersonDescriptor> gallery = project_descriptors(raw, bundle.pca);

    ImageRecord probe_record;
    probe_record.path = probe_path;
    Manifest probe_manifest;
    probe_manifest.image_height = bundle.image_height;
    probe_manifest.image_width = bundle.image_width;
    probe_manifest.records.push_back(probe_record);
    const std::vector<RawImageFeatures> probe_raw =
        extract_raw_features(probe_manifest, 1);
    const PersonDescriptor probe = project_descriptors(probe_raw, bundle.pca).front();

    std::vector<std::pair<double, std::size_t>> scored;
    for (std::size_t j = 0; j < gallery.size(); ++j)
        scored.emplace_back(similarity(probe, gallery[j], bundle.metric), j);
    std::sort(scored.begin(), scored.end(), [](const auto& a, const auto& b) {
        if (a.first != b.first) return a.first > b.first;
        return a.second < b.second;
    });

    std::cout << "rank,gallery_index,person_id,camera_id,score,path\n";
    for (std::size_t r = 0; r < scored.size(); ++r) {
        const auto& record = loaded.manifest.records[scored[r].second];
        std::printf("%zu,%zu,%d,%d,%.9g,%s\n", r + 1, scored[r].second,
                    record.person_id, record.camera_id, scored[r].first,
                    record.path.c_str());
    }
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"person re-identification with semantic region features and a "
                 "topology-constrained metric"};
    app.require_subcommand(0, 1);

    RunConfig config;
    try {
        config = preload_config(argc, argv);
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
    std::string pca_dims_text;

    CLI::App* synth = app.add_subcommand("synth", "generate a synthetic dataset");
    synth->add_option("--ids", config.synth_ids, "number of identities");
    synth->add_option("--views", config.synth_views, "number of camera views");
    std::string synth_pca;
    add_common_flags(synth, config, synth_pca);

    CLI::App* train = app.add_subcommand("train", "learn a metric from a manifest");
    add_common_flags(train, config, pca_dims_text);

    CLI::App* eval = app.add_subcommand("eval", "evaluate a model, averaged CMC");
    eval->add_option("--model", config.model_path, "model file from train");
    add_common_flags(eval, config, pca_dims_text);

    CLI::App* rank = app.add_subcommand("rank", "rank a gallery for one probe image");
    std::string probe_path;
    rank->add_option("--model", config.model_path, "model file from train");
    rank->add_option("--probe", probe_path, "probe image path")->required();
    add_common_flags(rank, config, pca_dims_text);

    CLI::App* selfcheck =
        app.add_subcommand("selfcheck", "run the built-in numerical oracles");
    selfcheck->add_option("--seed", config.seed, "oracle seed");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        if (e.get_name() == "CallForHelp" || e.get_name() == "CallForAllHelp")
            return app.exit(e);
        std::cerr << app.help() << "\n";
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    }

    if (app.get_subcommands().empty()) {
        std::cerr << app.help() << "\n";
        return 2;
    }

    try {
        if (!pca_dims_text.empty()) config.pca_dims = parse_pca_dims(pca_dims_text);
        if (synth->parsed()) return run_synth(config);
        if (train->parsed()) return run_train(config);
        if (eval->parsed()) return run_eval(config);
        if (rank->parsed()) return run_rank(config, probe_path);
        if (selfcheck->parsed()) return run_selfcheck(config.seed) ? 0 : 1;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
    return 0;
}
