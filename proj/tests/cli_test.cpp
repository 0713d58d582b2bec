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

#include <doctest.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>

#include "reidmstc/model_io.hpp"

using namespace reid;
namespace fs = std::filesystem;

namespace {

fs::path fresh_dir(const std::string& name) {
    const fs::path dir = fs::temp_directory_path() / ("reidmstc_test_cli_" + name);
    fs::remove_all(dir);
    fs::create_directories(dir);
    return dir;
}

int run_cli(const std::string& args) {
    const std::string command =
        std::string(REIDMSTC_CLI_PATH) + " " + args + " > /dev/null 2>&1";
    const int status = std::system(command.c_str());
    return WEXITSTATUS(status);
}

struct SmokeData {
    fs::path data;
    std::string manifest;
};

SmokeData make_dataset(const std::string& tag, int ids) {
    SmokeData smoke;
    smoke.data = fresh_dir(tag);
    REQUIRE(run_cli("synth --ids " + std::to_string(ids) + " --views 2 --seed 11 --out " +
                    smoke.data.string()) == 0);
    smoke.manifest = (smoke.data / "manifest.json").string();
    return smoke;
}

}  // namespace

TEST_SUITE("cli") {

TEST_CASE("no arguments and unknown subcommands exit with usage code 2") {
    CHECK(run_cli("") == 2);
    CHECK(run_cli("frobnicate") == 2);
}

TEST_CASE("train with max-iters 0 saves the zero model and exits 0") {
    const SmokeData smoke = make_dataset("zero_train", 4);
    const fs::path out = fresh_dir("zero_train_out");
    REQUIRE(run_cli("train --manifest " + smoke.manifest + " --seed 11 --max-iters 0" +
                    " --pca-dims 6:6:6 --out " + out.string()) == 0);
    const ModelBundle bundle = load_model((out / "model.mstc").string());
    CHECK(bundle.metric.frobenius_norm() == 0.0);
}

TEST_CASE("config file values apply and flags override them") {
    const SmokeData smoke = make_dataset("precedence", 4);
    const fs::path out_file = fresh_dir("precedence_out_file");
    const fs::path out_flag = fresh_dir("precedence_out_flag");

    const fs::path cfg = out_file / "run.cfg";
    {
        std::ofstream config(cfg);
        config << "manifest = " << smoke.manifest << "\n"
               << "seed = 11\n"
               << "max_iters = 0\n"
               << "pca_dims = 6:6:6\n"
               << "out = " << out_file.string() << "\n";
    }

    // config file alone: writes into out_file with zero iterations
    REQUIRE(run_cli("train --config " + cfg.string()) == 0);
    CHECK(fs::exists(out_file / "model.mstc"));

    // a flag overrides the config-file output directory and iteration count
    REQUIRE(run_cli("train --config " + cfg.string() + " --out " + out_flag.string() +
                    " --max-iters 3") == 0);
    REQUIRE(fs::exists(out_flag / "model.mstc"));
    const ModelBundle bundle = load_model((out_flag / "model.mstc").string());
    CHECK(bundle.metric.frobenius_norm() > 0.0);  // three iterations moved the model
}

TEST_CASE("eval emits a trial-averaged report") {
    const SmokeData smoke = make_dataset("eval_report", 6);
    const fs::path out = fresh_dir("eval_report_out");
    REQUIRE(run_cli("train --manifest " + smoke.manifest +
                    " --seed 11 --max-iters 10 --pca-dims 6:6:6 --out " +
                    out.string()) == 0);
    REQUIRE(run_cli("eval --model " + (out / "model.mstc").string() + " --manifest " +
                    smoke.manifest + " --seed 11 --trials 3 --pca-dims 6:6:6 --out " +
                    out.string()) == 0);
    REQUIRE(fs::exists(out / "cmc.csv"));
    std::ifstream in(out / "cmc.csv");
    std::string header;
    std::getline(in, header);
    CHECK(header == "rank,rate");
    int rows = 0;
    for (std::string line; std::getline(in, line);)
        if (!line.empty()) ++rows;
    CHECK(rows == 3);  // three test identities per trial
}

TEST_CASE("feature cache round trips through train") {
    const SmokeData smoke = make_dataset("cache", 4);
    const fs::path out_a = fresh_dir("cache_a");
    const fs::path out_b = fresh_dir("cache_b");
    const std::string cache = (smoke.data / "features.srrf").string();
    const std::string common = " --manifest " + smoke.manifest +
                               " --seed 11 --max-iters 5 --pca-dims 6:6:6"
                               " --feature-cache " + cache;
    REQUIRE(run_cli("train --out " + out_a.string() + common) == 0);
    REQUIRE(fs::exists(cache));
    // second run reads the cache and must produce the identical model
    REQUIRE(run_cli("train --out " + out_b.string() + common) == 0);
    std::ifstream a(out_a / "model.mstc", std::ios::binary);
    std::ifstream b(out_b / "model.mstc", std::ios::binary);
    const std::string bytes_a((std::istreambuf_iterator<char>(a)),
                              std::istreambuf_iterator<char>());
    const std::string bytes_b((std::istreambuf_iterator<char>(b)),
                              std::istreambuf_iterator<char>());
    CHECK(bytes_a == bytes_b);
}

TEST_CASE("rank lists the gallery by descending score") {
    const SmokeData smoke = make_dataset("rank", 5);
    const fs::path out = fresh_dir("rank_out");
    REQUIRE(run_cli("train --manifest " + smoke.manifest +
                    " --seed 11 --max-iters 60 --pca-dims 8:8:8 --out " +
                    out.string()) == 0);

    const fs::path listing = out / "ranking.csv";
    const std::string command =
        std::string(REIDMSTC_CLI_PATH) + " rank --model " +
        (out / "model.mstc").string() + " --manifest " + smoke.manifest +
        " --probe " + (smoke.data / "id0002_cam0.png").string() + " > " +
        listing.string() + " 2> /dev/null";
    REQUIRE(WEXITSTATUS(std::system(command.c_str())) == 0);

    std::ifstream in(listing);
    std::string header, first;
    std::getline(in, header);
    std::getline(in, first);
    CHECK(header == "rank,gallery_index,person_id,camera_id,score,path");
    // the probe's identity must come out on top (either of its two views;
    // the learned cross-view blocks can score the other view above the
    // probe image itself)
    CHECK(first.find("id0002_cam") != std::string::npos);

    double previous = 1e300;
    int rows = 0;
    std::string line = first;
    do {
        std::size_t field = 0;
        for (int comma = 0; comma < 4; ++comma) field = line.find(',', field) + 1;
        const double score = std::stod(line.substr(field));
        REQUIRE(score <= previous);
        previous = score;
        ++rows;
    } while (std::getline(in, line) && !line.empty());
    CHECK(rows == 10);  // five identities, two views
}

TEST_CASE("train writes the convergence report next to the model") {
    const SmokeData smoke = make_dataset("trace_files", 4);
    const fs::path out = fresh_dir("trace_files_out");
    REQUIRE(run_cli("train --manifest " + smoke.manifest +
                    " --seed 11 --max-iters 5 --pca-dims 6:6:6 --out " +
                    out.string()) == 0);
    CHECK(fs::exists(out / "convergence.csv"));
    CHECK(fs::exists(out / "convergence.svg"));
    std::ifstream in(out / "convergence.csv");
    std::string header;
    std::getline(in, header);
    CHECK(header ==
          "iteration,objective,l1,l2,regularizer,primal_residual,dual_residual");
    int rows = 0;
    for (std::string line; std::getline(in, line);)
        if (!line.empty()) ++rows;
    CHECK(rows == 6);  // initialization row plus five iterations
}

TEST_CASE("selfcheck passes") {
    CHECK(run_cli("selfcheck --seed 321") == 0);
}

}  // TEST_SUITE
