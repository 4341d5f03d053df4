// Copyright 2026 The qsnn Authors
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
#include <iostream>
#include <optional>
#include <string>

#include "CLI11.hpp"
#include "qsnn/errors.h"
#include "qsnn/experiment.h"

namespace {

struct CommonFlags {
    std::string config;
    std::optional<std::uint64_t> seed;
    std::optional<std::string> out;
    std::optional<std::string> backend;
};

void add_common(CLI::App *cmd, CommonFlags &flags) {
    cmd->add_option("--config", flags.config, "experiment configuration (JSON)")->required();
    cmd->add_option("--seed", flags.seed, "run this single seed instead of the configured list");
    cmd->add_option("--out", flags.out, "output directory");
    cmd->add_option("--backend", flags.backend, "statevector | exact-sampler | shots");
}

qsnn::ExperimentConfig resolve(const CommonFlags &flags) {
    qsnn::RunOptions options;
    options.seed = flags.seed;
    options.out_dir = flags.out;
    if (flags.backend) {
        options.backend = qsnn::parse_backend(*flags.backend);
    }
    return qsnn::apply_overrides(qsnn::load_config(flags.config), options);
}

}  // namespace

int main(int argc, char **argv) {
    CLI::App app{"Stochastic quantum neural networks: train, evaluate and sample."};
    app.require_subcommand(1);

    CommonFlags train_flags;
    auto *train = app.add_subcommand("train", "train a model over the configured seeds");
    add_common(train, train_flags);

    CommonFlags eval_flags;
    std::string model_path;
    auto *eval = app.add_subcommand("eval", "score a stored model on the configured dataset");
    add_common(eval, eval_flags);
    eval->add_option("--model", model_path, "model file (JSON)")->required();

    CommonFlags hopfield_flags;
    auto *hop = app.add_subcommand("hopfield", "train a Hopfield memory and record recall runs");
    add_common(hop, hopfield_flags);

    CommonFlags grover_flags;
    auto *grover = app.add_subcommand("grover", "sample inputs through the Grover construction");
    add_common(grover, grover_flags);

    CommonFlags encode_flags;
    auto *encode = app.add_subcommand("encode", "write the encoded dataset and encoder");
    add_common(encode, encode_flags);

    CLI11_PARSE(app, argc, argv);

    try {
        if (train->parsed()) {
            const auto config = resolve(train_flags);
            const auto report = qsnn::run_train(config);
            std::cout << report.metrics_json(config);
        } else if (eval->parsed()) {
            std::cout << qsnn::run_eval(model_path, resolve(eval_flags));
        } else if (hop->parsed()) {
            std::cout << qsnn::run_hopfield(resolve(hopfield_flags));
        } else if (grover->parsed()) {
            std::cout << qsnn::run_grover(resolve(grover_flags));
        } else if (encode->parsed()) {
            const auto config = resolve(encode_flags);
            qsnn::run_encode(config);
            std::cout << "wrote " << config.resolve(config.output_dir) << "\n";
        }
    } catch (const qsnn::ValidationError &e) {
        std::cerr << "invalid input:\n";
        for (const auto &f : e.fields()) {
            std::cerr << "  " << f << "\n";
        }
        return 2;
    } catch (const std::exception &e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
    return 0;
}
