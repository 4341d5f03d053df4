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

// Configuration-driven experiment runs behind the command line tool.

#ifndef QSNN_EXPERIMENT_H
#define QSNN_EXPERIMENT_H

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "qsnn/circuitry.h"
#include "qsnn/datasets.h"
#include "qsnn/models.h"
#include "qsnn/optimizer.h"
#include "qsnn/sampler.h"

namespace qsnn {

struct ModelConfig {
    std::string kind = "shallow";  // shallow | hopfield | rbm | autoencoder | cnn
    std::uint32_t inputs = 0;      // 0: taken from the dataset
    std::uint32_t outputs = 0;     // 0: taken from the dataset
    std::vector<std::uint32_t> hidden;
    std::uint32_t units = 0;       // hopfield; 0: taken from the dataset
    std::uint32_t latent = 2;      // rbm / autoencoder
    std::uint32_t height = 3;      // cnn
    std::uint32_t width = 3;
    KernelShape kernel;
    std::uint32_t stride = 1;
};

struct DatasetConfig {
    /// uci | mnist | bars-and-stripes | stripes | truth-table
    std::string source = "uci";
    std::string task = "classification";  // or reconstruction: targets equal inputs
    // uci
    std::string name = "iris";
    std::string data_dir = "data";
    double train_fraction = 0.8;
    std::uint32_t clusters = 3;
    std::vector<FeatureEncoding> features;
    // mnist
    std::string images;
    std::string labels;
    MnistOptions mnist;
    // bars-and-stripes
    std::uint32_t side = 3;
    StripeRule rule = StripeRule::SingleLine;
    // stripes (Hopfield memories)
    std::uint32_t rows = 3;
    std::vector<Bits> stripes{{1, 0, 1}, {0, 1, 0}};
    bool corrupted = true;
    // truth-table: xor | one-dot
    std::string table = "xor";
};

struct HopfieldConfig {
    std::uint32_t max_iters = 5;
    RecallMode mode = RecallMode::Sample;
    std::uint32_t runs = 100;
};

struct GroverConfig {
    std::uint32_t iterations = 1;
    std::uint64_t shots = 4096;
    std::size_t marked_output = 0;
    std::string model;  // optional model file; trained from the config when empty
};

struct ExperimentConfig {
    std::string name = "experiment";
    ModelConfig model;
    DatasetConfig dataset;
    KWSchedule kw;
    AnnealSchedule anneal;
    TrainConfig train;
    std::vector<std::uint64_t> seeds{0};
    EvalOptions eval;
    std::string output_dir = "runs";
    HopfieldConfig hopfield;
    GroverConfig grover;
    /// Relative paths in the document resolve against this directory.
    std::string base_dir = ".";

    std::string resolve(const std::string &path) const;
};

/// Validates the whole document before returning; throws ValidationError listing every
/// offending field.
ExperimentConfig parse_config(const std::string &text, const std::string &base_dir = ".");
ExperimentConfig load_config(const std::string &path);

/// Every field, defaults included.
std::string resolved_config_json(const ExperimentConfig &config);

struct PreparedData {
    EncodedDataset data;
    bool reconstruction = false;
};

/// Loads and encodes the configured dataset; randomness derives from `seed`.
PreparedData prepare_data(const ExperimentConfig &config, std::uint64_t seed);
NetworkTopology build_model(const ExperimentConfig &config, const PreparedData &data);

struct SplitMetrics {
    double loss = 0.0;
    double accuracy = 0.0;          // classification only
    double mse = 0.0;               // per output bit
    std::vector<std::vector<std::uint64_t>> confusion;  // [true][predicted]
};

SplitMetrics evaluate_split(const NetworkTopology &topology, const ParameterTable &params,
                            const Dataset &data, std::size_t classes, const EvalOptions &eval);

struct SeedRun {
    std::uint64_t seed = 0;
    std::optional<NetworkTopology> topology;
    bool reconstruction = false;
    TrainResult result;
    SplitMetrics train;
    SplitMetrics test;
};

struct TrainReport {
    std::vector<SeedRun> runs;
    bool reconstruction = false;

    /// Test accuracy (classification) or test MSE (reconstruction) per seed.
    std::vector<double> test_scores() const;
    std::string metrics_json(const ExperimentConfig &config) const;
};

/// Trains one seed without touching the disk.
SeedRun train_seed(const ExperimentConfig &config, std::uint64_t seed);

struct RunOptions {
    std::optional<std::string> out_dir;
    std::optional<std::uint64_t> seed;      // runs a single seed instead of the configured list
    std::optional<Backend> backend;
};

/// Applies the overrides in `options` to `config`.
ExperimentConfig apply_overrides(ExperimentConfig config, const RunOptions &options);

/// Writes resolved-config.json, model-seed<S>.json, trace-seed<S>.csv and metrics.json.
TrainReport run_train(const ExperimentConfig &config);

/// Metrics JSON for a stored model on the configured dataset (train and test splits).
std::string run_eval(const std::string &model_path, const ExperimentConfig &config);

/// Writes trajectories.csv and recall-summary.csv for every stored pattern and every
/// one-bit corruption; returns the summary CSV.
std::string run_hopfield(const ExperimentConfig &config);

/// Writes histogram.csv; returns it.
std::string run_grover(const ExperimentConfig &config);

/// Writes train.csv, test.csv and encoder.json.
void run_encode(const ExperimentConfig &config);

double mean(const std::vector<double> &values);
/// Sample standard deviation (n - 1 denominator), 0 for fewer than two values.
double stddev(const std::vector<double> &values);

}  // namespace qsnn

#endif  // QSNN_EXPERIMENT_H
