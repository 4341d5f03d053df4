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

// Data ingestion and binary encodings: per-dimension 1-D k-means one-hot codes for tabular
// data, pooled and thresholded MNIST digits, and the bars-and-stripes patterns.

#ifndef QSNN_DATASETS_H
#define QSNN_DATASETS_H

#include <cstdint>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "qsnn/types.h"

namespace qsnn {

/// Lloyd's algorithm on scalars: k-means++ seeding, at most 100 rounds, stops at an
/// assignment fixpoint. Empty clusters are reseeded to the point farthest from its center.
/// Centers are returned in ascending order.
std::vector<double> kmeans_1d(std::span<const double> values, std::uint32_t k, Rng &rng);

/// Index of the nearest center, ties to the lower index.
std::size_t nearest_center(std::span<const double> centers, double value);

/// Within-cluster sum of squared distances to the nearest center.
double clustering_sse(std::span<const double> values, std::span<const double> centers);

struct RawTable {
    std::vector<std::string> feature_names;
    std::vector<std::vector<double>> rows;
    std::vector<int> labels;
    std::vector<std::string> class_names;  // sorted; labels index into this

    std::size_t column_of(const std::string &feature) const;
    std::vector<double> column(std::size_t index) const;
    RawTable subset(std::span<const std::size_t> rows) const;
};

/// Numeric CSV with a header row and the class name in the last column.
RawTable read_csv_table(const std::string &path);

struct RawSplit {
    RawTable train;
    RawTable test;
};

/// Per class, round(fraction * count) rows go to training; both parts are shuffled.
RawSplit stratified_split(const RawTable &table, double train_fraction, Rng &rng);

/// `name` is one of iris, wine, zoo; reads `<data_dir>/<name>.csv`.
RawSplit load_uci(const std::string &name, const std::string &data_dir, double train_fraction,
                  Rng &rng);

struct FeatureEncoding {
    std::string feature;
    std::uint32_t clusters = 3;
    bool identity = false;  // already boolean: one bit, value > 0.5
};

struct DimensionCode {
    std::string feature;
    std::size_t column = 0;
    bool identity = false;
    std::vector<double> centers;  // empty for identity dimensions

    std::size_t width() const { return identity ? 1 : centers.size(); }
};

struct EncoderSpec {
    std::vector<DimensionCode> dims;

    std::size_t num_bits() const;
    /// Concatenated per-dimension codes for one raw row (all table columns).
    Bits encode(std::span<const double> raw) const;
};

/// Fits centers on `train` only. An empty feature list means every column with
/// `default_clusters` clusters.
EncoderSpec fit_encoder(const RawTable &train, const std::vector<FeatureEncoding> &features,
                        std::uint32_t default_clusters, Rng &rng);

Bits one_hot(int label, std::size_t classes);

struct EncodedDataset {
    Dataset train;
    Dataset test;
    EncoderSpec encoder;
    std::vector<std::string> class_names;

    std::size_t num_inputs() const { return train.empty() ? 0 : train.front().input.size(); }
    std::size_t num_classes() const { return class_names.size(); }
};

Dataset encode_table(const RawTable &table, const EncoderSpec &encoder);
EncodedDataset encode_split(const RawSplit &split, const std::vector<FeatureEncoding> &features,
                            std::uint32_t default_clusters, Rng &rng);

enum class StripeRule {
    SingleLine,  // blank, full, and exactly one full row or one full column: 2n + 2 patterns
    AllLines,    // every row constant or every column constant: 2^(n+1) - 2 patterns
};

/// Positive patterns under `rule` (blank and full counted once) and the negatives, the rest
/// of {0,1}^(n*n). Bit r * n + c is cell (r, c).
std::pair<std::vector<Bits>, std::vector<Bits>> bars_and_stripes(
    std::uint32_t n, StripeRule rule = StripeRule::SingleLine);

/// All 2^(n*n) patterns labelled 1 (positive) or 0, with a one-bit target.
Dataset bars_and_stripes_dataset(std::uint32_t n, StripeRule rule = StripeRule::SingleLine);

struct IdxImages {
    std::uint32_t rows = 0;
    std::uint32_t cols = 0;
    std::vector<std::vector<std::uint8_t>> images;
};

/// gzip-compressed or plain IDX files. Throws IoError naming the path.
IdxImages read_idx_images(const std::string &path);
std::vector<std::uint8_t> read_idx_labels(const std::string &path);

/// Mean-pools the central (grid * block)^2 crop into grid x grid blocks and sets the
/// blocks brighter than the pooled mean.
Bits pool_and_binarize(std::span<const std::uint8_t> image, std::uint32_t rows,
                       std::uint32_t cols, std::uint32_t grid = 5, std::uint32_t block = 5);

struct MnistOptions {
    std::vector<int> classes{0, 1, 2, 3, 4};
    std::size_t train = 4500;
    std::size_t test = 500;
    std::uint32_t grid = 5;
    std::uint32_t block = 5;
};

EncodedDataset mnist_prepare(const std::string &images_path, const std::string &labels_path,
                             const MnistOptions &options, Rng &rng);

}  // namespace qsnn

#endif  // QSNN_DATASETS_H
