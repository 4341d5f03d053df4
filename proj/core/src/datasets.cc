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

#include "qsnn/datasets.h"

#include <zlib.h>

#include <algorithm>
#include <bit>
#include <cmath>
#include <fstream>
#include <map>
#include <numeric>
#include <set>
#include <sstream>

#include "qsnn/errors.h"

namespace qsnn {

namespace {

constexpr int kMaxLloydRounds = 100;
constexpr int kKMeansRestarts = 10;

std::vector<std::string> split_fields(const std::string &line) {
    std::vector<std::string> out;
    std::stringstream ss(line);
    std::string field;
    while (std::getline(ss, field, ',')) {
        while (!field.empty() && (field.back() == '\r' || field.back() == ' ')) {
            field.pop_back();
        }
        out.push_back(field);
    }
    return out;
}

std::vector<std::uint8_t> read_gz(const std::string &path) {
    gzFile file = gzopen(path.c_str(), "rb");
    if (file == nullptr) {
        throw IoError("cannot open " + path);
    }
    std::vector<std::uint8_t> out;
    std::uint8_t buf[1 << 16];
    int n = 0;
    while ((n = gzread(file, buf, sizeof(buf))) > 0) {
        out.insert(out.end(), buf, buf + n);
    }
    gzclose(file);
    if (n < 0) {
        throw IoError("corrupt data in " + path);
    }
    return out;
}

std::uint32_t big_endian(const std::vector<std::uint8_t> &bytes, std::size_t at) {
    return (std::uint32_t{bytes[at]} << 24) | (std::uint32_t{bytes[at + 1]} << 16) |
           (std::uint32_t{bytes[at + 2]} << 8) | std::uint32_t{bytes[at + 3]};
}

}  // namespace

std::size_t nearest_center(std::span<const double> centers, double value) {
    require(!centers.empty(), "no centers");
    std::size_t best = 0;
    double best_d = std::abs(value - centers[0]);
    for (std::size_t i = 1; i < centers.size(); ++i) {
        const double d = std::abs(value - centers[i]);
        if (d < best_d) {
            best = i;
            best_d = d;
        }
    }
    return best;
}

double clustering_sse(std::span<const double> values, std::span<const double> centers) {
    double sse = 0.0;
    for (double v : values) {
        const double d = v - centers[nearest_center(centers, v)];
        sse += d * d;
    }
    return sse;
}

namespace {

std::vector<double> lloyd_from_seeding(std::span<const double> values, std::uint32_t k, Rng &rng) {
    // k-means++ seeding.
    std::vector<double> centers{values[uniform_index(rng, values.size())]};
    std::vector<double> dist(values.size());
    while (centers.size() < k) {
        double total = 0.0;
        for (std::size_t i = 0; i < values.size(); ++i) {
            const double d = values[i] - centers[nearest_center(centers, values[i])];
            dist[i] = d * d;
            total += dist[i];
        }
        if (total == 0.0) {
            centers.push_back(values[uniform_index(rng, values.size())]);
            continue;
        }
        double u = uniform01(rng) * total;
        std::size_t pick = values.size() - 1;
        for (std::size_t i = 0; i < values.size(); ++i) {
            u -= dist[i];
            if (u < 0) {
                pick = i;
                break;
            }
        }
        centers.push_back(values[pick]);
    }
    std::sort(centers.begin(), centers.end());

    std::vector<std::size_t> assign(values.size(), k);
    for (int round = 0; round < kMaxLloydRounds; ++round) {
        bool changed = false;
        for (std::size_t i = 0; i < values.size(); ++i) {
            const std::size_t c = nearest_center(centers, values[i]);
            changed |= c != assign[i];
            assign[i] = c;
        }
        if (!changed) {
            break;
        }
        std::vector<double> sum(k, 0.0);
        std::vector<std::size_t> count(k, 0);
        for (std::size_t i = 0; i < values.size(); ++i) {
            sum[assign[i]] += values[i];
            ++count[assign[i]];
        }
        for (std::uint32_t c = 0; c < k; ++c) {
            if (count[c] > 0) {
                centers[c] = sum[c] / static_cast<double>(count[c]);
                continue;
            }
            std::size_t far = 0;
            double far_d = -1.0;
            for (std::size_t i = 0; i < values.size(); ++i) {
                const double d = std::abs(values[i] - centers[assign[i]]);
                if (d > far_d) {
                    far = i;
                    far_d = d;
                }
            }
            centers[c] = values[far];
        }
        std::vector<double> sorted = centers;
        std::sort(sorted.begin(), sorted.end());
        if (sorted != centers) {
            centers = std::move(sorted);
            std::fill(assign.begin(), assign.end(), k);
        }
    }
    return centers;
}

}  // namespace

std::vector<double> kmeans_1d(std::span<const double> values, std::uint32_t k, Rng &rng) {
    require(k >= 1, "k must be at least 1");
    require(values.size() >= k, "fewer points than clusters");
    std::vector<double> best;
    double best_sse = 0.0;
    for (int restart = 0; restart < kKMeansRestarts; ++restart) {
        auto centers = lloyd_from_seeding(values, k, rng);
        const double sse = clustering_sse(values, centers);
        if (best.empty() || sse < best_sse) {
            best = std::move(centers);
            best_sse = sse;
        }
    }
    return best;
}

std::size_t RawTable::column_of(const std::string &feature) const {
    const auto it = std::find(feature_names.begin(), feature_names.end(), feature);
    require(it != feature_names.end(), "unknown feature '" + feature + "'");
    return static_cast<std::size_t>(it - feature_names.begin());
}

std::vector<double> RawTable::column(std::size_t index) const {
    std::vector<double> out;
    out.reserve(rows.size());
    for (const auto &r : rows) {
        out.push_back(r.at(index));
    }
    return out;
}

RawTable RawTable::subset(std::span<const std::size_t> picks) const {
    RawTable out;
    out.feature_names = feature_names;
    out.class_names = class_names;
    for (auto i : picks) {
        out.rows.push_back(rows.at(i));
        out.labels.push_back(labels.at(i));
    }
    return out;
}

RawTable read_csv_table(const std::string &path) {
    std::ifstream in(path);
    if (!in) {
        throw IoError("cannot open " + path);
    }
    std::string line;
    if (!std::getline(in, line)) {
        throw IoError("empty file " + path);
    }
    RawTable table;
    table.feature_names = split_fields(line);
    if (table.feature_names.size() < 2) {
        throw IoError("expected features and a class column in " + path);
    }
    table.feature_names.pop_back();
    const std::size_t width = table.feature_names.size();

    std::vector<std::string> names;
    std::size_t line_no = 1;
    while (std::getline(in, line)) {
        ++line_no;
        if (line.empty() || line == "\r") {
            continue;
        }
        auto fields = split_fields(line);
        if (fields.size() != width + 1) {
            throw IoError(path + ":" + std::to_string(line_no) + ": expected " +
                          std::to_string(width + 1) + " fields");
        }
        std::vector<double> row;
        for (std::size_t i = 0; i < width; ++i) {
            try {
                row.push_back(std::stod(fields[i]));
            } catch (const std::exception &) {
                throw IoError(path + ":" + std::to_string(line_no) + ": not a number: " +
                              fields[i]);
            }
        }
        table.rows.push_back(std::move(row));
        names.push_back(fields.back());
    }
    std::set<std::string> unique(names.begin(), names.end());
    table.class_names.assign(unique.begin(), unique.end());
    for (const auto &n : names) {
        table.labels.push_back(static_cast<int>(
            std::lower_bound(table.class_names.begin(), table.class_names.end(), n) -
            table.class_names.begin()));
    }
    return table;
}

RawSplit stratified_split(const RawTable &table, double train_fraction, Rng &rng) {
    require(train_fraction > 0.0 && train_fraction < 1.0, "train fraction must lie in (0, 1)");
    std::map<int, std::vector<std::size_t>> by_class;
    for (std::size_t i = 0; i < table.rows.size(); ++i) {
        by_class[table.labels[i]].push_back(i);
    }
    std::vector<std::size_t> train;
    std::vector<std::size_t> test;
    for (auto &[label, rows] : by_class) {
        shuffle(rows, rng);
        const auto take = static_cast<std::size_t>(
            std::llround(train_fraction * static_cast<double>(rows.size())));
        train.insert(train.end(), rows.begin(), rows.begin() + static_cast<std::ptrdiff_t>(take));
        test.insert(test.end(), rows.begin() + static_cast<std::ptrdiff_t>(take), rows.end());
    }
    shuffle(train, rng);
    shuffle(test, rng);
    return RawSplit{table.subset(train), table.subset(test)};
}

RawSplit load_uci(const std::string &name, const std::string &data_dir, double train_fraction,
                  Rng &rng) {
    require(name == "iris" || name == "wine" || name == "zoo",
            "unknown dataset '" + name + "' (expected iris, wine or zoo)");
    return stratified_split(read_csv_table(data_dir + "/" + name + ".csv"), train_fraction, rng);
}

std::size_t EncoderSpec::num_bits() const {
    std::size_t n = 0;
    for (const auto &d : dims) {
        n += d.width();
    }
    return n;
}

Bits EncoderSpec::encode(std::span<const double> raw) const {
    Bits out;
    out.reserve(num_bits());
    for (const auto &d : dims) {
        require(d.column < raw.size(), "row is too short for feature '" + d.feature + "'");
        const double v = raw[d.column];
        if (d.identity) {
            out.push_back(v > 0.5 ? 1 : 0);
            continue;
        }
        const std::size_t hit = nearest_center(d.centers, v);
        for (std::size_t c = 0; c < d.centers.size(); ++c) {
            out.push_back(c == hit ? 1 : 0);
        }
    }
    return out;
}

EncoderSpec fit_encoder(const RawTable &train, const std::vector<FeatureEncoding> &features,
                        std::uint32_t default_clusters, Rng &rng) {
    std::vector<FeatureEncoding> plan = features;
    if (plan.empty()) {
        for (const auto &name : train.feature_names) {
            plan.push_back(FeatureEncoding{name, default_clusters, false});
        }
    }
    EncoderSpec spec;
    for (const auto &f : plan) {
        DimensionCode d;
        d.feature = f.feature;
        d.column = train.column_of(f.feature);
        d.identity = f.identity;
        if (!f.identity) {
            const auto values = train.column(d.column);
            d.centers = kmeans_1d(values, f.clusters, rng);
        }
        spec.dims.push_back(std::move(d));
    }
    return spec;
}

Bits one_hot(int label, std::size_t classes) {
    require(label >= 0 && static_cast<std::size_t>(label) < classes, "label out of range");
    Bits out(classes, 0);
    out[static_cast<std::size_t>(label)] = 1;
    return out;
}

Dataset encode_table(const RawTable &table, const EncoderSpec &encoder) {
    Dataset out;
    out.reserve(table.rows.size());
    for (std::size_t i = 0; i < table.rows.size(); ++i) {
        out.push_back(Sample{encoder.encode(table.rows[i]),
                             one_hot(table.labels[i], table.class_names.size()), table.labels[i]});
    }
    return out;
}

EncodedDataset encode_split(const RawSplit &split, const std::vector<FeatureEncoding> &features,
                            std::uint32_t default_clusters, Rng &rng) {
    EncodedDataset out;
    out.encoder = fit_encoder(split.train, features, default_clusters, rng);
    out.train = encode_table(split.train, out.encoder);
    out.test = encode_table(split.test, out.encoder);
    out.class_names = split.train.class_names;
    return out;
}

std::pair<std::vector<Bits>, std::vector<Bits>> bars_and_stripes(std::uint32_t n,
                                                                 StripeRule rule) {
    require(n >= 2, "bars and stripes needs a side of at least 2");
    require(n <= 5, "bars and stripes side too large to enumerate");
    const std::size_t cells = static_cast<std::size_t>(n) * n;
    std::set<std::uint64_t> positive;
    for (std::uint64_t mask = 0; mask < (std::uint64_t{1} << n); ++mask) {
        const int lines = std::popcount(mask);
        if (rule == StripeRule::SingleLine && lines > 1 && mask + 1 != (std::uint64_t{1} << n)) {
            continue;
        }
        std::uint64_t rows = 0;
        std::uint64_t cols = 0;
        for (std::uint32_t r = 0; r < n; ++r) {
            for (std::uint32_t c = 0; c < n; ++c) {
                const std::uint64_t bit = std::uint64_t{1} << (r * n + c);
                rows |= ((mask >> r) & 1) ? bit : 0;
                cols |= ((mask >> c) & 1) ? bit : 0;
            }
        }
        positive.insert(rows);
        positive.insert(cols);
    }
    std::vector<Bits> pos;
    std::vector<Bits> neg;
    for (std::uint64_t x = 0; x < (std::uint64_t{1} << cells); ++x) {
        (positive.count(x) ? pos : neg).push_back(index_to_bits(x, cells));
    }
    return {pos, neg};
}

Dataset bars_and_stripes_dataset(std::uint32_t n, StripeRule rule) {
    const auto [pos, neg] = bars_and_stripes(n, rule);
    std::set<Bits> positive(pos.begin(), pos.end());
    Dataset out;
    const std::size_t cells = static_cast<std::size_t>(n) * n;
    for (std::uint64_t x = 0; x < (std::uint64_t{1} << cells); ++x) {
        Bits bits = index_to_bits(x, cells);
        const int label = positive.count(bits) ? 1 : 0;
        out.push_back(Sample{std::move(bits), Bits{static_cast<std::uint8_t>(label)}, label});
    }
    return out;
}

IdxImages read_idx_images(const std::string &path) {
    const auto bytes = read_gz(path);
    if (bytes.size() < 16 || big_endian(bytes, 0) != 0x00000803) {
        throw IoError("not an IDX image file: " + path);
    }
    IdxImages out;
    const std::uint32_t count = big_endian(bytes, 4);
    out.rows = big_endian(bytes, 8);
    out.cols = big_endian(bytes, 12);
    const std::size_t size = static_cast<std::size_t>(out.rows) * out.cols;
    if (bytes.size() != 16 + size * count) {
        throw IoError("truncated IDX image file: " + path);
    }
    out.images.reserve(count);
    for (std::uint32_t i = 0; i < count; ++i) {
        const auto begin = bytes.begin() + static_cast<std::ptrdiff_t>(16 + i * size);
        out.images.emplace_back(begin, begin + static_cast<std::ptrdiff_t>(size));
    }
    return out;
}

std::vector<std::uint8_t> read_idx_labels(const std::string &path) {
    const auto bytes = read_gz(path);
    if (bytes.size() < 8 || big_endian(bytes, 0) != 0x00000801) {
        throw IoError("not an IDX label file: " + path);
    }
    const std::uint32_t count = big_endian(bytes, 4);
    if (bytes.size() != 8 + std::size_t{count}) {
        throw IoError("truncated IDX label file: " + path);
    }
    return {bytes.begin() + 8, bytes.end()};
}

Bits pool_and_binarize(std::span<const std::uint8_t> image, std::uint32_t rows,
                       std::uint32_t cols, std::uint32_t grid, std::uint32_t block) {
    const std::uint32_t crop = grid * block;
    require(grid >= 1 && block >= 1, "grid and block must be positive");
    require(crop <= rows && crop <= cols, "pooling crop exceeds the image");
    require(image.size() == static_cast<std::size_t>(rows) * cols, "image size mismatch");
    const std::uint32_t top = (rows - crop) / 2;
    const std::uint32_t left = (cols - crop) / 2;
    std::vector<double> pooled(static_cast<std::size_t>(grid) * grid, 0.0);
    for (std::uint32_t r = 0; r < crop; ++r) {
        for (std::uint32_t c = 0; c < crop; ++c) {
            pooled[(r / block) * grid + c / block] += image[(top + r) * cols + left + c];
        }
    }
    for (auto &v : pooled) {
        v /= static_cast<double>(block) * block;
    }
    const double mean = std::accumulate(pooled.begin(), pooled.end(), 0.0) /
                        static_cast<double>(pooled.size());
    Bits out(pooled.size());
    for (std::size_t i = 0; i < pooled.size(); ++i) {
        out[i] = pooled[i] > mean ? 1 : 0;
    }
    return out;
}

EncodedDataset mnist_prepare(const std::string &images_path, const std::string &labels_path,
                             const MnistOptions &options, Rng &rng) {
    require(!options.classes.empty(), "no digit classes selected");
    const auto images = read_idx_images(images_path);
    const auto labels = read_idx_labels(labels_path);
    if (images.images.size() != labels.size()) {
        throw IoError("image and label counts differ: " + images_path + ", " + labels_path);
    }
    std::vector<std::size_t> pool;
    std::vector<int> class_of(256, -1);
    for (std::size_t c = 0; c < options.classes.size(); ++c) {
        const int digit = options.classes[c];
        require(digit >= 0 && digit <= 255, "digit class out of range");
        class_of[static_cast<std::size_t>(digit)] = static_cast<int>(c);
    }
    for (std::size_t i = 0; i < labels.size(); ++i) {
        if (class_of[labels[i]] >= 0) {
            pool.push_back(i);
        }
    }
    if (pool.size() < options.train + options.test) {
        throw IoError("only " + std::to_string(pool.size()) + " images of the selected classes in " +
                      images_path);
    }
    shuffle(pool, rng);

    EncodedDataset out;
    for (int digit : options.classes) {
        out.class_names.push_back(std::to_string(digit));
    }
    for (std::size_t k = 0; k < options.train + options.test; ++k) {
        const std::size_t i = pool[k];
        const int label = class_of[labels[i]];
        Sample s{pool_and_binarize(images.images[i], images.rows, images.cols, options.grid,
                                   options.block),
                 one_hot(label, options.classes.size()), label};
        (k < options.train ? out.train : out.test).push_back(std::move(s));
    }
    return out;
}

}  // namespace qsnn
