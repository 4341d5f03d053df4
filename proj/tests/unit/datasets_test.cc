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

#include <gtest/gtest.h>

#include <algorithm>
#include <limits>
#include <map>
#include <set>

#include "qsnn/errors.h"

namespace qsnn {
namespace {

const std::string kData = QSNN_DATA_DIR;

// Optimal 1-D clustering SSE by dynamic programming over sorted values.
double optimal_sse(std::vector<double> v, std::uint32_t k) {
    std::sort(v.begin(), v.end());
    const std::size_t n = v.size();
    auto cost = [&](std::size_t i, std::size_t j) {  // [i, j)
        double m = 0;
        for (std::size_t t = i; t < j; ++t) m += v[t];
        m /= static_cast<double>(j - i);
        double s = 0;
        for (std::size_t t = i; t < j; ++t) s += (v[t] - m) * (v[t] - m);
        return s;
    };
    const double inf = std::numeric_limits<double>::infinity();
    std::vector<std::vector<double>> best(k + 1, std::vector<double>(n + 1, inf));
    best[0][0] = 0;
    for (std::uint32_t c = 1; c <= k; ++c) {
        for (std::size_t j = 1; j <= n; ++j) {
            for (std::size_t i = c - 1; i < j; ++i) {
                best[c][j] = std::min(best[c][j], best[c - 1][i] + cost(i, j));
            }
        }
    }
    return best[k][n];
}

TEST(KMeans, SeparatedClusters) {
    const std::vector<double> v{1.0, 1.1, 0.9, 5.0, 5.2, 4.8, 9.0, 9.1, 8.9};
    Rng rng(1);
    const auto centers = kmeans_1d(v, 3, rng);
    ASSERT_EQ(centers.size(), 3u);
    EXPECT_NEAR(centers[0], 1.0, 1e-12);
    EXPECT_NEAR(centers[1], 5.0, 1e-12);
    EXPECT_NEAR(centers[2], 9.0, 1e-12);
    EXPECT_EQ(nearest_center(centers, 2.9), 0u);
    EXPECT_EQ(nearest_center(centers, 3.0), 0u);  // tie goes to the lower center
    EXPECT_EQ(nearest_center(centers, 7.5), 2u);
}

TEST(KMeans, NearOptimalOnIrisColumns) {
    const auto table = read_csv_table(kData + "/iris.csv");
    for (std::size_t col = 0; col < table.feature_names.size(); ++col) {
        const auto v = table.column(col);
        Rng rng(col);
        const auto centers = kmeans_1d(v, 3, rng);
        EXPECT_TRUE(std::is_sorted(centers.begin(), centers.end()));
        EXPECT_LE(clustering_sse(v, centers), 1.05 * optimal_sse(v, 3) + 1e-9)
            << table.feature_names[col];
    }
}

TEST(KMeans, DegenerateInputs) {
    Rng rng(2);
    const std::vector<double> same(10, 3.0);
    const auto c = kmeans_1d(same, 2, rng);
    EXPECT_EQ(c.size(), 2u);
    EXPECT_THROW(kmeans_1d(std::vector<double>{1.0}, 2, rng), ContractViolation);
    EXPECT_THROW(kmeans_1d(std::vector<double>{1.0, 2.0}, 0, rng), ContractViolation);
}

TEST(Csv, Iris) {
    const auto t = read_csv_table(kData + "/iris.csv");
    EXPECT_EQ(t.rows.size(), 150u);
    EXPECT_EQ(t.feature_names.size(), 4u);
    EXPECT_EQ(t.class_names, (std::vector<std::string>{"setosa", "versicolor", "virginica"}));
    EXPECT_EQ(t.column_of("petal_width"), 3u);
    EXPECT_THROW(t.column_of("colour"), ContractViolation);
    EXPECT_THROW(read_csv_table(kData + "/missing.csv"), IoError);
}

TEST(Csv, WineAndZoo) {
    const auto wine = read_csv_table(kData + "/wine.csv");
    EXPECT_EQ(wine.rows.size(), 178u);
    EXPECT_EQ(wine.feature_names.size(), 13u);
    EXPECT_EQ(wine.class_names.size(), 3u);
    const auto zoo = read_csv_table(kData + "/zoo.csv");
    EXPECT_EQ(zoo.rows.size(), 101u);
    EXPECT_EQ(zoo.feature_names.size(), 16u);
    EXPECT_EQ(zoo.class_names.size(), 7u);
}

TEST(Split, StratifiedAndDisjoint) {
    const auto t = read_csv_table(kData + "/iris.csv");
    Rng rng(3);
    const auto s = stratified_split(t, 0.8, rng);
    EXPECT_EQ(s.train.rows.size(), 120u);
    EXPECT_EQ(s.test.rows.size(), 30u);
    std::map<int, int> per_class;
    for (int l : s.train.labels) ++per_class[l];
    for (const auto &[label, count] : per_class) EXPECT_EQ(count, 40) << label;
    // Every original row appears exactly once across the two halves.
    std::multiset<std::vector<double>> all(t.rows.begin(), t.rows.end());
    std::multiset<std::vector<double>> parts(s.train.rows.begin(), s.train.rows.end());
    parts.insert(s.test.rows.begin(), s.test.rows.end());
    EXPECT_EQ(all, parts);
    EXPECT_THROW(stratified_split(t, 1.0, rng), ContractViolation);
}

TEST(Split, SeedDeterminism) {
    Rng a(4);
    Rng b(4);
    const auto sa = load_uci("iris", kData, 0.8, a);
    const auto sb = load_uci("iris", kData, 0.8, b);
    EXPECT_EQ(sa.train.rows, sb.train.rows);
    EXPECT_EQ(sa.test.labels, sb.test.labels);
    EXPECT_THROW(load_uci("mushroom", kData, 0.8, a), ContractViolation);
}

TEST(Encoder, OneHotPerDimension) {
    const auto t = read_csv_table(kData + "/iris.csv");
    Rng rng(5);
    const auto split = stratified_split(t, 0.8, rng);
    const auto data = encode_split(split, {}, 3, rng);
    EXPECT_EQ(data.num_inputs(), 12u);
    EXPECT_EQ(data.num_classes(), 3u);
    EXPECT_EQ(data.train.size(), 120u);
    for (const auto &s : data.train) {
        for (std::size_t d = 0; d < 4; ++d) {
            int ones = 0;
            for (std::size_t c = 0; c < 3; ++c) ones += s.input[3 * d + c];
            EXPECT_EQ(ones, 1);
        }
        EXPECT_EQ(s.target, one_hot(s.label, 3));
    }
    // Codes follow the nearest centre.
    const auto &dim = data.encoder.dims[2];
    std::vector<double> row(4, 0.0);
    row[2] = dim.centers[1] + 1e-6;
    const Bits code = data.encoder.encode(row);
    EXPECT_EQ(Bits(code.begin() + 6, code.begin() + 9), (Bits{0, 1, 0}));
}

TEST(Encoder, IdentityAndCustomClusters) {
    const auto t = read_csv_table(kData + "/zoo.csv");
    Rng rng(6);
    const std::vector<FeatureEncoding> features{{"hair", 0, true}, {"legs", 2, false}};
    const auto enc = fit_encoder(t, features, 3, rng);
    EXPECT_EQ(enc.num_bits(), 3u);
    std::vector<double> row = t.rows[0];
    const Bits code = enc.encode(row);
    EXPECT_EQ(code[0], row[t.column_of("hair")] > 0.5 ? 1 : 0);
    EXPECT_EQ(code[1] + code[2], 1);
    EXPECT_THROW(fit_encoder(t, {{"wings", 3, false}}, 3, rng), ContractViolation);
}

TEST(OneHot, Basics) {
    EXPECT_EQ(one_hot(2, 4), (Bits{0, 0, 1, 0}));
    EXPECT_THROW(one_hot(4, 4), ContractViolation);
}

TEST(BarsAndStripes, ThreeByThreeCounts) {
    const auto [pos, neg] = bars_and_stripes(3);
    EXPECT_EQ(pos.size(), 8u);
    EXPECT_EQ(neg.size(), 512u - 8u);
    const std::set<Bits> positives(pos.begin(), pos.end());
    EXPECT_TRUE(positives.count(Bits(9, 0)));
    EXPECT_TRUE(positives.count(Bits(9, 1)));
    EXPECT_TRUE(positives.count((Bits{1, 1, 1, 0, 0, 0, 0, 0, 0})));
    EXPECT_TRUE(positives.count((Bits{0, 1, 0, 0, 1, 0, 0, 1, 0})));
    EXPECT_FALSE(positives.count((Bits{1, 1, 1, 1, 1, 1, 0, 0, 0})));

    const auto [all, rest] = bars_and_stripes(3, StripeRule::AllLines);
    EXPECT_EQ(all.size(), 14u);
    EXPECT_EQ(rest.size(), 512u - 14u);
}

TEST(BarsAndStripes, GeneralSizes) {
    for (std::uint32_t n = 2; n <= 4; ++n) {
        EXPECT_EQ(bars_and_stripes(n).first.size(), 2u * n + 2u);
        EXPECT_EQ(bars_and_stripes(n, StripeRule::AllLines).first.size(), (2u << n) - 2u);
    }
    const auto data = bars_and_stripes_dataset(3);
    EXPECT_EQ(data.size(), 512u);
    int positive = 0;
    for (const auto &s : data) {
        positive += s.label;
        EXPECT_EQ(s.target, Bits{static_cast<std::uint8_t>(s.label)});
    }
    EXPECT_EQ(positive, 8);
}

TEST(Pooling, BrightBlockMapsToItsCell) {
    std::vector<std::uint8_t> image(28 * 28, 0);
    // Crop is rows/cols 1..25; cell (1, 3) covers rows 6..10, cols 16..20.
    for (std::uint32_t r = 6; r < 11; ++r) {
        for (std::uint32_t c = 16; c < 21; ++c) image[r * 28 + c] = 255;
    }
    const Bits bits = pool_and_binarize(image, 28, 28);
    ASSERT_EQ(bits.size(), 25u);
    for (std::size_t i = 0; i < 25; ++i) {
        EXPECT_EQ(bits[i], i == 1 * 5 + 3 ? 1 : 0) << i;
    }
    EXPECT_THROW(pool_and_binarize(image, 20, 20), ContractViolation);
}

TEST(Mnist, ShippedSubset) {
    const auto images = read_idx_images(kData + "/mnist04-images-idx3-ubyte.gz");
    const auto labels = read_idx_labels(kData + "/mnist04-labels-idx1-ubyte.gz");
    EXPECT_EQ(images.rows, 28u);
    EXPECT_EQ(images.cols, 28u);
    ASSERT_EQ(images.images.size(), labels.size());
    EXPECT_GE(labels.size(), 5000u);
    for (auto l : labels) EXPECT_LE(l, 4);
    EXPECT_THROW(read_idx_images(kData + "/nothing.gz"), IoError);
}

TEST(Mnist, PreparedSplit) {
    MnistOptions opts;
    opts.train = 400;
    opts.test = 100;
    Rng rng(7);
    const auto data = mnist_prepare(kData + "/mnist04-images-idx3-ubyte.gz",
                                    kData + "/mnist04-labels-idx1-ubyte.gz", opts, rng);
    EXPECT_EQ(data.train.size(), 400u);
    EXPECT_EQ(data.test.size(), 100u);
    EXPECT_EQ(data.num_inputs(), 25u);
    EXPECT_EQ(data.num_classes(), 5u);
    std::set<int> seen;
    for (const auto &s : data.train) {
        seen.insert(s.label);
        EXPECT_EQ(s.target, one_hot(s.label, 5));
    }
    EXPECT_EQ(seen.size(), 5u);
    opts.train = 100000;
    EXPECT_THROW(mnist_prepare(kData + "/mnist04-images-idx3-ubyte.gz",
                               kData + "/mnist04-labels-idx1-ubyte.gz", opts, rng),
                 IoError);
}

}  // namespace
}  // namespace qsnn
