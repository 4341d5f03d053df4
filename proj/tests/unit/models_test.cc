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

#include "qsnn/models.h"

#include <gtest/gtest.h>

#include <set>

#include "qsnn/errors.h"
#include "qsnn/optimizer.h"

namespace qsnn {
namespace {

TEST(Shallow, Shape) {
    const auto topo = shallow(12, {5}, 3);
    EXPECT_EQ(topo.num_qubits(), 20u);
    EXPECT_EQ(topo.num_layers(), 2u);
    EXPECT_EQ(topo.num_edges(), 12u * 5 + 5 * 3);
    EXPECT_EQ(topo.parameters().size(), 12u * 5 + 5 * 3 + 8);
    EXPECT_EQ(topo.parameters().num_groups(), topo.parameters().size());
    EXPECT_THROW(shallow(0, {}, 1), ContractViolation);
    EXPECT_THROW(shallow(2, {0}, 1), ContractViolation);
}

TEST(Hopfield, MasksAndTies) {
    const auto topo = hopfield(9);
    const auto &layout = topo.parameters();
    EXPECT_TRUE(topo.recurrent());
    EXPECT_EQ(topo.num_qubits(), 18u);
    EXPECT_EQ(topo.num_edges(), 81u);
    EXPECT_EQ(topo.num_active_edges(), 72u);
    EXPECT_EQ(layout.num_masked(), 9u);
    // 9 biases plus one group per unordered pair.
    EXPECT_EQ(layout.num_groups(), 9u + 36u);
    for (NodeId i = 0; i < 9; ++i) {
        EXPECT_TRUE(layout.masked(layout.index_of(ParamKey::weight(i, 9 + i))));
        for (NodeId j = 0; j < 9; ++j) {
            if (i == j) continue;
            EXPECT_EQ(layout.group_of(layout.index_of(ParamKey::weight(i, 9 + j))),
                      layout.group_of(layout.index_of(ParamKey::weight(j, 9 + i))));
        }
    }
    EXPECT_THROW(layout.group_of(layout.index_of(ParamKey::weight(0, 9))), ContractViolation);
}

TEST(Hopfield, RandomInitialisationIsSymmetric) {
    const auto topo = hopfield(4);
    Rng rng(2);
    const auto p = random_parameters(topo.layout_ptr(), Interval{0.05, 0.5}, rng);
    EXPECT_TRUE(p.satisfies_constraints());
    const auto w = hopfield_weight_matrix(topo, p);
    for (std::size_t i = 0; i < 4; ++i) {
        EXPECT_EQ(w[i][i], 0.0);
        for (std::size_t j = 0; j < 4; ++j) {
            EXPECT_EQ(w[i][j], w[j][i]);
        }
    }
}

TEST(Rbm, TiedEncoderDecoder) {
    const auto topo = rbm(4, 2);
    const auto &layout = topo.parameters();
    EXPECT_EQ(topo.num_qubits(), 10u);
    EXPECT_EQ(topo.num_layers(), 2u);
    // 6 biases and 8 tied pairs.
    EXPECT_EQ(layout.num_groups(), 6u + 8u);
    for (NodeId i = 0; i < 4; ++i) {
        for (NodeId j = 0; j < 2; ++j) {
            EXPECT_EQ(layout.group_of(layout.index_of(ParamKey::weight(i, 4 + j))),
                      layout.group_of(layout.index_of(ParamKey::weight(4 + j, 6 + i))));
        }
    }
    const auto ae = autoencoder(4, 2);
    EXPECT_EQ(ae.parameters().num_groups(), ae.parameters().size());
    EXPECT_EQ(ae.num_qubits(), topo.num_qubits());
}

TEST(Cnn, SharedKernel) {
    const auto topo = cnn(3, 3, KernelShape{2, 2}, 1, {}, 1);
    const auto &layout = topo.parameters();
    EXPECT_EQ(topo.num_qubits(), 9u + 4u + 1u);
    EXPECT_EQ(topo.layer_width(1), 4u);
    // Four shared offsets, one shared bias, then 4 + 1 dense output parameters.
    EXPECT_EQ(layout.num_groups(), 4u + 1u + 5u);
    // Feature 1 covers pixels 1, 2, 4, 5; offset (0, 0) is shared with feature 0's pixel 0.
    const auto f0 = topo.layer(1)[0];
    const auto f1 = topo.layer(1)[1];
    EXPECT_EQ(f1.sources, (std::vector<NodeId>{1, 2, 4, 5}));
    EXPECT_EQ(layout.group_of(layout.index_of(ParamKey::weight(0, f0.id))),
              layout.group_of(layout.index_of(ParamKey::weight(1, f1.id))));
    EXPECT_EQ(layout.group_of(layout.index_of(ParamKey::bias(f0.id))),
              layout.group_of(layout.index_of(ParamKey::bias(f1.id))));
}

TEST(Cnn, StrideAndSingleFeature) {
    const auto strided = cnn(4, 4, KernelShape{2, 2}, 2, {3}, 2);
    EXPECT_EQ(strided.layer_width(1), 4u);
    EXPECT_EQ(strided.layer(1)[3].sources, (std::vector<NodeId>{10, 11, 14, 15}));
    const auto whole = cnn(2, 2, KernelShape{2, 2}, 1, {}, 1);
    EXPECT_TRUE(whole.constraints().ties.empty());
    EXPECT_THROW(cnn(2, 2, KernelShape{3, 1}, 1, {}, 1), ContractViolation);
    EXPECT_THROW(cnn(2, 2, KernelShape{1, 1}, 0, {}, 1), ContractViolation);
}

TEST(Validate, AcceptsBuiltModels) {
    EXPECT_NO_THROW(validate_topology(shallow(3, {2}, 1)));
    EXPECT_NO_THROW(validate_topology(hopfield(3)));
    EXPECT_NO_THROW(validate_topology(rbm(3, 2)));
    EXPECT_NO_THROW(validate_topology(cnn(3, 3, KernelShape{2, 2}, 1, {}, 1)));
}

TEST(Stripes, PatternsAndTrainingSet) {
    EXPECT_EQ(stripe_pattern(3, Bits{1, 0, 1}), (Bits{1, 0, 1, 1, 0, 1, 1, 0, 1}));
    const std::vector<Bits> stored{stripe_pattern(3, Bits{1, 0, 1}),
                                   stripe_pattern(3, Bits{0, 1, 0})};
    const auto data = hopfield_training_set(stored);
    ASSERT_EQ(data.size(), 2u + 18u);
    EXPECT_EQ(data[0].input, data[0].target);
    for (std::size_t i = 2; i < data.size(); ++i) {
        int diff = 0;
        for (std::size_t k = 0; k < 9; ++k) diff += data[i].input[k] != data[i].target[k];
        EXPECT_EQ(diff, 1);
    }
    EXPECT_EQ(hopfield_training_set(stored, false).size(), 2u);
}

TEST(Recall, BiasOnlyNetworksConverge) {
    const auto topo = hopfield(4);
    ParameterTable on = topo.zero_parameters();
    for (NodeId j = 0; j < 4; ++j) on.set(ParamKey::bias(4 + j), 1.0);
    Rng rng(1);
    const auto up = hopfield_recall(topo, on, Bits{0, 1, 0, 0}, 5, RecallMode::Sample, rng);
    EXPECT_TRUE(up.converged);
    EXPECT_EQ(up.final_pattern(), (Bits{1, 1, 1, 1}));
    EXPECT_EQ(up.patterns.size(), 3u);
    EXPECT_EQ(up.marginals.size(), 2u);
    EXPECT_EQ(up.first_visit(Bits{1, 1, 1, 1}), std::optional<std::size_t>(1));
    EXPECT_FALSE(up.first_visit(Bits{0, 0, 0, 1}).has_value());

    const auto down =
        hopfield_recall(topo, topo.zero_parameters(), Bits{0, 0, 0, 0}, 5, RecallMode::Argmax, rng);
    EXPECT_TRUE(down.converged);
    EXPECT_EQ(down.patterns.size(), 2u);
}

TEST(Recall, MarginalsFollowPairCoupling) {
    // Unit coupling between units 0 and 1: each copies the other.
    const auto topo = hopfield(2);
    ParameterTable p = topo.zero_parameters();
    p.set(ParamKey::weight(0, 3), 1.0);
    p.set(ParamKey::weight(1, 2), 1.0);
    ASSERT_TRUE(p.satisfies_constraints());
    Rng rng(1);
    const auto t = hopfield_recall(topo, p, Bits{1, 0}, 3, RecallMode::Argmax, rng);
    ASSERT_GE(t.patterns.size(), 3u);
    EXPECT_EQ(t.patterns[1], (Bits{0, 1}));
    EXPECT_EQ(t.patterns[2], (Bits{1, 0}));
    EXPECT_FALSE(t.converged);
    EXPECT_NEAR(t.marginals[0][1], 1.0, 1e-12);
    EXPECT_THROW(hopfield_recall(topo, p, Bits{1}, 3, RecallMode::Argmax, rng), ContractViolation);
}

TEST(Constraints, ProjectionRestoresInvariants) {
    Rng rng(9);
    const std::vector<NetworkTopology> topologies{hopfield(4), rbm(4, 2),
                                                  cnn(3, 3, KernelShape{2, 2}, 1, {2}, 1)};
    for (const auto &topo : topologies) {
        for (int trial = 0; trial < 20; ++trial) {
            ParameterTable p = topo.zero_parameters();
            for (std::size_t i = 0; i < p.size(); ++i) p[i] = uniform01(rng);
            p.project();
            EXPECT_TRUE(p.satisfies_constraints());
            const auto &layout = topo.parameters();
            for (std::size_t g = 0; g < layout.num_groups(); ++g) {
                std::set<double> values;
                for (auto i : layout.groups()[g]) values.insert(p[i]);
                EXPECT_EQ(values.size(), 1u);
            }
        }
    }
}

TEST(Constraints, TieProjectionUsesTheMean) {
    const auto topo = rbm(1, 1);
    ParameterTable p = topo.zero_parameters();
    p.set(ParamKey::weight(0, 1), 0.2);
    p.set(ParamKey::weight(1, 2), 0.6);
    EXPECT_FALSE(p.satisfies_constraints());
    p.project();
    EXPECT_NEAR(p.weight(0, 1), 0.4, 1e-15);
    EXPECT_NEAR(p.weight(1, 2), 0.4, 1e-15);
}

TEST(Constraints, BoundsClipAndRejectBadBoxes) {
    ConstraintSet c;
    c.bounds.push_back({ParamKey::weight(0, 1), Interval{0.1, 0.3}});
    const NetworkTopology topo(1, {{NeuronSpec{1, {0}, 1}}}, c);
    ParameterTable p = topo.zero_parameters();
    p.set(ParamKey::weight(0, 1), 0.9);
    p.project();
    EXPECT_DOUBLE_EQ(p.weight(0, 1), 0.3);
    const auto g = topo.parameters().group_of(topo.parameters().index_of(ParamKey::weight(0, 1)));
    p.set_group(g, -1.0);
    EXPECT_DOUBLE_EQ(p.weight(0, 1), 0.1);

    ConstraintSet bad;
    bad.bounds.push_back({ParamKey::weight(0, 1), Interval{0.5, 0.2}});
    EXPECT_THROW(NetworkTopology(1, {{NeuronSpec{1, {0}, 1}}}, bad), ContractViolation);
    ConstraintSet unknown;
    unknown.masks.push_back(ParamKey::weight(3, 1));
    EXPECT_THROW(NetworkTopology(1, {{NeuronSpec{1, {0}, 1}}}, unknown), ContractViolation);
}

TEST(ParamKeys, RoundTrip) {
    for (const auto &k : {ParamKey::weight(3, 7), ParamKey::bias(12)}) {
        EXPECT_EQ(ParamKey::parse(k.to_string()), k);
    }
    EXPECT_EQ(ParamKey::weight(3, 7).to_string(), "w:3>7");
    EXPECT_EQ(ParamKey::bias(7).to_string(), "b:7");
    EXPECT_THROW(ParamKey::parse("x:1"), ContractViolation);
    EXPECT_THROW(ParamKey::parse("w:1"), ContractViolation);
}

}  // namespace
}  // namespace qsnn
