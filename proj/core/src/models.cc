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

#include <algorithm>

#include "qsnn/errors.h"

namespace qsnn {

namespace {

using Layers = std::vector<std::vector<NeuronSpec>>;

// Appends a layer of `width` neurons fully connected to [first, first + count).
std::pair<NodeId, NodeId> add_dense(Layers &layers, NodeId &next, NodeId first, NodeId count,
                                    std::uint32_t width) {
    std::vector<NodeId> sources(count);
    for (NodeId i = 0; i < count; ++i) {
        sources[i] = first + i;
    }
    std::vector<NeuronSpec> layer;
    const NodeId begin = next;
    for (std::uint32_t j = 0; j < width; ++j) {
        layer.push_back(NeuronSpec{next++, sources, static_cast<std::uint32_t>(layers.size() + 1)});
    }
    layers.push_back(std::move(layer));
    return {begin, width};
}

NetworkTopology encoder_decoder(std::uint32_t visible, std::uint32_t hidden, bool tied) {
    require(visible >= 1 && hidden >= 1, "layer sizes must be at least 1");
    Layers layers;
    NodeId next = visible;
    const auto [h0, hn] = add_dense(layers, next, 0, visible, hidden);
    const auto [r0, rn] = add_dense(layers, next, h0, hn, visible);
    (void)rn;
    ConstraintSet constraints;
    if (tied) {
        for (NodeId i = 0; i < visible; ++i) {
            for (NodeId j = 0; j < hidden; ++j) {
                constraints.ties.push_back(
                    {ParamKey::weight(i, h0 + j), ParamKey::weight(h0 + j, r0 + i)});
            }
        }
    }
    return NetworkTopology(visible, layers, std::move(constraints));
}

}  // namespace

NetworkTopology shallow(std::uint32_t inputs, const std::vector<std::uint32_t> &hidden,
                        std::uint32_t outputs) {
    require(inputs >= 1 && outputs >= 1, "layer sizes must be at least 1");
    Layers layers;
    NodeId next = inputs;
    NodeId prev = 0;
    NodeId prev_count = inputs;
    for (auto width : hidden) {
        require(width >= 1, "layer sizes must be at least 1");
        std::tie(prev, prev_count) = add_dense(layers, next, prev, prev_count, width);
    }
    add_dense(layers, next, prev, prev_count, outputs);
    return NetworkTopology(inputs, layers);
}

NetworkTopology hopfield(std::uint32_t n) {
    require(n >= 2, "a Hopfield network needs at least 2 units");
    Layers layers;
    NodeId next = n;
    add_dense(layers, next, 0, n, n);
    ConstraintSet constraints;
    for (NodeId i = 0; i < n; ++i) {
        constraints.masks.push_back(ParamKey::weight(i, n + i));
        for (NodeId j = i + 1; j < n; ++j) {
            constraints.ties.push_back({ParamKey::weight(i, n + j), ParamKey::weight(j, n + i)});
        }
    }
    return NetworkTopology(n, layers, std::move(constraints), true);
}

NetworkTopology rbm(std::uint32_t visible, std::uint32_t hidden) {
    return encoder_decoder(visible, hidden, true);
}

NetworkTopology autoencoder(std::uint32_t visible, std::uint32_t hidden) {
    return encoder_decoder(visible, hidden, false);
}

NetworkTopology cnn(std::uint32_t height, std::uint32_t width, KernelShape kernel,
                    std::uint32_t stride, const std::vector<std::uint32_t> &fc_hidden,
                    std::uint32_t outputs) {
    require(height >= 1 && width >= 1 && outputs >= 1, "image and output sizes must be positive");
    require(kernel.rows >= 1 && kernel.cols >= 1 && stride >= 1,
            "kernel and stride must be positive");
    require(kernel.rows <= height && kernel.cols <= width, "kernel does not fit in the image");

    const NodeId inputs = height * width;
    Layers layers;
    NodeId next = inputs;
    std::vector<NeuronSpec> features;
    std::vector<std::vector<ParamKey>> offset_ties(kernel.rows * kernel.cols);
    std::vector<ParamKey> bias_tie;
    for (std::uint32_t r0 = 0; r0 + kernel.rows <= height; r0 += stride) {
        for (std::uint32_t c0 = 0; c0 + kernel.cols <= width; c0 += stride) {
            NeuronSpec spec{next++, {}, 1};
            for (std::uint32_t dr = 0; dr < kernel.rows; ++dr) {
                for (std::uint32_t dc = 0; dc < kernel.cols; ++dc) {
                    const NodeId pixel = (r0 + dr) * width + (c0 + dc);
                    spec.incoming.push_back(pixel);
                    offset_ties[dr * kernel.cols + dc].push_back(ParamKey::weight(pixel, spec.id));
                }
            }
            bias_tie.push_back(ParamKey::bias(spec.id));
            features.push_back(std::move(spec));
        }
    }
    const NodeId feature_begin = features.front().id;
    const auto feature_count = static_cast<NodeId>(features.size());
    layers.push_back(std::move(features));

    NodeId prev = feature_begin;
    NodeId prev_count = feature_count;
    for (auto w : fc_hidden) {
        require(w >= 1, "layer sizes must be at least 1");
        std::tie(prev, prev_count) = add_dense(layers, next, prev, prev_count, w);
    }
    add_dense(layers, next, prev, prev_count, outputs);

    ConstraintSet constraints;
    if (feature_count > 1) {
        for (auto &group : offset_ties) {
            constraints.ties.push_back(std::move(group));
        }
        constraints.ties.push_back(std::move(bias_tie));
    }
    return NetworkTopology(inputs, layers, std::move(constraints));
}

void validate_topology(const NetworkTopology &topology) {
    const auto &map = topology.qubit_map();
    std::size_t expected = topology.num_inputs();
    for (std::size_t l = 1; l <= topology.num_layers(); ++l) {
        expected += topology.layer_width(l);
    }
    require(map.size() == expected, "qubit count differs from inputs plus neurons");
    std::vector<bool> seen(map.size(), false);
    for (auto q : map) {
        require(q < map.size() && !seen[q], "qubit assignment is not a bijection");
        seen[q] = true;
    }
    require(topology.feedforward() || topology.recurrent(),
            "backward edges in a topology not marked recurrent");
    const auto &layout = topology.parameters();
    for (std::size_t i = 0; i < layout.size(); ++i) {
        const auto b = layout.bounds(i);
        require(b.lower >= 0 && b.upper <= 1 && b.lower <= b.upper, "bounds outside [0, 1]");
    }
}

std::optional<std::size_t> HopfieldTrajectory::first_visit(const Bits &pattern) const {
    for (std::size_t t = 0; t < patterns.size(); ++t) {
        if (patterns[t] == pattern) {
            return t;
        }
    }
    return std::nullopt;
}

HopfieldTrajectory hopfield_recall(const NetworkTopology &topology, const ParameterTable &params,
                                   const Bits &probe, std::uint32_t max_iters, RecallMode mode,
                                   Rng &rng) {
    const std::size_t n = topology.num_inputs();
    require(probe.size() == n, "probe length must equal the number of units");
    require(topology.num_layers() == 1 && topology.layer_width(1) == n,
            "recall needs a topology with matching input and output widths");
    MarginalEvaluator evaluator(topology, params);
    HopfieldTrajectory out;
    out.patterns.push_back(probe);
    std::vector<double> probs(n);
    for (std::uint32_t t = 0; t < max_iters; ++t) {
        const Bits &current = out.patterns.back();
        evaluator.marginals(current, probs);
        Bits next(n);
        for (std::size_t k = 0; k < n; ++k) {
            next[k] = mode == RecallMode::Argmax ? (probs[k] > 0.5) : (uniform01(rng) < probs[k]);
        }
        out.marginals.push_back(probs);
        const bool same = next == current;
        out.patterns.push_back(std::move(next));
        if (same) {
            out.converged = true;
            break;
        }
    }
    return out;
}

Bits stripe_pattern(std::uint32_t rows, const Bits &columns) {
    require(rows >= 1 && !columns.empty(), "stripe pattern needs rows and columns");
    Bits out;
    for (std::uint32_t r = 0; r < rows; ++r) {
        out.insert(out.end(), columns.begin(), columns.end());
    }
    return out;
}

Dataset hopfield_training_set(const std::vector<Bits> &patterns, bool corrupted) {
    require(!patterns.empty(), "no patterns to store");
    Dataset data;
    for (const auto &p : patterns) {
        data.push_back(Sample{p, p, -1});
    }
    if (corrupted) {
        for (const auto &p : patterns) {
            for (std::size_t k = 0; k < p.size(); ++k) {
                Bits probe = p;
                probe[k] ^= 1;
                data.push_back(Sample{probe, p, -1});
            }
        }
    }
    return data;
}

std::vector<std::vector<double>> hopfield_weight_matrix(const NetworkTopology &topology,
                                                        const ParameterTable &params) {
    const NodeId n = topology.num_inputs();
    std::vector<std::vector<double>> w(n, std::vector<double>(n, 0.0));
    const auto &layout = topology.parameters();
    for (NodeId i = 0; i < n; ++i) {
        for (NodeId j = 0; j < n; ++j) {
            const auto idx = layout.find(ParamKey::weight(i, n + j));
            if (idx && !layout.masked(*idx)) {
                w[i][j] = params[*idx];
            }
        }
    }
    return w;
}

}  // namespace qsnn
