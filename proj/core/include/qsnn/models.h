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

// Network constructors: shallow classifiers, Hopfield memories, tied and untied
// encoder/decoder pairs, and convolutional classifiers with Toeplitz weight sharing.

#ifndef QSNN_MODELS_H
#define QSNN_MODELS_H

#include <cstdint>
#include <optional>
#include <span>
#include <utility>
#include <vector>

#include "qsnn/circuitry.h"
#include "qsnn/parameters.h"
#include "qsnn/sampler.h"
#include "qsnn/types.h"

namespace qsnn {

/// Fully connected layers, no constraints.
NetworkTopology shallow(std::uint32_t inputs, const std::vector<std::uint32_t> &hidden,
                        std::uint32_t outputs);

/// n inputs feeding n outputs; the diagonal edge i -> output i is masked and
/// weight(i -> output j) is tied to weight(j -> output i). Marked recurrent: outputs
/// are fed back as the next input.
NetworkTopology hopfield(std::uint32_t n);

/// visible -> hidden -> reconstruction with weight(v_i -> h_j) tied to weight(h_j -> r_i).
NetworkTopology rbm(std::uint32_t visible, std::uint32_t hidden);

/// Same shape as `rbm` without ties.
NetworkTopology autoencoder(std::uint32_t visible, std::uint32_t hidden);

struct KernelShape {
    std::uint32_t rows = 2;
    std::uint32_t cols = 2;
};

/// Pixel (r, c) of a height x width image is input r * width + c. One feature neuron per
/// patch position (row-major); its edges share one value per kernel offset and all feature
/// biases share one value. Fully connected layers follow.
NetworkTopology cnn(std::uint32_t height, std::uint32_t width, KernelShape kernel,
                    std::uint32_t stride, const std::vector<std::uint32_t> &fc_hidden,
                    std::uint32_t outputs);

/// Structural checks every constructor output must pass. Throws ContractViolation.
void validate_topology(const NetworkTopology &topology);

enum class RecallMode { Sample, Argmax };

struct HopfieldTrajectory {
    std::vector<Bits> patterns;                 // patterns[0] is the probe
    std::vector<std::vector<double>> marginals;  // marginals[t] produced patterns[t + 1]
    bool converged = false;

    const Bits &final_pattern() const { return patterns.back(); }
    /// First iteration at which `pattern` appears, if any.
    std::optional<std::size_t> first_visit(const Bits &pattern) const;
};

/// Feeds the output back as input until two consecutive patterns agree or `max_iters`
/// updates were made. Sample mode draws every bit from its marginal, argmax mode
/// thresholds at 0.5.
HopfieldTrajectory hopfield_recall(const NetworkTopology &topology, const ParameterTable &params,
                                   const Bits &probe, std::uint32_t max_iters, RecallMode mode,
                                   Rng &rng);

/// rows x cols image whose column c is `columns[c]` in every row.
Bits stripe_pattern(std::uint32_t rows, const Bits &columns);

/// Every stored pattern maps to itself; with `corrupted`, every one-bit flip of a stored
/// pattern maps to its source as well.
Dataset hopfield_training_set(const std::vector<Bits> &patterns, bool corrupted = true);

/// Hopfield weight matrix w[i][j] = weight(i -> output j), 0 for masked entries.
std::vector<std::vector<double>> hopfield_weight_matrix(const NetworkTopology &topology,
                                                        const ParameterTable &params);

}  // namespace qsnn

#endif  // QSNN_MODELS_H
