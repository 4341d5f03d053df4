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

// Classical engine for compiled networks on basis-state inputs.
//
// All controls in a compiled network are diagonal in the computational basis, so measuring
// the register yields the same statistics as sampling each layer as independent Bernoulli
// neurons conditioned on the realized bits of earlier layers. This module exploits that to
// run networks far beyond the statevector qubit limit.

#ifndef QSNN_SAMPLER_H
#define QSNN_SAMPLER_H

#include <complex>
#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "qsnn/circuitry.h"
#include "qsnn/statevector.h"
#include "qsnn/types.h"

namespace qsnn {

struct SamplerConfig {
    /// Largest layer width whose 2^w configurations are enumerated exactly.
    std::uint32_t enumeration_limit = 16;
    /// Shots per sample when a loss has to be estimated by forward sampling.
    std::uint64_t shots = 4096;
    /// Configurations lighter than this are dropped while propagating distributions.
    double prune_threshold = 1e-12;
};

enum class Backend { Statevector, Exact, Shots };

std::string backend_name(Backend backend);
Backend parse_backend(const std::string &name);  // "statevector" | "exact-sampler" | "shots"

struct EvalOptions {
    Backend backend = Backend::Exact;
    SamplerConfig sampler;
    SimulatorConfig simulator;
    /// Base seed for shot estimates; sample i uses the stream split_seed(seed, i).
    std::uint64_t seed = 0;
};

struct ForwardTrace {
    std::vector<Bits> layers;  // one entry per neuron layer
    Bits outputs;              // copy of the last layer
};

/// Probability of every output bitstring; bit k of the index is output neuron k.
struct OutputDistribution {
    std::vector<double> probabilities;
    double marginal(std::size_t output) const;
};

/// One stochastic pass: each neuron fires with its activation probability given the
/// realized bits of its sources.
ForwardTrace forward_sample(const NetworkTopology &topology, const ParameterTable &params,
                            std::span<const std::uint8_t> input, Rng &rng);

/// Joint output distribution by enumerating every hidden configuration.
OutputDistribution exact_output_distribution(const NetworkTopology &topology,
                                             const ParameterTable &params,
                                             std::span<const std::uint8_t> input,
                                             const SamplerConfig &config = {});

/// Distribution over all qubits of the compiled circuit (bit q of the index is qubit q).
/// Only for small registers; used to check the statevector backend.
std::vector<double> exact_joint_distribution(const NetworkTopology &topology,
                                             const ParameterTable &params,
                                             std::span<const std::uint8_t> input);

/// Exact P(output_k = 1) for one input. Hidden layers before the last one are enumerated;
/// the last hidden layer is folded in analytically because its neurons are conditionally
/// independent:  E[sin^2(b + sum_k h_k t_k)] = (1 - Re(e^{2ib} prod_k (1 - q_k + q_k e^{2it_k}))) / 2.
class MarginalEvaluator {
   public:
    MarginalEvaluator(const NetworkTopology &topology, const ParameterTable &params,
                      const SamplerConfig &config = {});

    void marginals(std::span<const std::uint8_t> input, std::span<double> out) const;
    std::vector<double> marginals(std::span<const std::uint8_t> input) const;

    /// Precomputed angles of one neuron.
    struct Cell {
        double bias_angle = 0.0;
        std::vector<NodeId> sources;
        std::vector<double> source_angles;             // half-angles, parallel to sources
        std::vector<std::complex<double>> rotations;   // e^{2i * half-angle}
        std::vector<std::int32_t> last_hidden_slot;    // position in the last hidden layer or -1
    };

    const std::vector<Cell> &cells() const { return cells_; }

   private:
    const NetworkTopology *topology_;
    SamplerConfig config_;
    std::vector<Cell> cells_;  // indexed by neuron position (id - inputs)
};

/// P(output_k = 1) through the requested backend.
std::vector<double> output_marginals(const NetworkTopology &topology, const ParameterTable &params,
                                     std::span<const std::uint8_t> input,
                                     const EvalOptions &options = {},
                                     std::uint64_t sample_index = 0);

/// Marginals for every sample of a dataset (row-major, outputs per row).
std::vector<std::vector<double>> dataset_marginals(const NetworkTopology &topology,
                                                   const ParameterTable &params,
                                                   const Dataset &data,
                                                   const EvalOptions &options = {});

/// Mean over samples of sum_k (P(output_k = 1) - target_k)^2.
double network_loss(const NetworkTopology &topology, const ParameterTable &params,
                    const Dataset &data, const EvalOptions &options = {});
/// Same, restricted to the rows listed in `rows`.
double network_loss(const NetworkTopology &topology, const ParameterTable &params,
                    const Dataset &data, std::span<const std::size_t> rows,
                    const EvalOptions &options = {});

/// Predicted class from output marginals: argmax (ties to the lowest index); a single
/// output is read as a binary classifier that predicts 1 iff P(1) > 0.5.
int predict_class(std::span<const double> marginals);

/// Fraction of samples whose predicted class equals `label`.
double accuracy(const NetworkTopology &topology, const ParameterTable &params,
                const Dataset &data, const EvalOptions &options = {});

}  // namespace qsnn

#endif  // QSNN_SAMPLER_H
