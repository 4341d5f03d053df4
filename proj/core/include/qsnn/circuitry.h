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

// Stochastic perceptron math and the topology -> circuit compiler.
//
// A neuron on qubit q with bias b and incoming weights w_i from source qubits a_i is
//
//     RX(2 asin sqrt(b)) on q,  then  CRX(2 asin sqrt(w_i)) controlled by a_i, target q
//
// so for basis-state sources the neuron fires with probability
//
//     sin^2( asin sqrt(b) + sum_{i: a_i = 1} asin sqrt(w_i) ).
//
// Rotations on one target commute and the controls are diagonal, so all gates of one
// layer commute with each other.

#ifndef QSNN_CIRCUITRY_H
#define QSNN_CIRCUITRY_H

#include <cstdint>
#include <memory>
#include <span>
#include <string>
#include <vector>

#include "qsnn/parameters.h"
#include "qsnn/statevector.h"
#include "qsnn/types.h"

namespace qsnn {

/// asin(sqrt(w)): the half-angle a weight contributes. Requires 0 <= w <= 1.
double half_angle(double probability);

/// 2 asin(sqrt(w)), so RX(theta)|0> measures 1 with probability w.
double weight_to_angle(double probability);

/// Closed-form firing probability for bit inputs `active`.
double activation_probability(double bias, std::span<const double> weights,
                              std::span<const std::uint8_t> active);

struct NeuronSpec {
    NodeId id = 0;
    std::vector<NodeId> incoming;
    std::uint32_t layer = 0;  // inputs live in layer 0
};

/// Layered network of stochastic neurons. Node ids are dense: inputs are 0..inputs-1 and
/// neurons follow in layer order. Every node owns exactly one qubit (no ancillas).
class NetworkTopology {
   public:
    struct Neuron {
        NodeId id;
        std::uint32_t layer;
        std::vector<NodeId> sources;
        std::vector<std::size_t> weight_params;  // parallel to `sources`
        std::size_t bias_param;
    };

    /// `layers[l]` lists the neurons of layer l+1. Each neuron receives a bias key and one
    /// weight key per incoming edge, in that order. An empty `qubit_of` means
    /// node id == qubit index.
    NetworkTopology(std::uint32_t inputs, const std::vector<std::vector<NeuronSpec>> &layers,
                    ConstraintSet constraints = {}, bool recurrent = false,
                    std::vector<Qubit> qubit_of = {});

    std::uint32_t num_inputs() const { return inputs_; }
    std::size_t num_layers() const { return layer_ranges_.size(); }  // excluding inputs
    std::uint32_t num_nodes() const { return static_cast<std::uint32_t>(qubit_of_.size()); }
    std::uint32_t num_qubits() const { return num_nodes(); }
    std::size_t num_neurons() const { return neurons_.size(); }
    std::size_t layer_width(std::size_t layer) const;  // layer in 1..num_layers
    std::size_t num_edges() const;                     // all weight keys, masked included
    std::size_t num_active_edges() const;              // unmasked weight keys

    const std::vector<Neuron> &neurons() const { return neurons_; }
    /// Neurons of layer `layer` (1-based) as a contiguous span.
    std::span<const Neuron> layer(std::size_t layer) const;
    std::span<const Neuron> outputs() const { return layer(num_layers()); }
    std::vector<NodeId> output_ids() const;
    std::vector<NeuronSpec> specs(std::size_t layer) const;

    Qubit qubit(NodeId node) const { return qubit_of_.at(node); }
    const std::vector<Qubit> &qubit_map() const { return qubit_of_; }
    std::vector<Qubit> input_qubits() const;
    std::vector<Qubit> output_qubits() const;

    bool recurrent() const { return recurrent_; }
    /// Every source sits in a strictly earlier layer.
    bool feedforward() const { return feedforward_; }

    const ParameterLayout &parameters() const { return *layout_; }
    const std::shared_ptr<const ParameterLayout> &layout_ptr() const { return layout_; }
    const ConstraintSet &constraints() const { return layout_->constraints(); }
    ParameterTable zero_parameters() const { return ParameterTable(layout_); }

   private:
    std::uint32_t inputs_;
    std::vector<Neuron> neurons_;
    std::vector<std::pair<std::size_t, std::size_t>> layer_ranges_;
    std::vector<Qubit> qubit_of_;
    bool recurrent_;
    bool feedforward_ = true;
    std::shared_ptr<const ParameterLayout> layout_;
};

/// Layer-ordered circuit: per neuron one RX for the bias then one CRX per unmasked edge.
/// Masked biases and masked edges emit no gate.
Circuit compile(const NetworkTopology &topology, const ParameterTable &params);

/// Prepends X on `input_qubits[k]` wherever bits[k] == 1.
Circuit prepare_input(const Circuit &circuit, std::span<const Qubit> input_qubits,
                      std::span<const std::uint8_t> bits);
Circuit prepare_input(const Circuit &circuit, const NetworkTopology &topology,
                      std::span<const std::uint8_t> bits);

/// Throws ContractViolation unless `params` was built for `topology`'s layout.
void check_parameters(const NetworkTopology &topology, const ParameterTable &params);

}  // namespace qsnn

#endif  // QSNN_CIRCUITRY_H
