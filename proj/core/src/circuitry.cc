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

#include "qsnn/circuitry.h"

#include <algorithm>
#include <cmath>

#include "qsnn/errors.h"

namespace qsnn {

double half_angle(double probability) {
    require(probability >= 0.0 && probability <= 1.0,
            "weight " + std::to_string(probability) + " is not a probability");
    return std::asin(std::sqrt(probability));
}

double weight_to_angle(double probability) { return 2.0 * half_angle(probability); }

double activation_probability(double bias, std::span<const double> weights,
                              std::span<const std::uint8_t> active) {
    require(weights.size() == active.size(), "weights and inputs differ in length");
    double angle = half_angle(bias);
    for (std::size_t i = 0; i < weights.size(); ++i) {
        const double h = half_angle(weights[i]);
        if (active[i]) {
            angle += h;
        }
    }
    const double s = std::sin(angle);
    return s * s;
}

NetworkTopology::NetworkTopology(std::uint32_t inputs,
                                 const std::vector<std::vector<NeuronSpec>> &layers,
                                 ConstraintSet constraints, bool recurrent,
                                 std::vector<Qubit> qubit_of)
    : inputs_(inputs), recurrent_(recurrent) {
    require(!layers.empty(), "a topology needs at least one neuron layer");

    std::vector<std::uint32_t> layer_of(inputs, 0);
    NodeId next = inputs;
    for (std::size_t l = 0; l < layers.size(); ++l) {
        require(!layers[l].empty(), "layer " + std::to_string(l + 1) + " is empty");
        const std::size_t begin = neurons_.size();
        for (const auto &spec : layers[l]) {
            require(spec.id == next, "neuron ids must be dense and in layer order; expected " +
                                         std::to_string(next) + ", got " +
                                         std::to_string(spec.id));
            require(spec.layer == 0 || spec.layer == l + 1,
                    "neuron " + std::to_string(spec.id) + " declares the wrong layer");
            ++next;
            layer_of.push_back(static_cast<std::uint32_t>(l + 1));
            neurons_.push_back(Neuron{spec.id, static_cast<std::uint32_t>(l + 1), spec.incoming,
                                      {}, 0});
        }
        layer_ranges_.emplace_back(begin, neurons_.size());
    }

    const NodeId total = next;
    std::vector<ParamKey> keys;
    for (auto &n : neurons_) {
        std::vector<NodeId> seen = n.sources;
        std::sort(seen.begin(), seen.end());
        require(std::adjacent_find(seen.begin(), seen.end()) == seen.end(),
                "neuron " + std::to_string(n.id) + " lists a source twice");
        for (auto src : n.sources) {
            require(src < total, "neuron " + std::to_string(n.id) + " has unknown source " +
                                     std::to_string(src));
            require(src != n.id, "neuron " + std::to_string(n.id) + " feeds itself");
            if (layer_of[src] >= n.layer) {
                feedforward_ = false;
            }
        }
        keys.push_back(ParamKey::bias(n.id));
        for (auto src : n.sources) {
            keys.push_back(ParamKey::weight(src, n.id));
        }
    }
    require(feedforward_ || recurrent_,
            "non-feedforward edges require the topology to be marked recurrent");

    if (qubit_of.empty()) {
        qubit_of.resize(total);
        for (NodeId i = 0; i < total; ++i) {
            qubit_of[i] = i;
        }
    }
    require(qubit_of.size() == total, "qubit assignment must cover every node");
    std::vector<bool> used(total, false);
    for (auto q : qubit_of) {
        require(q < total && !used[q], "qubit assignment must be a bijection onto 0..n-1");
        used[q] = true;
    }
    qubit_of_ = std::move(qubit_of);

    layout_ = std::make_shared<const ParameterLayout>(std::move(keys), constraints);
    for (auto &n : neurons_) {
        n.bias_param = layout_->index_of(ParamKey::bias(n.id));
        for (auto src : n.sources) {
            n.weight_params.push_back(layout_->index_of(ParamKey::weight(src, n.id)));
        }
    }
}

std::size_t NetworkTopology::layer_width(std::size_t l) const { return layer(l).size(); }

std::size_t NetworkTopology::num_edges() const {
    std::size_t n = 0;
    for (const auto &neuron : neurons_) {
        n += neuron.sources.size();
    }
    return n;
}

std::size_t NetworkTopology::num_active_edges() const {
    std::size_t n = 0;
    for (const auto &neuron : neurons_) {
        for (auto p : neuron.weight_params) {
            n += layout_->masked(p) ? 0 : 1;
        }
    }
    return n;
}

std::span<const NetworkTopology::Neuron> NetworkTopology::layer(std::size_t l) const {
    require(l >= 1 && l <= layer_ranges_.size(), "layer index out of range");
    const auto [begin, end] = layer_ranges_[l - 1];
    return std::span<const Neuron>(neurons_).subspan(begin, end - begin);
}

std::vector<NodeId> NetworkTopology::output_ids() const {
    std::vector<NodeId> ids;
    for (const auto &n : outputs()) {
        ids.push_back(n.id);
    }
    return ids;
}

std::vector<NeuronSpec> NetworkTopology::specs(std::size_t l) const {
    std::vector<NeuronSpec> out;
    for (const auto &n : layer(l)) {
        out.push_back(NeuronSpec{n.id, n.sources, n.layer});
    }
    return out;
}

std::vector<Qubit> NetworkTopology::input_qubits() const {
    std::vector<Qubit> qs;
    for (NodeId i = 0; i < inputs_; ++i) {
        qs.push_back(qubit_of_[i]);
    }
    return qs;
}

std::vector<Qubit> NetworkTopology::output_qubits() const {
    std::vector<Qubit> qs;
    for (const auto &n : outputs()) {
        qs.push_back(qubit_of_[n.id]);
    }
    return qs;
}

void check_parameters(const NetworkTopology &topology, const ParameterTable &params) {
    require(params.size() == topology.parameters().size() &&
                (params.layout_ptr() == topology.layout_ptr() ||
                 params.layout().keys() == topology.parameters().keys()),
            "parameter table does not match the topology");
}

Circuit compile(const NetworkTopology &topology, const ParameterTable &params) {
    check_parameters(topology, params);
    const auto &layout = topology.parameters();
    Circuit circuit(topology.num_qubits());
    for (const auto &n : topology.neurons()) {
        const Qubit target = topology.qubit(n.id);
        if (!layout.masked(n.bias_param)) {
            circuit.add(Gate::rx(target, weight_to_angle(params[n.bias_param])));
        }
        for (std::size_t i = 0; i < n.sources.size(); ++i) {
            const std::size_t p = n.weight_params[i];
            if (layout.masked(p)) {
                continue;
            }
            circuit.add(Gate::crx(topology.qubit(n.sources[i]), target, weight_to_angle(params[p])));
        }
    }
    return circuit;
}

Circuit prepare_input(const Circuit &circuit, std::span<const Qubit> input_qubits,
                      std::span<const std::uint8_t> bits) {
    require(bits.size() == input_qubits.size(),
            "expected " + std::to_string(input_qubits.size()) + " input bits, got " +
                std::to_string(bits.size()));
    Circuit out(circuit.num_qubits());
    for (std::size_t k = 0; k < bits.size(); ++k) {
        if (bits[k]) {
            out.add(Gate::x(input_qubits[k]));
        }
    }
    out.append(circuit);
    return out;
}

Circuit prepare_input(const Circuit &circuit, const NetworkTopology &topology,
                      std::span<const std::uint8_t> bits) {
    const auto qs = topology.input_qubits();
    return prepare_input(circuit, qs, bits);
}

}  // namespace qsnn
