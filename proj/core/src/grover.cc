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

#include "qsnn/grover.h"

#include <cmath>
#include <cstdio>
#include <numbers>

#include "qsnn/errors.h"

namespace qsnn {

Circuit build_oracle(const Circuit &net, Qubit output) {
    require(output < net.num_qubits(), "marked qubit " + std::to_string(output) +
                                           " is outside the network's " +
                                           std::to_string(net.num_qubits()) + " qubits");
    Circuit oracle(net.num_qubits());
    oracle.append(net);
    oracle.add(Gate::z(output));
    oracle.append(adjoint(net));
    return oracle;
}

Circuit diffusion(std::uint32_t num_qubits, std::span<const Qubit> inputs) {
    require(!inputs.empty(), "diffusion needs at least one qubit");
    Circuit c(num_qubits);
    for (auto q : inputs) {
        c.add(Gate::h(q));
    }
    for (auto q : inputs) {
        c.add(Gate::x(q));
    }
    std::vector<Qubit> controls(inputs.begin(), inputs.end() - 1);
    c.add(Gate::mcz(std::move(controls), inputs.back()));
    for (auto q : inputs) {
        c.add(Gate::x(q));
    }
    for (auto q : inputs) {
        c.add(Gate::h(q));
    }
    return c;
}

Circuit lookup_classifier(std::uint32_t num_qubits, std::span<const Qubit> inputs, Qubit output,
                          const std::vector<Bits> &marked) {
    require(!inputs.empty(), "classifier needs at least one input");
    Circuit c(num_qubits);
    for (const auto &pattern : marked) {
        require(pattern.size() == inputs.size(), "marked pattern width differs from the inputs");
        for (std::size_t k = 0; k < inputs.size(); ++k) {
            if (!pattern[k]) c.add(Gate::x(inputs[k]));
        }
        Gate rotate = Gate::crx(inputs[0], output, std::numbers::pi);
        rotate.controls.assign(inputs.begin(), inputs.end());
        c.add(std::move(rotate));
        for (std::size_t k = 0; k < inputs.size(); ++k) {
            if (!pattern[k]) c.add(Gate::x(inputs[k]));
        }
    }
    return c;
}

Circuit amplification_circuit(const Circuit &net, std::span<const Qubit> inputs, Qubit marked,
                              std::uint32_t iterations) {
    const Circuit oracle = build_oracle(net, marked);
    const Circuit diffuser = diffusion(net.num_qubits(), inputs);
    Circuit c(net.num_qubits());
    for (auto q : inputs) {
        c.add(Gate::h(q));
    }
    for (std::uint32_t k = 0; k < iterations; ++k) {
        c.append(oracle);
        c.append(diffuser);
    }
    return c;
}

GenerativeCircuit build_generative_circuit(const NetworkTopology &topology,
                                           const ParameterTable &params, std::uint32_t iterations,
                                           std::size_t marked_output) {
    const auto outputs = topology.output_qubits();
    require(marked_output < outputs.size(), "marked output index out of range");
    GenerativeCircuit g;
    g.inputs = topology.input_qubits();
    g.network = compile(topology, params);
    g.marked = outputs[marked_output];
    g.iterations = iterations;

    g.composed = amplification_circuit(g.network, g.inputs, g.marked, iterations);
    return g;
}

double PatternHistogram::mass(std::span<const Bits> patterns) const {
    double total = 0.0;
    for (const auto &p : patterns) {
        require(p.size() == num_inputs, "pattern width differs from the input count");
        total += probabilities[bits_to_index(p)];
    }
    return total;
}

std::string PatternHistogram::to_csv() const {
    std::string out = "pattern,count,probability\n";
    char buf[32];
    for (std::size_t i = 0; i < probabilities.size(); ++i) {
        out += bits_to_string(index_to_bits(i, num_inputs));
        out += ',';
        out += std::to_string(counts[i]);
        std::snprintf(buf, sizeof(buf), ",%.17g\n", probabilities[i]);
        out += buf;
    }
    return out;
}

PatternHistogram sample_inputs(const Circuit &composed, std::span<const Qubit> inputs,
                               std::uint64_t shots, Rng &rng, const SimulatorConfig &simulator) {
    require(shots >= 1, "at least one shot is required");
    State state = init_state(composed.num_qubits(), simulator);
    apply_circuit(state, composed);
    PatternHistogram h;
    h.num_inputs = static_cast<std::uint32_t>(inputs.size());
    h.probabilities = marginal_distribution(state, inputs);
    h.counts = sample(state, inputs, shots, rng);
    return h;
}

PatternHistogram generative_sample(const NetworkTopology &topology, const ParameterTable &params,
                                   std::uint32_t iterations, std::uint64_t shots, Rng &rng,
                                   const SimulatorConfig &simulator, std::size_t marked_output) {
    require(shots >= 1, "at least one shot is required");
    const auto g = build_generative_circuit(topology, params, iterations, marked_output);
    return sample_inputs(g.composed, g.inputs, shots, rng, simulator);
}

double grover_success_probability(std::uint64_t marked, std::uint64_t total,
                                  std::uint32_t iterations) {
    require(total >= 1 && marked <= total, "need 0 <= marked <= total");
    const double theta = std::asin(std::sqrt(static_cast<double>(marked) / static_cast<double>(total)));
    const double s = std::sin((2.0 * iterations + 1.0) * theta);
    return s * s;
}

std::uint32_t optimal_iterations(std::uint64_t marked, std::uint64_t total) {
    require(total >= 1 && marked >= 1 && marked <= total, "need 1 <= marked <= total");
    const double theta = std::asin(std::sqrt(static_cast<double>(marked) / static_cast<double>(total)));
    const double k = std::round(std::numbers::pi / (4.0 * theta) - 0.5);
    return k < 0 ? 0U : static_cast<std::uint32_t>(k);
}

}  // namespace qsnn
