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

// Generative sampling with a trained classifier as a Grover phase oracle:
//   H on the inputs, then `iterations` rounds of  U_net, Z(output), U_net^dagger, diffusion.

#ifndef QSNN_GROVER_H
#define QSNN_GROVER_H

#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "qsnn/circuitry.h"
#include "qsnn/statevector.h"
#include "qsnn/types.h"

namespace qsnn {

/// net, Z(output), adjoint(net).
Circuit build_oracle(const Circuit &net, Qubit output);

/// H, X, MCZ, X, H over `inputs`: 2|s><s| - I up to a global phase.
Circuit diffusion(std::uint32_t num_qubits, std::span<const Qubit> inputs);

/// Deterministic classifier over `inputs`: a multi-controlled CRX(pi) per entry of `marked`
/// rotates `output` from |0> to |1> exactly on the listed patterns. The residual phase of
/// the rotation cancels inside `build_oracle`.
Circuit lookup_classifier(std::uint32_t num_qubits, std::span<const Qubit> inputs, Qubit output,
                          const std::vector<Bits> &marked);

/// H on `inputs`, then `iterations` rounds of build_oracle(net, marked) and diffusion.
Circuit amplification_circuit(const Circuit &net, std::span<const Qubit> inputs, Qubit marked,
                              std::uint32_t iterations);

struct GenerativeCircuit {
    std::vector<Qubit> inputs;
    Circuit network{1};
    Qubit marked = 0;
    std::uint32_t iterations = 0;
    Circuit composed{1};
};

/// `marked_output` selects which output neuron carries the phase flip.
GenerativeCircuit build_generative_circuit(const NetworkTopology &topology,
                                           const ParameterTable &params, std::uint32_t iterations,
                                           std::size_t marked_output = 0);

struct PatternHistogram {
    std::uint32_t num_inputs = 0;
    std::vector<std::uint64_t> counts;   // index bit k = input k
    std::vector<double> probabilities;   // exact input marginal

    double mass(std::span<const Bits> patterns) const;
    /// Header `pattern,count,probability`; patterns rendered input 0 first.
    std::string to_csv() const;
};

/// Simulates the generative circuit and samples the input register. Throws ResourceError
/// beyond the simulator's qubit limit.
/// Runs `composed` from |0...0> and samples the `inputs` marginal.
PatternHistogram sample_inputs(const Circuit &composed, std::span<const Qubit> inputs,
                               std::uint64_t shots, Rng &rng, const SimulatorConfig &simulator = {});

PatternHistogram generative_sample(const NetworkTopology &topology, const ParameterTable &params,
                                   std::uint32_t iterations, std::uint64_t shots, Rng &rng,
                                   const SimulatorConfig &simulator = {},
                                   std::size_t marked_output = 0);

/// sin^2((2k + 1) asin(sqrt(marked / total))).
double grover_success_probability(std::uint64_t marked, std::uint64_t total,
                                  std::uint32_t iterations);

/// round(pi / (4 asin(sqrt(marked / total))) - 1/2), at least 0.
std::uint32_t optimal_iterations(std::uint64_t marked, std::uint64_t total);

}  // namespace qsnn

#endif  // QSNN_GROVER_H
