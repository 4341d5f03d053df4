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

#ifndef QSNN_STATEVECTOR_H
#define QSNN_STATEVECTOR_H

#include <complex>
#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "qsnn/types.h"

namespace qsnn {

using Amplitude = std::complex<double>;

inline constexpr std::uint32_t kDefaultMaxQubits = 24;

struct SimulatorConfig {
    std::uint32_t max_qubits = kDefaultMaxQubits;
};

enum class GateKind { RX, CRX, H, X, Z, MCZ };

std::string gate_kind_name(GateKind kind);

/// Maps any finite angle into [0, 4*pi), the period of RX.
double normalize_angle(double theta);

/// One gate of the supported set. Controls are only meaningful for CRX and MCZ;
/// a CRX with several controls fires when all of them are 1.
struct Gate {
    GateKind kind = GateKind::X;
    Qubit target = 0;
    std::vector<Qubit> controls;
    double theta = 0.0;

    static Gate rx(Qubit target, double theta);
    static Gate crx(Qubit control, Qubit target, double theta);
    static Gate h(Qubit target);
    static Gate x(Qubit target);
    static Gate z(Qubit target);
    static Gate mcz(std::vector<Qubit> controls, Qubit target);

    bool operator==(const Gate &) const = default;
};

/// Ordered gate list on a fixed register width.
class Circuit {
   public:
    explicit Circuit(std::uint32_t num_qubits = 0) : num_qubits_(num_qubits) {}

    /// Validates indices against the register, normalizes the angle, appends.
    Circuit &add(Gate gate);
    Circuit &append(const Circuit &other);

    std::uint32_t num_qubits() const { return num_qubits_; }
    const std::vector<Gate> &gates() const { return gates_; }
    std::size_t size() const { return gates_.size(); }
    bool empty() const { return gates_.empty(); }
    std::size_t count(GateKind kind) const;

    bool operator==(const Circuit &) const = default;

   private:
    std::uint32_t num_qubits_;
    std::vector<Gate> gates_;
};

/// Reversed order, rotation angles negated; H, X, Z and MCZ are self-inverse.
Circuit adjoint(const Circuit &circuit);

/// Dense register. Qubit 0 is the least significant bit of the basis index.
class State {
   public:
    std::uint32_t num_qubits() const { return num_qubits_; }
    std::size_t dimension() const { return amplitudes_.size(); }
    std::span<const Amplitude> amplitudes() const { return amplitudes_; }
    std::span<Amplitude> amplitudes() { return amplitudes_; }
    double norm_squared() const;

    /// Builds a state from explicit amplitudes (length must be a power of two).
    static State from_amplitudes(std::vector<Amplitude> amplitudes,
                                 const SimulatorConfig &config = {});

   private:
    friend State init_state(std::uint32_t, const SimulatorConfig &);

    State(std::uint32_t n, std::vector<Amplitude> amplitudes)
        : num_qubits_(n), amplitudes_(std::move(amplitudes)) {}

    std::uint32_t num_qubits_ = 0;
    std::vector<Amplitude> amplitudes_;
};

/// |0...0> on `num_qubits` qubits. Throws ResourceError above `config.max_qubits`.
State init_state(std::uint32_t num_qubits, const SimulatorConfig &config = {});

/// In-place application; the state is exclusively owned for the duration of the call.
void apply_gate(State &state, const Gate &gate);
void apply_circuit(State &state, const Circuit &circuit);

/// Probability table over the listed qubits. Outcome bit k corresponds to qubits[k].
std::vector<double> marginal_distribution(const State &state, std::span<const Qubit> qubits);

/// Draws `shots` outcomes from `marginal_distribution`; counts indexed like it.
std::vector<std::uint64_t> sample(const State &state, std::span<const Qubit> qubits,
                                  std::uint64_t shots, Rng &rng);

}  // namespace qsnn

#endif  // QSNN_STATEVECTOR_H
