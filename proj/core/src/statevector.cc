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

#include "qsnn/statevector.h"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "qsnn/errors.h"

namespace qsnn {

namespace {

constexpr double kFourPi = 4.0 * std::numbers::pi;

std::uint64_t control_mask(const std::vector<Qubit> &controls) {
    std::uint64_t mask = 0;
    for (auto q : controls) {
        mask |= std::uint64_t{1} << q;
    }
    return mask;
}

// Rotation about x on the target, restricted to basis states matching `mask`.
void apply_rx(std::span<Amplitude> amps, Qubit target, std::uint64_t mask, double theta) {
    const double c = std::cos(theta / 2);
    const double s = std::sin(theta / 2);
    const Amplitude minus_is{0.0, -s};
    const std::size_t stride = std::size_t{1} << target;
    const std::size_t dim = amps.size();
    for (std::size_t hi = 0; hi < dim; hi += 2 * stride) {
        for (std::size_t i = hi; i < hi + stride; ++i) {
            if ((i & mask) != mask) {
                continue;
            }
            const Amplitude a0 = amps[i];
            const Amplitude a1 = amps[i + stride];
            amps[i] = c * a0 + minus_is * a1;
            amps[i + stride] = minus_is * a0 + c * a1;
        }
    }
}

void apply_h(std::span<Amplitude> amps, Qubit target) {
    const double r = std::numbers::sqrt2 / 2;
    const std::size_t stride = std::size_t{1} << target;
    for (std::size_t hi = 0; hi < amps.size(); hi += 2 * stride) {
        for (std::size_t i = hi; i < hi + stride; ++i) {
            const Amplitude a0 = amps[i];
            const Amplitude a1 = amps[i + stride];
            amps[i] = r * (a0 + a1);
            amps[i + stride] = r * (a0 - a1);
        }
    }
}

void apply_x(std::span<Amplitude> amps, Qubit target) {
    const std::size_t stride = std::size_t{1} << target;
    for (std::size_t hi = 0; hi < amps.size(); hi += 2 * stride) {
        for (std::size_t i = hi; i < hi + stride; ++i) {
            std::swap(amps[i], amps[i + stride]);
        }
    }
}

void apply_phase_flip(std::span<Amplitude> amps, std::uint64_t mask) {
    for (std::size_t i = 0; i < amps.size(); ++i) {
        if ((i & mask) == mask) {
            amps[i] = -amps[i];
        }
    }
}

void validate_gate(const Gate &gate, std::uint32_t num_qubits) {
    require(gate.target < num_qubits, "gate target " + std::to_string(gate.target) +
                                          " out of range for " + std::to_string(num_qubits) +
                                          " qubits");
    const bool takes_controls = gate.kind == GateKind::CRX || gate.kind == GateKind::MCZ;
    require(takes_controls || gate.controls.empty(),
            gate_kind_name(gate.kind) + " does not take controls");
    require(gate.kind != GateKind::CRX || !gate.controls.empty(), "CRX needs a control");
    for (std::size_t i = 0; i < gate.controls.size(); ++i) {
        const Qubit c = gate.controls[i];
        require(c < num_qubits, "control " + std::to_string(c) + " out of range");
        require(c != gate.target, "control equals target " + std::to_string(c));
        for (std::size_t j = 0; j < i; ++j) {
            require(gate.controls[j] != c, "duplicate control " + std::to_string(c));
        }
    }
    require(std::isfinite(gate.theta), "gate angle must be finite");
}

bool is_power_of_two(std::size_t n) { return n != 0 && (n & (n - 1)) == 0; }

}  // namespace

std::string gate_kind_name(GateKind kind) {
    switch (kind) {
        case GateKind::RX:
            return "RX";
        case GateKind::CRX:
            return "CRX";
        case GateKind::H:
            return "H";
        case GateKind::X:
            return "X";
        case GateKind::Z:
            return "Z";
        case GateKind::MCZ:
            return "MCZ";
    }
    return "?";
}

double normalize_angle(double theta) {
    require(std::isfinite(theta), "gate angle must be finite");
    double r = std::fmod(theta, kFourPi);
    if (r < 0) {
        r += kFourPi;
    }
    // fmod of a tiny negative number can round up to exactly 4*pi.
    if (r >= kFourPi) {
        r = 0.0;
    }
    return r;
}

Gate Gate::rx(Qubit target, double theta) { return Gate{GateKind::RX, target, {}, theta}; }
Gate Gate::crx(Qubit control, Qubit target, double theta) {
    return Gate{GateKind::CRX, target, {control}, theta};
}
Gate Gate::h(Qubit target) { return Gate{GateKind::H, target, {}, 0.0}; }
Gate Gate::x(Qubit target) { return Gate{GateKind::X, target, {}, 0.0}; }
Gate Gate::z(Qubit target) { return Gate{GateKind::Z, target, {}, 0.0}; }
Gate Gate::mcz(std::vector<Qubit> controls, Qubit target) {
    return Gate{GateKind::MCZ, target, std::move(controls), 0.0};
}

Circuit &Circuit::add(Gate gate) {
    validate_gate(gate, num_qubits_);
    if (gate.kind == GateKind::RX || gate.kind == GateKind::CRX) {
        gate.theta = normalize_angle(gate.theta);
    } else {
        gate.theta = 0.0;
    }
    gates_.push_back(std::move(gate));
    return *this;
}

Circuit &Circuit::append(const Circuit &other) {
    require(other.num_qubits_ <= num_qubits_, "appended circuit is wider than the register");
    gates_.insert(gates_.end(), other.gates_.begin(), other.gates_.end());
    return *this;
}

std::size_t Circuit::count(GateKind kind) const {
    return static_cast<std::size_t>(std::count_if(
        gates_.begin(), gates_.end(), [kind](const Gate &g) { return g.kind == kind; }));
}

Circuit adjoint(const Circuit &circuit) {
    Circuit out(circuit.num_qubits());
    const auto &gates = circuit.gates();
    for (auto it = gates.rbegin(); it != gates.rend(); ++it) {
        Gate g = *it;
        if (g.kind == GateKind::RX || g.kind == GateKind::CRX) {
            g.theta = -g.theta;
        }
        out.add(std::move(g));
    }
    return out;
}

double State::norm_squared() const {
    double total = 0.0;
    for (const auto &a : amplitudes_) {
        total += std::norm(a);
    }
    return total;
}

State State::from_amplitudes(std::vector<Amplitude> amplitudes, const SimulatorConfig &config) {
    require(is_power_of_two(amplitudes.size()), "amplitude count must be a power of two");
    std::uint32_t n = 0;
    while ((std::size_t{1} << n) < amplitudes.size()) {
        ++n;
    }
    require(n >= 1, "a state needs at least one qubit");
    if (n > config.max_qubits) {
        throw ResourceError("state of " + std::to_string(n) + " qubits exceeds the limit of " +
                            std::to_string(config.max_qubits));
    }
    return State(n, std::move(amplitudes));
}

State init_state(std::uint32_t num_qubits, const SimulatorConfig &config) {
    require(num_qubits >= 1, "a state needs at least one qubit");
    if (num_qubits > config.max_qubits) {
        throw ResourceError("state of " + std::to_string(num_qubits) +
                            " qubits exceeds the qubit limit of " +
                            std::to_string(config.max_qubits));
    }
    std::vector<Amplitude> amps(std::size_t{1} << num_qubits);
    amps[0] = 1.0;
    return State(num_qubits, std::move(amps));
}

void apply_gate(State &state, const Gate &gate) {
    validate_gate(gate, state.num_qubits());
    auto amps = state.amplitudes();
    switch (gate.kind) {
        case GateKind::RX:
            apply_rx(amps, gate.target, 0, gate.theta);
            break;
        case GateKind::CRX:
            apply_rx(amps, gate.target, control_mask(gate.controls), gate.theta);
            break;
        case GateKind::H:
            apply_h(amps, gate.target);
            break;
        case GateKind::X:
            apply_x(amps, gate.target);
            break;
        case GateKind::Z:
            apply_phase_flip(amps, std::uint64_t{1} << gate.target);
            break;
        case GateKind::MCZ:
            apply_phase_flip(amps,
                             control_mask(gate.controls) | (std::uint64_t{1} << gate.target));
            break;
    }
}

void apply_circuit(State &state, const Circuit &circuit) {
    require(circuit.num_qubits() == state.num_qubits(),
            "circuit width " + std::to_string(circuit.num_qubits()) + " != state width " +
                std::to_string(state.num_qubits()));
    for (const auto &gate : circuit.gates()) {
        apply_gate(state, gate);
    }
}

std::vector<double> marginal_distribution(const State &state, std::span<const Qubit> qubits) {
    require(qubits.size() < 63, "too many qubits in a marginal");
    std::uint64_t seen = 0;
    for (auto q : qubits) {
        require(q < state.num_qubits(), "qubit " + std::to_string(q) + " out of range");
        require(((seen >> q) & 1U) == 0, "duplicate qubit " + std::to_string(q));
        seen |= std::uint64_t{1} << q;
    }
    std::vector<double> probs(std::size_t{1} << qubits.size(), 0.0);
    const auto amps = state.amplitudes();
    for (std::size_t i = 0; i < amps.size(); ++i) {
        std::size_t outcome = 0;
        for (std::size_t k = 0; k < qubits.size(); ++k) {
            outcome |= ((i >> qubits[k]) & 1U) << k;
        }
        probs[outcome] += std::norm(amps[i]);
    }
    return probs;
}

std::vector<std::uint64_t> sample(const State &state, std::span<const Qubit> qubits,
                                  std::uint64_t shots, Rng &rng) {
    require(shots >= 1, "shots must be at least 1");
    const auto probs = marginal_distribution(state, qubits);
    std::vector<double> cdf(probs.size());
    double acc = 0.0;
    for (std::size_t i = 0; i < probs.size(); ++i) {
        acc += probs[i];
        cdf[i] = acc;
    }
    std::vector<std::uint64_t> counts(probs.size(), 0);
    for (std::uint64_t s = 0; s < shots; ++s) {
        const double u = uniform01(rng) * acc;
        auto it = std::upper_bound(cdf.begin(), cdf.end(), u);
        auto idx = static_cast<std::size_t>(it - cdf.begin());
        // Guard against landing past the end when u rounds to acc, and skip zero-mass bins.
        idx = std::min(idx, probs.size() - 1);
        while (probs[idx] == 0.0 && idx > 0) {
            --idx;
        }
        ++counts[idx];
    }
    return counts;
}

}  // namespace qsnn
