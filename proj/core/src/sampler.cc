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

#include "qsnn/sampler.h"

#include <cmath>
#include <numeric>

#include "qsnn/errors.h"

namespace qsnn {

namespace {

using Cell = MarginalEvaluator::Cell;

// Bits of every node plus the probability of that realization.
struct Config {
    double mass;
    Bits nodes;
};

constexpr std::size_t kMaxConfigs = std::size_t{1} << 22;

double firing(const Cell &cell, std::span<const std::uint8_t> nodes) {
    double angle = cell.bias_angle;
    for (std::size_t i = 0; i < cell.sources.size(); ++i) {
        if (nodes[cell.sources[i]]) {
            angle += cell.source_angles[i];
        }
    }
    const double s = std::sin(angle);
    return s * s;
}

std::vector<Cell> build_cells(const NetworkTopology &topology, const ParameterTable &params) {
    check_parameters(topology, params);
    const std::size_t layers = topology.num_layers();
    std::vector<std::int32_t> slot(topology.num_nodes(), -1);
    if (layers >= 2) {
        std::int32_t k = 0;
        for (const auto &n : topology.layer(layers - 1)) {
            slot[n.id] = k++;
        }
    }
    std::vector<Cell> cells;
    cells.reserve(topology.num_neurons());
    for (const auto &n : topology.neurons()) {
        Cell cell;
        cell.bias_angle = half_angle(params[n.bias_param]);
        cell.sources = n.sources;
        for (std::size_t i = 0; i < n.sources.size(); ++i) {
            const double w = params[n.weight_params[i]];
            const double t = half_angle(w);
            cell.source_angles.push_back(t);
            // e^{2it} with sin^2 t = w: cos 2t = 1 - 2w, sin 2t = 2 sqrt(w (1 - w)).
            cell.rotations.emplace_back(1.0 - 2.0 * w, 2.0 * std::sqrt(w * (1.0 - w)));
            cell.last_hidden_slot.push_back(slot[n.sources[i]]);
        }
        cells.push_back(std::move(cell));
    }
    return cells;
}

Bits input_nodes(const NetworkTopology &topology, std::span<const std::uint8_t> input) {
    require(input.size() == topology.num_inputs(),
            "expected " + std::to_string(topology.num_inputs()) + " input bits, got " +
                std::to_string(input.size()));
    Bits nodes(topology.num_nodes(), 0);
    for (std::size_t i = 0; i < input.size(); ++i) {
        require(input[i] <= 1, "input bits must be 0 or 1");
        nodes[i] = input[i];
    }
    return nodes;
}

void require_feedforward(const NetworkTopology &topology) {
    require(topology.feedforward(),
            "recurrent topology must be unrolled before it can be evaluated layer by layer");
}

// Draws every neuron layer in order; `nodes` holds the input bits on entry. Sources are
// always in earlier layers, so writing a layer in place never feeds its own neurons.
void sample_layers(const NetworkTopology &topology, const std::vector<Cell> &cells, Bits &nodes,
                   Rng &rng) {
    const std::uint32_t inputs = topology.num_inputs();
    for (std::size_t l = 1; l <= topology.num_layers(); ++l) {
        for (const auto &n : topology.layer(l)) {
            const double p = firing(cells[n.id - inputs], nodes);
            nodes[n.id] = static_cast<std::uint8_t>(uniform01(rng) < p);
        }
    }
}

// Expands `configs` through neuron layers first..last (1-based, inclusive).
std::vector<Config> enumerate_layers(const NetworkTopology &topology,
                                     const std::vector<Cell> &cells, std::vector<Config> configs,
                                     std::size_t first, std::size_t last,
                                     const SamplerConfig &config) {
    const std::uint32_t inputs = topology.num_inputs();
    for (std::size_t l = first; l <= last; ++l) {
        const auto layer = topology.layer(l);
        if (layer.size() > config.enumeration_limit) {
            throw ResourceError("layer " + std::to_string(l) + " has " +
                                std::to_string(layer.size()) +
                                " neurons, above the enumeration limit of " +
                                std::to_string(config.enumeration_limit) +
                                "; use the shot-based backend instead");
        }
        const std::size_t patterns = std::size_t{1} << layer.size();
        std::vector<Config> next;
        std::vector<double> q(layer.size());
        for (const auto &c : configs) {
            for (std::size_t k = 0; k < layer.size(); ++k) {
                q[k] = firing(cells[layer[k].id - inputs], c.nodes);
            }
            for (std::size_t pattern = 0; pattern < patterns; ++pattern) {
                double mass = c.mass;
                for (std::size_t k = 0; k < layer.size(); ++k) {
                    mass *= ((pattern >> k) & 1U) ? q[k] : 1.0 - q[k];
                }
                if (mass < config.prune_threshold) {
                    continue;
                }
                Config out{mass, c.nodes};
                for (std::size_t k = 0; k < layer.size(); ++k) {
                    out.nodes[layer[k].id] = static_cast<std::uint8_t>((pattern >> k) & 1U);
                }
                next.push_back(std::move(out));
                if (next.size() > kMaxConfigs) {
                    throw ResourceError(
                        "hidden-state enumeration exceeds its budget; use the shot-based backend");
                }
            }
        }
        configs = std::move(next);
    }
    return configs;
}

std::vector<double> statevector_marginals(const NetworkTopology &topology, const Circuit &net,
                                          std::span<const std::uint8_t> input,
                                          const SimulatorConfig &sim) {
    State state = init_state(topology.num_qubits(), sim);
    apply_circuit(state, prepare_input(net, topology, input));
    const auto qubits = topology.output_qubits();
    std::vector<double> out(qubits.size(), 0.0);
    const auto amps = state.amplitudes();
    for (std::size_t i = 0; i < amps.size(); ++i) {
        const double p = std::norm(amps[i]);
        if (p == 0.0) {
            continue;
        }
        for (std::size_t k = 0; k < qubits.size(); ++k) {
            if ((i >> qubits[k]) & 1U) {
                out[k] += p;
            }
        }
    }
    return out;
}

std::vector<double> shot_marginals(const NetworkTopology &topology, const std::vector<Cell> &cells,
                                   std::span<const std::uint8_t> input,
                                   const EvalOptions &options, std::uint64_t sample_index) {
    Rng rng(split_seed(options.seed, sample_index));
    const Bits start = input_nodes(topology, input);
    const auto outputs = topology.outputs();
    std::vector<double> counts(outputs.size(), 0.0);
    const std::uint64_t shots = std::max<std::uint64_t>(1, options.sampler.shots);
    Bits nodes;
    for (std::uint64_t s = 0; s < shots; ++s) {
        nodes = start;
        sample_layers(topology, cells, nodes, rng);
        for (std::size_t k = 0; k < outputs.size(); ++k) {
            counts[k] += nodes[outputs[k].id];
        }
    }
    for (auto &c : counts) {
        c /= static_cast<double>(shots);
    }
    return counts;
}

}  // namespace

std::string backend_name(Backend backend) {
    switch (backend) {
        case Backend::Statevector:
            return "statevector";
        case Backend::Exact:
            return "exact-sampler";
        case Backend::Shots:
            return "shots";
    }
    return "?";
}

Backend parse_backend(const std::string &name) {
    if (name == "statevector") return Backend::Statevector;
    if (name == "exact-sampler" || name == "exact") return Backend::Exact;
    if (name == "shots") return Backend::Shots;
    throw ContractViolation("unknown backend '" + name +
                            "' (expected statevector, exact-sampler or shots)");
}

double OutputDistribution::marginal(std::size_t output) const {
    double p = 0.0;
    for (std::size_t i = 0; i < probabilities.size(); ++i) {
        if ((i >> output) & 1U) {
            p += probabilities[i];
        }
    }
    return p;
}

ForwardTrace forward_sample(const NetworkTopology &topology, const ParameterTable &params,
                            std::span<const std::uint8_t> input, Rng &rng) {
    require_feedforward(topology);
    const auto cells = build_cells(topology, params);
    Bits nodes = input_nodes(topology, input);
    sample_layers(topology, cells, nodes, rng);
    ForwardTrace trace;
    for (std::size_t l = 1; l <= topology.num_layers(); ++l) {
        Bits bits;
        for (const auto &n : topology.layer(l)) {
            bits.push_back(nodes[n.id]);
        }
        trace.layers.push_back(std::move(bits));
    }
    trace.outputs = trace.layers.back();
    return trace;
}

OutputDistribution exact_output_distribution(const NetworkTopology &topology,
                                             const ParameterTable &params,
                                             std::span<const std::uint8_t> input,
                                             const SamplerConfig &config) {
    require_feedforward(topology);
    const auto cells = build_cells(topology, params);
    const std::size_t layers = topology.num_layers();
    std::vector<Config> configs{{1.0, input_nodes(topology, input)}};
    configs = enumerate_layers(topology, cells, std::move(configs), 1, layers - 1, config);

    const auto outputs = topology.outputs();
    if (outputs.size() > config.enumeration_limit) {
        throw ResourceError("output layer of " + std::to_string(outputs.size()) +
                            " neurons is above the enumeration limit of " +
                            std::to_string(config.enumeration_limit));
    }
    const std::size_t patterns = std::size_t{1} << outputs.size();
    OutputDistribution dist{std::vector<double>(patterns, 0.0)};
    std::vector<double> q(outputs.size());
    for (const auto &c : configs) {
        for (std::size_t k = 0; k < outputs.size(); ++k) {
            q[k] = firing(cells[outputs[k].id - topology.num_inputs()], c.nodes);
        }
        for (std::size_t pattern = 0; pattern < patterns; ++pattern) {
            double mass = c.mass;
            for (std::size_t k = 0; k < outputs.size(); ++k) {
                mass *= ((pattern >> k) & 1U) ? q[k] : 1.0 - q[k];
            }
            dist.probabilities[pattern] += mass;
        }
    }
    return dist;
}

std::vector<double> exact_joint_distribution(const NetworkTopology &topology,
                                             const ParameterTable &params,
                                             std::span<const std::uint8_t> input) {
    require_feedforward(topology);
    require(topology.num_qubits() <= 24, "joint distribution is limited to 24 qubits");
    const auto cells = build_cells(topology, params);
    SamplerConfig config;
    config.prune_threshold = 0.0;
    config.enumeration_limit = 24;
    std::vector<Config> configs{{1.0, input_nodes(topology, input)}};
    configs = enumerate_layers(topology, cells, std::move(configs), 1, topology.num_layers(),
                               config);
    std::vector<double> dist(std::size_t{1} << topology.num_qubits(), 0.0);
    for (const auto &c : configs) {
        std::size_t index = 0;
        for (NodeId node = 0; node < topology.num_nodes(); ++node) {
            if (c.nodes[node]) {
                index |= std::size_t{1} << topology.qubit(node);
            }
        }
        dist[index] += c.mass;
    }
    return dist;
}

MarginalEvaluator::MarginalEvaluator(const NetworkTopology &topology,
                                     const ParameterTable &params, const SamplerConfig &config)
    : topology_(&topology), config_(config), cells_(build_cells(topology, params)) {
    require_feedforward(topology);
}

std::vector<double> MarginalEvaluator::marginals(std::span<const std::uint8_t> input) const {
    std::vector<double> out(topology_->outputs().size());
    marginals(input, out);
    return out;
}

void MarginalEvaluator::marginals(std::span<const std::uint8_t> input,
                                  std::span<double> out) const {
    const auto &topology = *topology_;
    const std::uint32_t inputs = topology.num_inputs();
    const std::size_t layers = topology.num_layers();
    const auto outputs = topology.outputs();
    require(out.size() == outputs.size(), "output buffer has the wrong size");

    Bits nodes = input_nodes(topology, input);
    if (layers == 1) {
        for (std::size_t k = 0; k < outputs.size(); ++k) {
            out[k] = firing(cells_[outputs[k].id - inputs], nodes);
        }
        return;
    }

    std::vector<Config> configs{{1.0, std::move(nodes)}};
    if (layers >= 3) {
        configs = enumerate_layers(topology, cells_, std::move(configs), 1, layers - 2, config_);
    }

    const auto last_hidden = topology.layer(layers - 1);
    std::vector<double> q(last_hidden.size());
    std::fill(out.begin(), out.end(), 0.0);
    for (const auto &c : configs) {
        for (std::size_t k = 0; k < last_hidden.size(); ++k) {
            q[k] = firing(cells_[last_hidden[k].id - inputs], c.nodes);
        }
        for (std::size_t j = 0; j < outputs.size(); ++j) {
            const Cell &cell = cells_[outputs[j].id - inputs];
            double fixed = cell.bias_angle;
            std::complex<double> prod{1.0, 0.0};
            for (std::size_t i = 0; i < cell.sources.size(); ++i) {
                const std::int32_t s = cell.last_hidden_slot[i];
                if (s < 0) {
                    if (c.nodes[cell.sources[i]]) {
                        fixed += cell.source_angles[i];
                    }
                } else {
                    const double p = q[static_cast<std::size_t>(s)];
                    prod *= (1.0 - p) + p * cell.rotations[i];
                }
            }
            const double re = std::cos(2.0 * fixed) * prod.real() -
                              std::sin(2.0 * fixed) * prod.imag();
            out[j] += c.mass * 0.5 * (1.0 - re);
        }
    }
}

std::vector<double> output_marginals(const NetworkTopology &topology, const ParameterTable &params,
                                     std::span<const std::uint8_t> input,
                                     const EvalOptions &options, std::uint64_t sample_index) {
    switch (options.backend) {
        case Backend::Statevector:
            return statevector_marginals(topology, compile(topology, params), input,
                                         options.simulator);
        case Backend::Shots:
            require_feedforward(topology);
            return shot_marginals(topology, build_cells(topology, params), input, options,
                                  sample_index);
        case Backend::Exact:
            break;
    }
    return MarginalEvaluator(topology, params, options.sampler).marginals(input);
}

std::vector<std::vector<double>> dataset_marginals(const NetworkTopology &topology,
                                                   const ParameterTable &params,
                                                   const Dataset &data,
                                                   const EvalOptions &options) {
    std::vector<std::vector<double>> rows;
    rows.reserve(data.size());
    switch (options.backend) {
        case Backend::Statevector: {
            const Circuit net = compile(topology, params);
            for (const auto &s : data) {
                rows.push_back(statevector_marginals(topology, net, s.input, options.simulator));
            }
            break;
        }
        case Backend::Shots: {
            require_feedforward(topology);
            const auto cells = build_cells(topology, params);
            for (std::size_t i = 0; i < data.size(); ++i) {
                rows.push_back(shot_marginals(topology, cells, data[i].input, options, i));
            }
            break;
        }
        case Backend::Exact: {
            const MarginalEvaluator eval(topology, params, options.sampler);
            for (const auto &s : data) {
                rows.push_back(eval.marginals(s.input));
            }
            break;
        }
    }
    return rows;
}

double network_loss(const NetworkTopology &topology, const ParameterTable &params,
                    const Dataset &data, std::span<const std::size_t> rows,
                    const EvalOptions &options) {
    require(!rows.empty(), "loss needs a nonempty dataset");
    const std::size_t outputs = topology.outputs().size();
    std::vector<double> p(outputs);
    double total = 0.0;

    auto accumulate = [&](const Sample &s) {
        require(s.target.size() == outputs, "target width does not match the output layer");
        double sq = 0.0;
        for (std::size_t k = 0; k < outputs; ++k) {
            const double d = p[k] - static_cast<double>(s.target[k]);
            sq += d * d;
        }
        total += sq;
    };

    if (options.backend == Backend::Exact) {
        const MarginalEvaluator eval(topology, params, options.sampler);
        for (auto r : rows) {
            eval.marginals(data.at(r).input, p);
            accumulate(data[r]);
        }
    } else if (options.backend == Backend::Statevector) {
        const Circuit net = compile(topology, params);
        for (auto r : rows) {
            p = statevector_marginals(topology, net, data.at(r).input, options.simulator);
            accumulate(data[r]);
        }
    } else {
        require_feedforward(topology);
        const auto cells = build_cells(topology, params);
        for (auto r : rows) {
            p = shot_marginals(topology, cells, data.at(r).input, options, r);
            accumulate(data[r]);
        }
    }
    return total / static_cast<double>(rows.size());
}

double network_loss(const NetworkTopology &topology, const ParameterTable &params,
                    const Dataset &data, const EvalOptions &options) {
    require(!data.empty(), "loss needs a nonempty dataset");
    std::vector<std::size_t> rows(data.size());
    std::iota(rows.begin(), rows.end(), std::size_t{0});
    return network_loss(topology, params, data, rows, options);
}

int predict_class(std::span<const double> marginals) {
    require(!marginals.empty(), "no outputs to classify");
    if (marginals.size() == 1) {
        return marginals[0] > 0.5 ? 1 : 0;
    }
    std::size_t best = 0;
    for (std::size_t k = 1; k < marginals.size(); ++k) {
        if (marginals[k] > marginals[best]) {
            best = k;
        }
    }
    return static_cast<int>(best);
}

double accuracy(const NetworkTopology &topology, const ParameterTable &params,
                const Dataset &data, const EvalOptions &options) {
    require(!data.empty(), "accuracy needs a nonempty dataset");
    const auto rows = dataset_marginals(topology, params, data, options);
    std::size_t hits = 0;
    for (std::size_t i = 0; i < data.size(); ++i) {
        hits += predict_class(rows[i]) == data[i].label ? 1 : 0;
    }
    return static_cast<double>(hits) / static_cast<double>(data.size());
}

}  // namespace qsnn
