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

#include "qsnn/model_io.h"

#include <fstream>
#include <sstream>

#include "json.hpp"
#include "qsnn/errors.h"

namespace qsnn {

namespace {

using nlohmann::json;

constexpr const char *kFormat = "qsnn-model/1";

json keys_to_json(const std::vector<ParamKey> &keys) {
    json out = json::array();
    for (const auto &k : keys) {
        out.push_back(k.to_string());
    }
    return out;
}

std::vector<ParamKey> keys_from_json(const json &j) {
    std::vector<ParamKey> out;
    for (const auto &k : j) {
        out.push_back(ParamKey::parse(k.get<std::string>()));
    }
    return out;
}

// Runs `fn`, turning any parse or contract failure into a ValidationError for `field`.
template <class Fn>
auto field(std::vector<std::string> &errors, const std::string &name, Fn fn) -> decltype(fn()) {
    try {
        return fn();
    } catch (const std::exception &e) {
        errors.push_back(name + ": " + e.what());
        return decltype(fn()){};
    }
}

}  // namespace

std::string model_to_json(const NetworkTopology &topology, const ParameterTable &params) {
    check_parameters(topology, params);
    json j;
    j["format"] = kFormat;
    j["inputs"] = topology.num_inputs();
    j["recurrent"] = topology.recurrent();
    json layers = json::array();
    for (std::size_t l = 1; l <= topology.num_layers(); ++l) {
        json layer = json::array();
        for (const auto &n : topology.layer(l)) {
            layer.push_back({{"id", n.id}, {"incoming", n.sources}});
        }
        layers.push_back(layer);
    }
    j["layers"] = layers;
    j["qubits"] = topology.qubit_map();

    const auto &c = topology.constraints();
    json ties = json::array();
    for (const auto &group : c.ties) {
        ties.push_back(keys_to_json(group));
    }
    j["ties"] = ties;
    j["masks"] = keys_to_json(c.masks);
    json bounds = json::array();
    for (const auto &[key, box] : c.bounds) {
        bounds.push_back({{"key", key.to_string()}, {"lower", box.lower}, {"upper", box.upper}});
    }
    j["bounds"] = bounds;

    json weights = json::object();
    json biases = json::object();
    const auto &layout = topology.parameters();
    for (std::size_t i = 0; i < layout.size(); ++i) {
        const auto &key = layout.keys()[i];
        (key.is_bias() ? biases : weights)[key.to_string()] = params[i];
    }
    j["weights"] = weights;
    j["biases"] = biases;
    return j.dump(2) + "\n";
}

Model model_from_json(const std::string &text) {
    json j;
    try {
        j = json::parse(text);
    } catch (const json::parse_error &e) {
        throw ValidationError({std::string("document: ") + e.what()});
    }
    if (!j.is_object()) {
        throw ValidationError({"document: expected a JSON object"});
    }
    std::vector<std::string> errors;
    for (const char *required : {"format", "inputs", "layers", "weights", "biases"}) {
        if (!j.contains(required)) {
            errors.push_back(std::string(required) + ": missing");
        }
    }
    if (!errors.empty()) {
        throw ValidationError(errors);
    }
    if (j["format"] != kFormat) {
        errors.push_back("format: expected \"" + std::string(kFormat) + "\"");
    }
    const auto inputs = field(errors, "inputs", [&] { return j["inputs"].get<std::uint32_t>(); });
    const bool recurrent = field(errors, "recurrent", [&] { return j.value("recurrent", false); });
    auto layers = field(errors, "layers", [&] {
        std::vector<std::vector<NeuronSpec>> out;
        for (const auto &layer : j["layers"]) {
            std::vector<NeuronSpec> specs;
            for (const auto &n : layer) {
                specs.push_back(NeuronSpec{n.at("id").get<NodeId>(),
                                           n.at("incoming").get<std::vector<NodeId>>(),
                                           static_cast<std::uint32_t>(out.size() + 1)});
            }
            out.push_back(std::move(specs));
        }
        return out;
    });
    auto qubits = field(errors, "qubits", [&] {
        return j.value("qubits", std::vector<Qubit>{});
    });
    ConstraintSet constraints;
    constraints.ties = field(errors, "ties", [&] {
        std::vector<std::vector<ParamKey>> out;
        for (const auto &group : j.value("ties", json::array())) {
            out.push_back(keys_from_json(group));
        }
        return out;
    });
    constraints.masks = field(errors, "masks", [&] {
        return keys_from_json(j.value("masks", json::array()));
    });
    constraints.bounds = field(errors, "bounds", [&] {
        std::vector<std::pair<ParamKey, Interval>> out;
        for (const auto &b : j.value("bounds", json::array())) {
            out.emplace_back(ParamKey::parse(b.at("key").get<std::string>()),
                             Interval{b.at("lower").get<double>(), b.at("upper").get<double>()});
        }
        return out;
    });
    if (!errors.empty()) {
        throw ValidationError(errors);
    }

    std::optional<NetworkTopology> topology;
    try {
        topology.emplace(inputs, layers, constraints, recurrent, qubits);
    } catch (const std::exception &e) {
        throw ValidationError({std::string("layers: ") + e.what()});
    }

    ParameterTable params = topology->zero_parameters();
    const auto &layout = topology->parameters();
    std::vector<bool> seen(layout.size(), false);
    for (const char *section : {"weights", "biases"}) {
        if (!j[section].is_object()) {
            errors.push_back(std::string(section) + ": expected an object");
            continue;
        }
        for (const auto &[name, value] : j[section].items()) {
            const std::string where = std::string(section) + "." + name;
            try {
                const ParamKey key = ParamKey::parse(name);
                const auto idx = layout.find(key);
                if (!idx || key.is_bias() != (std::string(section) == "biases")) {
                    errors.push_back(where + ": not a parameter of this topology");
                    continue;
                }
                seen[*idx] = true;
                const double v = value.get<double>();
                if (!(v >= 0.0 && v <= 1.0)) {
                    errors.push_back(where + ": value outside [0, 1]");
                    continue;
                }
                params[*idx] = v;
            } catch (const std::exception &e) {
                errors.push_back(where + ": " + e.what());
            }
        }
    }
    for (std::size_t i = 0; i < layout.size(); ++i) {
        if (!seen[i]) {
            errors.push_back((layout.keys()[i].is_bias() ? "biases." : "weights.") +
                             layout.keys()[i].to_string() + ": missing");
        }
    }
    if (errors.empty() && !params.satisfies_constraints()) {
        errors.push_back("weights: values violate the declared ties, masks or bounds");
    }
    if (!errors.empty()) {
        throw ValidationError(errors);
    }
    return Model{std::move(*topology), std::move(params)};
}

void save_model(const std::string &path, const NetworkTopology &topology,
                const ParameterTable &params) {
    std::ofstream out(path);
    if (!out) {
        throw IoError("cannot write " + path);
    }
    out << model_to_json(topology, params);
}

Model load_model(const std::string &path) {
    std::ifstream in(path);
    if (!in) {
        throw IoError("cannot open " + path);
    }
    std::stringstream ss;
    ss << in.rdbuf();
    return model_from_json(ss.str());
}

}  // namespace qsnn
