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

// Model files: one JSON document holding the topology, its constraints and the parameters.
//
//   {"format": "qsnn-model/1", "inputs": 2, "recurrent": false,
//    "layers": [[{"id": 2, "incoming": [0, 1]}]], "qubits": [0, 1, 2],
//    "ties": [["w:0>2", "w:1>2"]], "masks": [], "bounds": [{"key": "b:2", "lower": 0, "upper": 1}],
//    "weights": {"w:0>2": 1.0, "w:1>2": 1.0}, "biases": {"b:2": 0.0}}

#ifndef QSNN_MODEL_IO_H
#define QSNN_MODEL_IO_H

#include <string>

#include "qsnn/circuitry.h"
#include "qsnn/parameters.h"

namespace qsnn {

struct Model {
    NetworkTopology topology;
    ParameterTable params;
};

std::string model_to_json(const NetworkTopology &topology, const ParameterTable &params);

/// Throws ValidationError listing the offending fields.
Model model_from_json(const std::string &text);

void save_model(const std::string &path, const NetworkTopology &topology,
                const ParameterTable &params);
/// Throws IoError if unreadable, ValidationError if malformed.
Model load_model(const std::string &path);

}  // namespace qsnn

#endif  // QSNN_MODEL_IO_H
