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

#ifndef QSNN_PARAMETERS_H
#define QSNN_PARAMETERS_H

#include <cstdint>
#include <memory>
#include <optional>
#include <span>
#include <string>
#include <unordered_map>
#include <vector>

#include "qsnn/types.h"

namespace qsnn {

/// Identifies one trainable value: an edge weight (source -> target) or a neuron bias.
struct ParamKey {
    enum class Kind : std::uint8_t { Weight, Bias };

    Kind kind = Kind::Bias;
    NodeId source = 0;  // equals `target` for biases
    NodeId target = 0;

    static ParamKey weight(NodeId source, NodeId target) { return {Kind::Weight, source, target}; }
    static ParamKey bias(NodeId neuron) { return {Kind::Bias, neuron, neuron}; }

    bool is_bias() const { return kind == Kind::Bias; }
    std::uint64_t code() const;

    /// "w:3>7" for weights, "b:7" for biases.
    std::string to_string() const;
    static ParamKey parse(const std::string &text);

    bool operator==(const ParamKey &) const = default;
};

struct Interval {
    double lower = 0.0;
    double upper = 1.0;
    bool operator==(const Interval &) const = default;
};

/// Key-level constraints attached to a topology.
///   ties   groups of keys that always carry the same value (shared weights)
///   masks  keys pinned to zero and never optimized (cut connections)
///   bounds per-key box, default [0, 1]
struct ConstraintSet {
    std::vector<std::vector<ParamKey>> ties;
    std::vector<ParamKey> masks;
    std::vector<std::pair<ParamKey, Interval>> bounds;
};

/// Constraints resolved against an ordered key list. Every unmasked key belongs to exactly
/// one free group; untied keys form singleton groups.
class ParameterLayout {
   public:
    ParameterLayout(std::vector<ParamKey> keys, const ConstraintSet &constraints);

    std::size_t size() const { return keys_.size(); }
    const std::vector<ParamKey> &keys() const { return keys_; }
    const ConstraintSet &constraints() const { return constraints_; }

    std::optional<std::size_t> find(const ParamKey &key) const;
    std::size_t index_of(const ParamKey &key) const;  // throws ContractViolation if absent

    bool masked(std::size_t index) const { return masked_[index]; }
    /// Free group of a parameter; throws for masked parameters.
    std::size_t group_of(std::size_t index) const;
    const std::vector<std::vector<std::size_t>> &groups() const { return groups_; }
    std::size_t num_groups() const { return groups_.size(); }
    std::size_t num_masked() const;
    const Interval &bounds(std::size_t index) const { return bounds_[index]; }
    /// Intersection of the member boxes.
    Interval group_bounds(std::size_t group) const;

   private:
    std::vector<ParamKey> keys_;
    ConstraintSet constraints_;
    std::unordered_map<std::uint64_t, std::size_t> index_;
    std::vector<bool> masked_;
    std::vector<std::size_t> group_of_;
    std::vector<std::vector<std::size_t>> groups_;
    std::vector<Interval> bounds_;
};

/// Weights and biases as probabilities in [0, 1], stored flat in layout order.
class ParameterTable {
   public:
    ParameterTable() = default;
    explicit ParameterTable(std::shared_ptr<const ParameterLayout> layout);
    ParameterTable(std::shared_ptr<const ParameterLayout> layout, std::vector<double> values);

    const ParameterLayout &layout() const { return *layout_; }
    const std::shared_ptr<const ParameterLayout> &layout_ptr() const { return layout_; }
    std::size_t size() const { return values_.size(); }

    std::span<const double> values() const { return values_; }
    double operator[](std::size_t i) const { return values_[i]; }
    double &operator[](std::size_t i) { return values_[i]; }

    double get(const ParamKey &key) const { return values_[layout_->index_of(key)]; }
    void set(const ParamKey &key, double value) { values_[layout_->index_of(key)] = value; }
    double weight(NodeId source, NodeId target) const {
        return get(ParamKey::weight(source, target));
    }
    double bias(NodeId neuron) const { return get(ParamKey::bias(neuron)); }

    /// Value of a free group (its members agree after `project`).
    double group_value(std::size_t group) const;
    /// Writes `value` to every member of `group`, clipped to the group box.
    void set_group(std::size_t group, double value);

    /// Sets each tie group to the mean of its members, clips to bounds, zeroes masks.
    void project();

    /// True when bounds hold, tie groups agree exactly and masked entries are zero.
    bool satisfies_constraints() const;

    bool operator==(const ParameterTable &other) const { return values_ == other.values_; }

   private:
    std::shared_ptr<const ParameterLayout> layout_;
    std::vector<double> values_;
};

}  // namespace qsnn

#endif  // QSNN_PARAMETERS_H
