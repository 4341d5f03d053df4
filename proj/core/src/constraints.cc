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

#include <algorithm>
#include <charconv>
#include <limits>

#include "qsnn/errors.h"
#include "qsnn/parameters.h"

namespace qsnn {

namespace {

constexpr std::size_t kUnassigned = std::numeric_limits<std::size_t>::max();

NodeId parse_node(std::string_view text, const std::string &whole) {
    NodeId value = 0;
    auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), value);
    if (ec != std::errc{} || ptr != text.data() + text.size() || text.empty()) {
        throw ContractViolation("malformed parameter key '" + whole + "'");
    }
    return value;
}

}  // namespace

std::uint64_t ParamKey::code() const {
    return (static_cast<std::uint64_t>(kind == Kind::Weight) << 63) |
           (static_cast<std::uint64_t>(source) << 32) | target;
}

std::string ParamKey::to_string() const {
    if (is_bias()) {
        return "b:" + std::to_string(target);
    }
    return "w:" + std::to_string(source) + ">" + std::to_string(target);
}

ParamKey ParamKey::parse(const std::string &text) {
    std::string_view v(text);
    if (v.starts_with("b:")) {
        return bias(parse_node(v.substr(2), text));
    }
    if (v.starts_with("w:")) {
        const auto rest = v.substr(2);
        const auto sep = rest.find('>');
        if (sep == std::string_view::npos) {
            throw ContractViolation("malformed parameter key '" + text + "'");
        }
        return weight(parse_node(rest.substr(0, sep), text), parse_node(rest.substr(sep + 1), text));
    }
    throw ContractViolation("malformed parameter key '" + text + "'");
}

ParameterLayout::ParameterLayout(std::vector<ParamKey> keys, const ConstraintSet &constraints)
    : keys_(std::move(keys)),
      constraints_(constraints),
      masked_(keys_.size(), false),
      group_of_(keys_.size(), kUnassigned),
      bounds_(keys_.size()) {
    for (std::size_t i = 0; i < keys_.size(); ++i) {
        const bool fresh = index_.emplace(keys_[i].code(), i).second;
        require(fresh, "duplicate parameter key " + keys_[i].to_string());
    }

    for (const auto &key : constraints.masks) {
        masked_[index_of(key)] = true;
    }

    for (const auto &[key, box] : constraints.bounds) {
        require(box.lower >= 0.0 && box.upper <= 1.0 && box.lower <= box.upper,
                "bounds for " + key.to_string() + " must be a sub-interval of [0, 1]");
        bounds_[index_of(key)] = box;
    }

    for (const auto &tie : constraints.ties) {
        require(!tie.empty(), "empty tie group");
        const std::size_t g = groups_.size();
        std::vector<std::size_t> members;
        for (const auto &key : tie) {
            const std::size_t i = index_of(key);
            require(!masked_[i], "masked key " + key.to_string() + " appears in a tie group");
            require(group_of_[i] == kUnassigned,
                    "key " + key.to_string() + " appears in two tie groups");
            group_of_[i] = g;
            members.push_back(i);
        }
        groups_.push_back(std::move(members));
    }

    for (std::size_t i = 0; i < keys_.size(); ++i) {
        if (!masked_[i] && group_of_[i] == kUnassigned) {
            group_of_[i] = groups_.size();
            groups_.push_back({i});
        }
    }

    for (std::size_t g = 0; g < groups_.size(); ++g) {
        const Interval box = group_bounds(g);
        require(box.lower <= box.upper, "tie group with disjoint bounds");
    }
}

std::optional<std::size_t> ParameterLayout::find(const ParamKey &key) const {
    auto it = index_.find(key.code());
    if (it == index_.end()) {
        return std::nullopt;
    }
    return it->second;
}

std::size_t ParameterLayout::index_of(const ParamKey &key) const {
    auto idx = find(key);
    if (!idx) {
        throw ContractViolation("unknown parameter key " + key.to_string());
    }
    return *idx;
}

std::size_t ParameterLayout::group_of(std::size_t index) const {
    require(index < keys_.size(), "parameter index out of range");
    require(!masked_[index], "parameter " + keys_[index].to_string() + " is masked");
    return group_of_[index];
}

std::size_t ParameterLayout::num_masked() const {
    return static_cast<std::size_t>(std::count(masked_.begin(), masked_.end(), true));
}

Interval ParameterLayout::group_bounds(std::size_t group) const {
    Interval box{0.0, 1.0};
    for (auto i : groups_.at(group)) {
        box.lower = std::max(box.lower, bounds_[i].lower);
        box.upper = std::min(box.upper, bounds_[i].upper);
    }
    return box;
}

ParameterTable::ParameterTable(std::shared_ptr<const ParameterLayout> layout)
    : layout_(std::move(layout)), values_(layout_->size(), 0.0) {}

ParameterTable::ParameterTable(std::shared_ptr<const ParameterLayout> layout,
                               std::vector<double> values)
    : layout_(std::move(layout)), values_(std::move(values)) {
    require(values_.size() == layout_->size(), "parameter count does not match the layout");
}

double ParameterTable::group_value(std::size_t group) const {
    return values_[layout_->groups().at(group).front()];
}

void ParameterTable::set_group(std::size_t group, double value) {
    const Interval box = layout_->group_bounds(group);
    const double v = std::clamp(value, box.lower, box.upper);
    for (auto i : layout_->groups().at(group)) {
        values_[i] = v;
    }
}

void ParameterTable::project() {
    const auto &groups = layout_->groups();
    for (std::size_t g = 0; g < groups.size(); ++g) {
        const auto &members = groups[g];
        double v = values_[members.front()];
        const bool agree = std::all_of(members.begin(), members.end(),
                                       [&](std::size_t i) { return values_[i] == v; });
        if (!agree) {
            double total = 0.0;
            for (auto i : members) {
                total += values_[i];
            }
            v = total / static_cast<double>(members.size());
        }
        set_group(g, v);
    }
    for (std::size_t i = 0; i < values_.size(); ++i) {
        if (layout_->masked(i)) {
            values_[i] = 0.0;
        }
    }
}

bool ParameterTable::satisfies_constraints() const {
    for (std::size_t i = 0; i < values_.size(); ++i) {
        if (layout_->masked(i)) {
            if (values_[i] != 0.0) {
                return false;
            }
            continue;
        }
        const Interval &box = layout_->bounds(i);
        if (!(values_[i] >= box.lower && values_[i] <= box.upper)) {
            return false;
        }
    }
    for (const auto &members : layout_->groups()) {
        for (auto i : members) {
            if (values_[i] != values_[members.front()]) {
                return false;
            }
        }
    }
    return true;
}

}  // namespace qsnn
