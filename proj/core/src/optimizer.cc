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

#include "qsnn/optimizer.h"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <numeric>

#include "qsnn/errors.h"

namespace qsnn {

namespace {

constexpr std::uint64_t kBatchCheckpointEvery = 25;

std::string format_double(double v) {
    char buf[32];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    return buf;
}

// Distinct random groups, at most `count`.
std::vector<std::size_t> pick_groups(std::size_t num_groups, std::size_t count, Rng &rng) {
    std::vector<std::size_t> all(num_groups);
    std::iota(all.begin(), all.end(), std::size_t{0});
    count = std::min(count, num_groups);
    for (std::size_t i = 0; i < count; ++i) {
        const std::size_t j = i + uniform_index(rng, num_groups - i);
        std::swap(all[i], all[j]);
    }
    all.resize(count);
    return all;
}

}  // namespace

double KWSchedule::step(std::uint64_t n) const {
    return a0 / std::pow(static_cast<double>(n) + 1.0, alpha);
}

double KWSchedule::perturbation(std::uint64_t n) const {
    return c0 / std::pow(static_cast<double>(n) + 1.0, gamma);
}

void KWSchedule::validate() const {
    require(a0 > 0 && c0 > 0, "KW seeds a0 and c0 must be positive");
    require(alpha >= 0 && gamma >= 0, "KW decay exponents must be nonnegative");
}

double AnnealSchedule::temperature(std::uint64_t t) const {
    return t0 * std::pow(beta, static_cast<double>(t));
}

void AnnealSchedule::validate() const {
    require(t0 > 0, "initial temperature must be positive");
    require(beta > 0 && beta < 1, "cooling factor must lie in (0, 1)");
    require(k > 0, "damping factor must be positive");
}

std::string TrainingTrace::to_csv() const {
    std::string out = "iteration,loss,temperature,accepted,accuracy\n";
    for (const auto &r : records) {
        out += std::to_string(r.iteration);
        out += ',';
        out += format_double(r.loss);
        out += ',';
        out += format_double(r.temperature);
        out += r.accepted ? ",1," : ",0,";
        if (r.accuracy) {
            out += format_double(*r.accuracy);
        }
        out += '\n';
    }
    return out;
}

GradientEstimate kw_gradient(const LossFn &loss, const ParameterTable &params, double c,
                             std::span<const std::size_t> coords) {
    require(c > 0, "KW perturbation must be positive");
    const auto &layout = params.layout();
    GradientEstimate est;
    for (auto coord : coords) {
        require(coord < layout.size(), "coordinate out of range");
        const std::size_t g = layout.group_of(coord);  // throws on masked keys
        if (std::find(est.groups.begin(), est.groups.end(), g) == est.groups.end()) {
            est.groups.push_back(g);
        }
    }
    for (auto g : est.groups) {
        const Interval box = layout.group_bounds(g);
        const double x = params.group_value(g);
        const double hi = std::min(x + c, box.upper);
        const double lo = std::max(x - c, box.lower);
        if (hi <= lo) {
            est.values.push_back(0.0);
            continue;
        }
        ParameterTable plus = params;
        plus.set_group(g, hi);
        ParameterTable minus = params;
        minus.set_group(g, lo);
        est.values.push_back((loss(plus) - loss(minus)) / (hi - lo));
    }
    return est;
}

ParameterTable propose(const ParameterTable &params, const GradientEstimate &gradient, double a) {
    require(gradient.groups.size() == gradient.values.size(), "malformed gradient estimate");
    ParameterTable next = params;
    for (std::size_t i = 0; i < gradient.groups.size(); ++i) {
        const std::size_t g = gradient.groups[i];
        if (gradient.values[i] == 0.0) {
            continue;
        }
        next.set_group(g, params.group_value(g) - a * gradient.values[i]);
    }
    next.project();
    return next;
}

bool sa_accept(double e_old, double e_new, double temperature, double k, Rng &rng) {
    require(temperature > 0 && k > 0, "temperature and damping factor must be positive");
    if (e_new <= e_old) {
        return true;
    }
    return uniform01(rng) < std::exp(-(e_new - e_old) / (k * temperature));
}

ParameterTable random_parameters(const std::shared_ptr<const ParameterLayout> &layout,
                                 Interval box, Rng &rng) {
    require(box.lower <= box.upper && box.lower >= 0 && box.upper <= 1,
            "initialization box must lie within [0, 1]");
    ParameterTable params(layout);
    for (std::size_t g = 0; g < layout->num_groups(); ++g) {
        params.set_group(g, box.lower + (box.upper - box.lower) * uniform01(rng));
    }
    params.project();
    return params;
}

TrainResult minimize(const LossFn &loss, ParameterTable initial, const KWSchedule &kw,
                     const AnnealSchedule &anneal, const TrainConfig &config, Rng &rng,
                     const TrainHooks &hooks) {
    require(config.budget > 0, "iteration budget must be positive");
    kw.validate();
    anneal.validate();

    const auto &layout = initial.layout();
    const bool noisy = static_cast<bool>(hooks.before_iteration);
    const LossFn &rank = noisy && hooks.reference_loss ? hooks.reference_loss : loss;

    ParameterTable current = std::move(initial);
    current.project();
    if (noisy) {
        hooks.before_iteration(0);
    }
    double energy = loss(current);

    TrainResult result;
    result.params = current;
    result.best_loss = noisy ? rank(current) : energy;

    for (std::uint64_t n = 0; n < config.budget; ++n) {
        if (noisy && n > 0 && hooks.before_iteration(n)) {
            energy = loss(current);
        }
        const auto groups = pick_groups(layout.num_groups(), config.coords_per_step, rng);
        std::vector<std::size_t> coords;
        coords.reserve(groups.size());
        for (auto g : groups) {
            coords.push_back(layout.groups()[g].front());
        }

        bool accepted = false;
        const double temperature = anneal.temperature(n);
        if (!coords.empty()) {
            const auto grad = kw_gradient(loss, current, kw.perturbation(n), coords);
            ParameterTable candidate = propose(current, grad, kw.step(n));
            const double e_new = loss(candidate);
            accepted = config.rule == AcceptRule::Anneal
                           ? sa_accept(energy, e_new, temperature, anneal.k, rng)
                           : e_new <= energy;
            if (accepted) {
                current = std::move(candidate);
                energy = e_new;
            }
        }

        if (!noisy) {
            if (energy < result.best_loss) {
                result.best_loss = energy;
                result.params = current;
            }
        } else if ((n + 1) % kBatchCheckpointEvery == 0 || n + 1 == config.budget) {
            const double ref = rank(current);
            if (ref < result.best_loss) {
                result.best_loss = ref;
                result.params = current;
            }
        }

        TraceRecord record{n, energy, temperature, accepted, std::nullopt};
        if (hooks.evaluate && config.eval_every > 0 &&
            (n % config.eval_every == 0 || n + 1 == config.budget)) {
            record.accuracy = hooks.evaluate(current);
        }
        result.trace.records.push_back(record);
        if (hooks.on_iterate) {
            hooks.on_iterate(n, current);
        }
    }
    return result;
}

TrainResult train(const NetworkTopology &topology, const Dataset &data, const KWSchedule &kw,
                  const AnnealSchedule &anneal, const TrainConfig &config, Rng &rng,
                  const EvalOptions &eval, const TrainHooks &hooks) {
    require(!data.empty(), "training needs a nonempty dataset");
    require(config.budget > 0, "iteration budget must be positive");
    ParameterTable initial = random_parameters(topology.layout_ptr(), config.init, rng);

    std::vector<std::size_t> rows(data.size());
    std::iota(rows.begin(), rows.end(), std::size_t{0});
    const bool batched = config.batch_size > 0 && config.batch_size < data.size();

    LossFn loss = [&](const ParameterTable &p) {
        return network_loss(topology, p, data, rows, eval);
    };

    TrainHooks all = hooks;
    std::vector<std::size_t> order(data.size());
    std::iota(order.begin(), order.end(), std::size_t{0});
    if (batched) {
        Rng batch_rng(rng());
        all.before_iteration = [&, batch_rng](std::uint64_t) mutable {
            for (std::size_t i = 0; i < config.batch_size; ++i) {
                const std::size_t j = i + uniform_index(batch_rng, order.size() - i);
                std::swap(order[i], order[j]);
            }
            rows.assign(order.begin(), order.begin() + static_cast<std::ptrdiff_t>(config.batch_size));
            return true;
        };
        all.reference_loss = [&](const ParameterTable &p) {
            return network_loss(topology, p, data, eval);
        };
    }
    return minimize(loss, std::move(initial), kw, anneal, config, rng, all);
}

}  // namespace qsnn
