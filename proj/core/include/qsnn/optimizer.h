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

// Kiefer-Wolfowitz central differences inside a simulated-annealing accept/reject chain.
//
// Losses are minimized. One iteration n:
//   1. pick a random subset of free parameter groups (a tie group moves as one value)
//   2. g_j = (e(x + c_n u_j) - e(x - c_n u_j)) / (2 c_n)   with perturbed values clipped
//   3. candidate = project(x - a_n g)
//   4. accept with probability min(1, exp(-(e(candidate) - e(x)) / (k T_n)))
// Projection keeps every iterate inside the box, tie groups equal and masked keys at zero.

#ifndef QSNN_OPTIMIZER_H
#define QSNN_OPTIMIZER_H

#include <cstdint>
#include <functional>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "qsnn/circuitry.h"
#include "qsnn/parameters.h"
#include "qsnn/sampler.h"
#include "qsnn/types.h"

namespace qsnn {

/// a_n = a0 / (n+1)^alpha,  c_n = c0 / (n+1)^gamma.
struct KWSchedule {
    double a0 = 0.2;
    double c0 = 0.05;
    double alpha = 0.602;
    double gamma = 0.101;

    double step(std::uint64_t n) const;
    double perturbation(std::uint64_t n) const;
    void validate() const;
};

/// T_t = t0 * beta^t, acceptance damped by k.
struct AnnealSchedule {
    double t0 = 0.1;
    double beta = 0.995;
    double k = 1.0;

    double temperature(std::uint64_t t) const;
    void validate() const;
};

enum class AcceptRule {
    Anneal,       // Metropolis acceptance at the current temperature
    DescentOnly,  // accept iff the loss does not increase
};

struct TrainConfig {
    std::uint64_t budget = 2000;
    /// Free groups perturbed per iteration (capped at the number of groups).
    std::size_t coords_per_step = 8;
    /// Held-out accuracy is recorded every `eval_every` iterations (0 disables it).
    std::uint64_t eval_every = 0;
    AcceptRule rule = AcceptRule::Anneal;
    /// Rows per minibatch; 0 evaluates the full training set every time.
    std::size_t batch_size = 0;
    /// Initial values are drawn uniformly from this box.
    Interval init{0.05, 0.5};
};

struct TraceRecord {
    std::uint64_t iteration = 0;
    double loss = 0.0;
    double temperature = 0.0;
    bool accepted = false;
    std::optional<double> accuracy;
};

struct TrainingTrace {
    std::vector<TraceRecord> records;

    /// Header `iteration,loss,temperature,accepted,accuracy`; accuracy empty when absent.
    std::string to_csv() const;
};

/// One estimate per free group.
struct GradientEstimate {
    std::vector<std::size_t> groups;
    std::vector<double> values;
};

using LossFn = std::function<double(const ParameterTable &)>;

/// Central differences for the groups containing `coords` (parameter indices). Each group
/// is perturbed jointly; the divisor is the clipped span, i.e. 2c away from the bounds.
GradientEstimate kw_gradient(const LossFn &loss, const ParameterTable &params, double c,
                             std::span<const std::size_t> coords);

/// project(params - a * gradient).
ParameterTable propose(const ParameterTable &params, const GradientEstimate &gradient, double a);

/// Metropolis rule: always accepts downhill, uphill with exp(-(e_new - e_old) / (k T)).
bool sa_accept(double e_old, double e_new, double temperature, double k, Rng &rng);

/// Uniform draw from `box` per free group, masked keys zero.
ParameterTable random_parameters(const std::shared_ptr<const ParameterLayout> &layout,
                                 Interval box, Rng &rng);

struct TrainResult {
    ParameterTable params;  // best-so-far
    double best_loss = 0.0;
    TrainingTrace trace;
};

struct TrainHooks {
    /// Held-out accuracy, sampled every `eval_every` iterations.
    std::function<double(const ParameterTable &)> evaluate;
    /// Called with every iterate after the accept/reject decision.
    std::function<void(std::uint64_t, const ParameterTable &)> on_iterate;
    /// Called before iteration n; returning true means the loss changed (a new minibatch)
    /// and the current state has to be re-scored.
    std::function<bool(std::uint64_t)> before_iteration;
    /// Ranks best-so-far candidates when `before_iteration` makes the loss noisy.
    LossFn reference_loss;
};

/// Generic optimizer over any loss of a parameter table.
TrainResult minimize(const LossFn &loss, ParameterTable initial, const KWSchedule &kw,
                     const AnnealSchedule &anneal, const TrainConfig &config, Rng &rng,
                     const TrainHooks &hooks = {});

/// Trains `topology` on `data` with the l2 loss of its output marginals.
TrainResult train(const NetworkTopology &topology, const Dataset &data, const KWSchedule &kw,
                  const AnnealSchedule &anneal, const TrainConfig &config, Rng &rng,
                  const EvalOptions &eval = {}, const TrainHooks &hooks = {});

}  // namespace qsnn

#endif  // QSNN_OPTIMIZER_H
