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

#include "qsnn/experiment.h"

#include <algorithm>
#include <bit>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <set>
#include <sstream>

#include "json.hpp"
#include "qsnn/errors.h"
#include "qsnn/grover.h"
#include "qsnn/model_io.h"

namespace qsnn {

namespace {

using nlohmann::json;
namespace fs = std::filesystem;

// Stream tags for split_seed so every consumer of a run seed draws independently.
constexpr std::uint64_t kDataStream = 1;
constexpr std::uint64_t kTrainStream = 2;
constexpr std::uint64_t kShotStream = 3;
constexpr std::uint64_t kRecallStream = 4;
constexpr std::uint64_t kGroverStream = 5;

const std::set<std::string> kModelKinds{"shallow", "hopfield", "rbm", "autoencoder", "cnn"};
const std::set<std::string> kSources{"uci", "mnist", "bars-and-stripes", "stripes", "truth-table"};

// Reads typed fields out of one JSON object, collecting errors instead of throwing.
class Reader {
   public:
    Reader(const json &object, std::string prefix, std::vector<std::string> &errors)
        : object_(object), prefix_(std::move(prefix)), errors_(errors) {
        if (!object_.is_object()) {
            errors_.push_back(prefix_ + ": expected an object");
        }
    }

    template <class T>
    void get(const std::string &key, T &out) {
        used_.insert(key);
        if (!object_.is_object() || !object_.contains(key)) {
            return;
        }
        try {
            out = object_.at(key).get<T>();
        } catch (const json::exception &) {
            errors_.push_back(path(key) + ": wrong type");
        }
    }

    const json *child(const std::string &key) {
        used_.insert(key);
        if (!object_.is_object() || !object_.contains(key)) {
            return nullptr;
        }
        return &object_.at(key);
    }

    std::string path(const std::string &key) const {
        return prefix_.empty() ? key : prefix_ + "." + key;
    }

    void error(const std::string &key, const std::string &message) {
        errors_.push_back(path(key) + ": " + message);
    }

    void finish() {
        if (!object_.is_object()) {
            return;
        }
        for (const auto &[key, value] : object_.items()) {
            if (!used_.count(key)) {
                errors_.push_back(path(key) + ": unknown field");
            }
        }
    }

   private:
    const json &object_;
    std::string prefix_;
    std::vector<std::string> &errors_;
    std::set<std::string> used_;
};

std::string rule_name(AcceptRule rule) {
    return rule == AcceptRule::Anneal ? "anneal" : "descent-only";
}

std::string stripe_rule_name(StripeRule rule) {
    return rule == StripeRule::SingleLine ? "single-line" : "all-lines";
}

std::string recall_mode_name(RecallMode mode) {
    return mode == RecallMode::Sample ? "sample" : "argmax";
}

void write_file(const fs::path &path, const std::string &content) {
    std::ofstream out(path, std::ios::binary);
    if (!out) {
        throw IoError("cannot write " + path.string());
    }
    out << content;
}

fs::path output_dir(const ExperimentConfig &config) {
    fs::path dir = config.resolve(config.output_dir);
    std::error_code ec;
    fs::create_directories(dir, ec);
    if (ec) {
        throw IoError("cannot create " + dir.string() + ": " + ec.message());
    }
    return dir;
}

std::string fmt(double v) {
    char buf[32];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    return buf;
}

json split_json(const SplitMetrics &m, bool reconstruction) {
    json j{{"loss", m.loss}, {"mse", m.mse}};
    if (!reconstruction) {
        j["accuracy"] = m.accuracy;
        j["confusion"] = m.confusion;
    }
    return j;
}

Dataset truth_table(const std::string &name) {
    Dataset out;
    if (name == "xor") {
        for (std::uint64_t x = 0; x < 4; ++x) {
            const int label = static_cast<int>((x & 1) ^ (x >> 1));
            out.push_back(Sample{index_to_bits(x, 2), Bits{static_cast<std::uint8_t>(label)}, label});
        }
    } else if (name == "one-dot") {
        for (std::uint64_t x = 0; x < 16; ++x) {
            const int label = std::popcount(x) == 1 ? 1 : 0;
            out.push_back(Sample{index_to_bits(x, 4), Bits{static_cast<std::uint8_t>(label)}, label});
        }
    } else {
        throw ContractViolation("unknown truth table '" + name + "'");
    }
    return out;
}

EvalOptions seeded_eval(const ExperimentConfig &config, std::uint64_t seed) {
    EvalOptions eval = config.eval;
    eval.seed = split_seed(config.eval.seed ^ seed, kShotStream);
    return eval;
}

}  // namespace

std::string ExperimentConfig::resolve(const std::string &path) const {
    if (path.empty() || fs::path(path).is_absolute()) {
        return path;
    }
    return (fs::path(base_dir) / path).lexically_normal().string();
}

ExperimentConfig parse_config(const std::string &text, const std::string &base_dir) {
    json doc;
    try {
        doc = json::parse(text);
    } catch (const json::parse_error &e) {
        throw ValidationError({std::string("document: ") + e.what()});
    }
    ExperimentConfig c;
    c.base_dir = base_dir;
    std::vector<std::string> errors;
    Reader top(doc, "", errors);
    top.get("name", c.name);
    top.get("output_dir", c.output_dir);

    if (const json *m = top.child("model")) {
        Reader r(*m, "model", errors);
        r.get("kind", c.model.kind);
        r.get("inputs", c.model.inputs);
        r.get("outputs", c.model.outputs);
        r.get("hidden", c.model.hidden);
        r.get("units", c.model.units);
        r.get("latent", c.model.latent);
        r.get("height", c.model.height);
        r.get("width", c.model.width);
        std::vector<std::uint32_t> kernel{c.model.kernel.rows, c.model.kernel.cols};
        r.get("kernel", kernel);
        if (kernel.size() != 2) {
            r.error("kernel", "expected [rows, cols]");
        } else {
            c.model.kernel = KernelShape{kernel[0], kernel[1]};
        }
        r.get("stride", c.model.stride);
        r.finish();
        if (!kModelKinds.count(c.model.kind)) {
            r.error("kind", "unknown model kind '" + c.model.kind + "'");
        }
    }

    if (const json *d = top.child("dataset")) {
        Reader r(*d, "dataset", errors);
        auto &ds = c.dataset;
        r.get("source", ds.source);
        r.get("task", ds.task);
        r.get("name", ds.name);
        r.get("data_dir", ds.data_dir);
        r.get("train_fraction", ds.train_fraction);
        r.get("clusters", ds.clusters);
        if (const json *features = r.child("features")) {
            if (!features->is_array()) {
                r.error("features", "expected an array");
            } else {
                for (std::size_t i = 0; i < features->size(); ++i) {
                    Reader f((*features)[i], "dataset.features[" + std::to_string(i) + "]", errors);
                    FeatureEncoding enc;
                    enc.clusters = ds.clusters;
                    f.get("name", enc.feature);
                    f.get("clusters", enc.clusters);
                    f.get("identity", enc.identity);
                    f.finish();
                    if (enc.feature.empty()) {
                        f.error("name", "missing");
                    }
                    if (!enc.identity && enc.clusters < 1) {
                        f.error("clusters", "must be at least 1");
                    }
                    ds.features.push_back(enc);
                }
            }
        }
        r.get("images", ds.images);
        r.get("labels", ds.labels);
        r.get("classes", ds.mnist.classes);
        r.get("train", ds.mnist.train);
        r.get("test", ds.mnist.test);
        r.get("grid", ds.mnist.grid);
        r.get("block", ds.mnist.block);
        r.get("side", ds.side);
        std::string rule = stripe_rule_name(ds.rule);
        r.get("rule", rule);
        if (rule == "single-line") {
            ds.rule = StripeRule::SingleLine;
        } else if (rule == "all-lines") {
            ds.rule = StripeRule::AllLines;
        } else {
            r.error("rule", "expected single-line or all-lines");
        }
        r.get("rows", ds.rows);
        r.get("stripes", ds.stripes);
        r.get("corrupted", ds.corrupted);
        r.get("table", ds.table);
        r.finish();
        if (!kSources.count(ds.source)) {
            r.error("source", "unknown source '" + ds.source + "'");
        }
        if (ds.task != "classification" && ds.task != "reconstruction") {
            r.error("task", "expected classification or reconstruction");
        }
        if (!(ds.train_fraction > 0.0 && ds.train_fraction < 1.0)) {
            r.error("train_fraction", "must lie in (0, 1)");
        }
        if (ds.clusters < 1) {
            r.error("clusters", "must be at least 1");
        }
        if (ds.source == "mnist" && (ds.images.empty() || ds.labels.empty())) {
            r.error("images", "mnist needs both images and labels paths");
        }
        if (ds.source == "truth-table" && ds.table != "xor" && ds.table != "one-dot") {
            r.error("table", "expected xor or one-dot");
        }
        if (ds.source == "stripes") {
            for (const auto &s : ds.stripes) {
                if (s.empty() || s.size() != ds.stripes.front().size() ||
                    std::any_of(s.begin(), s.end(), [](auto b) { return b > 1; })) {
                    r.error("stripes", "expected equal-length bit lists");
                    break;
                }
            }
            if (ds.stripes.empty()) {
                r.error("stripes", "at least one pattern is required");
            }
        }
    }

    if (const json *o = top.child("optimizer")) {
        Reader r(*o, "optimizer", errors);
        r.get("budget", c.train.budget);
        r.get("coords_per_step", c.train.coords_per_step);
        r.get("eval_every", c.train.eval_every);
        r.get("batch_size", c.train.batch_size);
        std::string rule = rule_name(c.train.rule);
        r.get("rule", rule);
        if (rule == "anneal") {
            c.train.rule = AcceptRule::Anneal;
        } else if (rule == "descent-only") {
            c.train.rule = AcceptRule::DescentOnly;
        } else {
            r.error("rule", "expected anneal or descent-only");
        }
        std::vector<double> init{c.train.init.lower, c.train.init.upper};
        r.get("init", init);
        if (init.size() != 2 || !(init[0] >= 0 && init[0] <= init[1] && init[1] <= 1)) {
            r.error("init", "expected [lower, upper] within [0, 1]");
        } else {
            c.train.init = Interval{init[0], init[1]};
        }
        r.get("a0", c.kw.a0);
        r.get("c0", c.kw.c0);
        r.get("alpha", c.kw.alpha);
        r.get("gamma", c.kw.gamma);
        r.get("t0", c.anneal.t0);
        r.get("beta", c.anneal.beta);
        r.get("k", c.anneal.k);
        r.finish();
        if (c.train.budget == 0) {
            r.error("budget", "must be positive");
        }
        if (c.train.coords_per_step == 0) {
            r.error("coords_per_step", "must be positive");
        }
        if (!(c.kw.a0 > 0)) r.error("a0", "must be positive");
        if (!(c.kw.c0 > 0)) r.error("c0", "must be positive");
        if (!(c.kw.alpha >= 0)) r.error("alpha", "must be nonnegative");
        if (!(c.kw.gamma >= 0)) r.error("gamma", "must be nonnegative");
        if (!(c.anneal.t0 > 0)) r.error("t0", "must be positive");
        if (!(c.anneal.beta > 0 && c.anneal.beta < 1)) r.error("beta", "must lie in (0, 1)");
        if (!(c.anneal.k > 0)) r.error("k", "must be positive");
    }

    if (const json *s = top.child("seeds")) {
        try {
            c.seeds = s->get<std::vector<std::uint64_t>>();
        } catch (const json::exception &) {
            top.error("seeds", "expected a list of unsigned integers");
        }
        if (c.seeds.empty()) {
            top.error("seeds", "at least one seed is required");
        }
    }

    std::string backend = backend_name(c.eval.backend);
    top.get("backend", backend);
    try {
        c.eval.backend = parse_backend(backend);
    } catch (const std::exception &) {
        top.error("backend", "expected statevector, exact-sampler or shots");
    }
    top.get("shots", c.eval.sampler.shots);
    top.get("enumeration_limit", c.eval.sampler.enumeration_limit);
    top.get("prune_threshold", c.eval.sampler.prune_threshold);
    top.get("max_qubits", c.eval.simulator.max_qubits);
    top.get("shot_seed", c.eval.seed);
    if (c.eval.sampler.shots == 0) {
        top.error("shots", "must be positive");
    }

    if (const json *h = top.child("hopfield")) {
        Reader r(*h, "hopfield", errors);
        r.get("max_iters", c.hopfield.max_iters);
        r.get("runs", c.hopfield.runs);
        std::string mode = recall_mode_name(c.hopfield.mode);
        r.get("mode", mode);
        if (mode == "sample") {
            c.hopfield.mode = RecallMode::Sample;
        } else if (mode == "argmax") {
            c.hopfield.mode = RecallMode::Argmax;
        } else {
            r.error("mode", "expected sample or argmax");
        }
        r.finish();
    }

    if (const json *g = top.child("grover")) {
        Reader r(*g, "grover", errors);
        r.get("iterations", c.grover.iterations);
        r.get("shots", c.grover.shots);
        r.get("marked_output", c.grover.marked_output);
        r.get("model", c.grover.model);
        r.finish();
        if (c.grover.shots == 0) {
            r.error("shots", "must be positive");
        }
    }
    top.finish();

    if (!errors.empty()) {
        throw ValidationError(errors);
    }
    return c;
}

ExperimentConfig load_config(const std::string &path) {
    std::ifstream in(path);
    if (!in) {
        throw IoError("cannot open " + path);
    }
    std::stringstream ss;
    ss << in.rdbuf();
    auto base = fs::path(path).parent_path().string();
    return parse_config(ss.str(), base.empty() ? "." : base);
}

std::string resolved_config_json(const ExperimentConfig &c) {
    json features = json::array();
    for (const auto &f : c.dataset.features) {
        features.push_back({{"name", f.feature}, {"clusters", f.clusters}, {"identity", f.identity}});
    }
    json j{
        {"name", c.name},
        {"output_dir", c.output_dir},
        {"model",
         {{"kind", c.model.kind},
          {"inputs", c.model.inputs},
          {"outputs", c.model.outputs},
          {"hidden", c.model.hidden},
          {"units", c.model.units},
          {"latent", c.model.latent},
          {"height", c.model.height},
          {"width", c.model.width},
          {"kernel", {c.model.kernel.rows, c.model.kernel.cols}},
          {"stride", c.model.stride}}},
        {"dataset",
         {{"source", c.dataset.source},
          {"task", c.dataset.task},
          {"name", c.dataset.name},
          {"data_dir", c.dataset.data_dir},
          {"train_fraction", c.dataset.train_fraction},
          {"clusters", c.dataset.clusters},
          {"features", features},
          {"images", c.dataset.images},
          {"labels", c.dataset.labels},
          {"classes", c.dataset.mnist.classes},
          {"train", c.dataset.mnist.train},
          {"test", c.dataset.mnist.test},
          {"grid", c.dataset.mnist.grid},
          {"block", c.dataset.mnist.block},
          {"side", c.dataset.side},
          {"rule", stripe_rule_name(c.dataset.rule)},
          {"rows", c.dataset.rows},
          {"stripes", c.dataset.stripes},
          {"corrupted", c.dataset.corrupted},
          {"table", c.dataset.table}}},
        {"optimizer",
         {{"budget", c.train.budget},
          {"coords_per_step", c.train.coords_per_step},
          {"eval_every", c.train.eval_every},
          {"batch_size", c.train.batch_size},
          {"rule", rule_name(c.train.rule)},
          {"init", {c.train.init.lower, c.train.init.upper}},
          {"a0", c.kw.a0},
          {"c0", c.kw.c0},
          {"alpha", c.kw.alpha},
          {"gamma", c.kw.gamma},
          {"t0", c.anneal.t0},
          {"beta", c.anneal.beta},
          {"k", c.anneal.k}}},
        {"seeds", c.seeds},
        {"backend", backend_name(c.eval.backend)},
        {"shots", c.eval.sampler.shots},
        {"enumeration_limit", c.eval.sampler.enumeration_limit},
        {"prune_threshold", c.eval.sampler.prune_threshold},
        {"max_qubits", c.eval.simulator.max_qubits},
        {"shot_seed", c.eval.seed},
        {"hopfield",
         {{"max_iters", c.hopfield.max_iters},
          {"runs", c.hopfield.runs},
          {"mode", recall_mode_name(c.hopfield.mode)}}},
        {"grover",
         {{"iterations", c.grover.iterations},
          {"shots", c.grover.shots},
          {"marked_output", c.grover.marked_output},
          {"model", c.grover.model}}},
    };
    return j.dump(2) + "\n";
}

PreparedData prepare_data(const ExperimentConfig &config, std::uint64_t seed) {
    const auto &ds = config.dataset;
    Rng rng(split_seed(seed, kDataStream));
    PreparedData out;
    if (ds.source == "uci") {
        const auto split = load_uci(ds.name, config.resolve(ds.data_dir), ds.train_fraction, rng);
        out.data = encode_split(split, ds.features, ds.clusters, rng);
    } else if (ds.source == "mnist") {
        out.data = mnist_prepare(config.resolve(ds.images), config.resolve(ds.labels), ds.mnist, rng);
    } else if (ds.source == "bars-and-stripes") {
        out.data.train = bars_and_stripes_dataset(ds.side, ds.rule);
        out.data.test = out.data.train;
        out.data.class_names = {"negative", "positive"};
    } else if (ds.source == "stripes") {
        std::vector<Bits> patterns;
        for (const auto &s : ds.stripes) {
            patterns.push_back(stripe_pattern(ds.rows, s));
        }
        out.data.train = hopfield_training_set(patterns, ds.corrupted);
        out.data.test = hopfield_training_set(patterns, true);
        out.reconstruction = true;
    } else if (ds.source == "truth-table") {
        out.data.train = truth_table(ds.table);
        out.data.test = out.data.train;
        out.data.class_names = {"0", "1"};
    } else {
        throw ContractViolation("unknown dataset source '" + ds.source + "'");
    }
    if (ds.task == "reconstruction") {
        for (auto *part : {&out.data.train, &out.data.test}) {
            for (auto &s : *part) {
                s.target = s.input;
            }
        }
        out.reconstruction = true;
    }
    return out;
}

NetworkTopology build_model(const ExperimentConfig &config, const PreparedData &prepared) {
    const auto &m = config.model;
    const auto &train = prepared.data.train;
    require(!train.empty(), "the configured dataset is empty");
    const auto inputs = m.inputs ? m.inputs : static_cast<std::uint32_t>(train.front().input.size());
    const auto outputs =
        m.outputs ? m.outputs : static_cast<std::uint32_t>(train.front().target.size());
    NetworkTopology topology = [&] {
        if (m.kind == "shallow") {
            return shallow(inputs, m.hidden, outputs);
        }
        if (m.kind == "hopfield") {
            return hopfield(m.units ? m.units : inputs);
        }
        if (m.kind == "rbm") {
            return rbm(inputs, m.latent);
        }
        if (m.kind == "autoencoder") {
            return autoencoder(inputs, m.latent);
        }
        if (m.kind == "cnn") {
            return cnn(m.height, m.width, m.kernel, m.stride, m.hidden, outputs);
        }
        throw ContractViolation("unknown model kind '" + m.kind + "'");
    }();
    require(topology.num_inputs() == train.front().input.size(),
            "model takes " + std::to_string(topology.num_inputs()) + " inputs but the data has " +
                std::to_string(train.front().input.size()));
    require(topology.outputs().size() == train.front().target.size(),
            "model has " + std::to_string(topology.outputs().size()) +
                " outputs but the targets have " + std::to_string(train.front().target.size()));
    validate_topology(topology);
    return topology;
}

SplitMetrics evaluate_split(const NetworkTopology &topology, const ParameterTable &params,
                            const Dataset &data, std::size_t classes, const EvalOptions &eval) {
    SplitMetrics m;
    if (data.empty()) {
        return m;
    }
    const auto marginals = dataset_marginals(topology, params, data, eval);
    std::size_t correct = 0;
    if (classes > 0) {
        m.confusion.assign(classes, std::vector<std::uint64_t>(classes, 0));
    }
    for (std::size_t i = 0; i < data.size(); ++i) {
        for (std::size_t k = 0; k < marginals[i].size(); ++k) {
            const double d = marginals[i][k] - data[i].target[k];
            m.loss += d * d;
        }
        if (classes > 0) {
            const int predicted = predict_class(marginals[i]);
            correct += predicted == data[i].label ? 1 : 0;
            if (data[i].label >= 0 && static_cast<std::size_t>(data[i].label) < classes &&
                static_cast<std::size_t>(predicted) < classes) {
                ++m.confusion[static_cast<std::size_t>(data[i].label)]
                             [static_cast<std::size_t>(predicted)];
            }
        }
    }
    m.loss /= static_cast<double>(data.size());
    m.mse = m.loss / static_cast<double>(data.front().target.size());
    m.accuracy = static_cast<double>(correct) / static_cast<double>(data.size());
    return m;
}

std::vector<double> TrainReport::test_scores() const {
    std::vector<double> out;
    for (const auto &r : runs) {
        out.push_back(reconstruction ? r.test.mse : r.test.accuracy);
    }
    return out;
}

double mean(const std::vector<double> &values) {
    if (values.empty()) {
        return 0.0;
    }
    double s = 0.0;
    for (double v : values) {
        s += v;
    }
    return s / static_cast<double>(values.size());
}

double stddev(const std::vector<double> &values) {
    if (values.size() < 2) {
        return 0.0;
    }
    const double mu = mean(values);
    double s = 0.0;
    for (double v : values) {
        s += (v - mu) * (v - mu);
    }
    return std::sqrt(s / static_cast<double>(values.size() - 1));
}

std::string TrainReport::metrics_json(const ExperimentConfig &config) const {
    json runs_json = json::array();
    std::vector<double> train_scores;
    std::vector<double> losses;
    for (const auto &r : runs) {
        runs_json.push_back({{"seed", r.seed},
                             {"best_loss", r.result.best_loss},
                             {"iterations", r.result.trace.records.size()},
                             {"train", split_json(r.train, reconstruction)},
                             {"test", split_json(r.test, reconstruction)}});
        train_scores.push_back(reconstruction ? r.train.mse : r.train.accuracy);
        losses.push_back(r.result.best_loss);
    }
    const auto test = test_scores();
    const std::string metric = reconstruction ? "mse" : "accuracy";
    json j{{"name", config.name},
           {"backend", backend_name(config.eval.backend)},
           {"rule", rule_name(config.train.rule)},
           {"metric", metric},
           {"runs", runs_json},
           {"final_loss", {{"mean", mean(losses)}, {"std", stddev(losses)}}},
           {"train_" + metric, {{"mean", mean(train_scores)}, {"std", stddev(train_scores)}}},
           {"test_" + metric, {{"mean", mean(test)}, {"std", stddev(test)}}}};
    return j.dump(2) + "\n";
}

SeedRun train_seed(const ExperimentConfig &config, std::uint64_t seed) {
    const PreparedData prepared = prepare_data(config, seed);
    SeedRun run;
    run.seed = seed;
    run.reconstruction = prepared.reconstruction;
    run.topology.emplace(build_model(config, prepared));
    const NetworkTopology &topology = *run.topology;
    const EvalOptions eval = seeded_eval(config, seed);
    const auto &data = prepared.data;

    TrainHooks hooks;
    if (config.train.eval_every > 0 && !prepared.reconstruction) {
        hooks.evaluate = [&](const ParameterTable &p) {
            return accuracy(topology, p, data.test, eval);
        };
    }
    Rng rng(split_seed(seed, kTrainStream));
    run.result = train(topology, data.train, config.kw, config.anneal, config.train, rng, eval, hooks);
    const std::size_t classes =
        prepared.reconstruction ? 0 : std::max<std::size_t>(data.num_classes(), 2);
    run.train = evaluate_split(topology, run.result.params, data.train, classes, eval);
    run.test = evaluate_split(topology, run.result.params, data.test, classes, eval);
    return run;
}

ExperimentConfig apply_overrides(ExperimentConfig config, const RunOptions &options) {
    if (options.out_dir) {
        config.output_dir = fs::absolute(*options.out_dir).string();
    }
    if (options.seed) {
        config.seeds = {*options.seed};
    }
    if (options.backend) {
        config.eval.backend = *options.backend;
    }
    return config;
}

TrainReport run_train(const ExperimentConfig &config) {
    const fs::path dir = output_dir(config);
    write_file(dir / "resolved-config.json", resolved_config_json(config));
    TrainReport report;
    for (auto seed : config.seeds) {
        SeedRun run = train_seed(config, seed);
        report.reconstruction = run.reconstruction;
        const std::string tag = "seed" + std::to_string(seed);
        write_file(dir / ("model-" + tag + ".json"), model_to_json(*run.topology, run.result.params));
        write_file(dir / ("trace-" + tag + ".csv"), run.result.trace.to_csv());
        report.runs.push_back(std::move(run));
    }
    write_file(dir / "metrics.json", report.metrics_json(config));
    return report;
}

std::string run_eval(const std::string &model_path, const ExperimentConfig &config) {
    const Model model = load_model(model_path);
    const std::uint64_t seed = config.seeds.front();
    const PreparedData prepared = prepare_data(config, seed);
    const auto &data = prepared.data;
    if (data.train.empty() || model.topology.num_inputs() != data.train.front().input.size() ||
        model.topology.outputs().size() != data.train.front().target.size()) {
        throw ValidationError({"model: shape does not match the configured dataset"});
    }
    const EvalOptions eval = seeded_eval(config, seed);
    const std::size_t classes = prepared.reconstruction ? 0 : std::max<std::size_t>(data.num_classes(), 2);
    const auto train = evaluate_split(model.topology, model.params, data.train, classes, eval);
    const auto test = evaluate_split(model.topology, model.params, data.test, classes, eval);
    json j{{"model", model_path},
           {"backend", backend_name(config.eval.backend)},
           {"seed", seed},
           {"train", split_json(train, prepared.reconstruction)},
           {"test", split_json(test, prepared.reconstruction)}};
    if (!prepared.reconstruction) {
        j["class_names"] = data.class_names;
    }
    return j.dump(2) + "\n";
}

std::string run_hopfield(const ExperimentConfig &config) {
    require(config.model.kind == "hopfield", "hopfield runs need model.kind = hopfield");
    require(config.dataset.source == "stripes", "hopfield runs need dataset.source = stripes");
    const fs::path dir = output_dir(config);
    write_file(dir / "resolved-config.json", resolved_config_json(config));

    const std::uint64_t seed = config.seeds.front();
    const PreparedData prepared = prepare_data(config, seed);
    const SeedRun run = train_seed(config, seed);
    const NetworkTopology &topology = *run.topology;
    const ParameterTable &params = run.result.params;
    write_file(dir / "model.json", model_to_json(topology, params));
    write_file(dir / "trace.csv", run.result.trace.to_csv());

    std::ostringstream traj;
    traj << "probe,source,run,iteration,pattern,marginals\n";
    std::ostringstream summary;
    summary << "probe,source,runs,recovered,recovered_fraction,first_step_agreement\n";
    const Dataset probes = prepared.data.test;  // stored patterns first, then corruptions
    const MarginalEvaluator evaluator(topology, params);
    for (std::size_t p = 0; p < probes.size(); ++p) {
        const Bits &probe = probes[p].input;
        const Bits &source = probes[p].target;
        // Smallest per-bit probability of landing on the source after one update.
        const auto first = evaluator.marginals(probe);
        double agreement = 1.0;
        for (std::size_t k = 0; k < first.size(); ++k) {
            agreement = std::min(agreement, source[k] ? first[k] : 1.0 - first[k]);
        }
        std::uint32_t recovered = 0;
        for (std::uint32_t r = 0; r < config.hopfield.runs; ++r) {
            Rng rng(split_seed(split_seed(seed, kRecallStream), p * config.hopfield.runs + r));
            const auto t = hopfield_recall(topology, params, probe, config.hopfield.max_iters,
                                           config.hopfield.mode, rng);
            bool hit = false;
            for (std::size_t i = 1; i < t.patterns.size(); ++i) {
                hit |= t.patterns[i] == source;
            }
            recovered += hit ? 1 : 0;
            for (std::size_t i = 0; i < t.patterns.size(); ++i) {
                traj << bits_to_string(probe) << ',' << bits_to_string(source) << ',' << r << ','
                     << i << ',' << bits_to_string(t.patterns[i]) << ',';
                if (i > 0) {
                    for (std::size_t k = 0; k < t.marginals[i - 1].size(); ++k) {
                        traj << (k ? " " : "") << fmt(t.marginals[i - 1][k]);
                    }
                }
                traj << '\n';
            }
        }
        summary << bits_to_string(probe) << ',' << bits_to_string(source) << ','
                << config.hopfield.runs << ',' << recovered << ','
                << fmt(config.hopfield.runs ? static_cast<double>(recovered) / config.hopfield.runs : 0.0)
                << ',' << fmt(agreement) << '\n';
    }
    write_file(dir / "trajectories.csv", traj.str());
    write_file(dir / "recall-summary.csv", summary.str());
    return summary.str();
}

std::string run_grover(const ExperimentConfig &config) {
    const fs::path dir = output_dir(config);
    write_file(dir / "resolved-config.json", resolved_config_json(config));
    const std::uint64_t seed = config.seeds.front();

    std::optional<Model> model;
    if (!config.grover.model.empty()) {
        model.emplace(load_model(config.resolve(config.grover.model)));
    } else {
        SeedRun run = train_seed(config, seed);
        model.emplace(Model{std::move(*run.topology), std::move(run.result.params)});
        write_file(dir / "model.json", model_to_json(model->topology, model->params));
    }
    Rng rng(split_seed(seed, kGroverStream));
    const auto histogram =
        generative_sample(model->topology, model->params, config.grover.iterations,
                          config.grover.shots, rng, config.eval.simulator,
                          config.grover.marked_output);
    const std::string csv = histogram.to_csv();
    write_file(dir / "histogram.csv", csv);
    return csv;
}

void run_encode(const ExperimentConfig &config) {
    const fs::path dir = output_dir(config);
    write_file(dir / "resolved-config.json", resolved_config_json(config));
    const PreparedData prepared = prepare_data(config, config.seeds.front());
    const auto &data = prepared.data;
    auto write_split = [&](const Dataset &split, const std::string &name) {
        std::ostringstream out;
        const std::size_t width = split.empty() ? 0 : split.front().input.size();
        const std::size_t targets = split.empty() ? 0 : split.front().target.size();
        for (std::size_t i = 0; i < width; ++i) {
            out << 'x' << i << ',';
        }
        for (std::size_t i = 0; i < targets; ++i) {
            out << 't' << i << ',';
        }
        out << "label\n";
        for (const auto &s : split) {
            for (auto b : s.input) {
                out << int{b} << ',';
            }
            for (auto b : s.target) {
                out << int{b} << ',';
            }
            out << s.label << '\n';
        }
        write_file(dir / name, out.str());
    };
    write_split(data.train, "train.csv");
    write_split(data.test, "test.csv");

    json dims = json::array();
    for (const auto &d : data.encoder.dims) {
        dims.push_back({{"feature", d.feature},
                        {"column", d.column},
                        {"identity", d.identity},
                        {"centers", d.centers}});
    }
    json encoder{{"bits", data.num_inputs()},
                 {"dimensions", dims},
                 {"class_names", data.class_names},
                 {"train_rows", data.train.size()},
                 {"test_rows", data.test.size()}};
    write_file(dir / "encoder.json", encoder.dump(2) + "\n");
}

}  // namespace qsnn
