// Command-line front end: generate, infer-batch, infer-online, analyze, eval.
#include <iostream>
#include <optional>
#include <sstream>
#include <string>

#include <CLI11.hpp>

#include "topoid/io.hpp"
#include "topoid/runner.hpp"

namespace {

struct Overrides {
    std::optional<std::string> config_path;
    std::optional<std::string> graph, signals, estimate, cov, known_edges, threshold, out, checkpoints;
    std::optional<std::string> mu_scaling, step, changes;
    std::optional<double> mu, rel_tol, init_scale;
    std::optional<std::uint64_t> seed;
    std::optional<int> iters_per_step, minibatch, index_base, max_iters, filter_order, warmup;
    std::optional<std::int64_t> samples;
    bool accelerated = false;
    bool certify = false;
};

void add_flags(CLI::App& app, Overrides& o) {
    app.add_option("--config", o.config_path, "JSON experiment config");
    app.add_option("--graph", o.graph, "edge-list path, builtin:karate, or er:N:DEGREE[:SEED]");
    app.add_option("--signals", o.signals, "signal CSV");
    app.add_option("--mu", o.mu, "commutator penalty weight");
    app.add_option("--mu-scaling", o.mu_scaling, "absolute | lambda_max");
    app.add_option("--step", o.step, "lipschitz | optimal_sc=M | fixed=G");
    app.add_option("--max-iters", o.max_iters, "batch iteration cap");
    app.add_option("--rel-tol", o.rel_tol, "relative objective tolerance");
    app.add_option("--seed", o.seed, "base seed");
    app.add_option("--cov", o.cov, "infinite | ewma=BETA | window=W");
    app.add_option("--warmup", o.warmup, "signals folded into the initial covariance");
    app.add_option("--init-scale", o.init_scale, "initial covariance scale when warmup is 0");
    app.add_option("--iters-per-step", o.iters_per_step, "PG iterations per online step");
    app.add_option("--minibatch", o.minibatch, "signals per online step");
    app.add_option("--known-edges", o.known_edges, "constraint file or random:K");
    app.add_option("--threshold", o.threshold, "rel:F | abs:F");
    app.add_option("--index-base", o.index_base, "0 or 1 for edge-list files");
    app.add_option("--out", o.out, "output directory");
    app.add_option("--checkpoints", o.checkpoints, "comma list, ranges a:b[:step]");
    app.add_option("--samples", o.samples, "signals to generate / stream length");
    app.add_option("--filter-order", o.filter_order, "number of random filter taps");
    app.add_option("--changes", o.changes, "topology changes STEP:FRACTION:SEED[,...]");
    app.add_flag("--accelerated", o.accelerated, "momentum with restart");
    app.add_flag("--certify", o.certify, "certify strong convexity and evaluate the tracking bound");
}

std::vector<topoid::ChangeSpec> parse_changes(const std::string& text) {
    std::vector<topoid::ChangeSpec> out;
    std::stringstream ss(text);
    for (std::string item; std::getline(ss, item, ',');) {
        if (item.empty()) continue;
        topoid::ChangeSpec c;
        char colon1 = 0, colon2 = 0;
        std::istringstream fields(item);
        if (!(fields >> c.after_step >> colon1 >> c.fraction >> colon2 >> c.seed) || colon1 != ':' || colon2 != ':' ||
            !fields.eof()) {
            throw topoid::Error(topoid::ErrorCode::Configuration, "bad change '" + item + "', expected STEP:FRACTION:SEED");
        }
        out.push_back(c);
    }
    return out;
}

topoid::ExperimentConfig resolve(const Overrides& o, const std::string& command) {
    topoid::ExperimentConfig c;
    if (o.config_path) c = topoid::ExperimentConfig::from_json(topoid::read_file(*o.config_path));
    if (command == "infer-online") c.mode = "online";
    if (command == "infer-batch") c.mode = "batch";
    auto set = [](auto& target, const auto& value) {
        if (value) target = *value;
    };
    set(c.graph, o.graph);
    set(c.signals, o.signals);
    set(c.estimate, o.estimate);
    set(c.mu, o.mu);
    set(c.mu_scaling, o.mu_scaling);
    set(c.step_policy, o.step);
    set(c.max_iters, o.max_iters);
    set(c.rel_tol, o.rel_tol);
    set(c.seed, o.seed);
    set(c.cov, o.cov);
    set(c.warmup, o.warmup);
    set(c.init_scale, o.init_scale);
    set(c.iters_per_step, o.iters_per_step);
    set(c.minibatch, o.minibatch);
    set(c.known_edges, o.known_edges);
    set(c.threshold, o.threshold);
    set(c.index_base, o.index_base);
    set(c.out, o.out);
    set(c.samples, o.samples);
    set(c.filter_order, o.filter_order);
    if (o.checkpoints) c.checkpoints = topoid::parse_checkpoints(*o.checkpoints);
    if (o.changes) c.changes = parse_changes(*o.changes);
    if (o.accelerated) c.accelerated = true;
    if (o.certify) c.certify = true;
    return c;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Sparse graph topology identification from stationary diffused signals"};
    app.require_subcommand(1);
    Overrides o;
    CLI::App* generate = app.add_subcommand("generate", "simulate filtered white noise on a graph");
    CLI::App* batch = app.add_subcommand("infer-batch", "batch proximal-gradient estimate");
    CLI::App* online = app.add_subcommand("infer-online", "streaming proximal-gradient tracker");
    CLI::App* analyze = app.add_subcommand("analyze", "feasibility and strong-convexity diagnostics");
    CLI::App* eval = app.add_subcommand("eval", "edge-support precision, recall and F-measure");
    for (CLI::App* sub : {generate, batch, online, analyze, eval}) add_flags(*sub, o);
    eval->add_option("--estimate", o.estimate, "estimated edge list");
    eval->add_option("--truth", o.graph, "ground-truth edge list (alias of --graph)");

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::CallForAllHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        std::cerr << "error: E_CONFIGURATION: " << e.what() << "\n";
        return 2;
    }

    try {
        const std::string command = app.get_subcommands().front()->get_name();
        const topoid::ExperimentConfig config = resolve(o, command);
        std::string report;
        if (command == "generate") report = topoid::cmd_generate(config);
        if (command == "infer-batch") report = topoid::cmd_infer_batch(config);
        if (command == "infer-online") report = topoid::cmd_infer_online(config);
        if (command == "analyze") report = topoid::cmd_analyze(config);
        if (command == "eval") report = topoid::cmd_eval(config);
        std::cout << report << "\n";
    } catch (const topoid::Error& e) {
        std::string msg = e.what();
        for (char& ch : msg)
            if (ch == '\n') ch = ' ';
        std::cerr << "error: " << topoid::error_code_name(e.code()) << ": " << msg << "\n";
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "error: E_INTERNAL: " << e.what() << "\n";
        return 3;
    }
    return 0;
}
