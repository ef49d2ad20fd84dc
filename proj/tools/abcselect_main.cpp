// abcselect — batch runner for simulation-based inference experiments.
//
// Subcommands:
//   run <config>          execute an experiment, write report + CSV tables
//   validate <config>     parse and validate a configuration, echo it resolved
//   list-models           print registry model names
//   list-pools            print registry pool names with their statistics
//   seed-report <report>  print the command that reruns a saved report
//
// Exit codes: 0 success, 1 validation error, 2 runtime failure.
#include <CLI11.hpp>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <nlohmann/json.hpp>
#include <sstream>

#include "abcselect/experiment.hpp"

namespace {

std::string read_file(const std::string& path) {
    std::ifstream f(path);
    if (!f) throw abcselect::ConfigError("cannot open '" + path + "'");
    std::stringstream ss;
    ss << f.rdbuf();
    return ss.str();
}

struct Overrides {
    std::optional<std::uint64_t> seed;
    std::optional<int> workers;
    std::optional<std::string> outdir;

    void apply(abcselect::ExperimentSpec& spec) const {
        if (seed) spec.master_seed = *seed;
        if (workers) spec.selection.abc.workers = *workers;
        if (outdir) spec.output_dir = *outdir;
    }
};

int cmd_run(const std::string& config_path, const Overrides& ov) {
    abcselect::ExperimentSpec spec;
    try {
        spec = abcselect::validate_spec(read_file(config_path));
        ov.apply(spec);
        spec.validate();
    } catch (const std::exception& e) {
        std::cerr << "validation error: " << e.what() << "\n";
        return 1;
    }
    try {
        const abcselect::RunReport report = abcselect::run_experiment(spec);
        int failed = 0;
        for (const auto& r : report.replicates)
            if (r.failed) ++failed;
        std::cout << "experiment: " << abcselect::to_string(spec.kind) << "\n"
                  << "replicates: " << spec.replicates << " (" << failed << " failed)\n"
                  << "simulations: " << report.total_simulations << "\n"
                  << "wall seconds: " << report.wall_seconds << "\n"
                  << "outputs: " << spec.output_dir << "/report.json, "
                  << spec.output_dir << "/frequencies.csv\n";
        for (const auto& [name, count] : report.frequencies)
            std::cout << "  " << name << ": " << count << "/" << spec.replicates << "\n";
        return 0;
    } catch (const std::exception& e) {
        std::cerr << "runtime error: " << e.what() << "\n";
        return 2;
    }
}

int cmd_validate(const std::string& config_path) {
    try {
        const auto spec = abcselect::validate_spec(read_file(config_path));
        std::cout << abcselect::spec_to_json(spec).dump(2) << "\n";
        return 0;
    } catch (const std::exception& e) {
        std::cerr << "validation error: " << e.what() << "\n";
        return 1;
    }
}

int cmd_list_models() {
    for (const auto& name : abcselect::known_model_names()) {
        const auto model = abcselect::make_model(name);
        std::cout << name << "  (dim " << model.param_dim << ", "
                  << abcselect::to_string(model.output_kind) << ")\n";
    }
    return 0;
}

int cmd_list_pools() {
    for (const auto& name : abcselect::known_pool_names()) {
        const auto pool = abcselect::make_pool(name);
        std::cout << name << " (width " << pool.width() << "):";
        for (int i = 0; i < pool.size(); ++i) std::cout << " " << pool.at(i).name;
        std::cout << "\n";
    }
    return 0;
}

int cmd_seed_report(const std::string& report_path) {
    try {
        const nlohmann::json j = nlohmann::json::parse(read_file(report_path));
        const nlohmann::json spec = j.at("spec");
        const std::filesystem::path dir =
            std::filesystem::path(report_path).parent_path();
        const std::filesystem::path config_out =
            dir.empty() ? "rerun_config.json" : dir / "rerun_config.json";
        std::ofstream f(config_out);
        f << spec.dump(2) << "\n";
        std::cout << "seed: " << spec.at("seed") << "\n"
                  << "rerun: abcselect run " << config_out.string() << "\n";
        return 0;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"ABC toolkit with automated summary-statistic selection"};
    app.require_subcommand(1);

    std::string config_path, report_path;
    Overrides ov;
    std::uint64_t seed_val = 0;
    int workers_val = 0;
    std::string outdir_val;

    auto* run = app.add_subcommand("run", "run an experiment from a JSON config");
    run->add_option("config", config_path, "experiment configuration file")->required();
    auto* run_seed = run->add_option("--seed", seed_val, "override the master seed");
    auto* run_workers = run->add_option("--workers", workers_val, "override the worker count");
    auto* run_outdir = run->add_option("--outdir", outdir_val, "override the output directory");

    auto* validate = app.add_subcommand("validate", "validate a configuration file");
    validate->add_option("config", config_path, "experiment configuration file")->required();

    app.add_subcommand("list-models", "print available model names");
    app.add_subcommand("list-pools", "print available statistic pools");

    auto* seed_report = app.add_subcommand("seed-report", "print the rerun command of a report");
    seed_report->add_option("report", report_path, "report.json produced by run")->required();

    CLI11_PARSE(app, argc, argv);

    if (run->parsed()) {
        if (*run_seed) ov.seed = seed_val;
        if (*run_workers) ov.workers = workers_val;
        if (*run_outdir) ov.outdir = outdir_val;
        return cmd_run(config_path, ov);
    }
    if (validate->parsed()) return cmd_validate(config_path);
    if (app.get_subcommand("list-models")->parsed()) return cmd_list_models();
    if (app.get_subcommand("list-pools")->parsed()) return cmd_list_pools();
    if (seed_report->parsed()) return cmd_seed_report(report_path);
    return 0;
}
