// bslbench: command line front end for DAG generation, simulation, structure
// learning and the topology benchmark grid.
//
// Exit codes: 0 success, 1 configuration or usage error, 2 grid finished with
// failed runs, 3 any other error.

#include <CLI11.hpp>

#include <fstream>
#include <iostream>
#include <optional>
#include <string>

#include "bsl/bench.hpp"
#include "bsl/graph_io.hpp"
#include "bsl/plots.hpp"
#include "bsl/topology.hpp"

namespace {

using namespace bsl;

constexpr int kExitConfig = 1;
constexpr int kExitPartial = 2;
constexpr int kExitOther = 3;

// Writes to `path`, or stdout when the path is empty or "-".
template <typename F>
void with_output(const std::string& path, F&& write) {
    if (path.empty() || path == "-") {
        write(std::cout);
        return;
    }
    std::ofstream out(path);
    if (!out) throw std::runtime_error("cannot open " + path + " for writing");
    write(out);
    if (!out) throw std::runtime_error("failed writing " + path);
}

std::ifstream open_input(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open " + path);
    return in;
}

struct GenerateArgs {
    int nodes = 48;
    double gamma = 1.0;
    std::uint64_t seed = 1;
    bool dot = false;
    std::string out;
};

struct SimulateArgs {
    std::string dag;
    std::string model = "linear";
    double sigma = 3.0;
    std::size_t samples = 1024;
    std::uint64_t seed = 1;
    std::string out;
};

struct LearnArgs {
    std::string data;
    std::string algorithm = "pc_stable";
    std::string test = "fisher_z";
    double alpha = 0.05;
    std::optional<int> max_condset;
    bool dot = false;
    std::string trace;
    std::string out;
};

struct BenchArgs {
    std::string config;
    std::optional<std::uint64_t> seed;
    std::optional<int> workers;
    std::optional<int> reps;
    std::optional<std::string> eval_mode;
    bool trace = false;
    bool runtime = false;
    std::string out = "results";
};

struct StatsArgs {
    std::string runs;
    std::string first = "B";
    std::string second = "U";
    double alpha = 0.05;
    std::string out;
};

struct PlotArgs {
    std::string runs;
    std::string first = "B";
    std::string second = "U";
    double alpha = 0.05;
    std::string out = "plots";
};

int run_generate(const GenerateArgs& a) {
    topology::TopologySpec spec{a.nodes, a.gamma, a.seed};
    graph::Dag dag = topology::generate_pa_dag(spec);
    with_output(a.out, [&](std::ostream& os) {
        if (a.dot) {
            graph::write_dot(os, dag);
        } else {
            graph::write_edge_list(os, dag);
        }
    });
    return 0;
}

int run_simulate(const SimulateArgs& a) {
    auto in = open_input(a.dag);
    graph::Dag dag = graph::read_dag(in);
    sem::SemSpec spec{bench::parse_model(a.model), a.sigma, {}};
    RandomStream rng(a.seed);
    sem::DataMatrix data = sem::simulate_dataset(dag, spec, a.samples, rng);
    with_output(a.out, [&](std::ostream& os) { sem::write_csv(os, data); });
    return 0;
}

int run_learn(const LearnArgs& a) {
    auto in = open_input(a.data);
    sem::DataMatrix data = sem::read_csv(in);
    learn::LearnParams params;
    params.algorithm = learn::parse_algorithm(a.algorithm);
    params.test = {bench::parse_statistic(a.test), a.alpha};
    params.max_condset = a.max_condset;
    params.validate();

    ci::DataIndependenceTest test(data, params.test);
    std::vector<ci::TraceRow> trace;
    if (!a.trace.empty()) test.set_trace(&trace);
    learn::LearnResult result = learn::learn(test, params);

    with_output(a.out, [&](std::ostream& os) {
        if (a.dot) {
            graph::write_dot(os, result.pdag);
        } else {
            graph::write_edge_list(os, result.pdag);
        }
    });
    if (!a.trace.empty()) {
        with_output(a.trace, [&](std::ostream& os) {
            os << "x,y,z,statistic,p_value,independent\n";
            for (const auto& r : trace) {
                os << r.x << ',' << r.y << ',';
                for (std::size_t i = 0; i < r.z.size(); ++i) os << (i ? ";" : "") << r.z[i];
                os << ',' << r.result.statistic << ',' << r.result.p_value << ','
                   << (r.result.independent ? 1 : 0) << '\n';
            }
        });
    }
    std::cerr << "ci tests: " << result.n_tests << " (skipped " << result.n_skipped_tests
              << "), v-structure conflicts: " << result.orientation.conflicts << '\n';
    return 0;
}

void write_pvalues(const std::filesystem::path& path,
                   const std::vector<bench::ComparisonRow>& rows) {
    with_output(path.string(), [&](std::ostream& os) { bench::write_pvalues_csv(os, rows); });
}

bool has_topology(const std::vector<bench::RunRecord>& records, const std::string& label) {
    for (const auto& r : records) {
        if (r.topology == label) return true;
    }
    return false;
}

int run_bench(const BenchArgs& a) {
    bench::ExperimentConfig cfg;
    try {
        if (!a.config.empty()) cfg = bench::load_config(a.config);
        if (a.seed) cfg.master_seed = *a.seed;
        if (a.workers) cfg.workers = *a.workers;
        if (a.reps) cfg.n_reps = *a.reps;
        if (a.eval_mode) cfg.eval_mode = eval::parse_eval_mode(*a.eval_mode);
        if (a.runtime) cfg.record_runtime = true;
        cfg.validate();
    } catch (const bench::ConfigError& e) {
        std::cerr << "config error: " << e.what() << '\n';
        return kExitConfig;
    } catch (const std::invalid_argument& e) {
        std::cerr << "config error: " << e.what() << '\n';
        return kExitConfig;
    }

    const std::filesystem::path out_dir(a.out);
    std::filesystem::create_directories(out_dir);
    with_output((out_dir / "config.json").string(),
                [&](std::ostream& os) { os << bench::config_to_json(cfg); });

    bench::GridOptions options;
    if (a.trace) options.trace_dir = out_dir / "trace";
    const auto records = bench::run_grid(cfg, options);
    bench::emit_csv(records, out_dir / "runs.csv");

    std::size_t failed = 0;
    for (const auto& r : records) failed += r.ok() ? 0 : 1;

    plots::PlotOptions plot_options;
    plot_options.alpha = cfg.alpha;
    if (has_topology(records, plot_options.pair.first) &&
        has_topology(records, plot_options.pair.second)) {
        write_pvalues(out_dir / "pvalues.csv",
                      bench::compare_topologies(records, plot_options.pair, cfg.alpha));
    } else {
        std::cerr << "warning: topologies B and U not both in the grid; pvalues.csv not written\n";
    }
    const auto report = plots::emit_plots(records, out_dir / "plots", plot_options);
    for (const auto& w : report.warnings) std::cerr << "warning: " << w << '\n';

    std::cerr << records.size() << " runs, " << failed << " failed; results in " << out_dir.string()
              << '\n';
    return failed > 0 ? kExitPartial : 0;
}

int run_stats(const StatsArgs& a) {
    const auto records = bench::load_runs_csv(a.runs);
    const auto rows = bench::compare_topologies(records, {a.first, a.second}, a.alpha);
    with_output(a.out, [&](std::ostream& os) { bench::write_pvalues_csv(os, rows); });
    return 0;
}

int run_plot(const PlotArgs& a) {
    const auto records = bench::load_runs_csv(a.runs);
    plots::PlotOptions options;
    options.alpha = a.alpha;
    options.pair = {a.first, a.second};
    const auto report = plots::emit_plots(records, a.out, options);
    for (const auto& w : report.warnings) std::cerr << "warning: " << w << '\n';
    for (const auto& f : report.files) std::cout << f.string() << '\n';
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Topology-aware benchmark for constraint-based structure learning"};
    app.require_subcommand(1);

    GenerateArgs gen;
    auto* generate = app.add_subcommand("generate", "Sample a preferential-attachment DAG");
    generate->add_option("--nodes", gen.nodes, "Number of nodes")->check(CLI::PositiveNumber);
    generate->add_option("--gamma", gen.gamma, "Attachment scaling exponent");
    generate->add_option("--seed", gen.seed, "Random seed");
    generate->add_flag("--dot", gen.dot, "Write Graphviz DOT instead of an edge list");
    generate->add_option("--out", gen.out, "Output file (default stdout)");

    SimulateArgs sim;
    auto* simulate = app.add_subcommand("simulate", "Simulate a data set from a DAG");
    simulate->add_option("--dag", sim.dag, "DAG edge-list file")->required();
    simulate->add_option("--model", sim.model, "linear or nonlinear");
    simulate->add_option("--sigma", sim.sigma, "Noise scale");
    simulate->add_option("--samples", sim.samples, "Number of samples");
    simulate->add_option("--seed", sim.seed, "Random seed");
    simulate->add_option("--out", sim.out, "Output CSV (default stdout)");

    LearnArgs lrn;
    auto* learn_cmd = app.add_subcommand("learn", "Learn a PDAG from a data CSV");
    learn_cmd->add_option("--data", lrn.data, "Data CSV")->required();
    learn_cmd->add_option("--algorithm", lrn.algorithm, "pc_stable, grow_shrink or fast_iamb");
    learn_cmd->add_option("--test", lrn.test, "fisher_z or mi_gaussian");
    learn_cmd->add_option("--alpha", lrn.alpha, "Significance level");
    learn_cmd->add_option("--max-condset", lrn.max_condset, "Largest conditioning set size");
    learn_cmd->add_flag("--dot", lrn.dot, "Write Graphviz DOT instead of an edge list");
    learn_cmd->add_option("--trace", lrn.trace, "Write every CI test to this CSV");
    learn_cmd->add_option("--out", lrn.out, "Output file (default stdout)");

    BenchArgs bch;
    auto* bench_cmd = app.add_subcommand("bench", "Run the experiment grid");
    bench_cmd->add_option("--config", bch.config, "JSON experiment config");
    bench_cmd->add_option("--seed", bch.seed, "Override master_seed");
    bench_cmd->add_option("--workers", bch.workers, "Override workers");
    bench_cmd->add_option("--reps", bch.reps, "Override n_reps");
    bench_cmd->add_option("--eval-mode", bch.eval_mode, "moral or cpdag-skeleton");
    bench_cmd->add_flag("--trace", bch.trace, "Write per-run CI test logs under <out>/trace");
    bench_cmd->add_flag("--runtime", bch.runtime, "Record wall-clock runtime_ms");
    bench_cmd->add_option("--out", bch.out, "Output directory");

    StatsArgs sts;
    auto* stats = app.add_subcommand("stats", "Compare two topologies from runs.csv");
    stats->add_option("--runs", sts.runs, "runs.csv")->required();
    stats->add_option("--a", sts.first, "First topology label");
    stats->add_option("--b", sts.second, "Second topology label");
    stats->add_option("--alpha", sts.alpha, "Significance level");
    stats->add_option("--out", sts.out, "Output CSV (default stdout)");

    PlotArgs plt;
    auto* plot = app.add_subcommand("plot", "Render SVG plots from runs.csv");
    plot->add_option("--runs", plt.runs, "runs.csv")->required();
    plot->add_option("--a", plt.first, "First topology label");
    plot->add_option("--b", plt.second, "Second topology label");
    plot->add_option("--alpha", plt.alpha, "Significance level");
    plot->add_option("--out", plt.out, "Output directory");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : kExitConfig;
    }

    try {
        if (*generate) return run_generate(gen);
        if (*simulate) return run_simulate(sim);
        if (*learn_cmd) return run_learn(lrn);
        if (*bench_cmd) return run_bench(bch);
        if (*stats) return run_stats(sts);
        if (*plot) return run_plot(plt);
    } catch (const std::invalid_argument& e) {
        std::cerr << "error: " << e.what() << '\n';
        return kExitConfig;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return kExitOther;
    }
    return kExitOther;
}
