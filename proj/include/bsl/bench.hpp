#pragma once

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "bsl/ci_tests.hpp"
#include "bsl/evaluation.hpp"
#include "bsl/learners.hpp"
#include "bsl/sem.hpp"

namespace bsl::bench {

/// Raised for malformed or invalid experiment configurations.
class ConfigError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

struct TopologyLevel {
    std::string label;
    double gamma = 1.0;
};

std::string_view to_string(sem::SemModel m);
sem::SemModel parse_model(std::string_view s);
std::string_view to_string(ci::CiStatistic s);
ci::CiStatistic parse_statistic(std::string_view s);

struct ExperimentConfig {
    std::uint64_t master_seed = 1;
    int n_reps = 20;
    int sample_size = 1024;
    std::vector<int> node_counts{48, 64};
    std::vector<double> sigmas{3.0, 6.0};
    std::vector<TopologyLevel> gammas{{"B", 0.25}, {"L", 1.0}, {"U", 1.25}};
    std::vector<sem::SemModel> models{sem::SemModel::linear, sem::SemModel::nonlinear};
    std::vector<learn::Algorithm> algorithms{learn::Algorithm::pc_stable,
                                             learn::Algorithm::grow_shrink,
                                             learn::Algorithm::fast_iamb};
    double alpha = 0.05;
    eval::EvalMode eval_mode = eval::EvalMode::moral;
    bool regenerate_dag_per_rep = true;
    int workers = 1;
    std::optional<int> max_condset;
    ci::CiStatistic linear_test = ci::CiStatistic::fisher_z;
    ci::CiStatistic nonlinear_test = ci::CiStatistic::mi_gaussian;
    /// Wall-clock timings make runs.csv differ between reruns, so they are off
    /// by default and runtime_ms is left empty.
    bool record_runtime = false;

    /// Throws ConfigError.
    void validate() const;
};

/// The JSON document format of ExperimentConfig. Every key is optional;
/// unknown keys are rejected.
ExperimentConfig parse_config(std::string_view json_text);
ExperimentConfig load_config(const std::filesystem::path& path);
std::string config_to_json(const ExperimentConfig& cfg);

/// One cell of the experiment grid.
struct Cell {
    std::string topology;
    double gamma = 1.0;
    sem::SemModel model = sem::SemModel::linear;
    int n_nodes = 0;
    double sigma = 0.0;
    learn::Algorithm algorithm = learn::Algorithm::pc_stable;
};

/// Cells in grid order: topology, model, n_nodes, sigma, algorithm.
std::vector<Cell> grid_cells(const ExperimentConfig& cfg);

/// "topology=B;gamma=0.25;model=linear;n_nodes=48;sigma=3;algorithm=pc_stable"
/// with numbers in 17-significant-digit form.
std::string cell_fingerprint(const Cell& c);

/// 64-bit FNV-1a over master_seed (8 bytes little endian), the fingerprint
/// bytes and rep_index (8 bytes little endian), passed through the SplitMix64
/// finalizer.
std::uint64_t derive_run_seed(std::uint64_t master_seed, std::string_view fingerprint,
                              std::uint64_t rep_index);

struct RunRecord {
    std::string topology;
    double gamma = 0.0;
    sem::SemModel model = sem::SemModel::linear;
    int n_nodes = 0;
    double sigma = 0.0;
    int sample_size = 0;
    learn::Algorithm algorithm = learn::Algorithm::pc_stable;
    int rep = 0;
    std::uint64_t run_seed = 0;
    std::optional<double> sensitivity;
    std::optional<double> specificity;
    eval::ConfusionCounts counts;
    int max_in_degree = 0;
    std::int64_t n_ci_tests = 0;
    std::optional<double> runtime_ms;
    std::string status = "ok";

    bool ok() const { return status == "ok"; }
    friend bool operator==(const RunRecord&, const RunRecord&) = default;
};

/// Seed of the ground-truth DAG used by a run.
std::uint64_t dag_seed(const ExperimentConfig& cfg, const Cell& cell, int rep);

struct RunArtifacts {
    graph::Dag dag;
    sem::DataMatrix data;
    learn::LearnResult learned;
};

/// Executes one (cell, rep): DAG, data, learning, scoring. Errors are caught
/// and reported through RunRecord::status.
RunRecord run_single(const ExperimentConfig& cfg, const Cell& cell, int rep,
                     std::vector<ci::TraceRow>* trace = nullptr,
                     RunArtifacts* artifacts = nullptr);

struct GridOptions {
    /// When set, each run writes a CSV of its CI tests into this directory.
    std::optional<std::filesystem::path> trace_dir;
};

/// All cells x reps, in grid order then rep order. Runs are spread over
/// cfg.workers threads; results do not depend on the worker count.
std::vector<RunRecord> run_grid(const ExperimentConfig& cfg, const GridOptions& options = {});

/// Pinned header of runs.csv.
inline constexpr std::string_view kRunsCsvHeader =
    "topology,gamma,model,n_nodes,sigma,sample_size,algorithm,rep,run_seed,sensitivity,"
    "specificity,tp,fp,fn,tn,max_in_degree,n_ci_tests,runtime_ms,status";

void write_runs_csv(std::ostream& out, const std::vector<RunRecord>& records);
std::vector<RunRecord> read_runs_csv(std::istream& in);
void emit_csv(const std::vector<RunRecord>& records, const std::filesystem::path& path);
std::vector<RunRecord> load_runs_csv(const std::filesystem::path& path);

enum class GroupKey { model, n_nodes, sigma, algorithm };

struct ComparisonRow {
    sem::SemModel model = sem::SemModel::linear;
    int n_nodes = 0;
    double sigma = 0.0;
    learn::Algorithm algorithm = learn::Algorithm::pc_stable;
    std::string label_a;
    std::string label_b;
    std::size_t n_a = 0;
    std::size_t n_b = 0;
    std::optional<eval::WilcoxonResult> test;  // empty when a side has no data
    bool significant = false;
};

/// Wilcoxon rank-sum of the sensitivity samples of two topologies within each
/// group. Keys left out of `group_keys` are pooled (their fields in the output
/// row hold the first value seen). Failed runs and missing sensitivities are
/// ignored.
std::vector<ComparisonRow> compare_topologies(
    const std::vector<RunRecord>& records, const std::pair<std::string, std::string>& pair,
    double alpha,
    const std::vector<GroupKey>& group_keys = {GroupKey::model, GroupKey::n_nodes,
                                               GroupKey::sigma, GroupKey::algorithm});

inline constexpr std::string_view kPvaluesCsvHeader =
    "model,n_nodes,sigma,algorithm,topology_a,topology_b,n_a,n_b,statistic,p_value,method,"
    "significant";

void write_pvalues_csv(std::ostream& out, const std::vector<ComparisonRow>& rows);

}  // namespace bsl::bench
