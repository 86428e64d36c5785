#include "bsl/bench.hpp"

#include <algorithm>
#include <atomic>
#include <charconv>
#include <chrono>
#include <fstream>
#include <map>
#include <sstream>
#include <thread>

#include <json.hpp>

#include "bsl/format.hpp"
#include "bsl/topology.hpp"

namespace bsl::bench {

using nlohmann::json;

std::string_view to_string(sem::SemModel m) {
    return m == sem::SemModel::linear ? "linear" : "nonlinear";
}

sem::SemModel parse_model(std::string_view s) {
    if (s == "linear") return sem::SemModel::linear;
    if (s == "nonlinear") return sem::SemModel::nonlinear;
    throw std::invalid_argument("unknown model '" + std::string(s) + "'");
}

std::string_view to_string(ci::CiStatistic s) {
    return s == ci::CiStatistic::fisher_z ? "fisher_z" : "mi_gaussian";
}

ci::CiStatistic parse_statistic(std::string_view s) {
    if (s == "fisher_z" || s == "fisher-z") return ci::CiStatistic::fisher_z;
    if (s == "mi_gaussian" || s == "mi-g" || s == "mi_g") return ci::CiStatistic::mi_gaussian;
    throw std::invalid_argument("unknown CI test '" + std::string(s) + "'");
}

void ExperimentConfig::validate() const {
    auto fail = [](const std::string& why) { throw ConfigError(why); };
    if (n_reps < 1) fail("n_reps must be >= 1");
    if (sample_size < 8) fail("sample_size must be >= 8");
    if (!(alpha > 0.0 && alpha < 1.0)) fail("alpha must lie in (0, 1)");
    if (workers < 1) fail("workers must be >= 1");
    if (node_counts.empty() || sigmas.empty() || gammas.empty() || models.empty() ||
        algorithms.empty()) {
        fail("every grid axis needs at least one value");
    }
    for (int n : node_counts) {
        if (n < 2) fail("node counts must be >= 2");
    }
    for (double s : sigmas) {
        if (!std::isfinite(s) || s < 0.0) fail("sigmas must be finite and >= 0");
    }
    std::vector<std::string> labels;
    for (const auto& t : gammas) {
        if (t.label.empty()) fail("topology labels must be non-empty");
        if (t.label.find_first_of(",;\n\"") != std::string::npos) {
            fail("topology label '" + t.label + "' contains a reserved character");
        }
        if (!std::isfinite(t.gamma) || t.gamma < 0.0) fail("gamma must be finite and >= 0");
        labels.push_back(t.label);
    }
    std::sort(labels.begin(), labels.end());
    if (std::adjacent_find(labels.begin(), labels.end()) != labels.end()) {
        fail("topology labels must be unique");
    }
    if (max_condset && *max_condset < 0) fail("max_condset must be >= 0");
}

ExperimentConfig parse_config(std::string_view json_text) {
    json doc;
    try {
        doc = json::parse(json_text);
    } catch (const json::parse_error& e) {
        throw ConfigError(std::string("config is not valid JSON: ") + e.what());
    }
    if (!doc.is_object()) throw ConfigError("config must be a JSON object");

    ExperimentConfig cfg;
    try {
        for (const auto& [key, value] : doc.items()) {
            if (key == "master_seed") {
                cfg.master_seed = value.get<std::uint64_t>();
            } else if (key == "n_reps") {
                cfg.n_reps = value.get<int>();
            } else if (key == "sample_size") {
                cfg.sample_size = value.get<int>();
            } else if (key == "node_counts") {
                cfg.node_counts = value.get<std::vector<int>>();
            } else if (key == "sigmas") {
                cfg.sigmas = value.get<std::vector<double>>();
            } else if (key == "gammas") {
                cfg.gammas.clear();
                for (const auto& t : value) {
                    cfg.gammas.push_back({t.at("label").get<std::string>(),
                                          t.at("gamma").get<double>()});
                }
            } else if (key == "models") {
                cfg.models.clear();
                for (const auto& m : value) cfg.models.push_back(parse_model(m.get<std::string>()));
            } else if (key == "algorithms") {
                cfg.algorithms.clear();
                for (const auto& a : value) {
                    cfg.algorithms.push_back(learn::parse_algorithm(a.get<std::string>()));
                }
            } else if (key == "alpha") {
                cfg.alpha = value.get<double>();
            } else if (key == "eval_mode") {
                cfg.eval_mode = eval::parse_eval_mode(value.get<std::string>());
            } else if (key == "regenerate_dag_per_rep") {
                cfg.regenerate_dag_per_rep = value.get<bool>();
            } else if (key == "workers") {
                cfg.workers = value.get<int>();
            } else if (key == "max_condset") {
                if (value.is_null()) {
                    cfg.max_condset.reset();
                } else {
                    cfg.max_condset = value.get<int>();
                }
            } else if (key == "tests") {
                for (const auto& [model, test] : value.items()) {
                    ci::CiStatistic s = parse_statistic(test.get<std::string>());
                    if (parse_model(model) == sem::SemModel::linear) {
                        cfg.linear_test = s;
                    } else {
                        cfg.nonlinear_test = s;
                    }
                }
            } else if (key == "record_runtime") {
                cfg.record_runtime = value.get<bool>();
            } else {
                throw ConfigError("unknown config key '" + key + "'");
            }
        }
    } catch (const json::exception& e) {
        throw ConfigError(std::string("config has a value of the wrong type: ") + e.what());
    } catch (const std::invalid_argument& e) {
        throw ConfigError(e.what());
    }
    cfg.validate();
    return cfg;
}

ExperimentConfig load_config(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError("cannot open config " + path.string());
    std::stringstream buf;
    buf << in.rdbuf();
    return parse_config(buf.str());
}

std::string config_to_json(const ExperimentConfig& cfg) {
    json doc = json::object();
    doc["master_seed"] = cfg.master_seed;
    doc["n_reps"] = cfg.n_reps;
    doc["sample_size"] = cfg.sample_size;
    doc["node_counts"] = cfg.node_counts;
    doc["sigmas"] = cfg.sigmas;
    doc["gammas"] = json::array();
    for (const auto& t : cfg.gammas) doc["gammas"].push_back({{"label", t.label}, {"gamma", t.gamma}});
    doc["models"] = json::array();
    for (auto m : cfg.models) doc["models"].push_back(to_string(m));
    doc["algorithms"] = json::array();
    for (auto a : cfg.algorithms) doc["algorithms"].push_back(learn::to_string(a));
    doc["alpha"] = cfg.alpha;
    doc["eval_mode"] = eval::to_string(cfg.eval_mode);
    doc["regenerate_dag_per_rep"] = cfg.regenerate_dag_per_rep;
    doc["workers"] = cfg.workers;
    doc["max_condset"] = cfg.max_condset ? json(*cfg.max_condset) : json(nullptr);
    doc["tests"] = {{"linear", to_string(cfg.linear_test)},
                    {"nonlinear", to_string(cfg.nonlinear_test)}};
    doc["record_runtime"] = cfg.record_runtime;
    return doc.dump(2) + "\n";
}

std::vector<Cell> grid_cells(const ExperimentConfig& cfg) {
    std::vector<Cell> cells;
    for (const auto& t : cfg.gammas) {
        for (auto model : cfg.models) {
            for (int n : cfg.node_counts) {
                for (double sigma : cfg.sigmas) {
                    for (auto alg : cfg.algorithms) {
                        cells.push_back({t.label, t.gamma, model, n, sigma, alg});
                    }
                }
            }
        }
    }
    return cells;
}

std::string cell_fingerprint(const Cell& c) {
    std::string fp = "topology=" + c.topology;
    fp += ";gamma=" + format_double(c.gamma);
    fp += ";model=" + std::string(to_string(c.model));
    fp += ";n_nodes=" + std::to_string(c.n_nodes);
    fp += ";sigma=" + format_double(c.sigma);
    fp += ";algorithm=" + std::string(learn::to_string(c.algorithm));
    return fp;
}

std::uint64_t derive_run_seed(std::uint64_t master_seed, std::string_view fingerprint,
                              std::uint64_t rep_index) {
    std::uint64_t h = 0xCBF29CE484222325ULL;
    auto feed = [&h](unsigned char byte) {
        h ^= byte;
        h *= 0x100000001B3ULL;
    };
    for (int i = 0; i < 8; ++i) feed(static_cast<unsigned char>(master_seed >> (8 * i)));
    for (char ch : fingerprint) feed(static_cast<unsigned char>(ch));
    for (int i = 0; i < 8; ++i) feed(static_cast<unsigned char>(rep_index >> (8 * i)));
    return mix64(h);
}

std::uint64_t dag_seed(const ExperimentConfig& cfg, const Cell& cell, int rep) {
    if (cfg.regenerate_dag_per_rep) {
        std::uint64_t run_seed = derive_run_seed(cfg.master_seed, cell_fingerprint(cell),
                                                 static_cast<std::uint64_t>(rep));
        return derive_run_seed(run_seed, "dag", 0);
    }
    // One DAG per (topology, n_nodes), shared by every rep, model, sigma and algorithm.
    std::string fp = "fixed-dag;topology=" + cell.topology + ";gamma=" + format_double(cell.gamma) +
                     ";n_nodes=" + std::to_string(cell.n_nodes);
    return derive_run_seed(cfg.master_seed, fp, 0);
}

namespace {

std::string sanitize(std::string s) {
    for (char& ch : s) {
        if (ch == ',' || ch == '\n' || ch == '\r' || ch == '"') ch = ' ';
    }
    return s;
}

}  // namespace

RunRecord run_single(const ExperimentConfig& cfg, const Cell& cell, int rep,
                     std::vector<ci::TraceRow>* trace, RunArtifacts* artifacts) {
    RunRecord rec;
    rec.topology = cell.topology;
    rec.gamma = cell.gamma;
    rec.model = cell.model;
    rec.n_nodes = cell.n_nodes;
    rec.sigma = cell.sigma;
    rec.sample_size = cfg.sample_size;
    rec.algorithm = cell.algorithm;
    rec.rep = rep;
    rec.run_seed =
        derive_run_seed(cfg.master_seed, cell_fingerprint(cell), static_cast<std::uint64_t>(rep));
    try {
        topology::TopologySpec topo{cell.n_nodes, cell.gamma, dag_seed(cfg, cell, rep)};
        graph::Dag dag = topology::generate_pa_dag(topo);
        rec.max_in_degree = graph::in_degree_histogram(dag).max_in_degree;

        RandomStream data_rng(derive_run_seed(rec.run_seed, "data", 0));
        sem::SemSpec sem_spec{cell.model, cell.sigma, {}};
        sem::DataMatrix data = sem::simulate_dataset(
            dag, sem_spec, static_cast<std::size_t>(cfg.sample_size), data_rng);

        learn::LearnParams params;
        params.algorithm = cell.algorithm;
        params.test = {cell.model == sem::SemModel::linear ? cfg.linear_test : cfg.nonlinear_test,
                       cfg.alpha};
        params.max_condset = cfg.max_condset;

        auto start = std::chrono::steady_clock::now();
        ci::DataIndependenceTest test(data, params.test);
        test.set_trace(trace);
        learn::LearnResult learned = learn::learn(test, params);
        auto stop = std::chrono::steady_clock::now();
        if (cfg.record_runtime) {
            rec.runtime_ms = std::chrono::duration<double, std::milli>(stop - start).count();
        }

        rec.n_ci_tests = learned.n_tests;
        rec.counts = eval::compare_edges(eval::reference_graph(dag, cfg.eval_mode), learned.pdag,
                                         cfg.eval_mode);
        rec.sensitivity = eval::sensitivity(rec.counts);
        rec.specificity = eval::specificity(rec.counts);
        if (artifacts != nullptr) *artifacts = {std::move(dag), std::move(data), std::move(learned)};
    } catch (const std::exception& e) {
        rec.status = "failed: " + sanitize(e.what());
    }
    return rec;
}

namespace {

void write_trace(const std::filesystem::path& path, const std::vector<ci::TraceRow>& rows) {
    std::ofstream out(path);
    if (!out) throw std::runtime_error("cannot write trace " + path.string());
    out << "x,y,z,statistic,p_value,decision\n";
    for (const auto& r : rows) {
        out << r.x << ',' << r.y << ',';
        for (std::size_t i = 0; i < r.z.size(); ++i) out << (i ? ";" : "") << r.z[i];
        out << ',' << format_double(r.result.statistic) << ',' << format_double(r.result.p_value)
            << ',';
        if (r.result.skipped) {
            out << "skipped";
        } else if (r.result.singular) {
            out << "singular";
        } else {
            out << (r.result.independent ? "independent" : "dependent");
        }
        out << '\n';
    }
}

std::string trace_name(const Cell& c, int rep) {
    return c.topology + "_" + std::string(to_string(c.model)) + "_n" + std::to_string(c.n_nodes) +
           "_s" + format_double(c.sigma) + "_" + std::string(learn::to_string(c.algorithm)) +
           "_rep" + std::to_string(rep) + ".csv";
}

}  // namespace

std::vector<RunRecord> run_grid(const ExperimentConfig& cfg, const GridOptions& options) {
    cfg.validate();
    const std::vector<Cell> cells = grid_cells(cfg);
    const std::size_t reps = static_cast<std::size_t>(cfg.n_reps);
    const std::size_t total = cells.size() * reps;
    std::vector<RunRecord> records(total);
    if (options.trace_dir) std::filesystem::create_directories(*options.trace_dir);

    std::atomic<std::size_t> next{0};
    auto worker = [&] {
        for (std::size_t slot = next++; slot < total; slot = next++) {
            const Cell& cell = cells[slot / reps];
            const int rep = static_cast<int>(slot % reps);
            std::vector<ci::TraceRow> trace;
            records[slot] = run_single(cfg, cell, rep, options.trace_dir ? &trace : nullptr);
            if (options.trace_dir) {
                try {
                    write_trace(*options.trace_dir / trace_name(cell, rep), trace);
                } catch (const std::exception& e) {
                    records[slot].status = "failed: " + sanitize(e.what());
                }
            }
        }
    };
    const std::size_t n_threads =
        std::min<std::size_t>(static_cast<std::size_t>(cfg.workers), std::max<std::size_t>(total, 1));
    if (n_threads <= 1) {
        worker();
    } else {
        std::vector<std::jthread> pool;
        pool.reserve(n_threads);
        for (std::size_t i = 0; i < n_threads; ++i) pool.emplace_back(worker);
    }
    return records;
}

namespace {

std::string opt_double(const std::optional<double>& v) { return v ? format_double(*v) : ""; }

std::vector<std::string> split_csv_line(const std::string& line) {
    std::vector<std::string> fields;
    std::size_t start = 0;
    while (true) {
        std::size_t comma = line.find(',', start);
        fields.push_back(line.substr(start, comma - start));
        if (comma == std::string::npos) break;
        start = comma + 1;
    }
    return fields;
}

template <typename T>
T parse_number(const std::string& s, const char* what) {
    T v{};
    auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
    if (ec != std::errc() || ptr != s.data() + s.size()) {
        throw std::runtime_error(std::string("runs csv: bad ") + what + " '" + s + "'");
    }
    return v;
}

std::optional<double> parse_opt_double(const std::string& s, const char* what) {
    if (s.empty()) return std::nullopt;
    return parse_number<double>(s, what);
}

}  // namespace

void write_runs_csv(std::ostream& out, const std::vector<RunRecord>& records) {
    out << kRunsCsvHeader << '\n';
    for (const auto& r : records) {
        out << r.topology << ',' << format_double(r.gamma) << ',' << to_string(r.model) << ','
            << r.n_nodes << ',' << format_double(r.sigma) << ',' << r.sample_size << ','
            << learn::to_string(r.algorithm) << ',' << r.rep << ',' << r.run_seed << ','
            << opt_double(r.sensitivity) << ',' << opt_double(r.specificity) << ',' << r.counts.tp
            << ',' << r.counts.fp << ',' << r.counts.fn << ',' << r.counts.tn << ','
            << r.max_in_degree << ',' << r.n_ci_tests << ',' << opt_double(r.runtime_ms) << ','
            << r.status << '\n';
    }
}

std::vector<RunRecord> read_runs_csv(std::istream& in) {
    std::string line;
    if (!std::getline(in, line) || line != kRunsCsvHeader) {
        throw std::runtime_error("runs csv: unexpected header");
    }
    std::vector<RunRecord> records;
    while (std::getline(in, line)) {
        if (line.empty()) continue;
        auto f = split_csv_line(line);
        if (f.size() != 19) {
            throw std::runtime_error("runs csv: expected 19 fields, got " +
                                     std::to_string(f.size()));
        }
        RunRecord r;
        r.topology = f[0];
        r.gamma = parse_number<double>(f[1], "gamma");
        r.model = parse_model(f[2]);
        r.n_nodes = parse_number<int>(f[3], "n_nodes");
        r.sigma = parse_number<double>(f[4], "sigma");
        r.sample_size = parse_number<int>(f[5], "sample_size");
        r.algorithm = learn::parse_algorithm(f[6]);
        r.rep = parse_number<int>(f[7], "rep");
        r.run_seed = parse_number<std::uint64_t>(f[8], "run_seed");
        r.sensitivity = parse_opt_double(f[9], "sensitivity");
        r.specificity = parse_opt_double(f[10], "specificity");
        r.counts.tp = parse_number<std::int64_t>(f[11], "tp");
        r.counts.fp = parse_number<std::int64_t>(f[12], "fp");
        r.counts.fn = parse_number<std::int64_t>(f[13], "fn");
        r.counts.tn = parse_number<std::int64_t>(f[14], "tn");
        r.max_in_degree = parse_number<int>(f[15], "max_in_degree");
        r.n_ci_tests = parse_number<std::int64_t>(f[16], "n_ci_tests");
        r.runtime_ms = parse_opt_double(f[17], "runtime_ms");
        r.status = f[18];
        records.push_back(std::move(r));
    }
    return records;
}

void emit_csv(const std::vector<RunRecord>& records, const std::filesystem::path& path) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw std::runtime_error("cannot open " + path.string() + " for writing");
    write_runs_csv(out, records);
    out.flush();
    if (!out) throw std::runtime_error("failed writing " + path.string());
}

std::vector<RunRecord> load_runs_csv(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw std::runtime_error("cannot open " + path.string());
    return read_runs_csv(in);
}

std::vector<ComparisonRow> compare_topologies(const std::vector<RunRecord>& records,
                                              const std::pair<std::string, std::string>& pair,
                                              double alpha,
                                              const std::vector<GroupKey>& group_keys) {
    auto uses = [&](GroupKey k) {
        return std::find(group_keys.begin(), group_keys.end(), k) != group_keys.end();
    };
    using Key = std::tuple<int, int, double, int>;
    auto key_of = [&](const RunRecord& r) {
        return Key{uses(GroupKey::model) ? static_cast<int>(r.model) : 0,
                   uses(GroupKey::n_nodes) ? r.n_nodes : 0,
                   uses(GroupKey::sigma) ? r.sigma : 0.0,
                   uses(GroupKey::algorithm) ? static_cast<int>(r.algorithm) : 0};
    };

    struct Group {
        const RunRecord* first = nullptr;
        std::vector<double> a;
        std::vector<double> b;
    };
    std::map<Key, Group> groups;
    bool seen_a = false;
    bool seen_b = false;
    for (const auto& r : records) {
        seen_a |= r.topology == pair.first;
        seen_b |= r.topology == pair.second;
        if (r.topology != pair.first && r.topology != pair.second) continue;
        Group& g = groups[key_of(r)];
        if (g.first == nullptr) g.first = &r;
        if (!r.ok() || !r.sensitivity) continue;
        (r.topology == pair.first ? g.a : g.b).push_back(*r.sensitivity);
    }
    if (!seen_a || !seen_b) {
        throw std::invalid_argument("compare_topologies: topology '" +
                                    (seen_a ? pair.second : pair.first) + "' not in records");
    }

    std::vector<ComparisonRow> rows;
    for (const auto& [key, g] : groups) {
        ComparisonRow row;
        row.model = g.first->model;
        row.n_nodes = g.first->n_nodes;
        row.sigma = g.first->sigma;
        row.algorithm = g.first->algorithm;
        row.label_a = pair.first;
        row.label_b = pair.second;
        row.n_a = g.a.size();
        row.n_b = g.b.size();
        if (!g.a.empty() && !g.b.empty()) {
            row.test = eval::wilcoxon_rank_sum(g.a, g.b);
            row.significant = row.test->p_value < alpha;
        }
        rows.push_back(std::move(row));
    }
    return rows;
}

void write_pvalues_csv(std::ostream& out, const std::vector<ComparisonRow>& rows) {
    out << kPvaluesCsvHeader << '\n';
    for (const auto& r : rows) {
        out << to_string(r.model) << ',' << r.n_nodes << ',' << format_double(r.sigma) << ','
            << learn::to_string(r.algorithm) << ',' << r.label_a << ',' << r.label_b << ','
            << r.n_a << ',' << r.n_b << ',';
        if (r.test) {
            out << format_double(r.test->rank_sum_statistic) << ','
                << format_double(r.test->p_value) << ','
                << (r.test->method == eval::WilcoxonMethod::exact ? "exact" : "normal_approx");
        } else {
            out << ",,missing";
        }
        out << ',' << (r.significant ? "true" : "false") << '\n';
    }
}

}  // namespace bsl::bench
