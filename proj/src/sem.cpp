#include "bsl/sem.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <istream>
#include <ostream>
#include <sstream>
#include <stdexcept>
#include <string>

#include "bsl/format.hpp"

namespace bsl::sem {

void SemSpec::validate(const graph::Dag& g) const {
    if (!std::isfinite(sigma) || sigma < 0.0) {
        throw std::invalid_argument("sigma must be finite and nonnegative");
    }
    if (!weights.empty() && weights.size() != g.n_edges()) {
        throw std::invalid_argument("expected " + std::to_string(g.n_edges()) +
                                    " edge weights, got " + std::to_string(weights.size()));
    }
}

double sigmoid(double z) {
    if (z >= 0.0) return 1.0 / (1.0 + std::exp(-z));
    double e = std::exp(z);
    return e / (1.0 + e);
}

DataMatrix draw_innovations(std::size_t n_vars, std::size_t n_samples, RandomStream& rng) {
    DataMatrix noise(n_samples, n_vars);
    for (std::size_t j = 0; j < n_vars; ++j) {
        for (double& v : noise.column(j)) v = rng.normal();
    }
    return noise;
}

DataMatrix apply_structural_equations(const graph::Dag& g, const SemSpec& spec,
                                      const DataMatrix& innovations) {
    spec.validate(g);
    const auto p = static_cast<std::size_t>(g.n_nodes());
    if (innovations.n_vars() != p) {
        throw std::invalid_argument("innovation matrix has the wrong number of columns");
    }
    const std::size_t n = innovations.n_samples();
    if (n == 0) throw std::invalid_argument("n_samples must be positive");

    // Incoming (parent, weight) lists, weights looked up by edge position.
    std::vector<std::vector<std::pair<graph::NodeId, double>>> incoming(p);
    std::size_t idx = 0;
    for (const auto& [u, v] : g.edges()) incoming[v].emplace_back(u, spec.weight(idx++));

    DataMatrix x(n, p);
    std::vector<double> drive(n);
    for (graph::NodeId v : g.topological_order()) {
        auto out = x.column(v);
        auto eta = innovations.column(v);
        if (incoming[v].empty()) {
            std::copy(eta.begin(), eta.end(), out.begin());
            continue;
        }
        std::fill(drive.begin(), drive.end(), 0.0);
        for (const auto& [u, w] : incoming[v]) {
            auto parent = x.column(u);
            for (std::size_t i = 0; i < n; ++i) drive[i] += w * parent[i];
        }
        for (std::size_t i = 0; i < n; ++i) {
            double signal = spec.model == SemModel::linear ? drive[i] : sigmoid(drive[i]);
            out[i] = signal + spec.sigma * eta[i];
        }
    }
    return x;
}

DataMatrix simulate_dataset(const graph::Dag& g, const SemSpec& spec, std::size_t n_samples,
                            RandomStream& rng) {
    if (n_samples == 0) throw std::invalid_argument("n_samples must be positive");
    spec.validate(g);
    DataMatrix noise = draw_innovations(static_cast<std::size_t>(g.n_nodes()), n_samples, rng);
    return apply_structural_equations(g, spec, noise);
}

void write_csv(std::ostream& out, const DataMatrix& data) {
    for (std::size_t j = 0; j < data.n_vars(); ++j) {
        if (j > 0) out << ',';
        out << 'x' << j;
    }
    out << '\n';
    for (std::size_t i = 0; i < data.n_samples(); ++i) {
        for (std::size_t j = 0; j < data.n_vars(); ++j) {
            if (j > 0) out << ',';
            out << format_double(data(i, j));
        }
        out << '\n';
    }
}

DataMatrix read_csv(std::istream& in) {
    std::string line;
    if (!std::getline(in, line)) throw std::runtime_error("data csv: missing header");
    std::size_t p = line.empty() ? 0 : 1;
    for (char c : line) p += c == ',';

    std::vector<std::vector<double>> rows;
    while (std::getline(in, line)) {
        if (line.empty()) continue;
        std::vector<double> row;
        row.reserve(p);
        const char* first = line.data();
        const char* last = line.data() + line.size();
        while (true) {
            const char* comma = std::find(first, last, ',');
            double v = 0.0;
            auto [ptr, ec] = std::from_chars(first, comma, v);
            if (ec != std::errc() || ptr != comma) {
                throw std::runtime_error("data csv: bad number on row " +
                                         std::to_string(rows.size() + 1));
            }
            row.push_back(v);
            if (comma == last) break;
            first = comma + 1;
        }
        if (row.size() != p) {
            throw std::runtime_error("data csv: row " + std::to_string(rows.size() + 1) +
                                     " has " + std::to_string(row.size()) + " fields");
        }
        rows.push_back(std::move(row));
    }
    DataMatrix data(rows.size(), p);
    for (std::size_t i = 0; i < rows.size(); ++i) {
        for (std::size_t j = 0; j < p; ++j) data(i, j) = rows[i][j];
    }
    return data;
}

}  // namespace bsl::sem
