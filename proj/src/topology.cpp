#include "bsl/topology.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

namespace bsl::topology {

void TopologySpec::validate() const {
    if (n_nodes < 2) throw std::invalid_argument("topology needs at least 2 nodes");
    if (!std::isfinite(gamma) || gamma < 0.0) {
        throw std::invalid_argument("gamma must be finite and nonnegative");
    }
}

std::vector<double> attachment_weights(std::span<const int> degrees, double gamma) {
    if (degrees.empty()) throw std::invalid_argument("attachment_weights: no candidates");
    std::vector<double> w;
    w.reserve(degrees.size());
    double total = 0.0;
    for (int k : degrees) {
        if (k <= 0) {
            throw std::invalid_argument("attachment_weights: degree " + std::to_string(k) +
                                        " is not positive");
        }
        double v = std::pow(static_cast<double>(k), gamma);
        w.push_back(v);
        total += v;
    }
    for (double& v : w) v /= total;
    return w;
}

graph::Dag generate_pa_dag(const TopologySpec& spec, RandomStream& rng) {
    spec.validate();
    const int n = spec.n_nodes;
    std::vector<int> degree(n, 0);
    std::vector<graph::Edge> edges;
    edges.reserve(n - 1);

    edges.emplace_back(1, 0);
    degree[0] = degree[1] = 1;

    std::vector<double> cumulative(n);
    for (int t = 2; t < n; ++t) {
        auto p = attachment_weights(std::span<const int>(degree.data(), t), spec.gamma);
        double acc = 0.0;
        for (int i = 0; i < t; ++i) {
            acc += p[i];
            cumulative[i] = acc;
        }
        // Inversion; guard the top against round-off in the running sum.
        double u = rng.uniform() * acc;
        int target = t - 1;
        for (int i = 0; i < t; ++i) {
            if (u < cumulative[i]) {
                target = i;
                break;
            }
        }
        edges.emplace_back(t, target);
        ++degree[target];
        degree[t] = 1;
    }
    return graph::Dag(n, edges);
}

graph::Dag generate_pa_dag(const TopologySpec& spec) {
    RandomStream rng(spec.seed);
    return generate_pa_dag(spec, rng);
}

}  // namespace bsl::topology
