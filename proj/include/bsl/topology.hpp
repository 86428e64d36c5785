#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "bsl/graph.hpp"
#include "bsl/random.hpp"

namespace bsl::topology {

/// Preferential-attachment tree. gamma < 1 is sub-linear, gamma = 1 linear
/// (scale-free), gamma > 1 super-linear (hub and spoke).
struct TopologySpec {
    int n_nodes = 2;
    double gamma = 1.0;
    std::uint64_t seed = 0;

    /// Throws std::invalid_argument.
    void validate() const;
};

/// p_i = k_i^gamma / sum_j k_j^gamma. Every degree must be >= 1.
std::vector<double> attachment_weights(std::span<const int> degrees, double gamma);

/// Grows a tree from node 0: node 1 attaches to node 0, and each node t >= 2
/// picks one existing target with probability given by attachment_weights over
/// current total degrees. Edges point from the new node to its target, so node 0
/// is the only sink and the roots are the nodes nobody attached to.
graph::Dag generate_pa_dag(const TopologySpec& spec, RandomStream& rng);

/// Same, with the stream keyed by spec.seed.
graph::Dag generate_pa_dag(const TopologySpec& spec);

}  // namespace bsl::topology
