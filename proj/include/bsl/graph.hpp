#pragma once

#include <map>
#include <set>
#include <span>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace bsl::graph {

using NodeId = int;

/// Ordered node pair. Directed edges are (source, target); undirected edges
/// are stored with first < second.
using Edge = std::pair<NodeId, NodeId>;

/// Raised when a graph violates a structural invariant (cycles, mixed edge
/// relations on one pair).
class StructuralError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

inline Edge undirected_key(NodeId a, NodeId b) { return a < b ? Edge{a, b} : Edge{b, a}; }

/// Parents precede children; ties broken by the smallest available index.
/// Throws StructuralError if the edge set contains a directed cycle.
std::vector<NodeId> topological_order(int n_nodes, const std::set<Edge>& edges);

class Dag {
public:
    Dag() = default;
    Dag(int n_nodes, std::span<const Edge> edges);
    Dag(int n_nodes, std::initializer_list<Edge> edges)
        : Dag(n_nodes, std::span<const Edge>(edges.begin(), edges.size())) {}

    int n_nodes() const { return n_nodes_; }
    std::size_t n_edges() const { return edges_.size(); }
    const std::set<Edge>& edges() const { return edges_; }

    /// Sorted ascending.
    const std::vector<NodeId>& parents(NodeId v) const { return parents_.at(v); }
    const std::vector<NodeId>& children(NodeId v) const { return children_.at(v); }
    int in_degree(NodeId v) const { return static_cast<int>(parents_.at(v).size()); }
    int out_degree(NodeId v) const { return static_cast<int>(children_.at(v).size()); }
    bool has_edge(NodeId u, NodeId v) const { return edges_.contains({u, v}); }
    bool adjacent(NodeId u, NodeId v) const { return has_edge(u, v) || has_edge(v, u); }

    const std::vector<NodeId>& topological_order() const { return order_; }

    friend bool operator==(const Dag& a, const Dag& b) {
        return a.n_nodes_ == b.n_nodes_ && a.edges_ == b.edges_;
    }

private:
    int n_nodes_ = 0;
    std::set<Edge> edges_;
    std::vector<std::vector<NodeId>> parents_;
    std::vector<std::vector<NodeId>> children_;
    std::vector<NodeId> order_;
};

inline std::vector<NodeId> topological_order(const Dag& g) { return g.topological_order(); }

class UndirectedGraph {
public:
    UndirectedGraph() = default;
    explicit UndirectedGraph(int n_nodes) : n_nodes_(n_nodes) {}

    int n_nodes() const { return n_nodes_; }
    std::size_t n_edges() const { return edges_.size(); }
    const std::set<Edge>& edges() const { return edges_; }

    /// Returns false if the edge was already present.
    bool add_edge(NodeId a, NodeId b);
    bool has_edge(NodeId a, NodeId b) const { return edges_.contains(undirected_key(a, b)); }
    std::vector<NodeId> neighbors(NodeId v) const;

    friend bool operator==(const UndirectedGraph&, const UndirectedGraph&) = default;

private:
    int n_nodes_ = 0;
    std::set<Edge> edges_;
};

/// Partially directed graph. A node pair is related by at most one of a
/// directed edge (either way) or an undirected edge.
class Pdag {
public:
    Pdag() = default;
    explicit Pdag(int n_nodes) : n_nodes_(n_nodes) {}

    int n_nodes() const { return n_nodes_; }
    const std::set<Edge>& directed_edges() const { return directed_; }
    const std::set<Edge>& undirected_edges() const { return undirected_; }
    std::size_t n_edges() const { return directed_.size() + undirected_.size(); }

    void add_directed(NodeId u, NodeId v);
    void add_undirected(NodeId a, NodeId b);
    /// Turns the undirected edge u-v into u->v.
    void orient(NodeId u, NodeId v);
    void remove(NodeId a, NodeId b);

    bool has_directed(NodeId u, NodeId v) const { return directed_.contains({u, v}); }
    bool has_undirected(NodeId a, NodeId b) const {
        return undirected_.contains(undirected_key(a, b));
    }
    bool adjacent(NodeId a, NodeId b) const {
        return has_undirected(a, b) || has_directed(a, b) || has_directed(b, a);
    }

    std::vector<NodeId> parents(NodeId v) const;
    std::vector<NodeId> children(NodeId v) const;
    std::vector<NodeId> neighbors(NodeId v) const;  // undirected only
    std::vector<NodeId> adjacents(NodeId v) const;

    /// True if a directed path leads from `from` to `to` using directed edges only.
    bool has_directed_path(NodeId from, NodeId to) const;
    bool has_directed_cycle() const;

    friend bool operator==(const Pdag&, const Pdag&) = default;

private:
    void check_pair(NodeId a, NodeId b) const;

    int n_nodes_ = 0;
    std::set<Edge> directed_;
    std::set<Edge> undirected_;
};

struct DegreeHistogram {
    int n_nodes = 0;
    int max_in_degree = 0;
    std::map<int, int> counts;  // in-degree -> number of nodes
};

UndirectedGraph moralize(const Dag& g);
UndirectedGraph skeleton(const Dag& g);
UndirectedGraph skeleton(const Pdag& g);

/// Representative of the Markov equivalence class: v-structures directed,
/// compelled edges directed by Meek closure, the rest undirected.
Pdag cpdag_of_dag(const Dag& g);

/// Reachability ("Bayes-ball") d-separation test.
bool d_separated(const Dag& g, NodeId x, NodeId y, std::span<const NodeId> z);
inline bool d_separated(const Dag& g, NodeId x, NodeId y, std::initializer_list<NodeId> z) {
    return d_separated(g, x, y, std::span<const NodeId>(z.begin(), z.size()));
}

DegreeHistogram in_degree_histogram(const Dag& g);

/// The DAG as a Pdag with every edge directed.
Pdag as_pdag(const Dag& g);

}  // namespace bsl::graph
