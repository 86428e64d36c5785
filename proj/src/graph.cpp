#include "bsl/graph.hpp"

#include <algorithm>
#include <queue>
#include <stdexcept>

#include "bsl/orientation.hpp"

namespace bsl::graph {

namespace {

void check_node(int n_nodes, NodeId v) {
    if (v < 0 || v >= n_nodes) {
        throw std::invalid_argument("node id " + std::to_string(v) + " out of range [0, " +
                                    std::to_string(n_nodes) + ")");
    }
}

}  // namespace

std::vector<NodeId> topological_order(int n_nodes, const std::set<Edge>& edges) {
    std::vector<int> indeg(n_nodes, 0);
    std::vector<std::vector<NodeId>> out(n_nodes);
    for (const auto& [u, v] : edges) {
        out[u].push_back(v);
        ++indeg[v];
    }
    std::priority_queue<NodeId, std::vector<NodeId>, std::greater<>> ready;
    for (NodeId v = 0; v < n_nodes; ++v) {
        if (indeg[v] == 0) ready.push(v);
    }
    std::vector<NodeId> order;
    order.reserve(n_nodes);
    while (!ready.empty()) {
        NodeId u = ready.top();
        ready.pop();
        order.push_back(u);
        for (NodeId v : out[u]) {
            if (--indeg[v] == 0) ready.push(v);
        }
    }
    if (static_cast<int>(order.size()) != n_nodes) {
        throw StructuralError("graph contains a directed cycle");
    }
    return order;
}

Dag::Dag(int n_nodes, std::span<const Edge> edges) : n_nodes_(n_nodes) {
    if (n_nodes < 0) throw std::invalid_argument("negative node count");
    parents_.resize(n_nodes);
    children_.resize(n_nodes);
    for (const auto& [u, v] : edges) {
        check_node(n_nodes, u);
        check_node(n_nodes, v);
        if (u == v) throw std::invalid_argument("self-loop on node " + std::to_string(u));
        if (!edges_.insert({u, v}).second) {
            throw std::invalid_argument("duplicate edge " + std::to_string(u) + "->" +
                                        std::to_string(v));
        }
    }
    for (const auto& [u, v] : edges_) {
        parents_[v].push_back(u);
        children_[u].push_back(v);
    }
    for (auto& p : parents_) std::sort(p.begin(), p.end());
    order_ = graph::topological_order(n_nodes, edges_);
}

bool UndirectedGraph::add_edge(NodeId a, NodeId b) {
    check_node(n_nodes_, a);
    check_node(n_nodes_, b);
    if (a == b) throw std::invalid_argument("self-loop on node " + std::to_string(a));
    return edges_.insert(undirected_key(a, b)).second;
}

std::vector<NodeId> UndirectedGraph::neighbors(NodeId v) const {
    std::vector<NodeId> out;
    for (const auto& [a, b] : edges_) {
        if (a == v) out.push_back(b);
        if (b == v) out.push_back(a);
    }
    std::sort(out.begin(), out.end());
    return out;
}

void Pdag::check_pair(NodeId a, NodeId b) const {
    check_node(n_nodes_, a);
    check_node(n_nodes_, b);
    if (a == b) throw std::invalid_argument("self-loop on node " + std::to_string(a));
    if (adjacent(a, b)) {
        throw StructuralError("nodes " + std::to_string(a) + " and " + std::to_string(b) +
                              " are already related");
    }
}

void Pdag::add_directed(NodeId u, NodeId v) {
    check_pair(u, v);
    directed_.insert({u, v});
}

void Pdag::add_undirected(NodeId a, NodeId b) {
    check_pair(a, b);
    undirected_.insert(undirected_key(a, b));
}

void Pdag::orient(NodeId u, NodeId v) {
    if (undirected_.erase(undirected_key(u, v)) == 0) {
        throw StructuralError("no undirected edge " + std::to_string(u) + "-" +
                              std::to_string(v) + " to orient");
    }
    directed_.insert({u, v});
}

void Pdag::remove(NodeId a, NodeId b) {
    undirected_.erase(undirected_key(a, b));
    directed_.erase({a, b});
    directed_.erase({b, a});
}

std::vector<NodeId> Pdag::parents(NodeId v) const {
    std::vector<NodeId> out;
    for (const auto& [a, b] : directed_) {
        if (b == v) out.push_back(a);
    }
    std::sort(out.begin(), out.end());
    return out;
}

std::vector<NodeId> Pdag::children(NodeId v) const {
    std::vector<NodeId> out;
    for (auto it = directed_.lower_bound({v, -1}); it != directed_.end() && it->first == v; ++it) {
        out.push_back(it->second);
    }
    return out;
}

std::vector<NodeId> Pdag::neighbors(NodeId v) const {
    std::vector<NodeId> out;
    for (const auto& [a, b] : undirected_) {
        if (a == v) out.push_back(b);
        if (b == v) out.push_back(a);
    }
    std::sort(out.begin(), out.end());
    return out;
}

std::vector<NodeId> Pdag::adjacents(NodeId v) const {
    std::vector<NodeId> out = neighbors(v);
    for (const auto& [a, b] : directed_) {
        if (a == v) out.push_back(b);
        if (b == v) out.push_back(a);
    }
    std::sort(out.begin(), out.end());
    return out;
}

bool Pdag::has_directed_path(NodeId from, NodeId to) const {
    std::vector<char> seen(n_nodes_, 0);
    std::vector<NodeId> stack{from};
    seen[from] = 1;
    while (!stack.empty()) {
        NodeId u = stack.back();
        stack.pop_back();
        for (auto it = directed_.lower_bound({u, -1}); it != directed_.end() && it->first == u;
             ++it) {
            NodeId w = it->second;
            if (w == to) return true;
            if (!seen[w]) {
                seen[w] = 1;
                stack.push_back(w);
            }
        }
    }
    return false;
}

bool Pdag::has_directed_cycle() const {
    try {
        graph::topological_order(n_nodes_, directed_);
        return false;
    } catch (const StructuralError&) {
        return true;
    }
}

UndirectedGraph moralize(const Dag& g) {
    UndirectedGraph m = skeleton(g);
    for (NodeId v = 0; v < g.n_nodes(); ++v) {
        const auto& pa = g.parents(v);
        for (std::size_t i = 0; i < pa.size(); ++i) {
            for (std::size_t j = i + 1; j < pa.size(); ++j) m.add_edge(pa[i], pa[j]);
        }
    }
    return m;
}

UndirectedGraph skeleton(const Dag& g) {
    UndirectedGraph s(g.n_nodes());
    for (const auto& [u, v] : g.edges()) s.add_edge(u, v);
    return s;
}

UndirectedGraph skeleton(const Pdag& g) {
    UndirectedGraph s(g.n_nodes());
    for (const auto& [u, v] : g.directed_edges()) s.add_edge(u, v);
    for (const auto& [a, b] : g.undirected_edges()) s.add_edge(a, b);
    return s;
}

Pdag cpdag_of_dag(const Dag& g) {
    Pdag p(g.n_nodes());
    std::set<Edge> compelled;
    for (NodeId w = 0; w < g.n_nodes(); ++w) {
        const auto& pa = g.parents(w);
        for (std::size_t i = 0; i < pa.size(); ++i) {
            for (std::size_t j = i + 1; j < pa.size(); ++j) {
                if (!g.adjacent(pa[i], pa[j])) {
                    compelled.insert({pa[i], w});
                    compelled.insert({pa[j], w});
                }
            }
        }
    }
    for (const auto& [u, v] : g.edges()) {
        if (compelled.contains({u, v})) {
            p.add_directed(u, v);
        } else {
            p.add_undirected(u, v);
        }
    }
    return meek_closure(std::move(p));
}

bool d_separated(const Dag& g, NodeId x, NodeId y, std::span<const NodeId> z) {
    const int n = g.n_nodes();
    check_node(n, x);
    check_node(n, y);
    if (x == y) throw std::invalid_argument("d_separated: x and y must differ");
    std::vector<char> in_z(n, 0);
    for (NodeId v : z) {
        check_node(n, v);
        if (v == x || v == y) throw std::invalid_argument("d_separated: x, y must not be in z");
        in_z[v] = 1;
    }

    // Ancestors of z (including z): colliders there are opened.
    std::vector<char> anc(n, 0);
    std::vector<NodeId> stack(z.begin(), z.end());
    for (NodeId v : z) anc[v] = 1;
    while (!stack.empty()) {
        NodeId v = stack.back();
        stack.pop_back();
        for (NodeId p : g.parents(v)) {
            if (!anc[p]) {
                anc[p] = 1;
                stack.push_back(p);
            }
        }
    }

    // States: (node, arrived from a child = "up") or (node, arrived from a parent = "down").
    enum : int { kUp = 0, kDown = 1 };
    std::vector<char> visited(2 * static_cast<std::size_t>(n), 0);
    std::vector<std::pair<NodeId, int>> todo{{x, kUp}};
    while (!todo.empty()) {
        auto [v, dir] = todo.back();
        todo.pop_back();
        auto& mark = visited[2 * static_cast<std::size_t>(v) + dir];
        if (mark) continue;
        mark = 1;
        if (!in_z[v] && v == y) return false;
        if (dir == kUp) {
            if (in_z[v]) continue;
            for (NodeId p : g.parents(v)) todo.emplace_back(p, kUp);
            for (NodeId c : g.children(v)) todo.emplace_back(c, kDown);
        } else {
            if (!in_z[v]) {
                for (NodeId c : g.children(v)) todo.emplace_back(c, kDown);
            }
            if (anc[v]) {
                for (NodeId p : g.parents(v)) todo.emplace_back(p, kUp);
            }
        }
    }
    return true;
}

DegreeHistogram in_degree_histogram(const Dag& g) {
    DegreeHistogram h;
    h.n_nodes = g.n_nodes();
    for (NodeId v = 0; v < g.n_nodes(); ++v) {
        int k = g.in_degree(v);
        ++h.counts[k];
        h.max_in_degree = std::max(h.max_in_degree, k);
    }
    return h;
}

Pdag as_pdag(const Dag& g) {
    Pdag p(g.n_nodes());
    for (const auto& [u, v] : g.edges()) p.add_directed(u, v);
    return p;
}

}  // namespace bsl::graph
