#include "bsl/orientation.hpp"

#include <algorithm>

namespace bsl::graph {

namespace {

// Dense working copy of a Pdag used while orienting.
class EdgeMatrix {
public:
    explicit EdgeMatrix(const Pdag& g) : n_(g.n_nodes()), cells_(static_cast<std::size_t>(n_) * n_) {
        for (const auto& [u, v] : g.directed_edges()) at(u, v) = kOut;
        for (const auto& [u, v] : g.directed_edges()) at(v, u) = kIn;
        for (const auto& [a, b] : g.undirected_edges()) at(a, b) = at(b, a) = kUndirected;
    }

    int n() const { return n_; }
    bool directed(NodeId u, NodeId v) const { return get(u, v) == kOut; }
    bool undirected(NodeId u, NodeId v) const { return get(u, v) == kUndirected; }
    bool adjacent(NodeId u, NodeId v) const { return get(u, v) != kNone; }

    void orient(NodeId u, NodeId v) {
        at(u, v) = kOut;
        at(v, u) = kIn;
    }

    bool has_directed_path(NodeId from, NodeId to) const {
        std::vector<char> seen(n_, 0);
        std::vector<NodeId> stack{from};
        seen[from] = 1;
        while (!stack.empty()) {
            NodeId a = stack.back();
            stack.pop_back();
            for (NodeId b = 0; b < n_; ++b) {
                if (!directed(a, b) || seen[b]) continue;
                if (b == to) return true;
                seen[b] = 1;
                stack.push_back(b);
            }
        }
        return false;
    }

    Pdag to_pdag() const {
        Pdag g(n_);
        for (NodeId u = 0; u < n_; ++u) {
            for (NodeId v = 0; v < n_; ++v) {
                if (directed(u, v)) g.add_directed(u, v);
                if (u < v && undirected(u, v)) g.add_undirected(u, v);
            }
        }
        return g;
    }

private:
    enum Cell : char { kNone = 0, kOut, kIn, kUndirected };

    Cell get(NodeId u, NodeId v) const { return cells_[static_cast<std::size_t>(u) * n_ + v]; }
    Cell& at(NodeId u, NodeId v) { return cells_[static_cast<std::size_t>(u) * n_ + v]; }

    int n_;
    std::vector<Cell> cells_;
};

bool rule1(const EdgeMatrix& m, NodeId u, NodeId v) {
    for (NodeId w = 0; w < m.n(); ++w) {
        if (w != v && m.directed(w, u) && !m.adjacent(w, v)) return true;
    }
    return false;
}

bool rule2(const EdgeMatrix& m, NodeId u, NodeId v) {
    for (NodeId w = 0; w < m.n(); ++w) {
        if (m.directed(u, w) && m.directed(w, v)) return true;
    }
    return false;
}

bool rule3(const EdgeMatrix& m, NodeId u, NodeId v) {
    for (NodeId c = 0; c < m.n(); ++c) {
        if (!m.undirected(u, c) || !m.directed(c, v)) continue;
        for (NodeId d = c + 1; d < m.n(); ++d) {
            if (m.undirected(u, d) && m.directed(d, v) && !m.adjacent(c, d)) return true;
        }
    }
    return false;
}

// u - v with d -> c -> v, u - d, u adjacent c, v and d non-adjacent.
bool rule4(const EdgeMatrix& m, NodeId u, NodeId v) {
    for (NodeId c = 0; c < m.n(); ++c) {
        if (c == u || !m.directed(c, v) || !m.adjacent(u, c)) continue;
        for (NodeId d = 0; d < m.n(); ++d) {
            if (d == v || d == c) continue;
            if (m.directed(d, c) && m.undirected(u, d) && !m.adjacent(v, d)) return true;
        }
    }
    return false;
}

bool compelled(const EdgeMatrix& m, NodeId u, NodeId v) {
    return rule1(m, u, v) || rule2(m, u, v) || rule3(m, u, v) || rule4(m, u, v);
}

}  // namespace

void SepsetTable::set(NodeId a, NodeId b, std::vector<NodeId> sepset) {
    std::sort(sepset.begin(), sepset.end());
    table_[undirected_key(a, b)] = std::move(sepset);
}

const std::vector<NodeId>* SepsetTable::find(NodeId a, NodeId b) const {
    auto it = table_.find(undirected_key(a, b));
    return it == table_.end() ? nullptr : &it->second;
}

Pdag orient_v_structures(const UndirectedGraph& skeleton, const SepsetTable& sepsets,
                         OrientationLog* log) {
    Pdag start(skeleton.n_nodes());
    for (const auto& [a, b] : skeleton.edges()) start.add_undirected(a, b);
    EdgeMatrix m(start);
    OrientationLog local;

    auto demand = [&](NodeId from, NodeId to) {
        if (m.directed(from, to)) return;
        if (m.directed(to, from)) {
            ++local.conflicts;
            return;
        }
        if (m.has_directed_path(to, from)) {
            ++local.rejected_cycles;
            return;
        }
        m.orient(from, to);
    };

    const int n = skeleton.n_nodes();
    for (NodeId w = 0; w < n; ++w) {
        std::vector<NodeId> nb;
        for (NodeId v = 0; v < n; ++v) {
            if (m.adjacent(w, v)) nb.push_back(v);
        }
        for (std::size_t i = 0; i < nb.size(); ++i) {
            for (std::size_t j = i + 1; j < nb.size(); ++j) {
                NodeId x = nb[i];
                NodeId y = nb[j];
                if (m.adjacent(x, y)) continue;
                const auto* s = sepsets.find(x, y);
                if (s == nullptr) {
                    ++local.skipped_triples;
                    continue;
                }
                if (std::binary_search(s->begin(), s->end(), w)) continue;
                demand(x, w);
                demand(y, w);
            }
        }
    }
    if (log != nullptr) {
        log->conflicts += local.conflicts;
        log->skipped_triples += local.skipped_triples;
        log->rejected_cycles += local.rejected_cycles;
    }
    return m.to_pdag();
}

Pdag meek_closure(Pdag g, OrientationLog* log) {
    EdgeMatrix m(g);
    const int n = g.n_nodes();
    bool changed = true;
    while (changed) {
        changed = false;
        for (NodeId a = 0; a < n; ++a) {
            for (NodeId b = a + 1; b < n; ++b) {
                if (!m.undirected(a, b)) continue;
                for (auto [u, v] : {Edge{a, b}, Edge{b, a}}) {
                    if (!compelled(m, u, v)) continue;
                    if (m.has_directed_path(v, u)) {
                        if (log != nullptr) ++log->rejected_cycles;
                        continue;
                    }
                    m.orient(u, v);
                    changed = true;
                    break;
                }
            }
        }
    }
    return m.to_pdag();
}

}  // namespace bsl::graph
