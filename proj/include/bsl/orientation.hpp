#pragma once

#include <map>
#include <vector>

#include "bsl/graph.hpp"

namespace bsl::graph {

/// Separating sets keyed by unordered node pair. Sets are stored sorted.
class SepsetTable {
public:
    void set(NodeId a, NodeId b, std::vector<NodeId> sepset);
    /// nullptr when the pair was never separated.
    const std::vector<NodeId>* find(NodeId a, NodeId b) const;
    bool contains(NodeId a, NodeId b) const { return find(a, b) != nullptr; }
    std::size_t size() const { return table_.size(); }

    auto begin() const { return table_.begin(); }
    auto end() const { return table_.end(); }

    friend bool operator==(const SepsetTable&, const SepsetTable&) = default;

private:
    std::map<Edge, std::vector<NodeId>> table_;
};

struct OrientationLog {
    int conflicts = 0;         // edge demanded in both directions; first orientation kept
    int skipped_triples = 0;   // unshielded triple without a recorded sepset
    int rejected_cycles = 0;   // orientation that would close a directed cycle
};

/// For every unshielded triple x - w - y (x, y non-adjacent) orients
/// x -> w <- y iff w is not in sepset(x, y). Triples are visited by center w
/// ascending, then (x, y) lexicographically.
Pdag orient_v_structures(const UndirectedGraph& skeleton, const SepsetTable& sepsets,
                         OrientationLog* log = nullptr);

/// Applies Meek rules R1-R4 until no undirected edge can be oriented.
/// Orientations that would close a directed cycle are never made.
Pdag meek_closure(Pdag g, OrientationLog* log = nullptr);

}  // namespace bsl::graph
