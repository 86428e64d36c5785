#include "bsl/graph_io.hpp"

#include <istream>
#include <ostream>
#include <sstream>

namespace bsl::graph {

namespace {

struct RawGraph {
    std::string kind;
    int n_nodes = 0;
    std::vector<Edge> directed;
    std::vector<Edge> undirected;
};

RawGraph parse(std::istream& in) {
    RawGraph raw;
    std::string line;
    int line_no = 0;
    bool have_header = false;
    while (std::getline(in, line)) {
        ++line_no;
        if (line.empty()) continue;
        std::istringstream fields(line);
        std::string tag;
        fields >> tag;
        auto fail = [&](const std::string& why) {
            throw ParseError("edge list line " + std::to_string(line_no) + ": " + why);
        };
        if (!have_header) {
            if (tag != "dag" && tag != "pdag") fail("expected 'dag <n>' or 'pdag <n>' header");
            if (!(fields >> raw.n_nodes) || raw.n_nodes < 0) fail("bad node count");
            raw.kind = tag;
            have_header = true;
            continue;
        }
        NodeId a = 0;
        NodeId b = 0;
        if (!(fields >> a >> b)) fail("expected two node ids");
        std::string rest;
        if (fields >> rest) fail("trailing content");
        if (tag == "d") {
            raw.directed.emplace_back(a, b);
        } else if (tag == "u") {
            if (raw.kind == "dag") fail("undirected edge in a dag");
            raw.undirected.emplace_back(a, b);
        } else {
            fail("unknown record '" + tag + "'");
        }
    }
    if (!have_header) throw ParseError("edge list is empty");
    return raw;
}

Pdag build_pdag(const RawGraph& raw) {
    Pdag g(raw.n_nodes);
    for (const auto& [u, v] : raw.directed) g.add_directed(u, v);
    for (const auto& [a, b] : raw.undirected) g.add_undirected(a, b);
    return g;
}

}  // namespace

void write_edge_list(std::ostream& out, const Dag& g) {
    out << "dag " << g.n_nodes() << '\n';
    for (const auto& [u, v] : g.edges()) out << "d " << u << ' ' << v << '\n';
}

void write_edge_list(std::ostream& out, const Pdag& g) {
    out << "pdag " << g.n_nodes() << '\n';
    for (const auto& [u, v] : g.directed_edges()) out << "d " << u << ' ' << v << '\n';
    for (const auto& [a, b] : g.undirected_edges()) out << "u " << a << ' ' << b << '\n';
}

std::variant<Dag, Pdag> read_edge_list(std::istream& in) {
    RawGraph raw = parse(in);
    if (raw.kind == "dag") return Dag(raw.n_nodes, raw.directed);
    return build_pdag(raw);
}

Dag read_dag(std::istream& in) {
    RawGraph raw = parse(in);
    if (raw.kind != "dag") throw ParseError("expected a dag, found " + raw.kind);
    return Dag(raw.n_nodes, raw.directed);
}

Pdag read_pdag(std::istream& in) {
    RawGraph raw = parse(in);
    if (raw.kind == "dag") {
        Dag checked(raw.n_nodes, raw.directed);
        return as_pdag(checked);
    }
    return build_pdag(raw);
}

void write_dot(std::ostream& out, const Dag& g, const std::string& name) {
    out << "digraph " << name << " {\n";
    for (NodeId v = 0; v < g.n_nodes(); ++v) out << "  x" << v << ";\n";
    for (const auto& [u, v] : g.edges()) out << "  x" << u << " -> x" << v << ";\n";
    out << "}\n";
}

void write_dot(std::ostream& out, const Pdag& g, const std::string& name) {
    out << "digraph " << name << " {\n";
    for (NodeId v = 0; v < g.n_nodes(); ++v) out << "  x" << v << ";\n";
    for (const auto& [u, v] : g.directed_edges()) out << "  x" << u << " -> x" << v << ";\n";
    for (const auto& [a, b] : g.undirected_edges()) {
        out << "  x" << a << " -> x" << b << " [dir=none];\n";
    }
    out << "}\n";
}

}  // namespace bsl::graph
