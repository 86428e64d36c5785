#pragma once

#include <iosfwd>
#include <string>
#include <variant>

#include "bsl/graph.hpp"

// Edge-list text format:
//
//   dag <n_nodes>            or   pdag <n_nodes>
//   d <src> <dst>                 (directed edge)
//   u <a> <b>                     (undirected edge, pdag only)
//
// One record per line, decimal node ids, newline terminated.

namespace bsl::graph {

class ParseError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

void write_edge_list(std::ostream& out, const Dag& g);
void write_edge_list(std::ostream& out, const Pdag& g);

std::variant<Dag, Pdag> read_edge_list(std::istream& in);
Dag read_dag(std::istream& in);
Pdag read_pdag(std::istream& in);

void write_dot(std::ostream& out, const Dag& g, const std::string& name = "dag");
void write_dot(std::ostream& out, const Pdag& g, const std::string& name = "pdag");

}  // namespace bsl::graph
