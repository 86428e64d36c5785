#pragma once

#include <cstdint>
#include <optional>
#include <string_view>
#include <vector>

#include "bsl/ci_tests.hpp"
#include "bsl/graph.hpp"
#include "bsl/orientation.hpp"
#include "bsl/sem.hpp"

namespace bsl::learn {

using graph::NodeId;

enum class Algorithm { pc_stable, grow_shrink, fast_iamb };

std::string_view to_string(Algorithm a);
/// Accepts "pc_stable", "grow_shrink", "fast_iamb" (and "-" for "_").
Algorithm parse_algorithm(std::string_view s);

struct LearnParams {
    Algorithm algorithm = Algorithm::pc_stable;
    ci::CiTestKind test;
    /// Largest conditioning set ever tested. Unset means unbounded (up to the
    /// degrees-of-freedom guard of the test).
    std::optional<int> max_condset;

    void validate() const;
};

struct LearnResult {
    graph::Pdag pdag;
    graph::SepsetTable sepsets;
    graph::OrientationLog orientation;
    std::int64_t n_tests = 0;
    std::int64_t n_skipped_tests = 0;
};

/// PC-stable. Adjacency sets are frozen at the start of each level and edge
/// removals are committed when the level ends, so the skeleton does not depend
/// on variable order. When several conditioning sets separate a pair at the
/// same level, the one with the largest p-value is recorded.
LearnResult pc_stable(ci::IndependenceTest& test, const LearnParams& params);
LearnResult pc_stable(const sem::DataMatrix& data, const LearnParams& params);

/// Grow-Shrink Markov blanket of `target`, sorted.
std::vector<NodeId> grow_shrink_mb(ci::IndependenceTest& test, NodeId target,
                                   const LearnParams& params);
/// Fast-IAMB Markov blanket of `target`, sorted.
std::vector<NodeId> fast_iamb_mb(ci::IndependenceTest& test, NodeId target,
                                 const LearnParams& params);

/// Blanket-based pipeline used by grow_shrink and fast_iamb.
LearnResult mb_based_learn(ci::IndependenceTest& test, const LearnParams& params);

/// Dispatches on params.algorithm.
LearnResult learn(ci::IndependenceTest& test, const LearnParams& params);
LearnResult learn(const sem::DataMatrix& data, const LearnParams& params);

}  // namespace bsl::learn
