#pragma once

#include "afq/cf.hpp"
#include "afq/farey.hpp"

#include <string>
#include <vector>

namespace afq {

/// Leveled directed multigraph with matrix-size labels.  Edges between
/// consecutive levels are stored as partial multiplicity matrices, so
/// telescoping is matrix multiplication.
///
/// Axioms: (i) edges connect consecutive levels only (structural here),
/// (ii) no vertex without an outgoing edge (no zero column),
/// (iii) no vertex at level n >= 1 without an incoming edge (no zero row).
struct BratteliDiagram {
    std::vector<std::vector<Int>> labels;      // labels[n][k] >= 1
    std::vector<MultiplicityMatrix> matrices;  // matrices[n] maps level n to n+1

    std::size_t depth() const { return labels.empty() ? 0 : labels.size() - 1; }
    std::size_t level_size(std::size_t n) const { return labels.at(n).size(); }
};

/// Throws naming the offending vertex when an axiom fails.
void validate_diagram(const BratteliDiagram& d);

/// Build from a level-0 label vector and a matrix chain: labels of deeper
/// levels are the matrix products of label0, which is the unital-tower rule.
BratteliDiagram diagram_from_matrices(std::vector<Int> label0,
                                      std::vector<MultiplicityMatrix> matrices);

/// Build from explicit labels.  General diagrams need not satisfy
/// label = product; pass `unital_tower` to enforce that rule as a cross-check.
BratteliDiagram diagram_with_labels(std::vector<std::vector<Int>> labels,
                                    std::vector<MultiplicityMatrix> matrices,
                                    bool unital_tower = false);

/// Farey diagram truncated at level `depth`: level-n labels q(n,.), edges by
/// the |2k - l| <= 1 rule, plus the scalar level 0 with the doubling
/// embedding into level 1.
BratteliDiagram farey_diagram(int depth);

/// Effros-Shen diagram of the stream: level-n labels (q_n, q_{n-1}) with
/// 2x2 steps [[a_{n+1}, 1], [1, 0]] above the scalar seed.
BratteliDiagram effros_shen_diagram(const ContinuedFraction& cf, std::size_t depth);

/// Telescope along a strictly increasing level list; edge matrices become the
/// ordered products between consecutive chosen levels.
BratteliDiagram telescope(const BratteliDiagram& d, const std::vector<std::size_t>& levels);

/// Sum of squared labels at level n.
Int dimension_at_level(const BratteliDiagram& d, std::size_t n);

std::string diagram_to_json(const BratteliDiagram& d);
std::string diagram_to_dot(const BratteliDiagram& d);
BratteliDiagram diagram_from_json(const std::string& text);

}  // namespace afq
