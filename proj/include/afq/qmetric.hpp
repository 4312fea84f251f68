#pragma once

#include "afq/farey.hpp"

#include <Eigen/Dense>

#include <cstddef>
#include <functional>
#include <random>
#include <string>
#include <vector>

namespace afq {

using CMat = Eigen::MatrixXcd;

/// Element of a multi-matrix algebra: one complex matrix per block.
struct BlockElement {
    std::vector<CMat> blocks;
};

BlockElement zero_element(const std::vector<int>& block_sizes);
BlockElement identity_element(const std::vector<int>& block_sizes);
bool is_hermitian(const BlockElement& a, double tol = 1e-12);
BlockElement hermitian_part(const BlockElement& a);
double operator_norm(const BlockElement& a);  // max over blocks of the spectral norm

// Pointwise vector-space helpers.
BlockElement add(const BlockElement& a, const BlockElement& b);
BlockElement sub(const BlockElement& a, const BlockElement& b);
BlockElement scale(const BlockElement& a, double s);
BlockElement multiply(const BlockElement& a, const BlockElement& b);  // blockwise product
BlockElement jordan_product(const BlockElement& a, const BlockElement& b);  // (ab+ba)/2
BlockElement lie_product(const BlockElement& a, const BlockElement& b);     // (ab-ba)/2i

/// State on a multi-matrix algebra: per-block weight and density matrix,
/// a |-> sum_i w_i Tr(rho_i a_i).
struct AlgebraState {
    std::vector<double> weights;
    std::vector<CMat> densities;
};
double apply_state(const AlgebraState& s, const BlockElement& a);

/// Truncated chain of multi-matrix algebras with unital embeddings, carrying
/// a faithful tracial state on the top level and a positive beta sequence.
///
/// Embedding convention, fixed throughout: target block h of one step is the
/// block-diagonal matrix listing source block k repeated M[h][k] times, for k
/// ascending.
class ChainSpace {
public:
    ChainSpace(std::vector<std::vector<int>> level_blocks,
               std::vector<MultiplicityMatrix> steps, std::vector<double> trace_weights,
               std::vector<double> beta);

    std::size_t level_count() const { return blocks_.size(); }  // N + 1
    std::size_t top() const { return blocks_.size() - 1; }
    const std::vector<int>& blocks_at(std::size_t n) const { return blocks_[n]; }
    const std::vector<int>& top_blocks() const { return blocks_.back(); }
    double beta(std::size_t n) const { return beta_.at(n); }
    const std::vector<double>& trace_weights() const { return trace_; }

    /// Tracial state on the top algebra (real part for Hermitian input).
    double mu(const BlockElement& top_element) const;

    /// Unital *-embedding of a level-n element into level m >= n.
    BlockElement embed(const BlockElement& x, std::size_t from, std::size_t to) const;

    /// Trace-preserving conditional expectation onto the embedded image of
    /// level n, returned at the top level.
    BlockElement conditional_expectation(const BlockElement& a, std::size_t n) const;

    /// sup_n ||a - E_n(a)|| / beta(n) over the truncated chain.
    double lip_norm(const BlockElement& a) const;

    /// phi composed with E_n, re-expressed as a state.
    AlgebraState compose_with_expectation(const AlgebraState& phi, std::size_t n) const;

private:
    std::vector<std::vector<int>> blocks_;
    std::vector<MultiplicityMatrix> steps_;
    std::vector<double> trace_;
    std::vector<double> beta_;
    // per level: flattened embedding basis and the Cholesky of its weighted Gram
    struct Projector {
        Eigen::MatrixXcd basis;               // top-coordinates x image-dimension
        Eigen::LLT<Eigen::MatrixXcd> gram;    // basis^H W basis
    };
    std::vector<Projector> projectors_;
    Eigen::VectorXd weight_;  // diagonal of W in flattened top coordinates

    Eigen::VectorXcd flatten(const BlockElement& a) const;
    BlockElement unflatten(const Eigen::VectorXcd& v) const;
};

void validate_state(const AlgebraState& s, const std::vector<int>& block_sizes,
                    double tol = 1e-9);

/// (2,0)-quasi-Leibniz inequality for a caller-supplied seminorm:
/// max(L((ab+ba)/2), L((ab-ba)/2i)) <= 2 (||a|| L(b) + ||b|| L(a)) + tol.
bool quasi_leibniz_holds(const std::function<double(const BlockElement&)>& lip,
                         const BlockElement& a, const BlockElement& b, double tol = 1e-9);

/// Same inequality with the chain's own Lip-norm.
bool quasi_leibniz_check(const BlockElement& a, const BlockElement& b, const ChainSpace& chain,
                         double tol = 1e-9);

struct SolverConfig {
    int max_iters = 6000;
    double tol = 1e-6;          // relative improvement threshold
    int stall_window = 400;     // iterations without improvement before flagging
    unsigned seed = 20120;      // deterministic sampling seed
    double feasibility_tol = 1e-9;
};

struct MKResult {
    double value = 0.0;     // certified lower bound via the feasible witness
    bool stalled = false;   // extreme-direction sampling stopped improving within the window
    int iterations = 0;
    BlockElement witness;   // feasible element attaining `value`
};

/// Monge-Kantorovich distance sup { |phi(a) - psi(a)| : L(a) <= 1 } via
/// deterministic seeded projected-supergradient ascent over the Lip-norm unit
/// ball (gauge normalization keeps every iterate feasible, so the reported
/// value is a certified lower bound).
MKResult mk_distance(const AlgebraState& phi, const AlgebraState& psi, const ChainSpace& chain,
                     const SolverConfig& cfg = {});

}  // namespace afq
