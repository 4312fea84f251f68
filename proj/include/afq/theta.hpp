#pragma once

#include "afq/bratteli.hpp"
#include "afq/ideals.hpp"

#include <vector>

namespace afq {

/// Exact rational pair (a,b) for the affine form a*theta + b.
struct AffineCoefficient {
    Rat theta_coeff;  // a
    Rat constant;     // b

    Rat evaluate(const Rat& theta) const { return theta_coeff * theta + constant; }
    bool operator==(const AffineCoefficient&) const = default;
};

/// The two surviving Farey blocks of the quotient by a theta-indexed
/// primitive ideal, tracked level by level.
///
/// Level n holds the unique index j_n with r(n, j_n) < theta < r(n, j_n + 1)
/// together with both bracketing fractions.  The descent is incremental: one
/// exact mediant comparison decides j_{n+1} between 2 j_n and 2 j_n + 1, so
/// no Farey row is ever materialized and depths in the thousands stay cheap.
class ThetaTower {
public:
    explicit ThetaTower(ContinuedFraction cf);

    struct Level {
        Int j;             // j_n
        Int p_lo, q_lo;    // r(n, j_n)
        Int p_hi, q_hi;    // r(n, j_n + 1)
        bool moved_right;  // j_n = 2 j_{n-1} + 1 (false at n = 1)
    };

    const ContinuedFraction& cf() const { return cf_; }

    /// Data for level n >= 1, extending the descent as needed.  Throws an
    /// explicit indeterminate error naming the level when the available terms
    /// cannot resolve a bracketing, and a domain error when the stream's
    /// exact value hits a mediant (a rational theta has no bracketing).
    const Level& level(std::size_t n);

    /// j_1..j_N.
    std::vector<Int> j_sequence(std::size_t N);

    /// Quotient dimension q(n,j_n)^2 + q(n,j_n+1)^2 for n >= 1, 1 at n = 0.
    Int quotient_dimension(std::size_t n);

    /// beta(n): reciprocal of the quotient dimension, beta(0) = 1.
    Rat beta(std::size_t n);

    /// Affine trace coefficient c(n, theta), n >= 1; certified inside (0,1)
    /// on a convergent enclosure of theta before being returned.
    AffineCoefficient trace_coefficient(std::size_t n);

private:
    void extend(std::size_t n);
    void certify_coefficient(const AffineCoefficient& c, std::size_t n);

    ContinuedFraction cf_;
    std::vector<Level> levels_;               // levels_[i] is level i+1
    std::vector<AffineCoefficient> coeffs_;   // coeffs_[i] is c(i+1, theta)
};

// Free functions mirroring the tower, for one-shot use.
std::vector<Int> j_sequence(const ContinuedFraction& cf, std::size_t N);
Int quotient_dimension(const ContinuedFraction& cf, std::size_t n);
Rat beta(const ContinuedFraction& cf, std::size_t n);
AffineCoefficient trace_coefficient(const ContinuedFraction& cf, std::size_t n);

/// Trace of a block-diagonal element with normalized block traces t_lo, t_hi
/// on the two surviving blocks: c * t_lo + (1 - c) * t_hi as an affine form.
AffineCoefficient trace_value(const ContinuedFraction& cf, std::size_t n, const Rat& t_lo,
                              const Rat& t_hi);

/// Vertex subset of the ideal at level n: everything except {j_n, j_n + 1}
/// (empty at levels 0 and 1).  Materialized, so guarded to small n.
std::vector<std::size_t> ideal_blocks(const ContinuedFraction& cf, std::size_t n);

/// The ideal as a diagram over `base`, which must be a Farey diagram of
/// matching depth.
IdealDiagram theta_ideal_diagram(const ContinuedFraction& cf, const BratteliDiagram& base);

/// First-disagreement dyadic distance between two theta-ideals, computed on
/// the incremental towers; scales to depths in the thousands.
IdealDistance theta_ideal_metric(const ContinuedFraction& theta, const ContinuedFraction& mu,
                                 std::size_t depth);

struct RApproachStep {
    Rat r;    // r(n, j_n)
    Rat gap;  // r(n, j_n + 1) - r(n, j_n)
};
/// The lower bracket and its gap for n = 1..N; gaps are nonincreasing and
/// squeeze theta.
std::vector<RApproachStep> r_approach(const ContinuedFraction& cf, std::size_t N);

/// Comparison of the telescoped two-block quotient tower against the
/// Effros-Shen diagram of the same stream.
///
/// Telescope levels are x_j = a_1 + ... + a_j.  At each x_j the two blocks
/// carry the continued-fraction denominators {q_j, q_{j-1}} as labels; which
/// block carries q_j is certified by matching r(x_j, .) against the exact
/// convergent p_j / q_j, and that orientation is the block swap applied
/// before comparing labels and edge matrices with the Effros-Shen data.
struct EffrosShenReport {
    bool match = false;
    std::size_t telescope_count = 0;            // J
    std::vector<std::size_t> telescope_levels;  // x_1..x_J
    std::vector<bool> swapped;                  // per level: lower block is q_{j-1}
    std::string mismatch;                       // first discrepancy, when any
};
EffrosShenReport effros_shen_identification(const ContinuedFraction& cf, std::size_t depth);

/// Same comparison with every orientation deliberately inverted; a correct
/// build reports a mismatch (negative control).
EffrosShenReport effros_shen_identification_flipped(const ContinuedFraction& cf,
                                                    std::size_t depth);

}  // namespace afq
