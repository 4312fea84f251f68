#pragma once

#include "afq/rational.hpp"

#include <cstddef>
#include <optional>
#include <vector>

namespace afq {

/// Continued fraction [0; a1, a2, ...] of a value in [0,1).
///
/// The term stream is either a finite prefix of stated depth or eventually
/// periodic (head followed by a repeating block), which pins a quadratic
/// irrational exactly.  terms[0] is always 0 and every later term is >= 1.
class ContinuedFraction {
public:
    /// Finite stream; terms must start with 0.
    static ContinuedFraction finite(std::vector<Int> terms);

    /// Eventually periodic stream head + (period) with nonempty period.
    static ContinuedFraction periodic(std::vector<Int> head, std::vector<Int> period);

    bool is_periodic() const { return !period_.empty(); }
    bool is_finite() const { return period_.empty(); }

    /// Finite streams run out of terms; periodic streams never do.
    bool has_term(std::size_t j) const;
    const Int& term(std::size_t j) const;

    /// Number of explicit head terms (for a finite stream, its full length).
    std::size_t head_length() const { return head_.size(); }
    const std::vector<Int>& head() const { return head_; }
    const std::vector<Int>& period() const { return period_; }

    /// True when the two term streams are provably identical (decidable for
    /// finite and eventually periodic representations).
    bool definitely_equal(const ContinuedFraction& other) const;

    /// "0;a1,a2,(p1,p2)" with the parenthesized block marking the period.
    std::string to_string() const;

private:
    ContinuedFraction(std::vector<Int> head, std::vector<Int> period);

    std::vector<Int> head_;    // head_[0] == 0
    std::vector<Int> period_;  // empty => finite
};

/// Parse the CLI syntax "0;a1,a2,(p1,p2)".
ContinuedFraction parse_cf(const std::string& text);

struct ConvergentPair {
    Int p;
    Int q;
    std::size_t index = 0;
};

/// Euclidean expansion of num/den in [0,1); canonical form ends with a
/// term >= 2 whenever the expansion has more than one term.
ContinuedFraction cf_from_rational(const Int& num, const Int& den);

/// Convenience only: expands the dyadic rational a double happens to encode,
/// truncated to max_terms.  Inexact by nature (the input was already rounded)
/// and excluded from the verification suite; exact work should go through
/// cf_from_rational or an explicit term stream.
ContinuedFraction cf_from_double(double x, std::size_t max_terms = 24);

/// Convergents (p_k, q_k) for k = 0..n via the standard matrix recursion
/// seeded with (p_0, q_0) = (a_0, 1), (p_1, q_1) = (a_0 a_1 + 1, a_1).
std::vector<ConvergentPair> convergents(const ContinuedFraction& cf, std::size_t n);

enum class Cmp {
    Less,          // cf value certainly below the rational
    Greater,       // cf value certainly above the rational
    EqualAtDepth,  // the finite stream's exact value equals the rational
    Indeterminate  // not resolvable from the available terms; never guessed
};

/// Exact comparison of the represented value against num/den using the
/// alternating convergent enclosure; convergent indices up to `depth` are used.
Cmp compare_to_rational(const ContinuedFraction& cf, const Int& num, const Int& den,
                        std::size_t depth);
Cmp compare_to_rational(const ContinuedFraction& cf, const Rat& target, std::size_t depth);

/// Exact interval certainly containing the represented value (and every value
/// consistent with a finite prefix), tightened from at most `depth` convergents.
struct Enclosure {
    Rat lo;
    Rat hi;
};
Enclosure value_enclosure(const ContinuedFraction& cf, std::size_t depth);

struct BaireDistance {
    enum class Kind { Dyadic, Zero, AgreeToDepth } kind;
    std::optional<afq::Dyadic> value;  // set when kind == Dyadic
    std::size_t compared = 0;          // indices examined

    Rat to_rational() const;  // AgreeToDepth reports 0 only through Kind
};

/// First-disagreement ultrametric on term streams, index 0 included;
/// agreement through index `depth` without provable equality is reported as
/// a distinct agree-to-depth outcome, never coerced to 0.
BaireDistance baire_distance(const ContinuedFraction& x, const ContinuedFraction& y,
                             std::size_t depth);

}  // namespace afq
