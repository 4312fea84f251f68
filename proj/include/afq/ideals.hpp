#pragma once

#include "afq/bratteli.hpp"

#include <optional>
#include <string>
#include <vector>

namespace afq {

/// Per-level vertex subsets of a Bratteli diagram.  A valid ideal diagram is
/// directed (edges leaving the subset stay in it) and hereditary (a vertex all
/// of whose targets lie in the subset lies in it); edges are induced.
struct IdealDiagram {
    const BratteliDiagram* base = nullptr;
    std::vector<std::vector<std::size_t>> levels;  // sorted vertex indices, one list per level

    std::size_t depth() const { return levels.empty() ? 0 : levels.size() - 1; }
    bool level_contains(std::size_t n, std::size_t k) const;
    bool is_improper() const;  // every vertex of the base through depth()
};

struct IdealValidity {
    enum class Axiom { None, Directed, Hereditary, IndexRange };
    bool ok = true;
    bool improper = false;  // all vertices: admitted, flagged
    Axiom violated = Axiom::None;
    std::size_t level = 0;
    std::size_t vertex = 0;
    std::string message;
};

IdealValidity validate_ideal(const BratteliDiagram& base,
                             const std::vector<std::vector<std::size_t>>& levels);
IdealValidity validate_ideal(const IdealDiagram& ideal);

/// The unique level-n subset coherent with `upper` at level n+1: block k
/// belongs iff every edge target of (n,k) lies in `upper`.
std::vector<std::size_t> restrict_level(const BratteliDiagram& base, std::size_t n,
                                        const std::vector<std::size_t>& upper);

/// All coherent ideal truncations through level N, obtained by
/// back-propagating every subset of level N.  Deterministic order (by subset
/// bitmask); guarded to at most 20 vertices at level N.
std::vector<IdealDiagram> enumerate_coherent_ideals(const BratteliDiagram& base, std::size_t N);
std::vector<IdealDiagram> enumerate_coherent_ideals_serial(const BratteliDiagram& base,
                                                           std::size_t N);

struct IdealDistance {
    enum class Kind { Dyadic, AgreeToDepth } kind;
    std::optional<afq::Dyadic> value;  // set when kind == Kind::Dyadic
    std::size_t compared = 0;

    Rat to_rational() const;
};

/// 2^-m at the first level m where the two ideals differ; agreement through
/// `depth` is reported as such, never rounded to zero.
///
/// Level 0 counts: on a unital tower two proper ideals always agree there
/// (the scalar level holds no proper ideal vertices), so proper ideals are at
/// most 1/2 apart, and only the improper ideal realizes distance 1.
IdealDistance ideal_metric(const IdealDiagram& a, const IdealDiagram& b, std::size_t depth);

/// Quotient norm of a block-diagonal element at one level: the max block norm
/// outside the ideal, 0 when every block lies inside.
Rat quotient_norm_at_level(const std::vector<Rat>& block_norms, const IdealDiagram& ideal,
                           std::size_t n);

struct FusingReport {
    bool ok = true;
    std::vector<std::size_t> c;       // c[N], N = 0..depth, when ok
    std::size_t failed_level = 0;     // first N with no admissible tail index
};

/// Minimal fusing sequence of an ideal sequence against its limit: c[N] is
/// the least k0 such that every ideal from k0 on agrees with the limit
/// through level N.
FusingReport detect_fusing(const std::vector<IdealDiagram>& ideals, const IdealDiagram& limit,
                           std::size_t depth);

/// Diagram on the complement vertices with induced edges; throws when the
/// complement is empty at some level or violates the diagram axioms (which
/// signals an invalid ideal).
BratteliDiagram quotient_diagram(const BratteliDiagram& d, const IdealDiagram& ideal);

std::string ideal_to_json(const IdealDiagram& ideal);
std::vector<std::vector<std::size_t>> ideal_levels_from_json(const std::string& text);

}  // namespace afq
