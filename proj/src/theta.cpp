#include "afq/theta.hpp"

#include <array>
#include <stdexcept>

namespace afq {

namespace {

constexpr std::size_t kMaxMaterializedBlocks = std::size_t(1) << 21;

[[noreturn]] void unresolved(std::size_t n) {
    throw std::runtime_error("theta: bracketing at level " + std::to_string(n) +
                             " is unresolved at the available stream depth");
}

}  // namespace

ThetaTower::ThetaTower(ContinuedFraction cf) : cf_(std::move(cf)) {}

void ThetaTower::extend(std::size_t n) {
    if (n == 0) throw std::domain_error("theta: levels start at 1");
    if (levels_.empty()) {
        Level l1;
        l1.j = 0;
        l1.p_lo = 0;
        l1.q_lo = 1;
        l1.p_hi = 1;
        l1.q_hi = 1;
        l1.moved_right = false;
        levels_.push_back(std::move(l1));
    }
    while (levels_.size() < n) {
        const Level& cur = levels_.back();
        const std::size_t next = levels_.size() + 1;
        Int mp = cur.p_lo + cur.p_hi;
        Int mq = cur.q_lo + cur.q_hi;
        Cmp cmp = compare_to_rational(cf_, mp, mq, next + 64);
        Level nl;
        switch (cmp) {
            case Cmp::Greater:  // theta above the mediant: take the right child
                nl.j = 2 * cur.j + 1;
                nl.p_lo = mp;
                nl.q_lo = mq;
                nl.p_hi = cur.p_hi;
                nl.q_hi = cur.q_hi;
                nl.moved_right = true;
                break;
            case Cmp::Less:
                nl.j = 2 * cur.j;
                nl.p_lo = cur.p_lo;
                nl.q_lo = cur.q_lo;
                nl.p_hi = mp;
                nl.q_hi = mq;
                nl.moved_right = false;
                break;
            case Cmp::EqualAtDepth:
                // the available terms pin the mediant itself: a rational value
                // has no bracketing index, and a truncated stream cannot say
                // which side a continuation would take
                throw std::domain_error(
                    "theta: bracketing at level " + std::to_string(next) +
                    " undecidable, the stream's value equals the mediant " +
                    to_string(make_rat(mp, mq)) + "; provide more terms");
            case Cmp::Indeterminate:
                unresolved(next);
        }
        levels_.push_back(std::move(nl));
    }
}

const ThetaTower::Level& ThetaTower::level(std::size_t n) {
    extend(n);
    return levels_[n - 1];
}

std::vector<Int> ThetaTower::j_sequence(std::size_t N) {
    extend(N);
    std::vector<Int> out;
    out.reserve(N);
    for (std::size_t n = 1; n <= N; ++n) out.push_back(levels_[n - 1].j);
    return out;
}

Int ThetaTower::quotient_dimension(std::size_t n) {
    if (n == 0) return 1;
    const Level& l = level(n);
    return l.q_lo * l.q_lo + l.q_hi * l.q_hi;
}

Rat ThetaTower::beta(std::size_t n) { return make_rat(1, quotient_dimension(n)); }

void ThetaTower::certify_coefficient(const AffineCoefficient& c, std::size_t n) {
    std::size_t budget = 8;
    Enclosure prev{Rat(-1), Rat(-1)};
    for (;;) {
        Enclosure enc = value_enclosure(cf_, budget);
        Rat at_lo = c.evaluate(enc.lo);
        Rat at_hi = c.evaluate(enc.hi);
        const Rat& lo = std::min(at_lo, at_hi);
        const Rat& hi = std::max(at_lo, at_hi);
        if (lo > 0 && hi < 1) return;
        if (enc.lo == prev.lo && enc.hi == prev.hi)
            throw std::runtime_error("theta: trace coefficient at level " + std::to_string(n) +
                                     " cannot be certified inside (0,1) from the available terms");
        prev = enc;
        budget *= 2;
        if (budget > (std::size_t(1) << 20))
            throw std::runtime_error("theta: trace coefficient certification exceeded its budget");
    }
}

AffineCoefficient ThetaTower::trace_coefficient(std::size_t n) {
    if (n == 0) throw std::domain_error("theta: trace coefficients start at level 1");
    extend(n);
    if (coeffs_.empty()) {
        AffineCoefficient c1{Rat(-1), Rat(1)};  // c(1) = 1 - theta
        certify_coefficient(c1, 1);
        coeffs_.push_back(std::move(c1));
    }
    while (coeffs_.size() < n) {
        const std::size_t at = coeffs_.size();  // building c(at+1) from c(at)
        const Level& cur = levels_[at - 1];
        const Level& nxt = levels_[at];
        const AffineCoefficient& c = coeffs_.back();
        AffineCoefficient out;
        if (nxt.moved_right) {
            // c(n+1) = (1 + q_hi/q_lo) c(n)
            Rat factor = Rat(1) + make_rat(cur.q_hi, cur.q_lo);
            out.theta_coeff = factor * c.theta_coeff;
            out.constant = factor * c.constant;
        } else {
            // c(n+1) = ((q_lo + q_hi) c(n) - q_lo) / q_hi
            Rat s = make_rat(cur.q_lo + cur.q_hi, cur.q_hi);
            Rat t = make_rat(cur.q_lo, cur.q_hi);
            out.theta_coeff = s * c.theta_coeff;
            out.constant = s * c.constant - t;
        }
        certify_coefficient(out, at + 1);
        coeffs_.push_back(std::move(out));
    }
    return coeffs_[n - 1];
}

std::vector<Int> j_sequence(const ContinuedFraction& cf, std::size_t N) {
    return ThetaTower(cf).j_sequence(N);
}

Int quotient_dimension(const ContinuedFraction& cf, std::size_t n) {
    return ThetaTower(cf).quotient_dimension(n);
}

Rat beta(const ContinuedFraction& cf, std::size_t n) { return ThetaTower(cf).beta(n); }

AffineCoefficient trace_coefficient(const ContinuedFraction& cf, std::size_t n) {
    return ThetaTower(cf).trace_coefficient(n);
}

AffineCoefficient trace_value(const ContinuedFraction& cf, std::size_t n, const Rat& t_lo,
                              const Rat& t_hi) {
    AffineCoefficient c = trace_coefficient(cf, n);
    // c t_lo + (1 - c) t_hi
    AffineCoefficient out;
    out.theta_coeff = c.theta_coeff * (t_lo - t_hi);
    out.constant = c.constant * t_lo + (Rat(1) - c.constant) * t_hi;
    return out;
}

std::vector<std::size_t> ideal_blocks(const ContinuedFraction& cf, std::size_t n) {
    if (n <= 1) return {};
    const std::size_t width = (std::size_t(1) << (n - 1)) + 1;
    if (width > kMaxMaterializedBlocks)
        throw std::domain_error("ideal_blocks: level " + std::to_string(n) +
                                " is too wide to materialize; use the incremental tower");
    ThetaTower tower(cf);
    const ThetaTower::Level& l = tower.level(n);
    const std::size_t j = l.j.get_ui();
    std::vector<std::size_t> out;
    out.reserve(width - 2);
    for (std::size_t k = 0; k < width; ++k)
        if (k != j && k != j + 1) out.push_back(k);
    return out;
}

IdealDiagram theta_ideal_diagram(const ContinuedFraction& cf, const BratteliDiagram& base) {
    const std::size_t depth = base.depth();
    for (std::size_t n = 1; n <= depth; ++n)
        if (base.level_size(n) != (std::size_t(1) << (n - 1)) + 1)
            throw std::invalid_argument("theta_ideal_diagram: base is not a Farey diagram");
    IdealDiagram ideal;
    ideal.base = &base;
    ideal.levels.assign(depth + 1, {});
    for (std::size_t n = 2; n <= depth; ++n) ideal.levels[n] = ideal_blocks(cf, n);
    IdealValidity v = validate_ideal(ideal);
    if (!v.ok) throw std::logic_error("theta_ideal_diagram: " + v.message);
    return ideal;
}

IdealDistance theta_ideal_metric(const ContinuedFraction& theta, const ContinuedFraction& mu,
                                 std::size_t depth) {
    ThetaTower a(theta), b(mu);
    // Levels 0 and 1 of the ideals are always zero, so disagreement starts at 2.
    for (std::size_t n = 2; n <= depth; ++n) {
        if (a.level(n).j != b.level(n).j)
            return {IdealDistance::Kind::Dyadic, Dyadic{static_cast<unsigned long>(n)}, n + 1};
    }
    return {IdealDistance::Kind::AgreeToDepth, std::nullopt, depth + 1};
}

std::vector<RApproachStep> r_approach(const ContinuedFraction& cf, std::size_t N) {
    ThetaTower tower(cf);
    std::vector<RApproachStep> out;
    out.reserve(N);
    for (std::size_t n = 1; n <= N; ++n) {
        const ThetaTower::Level& l = tower.level(n);
        RApproachStep step;
        step.r = make_rat(l.p_lo, l.q_lo);
        step.gap = make_rat(l.p_hi, l.q_hi) - step.r;
        out.push_back(std::move(step));
    }
    return out;
}

namespace {

using Mat2 = std::array<Int, 4>;  // row-major 2x2

Mat2 mat2_mul(const Mat2& a, const Mat2& b) {
    return {a[0] * b[0] + a[1] * b[2], a[0] * b[1] + a[1] * b[3],
            a[2] * b[0] + a[3] * b[2], a[2] * b[1] + a[3] * b[3]};
}

EffrosShenReport identify(const ContinuedFraction& cf, std::size_t depth, bool flip) {
    EffrosShenReport rep;
    // telescope levels x_j = a_1 + ... + a_j within depth
    std::vector<std::size_t> xs;
    Int acc = 0;
    for (std::size_t j = 1; cf.has_term(j); ++j) {
        acc += cf.term(j);
        if (acc > static_cast<unsigned long>(depth)) break;
        xs.push_back(acc.get_ui());
        if (xs.back() == depth) break;
    }
    if (xs.size() < 2)
        throw std::domain_error(
            "effros_shen_identification: depth covers fewer than two telescope levels");
    const std::size_t J = xs.size();
    rep.telescope_count = J;
    rep.telescope_levels = xs;

    ThetaTower tower(cf);
    tower.level(xs.back());
    std::vector<ConvergentPair> cs = convergents(cf, J);

    auto fail = [&](const std::string& why) {
        rep.match = false;
        rep.mismatch = why;
        return rep;
    };

    // Orientation per telescope level: which of the two blocks carries the
    // current convergent denominator q_j.
    std::vector<bool> swapped(J);
    for (std::size_t j = 1; j <= J; ++j) {
        const ThetaTower::Level& l = tower.level(xs[j - 1]);
        const bool lower_is_qj = (l.p_lo == cs[j].p && l.q_lo == cs[j].q);
        const bool upper_is_qj = (l.p_hi == cs[j].p && l.q_hi == cs[j].q);
        if (lower_is_qj == upper_is_qj)
            return fail("telescope level " + std::to_string(xs[j - 1]) +
                        " does not bracket with the convergent p_" + std::to_string(j) + "/q_" +
                        std::to_string(j));
        swapped[j - 1] = upper_is_qj;
    }
    rep.swapped = swapped;
    if (flip)
        for (std::size_t i = 0; i < J; ++i) swapped[i] = !swapped[i];

    // Labels: after the swap the pair must read (q_j, q_{j-1}).
    for (std::size_t j = 1; j <= J; ++j) {
        const ThetaTower::Level& l = tower.level(xs[j - 1]);
        const Int& first = swapped[j - 1] ? l.q_hi : l.q_lo;
        const Int& second = swapped[j - 1] ? l.q_lo : l.q_hi;
        if (first != cs[j].q || second != cs[j - 1].q)
            return fail("labels at telescope level " + std::to_string(xs[j - 1]) +
                        " differ from (q_" + std::to_string(j) + ", q_" + std::to_string(j - 1) +
                        ")");
    }

    // Edge matrices: the telescoped two-block products, read through the
    // swaps, must be [[a_{j+1}, 1], [1, 0]].
    for (std::size_t j = 1; j < J; ++j) {
        Mat2 prod{Int(1), Int(0), Int(0), Int(1)};
        for (std::size_t n = xs[j - 1] + 1; n <= xs[j]; ++n) {
            const Mat2 step = tower.level(n).moved_right
                                  ? Mat2{Int(1), Int(1), Int(0), Int(1)}
                                  : Mat2{Int(1), Int(0), Int(1), Int(1)};
            prod = mat2_mul(step, prod);
        }
        Mat2 es_frame;
        const bool sc = swapped[j - 1], sr = swapped[j];
        for (int r = 0; r < 2; ++r)
            for (int c = 0; c < 2; ++c)
                es_frame[(sr ? 1 - r : r) * 2 + (sc ? 1 - c : c)] = prod[r * 2 + c];
        const Mat2 expected{cf.term(j + 1), Int(1), Int(1), Int(0)};
        if (es_frame != expected)
            return fail("edge matrix between telescope levels " + std::to_string(xs[j - 1]) +
                        " and " + std::to_string(xs[j]) + " differs");
    }

    rep.match = true;
    return rep;
}

}  // namespace

EffrosShenReport effros_shen_identification(const ContinuedFraction& cf, std::size_t depth) {
    return identify(cf, depth, false);
}

EffrosShenReport effros_shen_identification_flipped(const ContinuedFraction& cf,
                                                    std::size_t depth) {
    return identify(cf, depth, true);
}

}  // namespace afq
