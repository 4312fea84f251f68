#include "afq/ideals.hpp"

#include <nlohmann/json.hpp>

#include <algorithm>
#include <stdexcept>

namespace afq {

namespace {

std::string vertex_name(std::size_t n, std::size_t k) {
    return "(" + std::to_string(n) + "," + std::to_string(k) + ")";
}

std::vector<bool> level_mask(const std::vector<std::size_t>& level, std::size_t size) {
    std::vector<bool> mask(size, false);
    for (std::size_t k : level) {
        if (k >= size) throw std::out_of_range("ideal: vertex index out of range");
        mask[k] = true;
    }
    return mask;
}

}  // namespace

bool IdealDiagram::level_contains(std::size_t n, std::size_t k) const {
    if (n >= levels.size()) return false;
    return std::binary_search(levels[n].begin(), levels[n].end(), k);
}

bool IdealDiagram::is_improper() const {
    if (!base) return false;
    for (std::size_t n = 0; n < levels.size(); ++n)
        if (levels[n].size() != base->level_size(n)) return false;
    return true;
}

IdealValidity validate_ideal(const BratteliDiagram& base,
                             const std::vector<std::vector<std::size_t>>& levels) {
    IdealValidity v;
    if (levels.size() > base.labels.size())
        throw std::out_of_range("ideal: more levels than the base diagram");
    std::vector<std::vector<bool>> masks;
    for (std::size_t n = 0; n < levels.size(); ++n) {
        for (std::size_t k : levels[n])
            if (k >= base.level_size(n)) {
                v.ok = false;
                v.violated = IdealValidity::Axiom::IndexRange;
                v.level = n;
                v.vertex = k;
                v.message = "vertex index " + vertex_name(n, k) + " out of range";
                return v;
            }
        masks.push_back(level_mask(levels[n], base.level_size(n)));
    }
    for (std::size_t n = 0; n + 1 < levels.size(); ++n) {
        const MultiplicityMatrix& m = base.matrices[n];
        // directed: edges leaving an ideal vertex land in the ideal
        for (std::size_t k = 0; k < masks[n].size(); ++k) {
            if (!masks[n][k]) continue;
            for (std::size_t l = 0; l < masks[n + 1].size(); ++l)
                if (m.at(l, k) != 0 && !masks[n + 1][l]) {
                    v.ok = false;
                    v.violated = IdealValidity::Axiom::Directed;
                    v.level = n;
                    v.vertex = k;
                    v.message = "directed axiom fails at " + vertex_name(n, k) + " -> " +
                                vertex_name(n + 1, l);
                    return v;
                }
        }
        // hereditary: a vertex whose whole range lies in the ideal belongs to it
        for (std::size_t k = 0; k < masks[n].size(); ++k) {
            if (masks[n][k]) continue;
            bool all_in = true;
            for (std::size_t l = 0; l < masks[n + 1].size() && all_in; ++l)
                if (m.at(l, k) != 0) all_in = masks[n + 1][l];
            if (all_in) {
                v.ok = false;
                v.violated = IdealValidity::Axiom::Hereditary;
                v.level = n;
                v.vertex = k;
                v.message = "hereditary axiom fails at " + vertex_name(n, k);
                return v;
            }
        }
    }
    bool improper = !levels.empty();
    for (std::size_t n = 0; n < levels.size() && improper; ++n)
        improper = levels[n].size() == base.level_size(n);
    v.improper = improper;
    return v;
}

IdealValidity validate_ideal(const IdealDiagram& ideal) {
    if (!ideal.base) throw std::invalid_argument("ideal: missing base diagram");
    return validate_ideal(*ideal.base, ideal.levels);
}

std::vector<std::size_t> restrict_level(const BratteliDiagram& base, std::size_t n,
                                        const std::vector<std::size_t>& upper) {
    if (n + 1 > base.depth()) throw std::out_of_range("restrict_level: level beyond diagram");
    const MultiplicityMatrix& m = base.matrices[n];
    std::vector<bool> up = level_mask(upper, base.level_size(n + 1));
    std::vector<std::size_t> out;
    for (std::size_t k = 0; k < base.level_size(n); ++k) {
        bool all_in = true;
        for (std::size_t l = 0; l < up.size() && all_in; ++l)
            if (m.at(l, k) != 0) all_in = up[l];
        if (all_in) out.push_back(k);
    }
    return out;
}

namespace {

IdealDiagram ideal_from_top_subset(const BratteliDiagram& base, std::size_t N,
                                   unsigned long bits) {
    IdealDiagram ideal;
    ideal.base = &base;
    ideal.levels.assign(N + 1, {});
    for (std::size_t k = 0; k < base.level_size(N); ++k)
        if (bits & (1ul << k)) ideal.levels[N].push_back(k);
    for (std::size_t n = N; n-- > 0;)
        ideal.levels[n] = restrict_level(base, n, ideal.levels[n + 1]);
    return ideal;
}

template <bool Parallel>
std::vector<IdealDiagram> enumerate_impl(const BratteliDiagram& base, std::size_t N) {
    if (N > base.depth()) throw std::out_of_range("enumerate: level beyond diagram depth");
    const std::size_t width = base.level_size(N);
    if (width > 20)
        throw std::domain_error("enumerate: level " + std::to_string(N) + " has " +
                                std::to_string(width) + " vertices, above the guard of 20");
    const unsigned long count = 1ul << width;
    std::vector<IdealDiagram> out(count);
#pragma omp parallel for if (Parallel && count >= 256) schedule(static)
    for (long long bits = 0; bits < static_cast<long long>(count); ++bits)
        out[bits] = ideal_from_top_subset(base, N, static_cast<unsigned long>(bits));
    // distinct top subsets already give distinct truncations; keep the
    // deterministic bitmask order
    return out;
}

}  // namespace

std::vector<IdealDiagram> enumerate_coherent_ideals(const BratteliDiagram& base, std::size_t N) {
    return enumerate_impl<true>(base, N);
}
std::vector<IdealDiagram> enumerate_coherent_ideals_serial(const BratteliDiagram& base,
                                                           std::size_t N) {
    return enumerate_impl<false>(base, N);
}

Rat IdealDistance::to_rational() const {
    if (kind == Kind::Dyadic) return value->to_rational();
    return Rat(0);
}

IdealDistance ideal_metric(const IdealDiagram& a, const IdealDiagram& b, std::size_t depth) {
    if (a.base != b.base) throw std::invalid_argument("ideal_metric: mismatched base diagrams");
    std::size_t n = 0;
    for (; n <= depth; ++n) {
        if (n >= a.levels.size() || n >= b.levels.size()) break;
        if (a.levels[n] != b.levels[n])
            return {IdealDistance::Kind::Dyadic, Dyadic{static_cast<unsigned long>(n)}, n + 1};
    }
    return {IdealDistance::Kind::AgreeToDepth, std::nullopt, n};
}

Rat quotient_norm_at_level(const std::vector<Rat>& block_norms, const IdealDiagram& ideal,
                           std::size_t n) {
    if (!ideal.base) throw std::invalid_argument("quotient_norm: missing base diagram");
    if (n >= ideal.levels.size())
        throw std::out_of_range("quotient_norm: level beyond the ideal truncation");
    if (block_norms.size() != ideal.base->level_size(n))
        throw std::invalid_argument("quotient_norm: one norm per vertex required");
    Rat best(0);
    for (std::size_t k = 0; k < block_norms.size(); ++k) {
        if (block_norms[k] < 0) throw std::domain_error("quotient_norm: negative block norm");
        if (!ideal.level_contains(n, k)) best = std::max(best, block_norms[k]);
    }
    return best;
}

FusingReport detect_fusing(const std::vector<IdealDiagram>& ideals, const IdealDiagram& limit,
                           std::size_t depth) {
    if (ideals.empty()) throw std::invalid_argument("detect_fusing: empty ideal sequence");
    // first level where ideal k disagrees with the limit (depth+1 = agreement
    // through every examined level)
    std::vector<std::size_t> first_diff(ideals.size(), depth + 1);
    for (std::size_t k = 0; k < ideals.size(); ++k) {
        if (ideals[k].base != limit.base)
            throw std::invalid_argument("detect_fusing: mismatched base diagrams");
        for (std::size_t n = 0; n <= depth; ++n) {
            if (n >= ideals[k].levels.size() || n >= limit.levels.size()) break;
            if (ideals[k].levels[n] != limit.levels[n]) {
                first_diff[k] = n;
                break;
            }
        }
    }
    FusingReport rep;
    for (std::size_t N = 0; N <= depth; ++N) {
        std::size_t c = 0;
        for (std::size_t k = 0; k < ideals.size(); ++k)
            if (first_diff[k] <= N) c = k + 1;
        if (c >= ideals.size()) {
            rep.ok = false;
            rep.failed_level = N;
            return rep;
        }
        rep.c.push_back(c);
    }
    return rep;
}

BratteliDiagram quotient_diagram(const BratteliDiagram& d, const IdealDiagram& ideal) {
    if (ideal.base != &d) throw std::invalid_argument("quotient_diagram: ideal has a different base");
    IdealValidity v = validate_ideal(ideal);
    if (!v.ok) throw std::invalid_argument("quotient_diagram: " + v.message);
    const std::size_t depth = ideal.levels.empty() ? d.depth() : ideal.levels.size() - 1;
    std::vector<std::vector<std::size_t>> kept(depth + 1);
    for (std::size_t n = 0; n <= depth; ++n) {
        for (std::size_t k = 0; k < d.level_size(n); ++k)
            if (!ideal.level_contains(n, k)) kept[n].push_back(k);
        if (kept[n].empty())
            throw std::invalid_argument("quotient_diagram: empty quotient at level " +
                                        std::to_string(n));
    }
    BratteliDiagram out;
    for (std::size_t n = 0; n <= depth; ++n) {
        std::vector<Int> labels;
        for (std::size_t k : kept[n]) labels.push_back(d.labels[n][k]);
        out.labels.push_back(std::move(labels));
    }
    for (std::size_t n = 0; n < depth; ++n) {
        MultiplicityMatrix m(kept[n + 1].size(), kept[n].size());
        for (std::size_t r = 0; r < m.rows; ++r)
            for (std::size_t c = 0; c < m.cols; ++c)
                m.at(r, c) = d.matrices[n].at(kept[n + 1][r], kept[n][c]);
        out.matrices.push_back(std::move(m));
    }
    validate_diagram(out);
    return out;
}

std::string ideal_to_json(const IdealDiagram& ideal) {
    nlohmann::json j;
    j["levels"] = nlohmann::json::array();
    for (const auto& level : ideal.levels) j["levels"].push_back(level);
    return j.dump();
}

std::vector<std::vector<std::size_t>> ideal_levels_from_json(const std::string& text) {
    nlohmann::json j = nlohmann::json::parse(text);
    std::vector<std::vector<std::size_t>> levels;
    for (const auto& lv : j.at("levels")) levels.push_back(lv.get<std::vector<std::size_t>>());
    return levels;
}

}  // namespace afq
