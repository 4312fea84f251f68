#include "afq/bratteli.hpp"

#include <nlohmann/json.hpp>

#include <limits>
#include <sstream>
#include <stdexcept>

namespace afq {

namespace {

constexpr int kMaxFareyDiagramDepth = 12;

std::string vertex_name(std::size_t n, std::size_t k) {
    return "(" + std::to_string(n) + "," + std::to_string(k) + ")";
}

std::vector<Int> apply_matrix(const MultiplicityMatrix& m, const std::vector<Int>& v) {
    if (m.cols != v.size()) throw std::invalid_argument("diagram: matrix/label shape mismatch");
    std::vector<Int> out(m.rows, Int(0));
    for (std::size_t r = 0; r < m.rows; ++r)
        for (std::size_t c = 0; c < m.cols; ++c)
            if (m.at(r, c) != 0) out[r] += Int(m.at(r, c)) * v[c];
    return out;
}

}  // namespace

void validate_diagram(const BratteliDiagram& d) {
    if (d.labels.empty()) throw std::invalid_argument("diagram: no levels");
    if (d.matrices.size() + 1 != d.labels.size())
        throw std::invalid_argument("diagram: need one matrix per consecutive level pair");
    for (std::size_t n = 0; n < d.labels.size(); ++n)
        if (d.labels[n].empty())
            throw std::invalid_argument("diagram: empty level " + std::to_string(n));
    // axiom violations are reported before any label complaint they may cause
    for (std::size_t n = 0; n < d.matrices.size(); ++n) {
        const MultiplicityMatrix& m = d.matrices[n];
        if (m.cols != d.level_size(n) || m.rows != d.level_size(n + 1))
            throw std::invalid_argument("diagram: matrix " + std::to_string(n) + " has wrong shape");
        for (const std::int64_t e : m.entries)
            if (e < 0) throw std::invalid_argument("diagram: negative multiplicity");
        std::size_t bad = 0;
        if (has_zero_column(m, &bad))
            throw std::invalid_argument("diagram: vertex " + vertex_name(n, bad) +
                                        " has no outgoing edge");
        if (has_zero_row(m, &bad))
            throw std::invalid_argument("diagram: vertex " + vertex_name(n + 1, bad) +
                                        " has no incoming edge");
    }
    for (std::size_t n = 0; n < d.labels.size(); ++n)
        for (std::size_t k = 0; k < d.labels[n].size(); ++k)
            if (d.labels[n][k] < 1)
                throw std::invalid_argument("diagram: label at " + vertex_name(n, k) +
                                            " must be >= 1");
}

BratteliDiagram diagram_from_matrices(std::vector<Int> label0,
                                      std::vector<MultiplicityMatrix> matrices) {
    BratteliDiagram d;
    d.labels.push_back(std::move(label0));
    for (const MultiplicityMatrix& m : matrices) d.labels.push_back(apply_matrix(m, d.labels.back()));
    d.matrices = std::move(matrices);
    validate_diagram(d);
    return d;
}

BratteliDiagram diagram_with_labels(std::vector<std::vector<Int>> labels,
                                    std::vector<MultiplicityMatrix> matrices,
                                    bool unital_tower) {
    BratteliDiagram d;
    d.labels = std::move(labels);
    d.matrices = std::move(matrices);
    validate_diagram(d);
    if (unital_tower) {
        for (std::size_t n = 0; n < d.matrices.size(); ++n)
            if (apply_matrix(d.matrices[n], d.labels[n]) != d.labels[n + 1])
                throw std::invalid_argument("diagram: labels at level " + std::to_string(n + 1) +
                                            " break the unital tower rule");
    }
    return d;
}

BratteliDiagram farey_diagram(int depth) {
    if (depth < 1) throw std::domain_error("farey_diagram: depth must be >= 1");
    if (depth > kMaxFareyDiagramDepth)
        throw std::domain_error(
            "farey_diagram: depth " + std::to_string(depth) + " exceeds the materialization guard (" +
            std::to_string(kMaxFareyDiagramDepth) + "); deep structure is available incrementally");
    BratteliDiagram d;
    d.labels.push_back({Int(1)});
    MultiplicityMatrix doubling(2, 1);
    doubling.at(0, 0) = 1;
    doubling.at(1, 0) = 1;
    d.matrices.push_back(doubling);
    FareyLevel lv = farey_level(1);
    d.labels.push_back(lv.q);
    for (int n = 1; n < depth; ++n) {
        d.matrices.push_back(farey_multiplicity_matrix(n));
        lv = farey_next_level(lv);
        d.labels.push_back(lv.q);
    }
    validate_diagram(d);
    return d;
}

BratteliDiagram effros_shen_diagram(const ContinuedFraction& cf, std::size_t depth) {
    if (depth < 1) throw std::domain_error("effros_shen_diagram: depth must be >= 1");
    if (!cf.has_term(depth))
        throw std::out_of_range("effros_shen_diagram: stream provides too few terms for depth " +
                                std::to_string(depth));
    std::vector<ConvergentPair> cs = convergents(cf, depth);
    BratteliDiagram d;
    d.labels.push_back({Int(1)});
    MultiplicityMatrix a0(2, 1);
    const Int& a1 = cf.term(1);
    if (a1 > std::numeric_limits<std::int64_t>::max())
        throw std::overflow_error("effros_shen_diagram: term too large for a multiplicity entry");
    a0.at(0, 0) = static_cast<std::int64_t>(a1.get_si());
    a0.at(1, 0) = 1;
    d.matrices.push_back(a0);
    for (std::size_t n = 1; n <= depth; ++n) {
        d.labels.push_back({cs[n].q, cs[n - 1].q});
        if (n < depth) {
            MultiplicityMatrix an(2, 2);
            const Int& a = cf.term(n + 1);
            if (a > std::numeric_limits<std::int64_t>::max())
                throw std::overflow_error("effros_shen_diagram: term too large for a multiplicity entry");
            an.at(0, 0) = static_cast<std::int64_t>(a.get_si());
            an.at(0, 1) = 1;
            an.at(1, 0) = 1;
            d.matrices.push_back(an);
        }
    }
    validate_diagram(d);
    return d;
}

BratteliDiagram telescope(const BratteliDiagram& d, const std::vector<std::size_t>& levels) {
    if (levels.empty()) throw std::invalid_argument("telescope: empty level list");
    for (std::size_t i = 0; i + 1 < levels.size(); ++i)
        if (levels[i] >= levels[i + 1])
            throw std::invalid_argument("telescope: levels must be strictly increasing");
    if (levels.back() > d.depth()) throw std::out_of_range("telescope: level beyond diagram depth");
    BratteliDiagram out;
    for (std::size_t lv : levels) out.labels.push_back(d.labels[lv]);
    for (std::size_t i = 0; i + 1 < levels.size(); ++i) {
        MultiplicityMatrix prod = d.matrices[levels[i]];
        for (std::size_t n = levels[i] + 1; n < levels[i + 1]; ++n)
            prod = matmul(d.matrices[n], prod);
        out.matrices.push_back(std::move(prod));
    }
    if (out.matrices.empty()) return out;  // single level: nothing to validate
    validate_diagram(out);
    return out;
}

Int dimension_at_level(const BratteliDiagram& d, std::size_t n) {
    Int acc = 0;
    for (const Int& l : d.labels.at(n)) acc += l * l;
    return acc;
}

std::string diagram_to_json(const BratteliDiagram& d) {
    nlohmann::json j;
    j["levels"] = nlohmann::json::array();
    for (const auto& level : d.labels) {
        nlohmann::json lv;
        lv["labels"] = nlohmann::json::array();
        for (const Int& l : level) lv["labels"].push_back(l.get_str());
        j["levels"].push_back(std::move(lv));
    }
    j["matrices"] = nlohmann::json::array();
    for (const MultiplicityMatrix& m : d.matrices) {
        nlohmann::json rows = nlohmann::json::array();
        for (std::size_t r = 0; r < m.rows; ++r) {
            nlohmann::json row = nlohmann::json::array();
            for (std::size_t c = 0; c < m.cols; ++c) row.push_back(m.at(r, c));
            rows.push_back(std::move(row));
        }
        j["matrices"].push_back(std::move(rows));
    }
    return j.dump(2);
}

std::string diagram_to_dot(const BratteliDiagram& d) {
    std::ostringstream out;
    out << "digraph bratteli {\n  rankdir=TB;\n  node [shape=circle];\n";
    for (std::size_t n = 0; n < d.labels.size(); ++n) {
        out << "  { rank=same;";
        for (std::size_t k = 0; k < d.labels[n].size(); ++k)
            out << " \"" << n << "_" << k << "\"";
        out << " }\n";
        for (std::size_t k = 0; k < d.labels[n].size(); ++k)
            out << "  \"" << n << "_" << k << "\" [label=\"" << d.labels[n][k].get_str() << "\"];\n";
    }
    for (std::size_t n = 0; n < d.matrices.size(); ++n) {
        const MultiplicityMatrix& m = d.matrices[n];
        for (std::size_t r = 0; r < m.rows; ++r)
            for (std::size_t c = 0; c < m.cols; ++c)
                if (m.at(r, c) != 0)
                    out << "  \"" << n << "_" << c << "\" -> \"" << n + 1 << "_" << r
                        << "\" [label=\"" << m.at(r, c) << "\"];\n";
    }
    out << "}\n";
    return out.str();
}

BratteliDiagram diagram_from_json(const std::string& text) {
    nlohmann::json j = nlohmann::json::parse(text);
    BratteliDiagram d;
    for (const auto& lv : j.at("levels")) {
        std::vector<Int> labels;
        for (const auto& l : lv.at("labels"))
            labels.emplace_back(l.is_string() ? Int(l.get<std::string>().c_str())
                                              : Int(l.get<long>()));
        d.labels.push_back(std::move(labels));
    }
    for (const auto& rows : j.at("matrices")) {
        std::size_t r = rows.size();
        std::size_t c = rows.empty() ? 0 : rows[0].size();
        MultiplicityMatrix m(r, c);
        for (std::size_t i = 0; i < r; ++i)
            for (std::size_t k = 0; k < c; ++k) m.at(i, k) = rows[i][k].get<std::int64_t>();
        d.matrices.push_back(std::move(m));
    }
    validate_diagram(d);
    return d;
}

}  // namespace afq
