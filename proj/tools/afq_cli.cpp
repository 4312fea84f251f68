#include "afq/acceptance.hpp"
#include "afq/bratteli.hpp"
#include "afq/cf.hpp"
#include "afq/farey.hpp"
#include "afq/ideals.hpp"
#include "afq/qmetric.hpp"
#include "afq/theta.hpp"

#include <CLI11.hpp>
#include <nlohmann/json.hpp>

#include <fstream>
#include <iostream>
#include <sstream>

namespace {

using afq::Int;
using afq::Rat;
using json = nlohmann::json;

std::pair<Int, Int> parse_fraction(const std::string& text) {
    auto slash = text.find('/');
    if (slash == std::string::npos) return {Int(text.c_str()), Int(1)};
    return {Int(text.substr(0, slash).c_str()), Int(text.substr(slash + 1).c_str())};
}

std::string read_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open " + path);
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

std::string format_distance(const afq::IdealDistance& d) {
    if (d.kind == afq::IdealDistance::Kind::AgreeToDepth)
        return "agree-to-depth(" + std::to_string(d.compared ? d.compared - 1 : 0) + ")";
    std::ostringstream out;
    out << d.value->to_string() << " = " << d.value->to_double();
    return out.str();
}

json distance_json(const afq::IdealDistance& d) {
    json j;
    if (d.kind == afq::IdealDistance::Kind::AgreeToDepth) {
        j["kind"] = "agree-to-depth";
        j["levels_compared"] = d.compared;
    } else {
        j["kind"] = "dyadic";
        j["exponent"] = d.value->exponent;
        j["value"] = afq::to_string(d.value->to_rational());
        j["decimal"] = d.value->to_double();
    }
    return j;
}

std::string affine_to_string(const afq::AffineCoefficient& c) {
    return afq::to_string(c.theta_coeff) + "*theta + " + afq::to_string(c.constant);
}

// ---- subcommand payloads ---------------------------------------------------

int run_cf(const std::string& rational, const std::string& terms, const std::string& periodic,
           std::size_t depth, bool as_json) {
    afq::ContinuedFraction cf = [&] {
        if (!rational.empty()) {
            auto [num, den] = parse_fraction(rational);
            return afq::cf_from_rational(num, den);
        }
        if (!terms.empty()) return afq::parse_cf(terms);
        if (!periodic.empty()) return afq::parse_cf(periodic);
        throw std::domain_error("cf: provide --rational, --terms or --periodic");
    }();
    std::size_t usable = depth;
    if (cf.is_finite() && cf.head_length() - 1 < usable) usable = cf.head_length() - 1;
    auto cs = afq::convergents(cf, usable);
    if (as_json) {
        json j;
        j["terms"] = json::array();
        for (std::size_t k = 0; k <= usable; ++k) j["terms"].push_back(cf.term(k).get_str());
        j["convergents"] = json::array();
        for (const auto& c : cs)
            j["convergents"].push_back({{"n", c.index}, {"p", c.p.get_str()}, {"q", c.q.get_str()}});
        std::cout << j.dump(2) << "\n";
    } else {
        std::cout << "terms: " << cf.to_string() << "\n";
        for (const auto& c : cs)
            std::cout << c.index << ": " << c.p.get_str() << "/" << c.q.get_str() << "\n";
    }
    return 0;
}

int run_farey_level(int n, const std::string& format) {
    afq::FareyLevel lv = afq::farey_level(n);
    if (format == "csv") {
        for (std::size_t k = 0; k < lv.size(); ++k) {
            Rat r = lv.r(k);
            std::cout << k << "," << lv.q[k].get_str() << "," << lv.p[k].get_str() << ","
                      << r.get_num().get_str() << "," << r.get_den().get_str() << "\n";
        }
    } else {
        json j;
        j["n"] = lv.n;
        j["rows"] = json::array();
        for (std::size_t k = 0; k < lv.size(); ++k)
            j["rows"].push_back({{"k", k},
                                 {"q", lv.q[k].get_str()},
                                 {"p", lv.p[k].get_str()},
                                 {"r", afq::to_string(lv.r(k))}});
        std::cout << j.dump(2) << "\n";
    }
    return 0;
}

void emit_diagram(const afq::BratteliDiagram& d, bool as_dot) {
    if (as_dot)
        std::cout << afq::diagram_to_dot(d);
    else
        std::cout << afq::diagram_to_json(d) << "\n";
}

int run_theta(const afq::ContinuedFraction& cf, std::size_t depth, bool blocks, bool diagram,
              bool beta, bool coeffs, bool as_json) {
    if (blocks) {
        if (as_json) {
            json j;
            j["blocks"] = json::array();
            for (std::size_t n = 0; n <= depth; ++n) j["blocks"].push_back(afq::ideal_blocks(cf, n));
            std::cout << j.dump() << "\n";
        } else {
            for (std::size_t n = 0; n <= depth; ++n) {
                std::cout << n << ":";
                for (std::size_t k : afq::ideal_blocks(cf, n)) std::cout << " " << k;
                std::cout << "\n";
            }
        }
        return 0;
    }
    if (diagram) {
        auto base = afq::farey_diagram(static_cast<int>(depth));
        auto ideal = afq::theta_ideal_diagram(cf, base);
        std::cout << afq::ideal_to_json(ideal) << "\n";
        return 0;
    }
    if (beta) {
        afq::ThetaTower tower(cf);
        json arr = json::array();
        for (std::size_t n = 0; n <= depth; ++n) {
            Int dim = tower.quotient_dimension(n);
            Rat b = tower.beta(n);
            if (as_json)
                arr.push_back({{"n", n}, {"dimension", dim.get_str()}, {"beta", afq::to_string(b)}});
            else
                std::cout << n << ": dim " << dim.get_str() << ", beta " << afq::to_string(b)
                          << "\n";
        }
        if (as_json) std::cout << arr.dump(2) << "\n";
        return 0;
    }
    if (coeffs) {
        afq::ThetaTower tower(cf);
        auto cs = afq::convergents(cf, std::min<std::size_t>(depth + 8, 40));
        Rat at = afq::make_rat(cs.back().p, cs.back().q);
        json arr = json::array();
        for (std::size_t n = 1; n <= depth; ++n) {
            auto c = tower.trace_coefficient(n);
            if (as_json)
                arr.push_back({{"n", n},
                               {"theta_coeff", afq::to_string(c.theta_coeff)},
                               {"constant", afq::to_string(c.constant)},
                               {"decimal_at_convergent", c.evaluate(at).get_d()}});
            else
                std::cout << n << ": " << affine_to_string(c) << " ~ " << c.evaluate(at).get_d()
                          << " (theta ~ " << cs.back().p.get_str() << "/" << cs.back().q.get_str()
                          << ")\n";
        }
        if (as_json) std::cout << arr.dump(2) << "\n";
        return 0;
    }
    // default: the j sequence
    auto js = afq::j_sequence(cf, depth);
    if (as_json) {
        json j = json::array();
        for (const auto& v : js) j.push_back(v.get_str());
        std::cout << j.dump() << "\n";
    } else {
        for (std::size_t n = 0; n < js.size(); ++n)
            std::cout << "j_" << n + 1 << " = " << js[n].get_str() << "\n";
    }
    return 0;
}

afq::ChainSpace chain_from_json(const json& j) {
    std::vector<std::vector<int>> blocks;
    for (const auto& lv : j.at("blocks")) blocks.push_back(lv.get<std::vector<int>>());
    std::vector<afq::MultiplicityMatrix> ms;
    for (const auto& rows : j.at("matrices")) {
        afq::MultiplicityMatrix m(rows.size(), rows.empty() ? 0 : rows[0].size());
        for (std::size_t r = 0; r < m.rows; ++r)
            for (std::size_t c = 0; c < m.cols; ++c) m.at(r, c) = rows[r][c].get<std::int64_t>();
        ms.push_back(std::move(m));
    }
    std::vector<double> trace = j.at("trace").get<std::vector<double>>();
    std::vector<double> beta;
    for (const auto& b : j.at("beta")) {
        if (b.is_string()) {
            auto [num, den] = parse_fraction(b.get<std::string>());
            beta.push_back(afq::make_rat(num, den).get_d());
        } else {
            beta.push_back(b.get<double>());
        }
    }
    return afq::ChainSpace(std::move(blocks), std::move(ms), std::move(trace), std::move(beta));
}

afq::AlgebraState state_from_json(const json& j) {
    afq::AlgebraState s;
    s.weights = j.at("weights").get<std::vector<double>>();
    for (const auto& rows : j.at("densities")) {
        afq::CMat m(rows.size(), rows.size());
        for (std::size_t r = 0; r < rows.size(); ++r)
            for (std::size_t c = 0; c < rows[r].size(); ++c) {
                const auto& e = rows[r][c];
                if (e.is_array())
                    m(r, c) = std::complex<double>(e[0].get<double>(), e[1].get<double>());
                else
                    m(r, c) = e.get<double>();
            }
        s.densities.push_back(std::move(m));
    }
    return s;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"exact Farey/Bratteli diagram toolkit with quantum-metric numerics"};
    app.require_subcommand(1);

    // cf
    std::string cf_rational, cf_terms, cf_periodic;
    std::size_t cf_depth = 10;
    bool cf_json = false;
    auto* cf_cmd = app.add_subcommand("cf", "continued fractions and convergents");
    cf_cmd->add_option("--rational", cf_rational, "value as p/q in [0,1)");
    cf_cmd->add_option("--terms", cf_terms, "term stream \"0;a1,a2,...\"");
    cf_cmd->add_option("--periodic", cf_periodic, "periodic stream \"0;a1,(p1,p2)\"");
    cf_cmd->add_option("--depth", cf_depth, "convergent depth");
    cf_cmd->add_flag("--json", cf_json, "machine-readable output");

    // farey level N
    auto* farey_cmd = app.add_subcommand("farey", "Farey tessellation rows");
    int farey_n = 1;
    std::string farey_format = "json";
    bool farey_json = false;
    auto* level_cmd = farey_cmd->add_subcommand("level", "print one row");
    level_cmd->add_option("n", farey_n, "level (>= 1)")->required();
    level_cmd->add_option("--format", farey_format, "json|csv")
        ->check(CLI::IsMember({"json", "csv"}));
    level_cmd->add_flag("--json", farey_json, "force json output");
    farey_cmd->require_subcommand(1);

    // diagram {farey N | effros-shen CF N | quotient --theta CF N}
    auto* diagram_cmd = app.add_subcommand("diagram", "Bratteli diagrams");
    diagram_cmd->require_subcommand(1);
    int dg_n = 1;
    bool dg_dot = false, dg_json = false;
    auto* dg_farey = diagram_cmd->add_subcommand("farey", "Farey diagram truncation");
    dg_farey->add_option("n", dg_n, "depth")->required();
    dg_farey->add_flag("--dot", dg_dot, "DOT output");
    dg_farey->add_flag("--json", dg_json, "JSON output (default)");
    std::string dg_cf;
    int es_n = 1;
    bool es_dot = false, es_json = false;
    auto* dg_es = diagram_cmd->add_subcommand("effros-shen", "Effros-Shen diagram");
    dg_es->add_option("cf", dg_cf, "term stream")->required();
    dg_es->add_option("n", es_n, "depth")->required();
    dg_es->add_flag("--dot", es_dot, "DOT output");
    dg_es->add_flag("--json", es_json, "JSON output (default)");
    std::string q_cf;
    int q_n = 1;
    bool q_dot = false, q_json = false;
    auto* dg_q = diagram_cmd->add_subcommand("quotient", "quotient of the Farey diagram");
    dg_q->add_option("--theta", q_cf, "term stream of theta")->required();
    dg_q->add_option("n", q_n, "depth")->required();
    dg_q->add_flag("--dot", q_dot, "DOT output");
    dg_q->add_flag("--json", q_json, "JSON output (default)");

    // ideal {metric | enumerate}
    auto* ideal_cmd = app.add_subcommand("ideal", "ideal diagrams and their metric");
    ideal_cmd->require_subcommand(1);
    std::string im_t1, im_t2;
    std::size_t im_depth = 32;
    bool im_json = false;
    auto* im = ideal_cmd->add_subcommand("metric", "dyadic distance between theta-ideals");
    im->add_option("--theta1", im_t1, "first stream")->required();
    im->add_option("--theta2", im_t2, "second stream")->required();
    im->add_option("--depth", im_depth, "levels compared");
    im->add_flag("--json", im_json, "machine-readable output");
    std::string en_file;
    std::size_t en_depth = 2;
    bool en_json = false;
    auto* en = ideal_cmd->add_subcommand("enumerate", "coherent ideal truncations of a diagram");
    en->add_option("--diagram", en_file, "diagram JSON file")->required();
    en->add_option("--depth", en_depth, "enumeration level");
    en->add_flag("--json", en_json, "machine-readable output (default)");

    // theta ideal
    auto* theta_cmd = app.add_subcommand("theta", "theta-indexed primitive ideals");
    theta_cmd->require_subcommand(1);
    std::string th_cf;
    std::size_t th_depth = 8;
    bool th_blocks = false, th_diag = false, th_beta = false, th_coeffs = false, th_json = false;
    auto* th = theta_cmd->add_subcommand("ideal", "ideal data for one theta");
    th->add_option("--cf", th_cf, "term stream")->required();
    th->add_option("--depth", th_depth, "levels");
    th->add_flag("--blocks", th_blocks, "ideal vertex sets per level");
    th->add_flag("--diagram", th_diag, "ideal diagram as JSON");
    th->add_flag("--beta", th_beta, "quotient dimensions and beta");
    th->add_flag("--trace-coeffs", th_coeffs, "affine trace coefficients");
    th->add_flag("--json", th_json, "machine-readable output");

    // qmetric mk
    auto* qm_cmd = app.add_subcommand("qmetric", "quantum-metric numerics");
    qm_cmd->require_subcommand(1);
    std::string qm_chain, qm_phi, qm_psi;
    int qm_iters = 6000;
    double qm_tol = 1e-6;
    bool qm_json = false;
    auto* mk = qm_cmd->add_subcommand("mk", "Monge-Kantorovich distance between states");
    mk->add_option("--chain", qm_chain, "chain JSON file")->required();
    mk->add_option("--phi", qm_phi, "state JSON file")->required();
    mk->add_option("--psi", qm_psi, "state JSON file")->required();
    mk->add_option("--iters", qm_iters, "iteration budget");
    mk->add_option("--tol", qm_tol, "improvement tolerance");
    mk->add_flag("--json", qm_json, "machine-readable output");

    bool verify_json = false;
    auto* verify_cmd = app.add_subcommand("verify", "run the full verification suite");
    verify_cmd->add_flag("--json", verify_json, "machine-readable output");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        if (e.get_exit_code() == 0) return app.exit(e);
        std::cerr << e.what() << "\n";
        return 2;
    }

    try {
        if (*cf_cmd) return run_cf(cf_rational, cf_terms, cf_periodic, cf_depth, cf_json);
        if (*level_cmd) return run_farey_level(farey_n, farey_json ? "json" : farey_format);
        if (*dg_farey) {
            emit_diagram(afq::farey_diagram(dg_n), dg_dot);
            return 0;
        }
        if (*dg_es) {
            emit_diagram(afq::effros_shen_diagram(afq::parse_cf(dg_cf), es_n), es_dot);
            return 0;
        }
        if (*dg_q) {
            auto base = afq::farey_diagram(q_n);
            auto ideal = afq::theta_ideal_diagram(afq::parse_cf(q_cf), base);
            emit_diagram(afq::quotient_diagram(base, ideal), q_dot);
            return 0;
        }
        if (*im) {
            auto d = afq::theta_ideal_metric(afq::parse_cf(im_t1), afq::parse_cf(im_t2), im_depth);
            if (im_json)
                std::cout << distance_json(d).dump(2) << "\n";
            else
                std::cout << format_distance(d) << "\n";
            return 0;
        }
        if (*en) {
            auto base = afq::diagram_from_json(read_file(en_file));
            auto ideals = afq::enumerate_coherent_ideals(base, en_depth);
            json arr = json::array();
            for (const auto& ideal : ideals) arr.push_back(json::parse(afq::ideal_to_json(ideal)));
            std::cout << arr.dump(2) << "\n";
            return 0;
        }
        if (*th)
            return run_theta(afq::parse_cf(th_cf), th_depth, th_blocks, th_diag, th_beta,
                             th_coeffs, th_json);
        if (*mk) {
            auto chain = chain_from_json(json::parse(read_file(qm_chain)));
            auto phi = state_from_json(json::parse(read_file(qm_phi)));
            auto psi = state_from_json(json::parse(read_file(qm_psi)));
            afq::SolverConfig cfg;
            cfg.max_iters = qm_iters;
            cfg.tol = qm_tol;
            auto res = afq::mk_distance(phi, psi, chain, cfg);
            if (qm_json) {
                json j{{"value", res.value}, {"stalled", res.stalled}, {"iterations", res.iterations}};
                std::cout << j.dump(2) << "\n";
            } else {
                std::cout << "distance >= " << res.value << "\n";
                if (!res.stalled)
                    std::cout << "note: iteration budget reached while still improving\n";
            }
            return 0;
        }
        if (*verify_cmd) {
            auto results = afq::run_acceptance();
            if (verify_json) {
                json arr = json::array();
                for (const auto& r : results)
                    arr.push_back({{"id", r.id},
                                   {"name", r.name},
                                   {"pass", r.pass},
                                   {"detail", r.detail},
                                   {"seconds", r.seconds}});
                std::cout << arr.dump(2) << "\n";
            } else {
                afq::print_results(results, std::cout);
            }
            return afq::all_pass(results) ? 0 : 1;
        }
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
    return 2;
}
