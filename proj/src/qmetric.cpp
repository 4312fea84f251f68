#include "afq/qmetric.hpp"

#include <Eigen/Eigenvalues>
#include <Eigen/SVD>

#include <cmath>
#include <stdexcept>

namespace afq {

namespace {

void check_same_shape(const BlockElement& a, const BlockElement& b, const char* who) {
    if (a.blocks.size() != b.blocks.size()) throw std::invalid_argument(std::string(who) + ": block count mismatch");
    for (std::size_t i = 0; i < a.blocks.size(); ++i)
        if (a.blocks[i].rows() != b.blocks[i].rows())
            throw std::invalid_argument(std::string(who) + ": block size mismatch");
}

}  // namespace

BlockElement zero_element(const std::vector<int>& block_sizes) {
    BlockElement a;
    for (int d : block_sizes) a.blocks.push_back(CMat::Zero(d, d));
    return a;
}

BlockElement identity_element(const std::vector<int>& block_sizes) {
    BlockElement a;
    for (int d : block_sizes) a.blocks.push_back(CMat::Identity(d, d));
    return a;
}

bool is_hermitian(const BlockElement& a, double tol) {
    for (const CMat& m : a.blocks)
        if ((m - m.adjoint()).norm() > tol) return false;
    return true;
}

BlockElement hermitian_part(const BlockElement& a) {
    BlockElement out;
    for (const CMat& m : a.blocks) out.blocks.push_back(0.5 * (m + m.adjoint()));
    return out;
}

double operator_norm(const BlockElement& a) {
    double best = 0.0;
    for (const CMat& m : a.blocks) {
        if (m.size() == 0) continue;
        if ((m - m.adjoint()).norm() <= 1e-12 * (1.0 + m.norm())) {
            Eigen::SelfAdjointEigenSolver<CMat> es(m, Eigen::EigenvaluesOnly);
            best = std::max(best, es.eigenvalues().cwiseAbs().maxCoeff());
        } else {
            Eigen::JacobiSVD<CMat> svd(m);
            best = std::max(best, svd.singularValues()(0));
        }
    }
    return best;
}

BlockElement add(const BlockElement& a, const BlockElement& b) {
    check_same_shape(a, b, "add");
    BlockElement out;
    for (std::size_t i = 0; i < a.blocks.size(); ++i) out.blocks.push_back(a.blocks[i] + b.blocks[i]);
    return out;
}

BlockElement sub(const BlockElement& a, const BlockElement& b) {
    check_same_shape(a, b, "sub");
    BlockElement out;
    for (std::size_t i = 0; i < a.blocks.size(); ++i) out.blocks.push_back(a.blocks[i] - b.blocks[i]);
    return out;
}

BlockElement scale(const BlockElement& a, double s) {
    BlockElement out;
    for (const CMat& m : a.blocks) out.blocks.push_back(s * m);
    return out;
}

BlockElement multiply(const BlockElement& a, const BlockElement& b) {
    check_same_shape(a, b, "multiply");
    BlockElement out;
    for (std::size_t i = 0; i < a.blocks.size(); ++i) out.blocks.push_back(a.blocks[i] * b.blocks[i]);
    return out;
}

BlockElement jordan_product(const BlockElement& a, const BlockElement& b) {
    check_same_shape(a, b, "jordan_product");
    BlockElement out;
    for (std::size_t i = 0; i < a.blocks.size(); ++i)
        out.blocks.push_back(0.5 * (a.blocks[i] * b.blocks[i] + b.blocks[i] * a.blocks[i]));
    return out;
}

BlockElement lie_product(const BlockElement& a, const BlockElement& b) {
    check_same_shape(a, b, "lie_product");
    const std::complex<double> half_over_i(0.0, -0.5);  // 1/(2i)
    BlockElement out;
    for (std::size_t i = 0; i < a.blocks.size(); ++i)
        out.blocks.push_back(half_over_i * (a.blocks[i] * b.blocks[i] - b.blocks[i] * a.blocks[i]));
    return out;
}

double apply_state(const AlgebraState& s, const BlockElement& a) {
    if (s.weights.size() != a.blocks.size())
        throw std::invalid_argument("apply_state: block count mismatch");
    double acc = 0.0;
    for (std::size_t i = 0; i < a.blocks.size(); ++i)
        acc += s.weights[i] * (s.densities[i] * a.blocks[i]).trace().real();
    return acc;
}

ChainSpace::ChainSpace(std::vector<std::vector<int>> level_blocks,
                       std::vector<MultiplicityMatrix> steps, std::vector<double> trace_weights,
                       std::vector<double> beta)
    : blocks_(std::move(level_blocks)),
      steps_(std::move(steps)),
      trace_(std::move(trace_weights)),
      beta_(std::move(beta)) {
    if (blocks_.empty()) throw std::invalid_argument("chain: no levels");
    if (blocks_[0] != std::vector<int>{1})
        throw std::invalid_argument("chain: level 0 must be the scalar algebra");
    if (steps_.size() + 1 != blocks_.size())
        throw std::invalid_argument("chain: need one step matrix per consecutive level pair");
    for (std::size_t n = 0; n < steps_.size(); ++n) {
        const MultiplicityMatrix& m = steps_[n];
        if (m.cols != blocks_[n].size() || m.rows != blocks_[n + 1].size())
            throw std::invalid_argument("chain: step " + std::to_string(n) + " has wrong shape");
        for (std::size_t h = 0; h < m.rows; ++h) {
            std::int64_t d = 0;
            for (std::size_t k = 0; k < m.cols; ++k) d += m.at(h, k) * blocks_[n][k];
            if (d != blocks_[n + 1][h])
                throw std::invalid_argument("chain: step " + std::to_string(n) +
                                            " is not unital at target block " + std::to_string(h));
        }
    }
    if (trace_.size() != blocks_.back().size())
        throw std::invalid_argument("chain: one trace weight per top block required");
    double sum = 0.0;
    for (double t : trace_) {
        if (t <= 0.0) throw std::invalid_argument("chain: tracial state must be faithful (all weights > 0)");
        sum += t;
    }
    if (std::abs(sum - 1.0) > 1e-9) throw std::invalid_argument("chain: trace weights must sum to 1");
    if (beta_.size() != blocks_.size())
        throw std::invalid_argument("chain: beta needs one entry per level");
    for (double b : beta_)
        if (b <= 0.0) throw std::invalid_argument("chain: beta must be positive");

    // Flattened top coordinates and the diagonal weight of <x,y> = mu(y* x).
    std::size_t total = 0;
    for (int d : blocks_.back()) total += std::size_t(d) * d;
    weight_.resize(total);
    std::size_t off = 0;
    for (std::size_t i = 0; i < blocks_.back().size(); ++i) {
        const int d = blocks_.back()[i];
        weight_.segment(off, std::size_t(d) * d).setConstant(trace_[i] / d);
        off += std::size_t(d) * d;
    }

    // Weighted projector onto the embedded image of each level.
    for (std::size_t n = 0; n < blocks_.size(); ++n) {
        std::size_t image_dim = 0;
        for (int d : blocks_[n]) image_dim += std::size_t(d) * d;
        Projector proj;
        proj.basis.resize(total, image_dim);
        std::size_t col = 0;
        for (std::size_t k = 0; k < blocks_[n].size(); ++k) {
            const int d = blocks_[n][k];
            for (int c = 0; c < d; ++c)
                for (int r = 0; r < d; ++r) {
                    BlockElement unit = zero_element(blocks_[n]);
                    unit.blocks[k](r, c) = 1.0;
                    proj.basis.col(col++) = flatten(embed(unit, n, top()));
                }
        }
        Eigen::MatrixXcd gram =
            proj.basis.adjoint() * weight_.asDiagonal() * proj.basis;
        proj.gram.compute(gram);
        if (proj.gram.info() != Eigen::Success)
            throw std::runtime_error("chain: projector Gram factorization failed");
        projectors_.push_back(std::move(proj));
    }
}

Eigen::VectorXcd ChainSpace::flatten(const BlockElement& a) const {
    Eigen::VectorXcd v(weight_.size());
    std::size_t off = 0;
    for (std::size_t i = 0; i < a.blocks.size(); ++i) {
        const auto& m = a.blocks[i];
        v.segment(off, m.size()) = Eigen::Map<const Eigen::VectorXcd>(m.data(), m.size());
        off += m.size();
    }
    return v;
}

BlockElement ChainSpace::unflatten(const Eigen::VectorXcd& v) const {
    BlockElement a = zero_element(blocks_.back());
    std::size_t off = 0;
    for (CMat& m : a.blocks) {
        Eigen::Map<Eigen::VectorXcd>(m.data(), m.size()) = v.segment(off, m.size());
        off += m.size();
    }
    return a;
}

double ChainSpace::mu(const BlockElement& a) const {
    if (a.blocks.size() != blocks_.back().size())
        throw std::invalid_argument("mu: element does not live at the top level");
    double acc = 0.0;
    for (std::size_t i = 0; i < a.blocks.size(); ++i)
        acc += trace_[i] * a.blocks[i].trace().real() / blocks_.back()[i];
    return acc;
}

BlockElement ChainSpace::embed(const BlockElement& x, std::size_t from, std::size_t to) const {
    if (from > to || to > top()) throw std::invalid_argument("embed: bad level pair");
    if (x.blocks.size() != blocks_[from].size())
        throw std::invalid_argument("embed: element does not live at the source level");
    BlockElement cur = x;
    for (std::size_t n = from; n < to; ++n) {
        const MultiplicityMatrix& m = steps_[n];
        BlockElement nxt = zero_element(blocks_[n + 1]);
        for (std::size_t h = 0; h < m.rows; ++h) {
            int offset = 0;
            for (std::size_t k = 0; k < m.cols; ++k) {
                const int d = blocks_[n][k];
                for (std::int64_t copy = 0; copy < m.at(h, k); ++copy) {
                    nxt.blocks[h].block(offset, offset, d, d) = cur.blocks[k];
                    offset += d;
                }
            }
        }
        cur = std::move(nxt);
    }
    return cur;
}

BlockElement ChainSpace::conditional_expectation(const BlockElement& a, std::size_t n) const {
    if (n > top()) throw std::invalid_argument("conditional_expectation: level beyond chain");
    const Projector& proj = projectors_[n];
    Eigen::VectorXcd af = flatten(a);
    Eigen::VectorXcd rhs = proj.basis.adjoint() * (weight_.asDiagonal() * af);
    Eigen::VectorXcd z = proj.gram.solve(rhs);
    return unflatten(proj.basis * z);
}

double ChainSpace::lip_norm(const BlockElement& a) const {
    double best = 0.0;
    for (std::size_t n = 0; n < top(); ++n) {
        BlockElement diff = sub(a, conditional_expectation(a, n));
        best = std::max(best, operator_norm(diff) / beta_[n]);
    }
    return best;
}

AlgebraState ChainSpace::compose_with_expectation(const AlgebraState& phi, std::size_t n) const {
    validate_state(phi, blocks_.back());
    // Representer of phi in flattened coordinates, pushed through the
    // Hilbert-Schmidt adjoint of E_n, which is W E_n W^{-1}.
    BlockElement f = zero_element(blocks_.back());
    for (std::size_t i = 0; i < f.blocks.size(); ++i) f.blocks[i] = phi.weights[i] * phi.densities[i];
    Eigen::VectorXcd ff = flatten(f);
    Eigen::VectorXcd scaled = ff.cwiseQuotient(weight_.cast<std::complex<double>>());
    const Projector& proj = projectors_[n];
    Eigen::VectorXcd rhs = proj.basis.adjoint() * (weight_.asDiagonal() * scaled);
    Eigen::VectorXcd e = proj.basis * proj.gram.solve(rhs);
    Eigen::VectorXcd gf = e.cwiseProduct(weight_.cast<std::complex<double>>());
    BlockElement g = unflatten(gf);
    AlgebraState out;
    for (std::size_t i = 0; i < g.blocks.size(); ++i) {
        CMat gi = 0.5 * (g.blocks[i] + g.blocks[i].adjoint());
        double w = gi.trace().real();
        const int d = blocks_.back()[i];
        if (w > 1e-14) {
            out.weights.push_back(w);
            out.densities.push_back(gi / w);
        } else {
            out.weights.push_back(0.0);
            out.densities.push_back(CMat::Identity(d, d) / d);
        }
    }
    // renormalize away roundoff in the weights
    double sum = 0.0;
    for (double w : out.weights) sum += w;
    if (std::abs(sum - 1.0) > 1e-6)
        throw std::runtime_error("compose_with_expectation: pushed state is not normalized");
    for (double& w : out.weights) w /= sum;
    return out;
}

void validate_state(const AlgebraState& s, const std::vector<int>& block_sizes, double tol) {
    if (s.weights.size() != block_sizes.size() || s.densities.size() != block_sizes.size())
        throw std::domain_error("state: one weight and density per block required");
    double sum = 0.0;
    for (std::size_t i = 0; i < block_sizes.size(); ++i) {
        if (s.weights[i] < -tol) throw std::domain_error("state: negative block weight");
        sum += s.weights[i];
        const CMat& rho = s.densities[i];
        if (rho.rows() != block_sizes[i] || rho.cols() != block_sizes[i])
            throw std::domain_error("state: density has wrong shape");
        if ((rho - rho.adjoint()).norm() > tol * (1.0 + rho.norm()))
            throw std::domain_error("state: density is not Hermitian");
        if (std::abs(rho.trace().real() - 1.0) > 1e-6)
            throw std::domain_error("state: density trace must be 1");
        Eigen::SelfAdjointEigenSolver<CMat> es(0.5 * (rho + rho.adjoint()), Eigen::EigenvaluesOnly);
        if (es.eigenvalues().minCoeff() < -1e-8)
            throw std::domain_error("state: density is not positive semidefinite");
    }
    if (std::abs(sum - 1.0) > 1e-6) throw std::domain_error("state: weights must sum to 1");
}

bool quasi_leibniz_holds(const std::function<double(const BlockElement&)>& lip,
                         const BlockElement& a, const BlockElement& b, double tol) {
    const double lhs =
        std::max(lip(jordan_product(a, b)), lip(lie_product(a, b)));
    const double rhs = 2.0 * (operator_norm(a) * lip(b) + operator_norm(b) * lip(a));
    return lhs <= rhs + tol;
}

bool quasi_leibniz_check(const BlockElement& a, const BlockElement& b, const ChainSpace& chain,
                         double tol) {
    return quasi_leibniz_holds([&chain](const BlockElement& x) { return chain.lip_norm(x); }, a, b,
                               tol);
}

namespace {

double hs_norm(const BlockElement& a) {
    double acc = 0.0;
    for (const CMat& m : a.blocks) acc += m.squaredNorm();
    return std::sqrt(acc);
}

double pairing(const BlockElement& f, const BlockElement& a) {
    double acc = 0.0;
    for (std::size_t i = 0; i < f.blocks.size(); ++i)
        acc += (f.blocks[i] * a.blocks[i]).trace().real();
    return acc;
}

BlockElement random_hermitian_like(const BlockElement& shape, std::mt19937_64& rng) {
    std::normal_distribution<double> g(0.0, 1.0);
    BlockElement h;
    for (const CMat& m : shape.blocks) {
        CMat x(m.rows(), m.cols());
        for (Eigen::Index r = 0; r < x.rows(); ++r)
            for (Eigen::Index c = 0; c < x.cols(); ++c) x(r, c) = std::complex<double>(g(rng), g(rng));
        h.blocks.push_back(0.5 * (x + x.adjoint()));
    }
    return h;
}

}  // namespace

namespace {

// Largest value of t |-> <g, a + t d> / L(a + t d) on [lo, hi].  The ratio is
// quasiconcave wherever the numerator is positive (linear over convex), so a
// golden-section scan over that region finds its maximum.
double ray_maximize(const std::function<double(double)>& ratio, double lo, double hi,
                    int evals = 72) {
    const double phi = 0.5 * (std::sqrt(5.0) - 1.0);
    double a = lo, b = hi;
    double x1 = b - phi * (b - a), x2 = a + phi * (b - a);
    double f1 = ratio(x1), f2 = ratio(x2);
    for (int i = 0; i < evals; ++i) {
        if (f1 < f2) {
            a = x1;
            x1 = x2;
            f1 = f2;
            x2 = a + phi * (b - a);
            f2 = ratio(x2);
        } else {
            b = x2;
            x2 = x1;
            f2 = f1;
            x1 = b - phi * (b - a);
            f1 = ratio(x1);
        }
    }
    return 0.5 * (a + b);
}

}  // namespace

MKResult mk_distance(const AlgebraState& phi, const AlgebraState& psi, const ChainSpace& chain,
                     const SolverConfig& cfg) {
    validate_state(phi, chain.top_blocks());
    validate_state(psi, chain.top_blocks());

    BlockElement grad = zero_element(chain.top_blocks());
    for (std::size_t i = 0; i < grad.blocks.size(); ++i) {
        CMat f = phi.weights[i] * phi.densities[i] - psi.weights[i] * psi.densities[i];
        grad.blocks[i] = 0.5 * (f + f.adjoint());
    }

    MKResult result;
    result.witness = zero_element(chain.top_blocks());

    auto traceless = [&chain](const BlockElement& x) {
        return sub(x, scale(identity_element(chain.top_blocks()), chain.mu(x)));
    };
    BlockElement dir = traceless(grad);
    const double gnorm = hs_norm(dir);
    if (gnorm < 1e-14) return result;  // phi == psi up to a scalar shift

    // Canonical orientation: the feasible body and |<g, .>| are symmetric
    // under sign flips, so solving with a sign-fixed gradient makes
    // mk_distance(phi, psi) and mk_distance(psi, phi) follow the identical
    // floating-point path.
    double flip = 1.0;
    for (const CMat& m : dir.blocks) {
        for (Eigen::Index i = 0; i < m.size() && flip == 1.0; ++i) {
            const double re = m.data()[i].real();
            if (std::abs(re) > 1e-12 * gnorm) {
                if (re < 0) flip = -1.0;
                break;
            }
            const double im = m.data()[i].imag();
            if (std::abs(im) > 1e-12 * gnorm) {
                if (im < 0) flip = -1.0;
                break;
            }
        }
        if (flip != 1.0) break;
    }
    if (flip < 0) {
        grad = scale(grad, -1.0);
        dir = scale(dir, -1.0);
    }

    auto normalize = [&](const BlockElement& x) -> BlockElement {
        const double l = chain.lip_norm(x);
        if (l < 1e-14) return zero_element(chain.top_blocks());
        return scale(x, 1.0 / l);
    };

    std::mt19937_64 rng(cfg.seed);
    double best = 0.0;
    BlockElement a = normalize(dir);
    int stall = 0;
    // phase 1: normalized supergradient ascent with a diminishing step
    const int ascent_iters = std::max(1, cfg.max_iters / 4);
    for (int k = 0; k < ascent_iters; ++k) {
        ++result.iterations;
        const double v = pairing(grad, a);
        if (v > best + cfg.tol * std::max(1.0, std::abs(best))) {
            best = v;
            result.witness = a;
            stall = 0;
        } else if (++stall >= cfg.stall_window) {
            break;
        }
        const double step = 1.0 / (gnorm * std::sqrt(double(k + 1)));
        a = normalize(traceless(add(a, scale(dir, step))));
    }
    a = result.witness;

    // phase 2: exact ray maximization of <g,x>/L(x) along the gradient, a
    // traceless coordinate frame, and seeded random directions
    std::vector<BlockElement> frame;
    frame.push_back(dir);
    for (std::size_t bi = 0; bi < a.blocks.size(); ++bi) {
        const int d = static_cast<int>(a.blocks[bi].rows());
        for (int r = 0; r < d; ++r)
            for (int c = r; c < d; ++c) {
                BlockElement e = zero_element(chain.top_blocks());
                e.blocks[bi](r, c) += 1.0;
                e.blocks[bi](c, r) += 1.0;
                frame.push_back(traceless(e));
                if (r != c) {
                    BlockElement o = zero_element(chain.top_blocks());
                    o.blocks[bi](r, c) = std::complex<double>(0.0, 1.0);
                    o.blocks[bi](c, r) = std::complex<double>(0.0, -1.0);
                    frame.push_back(traceless(o));
                }
            }
    }
    const int max_sweeps = 60;
    for (int sweep = 0; sweep < max_sweeps; ++sweep) {
        const double before = best;
        std::vector<BlockElement> dirs = frame;
        for (int extra = 0; extra < 4; ++extra)
            dirs.push_back(traceless(random_hermitian_like(a, rng)));
        for (const BlockElement& d : dirs) {
            const double dn = hs_norm(d);
            if (dn < 1e-13) continue;
            const double radius = 6.0 * std::max(1.0, hs_norm(a)) / dn;
            auto ratio = [&](double t) {
                BlockElement x = add(a, scale(d, t));
                const double l = chain.lip_norm(x);
                if (l < 1e-13) return -1.0;
                return pairing(grad, x) / l;
            };
            const double t = ray_maximize(ratio, -radius, radius);
            ++result.iterations;
            const double v = ratio(t);
            if (v > best + 1e-15) {
                a = normalize(add(a, scale(d, t)));
                best = v;
                result.witness = a;
            }
        }
        if (best - before <= cfg.tol * std::max(1.0, std::abs(best))) {
            result.stalled = true;  // sampling stopped improving within the window
            break;
        }
    }

    // the witness is feasible up to the configured tolerance, so `best` is a
    // certified lower bound for the supremum
    const double wl = chain.lip_norm(result.witness);
    if (wl > 1.0 + cfg.feasibility_tol && wl > 0.0) {
        result.witness = scale(result.witness, 1.0 / wl);
        best = pairing(grad, result.witness);
    }
    if (flip < 0) result.witness = scale(result.witness, -1.0);  // undo the orientation fix
    result.value = best;
    return result;
}

}  // namespace afq
