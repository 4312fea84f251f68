#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include "afq/qmetric.hpp"

#include <random>

using namespace afq;

namespace {

BlockElement random_hermitian(const std::vector<int>& sizes, std::mt19937_64& rng) {
    std::normal_distribution<double> g(0.0, 1.0);
    BlockElement h;
    for (int d : sizes) {
        CMat x(d, d);
        for (int r = 0; r < d; ++r)
            for (int c = 0; c < d; ++c) x(r, c) = std::complex<double>(g(rng), g(rng));
        h.blocks.push_back(0.5 * (x + x.adjoint()));
    }
    return h;
}

AlgebraState random_state(const std::vector<int>& sizes, std::mt19937_64& rng) {
    std::uniform_real_distribution<double> u(0.2, 1.0);
    std::normal_distribution<double> g(0.0, 1.0);
    AlgebraState s;
    double total = 0.0;
    for (int d : sizes) {
        CMat x(d, d);
        for (int r = 0; r < d; ++r)
            for (int c = 0; c < d; ++c) x(r, c) = std::complex<double>(g(rng), g(rng));
        CMat rho = x * x.adjoint() + 1e-3 * CMat::Identity(d, d);
        rho /= rho.trace().real();
        s.densities.push_back(rho);
        double w = u(rng);
        s.weights.push_back(w);
        total += w;
    }
    for (double& w : s.weights) w /= total;
    return s;
}

ChainSpace two_point_chain(double t = 0.5) {
    return ChainSpace({{1}, {1, 1}}, {make_matrix({{1}, {1}})}, {t, 1.0 - t}, {1.0, 0.5});
}

ChainSpace fibonacci_chain() {
    return ChainSpace({{1}, {1, 1}, {2, 1}, {3, 2}},
                      {make_matrix({{1}, {1}}), make_matrix({{1, 1}, {1, 0}}),
                       make_matrix({{1, 1}, {1, 0}})},
                      {0.6, 0.4}, {1.0, 0.5, 0.2, 1.0 / 13.0});
}

}  // namespace

TEST_CASE("chain construction validates its data") {
    CHECK_THROWS_AS(ChainSpace({{2}}, {}, {1.0}, {1.0}), std::invalid_argument);
    // non-unital step: sizes do not multiply out
    CHECK_THROWS_AS(ChainSpace({{1}, {3, 1}}, {make_matrix({{2}, {1}})}, {0.5, 0.5}, {1.0, 0.5}),
                    std::invalid_argument);
    // non-faithful trace
    CHECK_THROWS_AS(ChainSpace({{1}, {1, 1}}, {make_matrix({{1}, {1}})}, {1.0, 0.0}, {1.0, 0.5}),
                    std::invalid_argument);
    // beta must be positive
    CHECK_THROWS_AS(ChainSpace({{1}, {1, 1}}, {make_matrix({{1}, {1}})}, {0.5, 0.5}, {1.0, -1.0}),
                    std::invalid_argument);
}

TEST_CASE("embedding: scalars, the worked 2-block shape, and isometry") {
    auto chain = fibonacci_chain();
    BlockElement scalar{{CMat::Constant(1, 1, 3.25)}};
    auto top = chain.embed(scalar, 0, chain.top());
    for (std::size_t i = 0; i < top.blocks.size(); ++i)
        CHECK((top.blocks[i] - 3.25 * CMat::Identity(top.blocks[i].rows(), top.blocks[i].cols()))
                  .norm() == doctest::Approx(0.0));

    // (x, y) -> diag(x, y) + x under [[1,1],[1,0]]
    ChainSpace small({{1}, {1, 1}, {2, 1}},
                     {make_matrix({{1}, {1}}), make_matrix({{1, 1}, {1, 0}})}, {0.5, 0.5},
                     {1.0, 0.5, 0.2});
    BlockElement xy{{CMat::Constant(1, 1, 2.0), CMat::Constant(1, 1, -3.0)}};
    auto up = small.embed(xy, 1, 2);
    CHECK(up.blocks[0](0, 0).real() == doctest::Approx(2.0));
    CHECK(up.blocks[0](1, 1).real() == doctest::Approx(-3.0));
    CHECK(up.blocks[0](0, 1).real() == doctest::Approx(0.0));
    CHECK(up.blocks[1](0, 0).real() == doctest::Approx(2.0));

    std::mt19937_64 rng(61);
    for (int t = 0; t < 20; ++t) {
        auto a = random_hermitian(chain.blocks_at(1), rng);
        auto e = chain.embed(a, 1, chain.top());
        CHECK(operator_norm(e) == doctest::Approx(operator_norm(a)).epsilon(1e-12));
    }
}

TEST_CASE("conditional expectation properties") {
    ChainSpace chain({{1}, {1, 1}}, {make_matrix({{1}, {1}})}, {0.3, 0.7}, {1.0, 0.5});
    BlockElement a{{CMat::Constant(1, 1, 2.0), CMat::Constant(1, 1, 10.0)}};
    auto e0 = chain.conditional_expectation(a, 0);
    const double avg = 0.3 * 2.0 + 0.7 * 10.0;
    CHECK(e0.blocks[0](0, 0).real() == doctest::Approx(avg));
    CHECK(e0.blocks[1](0, 0).real() == doctest::Approx(avg));

    auto fib = fibonacci_chain();
    std::mt19937_64 rng(67);
    for (int t = 0; t < 20; ++t) {
        auto x = random_hermitian(fib.top_blocks(), rng);
        // trace preservation
        CHECK(fib.mu(fib.conditional_expectation(x, 1)) ==
              doctest::Approx(fib.mu(x)).epsilon(1e-12));
        // idempotence on the image
        auto y = fib.embed(random_hermitian(fib.blocks_at(2), rng), 2, fib.top());
        auto ey = fib.conditional_expectation(y, 2);
        BlockElement diff = sub(ey, y);
        CHECK(operator_norm(diff) < 1e-10);
        // tower compatibility E_n E_m = E_min
        for (std::size_t n = 0; n < fib.top(); ++n)
            for (std::size_t m = 0; m < fib.top(); ++m) {
                auto lhs = fib.conditional_expectation(fib.conditional_expectation(x, m), n);
                auto rhs = fib.conditional_expectation(x, std::min(n, m));
                CHECK(operator_norm(sub(lhs, rhs)) < 1e-10);
            }
    }
}

TEST_CASE("lip norm basics") {
    auto chain = two_point_chain();
    BlockElement one{{CMat::Identity(1, 1), CMat::Identity(1, 1)}};
    CHECK(chain.lip_norm(one) == doctest::Approx(0.0));

    BlockElement pm{{CMat::Constant(1, 1, 1.0), CMat::Constant(1, 1, -1.0)}};
    CHECK(chain.lip_norm(pm) == doctest::Approx(1.0));

    auto fib = fibonacci_chain();
    std::mt19937_64 rng(71);
    for (int t = 0; t < 25; ++t) {
        auto a = random_hermitian(fib.top_blocks(), rng);
        const double l = fib.lip_norm(a);
        // homogeneity
        CHECK(fib.lip_norm(scale(a, -2.5)) == doctest::Approx(2.5 * l).epsilon(1e-10));
        // the defining bound per level
        for (std::size_t n = 0; n < fib.top(); ++n) {
            auto diff = sub(a, fib.conditional_expectation(a, n));
            CHECK(operator_norm(diff) <= fib.beta(n) * l + 1e-10);
        }
        // zero set: tiny lip norm forces proximity to the scalars
        if (l < 1e-9) {
            auto centered = sub(a, scale(identity_element(fib.top_blocks()), fib.mu(a)));
            CHECK(operator_norm(centered) < 1e-8);
        }
    }
    // scalars have lip norm 0 and land within 1e-8 of themselves
    BlockElement s = scale(identity_element(fib.top_blocks()), 4.0);
    CHECK(fib.lip_norm(s) < 1e-9);
}

TEST_CASE("quasi-Leibniz inequality holds for chain lip norms") {
    std::mt19937_64 rng(73);
    auto fib = fibonacci_chain();
    BlockElement id = identity_element(fib.top_blocks());
    CHECK(quasi_leibniz_check(id, id, fib));
    for (int t = 0; t < 100; ++t) {
        auto a = random_hermitian(fib.top_blocks(), rng);
        auto b = random_hermitian(fib.top_blocks(), rng);
        CHECK(quasi_leibniz_check(a, b, fib));
    }
}

TEST_CASE("a fabricated seminorm violates the inequality on a witness") {
    // distance to the span of {1, v} with v = diag(1,2,0): not a subalgebra,
    // so products escape and the inequality must fail for a = b = v
    std::vector<int> blocks{1, 1, 1};
    BlockElement v{{CMat::Constant(1, 1, 1.0), CMat::Constant(1, 1, 2.0), CMat::Zero(1, 1)}};
    auto fake_lip = [&](const BlockElement& x) {
        Eigen::Vector3d xv(x.blocks[0](0, 0).real(), x.blocks[1](0, 0).real(),
                           x.blocks[2](0, 0).real());
        Eigen::Matrix<double, 3, 2> basis;
        basis << 1, 1, 1, 2, 1, 0;
        Eigen::Vector3d res = xv - basis * (basis.transpose() * basis)
                                               .ldlt()
                                               .solve(basis.transpose() * xv);
        return res.lpNorm<Eigen::Infinity>();
    };
    CHECK(fake_lip(v) == doctest::Approx(0.0));
    CHECK_FALSE(quasi_leibniz_holds(fake_lip, v, v));
}

TEST_CASE("state validation") {
    auto chain = two_point_chain();
    AlgebraState bad_weights{{0.7, 0.7}, {CMat::Ones(1, 1), CMat::Ones(1, 1)}};
    CHECK_THROWS_AS(mk_distance(bad_weights, bad_weights, chain), std::domain_error);
    AlgebraState bad_density{{0.5, 0.5}, {CMat::Constant(1, 1, -1.0), CMat::Ones(1, 1)}};
    CHECK_THROWS_AS(mk_distance(bad_density, bad_density, chain), std::domain_error);
}

TEST_CASE("mk distance: identical states, closed form, level agreement") {
    auto chain = two_point_chain();
    AlgebraState phi{{1.0, 0.0}, {CMat::Ones(1, 1), CMat::Ones(1, 1)}};
    AlgebraState psi{{0.0, 1.0}, {CMat::Ones(1, 1), CMat::Ones(1, 1)}};

    CHECK(mk_distance(phi, phi, chain).value == doctest::Approx(0.0));
    CHECK(mk_distance(phi, psi, chain).value == doctest::Approx(2.0).epsilon(1e-7));

    auto fib = fibonacci_chain();
    std::mt19937_64 rng(79);
    for (std::size_t n = 1; n < fib.top(); ++n) {
        auto rho = random_state(fib.top_blocks(), rng);
        auto tau = fib.compose_with_expectation(rho, n);
        // tau agrees with rho on the embedded level-n subalgebra
        auto probe = fib.embed(random_hermitian(fib.blocks_at(n), rng), n, fib.top());
        CHECK(apply_state(rho, probe) == doctest::Approx(apply_state(tau, probe)).epsilon(1e-9));
        auto d = mk_distance(rho, tau, fib);
        CHECK(d.value <= 2.0 * fib.beta(n) + 1e-6);
    }
}

TEST_CASE("mk distance matches the closed form at an asymmetric trace") {
    // on C in C^2 with trace (t, 1-t): ||a - E_0 a|| = max(t, 1-t) |x - y|,
    // so the point states sit at distance beta(0) / max(t, 1-t)
    auto chain = two_point_chain(0.3);
    AlgebraState phi{{1.0, 0.0}, {CMat::Ones(1, 1), CMat::Ones(1, 1)}};
    AlgebraState psi{{0.0, 1.0}, {CMat::Ones(1, 1), CMat::Ones(1, 1)}};
    CHECK(mk_distance(phi, psi, chain).value == doctest::Approx(1.0 / 0.7).epsilon(1e-7));
}

TEST_CASE("mk distance is a pseudo-metric on sampled states") {
    auto chain = two_point_chain();
    std::mt19937_64 rng(83);
    const double tol = 1e-6;
    for (int t = 0; t < 5; ++t) {
        auto f = random_state(chain.top_blocks(), rng);
        auto g = random_state(chain.top_blocks(), rng);
        auto h = random_state(chain.top_blocks(), rng);
        double fg = mk_distance(f, g, chain).value;
        double gf = mk_distance(g, f, chain).value;
        CHECK(fg == doctest::Approx(gf).epsilon(tol));
        double fh = mk_distance(f, h, chain).value;
        double gh = mk_distance(g, h, chain).value;
        CHECK(fh <= fg + gh + 2 * tol);
    }
    // a noncommutative chain with a looser budget
    ChainSpace nc({{1}, {1, 1}, {2, 1}},
                  {make_matrix({{1}, {1}}), make_matrix({{1, 1}, {1, 0}})}, {0.5, 0.5},
                  {1.0, 0.5, 0.2});
    SolverConfig cfg;
    cfg.max_iters = 4000;
    const double loose = 2e-3;
    for (int t = 0; t < 3; ++t) {
        auto f = random_state(nc.top_blocks(), rng);
        auto g = random_state(nc.top_blocks(), rng);
        auto h = random_state(nc.top_blocks(), rng);
        double fg = mk_distance(f, g, nc, cfg).value;
        double gf = mk_distance(g, f, nc, cfg).value;
        CHECK(std::abs(fg - gf) < loose);
        double fh = mk_distance(f, h, nc, cfg).value;
        double gh = mk_distance(g, h, nc, cfg).value;
        CHECK(fh <= fg + gh + 2 * loose);
    }
}

TEST_CASE("the mk witness is feasible, making the value a lower bound") {
    auto fib = fibonacci_chain();
    std::mt19937_64 rng(89);
    auto f = random_state(fib.top_blocks(), rng);
    auto g = random_state(fib.top_blocks(), rng);
    auto res = mk_distance(f, g, fib);
    CHECK(fib.lip_norm(res.witness) <= 1.0 + 1e-8);
    CHECK(apply_state(f, res.witness) - apply_state(g, res.witness) ==
          doctest::Approx(res.value).epsilon(1e-9));
}
