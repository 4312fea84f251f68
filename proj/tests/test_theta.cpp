#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include "afq/theta.hpp"

#include <random>

using namespace afq;

namespace {

ContinuedFraction golden() { return ContinuedFraction::periodic({Int(0)}, {Int(1)}); }

ContinuedFraction random_theta(std::mt19937_64& rng, std::size_t head_len, int max_term) {
    std::uniform_int_distribution<int> d(1, max_term);
    std::vector<Int> head{0};
    for (std::size_t i = 0; i < head_len; ++i) head.emplace_back(d(rng));
    return ContinuedFraction::periodic(std::move(head), {Int(1)});
}

// Brute-force index search: scan the whole Farey row for the bracketing slot.
std::size_t j_by_row_scan(const ContinuedFraction& cf, int n) {
    FareyLevel row = farey_level(n);
    for (std::size_t k = 0; k + 1 < row.size(); ++k) {
        if (compare_to_rational(cf, row.p[k], row.q[k], 64) == Cmp::Greater &&
            compare_to_rational(cf, row.p[k + 1], row.q[k + 1], 64) == Cmp::Less)
            return k;
    }
    FAIL("no bracketing index found");
    return 0;
}

}  // namespace

TEST_CASE("j sequences on the worked examples") {
    CHECK(j_sequence(golden(), 3) == std::vector<Int>{0, 1, 2});
    auto tiny = ContinuedFraction::periodic({Int(0), Int(1000)}, {Int(1)});
    CHECK(j_sequence(tiny, 3) == std::vector<Int>{0, 0, 0});
    std::mt19937_64 rng(5);
    CHECK(j_sequence(random_theta(rng, 4, 9), 1) == std::vector<Int>{0});
}

TEST_CASE("incremental descent matches the full row scan") {
    std::mt19937_64 rng(41);
    for (int t = 0; t < 6; ++t) {
        auto cf = random_theta(rng, 8, 9);
        ThetaTower tower(cf);
        for (int n = 1; n <= 10; ++n)
            CHECK(tower.level(n).j == j_by_row_scan(cf, n));
    }
}

TEST_CASE("descent rejects rational and too-short streams") {
    // value 1/2 hits the level-2 mediant
    CHECK_THROWS_WITH_AS(j_sequence(cf_from_rational(1, 2), 2), doctest::Contains("mediant"),
                         std::domain_error);
    // a finite prefix eventually pins a mediant and cannot continue; the
    // error names the undecidable level
    auto prefix = ContinuedFraction::finite({Int(0), Int(1), Int(1)});
    CHECK_THROWS_WITH_AS(j_sequence(prefix, 30), doctest::Contains("level 2"),
                         std::domain_error);
    // but shallow requests that the prefix does resolve still work
    CHECK(j_sequence(prefix, 1) == std::vector<Int>{0});
}

TEST_CASE("ideal blocks") {
    CHECK(ideal_blocks(golden(), 0).empty());
    CHECK(ideal_blocks(golden(), 1).empty());
    CHECK(ideal_blocks(golden(), 3) == std::vector<std::size_t>{0, 1, 4});
    auto tiny = ContinuedFraction::periodic({Int(0), Int(1000)}, {Int(1)});
    CHECK(ideal_blocks(tiny, 3) == std::vector<std::size_t>{2, 3, 4});
}

TEST_CASE("theta ideal diagrams validate and agree under cf agreement") {
    auto base = farey_diagram(5);
    auto ideal = theta_ideal_diagram(golden(), base);
    CHECK(validate_ideal(ideal).ok);
    CHECK(ideal.levels[0].empty());
    CHECK(ideal.levels[1].empty());

    // streams agreeing through index N produce diagrams agreeing through a
    // level at least max(1, a_1 - 1 + a_2 + ... + a_N)
    std::mt19937_64 rng(43);
    for (int t = 0; t < 5; ++t) {
        auto theta = random_theta(rng, 8, 4);
        std::vector<Int> head2(theta.head().begin(), theta.head().begin() + 6);
        head2.push_back(theta.head()[6] + 1);
        auto mu = ContinuedFraction::periodic(std::move(head2), {Int(1)});
        const std::size_t agree_terms = 5;  // indices 1..5 agree
        Int bound = theta.term(1) - 1;
        for (std::size_t k = 2; k <= agree_terms; ++k) bound += theta.term(k);
        if (bound < 1) bound = 1;
        auto d = theta_ideal_metric(theta, mu, 40);
        if (d.kind == IdealDistance::Kind::Dyadic)
            CHECK(Int(static_cast<long>(d.value->exponent)) > bound);
    }
}

TEST_CASE("quotient dimension and beta") {
    CHECK(quotient_dimension(golden(), 0) == 1);
    CHECK(beta(golden(), 0) == Rat(1));
    CHECK(quotient_dimension(golden(), 1) == 2);
    CHECK(beta(golden(), 1) == make_rat(1, 2));
    CHECK(quotient_dimension(golden(), 3) == 13);
    CHECK(beta(golden(), 3) == make_rat(1, 13));
    CHECK(beta(golden(), 3) <= make_rat(1, 9));
}

TEST_CASE("trace coefficients: seed, chain and golden values") {
    auto c1 = trace_coefficient(golden(), 1);
    CHECK(c1 == AffineCoefficient{Rat(-1), Rat(1)});

    ThetaTower tower(golden());
    CHECK(tower.trace_coefficient(2) == AffineCoefficient{Rat(-2), Rat(2)});
    CHECK(tower.trace_coefficient(3) == AffineCoefficient{Rat(-6), Rat(4)});

    // c(m) = 1 - m theta while the descent keeps moving left (a_1 >= 2)
    auto five = ContinuedFraction::periodic({Int(0), Int(5)}, {Int(1)});
    ThetaTower t5(five);
    for (long m = 1; m <= 5; ++m)
        CHECK(t5.trace_coefficient(m) == AffineCoefficient{Rat(-m), Rat(1)});

    // a finite prefix carries the same coefficients as long as it resolves
    std::vector<Int> ones(9, Int(1));
    ones[0] = 0;
    ThetaTower tp(ContinuedFraction::finite(std::move(ones)));
    CHECK(tp.trace_coefficient(4) == AffineCoefficient{Rat(-15), Rat(10)});
    CHECK(tp.trace_coefficient(4) == tower.trace_coefficient(4));
}

TEST_CASE("trace coefficients stay certified in (0,1) to level 40") {
    std::mt19937_64 rng(47);
    for (int t = 0; t < 5; ++t) {
        auto cf = random_theta(rng, 12, 9);
        ThetaTower tower(cf);
        CHECK_NOTHROW(tower.trace_coefficient(40));
        // evaluation at a deep convergent lands strictly inside (0,1)
        auto cs = convergents(cf, 30);
        Rat at = tower.trace_coefficient(40).evaluate(make_rat(cs[30].p, cs[30].q));
        CHECK(at > 0);
        CHECK(at < 1);
    }
}

TEST_CASE("trace coefficients are shared by streams with matching descent") {
    auto theta = golden();
    auto mu = ContinuedFraction::periodic({Int(0), Int(1), Int(1), Int(1), Int(1), Int(2)},
                                          {Int(1)});
    ThetaTower a(theta), b(mu);
    std::size_t agree = 0;
    for (std::size_t n = 1; n <= 12; ++n)
        if (a.level(n).j == b.level(n).j && agree == n - 1) agree = n;
    CHECK(agree >= 4);
    for (std::size_t n = 1; n <= agree; ++n)
        CHECK(a.trace_coefficient(n) == b.trace_coefficient(n));
}

TEST_CASE("trace_value combines block traces affinely") {
    auto v = trace_value(golden(), 1, Rat(1), Rat(0));
    CHECK(v == AffineCoefficient{Rat(-1), Rat(1)});  // c itself
    auto w = trace_value(golden(), 1, Rat(0), Rat(1));
    CHECK(w == AffineCoefficient{Rat(1), Rat(0)});  // 1 - c = theta
    auto s = trace_value(golden(), 4, make_rat(3, 7), make_rat(3, 7));
    CHECK(s == AffineCoefficient{Rat(0), make_rat(3, 7)});  // coefficients sum to 1
}

TEST_CASE("r approach and gaps") {
    auto steps = r_approach(golden(), 3);
    REQUIRE(steps.size() == 3);
    CHECK(steps[0].r == Rat(0));
    CHECK(steps[0].gap == Rat(1));
    CHECK(steps[1].r == make_rat(1, 2));
    CHECK(steps[1].gap == make_rat(1, 2));
    CHECK(steps[2].r == make_rat(1, 2));
    CHECK(steps[2].gap == make_rat(1, 6));

    auto two = ContinuedFraction::periodic({Int(0), Int(2)}, {Int(1)});
    auto s2 = r_approach(two, 3);
    CHECK(s2[0].r == Rat(0));
    CHECK(s2[1].r == Rat(0));
    CHECK(s2[2].r == make_rat(1, 3));

    std::mt19937_64 rng(53);
    for (int t = 0; t < 5; ++t) {
        auto cf = random_theta(rng, 24, 9);
        auto ss = r_approach(cf, 20);
        for (std::size_t n = 1; n < ss.size(); ++n) CHECK(ss[n].gap <= ss[n - 1].gap);
    }
}

TEST_CASE("effros-shen identification on the worked examples") {
    auto rep = effros_shen_identification(golden(), 4);
    CHECK(rep.match);
    CHECK(rep.telescope_count == 4);
    CHECK(rep.telescope_levels == std::vector<std::size_t>{1, 2, 3, 4});

    auto two = ContinuedFraction::periodic({Int(0), Int(2), Int(1)}, {Int(1)});
    auto rep2 = effros_shen_identification(two, 6);
    CHECK(rep2.match);
    CHECK(rep2.telescope_levels[0] == 2);  // x_1 = a_1

    // a large opening term keeps the tower deep but cheap
    auto big = ContinuedFraction::periodic({Int(0), Int(50), Int(2), Int(3)}, {Int(1)});
    auto rep3 = effros_shen_identification(big, 56);
    CHECK(rep3.match);
    CHECK(rep3.telescope_count == 4);
    CHECK(rep3.telescope_levels == std::vector<std::size_t>{50, 52, 55, 56});

    // wrong swap order must be reported as a mismatch
    auto bad = effros_shen_identification_flipped(golden(), 4);
    CHECK_FALSE(bad.match);
    CHECK_FALSE(bad.mismatch.empty());

    CHECK_THROWS_AS(effros_shen_identification(golden(), 1), std::domain_error);
}

TEST_CASE("identification agrees with the materialized quotient telescoping") {
    std::mt19937_64 rng(59);
    std::uniform_int_distribution<int> d(1, 3);
    for (int t = 0; t < 6; ++t) {
        std::vector<Int> head{0, d(rng), d(rng), d(rng)};
        auto cf = ContinuedFraction::periodic(std::move(head), {Int(1)});
        const std::size_t x1 = cf.term(1).get_ui();
        const std::size_t x2 = x1 + cf.term(2).get_ui();
        auto base = farey_diagram(static_cast<int>(x2));
        auto quotient = quotient_diagram(base, theta_ideal_diagram(cf, base));
        auto tele = telescope(quotient, {x1, x2});

        auto rep = effros_shen_identification(cf, x2);
        REQUIRE(rep.match);
        // read the telescoped matrix through the certified orientation and
        // compare with the 2x2 Effros-Shen step
        const bool sc = rep.swapped[0], sr = rep.swapped[1];
        MultiplicityMatrix es(2, 2);
        for (int r = 0; r < 2; ++r)
            for (int c = 0; c < 2; ++c)
                es.at(sr ? 1 - r : r, sc ? 1 - c : c) = tele.matrices[0].at(r, c);
        CHECK(es == make_matrix({{cf.term(2).get_si(), 1}, {1, 0}}));
    }
}

TEST_CASE("incremental metric scales to depth 1001") {
    auto theta = ContinuedFraction::periodic({Int(0), Int(1000)}, {Int(1)});
    auto mu = ContinuedFraction::periodic({Int(0), Int(999)}, {Int(1)});
    auto d = theta_ideal_metric(theta, mu, 1001);
    REQUIRE(d.kind == IdealDistance::Kind::Dyadic);
    CHECK(d.value->exponent == 1000);
    Int big = 1;
    mpz_mul_2exp(big.get_mpz_t(), big.get_mpz_t(), 1000);
    CHECK(d.to_rational() == make_rat(1, big));

    auto same = theta_ideal_metric(theta, theta, 64);
    CHECK(same.kind == IdealDistance::Kind::AgreeToDepth);
}
