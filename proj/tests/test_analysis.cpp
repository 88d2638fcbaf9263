/*
   Copyright 2026 The da_guard Authors

   Licensed under the Apache License, Version 2.0 (the "License");
   you may not use this file except in compliance with the License.
   You may obtain a copy of the License at

       http://www.apache.org/licenses/LICENSE-2.0

   Unless required by applicable law or agreed to in writing, software
   distributed under the License is distributed on an "AS IS" BASIS,
   WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
   See the License for the specific language governing permissions and
   limitations under the License.
*/

#include <doctest.h>

#include <stdexcept>
#include <tuple>
#include <utility>

#include <cmath>
#include <limits>

#include "da_guard/analysis.hpp"
#include "oracles.hpp"

using namespace da_guard::analysis;

namespace {

double exact_log(const mpz_class& z) {
    long exp = 0;
    const double mant = mpz_get_d_2exp(&exp, z.get_mpz_t());
    return std::log(mant) + static_cast<double>(exp) * std::log(2.0);
}

double exact_log_ratio(unsigned long a, unsigned long b, unsigned long s) {
    return exact_log(oracle::binomial(a, s)) - exact_log(oracle::binomial(b, s));
}

}  // namespace

TEST_SUITE("analysis") {

TEST_CASE("log binomial against exact integers") {
    for (unsigned long a : {1ul, 7ul, 50ul, 100ul, 1000ul, 12996ul})
        for (unsigned long b : {0ul, 1ul, 3ul, 10ul, 35ul, 500ul})
            if (b <= a) CHECK(log_binomial(a, b) == doctest::Approx(exact_log(oracle::binomial(a, b))).epsilon(1e-12));
    CHECK(std::isinf(log_binomial(3, 4)));
    CHECK(log_binomial(3, 4) < 0);
}

TEST_CASE("log binomial ratio against exact integers") {
    struct Case {
        unsigned long a, b, s;
    };
    for (auto [a, b, s] : {Case{49, 100, 10}, Case{8640, 12120, 35}, Case{8640, 12120, 300}, Case{749, 1000, 30},
                           Case{37439, 65000, 262}, Case{100, 100, 50}, Case{5, 9, 5}, Case{60000, 65536, 4000}}) {
        const double want = exact_log_ratio(a, b, s);
        CHECK(log_binomial_ratio(a, b, s) == doctest::Approx(want).epsilon(1e-10).scale(1.0));
    }
    CHECK_THROWS_AS(log_binomial_ratio(10, 9, 2), DomainError);
}

TEST_CASE("expected distinct count") {
    CHECK(expected_distinct(100, 100, 10) == doctest::Approx(100.0 * (1.0 - std::pow(0.9, 100))));
    CHECK(expected_distinct(100, 100, 10) == doctest::Approx(99.997).epsilon(1e-5));
    CHECK(expected_distinct(50, 7, 50) == 50.0);
    CHECK(expected_distinct(50, 1, 13) == doctest::Approx(13.0));
    CHECK_THROWS_AS(expected_distinct(10, 1, 11), DomainError);
}

TEST_CASE("rounding is half away from zero") {
    CHECK(round_count(2.5) == 3);
    CHECK(round_count(2.4999) == 2);
    CHECK(round_count(0.0) == 0);
    CHECK_THROWS_AS(round_count(-1.0), DomainError);
}

TEST_CASE("log probabilities") {
    const auto p = LogProb::from_probability(0.25);
    CHECK(p.probability() == doctest::Approx(0.25));
    CHECK(p.complement().probability() == doctest::Approx(0.75));
    CHECK((p * p).probability() == doctest::Approx(0.0625));
    CHECK(p.pow(3).probability() == doctest::Approx(0.015625));
    CHECK(LogProb::from_probability(1e-300).complement().value == doctest::Approx(-1e-300));
    CHECK_THROWS_AS(LogProb::from_probability(1.5), DomainError);
}

TEST_CASE("coupon CDF small cases") {
    CHECK(coupon_cdf_exact(4, 2, 2, 1, 1) == mpq_class(1, 6));
    CHECK(coupon_cdf(4, 2, 2, 1, 1) == doctest::Approx(1.0 / 6.0));
    CHECK(coupon_cdf_exact(10, 4, 3, 2, 0) == 0);
    CHECK(coupon_cdf(10, 4, 3, 2, 0) == 0.0);
    CHECK(coupon_cdf_exact(10, 4, 3, 2, 5) == 1);
    CHECK(coupon_cdf(10, 4, 3, 2, 5) == 1.0);
    CHECK_THROWS_AS(coupon_cdf_exact(2001, 4, 3, 2, 1), DomainError);
    CHECK_THROWS_AS(coupon_cdf(10, 11, 3, 2, 1), DomainError);
    CHECK_THROWS_AS(coupon_cdf(10, 4, 3, 2, 6), DomainError);
}

TEST_CASE("exact coupon CDF equals enumeration (v <= 6)") {
    for (unsigned v = 1; v <= 6; ++v)
        for (unsigned z = 1; z <= std::min(v, 4u); ++z)
            for (unsigned y = 1; y <= 3; ++y)
                for (unsigned w = 0; w <= v; ++w) {
                    const auto hist = oracle::coverage_histogram(v, w, z, y);
                    mpz_class total = 0;
                    for (const auto& h : hist) total += h;
                    mpz_class below = 0;
                    for (unsigned x = 0; x <= w + 1; ++x) {
                        mpq_class want(below, total);
                        want.canonicalize();
                        REQUIRE(coupon_cdf_exact(v, w, z, y, x) == want);
                        if (x <= w) below += hist[x];
                    }
                }
}

TEST_CASE("floating and exact coupon routes agree") {
    // Relative error is measured exactly in rationals. Below the normal double
    // range no relative bound is representable; there the floating value must
    // also be subnormal or zero.
    const mpq_class tiny(std::numeric_limits<double>::min());
    for (unsigned v : {10u, 37u, 100u, 400u})
        for (unsigned w : {1u, v / 3, v / 2, v})
            for (unsigned z : {1u, 3u, v / 5 + 1})
                for (unsigned y : {1u, 4u, 25u})
                    for (unsigned x = 0; x <= w + 1; x += std::max(1u, w / 7)) {
                        const mpq_class exact = coupon_cdf_exact(v, w, z, y, x);
                        const mpq_class approx(coupon_cdf(v, w, z, y, x));
                        INFO("v=" << v << " w=" << w << " z=" << z << " y=" << y << " x=" << x);
                        if (exact >= tiny)
                            REQUIRE(abs(approx - exact) <= mpq_class(1, 1000000) * exact);
                        else
                            REQUIRE(approx < tiny);
                    }
}

TEST_CASE("no-decode probability") {
    const SamplingModel small{.n = 8, .gamma_n = 4, .m = 2, .s = 2};
    // Fewer than 4 distinct among two 2-subsets of 8: overlapping pairs only.
    const auto hist = oracle::coverage_histogram(8, 8, 2, 2);
    mpz_class total = 0, below = 0;
    for (unsigned t = 0; t < hist.size(); ++t) {
        total += hist[t];
        if (t < 4) below += hist[t];
    }
    const double want = mpq_class(below, total).get_d();
    CHECK(prob_no_decode(small, CdfMethod::Exact) == doctest::Approx(want));
    CHECK(prob_no_decode(small, CdfMethod::Floating) == doctest::Approx(want));
    CHECK(want == doctest::Approx(13.0 / 28.0));

    CHECK(prob_no_decode({.n = 10, .gamma_n = 11, .m = 5, .s = 10}) == 1.0);
    CHECK(prob_no_decode({.n = 10, .gamma_n = 10, .m = 1, .s = 10}) == 0.0);
    CHECK(prob_no_decode({.n = 10, .gamma_n = 10, .m = 3, .s = 10}, CdfMethod::Exact) == 0.0);

    // Partially hidden block: only beta n symbols need to be collected.
    const SamplingModel half{.n = 20, .gamma_n = 15, .m = 3, .s = 4, .beta = 0.5};
    CHECK(prob_no_decode(half, CdfMethod::Floating) ==
          doctest::Approx(prob_no_decode(half, CdfMethod::Exact)).epsilon(1e-9));
    CHECK(prob_no_decode({.n = 20, .gamma_n = 10, .m = 3, .s = 4, .beta = 0.5}) == 0.0);
}

TEST_CASE("adversarial success probability") {
    CHECK(epsilon_simplified({.n = 100, .gamma_n = 50, .m = 1, .s = 10}) == 1.0);

    const auto d = epsilon_details({.n = 100, .gamma_n = 50, .m = 100, .s = 10});
    CHECK(d.regime == EpsilonRegime::Withholding);
    CHECK(d.x_hat == 100);
    CHECK(d.withheld == 51);
    CHECK(d.miss_ratio == doctest::Approx(4.747e-4).epsilon(1e-3));
    CHECK(d.epsilon == doctest::Approx(0.0464).epsilon(0.001));
    CHECK(d.epsilon == doctest::Approx(1.0 - std::pow(1.0 - d.miss_ratio, 100)).epsilon(1e-12));

    CHECK(epsilon_simplified({.n = 1000, .gamma_n = 750, .m = 1000, .s = 30}) == doctest::Approx(0.137).epsilon(0.005));

    // Fewer than s revealed symbols: no node can be fully served.
    CHECK(epsilon_simplified({.n = 100, .gamma_n = 5, .m = 50, .s = 10}) == 0.0);
    CHECK_THROWS_AS(epsilon_simplified({.n = 100, .gamma_n = 50, .m = 10, .s = 10, .beta = 0.5}), DomainError);
    CHECK_THROWS_AS(epsilon_simplified({.n = 100, .gamma_n = 50, .m = 10, .s = 0}), DomainError);
    CHECK_THROWS_AS(epsilon_simplified({.n = 100, .gamma_n = 0, .m = 10, .s = 3}), DomainError);
}

TEST_CASE("epsilon never increases with s") {
    for (auto [n, g, m] : {std::tuple{100ull, 50ull, 10ull}, {100ull, 50ull, 100ull}, {1000ull, 750ull, 200ull},
                          {12996ull, 8641ull, 1000ull}, {64ull, 40ull, 5ull}}) {
        double prev = 1.0;
        for (std::uint64_t s = 1; s <= n; s += (n > 1000 ? 37 : 1)) {
            const double e = epsilon_simplified({.n = n, .gamma_n = g, .m = m, .s = s});
            REQUIRE(e <= prev + 1e-15);
            REQUIRE(e >= 0.0);
            prev = e;
        }
    }
}

TEST_CASE("sample count bounds") {
    CHECK(min_samples_lower_bound(500.0, 1.0 - std::exp(-1.0)) == doctest::Approx(500.0));
    CHECK(min_samples_lower_bound(1e4, 0.75) == doctest::Approx(13862.94).epsilon(1e-6));
    CHECK(min_samples_lower_bound(1e4, 1e-12) < 1e-7);
    CHECK(approx_samples_large_m(0.25, 1048576.0, 0.01) == doctest::Approx(22.34).epsilon(1e-3));
    CHECK(approx_samples_large_m(0.25, 16.0, 0.01) == doctest::Approx(8.92).epsilon(1e-3));
    CHECK(approx_samples_large_m(0.25, 1000.0, 1.0) == doctest::Approx(std::log(1000.0) / std::log(1.0 / 0.4375)));
    CHECK_THROWS_AS(approx_samples_large_m(1.0, 100.0, 0.01), DomainError);
    CHECK_THROWS_AS(min_samples_lower_bound(100.0, 1.0), DomainError);
}

}  // TEST_SUITE
