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

#include "da_guard/analysis.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <vector>

namespace da_guard::analysis {

namespace {

// Reentrant log-gamma; std::lgamma writes the global signgam.
double log_gamma(double x) {
    int sign = 0;
    return ::lgamma_r(x, &sign);
}

constexpr double kNegInf = -std::numeric_limits<double>::infinity();

}  // namespace

LogProb LogProb::from_probability(double p) {
    if (!(p >= 0.0 && p <= 1.0)) throw DomainError("probability outside [0, 1]");
    return {std::log(p)};
}

double LogProb::probability() const { return std::exp(value); }

LogProb LogProb::complement() const { return {std::log(-std::expm1(value))}; }

void SamplingModel::validate() const {
    if (n == 0) throw DomainError("n must be positive");
    if (s == 0 || s > n) throw DomainError("samples per node must satisfy 0 < s <= n");
    if (m == 0) throw DomainError("at least one light node is required");
    if (gamma_n == 0) throw DomainError("decode threshold must be positive");
    if (!(beta >= 0.0 && beta <= 1.0)) throw DomainError("beta must lie in [0, 1]");
}

std::uint64_t SamplingModel::hidden_count() const { return round_count(beta * static_cast<double>(n)); }

std::uint64_t round_count(double x) {
    if (!(x >= 0.0)) throw DomainError("count must be non-negative");
    return static_cast<std::uint64_t>(std::floor(x + 0.5));
}

double log_binomial(std::uint64_t a, std::uint64_t b) {
    if (b > a) return kNegInf;
    if (b == 0 || b == a) return 0.0;
    const std::uint64_t k = std::min(b, a - b);
    if (k <= 256) {
        // sum of log((a - k + i) / i); avoids cancelling two huge log-gammas
        double acc = 0.0;
        for (std::uint64_t i = 1; i <= k; ++i)
            acc += std::log(static_cast<double>(a - k + i) / static_cast<double>(i));
        return acc;
    }
    const auto da = static_cast<double>(a), db = static_cast<double>(b);
    return log_gamma(da + 1.0) - log_gamma(db + 1.0) - log_gamma(da - db + 1.0);
}

double log_binomial_ratio(std::uint64_t a, std::uint64_t b, std::uint64_t s) {
    if (a > b) throw DomainError("binomial ratio expects a <= b");
    if (s > a) return kNegInf;
    if (s <= 256) {
        // prod_{i<s} (a - i) / (b - i), each factor as log1p of its deficit
        const double gap = static_cast<double>(a) - static_cast<double>(b);
        double acc = 0.0;
        for (std::uint64_t i = 0; i < s; ++i) acc += std::log1p(gap / static_cast<double>(b - i));
        return acc;
    }
    const auto da = static_cast<double>(a), db = static_cast<double>(b), ds = static_cast<double>(s);
    return log_gamma(da + 1.0) - log_gamma(da - ds + 1.0) - log_gamma(db + 1.0) + log_gamma(db - ds + 1.0);
}

double expected_distinct(std::uint64_t n, std::uint64_t m, std::uint64_t s) {
    if (n == 0 || s == 0 || s > n) throw DomainError("expected_distinct requires 0 < s <= n");
    const double dn = static_cast<double>(n);
    const double miss = static_cast<double>(m) * std::log1p(-static_cast<double>(s) / dn);
    return -dn * std::expm1(miss);
}

namespace {

void check_cdf_domain(std::uint64_t v, std::uint64_t w, std::uint64_t z, std::uint64_t y, std::uint64_t x) {
    if (v == 0) throw DomainError("coupon CDF: v must be positive");
    if (w > v) throw DomainError("coupon CDF: requires w <= v");
    if (z == 0 || z > v) throw DomainError("coupon CDF: requires 0 < z <= v");
    if (y == 0) throw DomainError("coupon CDF: requires y >= 1");
    if (x > w + 1) throw DomainError("coupon CDF: requires x <= w + 1");
}

mpz_class binom(std::uint64_t a, std::uint64_t b) {
    mpz_class r;
    if (b > a) return 0;
    mpz_bin_uiui(r.get_mpz_t(), static_cast<unsigned long>(a), static_cast<unsigned long>(b));
    return r;
}

mpz_class power(const mpz_class& base, std::uint64_t e) {
    mpz_class r;
    mpz_pow_ui(r.get_mpz_t(), base.get_mpz_t(), static_cast<unsigned long>(e));
    return r;
}

}  // namespace

mpq_class coupon_cdf_exact(std::uint64_t v, std::uint64_t w, std::uint64_t z, std::uint64_t y, std::uint64_t x) {
    check_cdf_domain(v, w, z, y, x);
    if (v > kExactCdfMaxV)
        throw DomainError("exact coupon CDF is limited to v <= " + std::to_string(kExactCdfMaxV));
    if (x == 0) return 0;
    if (x == w + 1) return 1;

    // sum_{i<x} (-1)^(x-i+1) C(w,i) C(w-i-1, w-x) (C(v-w+i, z) / C(v, z))^y
    mpz_class numerator = 0;
    for (std::uint64_t i = 0; i < x; ++i) {
        const mpz_class hits = binom(v - w + i, z);
        if (hits == 0) continue;
        mpz_class term = binom(w, i) * binom(w - i - 1, w - x) * power(hits, y);
        if ((x - i + 1) % 2 == 0)
            numerator += term;
        else
            numerator -= term;
    }
    mpq_class result(numerator, power(binom(v, z), y));
    result.canonicalize();
    return result;
}

double coupon_cdf(std::uint64_t v, std::uint64_t w, std::uint64_t z, std::uint64_t y, std::uint64_t x) {
    check_cdf_domain(v, w, z, y, x);
    if (x == 0) return 0.0;
    if (x == w + 1) return 1.0;

    // Hypergeometric law of new W hits for a pick when c of W are covered:
    // Pr[j] = C(w-c, j) C(v-w+c, z-j) / C(v, z). Built by the ratio recurrence
    // and normalized, so each row carries only rounding from z products.
    struct Pmf {
        std::uint64_t lo{0};
        std::vector<double> p;
    };
    std::vector<Pmf> step(w + 1);
    for (std::uint64_t c = 0; c <= w; ++c) {
        const std::uint64_t fresh = w - c;      // uncovered W
        const std::uint64_t other = v - fresh;  // everything else
        const std::uint64_t lo = z > other ? z - other : 0;
        const std::uint64_t hi = std::min(z, fresh);
        std::vector<double> pmf(hi - lo + 1);
        std::vector<double> logs(pmf.size());
        for (std::uint64_t j = lo; j <= hi; ++j)
            logs[j - lo] = log_binomial(fresh, j) + log_binomial(other, z - j);
        const double top = *std::max_element(logs.begin(), logs.end());
        double total = 0.0;
        for (std::size_t i = 0; i < pmf.size(); ++i) total += pmf[i] = std::exp(logs[i] - top);
        for (double& p : pmf) p /= total;
        step[c] = Pmf{lo, std::move(pmf)};
    }

    std::vector<double> dist(w + 1, 0.0), next(w + 1, 0.0);
    dist[0] = 1.0;
    for (std::uint64_t person = 0; person < y; ++person) {
        std::fill(next.begin(), next.end(), 0.0);
        for (std::uint64_t c = 0; c <= w; ++c) {
            if (dist[c] == 0.0) continue;
            const Pmf& pmf = step[c];
            for (std::size_t i = 0; i < pmf.p.size(); ++i) next[c + pmf.lo + i] += dist[c] * pmf.p[i];
        }
        std::swap(dist, next);
    }
    double below = 0.0;
    for (std::uint64_t c = 0; c < x; ++c) below += dist[c];
    return std::min(below, 1.0);
}

double prob_no_decode(const SamplingModel& model, CdfMethod method) {
    model.validate();
    if (model.gamma_n > model.n) return 1.0;
    const std::uint64_t hidden = model.hidden_count();
    // t < gamma_n - (n - hidden)
    const std::uint64_t revealed_upfront = model.n - hidden;
    if (model.gamma_n <= revealed_upfront) return 0.0;
    const std::uint64_t x = model.gamma_n - revealed_upfront;
    if (method == CdfMethod::Exact)
        return coupon_cdf_exact(model.n, hidden, model.s, model.m, x).get_d();
    return coupon_cdf(model.n, hidden, model.s, model.m, x);
}

std::string to_string(EpsilonRegime regime) {
    return regime == EpsilonRegime::NoDecode ? "no_decode" : "withholding";
}

EpsilonDetails epsilon_details(const SamplingModel& model) {
    model.validate();
    if (model.beta != 1.0) throw DomainError("the simplified adversarial probability assumes beta = 1");
    EpsilonDetails out;
    out.x_star = expected_distinct(model.n, model.m, model.s);
    if (model.gamma_n > model.n || out.x_star < static_cast<double>(model.gamma_n)) {
        out.regime = EpsilonRegime::NoDecode;
        out.x_hat = round_count(out.x_star);
        out.epsilon = 1.0;
        return out;
    }
    out.regime = EpsilonRegime::Withholding;
    out.x_hat = round_count(out.x_star);
    out.withheld = out.x_hat - model.gamma_n + 1;
    const std::uint64_t revealed = model.gamma_n - 1;
    if (revealed < model.s) {
        out.miss_ratio = 0.0;
        out.epsilon = 0.0;
        return out;
    }
    const double log_ratio = log_binomial_ratio(revealed, out.x_hat, model.s);
    out.miss_ratio = std::exp(log_ratio);
    // 1 - (1 - r)^m without cancellation
    out.epsilon = -std::expm1(static_cast<double>(model.m) * std::log1p(-out.miss_ratio));
    return out;
}

double epsilon_simplified(const SamplingModel& model) { return epsilon_details(model).epsilon; }

double min_samples_lower_bound(double n, double gamma) {
    if (!(n > 0.0)) throw DomainError("n must be positive");
    if (!(gamma > 0.0 && gamma < 1.0)) throw DomainError("gamma must lie in (0, 1)");
    return -n * std::log1p(-gamma);
}

double approx_samples_large_m(double rate_component, double m, double epsilon_target) {
    if (!(rate_component > 0.0 && rate_component < 1.0)) throw DomainError("R' must lie in (0, 1)");
    if (!(m >= 2.0)) throw DomainError("the large-m approximation needs m >= 2");
    if (!(epsilon_target > 0.0 && epsilon_target <= 1.0)) throw DomainError("epsilon must lie in (0, 1]");
    const double gamma = rate_component * (2.0 - rate_component);
    return (std::log(m) - std::log(epsilon_target)) / -std::log(gamma);
}

}  // namespace da_guard::analysis
