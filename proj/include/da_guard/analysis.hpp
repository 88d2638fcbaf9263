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

#pragma once

#include <gmpxx.h>

#include <cstdint>
#include <stdexcept>
#include <string>

namespace da_guard::analysis {

/// Raised for arguments outside an operation's domain.
class DomainError : public std::invalid_argument {
  public:
    using std::invalid_argument::invalid_argument;
};

/// Natural logarithm of a probability.
struct LogProb {
    double value{0.0};

    static LogProb from_probability(double p);
    double probability() const;
    /// log(1 - p), accurate when p is tiny.
    LogProb complement() const;
    LogProb operator*(LogProb other) const { return {value + other.value}; }
    LogProb pow(double exponent) const { return {value * exponent}; }
};

/// The sampling game: m light nodes each ask s distinct symbols out of n;
/// gamma_n known symbols always suffice to decode; a fraction beta of the
/// block is initially hidden.
struct SamplingModel {
    std::uint64_t n{0};
    std::uint64_t gamma_n{0};
    std::uint64_t m{1};
    std::uint64_t s{1};
    double beta{1.0};

    /// Throws DomainError unless 0 < s <= n, 1 <= m and 0 <= beta <= 1.
    /// gamma_n may exceed n (decoding is then impossible).
    void validate() const;
    /// beta * n rounded to the nearest integer (half away from zero).
    std::uint64_t hidden_count() const;
};

/// log C(a, b); -inf when b > a.
double log_binomial(std::uint64_t a, std::uint64_t b);

/// log(C(a, s) / C(b, s)) for s <= a <= b.
double log_binomial_ratio(std::uint64_t a, std::uint64_t b, std::uint64_t s);

/// Expected distinct indices in the union of m uniform s-subsets of n:
/// n (1 - (1 - s/n)^m).
double expected_distinct(std::uint64_t n, std::uint64_t m, std::uint64_t s);

/// Round half away from zero.
std::uint64_t round_count(double x);

// ---------------------------------------------------------------------------
// Coupon-collector CDF. y people each pick z distinct indices out of v; W is
// a fixed subset of size w; t = |W ∩ union|. Both routes return Pr[t < x]
// for 0 <= x <= w + 1 (x = w + 1 gives 1).
// ---------------------------------------------------------------------------

/// Largest v accepted by the exact route.
inline constexpr std::uint64_t kExactCdfMaxV = 2000;

/// Inclusion-exclusion closed form, evaluated with exact rationals.
/// Throws DomainError when v > kExactCdfMaxV.
mpq_class coupon_cdf_exact(std::uint64_t v, std::uint64_t w, std::uint64_t z, std::uint64_t y, std::uint64_t x);

/// Floating route: forward recursion over the number of covered W indices
/// (each pick adds a hypergeometric number of new ones). Positive terms
/// only, so no cancellation; runs in O(y * w * min(z, w)).
double coupon_cdf(std::uint64_t v, std::uint64_t w, std::uint64_t z, std::uint64_t y, std::uint64_t x);

enum class CdfMethod { Floating, Exact };

/// Pr[NoDec]: known symbols (1 - beta) n + t stay below gamma_n, i.e.
/// Pr[t < gamma_n + beta n - n] with t over the hidden set.
double prob_no_decode(const SamplingModel& model, CdfMethod method = CdfMethod::Floating);

enum class EpsilonRegime { NoDecode, Withholding };

struct EpsilonDetails {
    double x_star{0.0};           // expected distinct requested symbols
    std::uint64_t x_hat{0};       // x_star rounded
    std::uint64_t withheld{0};    // x_hat - gamma_n + 1, 0 in the NoDecode regime
    double miss_ratio{0.0};       // C(gamma_n - 1, s) / C(x_hat, s)
    double epsilon{1.0};
    EpsilonRegime regime{EpsilonRegime::NoDecode};
};

std::string to_string(EpsilonRegime regime);

/// Adversarial success probability with the union size fixed at its mean:
///   1                                          if x* < gamma_n
///   1 - (1 - C(gamma_n - 1, s) / C(x^, s))^m   otherwise
/// with x^ = round(x*) and C(a, b) = 0 for a < b. Requires beta = 1.
EpsilonDetails epsilon_details(const SamplingModel& model);
double epsilon_simplified(const SamplingModel& model);

/// n ln(1 / (1 - gamma)): below this m*s the full nodes cannot expect to decode.
double min_samples_lower_bound(double n, double gamma);

/// Large-m sample count (ln m + ln(1/eps)) / ln(1 / (R'(2 - R'))).
double approx_samples_large_m(double rate_component, double m, double epsilon_target);

}  // namespace da_guard::analysis
