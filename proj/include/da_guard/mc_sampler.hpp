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

#include <cstdint>
#include <span>
#include <vector>

#include "da_guard/analysis.hpp"
#include "da_guard/rng.hpp"

namespace da_guard::mc {

using Index = std::uint32_t;

struct TrialConfig {
    analysis::SamplingModel model;  // beta must be 1
    std::uint64_t trials{1};
    std::uint64_t master_seed{1};
};

/// Adversary wins out of trials, with a 95% Wilson score interval.
struct EpsilonEstimate {
    std::uint64_t trials{0};
    std::uint64_t successes{0};
    double point{0.0};
    double ci95_low{0.0};
    double ci95_high{0.0};

    static EpsilonEstimate from_counts(std::uint64_t successes, std::uint64_t trials);
    friend bool operator==(const EpsilonEstimate&, const EpsilonEstimate&) = default;
};

/// Binomial standard deviation of a proportion p over `trials`.
double binomial_sigma(double p, std::uint64_t trials);

/// Draws s distinct indices out of [0, n): partial Fisher-Yates when
/// s/n > 1/64, rejection against a stamp table otherwise.
class IndexSampler {
  public:
    explicit IndexSampler(std::uint64_t n);

    std::uint64_t n() const noexcept { return n_; }
    void draw(rng::Xoshiro256StarStar& rng, std::uint64_t s, std::span<Index> out);

  private:
    std::uint64_t n_;
    std::vector<Index> perm_;
    std::vector<std::uint64_t> swaps_;
    std::vector<std::uint32_t> stamp_;
    std::uint32_t epoch_{0};
};

/// Minimal withholding: a uniformly random subset of the requested indices of
/// size |J| - gamma_n + 1, leaving exactly gamma_n - 1 revealed. Throws
/// std::invalid_argument when |J| < gamma_n.
std::vector<Index> adversary_withhold(std::span<const Index> requested, std::uint64_t gamma_n,
                                      rng::Xoshiro256StarStar& rng);

/// One play of the sampling game.
struct TrialOutcome {
    std::uint64_t distinct{0};  // |J|
    std::uint64_t withheld{0};  // |D|, 0 when every query is answered
    bool adversary_wins{false};
};

/// Reusable scratch for a single thread.
class TrialRunner {
  public:
    explicit TrialRunner(const analysis::SamplingModel& model);
    TrialOutcome run(rng::Xoshiro256StarStar& rng);

    /// Requests of the last run, node-major (m rows of s indices).
    std::span<const Index> requests() const noexcept { return requests_; }

  private:
    analysis::SamplingModel model_;
    IndexSampler sampler_;
    std::vector<Index> requests_;
    std::vector<Index> distinct_;
    std::vector<std::uint32_t> seen_;
    std::vector<std::uint32_t> hidden_;
    std::uint32_t epoch_{0};
};

/// Plays `trials` independent games. Trial i uses the stream
/// stream_seed(master_seed, i), so the estimate does not depend on `threads`.
EpsilonEstimate run_trials(const TrialConfig& config, unsigned threads = 1);

}  // namespace da_guard::mc
