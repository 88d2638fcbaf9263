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

#include "da_guard/mc_sampler.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <stdexcept>
#include <thread>

namespace da_guard::mc {

namespace {

constexpr double kZ95 = 1.959963984540054;

// Bumps an epoch counter, clearing the stamp table on wrap-around.
std::uint32_t next_epoch(std::uint32_t& epoch, std::vector<std::uint32_t>& stamps) {
    if (++epoch == 0) {
        std::fill(stamps.begin(), stamps.end(), 0);
        epoch = 1;
    }
    return epoch;
}

// Moves a uniform random d-subset of `items` to its front.
void shuffle_prefix(std::span<Index> items, std::uint64_t d, rng::Xoshiro256StarStar& rng) {
    for (std::uint64_t i = 0; i < d; ++i) {
        const std::uint64_t j = i + rng.below(items.size() - i);
        std::swap(items[i], items[j]);
    }
}

}  // namespace

EpsilonEstimate EpsilonEstimate::from_counts(std::uint64_t successes, std::uint64_t trials) {
    if (trials == 0) throw std::invalid_argument("at least one trial is required");
    if (successes > trials) throw std::invalid_argument("successes exceed trials");
    EpsilonEstimate e;
    e.trials = trials;
    e.successes = successes;
    const double n = static_cast<double>(trials);
    const double p = static_cast<double>(successes) / n;
    e.point = p;
    const double z2 = kZ95 * kZ95;
    const double denom = 1.0 + z2 / n;
    const double centre = (p + z2 / (2.0 * n)) / denom;
    const double half = kZ95 * std::sqrt(p * (1.0 - p) / n + z2 / (4.0 * n * n)) / denom;
    e.ci95_low = std::clamp(centre - half, 0.0, p);
    e.ci95_high = std::clamp(centre + half, p, 1.0);
    return e;
}

double binomial_sigma(double p, std::uint64_t trials) {
    return std::sqrt(p * (1.0 - p) / static_cast<double>(trials));
}

IndexSampler::IndexSampler(std::uint64_t n) : n_(n) {
    if (n == 0 || n > std::numeric_limits<Index>::max()) throw std::invalid_argument("index range out of bounds");
}

void IndexSampler::draw(rng::Xoshiro256StarStar& rng, std::uint64_t s, std::span<Index> out) {
    if (s > n_ || out.size() < s) throw std::invalid_argument("cannot draw more distinct indices than exist");
    if (s * 64 > n_) {
        if (perm_.empty()) {
            perm_.resize(n_);
            std::iota(perm_.begin(), perm_.end(), Index{0});
        }
        swaps_.resize(s);
        for (std::uint64_t i = 0; i < s; ++i) {
            const std::uint64_t j = i + rng.below(n_ - i);
            swaps_[i] = j;
            std::swap(perm_[i], perm_[j]);
            out[i] = perm_[i];
        }
        // Undo in reverse so the table is the identity again.
        for (std::uint64_t i = s; i > 0; --i) std::swap(perm_[i - 1], perm_[swaps_[i - 1]]);
        return;
    }
    if (stamp_.empty()) stamp_.assign(n_, 0);
    const std::uint32_t mark = next_epoch(epoch_, stamp_);
    for (std::uint64_t i = 0; i < s; ++i) {
        Index v;
        do {
            v = static_cast<Index>(rng.below(n_));
        } while (stamp_[v] == mark);
        stamp_[v] = mark;
        out[i] = v;
    }
}

std::vector<Index> adversary_withhold(std::span<const Index> requested, std::uint64_t gamma_n,
                                      rng::Xoshiro256StarStar& rng) {
    if (requested.size() < gamma_n)
        throw std::invalid_argument("withholding only applies when at least gamma_n symbols are requested");
    std::vector<Index> pool(requested.begin(), requested.end());
    const std::uint64_t d = pool.size() - gamma_n + 1;
    shuffle_prefix(pool, d, rng);
    pool.resize(d);
    return pool;
}

TrialRunner::TrialRunner(const analysis::SamplingModel& model)
    : model_(model), sampler_(model.n), requests_(model.m * model.s), seen_(model.n, 0), hidden_(model.n, 0) {
    model_.validate();
    if (model_.beta != 1.0) throw std::invalid_argument("the sampling game is simulated with beta = 1");
    distinct_.reserve(std::min<std::uint64_t>(model.n, model.m * model.s));
}

TrialOutcome TrialRunner::run(rng::Xoshiro256StarStar& rng) {
    const std::uint64_t m = model_.m, s = model_.s;
    TrialOutcome out;

    if (++epoch_ == 0) {
        std::fill(seen_.begin(), seen_.end(), 0);
        std::fill(hidden_.begin(), hidden_.end(), 0);
        epoch_ = 1;
    }
    const std::uint32_t mark = epoch_;
    distinct_.clear();
    for (std::uint64_t node = 0; node < m; ++node) {
        std::span<Index> mine(requests_.data() + node * s, s);
        sampler_.draw(rng, s, mine);
        for (Index v : mine) {
            if (seen_[v] != mark) {
                seen_[v] = mark;
                distinct_.push_back(v);
            }
        }
    }
    out.distinct = distinct_.size();

    // Too few distinct requests to decode: answer everything.
    if (out.distinct < model_.gamma_n) {
        out.adversary_wins = true;
        return out;
    }

    out.withheld = out.distinct - model_.gamma_n + 1;
    shuffle_prefix(distinct_, out.withheld, rng);
    for (std::uint64_t i = 0; i < out.withheld; ++i) hidden_[distinct_[i]] = mark;

    for (std::uint64_t node = 0; node < m; ++node) {
        const Index* mine = requests_.data() + node * s;
        bool blocked = false;
        for (std::uint64_t i = 0; i < s; ++i) {
            if (hidden_[mine[i]] == mark) {
                blocked = true;
                break;
            }
        }
        if (!blocked) {
            out.adversary_wins = true;
            break;
        }
    }
    return out;
}

EpsilonEstimate run_trials(const TrialConfig& config, unsigned threads) {
    if (config.trials == 0) throw std::invalid_argument("at least one trial is required");
    config.model.validate();
    threads = std::max(1u, threads);
    threads = static_cast<unsigned>(std::min<std::uint64_t>(threads, config.trials));

    std::vector<std::uint64_t> wins(threads, 0);
    auto work = [&](unsigned worker) {
        const std::uint64_t begin = config.trials * worker / threads;
        const std::uint64_t end = config.trials * (worker + 1) / threads;
        TrialRunner runner(config.model);
        std::uint64_t local = 0;
        for (std::uint64_t t = begin; t < end; ++t) {
            rng::Xoshiro256StarStar rng(rng::stream_seed(config.master_seed, t));
            if (runner.run(rng).adversary_wins) ++local;
        }
        wins[worker] = local;
    };

    if (threads == 1) {
        work(0);
    } else {
        std::vector<std::thread> pool;
        pool.reserve(threads);
        for (unsigned w = 0; w < threads; ++w) pool.emplace_back(work, w);
        for (auto& t : pool) t.join();
    }
    const std::uint64_t total = std::accumulate(wins.begin(), wins.end(), std::uint64_t{0});
    return EpsilonEstimate::from_counts(total, config.trials);
}

}  // namespace da_guard::mc
