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

#include "da_guard/optimizer.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <ostream>
#include <string>
#include <thread>

#include "da_guard/analysis.hpp"
#include "da_guard/merkle.hpp"

namespace da_guard::optimizer {

namespace {

double epsilon_at(std::uint64_t n, std::uint64_t gamma_n, std::uint64_t m, std::uint64_t s) {
    return analysis::epsilon_simplified({.n = n, .gamma_n = gamma_n, .m = m, .s = s});
}

const char* kCsvHeader = "q_bits,k_prime,n_prime,rate,s_min,ell_D_bits,ell_D_kB";

void write_point(std::ostream& out, const SweepPoint& p) {
    out << p.q_bits << ',' << p.k_prime << ',' << p.n_prime << ',' << format_double(p.rate()) << ',' << p.s_min
        << ',' << p.ell_d_bits << ',' << format_double(p.ell_d_kb());
}

}  // namespace

std::string format_double(double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

void ProtocolConfig::validate() const {
    if (block_bits == 0 || digest_bits == 0 || q_bits == 0 || m == 0)
        throw std::invalid_argument("block_bits, digest_bits, q_bits and m must be positive");
    if (!(epsilon_target > 0.0 && epsilon_target < 1.0)) throw std::invalid_argument("epsilon target must lie in (0, 1)");
}

NoFeasibleS::NoFeasibleS(double epsilon_at_n, std::uint64_t n)
    : std::runtime_error("no sample count reaches the target; epsilon(s = " + std::to_string(n) +
                         ") = " + format_double(epsilon_at_n)),
      epsilon_at_n_(epsilon_at_n) {}

std::uint64_t download_bits(const CodeSpec& spec, std::uint64_t s, std::uint64_t digest_bits) {
    const std::uint64_t np = spec.n_prime();
    return 2 * digest_bits * np + s * (spec.q_bits() + digest_bits * commitment::ceil_log2(np));
}

std::uint64_t min_samples(std::uint64_t n, std::uint64_t gamma_n, std::uint64_t m, double epsilon_target) {
    if (n == 0 || m == 0) throw analysis::DomainError("n and m must be positive");
    if (epsilon_target >= 1.0) return 1;
    auto meets = [&](std::uint64_t s) { return epsilon_at(n, gamma_n, m, s) <= epsilon_target; };

    // epsilon is nonincreasing in s: bracket, then bisect.
    std::uint64_t hi = 1;
    while (!meets(hi)) {
        if (hi == n) throw NoFeasibleS(epsilon_at(n, gamma_n, m, n), n);
        hi = std::min(n, hi * 2);
    }
    std::uint64_t lo = hi / 2;  // fails, or 0
    while (hi - lo > 1) {
        const std::uint64_t mid = lo + (hi - lo) / 2;
        (meets(mid) ? hi : lo) = mid;
    }
    return hi;
}

SweepPoint evaluate_point(const ProtocolConfig& config, std::uint64_t n_prime) {
    const CodeSpec spec = product::make_code_spec(config.q_bits, config.block_bits, n_prime);
    SweepPoint p;
    p.q_bits = config.q_bits;
    p.k_prime = spec.k_prime();
    p.n_prime = n_prime;
    p.s_min = min_samples(spec.n(), spec.decode_threshold(), config.m, config.epsilon_target);
    p.ell_d_bits = download_bits(spec, p.s_min, config.digest_bits);
    return p;
}

Sweep sweep_rates(const ProtocolConfig& config, unsigned threads) {
    config.validate();
    const std::uint64_t k = product::component_dimension(config.q_bits, config.block_bits);
    const std::uint64_t last = config.n_prime_max ? config.n_prime_max : 8 * k;
    if (last <= k) throw std::invalid_argument("n' range is empty");

    Sweep sweep;
    sweep.points.resize(last - k);
    threads = static_cast<unsigned>(std::clamp<std::uint64_t>(threads, 1, sweep.points.size()));
    auto work = [&](unsigned worker) {
        for (std::size_t i = worker; i < sweep.points.size(); i += threads)
            sweep.points[i] = evaluate_point(config, k + 1 + i);
    };
    if (threads == 1) {
        work(0);
    } else {
        std::vector<std::jthread> pool;
        for (unsigned w = 0; w < threads; ++w) pool.emplace_back(work, w);
    }

    for (std::size_t i = 1; i < sweep.points.size(); ++i)
        if (sweep.points[i].ell_d_bits < sweep.points[sweep.argmin].ell_d_bits) sweep.argmin = i;
    return sweep;
}

std::vector<unsigned> default_q_list() {
    std::vector<unsigned> q;
    for (unsigned b = 16; b <= 8192; b *= 2) q.push_back(b);
    return q;
}

std::vector<OptimRow> table_one(const ProtocolConfig& config, std::span<const unsigned> q_list, unsigned threads) {
    std::vector<OptimRow> rows;
    rows.reserve(q_list.size());
    for (unsigned q : q_list) {
        ProtocolConfig c = config;
        c.q_bits = q;
        const Sweep sweep = sweep_rates(c, threads);
        const std::uint64_t k = sweep.best().k_prime;
        rows.push_back({sweep.best(), evaluate_point(c, 2 * k)});
    }
    return rows;
}

std::uint64_t n_prime_for_rate(std::uint64_t k_prime, double rate_component) {
    if (!(rate_component > 0.0 && rate_component < 1.0)) throw std::invalid_argument("component rate must lie in (0, 1)");
    // The slack keeps exact ratios such as 1/0.25 from rounding up.
    const auto np = static_cast<std::uint64_t>(std::ceil(static_cast<double>(k_prime) / rate_component - 1e-9));
    return std::max(np, k_prime + 1);
}

std::vector<CurvePoint> samples_vs_m_curve(double rate_component, unsigned q_bits, std::uint64_t block_bits,
                                           double epsilon_target, std::span<const std::uint64_t> m_list) {
    const std::uint64_t k = product::component_dimension(q_bits, block_bits);
    const CodeSpec spec = product::make_code_spec(q_bits, block_bits, n_prime_for_rate(k, rate_component));
    std::vector<CurvePoint> out;
    out.reserve(m_list.size());
    for (std::uint64_t m : m_list) {
        CurvePoint p;
        p.m = m;
        p.n_prime = spec.n_prime();
        p.s_min = min_samples(spec.n(), spec.decode_threshold(), m, epsilon_target);
        p.s_approx = m >= 2 ? analysis::approx_samples_large_m(spec.rate_component(), static_cast<double>(m), epsilon_target)
                            : std::nan("");
        out.push_back(p);
    }
    return out;
}

void write_sweep_csv(std::ostream& out, std::span<const SweepPoint> points) {
    out << kCsvHeader << '\n';
    for (const auto& p : points) {
        write_point(out, p);
        out << '\n';
    }
}

void write_table_csv(std::ostream& out, std::span<const OptimRow> rows) {
    out << kCsvHeader << ",baseline_n_prime,baseline_s,baseline_ell_D_bits,baseline_ell_D_kB\n";
    for (const auto& r : rows) {
        write_point(out, r.optimum);
        out << ',' << r.baseline.n_prime << ',' << r.baseline.s_min << ',' << r.baseline.ell_d_bits << ','
            << format_double(r.baseline.ell_d_kb()) << '\n';
    }
}

void write_curve_csv(std::ostream& out, std::span<const CurvePoint> points) {
    out << "m,n_prime,s_min,s_approx\n";
    for (const auto& p : points)
        out << p.m << ',' << p.n_prime << ',' << p.s_min << ',' << format_double(p.s_approx) << '\n';
}

nlohmann::json to_json(const SweepPoint& p) {
    return {{"q_bits", p.q_bits},   {"k_prime", p.k_prime},       {"n_prime", p.n_prime},
            {"rate", p.rate()},     {"s_min", p.s_min},           {"ell_D_bits", p.ell_d_bits},
            {"ell_D_kB", p.ell_d_kb()}};
}

nlohmann::json to_json(const Sweep& sweep) {
    nlohmann::json points = nlohmann::json::array();
    for (const auto& p : sweep.points) points.push_back(to_json(p));
    return {{"schema_version", kSchemaVersion}, {"argmin", to_json(sweep.best())}, {"points", points}};
}

nlohmann::json to_json(std::span<const OptimRow> rows) {
    nlohmann::json out = nlohmann::json::array();
    for (const auto& r : rows) out.push_back({{"optimum", to_json(r.optimum)}, {"baseline", to_json(r.baseline)}});
    return {{"schema_version", kSchemaVersion}, {"rows", out}};
}

nlohmann::json to_json(std::span<const CurvePoint> points) {
    nlohmann::json out = nlohmann::json::array();
    for (const auto& p : points) {
        nlohmann::json approx = std::isnan(p.s_approx) ? nlohmann::json(nullptr) : nlohmann::json(p.s_approx);
        out.push_back({{"m", p.m}, {"n_prime", p.n_prime}, {"s_min", p.s_min}, {"s_approx", approx}});
    }
    return {{"schema_version", kSchemaVersion}, {"points", out}};
}

}  // namespace da_guard::optimizer
