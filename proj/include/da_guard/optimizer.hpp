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
#include <iosfwd>
#include <span>
#include <stdexcept>
#include <vector>

#include <json.hpp>

#include "da_guard/product_code.hpp"

namespace da_guard::optimizer {

using product::CodeSpec;

inline constexpr std::uint64_t kDefaultBlockBits = 600000;
inline constexpr std::uint64_t kDefaultDigestBits = 256;
inline constexpr double kBitsPerKilobyte = 8000.0;
inline constexpr int kSchemaVersion = 1;

struct ProtocolConfig {
    std::uint64_t block_bits{kDefaultBlockBits};
    std::uint64_t digest_bits{kDefaultDigestBits};
    unsigned q_bits{256};
    std::uint64_t m{1000};
    double epsilon_target{0.01};
    /// Largest n' swept, 0 for 8k'.
    std::uint64_t n_prime_max{0};

    /// Throws std::invalid_argument unless every field is positive and the
    /// target lies in (0, 1).
    void validate() const;
};

/// Raised by min_samples when even s = n misses the target.
class NoFeasibleS : public std::runtime_error {
  public:
    NoFeasibleS(double epsilon_at_n, std::uint64_t n);
    double epsilon_at_n() const noexcept { return epsilon_at_n_; }

  private:
    double epsilon_at_n_;
};

/// Header plus s samples: 2 digest_bits n' + s (q_bits + digest_bits ceil(log2 n')).
std::uint64_t download_bits(const CodeSpec& spec, std::uint64_t s, std::uint64_t digest_bits = kDefaultDigestBits);

inline double to_kilobytes(std::uint64_t bits) { return static_cast<double>(bits) / kBitsPerKilobyte; }

/// Smallest s with epsilon_simplified <= target. A target >= 1 gives 1.
std::uint64_t min_samples(std::uint64_t n, std::uint64_t gamma_n, std::uint64_t m, double epsilon_target);

struct SweepPoint {
    unsigned q_bits{0};
    std::uint64_t k_prime{0};
    std::uint64_t n_prime{0};
    std::uint64_t s_min{0};
    std::uint64_t ell_d_bits{0};

    double rate() const { return static_cast<double>(k_prime) / static_cast<double>(n_prime); }
    double ell_d_kb() const { return to_kilobytes(ell_d_bits); }
    friend bool operator==(const SweepPoint&, const SweepPoint&) = default;
};

/// Optimum for a code spec: s_min and the resulting download.
SweepPoint evaluate_point(const ProtocolConfig& config, std::uint64_t n_prime);

struct Sweep {
    std::vector<SweepPoint> points;  // ascending n'
    std::size_t argmin{0};           // smallest ell_D, ties to the smaller n'

    const SweepPoint& best() const { return points.at(argmin); }
};

/// Every integer n' in k'+1 .. n_prime_max. Points are independent and may be
/// evaluated on `threads` workers; the result does not depend on it.
Sweep sweep_rates(const ProtocolConfig& config, unsigned threads = 1);

struct OptimRow {
    SweepPoint optimum;
    SweepPoint baseline;  // n' = 2k'
};

/// One row per field size; config.q_bits is ignored.
std::vector<OptimRow> table_one(const ProtocolConfig& config, std::span<const unsigned> q_list, unsigned threads = 1);

/// Field sizes log2 q = 16, 32, ..., 8192.
std::vector<unsigned> default_q_list();

struct CurvePoint {
    std::uint64_t m{0};
    std::uint64_t n_prime{0};
    std::uint64_t s_min{0};
    double s_approx{0.0};
};

/// n' for a target component rate: the smallest n' with k'/n' <= R'.
std::uint64_t n_prime_for_rate(std::uint64_t k_prime, double rate_component);

/// s_min against the number of light nodes at a fixed component rate, next to
/// the large-m approximation.
std::vector<CurvePoint> samples_vs_m_curve(double rate_component, unsigned q_bits, std::uint64_t block_bits,
                                           double epsilon_target, std::span<const std::uint64_t> m_list);

// Emitters. CSV columns: q_bits,k_prime,n_prime,rate,s_min,ell_D_bits,ell_D_kB
void write_sweep_csv(std::ostream& out, std::span<const SweepPoint> points);
void write_table_csv(std::ostream& out, std::span<const OptimRow> rows);
void write_curve_csv(std::ostream& out, std::span<const CurvePoint> points);
nlohmann::json to_json(const SweepPoint& point);
nlohmann::json to_json(const Sweep& sweep);
nlohmann::json to_json(std::span<const OptimRow> rows);
nlohmann::json to_json(std::span<const CurvePoint> points);

/// printf("%.17g") of a double.
std::string format_double(double v);

}  // namespace da_guard::optimizer
