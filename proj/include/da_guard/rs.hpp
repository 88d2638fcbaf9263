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

#include <cstddef>
#include <optional>
#include <span>
#include <vector>

#include "da_guard/gf.hpp"

namespace da_guard::galois {

/// Reed-Solomon code in evaluation form: a message g_0..g_{k-1} is the
/// coefficient list of g(x), and the codeword is (g(a_1), ..., g(a_n)).
///
/// The encoding is not systematic. Any k unerased positions determine the
/// message, which is recovered by Lagrange interpolation in O(k^2).
class RsCode {
  public:
    /// Evaluation points default to 0, 1, ..., n-1.
    RsCode(const Field& field, std::size_t n, std::size_t k);
    RsCode(const Field& field, std::size_t k, std::vector<Symbol> eval_points);

    const Field& field() const noexcept { return *field_; }
    std::size_t n() const noexcept { return points_.size(); }
    std::size_t k() const noexcept { return k_; }
    std::size_t max_erasures() const noexcept { return n() - k_; }
    std::span<const Symbol> eval_points() const noexcept { return points_; }

    std::vector<Symbol> encode(std::span<const Symbol> data) const;

    /// Message from a received word with absent slots as erasures.
    /// Returns nullopt when fewer than k symbols are present.
    std::optional<std::vector<Symbol>> erasure_decode(std::span<const std::optional<Symbol>> received) const;

    /// Coefficients of the unique degree < k polynomial through exactly k
    /// (position, value) pairs; positions must be distinct.
    std::vector<Symbol> interpolate(std::span<const std::size_t> positions, std::span<const Symbol> values) const;

    /// g(a_position) for a coefficient vector of length k.
    Symbol evaluate(std::span<const Symbol> coefficients, std::size_t position) const;

  private:
    const Field* field_;
    std::size_t k_;
    std::vector<Symbol> points_;
};

}  // namespace da_guard::galois
