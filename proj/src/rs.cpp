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

#include "da_guard/rs.hpp"

#include <numeric>
#include <stdexcept>
#include <string>
#include <unordered_set>

namespace da_guard::galois {

namespace {

std::vector<Symbol> default_points(const Field& field, std::size_t n) {
    if (n > field.order())
        throw std::invalid_argument("code length " + std::to_string(n) + " exceeds field order " +
                                    std::to_string(field.order()));
    std::vector<Symbol> pts(n);
    std::iota(pts.begin(), pts.end(), Symbol{0});
    return pts;
}

}  // namespace

RsCode::RsCode(const Field& field, std::size_t n, std::size_t k) : RsCode(field, k, default_points(field, n)) {}

RsCode::RsCode(const Field& field, std::size_t k, std::vector<Symbol> eval_points)
    : field_(&field), k_(k), points_(std::move(eval_points)) {
    const std::size_t n = points_.size();
    if (k_ < 1 || k_ >= n) throw std::invalid_argument("RS code requires 1 <= k < n");
    if (n > field.order()) throw std::invalid_argument("RS code length exceeds field order");
    std::unordered_set<Symbol> seen;
    for (Symbol p : points_) {
        if (!field.contains(p)) throw std::invalid_argument("evaluation point outside the field");
        if (!seen.insert(p).second) throw std::invalid_argument("evaluation points must be distinct");
    }
}

Symbol RsCode::evaluate(std::span<const Symbol> coefficients, std::size_t position) const {
    const Symbol x = points_.at(position);
    Symbol acc = 0;
    // Horner
    for (auto it = coefficients.rbegin(); it != coefficients.rend(); ++it) acc = Field::add(field_->mul(acc, x), *it);
    return acc;
}

std::vector<Symbol> RsCode::encode(std::span<const Symbol> data) const {
    if (data.size() != k_)
        throw std::invalid_argument("RS encode expects " + std::to_string(k_) + " symbols, got " +
                                    std::to_string(data.size()));
    std::vector<Symbol> out(n());
    for (std::size_t i = 0; i < n(); ++i) out[i] = evaluate(data, i);
    return out;
}

std::vector<Symbol> RsCode::interpolate(std::span<const std::size_t> positions, std::span<const Symbol> values) const {
    if (positions.size() != k_ || values.size() != k_)
        throw std::invalid_argument("interpolation needs exactly k points");
    const Field& f = *field_;

    // master(x) = prod_j (x - x_j), degree k, low-order coefficient first
    std::vector<Symbol> master(k_ + 1, 0);
    master[0] = 1;
    for (std::size_t j = 0; j < k_; ++j) {
        const Symbol xj = points_.at(positions[j]);
        for (std::size_t d = j + 1; d > 0; --d) master[d] = Field::add(master[d - 1], f.mul(master[d], xj));
        master[0] = f.mul(master[0], xj);
    }

    std::vector<Symbol> coeffs(k_, 0);
    std::vector<Symbol> basis(k_);
    for (std::size_t j = 0; j < k_; ++j) {
        const Symbol xj = points_[positions[j]];
        // basis = master / (x - x_j) by synthetic division from the top
        Symbol carry = 0;
        for (std::size_t d = k_; d > 0; --d) {
            carry = Field::add(master[d], f.mul(carry, xj));
            basis[d - 1] = carry;
        }
        Symbol denom = 1;
        for (std::size_t i = 0; i < k_; ++i) {
            if (i == j) continue;
            const Symbol diff = Field::sub(xj, points_[positions[i]]);
            if (diff == 0) throw std::invalid_argument("interpolation positions must be distinct");
            denom = f.mul(denom, diff);
        }
        const Symbol scale = f.div(values[j], denom);
        if (scale == 0) continue;
        for (std::size_t d = 0; d < k_; ++d) coeffs[d] = Field::add(coeffs[d], f.mul(scale, basis[d]));
    }
    return coeffs;
}

std::optional<std::vector<Symbol>> RsCode::erasure_decode(std::span<const std::optional<Symbol>> received) const {
    if (received.size() != n())
        throw std::invalid_argument("RS decode expects " + std::to_string(n()) + " slots, got " +
                                    std::to_string(received.size()));
    std::vector<std::size_t> positions;
    std::vector<Symbol> values;
    positions.reserve(k_);
    values.reserve(k_);
    for (std::size_t i = 0; i < received.size() && positions.size() < k_; ++i) {
        if (received[i]) {
            positions.push_back(i);
            values.push_back(*received[i]);
        }
    }
    if (positions.size() < k_) return std::nullopt;
    return interpolate(positions, values);
}

}  // namespace da_guard::galois
