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
#include <vector>

namespace da_guard::galois {

/// A field element. Both supported fields fit in 16 bits.
using Symbol = std::uint16_t;

/// GF(2^w) described by its width and reduction polynomial (bit i = coefficient of x^i).
struct FieldSpec {
    unsigned width_bits{8};
    std::uint32_t reduction_polynomial{0x11B};

    // x^8 + x^4 + x^3 + x + 1
    static constexpr FieldSpec gf256() { return {8, 0x11B}; }
    // x^16 + x^12 + x^3 + x + 1
    static constexpr FieldSpec gf65536() { return {16, 0x1100B}; }

    friend bool operator==(const FieldSpec&, const FieldSpec&) = default;
};

/// True iff `poly` is irreducible of degree `width` over GF(2) (Rabin's test).
bool is_irreducible(std::uint32_t poly, unsigned width);

/// Binary extension field with log/antilog tables over a primitive element.
///
/// Immutable after construction. GF(2^8) additionally keeps a full 256x256
/// multiplication table.
class Field {
  public:
    /// Throws std::invalid_argument unless width is 8 or 16 and the polynomial
    /// is irreducible of that degree.
    explicit Field(FieldSpec spec);

    static const Field& gf256();
    static const Field& gf65536();
    /// Shared instance for width 8 or 16.
    static const Field& for_width(unsigned width_bits);

    const FieldSpec& spec() const noexcept { return spec_; }
    unsigned width() const noexcept { return spec_.width_bits; }
    /// Number of elements, 2^w.
    std::uint32_t order() const noexcept { return order_; }
    Symbol max_element() const noexcept { return static_cast<Symbol>(order_ - 1); }
    /// Smallest primitive element, used as the log base.
    Symbol generator() const noexcept { return generator_; }

    static constexpr Symbol add(Symbol a, Symbol b) noexcept { return a ^ b; }
    static constexpr Symbol sub(Symbol a, Symbol b) noexcept { return a ^ b; }

    Symbol mul(Symbol a, Symbol b) const noexcept {
        if (!mul_table_.empty()) return mul_table_[(static_cast<std::size_t>(a) << 8) | b];
        if (a == 0 || b == 0) return 0;
        return exp_[log_[a] + log_[b]];
    }

    /// Throws std::domain_error on a zero divisor.
    Symbol div(Symbol a, Symbol b) const;
    Symbol inv(Symbol a) const;
    Symbol pow(Symbol a, std::uint64_t e) const noexcept;

    bool contains(std::uint32_t value) const noexcept { return value < order_; }

  private:
    FieldSpec spec_;
    std::uint32_t order_;
    Symbol generator_{0};
    std::vector<Symbol> exp_;         // 2*(q-1) entries so log sums need no reduction
    std::vector<std::uint32_t> log_;  // log_[0] unused
    std::vector<Symbol> mul_table_;   // only for w = 8
};

}  // namespace da_guard::galois
