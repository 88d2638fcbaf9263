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
#include <string>
#include <vector>

#include "da_guard/gf.hpp"
#include "da_guard/matrix.hpp"
#include "da_guard/rs.hpp"

namespace da_guard::product {

using galois::Symbol;
using SymbolMatrix = Matrix<Symbol>;
/// true marks an erased (unknown) position.
using ErasureMask = Matrix<std::uint8_t>;

/// Parameters of an n' x n' product of two identical (n', k') RS codes.
///
/// q_bits is log2 of the field size. It is symbolic for the analysis side
/// (any positive value) and must be 8 or 16 to instantiate the codec.
class CodeSpec {
  public:
    /// Throws std::invalid_argument unless 1 <= k' < n' and q_bits > 0.
    CodeSpec(unsigned q_bits, std::uint64_t k_prime, std::uint64_t n_prime);

    unsigned q_bits() const noexcept { return q_bits_; }
    std::uint64_t k_prime() const noexcept { return k_prime_; }
    std::uint64_t n_prime() const noexcept { return n_prime_; }
    std::uint64_t n() const noexcept { return n_prime_ * n_prime_; }
    std::uint64_t k() const noexcept { return k_prime_ * k_prime_; }
    double rate_component() const noexcept { return static_cast<double>(k_prime_) / static_cast<double>(n_prime_); }

    /// Size of the smallest stopping set minus one: (n'-k'+1)^2 - 1.
    std::uint64_t erasure_capability() const noexcept {
        const std::uint64_t d = n_prime_ - k_prime_ + 1;
        return d * d - 1;
    }
    /// Known symbols that always suffice for recovery: n - erasure_capability.
    std::uint64_t decode_threshold() const noexcept { return n() - erasure_capability(); }
    double gamma() const noexcept { return static_cast<double>(decode_threshold()) / static_cast<double>(n()); }
    /// The large-n' approximation R'(2 - R').
    double gamma_approx() const noexcept {
        const double r = rate_component();
        return r * (2.0 - r);
    }

    bool concrete() const noexcept {
        return (q_bits_ == 8 || q_bits_ == 16) && n_prime_ <= (std::uint64_t{1} << q_bits_);
    }
    /// Throws std::invalid_argument when this CodeSpec cannot drive the real codec.
    void require_concrete() const;
    const galois::Field& field() const;
    galois::RsCode component_code() const;

    friend bool operator==(const CodeSpec&, const CodeSpec&) = default;

  private:
    unsigned q_bits_;
    std::uint64_t k_prime_;
    std::uint64_t n_prime_;
};

/// Smallest k' with k'^2 * q_bits >= block_bits, i.e. ceil(sqrt(block_bits / q_bits)).
std::uint64_t component_dimension(unsigned q_bits, std::uint64_t block_bits);

/// CodeSpec for a block of `block_bits` bits; throws if n_prime <= k'.
CodeSpec make_code_spec(unsigned q_bits, std::uint64_t block_bits, std::uint64_t n_prime);

struct CodedBlock {
    CodeSpec spec;
    SymbolMatrix symbols;
    ErasureMask erasures;

    bool erased(std::size_t r, std::size_t c) const { return erasures(r, c) != 0; }
    void erase(std::size_t r, std::size_t c) { erasures(r, c) = 1; }
    std::size_t erasure_count() const;
    bool fully_known() const { return erasure_count() == 0; }
};

/// Encodes each of the k' data rows to length n', then each of the n'
/// columns to length n'. With evaluation-form components the data matrix is
/// the coefficient matrix of a bivariate polynomial: it is recovered by
/// decoding, not by reading the top-left corner.
CodedBlock product_encode(const CodeSpec& spec, const SymbolMatrix& data);

/// Same block, built column-first. Used to check order independence.
CodedBlock product_encode_columns_first(const CodeSpec& spec, const SymbolMatrix& data);

enum class DecodeStatus { Decoded, Undecodable, Inconsistent };

std::string to_string(DecodeStatus status);

struct ProductDecodeResult {
    DecodeStatus status{DecodeStatus::Undecodable};
    SymbolMatrix data;       // k' x k', valid when Decoded
    ErasureMask residual;    // erasures left when peeling stalled
    std::size_t rounds{0};   // row/column decodes performed

    bool ok() const noexcept { return status == DecodeStatus::Decoded; }
};

/// Iterative row/column peeling. Any row or column with at most n'-k'
/// erasures is decoded and filled until no line makes progress. Every
/// filled line is re-encoded and compared against its known symbols;
/// a mismatch yields Inconsistent.
ProductDecodeResult product_decode(const CodedBlock& block);

/// Peels in place and reports whether every erasure was filled. The block
/// symbols are updated for the filled positions.
DecodeStatus peel(CodedBlock& block, std::size_t* rounds = nullptr);

/// True iff every row and every column is a codeword of the component code.
bool is_valid_codeword(const CodedBlock& block);

}  // namespace da_guard::product
