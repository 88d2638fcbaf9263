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
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "da_guard/merkle.hpp"
#include "da_guard/product_code.hpp"

namespace da_guard::commitment {

using galois::Symbol;
using product::CodedBlock;
using product::CodeSpec;

/// Which Merkle tree a sample opens against.
enum class Axis : std::uint8_t { Row = 0, Column = 1 };

std::string to_string(Axis axis);
Axis axis_from_string(const std::string& name);

/// Symbol as ceil(q_bits / 8) big-endian bytes.
Bytes symbol_bytes(Symbol symbol, unsigned q_bits);

/// The commitment light nodes store: one Merkle root per row and per column.
///
/// Canonical encoding (all integers big-endian):
///   u8  version (=1)
///   u16 q_bits
///   u32 k'
///   u32 n'
///   n' x 32 bytes row roots, then n' x 32 bytes column roots
/// Only the 2n' roots are charged in the download accounting; the 11-byte
/// prefix is constant across designs.
struct BlockHeader {
    CodeSpec spec;
    std::vector<Digest> row_roots;
    std::vector<Digest> col_roots;

    /// 2 * n' * 256.
    std::uint64_t digest_bits() const noexcept { return 2 * spec.n_prime() * kDigestBits; }
    Bytes serialize() const;
    static BlockHeader deserialize(std::span<const std::uint8_t> bytes);
    /// SHA-256 of the canonical encoding.
    Digest id() const;

    friend bool operator==(const BlockHeader&, const BlockHeader&) = default;
};

/// A sampled symbol with its Merkle path in the row or column tree.
///
/// The charged payload is symbol bytes followed by the path digests:
/// ceil(log2 q) + 256 * ceil(log2 n') bits. The full encoding adds the
/// position envelope: u8 axis, u32 row, u32 col, u16 path length, then
/// the payload.
struct SampleProof {
    std::uint32_t row{0};
    std::uint32_t col{0};
    Axis axis{Axis::Row};
    Symbol symbol{0};
    std::vector<Digest> path;

    Bytes payload(unsigned q_bits) const;
    Bytes serialize(unsigned q_bits) const;
    static SampleProof deserialize(std::span<const std::uint8_t> bytes, unsigned q_bits);

    friend bool operator==(const SampleProof&, const SampleProof&) = default;
};

/// ceil(log2 q) + digest_bits * ceil(log2 n').
std::uint64_t proof_bits(unsigned q_bits, std::uint64_t n_prime, std::uint64_t digest_bits = kDigestBits);

/// Throws std::invalid_argument if the block still has erasures.
BlockHeader build_header(const CodedBlock& block);

/// Throws std::out_of_range for a bad position, std::invalid_argument for an
/// erased symbol.
SampleProof open_sample(const CodedBlock& block, std::size_t row, std::size_t col, Axis axis = Axis::Row);

/// True iff the proof's path leads from its symbol to the committed root of
/// its row (or column). Malformed input yields false.
bool verify_sample(const BlockHeader& header, const SampleProof& proof);

}  // namespace da_guard::commitment
