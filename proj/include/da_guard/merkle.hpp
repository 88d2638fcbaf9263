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

#include <array>
#include <cstdint>
#include <span>
#include <string>
#include <vector>

namespace da_guard::commitment {

using Bytes = std::vector<std::uint8_t>;
using Digest = std::array<std::uint8_t, 32>;

/// Digest length in bits.
inline constexpr std::uint64_t kDigestBits = 256;

Digest sha256(std::span<const std::uint8_t> data);
std::string to_hex(std::span<const std::uint8_t> bytes);
Bytes from_hex(const std::string& hex);

/// ceil(log2(v)) for v >= 1.
unsigned ceil_log2(std::uint64_t v);

/// Binary Merkle tree with domain-separated hashing:
///   leaf     = SHA-256(0x00 || payload)
///   internal = SHA-256(0x01 || left || right)
/// Leaf counts that are not a power of two are padded with SHA-256("") up to
/// the next power of two, so every path has exactly ceil(log2(leaves)) entries.
class MerkleTree {
  public:
    explicit MerkleTree(const std::vector<Bytes>& leaf_payloads);

    static Digest leaf_hash(std::span<const std::uint8_t> payload);
    static Digest node_hash(const Digest& left, const Digest& right);
    static Digest padding_leaf();

    /// Root reached by walking `path` upward from `leaf` at `index`.
    static Digest root_from_path(const Digest& leaf, std::uint64_t index, std::span<const Digest> path);

    const Digest& root() const noexcept { return levels_.back().front(); }
    std::size_t leaf_count() const noexcept { return leaf_count_; }
    unsigned depth() const noexcept { return static_cast<unsigned>(levels_.size() - 1); }

    /// Sibling digests from the leaf level up; throws std::out_of_range.
    std::vector<Digest> path(std::size_t index) const;

  private:
    std::size_t leaf_count_;
    std::vector<std::vector<Digest>> levels_;  // levels_[0] = padded leaves
};

}  // namespace da_guard::commitment
