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

#include "da_guard/merkle.hpp"

#include <openssl/evp.h>

#include <stdexcept>

namespace da_guard::commitment {

Digest sha256(std::span<const std::uint8_t> data) {
    Digest out{};
    unsigned int len = 0;
    if (EVP_Digest(data.data(), data.size(), out.data(), &len, EVP_sha256(), nullptr) != 1 || len != out.size())
        throw std::runtime_error("SHA-256 failed");
    return out;
}

std::string to_hex(std::span<const std::uint8_t> bytes) {
    static constexpr char kDigits[] = "0123456789abcdef";
    std::string s;
    s.reserve(bytes.size() * 2);
    for (std::uint8_t b : bytes) {
        s.push_back(kDigits[b >> 4]);
        s.push_back(kDigits[b & 0xF]);
    }
    return s;
}

Bytes from_hex(const std::string& hex) {
    if (hex.size() % 2 != 0) throw std::invalid_argument("hex string has odd length");
    auto nibble = [](char c) -> std::uint8_t {
        if (c >= '0' && c <= '9') return static_cast<std::uint8_t>(c - '0');
        if (c >= 'a' && c <= 'f') return static_cast<std::uint8_t>(c - 'a' + 10);
        if (c >= 'A' && c <= 'F') return static_cast<std::uint8_t>(c - 'A' + 10);
        throw std::invalid_argument("invalid hex digit");
    };
    Bytes out(hex.size() / 2);
    for (std::size_t i = 0; i < out.size(); ++i)
        out[i] = static_cast<std::uint8_t>((nibble(hex[2 * i]) << 4) | nibble(hex[2 * i + 1]));
    return out;
}

unsigned ceil_log2(std::uint64_t v) {
    if (v == 0) throw std::invalid_argument("ceil_log2(0)");
    unsigned bits = 0;
    while ((std::uint64_t{1} << bits) < v) ++bits;
    return bits;
}

Digest MerkleTree::leaf_hash(std::span<const std::uint8_t> payload) {
    Bytes buf;
    buf.reserve(payload.size() + 1);
    buf.push_back(0x00);
    buf.insert(buf.end(), payload.begin(), payload.end());
    return sha256(buf);
}

Digest MerkleTree::node_hash(const Digest& left, const Digest& right) {
    std::array<std::uint8_t, 65> buf{};
    buf[0] = 0x01;
    std::copy(left.begin(), left.end(), buf.begin() + 1);
    std::copy(right.begin(), right.end(), buf.begin() + 33);
    return sha256(buf);
}

Digest MerkleTree::padding_leaf() {
    static const Digest empty = sha256({});
    return empty;
}

MerkleTree::MerkleTree(const std::vector<Bytes>& leaf_payloads) : leaf_count_(leaf_payloads.size()) {
    if (leaf_payloads.empty()) throw std::invalid_argument("Merkle tree needs at least one leaf");
    const std::size_t width = std::size_t{1} << ceil_log2(leaf_payloads.size());
    std::vector<Digest> level;
    level.reserve(width);
    for (const auto& p : leaf_payloads) level.push_back(leaf_hash(p));
    level.resize(width, padding_leaf());
    levels_.push_back(std::move(level));
    while (levels_.back().size() > 1) {
        const auto& below = levels_.back();
        std::vector<Digest> up(below.size() / 2);
        for (std::size_t i = 0; i < up.size(); ++i) up[i] = node_hash(below[2 * i], below[2 * i + 1]);
        levels_.push_back(std::move(up));
    }
}

std::vector<Digest> MerkleTree::path(std::size_t index) const {
    if (index >= leaf_count_) throw std::out_of_range("Merkle leaf index out of range");
    std::vector<Digest> out;
    out.reserve(depth());
    for (std::size_t lvl = 0; lvl + 1 < levels_.size(); ++lvl) {
        out.push_back(levels_[lvl][index ^ 1]);
        index >>= 1;
    }
    return out;
}

Digest MerkleTree::root_from_path(const Digest& leaf, std::uint64_t index, std::span<const Digest> path) {
    Digest acc = leaf;
    for (const Digest& sibling : path) {
        acc = (index & 1) ? node_hash(sibling, acc) : node_hash(acc, sibling);
        index >>= 1;
    }
    return acc;
}

}  // namespace da_guard::commitment
