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

#include "da_guard/commitment.hpp"

#include <stdexcept>

namespace da_guard::commitment {

namespace {

void put_be(Bytes& out, std::uint64_t v, unsigned bytes) {
    for (unsigned i = bytes; i > 0; --i) out.push_back(static_cast<std::uint8_t>(v >> (8 * (i - 1))));
}

class Reader {
  public:
    explicit Reader(std::span<const std::uint8_t> b) : bytes_(b) {}
    std::uint64_t be(unsigned n) {
        need(n);
        std::uint64_t v = 0;
        for (unsigned i = 0; i < n; ++i) v = (v << 8) | bytes_[pos_++];
        return v;
    }
    Digest digest() {
        need(32);
        Digest d{};
        std::copy(bytes_.begin() + pos_, bytes_.begin() + pos_ + 32, d.begin());
        pos_ += 32;
        return d;
    }
    bool done() const { return pos_ == bytes_.size(); }

  private:
    void need(std::size_t n) const {
        if (pos_ + n > bytes_.size()) throw std::invalid_argument("truncated encoding");
    }
    std::span<const std::uint8_t> bytes_;
    std::size_t pos_{0};
};

unsigned symbol_width_bytes(unsigned q_bits) { return (q_bits + 7) / 8; }

Bytes line_leaf(const CodedBlock& block, std::size_t r, std::size_t c) {
    return symbol_bytes(block.symbols(r, c), block.spec.q_bits());
}

}  // namespace

std::string to_string(Axis axis) { return axis == Axis::Row ? "row" : "column"; }

Axis axis_from_string(const std::string& name) {
    if (name == "row") return Axis::Row;
    if (name == "column" || name == "col") return Axis::Column;
    throw std::invalid_argument("unknown axis '" + name + "'");
}

Bytes symbol_bytes(Symbol symbol, unsigned q_bits) {
    Bytes out;
    const unsigned width = symbol_width_bytes(q_bits);
    out.reserve(width);
    for (unsigned i = width; i > 0; --i)
        out.push_back(i - 1 < sizeof(Symbol) ? static_cast<std::uint8_t>(symbol >> (8 * (i - 1))) : 0);
    return out;
}

std::uint64_t proof_bits(unsigned q_bits, std::uint64_t n_prime, std::uint64_t digest_bits) {
    return q_bits + digest_bits * ceil_log2(n_prime);
}

Bytes BlockHeader::serialize() const {
    Bytes out;
    out.reserve(11 + 64 * row_roots.size());
    put_be(out, 1, 1);
    put_be(out, spec.q_bits(), 2);
    put_be(out, spec.k_prime(), 4);
    put_be(out, spec.n_prime(), 4);
    for (const auto& d : row_roots) out.insert(out.end(), d.begin(), d.end());
    for (const auto& d : col_roots) out.insert(out.end(), d.begin(), d.end());
    return out;
}

BlockHeader BlockHeader::deserialize(std::span<const std::uint8_t> bytes) {
    Reader in(bytes);
    if (in.be(1) != 1) throw std::invalid_argument("unsupported header version");
    const auto q_bits = static_cast<unsigned>(in.be(2));
    const auto k = in.be(4);
    const auto n = in.be(4);
    BlockHeader h{CodeSpec(q_bits, k, n), {}, {}};
    h.row_roots.reserve(n);
    h.col_roots.reserve(n);
    for (std::uint64_t i = 0; i < n; ++i) h.row_roots.push_back(in.digest());
    for (std::uint64_t i = 0; i < n; ++i) h.col_roots.push_back(in.digest());
    if (!in.done()) throw std::invalid_argument("trailing bytes after header");
    return h;
}

Digest BlockHeader::id() const { return sha256(serialize()); }

Bytes SampleProof::payload(unsigned q_bits) const {
    Bytes out = symbol_bytes(symbol, q_bits);
    for (const auto& d : path) out.insert(out.end(), d.begin(), d.end());
    return out;
}

Bytes SampleProof::serialize(unsigned q_bits) const {
    Bytes out;
    put_be(out, static_cast<std::uint8_t>(axis), 1);
    put_be(out, row, 4);
    put_be(out, col, 4);
    put_be(out, path.size(), 2);
    const Bytes body = payload(q_bits);
    out.insert(out.end(), body.begin(), body.end());
    return out;
}

SampleProof SampleProof::deserialize(std::span<const std::uint8_t> bytes, unsigned q_bits) {
    Reader in(bytes);
    SampleProof p;
    const auto axis = in.be(1);
    if (axis > 1) throw std::invalid_argument("invalid axis tag");
    p.axis = static_cast<Axis>(axis);
    p.row = static_cast<std::uint32_t>(in.be(4));
    p.col = static_cast<std::uint32_t>(in.be(4));
    const auto len = in.be(2);
    const std::uint64_t sym = in.be(symbol_width_bytes(q_bits));
    if (sym > 0xFFFF) throw std::invalid_argument("symbol does not fit the concrete codec");
    p.symbol = static_cast<Symbol>(sym);
    for (std::uint64_t i = 0; i < len; ++i) p.path.push_back(in.digest());
    if (!in.done()) throw std::invalid_argument("trailing bytes after proof");
    return p;
}

BlockHeader build_header(const CodedBlock& block) {
    if (!block.fully_known()) throw std::invalid_argument("cannot commit to a block with erasures");
    const std::size_t np = block.spec.n_prime();
    BlockHeader h{block.spec, {}, {}};
    h.row_roots.reserve(np);
    h.col_roots.reserve(np);
    std::vector<Bytes> leaves(np);
    for (std::size_t r = 0; r < np; ++r) {
        for (std::size_t c = 0; c < np; ++c) leaves[c] = line_leaf(block, r, c);
        h.row_roots.push_back(MerkleTree(leaves).root());
    }
    for (std::size_t c = 0; c < np; ++c) {
        for (std::size_t r = 0; r < np; ++r) leaves[r] = line_leaf(block, r, c);
        h.col_roots.push_back(MerkleTree(leaves).root());
    }
    return h;
}

SampleProof open_sample(const CodedBlock& block, std::size_t row, std::size_t col, Axis axis) {
    const std::size_t np = block.spec.n_prime();
    if (row >= np || col >= np) throw std::out_of_range("sample position outside the block");
    if (block.erased(row, col)) throw std::invalid_argument("cannot open an erased symbol");
    std::vector<Bytes> leaves(np);
    for (std::size_t i = 0; i < np; ++i)
        leaves[i] = axis == Axis::Row ? line_leaf(block, row, i) : line_leaf(block, i, col);
    const MerkleTree tree(leaves);
    SampleProof p;
    p.row = static_cast<std::uint32_t>(row);
    p.col = static_cast<std::uint32_t>(col);
    p.axis = axis;
    p.symbol = block.symbols(row, col);
    p.path = tree.path(axis == Axis::Row ? col : row);
    return p;
}

bool verify_sample(const BlockHeader& header, const SampleProof& proof) {
    const std::uint64_t np = header.spec.n_prime();
    if (header.row_roots.size() != np || header.col_roots.size() != np) return false;
    if (proof.row >= np || proof.col >= np) return false;
    if (proof.path.size() != ceil_log2(np)) return false;
    const unsigned q_bits = header.spec.q_bits();
    if (q_bits < 16 && proof.symbol >= (1u << q_bits)) return false;

    const bool by_row = proof.axis == Axis::Row;
    const std::uint64_t leaf_index = by_row ? proof.col : proof.row;
    const Digest& expected = by_row ? header.row_roots[proof.row] : header.col_roots[proof.col];
    const Digest leaf = MerkleTree::leaf_hash(symbol_bytes(proof.symbol, q_bits));
    return MerkleTree::root_from_path(leaf, leaf_index, proof.path) == expected;
}

}  // namespace da_guard::commitment
