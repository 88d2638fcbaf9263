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

#include "da_guard/product_code.hpp"

#include <algorithm>
#include <deque>
#include <stdexcept>

namespace da_guard::product {

using galois::Field;
using galois::RsCode;

CodeSpec::CodeSpec(unsigned q_bits, std::uint64_t k_prime, std::uint64_t n_prime)
    : q_bits_(q_bits), k_prime_(k_prime), n_prime_(n_prime) {
    if (q_bits == 0) throw std::invalid_argument("q_bits must be positive");
    if (k_prime < 1 || k_prime >= n_prime)
        throw std::invalid_argument("component code requires 1 <= k' < n' (k'=" + std::to_string(k_prime) +
                                    ", n'=" + std::to_string(n_prime) + ")");
}

void CodeSpec::require_concrete() const {
    if (q_bits_ != 8 && q_bits_ != 16)
        throw std::invalid_argument("codec needs q_bits 8 or 16, got " + std::to_string(q_bits_));
    if (n_prime_ > (std::uint64_t{1} << q_bits_))
        throw std::invalid_argument("n' exceeds the field order");
}

const Field& CodeSpec::field() const {
    require_concrete();
    return Field::for_width(q_bits_);
}

RsCode CodeSpec::component_code() const {
    return RsCode(field(), static_cast<std::size_t>(n_prime_), static_cast<std::size_t>(k_prime_));
}

std::uint64_t component_dimension(unsigned q_bits, std::uint64_t block_bits) {
    if (q_bits == 0) throw std::invalid_argument("q_bits must be positive");
    if (block_bits == 0) throw std::invalid_argument("block size must be positive");
    std::uint64_t k = 1;
    while (k * k * q_bits < block_bits) ++k;
    return k;
}

CodeSpec make_code_spec(unsigned q_bits, std::uint64_t block_bits, std::uint64_t n_prime) {
    const std::uint64_t k = component_dimension(q_bits, block_bits);
    if (n_prime <= k)
        throw std::invalid_argument("n' = " + std::to_string(n_prime) + " must exceed k' = " + std::to_string(k));
    return CodeSpec(q_bits, k, n_prime);
}

std::size_t CodedBlock::erasure_count() const {
    return static_cast<std::size_t>(std::count(erasures.values().begin(), erasures.values().end(), 1));
}

namespace {

void check_data(const CodeSpec& spec, const SymbolMatrix& data) {
    spec.require_concrete();
    if (data.rows() != spec.k_prime() || data.cols() != spec.k_prime())
        throw std::invalid_argument("data must be k' x k' = " + std::to_string(spec.k_prime()) + " square");
    const Field& f = spec.field();
    for (Symbol v : data.values())
        if (!f.contains(v)) throw std::invalid_argument("data symbol outside the field");
}

}  // namespace

CodedBlock product_encode(const CodeSpec& spec, const SymbolMatrix& data) {
    check_data(spec, data);
    const RsCode code = spec.component_code();
    const std::size_t kp = spec.k_prime(), np = spec.n_prime();

    SymbolMatrix partial(kp, np);
    for (std::size_t i = 0; i < kp; ++i) {
        const auto row = code.encode(data.row(i));
        std::copy(row.begin(), row.end(), partial.row(i).begin());
    }
    SymbolMatrix full(np, np);
    for (std::size_t c = 0; c < np; ++c) {
        const auto col = code.encode(partial.column(c));
        for (std::size_t r = 0; r < np; ++r) full(r, c) = col[r];
    }
    return CodedBlock{spec, std::move(full), ErasureMask(np, np, 0)};
}

CodedBlock product_encode_columns_first(const CodeSpec& spec, const SymbolMatrix& data) {
    check_data(spec, data);
    const RsCode code = spec.component_code();
    const std::size_t kp = spec.k_prime(), np = spec.n_prime();

    // Columns of the data index the row polynomial's coefficients; encoding
    // them first evaluates the column variable.
    SymbolMatrix partial(np, kp);
    for (std::size_t j = 0; j < kp; ++j) {
        const auto col = code.encode(data.column(j));
        for (std::size_t r = 0; r < np; ++r) partial(r, j) = col[r];
    }
    SymbolMatrix full(np, np);
    for (std::size_t r = 0; r < np; ++r) {
        const auto row = code.encode(partial.row(r));
        std::copy(row.begin(), row.end(), full.row(r).begin());
    }
    return CodedBlock{spec, std::move(full), ErasureMask(np, np, 0)};
}

std::string to_string(DecodeStatus status) {
    switch (status) {
        case DecodeStatus::Decoded: return "decoded";
        case DecodeStatus::Undecodable: return "undecodable";
        case DecodeStatus::Inconsistent: return "inconsistent";
    }
    return "unknown";
}

namespace {

// Line l < n' is row l, otherwise column l - n'.
struct LineView {
    CodedBlock& block;
    std::size_t np;

    std::pair<std::size_t, std::size_t> cell(std::size_t line, std::size_t i) const {
        return line < np ? std::pair{line, i} : std::pair{i, line - np};
    }
};

// Decodes a line from its first k known symbols and checks every known
// symbol against the re-encoding. Returns false on mismatch.
bool fill_line(const RsCode& code, LineView& view, std::size_t line, std::vector<std::size_t>& filled) {
    const std::size_t np = view.np, k = code.k();
    std::vector<std::size_t> positions;
    std::vector<Symbol> values;
    positions.reserve(k);
    values.reserve(k);
    for (std::size_t i = 0; i < np && positions.size() < k; ++i) {
        auto [r, c] = view.cell(line, i);
        if (!view.block.erased(r, c)) {
            positions.push_back(i);
            values.push_back(view.block.symbols(r, c));
        }
    }
    const auto coeffs = code.interpolate(positions, values);
    filled.clear();
    for (std::size_t i = 0; i < np; ++i) {
        auto [r, c] = view.cell(line, i);
        const Symbol v = code.evaluate(coeffs, i);
        if (view.block.erased(r, c)) {
            view.block.symbols(r, c) = v;
            view.block.erasures(r, c) = 0;
            filled.push_back(i);
        } else if (view.block.symbols(r, c) != v) {
            return false;
        }
    }
    return true;
}

bool line_is_codeword(const RsCode& code, const SymbolMatrix& m, std::size_t line, std::size_t np) {
    std::vector<Symbol> word(np);
    for (std::size_t i = 0; i < np; ++i) word[i] = line < np ? m(line, i) : m(i, line - np);
    std::vector<std::size_t> positions(code.k());
    for (std::size_t i = 0; i < code.k(); ++i) positions[i] = i;
    const auto coeffs = code.interpolate(positions, std::span<const Symbol>(word.data(), code.k()));
    for (std::size_t i = code.k(); i < np; ++i)
        if (code.evaluate(coeffs, i) != word[i]) return false;
    return true;
}

}  // namespace

bool is_valid_codeword(const CodedBlock& block) {
    if (!block.fully_known()) return false;
    const RsCode code = block.spec.component_code();
    const std::size_t np = block.spec.n_prime();
    for (std::size_t line = 0; line < 2 * np; ++line)
        if (!line_is_codeword(code, block.symbols, line, np)) return false;
    return true;
}

DecodeStatus peel(CodedBlock& block, std::size_t* rounds) {
    const RsCode code = block.spec.component_code();
    const std::size_t np = block.spec.n_prime();
    const std::size_t budget = code.max_erasures();
    if (block.symbols.rows() != np || block.symbols.cols() != np || block.erasures.rows() != np ||
        block.erasures.cols() != np)
        throw std::invalid_argument("block dimensions do not match its spec");

    std::vector<std::size_t> missing(2 * np, 0);
    for (std::size_t r = 0; r < np; ++r)
        for (std::size_t c = 0; c < np; ++c)
            if (block.erased(r, c)) {
                ++missing[r];
                ++missing[np + c];
            }

    std::deque<std::size_t> queue;
    std::vector<std::uint8_t> queued(2 * np, 0);
    auto consider = [&](std::size_t line) {
        if (!queued[line] && missing[line] > 0 && missing[line] <= budget) {
            queued[line] = 1;
            queue.push_back(line);
        }
    };
    for (std::size_t line = 0; line < 2 * np; ++line) consider(line);

    LineView view{block, np};
    std::vector<std::size_t> filled;
    std::size_t done = 0;
    while (!queue.empty()) {
        const std::size_t line = queue.front();
        queue.pop_front();
        queued[line] = 0;
        if (missing[line] == 0) continue;
        if (!fill_line(code, view, line, filled)) {
            if (rounds) *rounds = done;
            return DecodeStatus::Inconsistent;
        }
        ++done;
        missing[line] = 0;
        for (std::size_t i : filled) {
            const std::size_t cross = line < np ? np + i : i;
            --missing[cross];
            consider(cross);
        }
    }
    if (rounds) *rounds = done;
    return block.fully_known() ? DecodeStatus::Decoded : DecodeStatus::Undecodable;
}

ProductDecodeResult product_decode(const CodedBlock& block) {
    CodedBlock work = block;
    ProductDecodeResult result;
    result.status = peel(work, &result.rounds);
    if (result.status == DecodeStatus::Undecodable) {
        result.residual = work.erasures;
        return result;
    }
    if (result.status == DecodeStatus::Inconsistent) return result;
    if (!is_valid_codeword(work)) {
        result.status = DecodeStatus::Inconsistent;
        return result;
    }

    const RsCode code = work.spec.component_code();
    const std::size_t kp = work.spec.k_prime();
    std::vector<std::size_t> first_k(kp);
    for (std::size_t i = 0; i < kp; ++i) first_k[i] = i;

    // Column c holds the evaluations of sum_i R[i][c] x^i.
    SymbolMatrix partial(kp, kp);
    for (std::size_t c = 0; c < kp; ++c) {
        const auto col = work.symbols.column(c);
        const auto coeffs = code.interpolate(first_k, std::span<const Symbol>(col.data(), kp));
        for (std::size_t i = 0; i < kp; ++i) partial(i, c) = coeffs[i];
    }
    result.data = SymbolMatrix(kp, kp);
    for (std::size_t i = 0; i < kp; ++i) {
        const auto coeffs = code.interpolate(first_k, partial.row(i));
        std::copy(coeffs.begin(), coeffs.end(), result.data.row(i).begin());
    }
    return result;
}

}  // namespace da_guard::product
