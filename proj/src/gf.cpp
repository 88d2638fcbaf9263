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

#include "da_guard/gf.hpp"

#include <bit>
#include <stdexcept>
#include <string>

namespace da_guard::galois {

namespace {

// Carry-less product of two polynomials of degree < 32 reduced modulo `poly`.
std::uint64_t mulmod(std::uint64_t a, std::uint64_t b, std::uint64_t poly, unsigned width) {
    std::uint64_t r = 0;
    const std::uint64_t top = std::uint64_t{1} << width;
    while (b != 0) {
        if (b & 1) r ^= a;
        b >>= 1;
        a <<= 1;
        if (a & top) a ^= poly;
    }
    return r;
}

// x^(2^k) mod poly
std::uint64_t frobenius_power_of_x(unsigned k, std::uint64_t poly, unsigned width) {
    std::uint64_t y = 2;
    for (unsigned i = 0; i < k; ++i) y = mulmod(y, y, poly, width);
    return y;
}

unsigned degree(std::uint64_t p) { return p == 0 ? 0 : 63u - static_cast<unsigned>(std::countl_zero(p)); }

std::uint64_t poly_gcd(std::uint64_t a, std::uint64_t b) {
    while (b != 0) {
        // a mod b over GF(2)
        while (a != 0 && degree(a) >= degree(b)) a ^= b << (degree(a) - degree(b));
        std::swap(a, b);
    }
    return a;
}

std::vector<unsigned> prime_factors(std::uint64_t v) {
    std::vector<unsigned> out;
    for (std::uint64_t p = 2; p * p <= v; ++p) {
        if (v % p == 0) {
            out.push_back(static_cast<unsigned>(p));
            while (v % p == 0) v /= p;
        }
    }
    if (v > 1) out.push_back(static_cast<unsigned>(v));
    return out;
}

}  // namespace

bool is_irreducible(std::uint32_t poly, unsigned width) {
    if (width == 0 || width > 31) return false;
    if (degree(poly) != width) return false;
    // x^(2^w) == x (mod p)
    if (frobenius_power_of_x(width, poly, width) != 2) return false;
    // gcd(x^(2^(w/r)) - x, p) == 1 for every prime r | w
    for (unsigned r : prime_factors(width)) {
        const std::uint64_t h = frobenius_power_of_x(width / r, poly, width) ^ 2;
        if (poly_gcd(poly, h) != 1) return false;
    }
    return true;
}

Field::Field(FieldSpec spec) : spec_(spec), order_(0) {
    if (spec.width_bits != 8 && spec.width_bits != 16)
        throw std::invalid_argument("field width must be 8 or 16, got " + std::to_string(spec.width_bits));
    if (!is_irreducible(spec.reduction_polynomial, spec.width_bits))
        throw std::invalid_argument("reduction polynomial is not irreducible of degree " +
                                    std::to_string(spec.width_bits));
    order_ = std::uint32_t{1} << spec.width_bits;
    const std::uint64_t group = order_ - 1;
    const auto factors = prime_factors(group);

    auto slow_pow = [&](std::uint64_t a, std::uint64_t e) {
        std::uint64_t r = 1;
        while (e != 0) {
            if (e & 1) r = mulmod(r, a, spec.reduction_polynomial, spec.width_bits);
            a = mulmod(a, a, spec.reduction_polynomial, spec.width_bits);
            e >>= 1;
        }
        return r;
    };
    for (std::uint64_t g = 2; g < order_; ++g) {
        bool primitive = true;
        for (unsigned f : factors) {
            if (slow_pow(g, group / f) == 1) {
                primitive = false;
                break;
            }
        }
        if (primitive) {
            generator_ = static_cast<Symbol>(g);
            break;
        }
    }

    exp_.assign(2 * group, 0);
    log_.assign(order_, 0);
    std::uint64_t x = 1;
    for (std::uint64_t i = 0; i < group; ++i) {
        exp_[i] = static_cast<Symbol>(x);
        exp_[i + group] = static_cast<Symbol>(x);
        log_[x] = static_cast<std::uint32_t>(i);
        x = mulmod(x, generator_, spec.reduction_polynomial, spec.width_bits);
    }

    if (spec.width_bits == 8) {
        mul_table_.assign(order_ * order_, 0);
        for (std::uint32_t a = 1; a < order_; ++a)
            for (std::uint32_t b = 1; b < order_; ++b) mul_table_[(a << 8) | b] = exp_[log_[a] + log_[b]];
    }
}

const Field& Field::gf256() {
    static const Field field(FieldSpec::gf256());
    return field;
}

const Field& Field::gf65536() {
    static const Field field(FieldSpec::gf65536());
    return field;
}

const Field& Field::for_width(unsigned width_bits) {
    switch (width_bits) {
        case 8: return gf256();
        case 16: return gf65536();
        default: throw std::invalid_argument("no concrete field of width " + std::to_string(width_bits));
    }
}

Symbol Field::inv(Symbol a) const {
    if (a == 0) throw std::domain_error("inverse of zero");
    const std::uint32_t group = order_ - 1;
    return exp_[(group - log_[a]) % group];
}

Symbol Field::div(Symbol a, Symbol b) const {
    if (b == 0) throw std::domain_error("division by zero");
    if (a == 0) return 0;
    const std::uint32_t group = order_ - 1;
    return exp_[log_[a] + group - log_[b]];
}

Symbol Field::pow(Symbol a, std::uint64_t e) const noexcept {
    if (e == 0) return 1;
    if (a == 0) return 0;
    const std::uint64_t group = order_ - 1;
    return exp_[(static_cast<std::uint64_t>(log_[a]) * (e % group)) % group];
}

}  // namespace da_guard::galois
