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

#include "da_guard/protocol_sim.hpp"

#include <algorithm>
#include <limits>
#include <stdexcept>

#include "da_guard/mc_sampler.hpp"
#include "da_guard/rng.hpp"

namespace da_guard::protocol {

namespace {

using commitment::SampleProof;
using mc::Index;
using product::CodedBlock;

// Payload stream, independent of the sampling stream.
constexpr std::uint64_t kPayloadSalt = 0x70617969'6f616421ULL;

template <typename E, std::size_t N>
E parse_enum(const std::string& name, const std::pair<E, const char*> (&table)[N], const char* what) {
    for (const auto& [value, label] : table)
        if (name == label) return value;
    throw std::invalid_argument(std::string("unknown ") + what + ": " + name);
}

constexpr std::pair<ProducerPolicy, const char*> kPolicies[] = {
    {ProducerPolicy::Honest, "honest"},
    {ProducerPolicy::Withholding, "withholding"},
    {ProducerPolicy::ServeQueries, "serve_queries"},
};
constexpr std::pair<FullNodeMode, const char*> kModes[] = {
    {FullNodeMode::Threshold, "threshold"},
    {FullNodeMode::Opportunistic, "opportunistic"},
};

SymbolMatrix draw_payload(const CodeSpec& spec, bool invalid, std::uint64_t seed) {
    rng::Xoshiro256StarStar rng(rng::splitmix64_mix(seed ^ kPayloadSalt));
    const std::uint64_t q = spec.field().order();
    const auto sentinel = sentinel_symbol(spec);
    SymbolMatrix data(spec.k_prime(), spec.k_prime());
    for (auto& v : data.values()) v = static_cast<galois::Symbol>(rng.below(q));
    // A valid payload never starts with the sentinel.
    data(0, 0) = invalid ? sentinel : static_cast<galois::Symbol>(rng.below(q - 1));
    return data;
}

Digest payload_digest(const SymbolMatrix& payload, unsigned q_bits) {
    commitment::Bytes bytes;
    for (auto v : payload.values()) {
        const auto enc = commitment::symbol_bytes(v, q_bits);
        bytes.insert(bytes.end(), enc.begin(), enc.end());
    }
    return commitment::sha256(bytes);
}

std::string hex(const Digest& d) { return commitment::to_hex(d); }

}  // namespace

std::string to_string(ProducerPolicy policy) {
    for (const auto& [value, label] : kPolicies)
        if (value == policy) return label;
    return "?";
}

std::string to_string(FullNodeMode mode) {
    for (const auto& [value, label] : kModes)
        if (value == mode) return label;
    return "?";
}

std::string to_string(Verdict verdict) {
    switch (verdict) {
        case Verdict::Accepted: return "accepted";
        case Verdict::Pending: return "pending";
        case Verdict::Rejected: return "rejected";
    }
    return "?";
}

ProducerPolicy policy_from_string(const std::string& name) { return parse_enum(name, kPolicies, "producer policy"); }
FullNodeMode mode_from_string(const std::string& name) { return parse_enum(name, kModes, "full node mode"); }

galois::Symbol sentinel_symbol(const CodeSpec& spec) { return spec.field().max_element(); }

ValidityPredicate default_validity(const CodeSpec& spec) {
    const auto sentinel = sentinel_symbol(spec);
    return [sentinel](const SymbolMatrix& payload) {
        return payload.rows() == 0 || payload.cols() == 0 || payload(0, 0) != sentinel;
    };
}

void ScenarioConfig::validate() const {
    const CodeSpec cs = spec();
    cs.require_concrete();
    if (m == 0) throw std::invalid_argument("at least one light node is required");
    if (s == 0 || s > cs.n()) throw std::invalid_argument("samples per light node must lie in [1, n'^2]");
    if (cs.n() > std::numeric_limits<Index>::max()) throw std::invalid_argument("block too large to index");
    if (policy == ProducerPolicy::Honest && invalid_payload)
        throw std::invalid_argument("an honest producer does not publish an invalid payload");
}

std::uint64_t ScenarioResult::count(Verdict verdict) const {
    return static_cast<std::uint64_t>(std::count_if(light_nodes.begin(), light_nodes.end(),
                                                    [verdict](const LightNodeReport& r) { return r.verdict == verdict; }));
}

ScenarioResult run_scenario(const ScenarioConfig& config, const ValidityPredicate& valid) {
    config.validate();
    const CodeSpec spec = config.spec();
    const std::uint64_t np = spec.n_prime(), n = spec.n(), m = config.m, s = config.s;
    const ValidityPredicate is_valid = valid ? valid : default_validity(spec);

    // Producer: encode and commit.
    const CodedBlock block = product_encode(spec, draw_payload(spec, config.invalid_payload, config.seed));
    const BlockHeader header = commitment::build_header(block);

    ScenarioResult result;
    result.header_id = header.id();
    result.decode_threshold = spec.decode_threshold();
    result.proof_bits = commitment::proof_bits(spec.q_bits(), np);
    result.light_nodes.assign(m, {});

    // Query round.
    rng::Xoshiro256StarStar rng(config.seed);
    mc::IndexSampler sampler(n);
    std::vector<Index> requests(m * s);
    std::vector<Index> distinct;
    std::vector<std::uint8_t> requested(n, 0);
    for (std::uint64_t node = 0; node < m; ++node) {
        std::span<Index> mine(requests.data() + node * s, s);
        sampler.draw(rng, s, mine);
        for (Index v : mine)
            if (!requested[v]) {
                requested[v] = 1;
                distinct.push_back(v);
            }
    }
    result.distinct_requested = distinct.size();

    // Producer decides what to serve.
    std::vector<std::uint8_t> served(n, 1);
    if (config.policy == ProducerPolicy::Withholding && distinct.size() >= spec.decode_threshold()) {
        const auto hidden = mc::adversary_withhold(distinct, spec.decode_threshold(), rng);
        for (Index v : hidden) served[v] = 0;
        result.withheld = hidden.size();
    }

    // Answer round: light nodes verify and keep proofs for gossip.
    std::vector<SampleProof> gossip;
    for (std::uint64_t node = 0; node < m; ++node) {
        auto& report = result.light_nodes[node];
        for (std::uint64_t i = 0; i < s; ++i) {
            const Index v = requests[node * s + i];
            if (!served[v]) continue;
            SampleProof proof = commitment::open_sample(block, v / np, v % np);
            if (!commitment::verify_sample(header, proof)) continue;
            ++report.answered;
            gossip.push_back(std::move(proof));
        }
        report.verdict = report.answered == s ? Verdict::Accepted : Verdict::Pending;
    }

    // Gossip round: the full node re-verifies everything it is handed.
    CodedBlock held{spec, SymbolMatrix(np, np), product::ErasureMask(np, np, 1)};
    if (config.policy == ProducerPolicy::Honest) {
        held = block;
    } else {
        for (const auto& proof : gossip) {
            if (!commitment::verify_sample(header, proof)) continue;
            held.symbols(proof.row, proof.col) = proof.symbol;
            held.erasures(proof.row, proof.col) = 0;
        }
    }
    result.full_node_symbols = n - held.erasure_count();

    // Decode round.
    result.decode_attempted = config.full_node == FullNodeMode::Opportunistic ||
                              result.full_node_symbols >= spec.decode_threshold();
    if (result.decode_attempted) {
        const auto decoded = product::product_decode(held);
        result.decoded = decoded.ok();
        if (result.decoded && !is_valid(decoded.data)) {
            result.fraud_alert = FraudAlert{result.header_id, payload_digest(decoded.data, spec.q_bits())};
            for (auto& report : result.light_nodes) report.verdict = Verdict::Rejected;
        }
    }

    result.adversary_win = !result.decoded && result.count(Verdict::Accepted) > 0;
    return result;
}

nlohmann::json to_json(const ScenarioConfig& config) {
    return {
        {"q_bits", config.q_bits},
        {"k_prime", config.k_prime},
        {"n_prime", config.n_prime},
        {"m", config.m},
        {"s", config.s},
        {"policy", to_string(config.policy)},
        {"invalid_payload", config.invalid_payload},
        {"full_node", to_string(config.full_node)},
        {"seed", config.seed},
    };
}

ScenarioConfig scenario_config_from_json(const nlohmann::json& doc) {
    ScenarioConfig c;
    c.q_bits = doc.value("q_bits", c.q_bits);
    c.k_prime = doc.value("k_prime", c.k_prime);
    c.n_prime = doc.value("n_prime", c.n_prime);
    c.m = doc.value("m", c.m);
    c.s = doc.value("s", c.s);
    c.policy = policy_from_string(doc.value("policy", to_string(c.policy)));
    c.invalid_payload = doc.value("invalid_payload", c.invalid_payload);
    c.full_node = mode_from_string(doc.value("full_node", to_string(c.full_node)));
    c.seed = doc.value("seed", c.seed);
    return c;
}

nlohmann::json to_json(const ScenarioResult& result) {
    nlohmann::json verdicts = nlohmann::json::array();
    nlohmann::json answered = nlohmann::json::array();
    for (const auto& r : result.light_nodes) {
        verdicts.push_back(to_string(r.verdict));
        answered.push_back(r.answered);
    }
    nlohmann::json alert = nullptr;
    if (result.fraud_alert)
        alert = {{"header_id", hex(result.fraud_alert->header_id)},
                 {"payload_digest", hex(result.fraud_alert->payload_digest)}};
    return {
        {"header_id", hex(result.header_id)},
        {"verdicts", verdicts},
        {"answered", answered},
        {"accepted", result.count(Verdict::Accepted)},
        {"pending", result.count(Verdict::Pending)},
        {"rejected", result.count(Verdict::Rejected)},
        {"distinct_requested", result.distinct_requested},
        {"withheld", result.withheld},
        {"full_node_symbols", result.full_node_symbols},
        {"decode_threshold", result.decode_threshold},
        {"decode_attempted", result.decode_attempted},
        {"decoded", result.decoded},
        {"fraud_alert", alert},
        {"proof_bits", result.proof_bits},
        {"adversary_win", result.adversary_win},
    };
}

}  // namespace da_guard::protocol
