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
#include <functional>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "da_guard/commitment.hpp"
#include "da_guard/product_code.hpp"

namespace da_guard::protocol {

using commitment::BlockHeader;
using commitment::Digest;
using product::CodeSpec;
using product::SymbolMatrix;

/// How the producer answers sample requests.
enum class ProducerPolicy {
    Honest,        // publishes the whole block to the full node, answers everything
    Withholding,   // adaptive: keeps back the fewest requested symbols that block decoding
    ServeQueries,  // answers every query but never pushes the block to full nodes
};

/// When the honest full node tries to decode.
enum class FullNodeMode {
    Threshold,      // only once it holds decode_threshold distinct symbols
    Opportunistic,  // peels whatever it holds
};

enum class Verdict { Accepted, Pending, Rejected };

std::string to_string(ProducerPolicy policy);
std::string to_string(FullNodeMode mode);
std::string to_string(Verdict verdict);
ProducerPolicy policy_from_string(const std::string& name);
FullNodeMode mode_from_string(const std::string& name);

/// Payload validity rule applied by the full node after decoding.
using ValidityPredicate = std::function<bool(const SymbolMatrix& payload)>;

/// Value planted at payload(0, 0) by an invalid-block producer: the largest
/// field element.
galois::Symbol sentinel_symbol(const CodeSpec& spec);

/// Default rule: the first payload symbol is not the sentinel.
ValidityPredicate default_validity(const CodeSpec& spec);

struct ScenarioConfig {
    unsigned q_bits{8};
    std::uint64_t k_prime{4};
    std::uint64_t n_prime{8};
    std::uint64_t m{1};
    std::uint64_t s{1};
    ProducerPolicy policy{ProducerPolicy::Honest};
    bool invalid_payload{false};
    FullNodeMode full_node{FullNodeMode::Threshold};
    std::uint64_t seed{1};

    CodeSpec spec() const { return CodeSpec(q_bits, k_prime, n_prime); }
    /// Throws std::invalid_argument for a configuration the simulator cannot run.
    void validate() const;
};

struct FraudAlert {
    Digest header_id{};
    Digest payload_digest{};
};

struct LightNodeReport {
    Verdict verdict{Verdict::Pending};
    std::uint64_t answered{0};  // queries answered with a verifying proof
};

struct ScenarioResult {
    Digest header_id{};
    std::vector<LightNodeReport> light_nodes;
    std::uint64_t distinct_requested{0};
    std::uint64_t withheld{0};
    std::uint64_t full_node_symbols{0};  // distinct verified symbols at the full node
    std::uint64_t decode_threshold{0};
    bool decode_attempted{false};
    bool decoded{false};
    std::optional<FraudAlert> fraud_alert;
    std::uint64_t proof_bits{0};  // charged size of one sample proof
    bool adversary_win{false};    // not decoded and some light node Accepted

    std::uint64_t count(Verdict verdict) const;
};

/// One producer, one honest full node and m light nodes, in synchronous
/// rounds: header broadcast, queries, answers with proofs, verification,
/// gossip to the full node, decoding, fraud alert.
///
/// The payload is drawn from a stream derived from `seed`; the queries and
/// the producer's choices consume Xoshiro256StarStar(seed) exactly as one
/// trial of the index-level game does.
ScenarioResult run_scenario(const ScenarioConfig& config, const ValidityPredicate& valid = {});

nlohmann::json to_json(const ScenarioConfig& config);
ScenarioConfig scenario_config_from_json(const nlohmann::json& doc);
nlohmann::json to_json(const ScenarioResult& result);

}  // namespace da_guard::protocol
