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

#include "da_guard/cli.hpp"

#include <CLI11.hpp>
#include <json.hpp>

#include <charconv>
#include <cstdlib>
#include <fstream>
#include <functional>
#include <iostream>
#include <optional>
#include <sstream>
#include <string_view>
#include <thread>

#include "da_guard/analysis.hpp"
#include "da_guard/commitment.hpp"
#include "da_guard/mc_sampler.hpp"
#include "da_guard/optimizer.hpp"
#include "da_guard/protocol_sim.hpp"
#include "da_guard/rng.hpp"

#ifndef DA_GUARD_VERSION
#define DA_GUARD_VERSION "0.0.0"
#endif

namespace da_guard::cli {

namespace {

using nlohmann::json;

constexpr const char* kTool = "da_guard";
constexpr std::uint64_t kDefaultSeed = 0x5eed'da7a'0001ULL;
constexpr const char* kThreadsEnv = "DA_GUARD_THREADS";
constexpr unsigned kMaxThreads = 1024;

// Strict decimal in [1, kMaxThreads].
std::optional<unsigned> parse_threads(std::string_view text) {
    unsigned v = 0;
    const auto [end, ec] = std::from_chars(text.data(), text.data() + text.size(), v);
    if (ec != std::errc{} || end != text.data() + text.size() || v == 0 || v > kMaxThreads) return std::nullopt;
    return v;
}

struct IoError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct Outputs {
    std::string csv;   // optional CSV path
    std::string json;  // optional copy of the stdout document
};

json make_manifest(const std::string& subcommand, json parameters, std::optional<std::uint64_t> seed,
                   const Outputs& outputs) {
    json paths = json::array();
    if (!outputs.csv.empty()) paths.push_back(outputs.csv);
    if (!outputs.json.empty()) paths.push_back(outputs.json);
    json m = {{"tool", kTool},
              {"version", DA_GUARD_VERSION},
              {"subcommand", subcommand},
              {"parameters", std::move(parameters)},
              {"outputs", paths}};
    m["seed"] = seed ? json(*seed) : json(nullptr);
    return m;
}

void write_file(const std::string& path, const std::string& content) {
    std::ofstream f(path, std::ios::binary);
    if (!f) throw IoError("cannot open " + path + " for writing");
    f << content;
    if (!f.flush()) throw IoError("write failed: " + path);
}

// Emits the result document and any files; CSV files get a sibling manifest.
void emit(std::ostream& out, const json& manifest, json result, const Outputs& outputs, const std::string& csv) {
    if (!outputs.csv.empty()) {
        write_file(outputs.csv, csv);
        write_file(outputs.csv + ".manifest.json", manifest.dump(2) + "\n");
    }
    const json doc = {{"manifest", manifest}, {"result", std::move(result)}};
    const std::string text = doc.dump(2) + "\n";
    if (!outputs.json.empty()) write_file(outputs.json, text);
    out << text;
}

void add_outputs(CLI::App* sub, Outputs& o, bool csv) {
    if (csv) sub->add_option("--csv", o.csv, "Write rows to this CSV file (manifest beside it)");
    sub->add_option("--json", o.json, "Also write the JSON document to this file");
}

json epsilon_json(const analysis::EpsilonDetails& d) {
    return {{"epsilon", d.epsilon},       {"x_star", d.x_star},         {"x_hat", d.x_hat},
            {"withheld", d.withheld},     {"miss_ratio", d.miss_ratio}, {"regime", analysis::to_string(d.regime)}};
}

// Simulation grid row in CSV.
std::string simulate_csv_header() { return "n,gamma_n,m,s,trials,successes,epsilon_mc,ci95_low,ci95_high,epsilon_theory\n"; }

}  // namespace

int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
    CLI::App app{"Data availability sampling analysis, simulation and optimization"};
    app.name(kTool);
    app.require_subcommand(1);
    app.set_config("--config", "", "Read options from a key = value file; command-line flags win");
    app.set_version_flag("--version", DA_GUARD_VERSION);

    unsigned threads = 1;
    auto* threads_opt = app.add_option("--threads", threads, "Worker threads (results do not depend on it); "
                                       "falls back to $" + std::string(kThreadsEnv))
                            ->check(CLI::Range(1u, kMaxThreads));

    std::function<void()> action;
    Outputs outputs;

    // epsilon ------------------------------------------------------------
    struct {
        std::uint64_t n{0}, gamma_n{0}, m{1}, s{1}, block_bits{optimizer::kDefaultBlockBits}, n_prime{0};
        unsigned q_bits{0};
    } ep;
    auto* eps = app.add_subcommand("epsilon", "Adversarial success probability at the expected union size");
    auto* ep_n = eps->add_option("--n", ep.n, "Coded symbols");
    auto* ep_g = eps->add_option("--gamma-n", ep.gamma_n, "Known symbols that guarantee decoding");
    auto* ep_q = eps->add_option("--q-bits", ep.q_bits, "log2 of the field size");
    auto* ep_np = eps->add_option("--n-prime", ep.n_prime, "Component code length");
    eps->add_option("--block-bits", ep.block_bits, "Block size in bits")->capture_default_str();
    eps->add_option("--m", ep.m, "Light nodes")->required();
    eps->add_option("--s", ep.s, "Samples per light node")->required();
    ep_n->needs(ep_g);
    ep_g->needs(ep_n);
    ep_q->needs(ep_np);
    ep_np->needs(ep_q);
    ep_n->excludes(ep_q);
    ep_q->excludes(ep_n);
    add_outputs(eps, outputs, false);
    eps->callback([&] {
        action = [&] {
            json params = {{"m", ep.m}, {"s", ep.s}};
            analysis::SamplingModel model{.n = ep.n, .gamma_n = ep.gamma_n, .m = ep.m, .s = ep.s};
            if (ep_q->count()) {
                const auto spec = product::make_code_spec(ep.q_bits, ep.block_bits, ep.n_prime);
                model.n = spec.n();
                model.gamma_n = spec.decode_threshold();
                params.update({{"q_bits", ep.q_bits}, {"block_bits", ep.block_bits}, {"n_prime", ep.n_prime}});
            } else if (ep_n->count()) {
                params.update({{"n", ep.n}, {"gamma_n", ep.gamma_n}});
            } else {
                throw CLI::ValidationError("epsilon", "give either --n/--gamma-n or --q-bits/--n-prime");
            }
            json result = epsilon_json(analysis::epsilon_details(model));
            result["n"] = model.n;
            result["gamma_n"] = model.gamma_n;
            emit(out, make_manifest("epsilon", params, std::nullopt, outputs), result, outputs, "");
        };
    });

    // nodec --------------------------------------------------------------
    struct {
        std::uint64_t n{0}, gamma_n{0}, m{1}, s{1};
        double beta{1.0};
        std::string method{"floating"};
    } nd;
    auto* nodec = app.add_subcommand("nodec", "Probability that the full nodes cannot decode");
    nodec->add_option("--n", nd.n, "Coded symbols")->required();
    nodec->add_option("--gamma-n", nd.gamma_n, "Known symbols that guarantee decoding")->required();
    nodec->add_option("--m", nd.m, "Light nodes")->required();
    nodec->add_option("--s", nd.s, "Samples per light node")->required();
    nodec->add_option("--beta", nd.beta, "Fraction of the block initially hidden")->capture_default_str();
    nodec->add_option("--method", nd.method, "floating | exact")
        ->check(CLI::IsMember({"floating", "exact"}))
        ->capture_default_str();
    add_outputs(nodec, outputs, false);
    nodec->callback([&] {
        action = [&] {
            const analysis::SamplingModel model{.n = nd.n, .gamma_n = nd.gamma_n, .m = nd.m, .s = nd.s, .beta = nd.beta};
            const auto method = nd.method == "exact" ? analysis::CdfMethod::Exact : analysis::CdfMethod::Floating;
            const json params = {{"n", nd.n}, {"gamma_n", nd.gamma_n}, {"m", nd.m},
                                 {"s", nd.s}, {"beta", nd.beta},       {"method", nd.method}};
            const json result = {{"prob_no_decode", analysis::prob_no_decode(model, method)}};
            emit(out, make_manifest("nodec", params, std::nullopt, outputs), result, outputs, "");
        };
    });

    // simulate -----------------------------------------------------------
    struct {
        std::uint64_t n{0}, gamma_n{0}, trials{10000}, seed{kDefaultSeed};
        std::vector<std::uint64_t> m, s;
    } sm;
    auto* sim = app.add_subcommand("simulate", "Monte Carlo estimate of the adversarial success probability");
    sim->add_option("--n", sm.n, "Coded symbols")->required();
    sim->add_option("--gamma-n", sm.gamma_n, "Known symbols that guarantee decoding")->required();
    sim->add_option("--m", sm.m, "Light nodes (comma-separated list allowed)")->required()->delimiter(',');
    sim->add_option("--s", sm.s, "Samples per light node (comma-separated list allowed)")->required()->delimiter(',');
    sim->add_option("--trials", sm.trials, "Trials per grid point")->capture_default_str()->check(CLI::PositiveNumber);
    sim->add_option("--seed", sm.seed, "Master seed")->capture_default_str();
    add_outputs(sim, outputs, true);
    sim->callback([&] {
        action = [&] {
            const json params = {{"n", sm.n}, {"gamma_n", sm.gamma_n}, {"m", sm.m}, {"s", sm.s}, {"trials", sm.trials}};
            json rows = json::array();
            std::ostringstream csv;
            csv << simulate_csv_header();
            std::uint64_t point = 0;
            for (auto m : sm.m) {
                for (auto s : sm.s) {
                    mc::TrialConfig tc{{.n = sm.n, .gamma_n = sm.gamma_n, .m = m, .s = s}, sm.trials,
                                       rng::stream_seed(sm.seed, point++)};
                    const auto est = mc::run_trials(tc, threads);
                    const double theory = analysis::epsilon_simplified(tc.model);
                    rows.push_back({{"m", m},
                                    {"s", s},
                                    {"trials", est.trials},
                                    {"successes", est.successes},
                                    {"epsilon_mc", est.point},
                                    {"ci95_low", est.ci95_low},
                                    {"ci95_high", est.ci95_high},
                                    {"epsilon_theory", theory}});
                    csv << sm.n << ',' << sm.gamma_n << ',' << m << ',' << s << ',' << est.trials << ','
                        << est.successes << ',' << optimizer::format_double(est.point) << ','
                        << optimizer::format_double(est.ci95_low) << ',' << optimizer::format_double(est.ci95_high)
                        << ',' << optimizer::format_double(theory) << '\n';
                }
            }
            const json result = {{"n", sm.n}, {"gamma_n", sm.gamma_n}, {"rows", rows}};
            emit(out, make_manifest("simulate", params, sm.seed, outputs), result, outputs, csv.str());
        };
    });

    // optimize -----------------------------------------------------------
    optimizer::ProtocolConfig op;
    auto* opt = app.add_subcommand("optimize", "Sweep the component length for the smallest download");
    opt->add_option("--q-bits", op.q_bits, "log2 of the field size")->required()->check(CLI::PositiveNumber);
    opt->add_option("--block-bits", op.block_bits, "Block size in bits")->capture_default_str()->check(CLI::PositiveNumber);
    opt->add_option("--m", op.m, "Light nodes")->required()->check(CLI::PositiveNumber);
    opt->add_option("--target", op.epsilon_target, "Target adversarial success probability")->capture_default_str();
    opt->add_option("--n-prime-max", op.n_prime_max, "Largest component length swept (0: 8k')")->capture_default_str();
    add_outputs(opt, outputs, true);
    opt->callback([&] {
        action = [&] {
            const json params = {{"q_bits", op.q_bits}, {"block_bits", op.block_bits}, {"m", op.m},
                                 {"target", op.epsilon_target}, {"n_prime_max", op.n_prime_max},
                                 {"digest_bits", op.digest_bits}};
            const auto sweep = optimizer::sweep_rates(op, threads);
            std::ostringstream csv;
            optimizer::write_sweep_csv(csv, sweep.points);
            emit(out, make_manifest("optimize", params, std::nullopt, outputs), optimizer::to_json(sweep), outputs,
                 csv.str());
        };
    });

    // table --------------------------------------------------------------
    optimizer::ProtocolConfig tb;
    std::vector<unsigned> q_list = optimizer::default_q_list();
    auto* tab = app.add_subcommand("table", "Optimal component rate for each field size, with the rate-1/2 baseline");
    tab->add_option("--q-list", q_list, "log2 field sizes")->delimiter(',')->capture_default_str();
    tab->add_option("--block-bits", tb.block_bits, "Block size in bits")->capture_default_str()->check(CLI::PositiveNumber);
    tab->add_option("--m", tb.m, "Light nodes")->capture_default_str()->check(CLI::PositiveNumber);
    tab->add_option("--target", tb.epsilon_target, "Target adversarial success probability")->capture_default_str();
    tab->add_option("--n-prime-max", tb.n_prime_max, "Largest component length swept (0: 8k')")->capture_default_str();
    add_outputs(tab, outputs, true);
    tab->callback([&] {
        action = [&] {
            if (q_list.empty()) throw CLI::ValidationError("--q-list", "needs at least one value");
            const json params = {{"q_list", q_list}, {"block_bits", tb.block_bits}, {"m", tb.m},
                                 {"target", tb.epsilon_target}, {"n_prime_max", tb.n_prime_max},
                                 {"digest_bits", tb.digest_bits}};
            const auto rows = optimizer::table_one(tb, q_list, threads);
            std::ostringstream csv;
            optimizer::write_table_csv(csv, rows);
            emit(out, make_manifest("table", params, std::nullopt, outputs), optimizer::to_json(rows), outputs,
                 csv.str());
        };
    });

    // curve --------------------------------------------------------------
    struct {
        double rate{0.25}, target{0.01};
        unsigned q_bits{256};
        std::uint64_t block_bits{optimizer::kDefaultBlockBits};
        std::vector<std::uint64_t> m_list;
    } cv;
    for (unsigned e = 4; e <= 20; ++e) cv.m_list.push_back(std::uint64_t{1} << e);
    auto* cur = app.add_subcommand("curve", "Minimum samples against the number of light nodes");
    cur->add_option("--rate", cv.rate, "Component code rate")->capture_default_str();
    cur->add_option("--q-bits", cv.q_bits, "log2 of the field size")->capture_default_str()->check(CLI::PositiveNumber);
    cur->add_option("--block-bits", cv.block_bits, "Block size in bits")->capture_default_str()->check(CLI::PositiveNumber);
    cur->add_option("--target", cv.target, "Target adversarial success probability")->capture_default_str();
    cur->add_option("--m-list", cv.m_list, "Light node counts")->delimiter(',')->capture_default_str();
    add_outputs(cur, outputs, true);
    cur->callback([&] {
        action = [&] {
            const json params = {{"rate", cv.rate},     {"q_bits", cv.q_bits}, {"block_bits", cv.block_bits},
                                 {"target", cv.target}, {"m_list", cv.m_list}};
            const auto points = optimizer::samples_vs_m_curve(cv.rate, cv.q_bits, cv.block_bits, cv.target, cv.m_list);
            std::ostringstream csv;
            optimizer::write_curve_csv(csv, points);
            emit(out, make_manifest("curve", params, std::nullopt, outputs), optimizer::to_json(points), outputs,
                 csv.str());
        };
    });

    // demo ---------------------------------------------------------------
    protocol::ScenarioConfig dm;
    dm.seed = kDefaultSeed;
    std::string policy = "honest", full_node = "threshold";
    auto* demo = app.add_subcommand("demo", "Run one protocol scenario with the real codec and commitments");
    demo->add_option("--n-prime", dm.n_prime, "Component code length")->capture_default_str();
    demo->add_option("--k-prime", dm.k_prime, "Component code dimension")->capture_default_str();
    demo->add_option("--q-bits", dm.q_bits, "Field width: 8 or 16")->capture_default_str()->check(CLI::IsMember({8u, 16u}));
    demo->add_option("--m", dm.m, "Light nodes")->capture_default_str();
    demo->add_option("--s", dm.s, "Samples per light node")->capture_default_str();
    demo->add_option("--policy", policy, "honest | withholding | serve_queries")
        ->capture_default_str()
        ->check(CLI::IsMember({"honest", "withholding", "serve_queries"}));
    demo->add_flag("--invalid-payload", dm.invalid_payload, "Producer publishes an invalid payload");
    demo->add_option("--full-node", full_node, "threshold | opportunistic")
        ->capture_default_str()
        ->check(CLI::IsMember({"threshold", "opportunistic"}));
    demo->add_option("--seed", dm.seed, "Scenario seed")->capture_default_str();
    add_outputs(demo, outputs, false);
    demo->callback([&] {
        action = [&] {
            dm.policy = protocol::policy_from_string(policy);
            dm.full_node = protocol::mode_from_string(full_node);
            json params = protocol::to_json(dm);
            params.erase("seed");
            const auto result = protocol::run_scenario(dm);
            json doc = protocol::to_json(result);
            doc["proof_bits_formula"] = commitment::proof_bits(dm.q_bits, dm.n_prime);
            emit(out, make_manifest("demo", params, dm.seed, outputs), doc, outputs, "");
        };
    });

    // encode -------------------------------------------------------------
    struct {
        unsigned q_bits{8};
        std::uint64_t k_prime{4}, n_prime{8}, seed{kDefaultSeed};
        std::size_t row{0}, col{0};
        std::string axis{"row"};
    } en;
    auto* enc = app.add_subcommand("encode", "Encode a random block, commit to it and open one sample");
    enc->add_option("--q-bits", en.q_bits, "Field width: 8 or 16")->capture_default_str()->check(CLI::IsMember({8u, 16u}));
    enc->add_option("--k-prime", en.k_prime, "Component code dimension")->capture_default_str();
    enc->add_option("--n-prime", en.n_prime, "Component code length")->capture_default_str();
    enc->add_option("--row", en.row, "Sample row")->capture_default_str();
    enc->add_option("--col", en.col, "Sample column")->capture_default_str();
    enc->add_option("--axis", en.axis, "row | column")->capture_default_str()->check(CLI::IsMember({"row", "column"}));
    enc->add_option("--seed", en.seed, "Payload seed")->capture_default_str();
    add_outputs(enc, outputs, false);
    enc->callback([&] {
        action = [&] {
            const product::CodeSpec spec(en.q_bits, en.k_prime, en.n_prime);
            spec.require_concrete();
            rng::Xoshiro256StarStar rng(en.seed);
            product::SymbolMatrix data(en.k_prime, en.k_prime);
            for (auto& v : data.values()) v = static_cast<galois::Symbol>(rng.below(spec.field().order()));
            const auto block = product::product_encode(spec, data);
            const auto header = commitment::build_header(block);
            const auto proof = commitment::open_sample(block, en.row, en.col, commitment::axis_from_string(en.axis));
            json rows = json::array(), cols = json::array(), path = json::array();
            for (const auto& d : header.row_roots) rows.push_back(commitment::to_hex(d));
            for (const auto& d : header.col_roots) cols.push_back(commitment::to_hex(d));
            for (const auto& d : proof.path) path.push_back(commitment::to_hex(d));
            const json result = {
                {"header",
                 {{"id", commitment::to_hex(header.id())},
                  {"digest_bits", header.digest_bits()},
                  {"encoded_bytes", header.serialize().size()},
                  {"row_roots", rows},
                  {"col_roots", cols}}},
                {"sample",
                 {{"row", proof.row},
                  {"col", proof.col},
                  {"axis", commitment::to_string(proof.axis)},
                  {"symbol", proof.symbol},
                  {"path", path},
                  {"payload_bits", proof.payload(en.q_bits).size() * 8},
                  {"proof_bits", commitment::proof_bits(en.q_bits, en.n_prime)},
                  {"verified", commitment::verify_sample(header, proof)}}},
            };
            const json params = {{"q_bits", en.q_bits}, {"k_prime", en.k_prime}, {"n_prime", en.n_prime},
                                 {"row", en.row},       {"col", en.col},         {"axis", en.axis}};
            emit(out, make_manifest("encode", params, en.seed, outputs), result, outputs, "");
        };
    });

    auto fail = [&](const char* type, const std::string& message, int code) {
        err << json{{"error", {{"type", type}, {"message", message}}}}.dump() << "\n";
        return code;
    };

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp&) {
        out << app.help();
        return kExitOk;
    } catch (const CLI::CallForAllHelp&) {
        out << app.help("", CLI::AppFormatMode::All);
        return kExitOk;
    } catch (const CLI::CallForVersion& e) {
        out << e.what() << "\n";
        return kExitOk;
    } catch (const CLI::ParseError& e) {
        return fail("usage", e.what(), kExitUsage);
    }

    if (threads_opt->count() == 0) {
        if (const char* env = std::getenv(kThreadsEnv)) {
            const auto parsed = parse_threads(env);
            if (!parsed) return fail("usage", std::string(kThreadsEnv) + " must be an integer in [1, 1024]", kExitUsage);
            threads = *parsed;
        }
    }

    try {
        if (action) action();
        return kExitOk;
    } catch (const CLI::ParseError& e) {
        return fail("usage", e.what(), kExitUsage);
    } catch (const optimizer::NoFeasibleS& e) {
        return fail("no_feasible_s", e.what(), kExitRuntime);
    } catch (const analysis::DomainError& e) {
        return fail("domain_error", e.what(), kExitRuntime);
    } catch (const IoError& e) {
        return fail("io_error", e.what(), kExitRuntime);
    } catch (const std::invalid_argument& e) {
        return fail("invalid_argument", e.what(), kExitRuntime);
    } catch (const std::out_of_range& e) {
        return fail("out_of_range", e.what(), kExitRuntime);
    } catch (const std::exception& e) {
        return fail("internal", e.what(), kExitRuntime);
    }
}

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
    std::vector<const char*> argv{kTool};
    for (const auto& a : args) argv.push_back(a.c_str());
    return run(static_cast<int>(argv.size()), argv.data(), out, err);
}

}  // namespace da_guard::cli
