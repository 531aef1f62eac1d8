#pragma once

#include <functional>
#include <iosfwd>
#include <map>
#include <string>
#include <vector>

#include "lcc/codec.hpp"
#include "lcc/funcs.hpp"

namespace lcc {

enum class ByzantineMode { uniform_noise, consistent_lie };
const char* to_string(ByzantineMode m);

/// Which workers misbehave and how. Sizes are not clamped to the budgets:
/// over-budget plans are legitimate negative tests.
struct AdversaryPlan {
    std::vector<std::size_t> straggler_workers;  // 1-based ids
    std::vector<std::size_t> byzantine_workers;  // 1-based ids, disjoint
    ByzantineMode mode = ByzantineMode::uniform_noise;
    /// Seed of the alternate degree-bound polynomial the whole byzantine
    /// coalition evaluates in consistent_lie mode; 0 derives it from the
    /// run seed.
    std::uint64_t lie_seed = 0;
    /// Abstract arrival ticks; absent workers arrive at tick 0. Ties are
    /// broken by worker id.
    std::map<std::size_t, std::uint64_t> delays;

    void validate(const ProtocolParams& params) const;
    bool within_budget(const ProtocolParams& params) const;
};

enum class Phase { sharing, computing };

struct TranscriptEvent {
    Phase phase;
    std::string from, to;
    std::size_t elements = 0;
    std::uint64_t digest = 0;

    friend bool operator==(const TranscriptEvent&, const TranscriptEvent&) = default;
};

/// Replayable record of one run: every message in deterministic worker-index
/// order, plus the run inputs' identity (seed, params, plan) and outcome.
struct Transcript {
    std::uint64_t seed = 0;
    std::string params_summary;
    AdversaryPlan plan;
    std::vector<TranscriptEvent> events;
    std::vector<std::size_t> used_workers;
    DecodeStatus outcome = DecodeStatus::decoding_failure;
    /// Serialized wire records of every message, kept only on request.
    std::vector<std::vector<std::uint8_t>> records;

    void write_log(std::ostream& out) const;
};

struct CostReport {
    std::vector<std::size_t> source_upload;  // field elements, per source
    std::size_t user_upload = 0;
    std::size_t user_download = 0;  // elements of the used responses only
    std::size_t responses_used = 0;
    std::uint64_t ticks = 0;
};

/// Protocol inputs in additive form: source i contributes
/// source_contributions[i-1][j] at data node j, and the j-th decoded block
/// is h(sum_i contribution_ij, user_block_j). Plain per-source data uses
/// SourceData::contributions to zero-pad into this form.
struct RunInputs {
    std::vector<std::vector<FieldMatrix>> source_contributions;  // [S][K]
    std::vector<FieldMatrix> user_blocks;                        // [K]

    static RunInputs from_source_data(std::span<const SourceData> sources,
                                      const UserData& user,
                                      const ProtocolParams& params);
    static RunInputs from_bilinear(const BilinearJob& job);
    /// Uniform random data with each source owning its K/S slots.
    static RunInputs random_owned(const ProtocolParams& params, SeededRng& rng);
};

struct RunOptions {
    bool keep_payloads = false;
    bool use_all_responses = false;
};

struct RunResult {
    DecodeStatus status = DecodeStatus::decoding_failure;
    std::size_t needed = 0;
    std::vector<FieldMatrix> results;  // K matrices on ok
    CostReport costs;
    Transcript transcript;

    bool ok() const { return status == DecodeStatus::ok; }
};

/// What an all-honest computation would produce; the oracle every test and
/// CLI run compares against.
std::vector<FieldMatrix> plaintext_results(const ProtocolParams& params,
                                           const RunInputs& inputs,
                                           const PolyFunction& h);

/// Sharing -> Computing -> Reconstruction with fault injection and exact
/// cost metering. Deterministic in (params, inputs, plan, seed).
RunResult run_protocol(const ProtocolParams& params, const RunInputs& inputs,
                       const PolyFunction& h, const AdversaryPlan& plan,
                       std::uint64_t seed, const RunOptions& options = {});

/// Recount costs from a transcript's event log; throws on malformed logs.
CostReport meter_costs(const Transcript& transcript);

/// Exactly B stragglers and A byzantine workers, placed uniformly.
AdversaryPlan random_plan(const ProtocolParams& params, ByzantineMode mode,
                          SeededRng& rng);

struct SweepCell {
    std::string label;
    ProtocolParams params;
    PolyFunction h;
};

struct SweepTrial {
    std::string run_id;
    std::uint64_t seed = 0;
    bool success = false;
    CostReport costs;
};

struct SweepRow {
    std::string label;
    std::size_t trials = 0;
    std::size_t successes = 0;
    double success_rate = 0.0;
    std::size_t threshold = 0;
    double mean_source_upload = 0.0;
    double mean_user_upload = 0.0;
    double mean_download = 0.0;
    std::vector<SweepTrial> runs;
};

using PlanGenerator =
    std::function<AdversaryPlan(const ProtocolParams&, SeededRng&)>;

/// Per-cell trials with fresh random data and adversary placements; success
/// means the run decoded and matched the plaintext oracle exactly. With zero
/// trials the table is empty.
std::vector<SweepRow> sweep(std::span<const SweepCell> cells, std::size_t trials,
                            std::uint64_t seed, const PlanGenerator& gen,
                            std::size_t threads = 1);

} // namespace lcc
