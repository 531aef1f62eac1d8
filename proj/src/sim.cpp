#include "lcc/sim.hpp"

#include <algorithm>
#include <ostream>
#include <set>
#include <sstream>
#include <stdexcept>
#include <thread>

namespace lcc {

const char* to_string(ByzantineMode m) {
    return m == ByzantineMode::uniform_noise ? "uniform_noise" : "consistent_lie";
}

void AdversaryPlan::validate(const ProtocolParams& params) const {
    std::set<std::size_t> seen;
    for (std::size_t id : straggler_workers) {
        if (id == 0 || id > params.workers)
            throw std::invalid_argument("plan: straggler id out of range");
        if (!seen.insert(id).second)
            throw std::invalid_argument("plan: duplicate worker in plan");
    }
    for (std::size_t id : byzantine_workers) {
        if (id == 0 || id > params.workers)
            throw std::invalid_argument("plan: byzantine id out of range");
        if (!seen.insert(id).second)
            throw std::invalid_argument("plan: straggler and byzantine sets overlap");
    }
    for (const auto& [id, tick] : delays) {
        (void)tick;
        if (id == 0 || id > params.workers)
            throw std::invalid_argument("plan: delay id out of range");
    }
}

bool AdversaryPlan::within_budget(const ProtocolParams& params) const {
    return straggler_workers.size() <= params.stragglers &&
           byzantine_workers.size() <= params.byzantine;
}

void Transcript::write_log(std::ostream& out) const {
    out << "# seed=" << seed << " params=" << params_summary << "\n";
    out << "# plan mode=" << to_string(plan.mode) << " stragglers=[";
    for (std::size_t i = 0; i < plan.straggler_workers.size(); ++i)
        out << (i ? "," : "") << plan.straggler_workers[i];
    out << "] byzantine=[";
    for (std::size_t i = 0; i < plan.byzantine_workers.size(); ++i)
        out << (i ? "," : "") << plan.byzantine_workers[i];
    out << "]\n";
    for (const TranscriptEvent& e : events) {
        out << (e.phase == Phase::sharing ? "sharing" : "computing") << " " << e.from
            << " -> " << e.to << " elems=" << e.elements << " digest=" << std::hex
            << e.digest << std::dec << "\n";
    }
    out << "# outcome=" << to_string(outcome) << " used=[";
    for (std::size_t i = 0; i < used_workers.size(); ++i)
        out << (i ? "," : "") << used_workers[i];
    out << "]\n";
}

RunInputs RunInputs::from_source_data(std::span<const SourceData> sources,
                                      const UserData& user,
                                      const ProtocolParams& params) {
    if (sources.size() != params.sources)
        throw std::invalid_argument("inputs: need S sources");
    if (user.blocks.size() != params.blocks)
        throw std::invalid_argument("inputs: need K user blocks");
    RunInputs in;
    for (const SourceData& s : sources)
        in.source_contributions.push_back(
            s.contributions(params.blocks, params.sources));
    in.user_blocks = user.blocks;
    return in;
}

RunInputs RunInputs::from_bilinear(const BilinearJob& job) {
    RunInputs in;
    in.source_contributions = job.source_contributions;
    in.user_blocks = job.user_blocks;
    return in;
}

RunInputs RunInputs::random_owned(const ProtocolParams& params, SeededRng& rng) {
    RunInputs in;
    const std::size_t per_source = params.blocks / params.sources;
    for (std::size_t i = 1; i <= params.sources; ++i) {
        SourceData s;
        s.source_id = i;
        for (std::size_t j = 0; j < per_source; ++j)
            s.blocks.push_back(FieldMatrix::random(
                params.field, params.w_block.rows, params.w_block.cols, rng));
        in.source_contributions.push_back(
            s.contributions(params.blocks, params.sources));
    }
    for (std::size_t j = 0; j < params.blocks; ++j)
        in.user_blocks.push_back(FieldMatrix::random(
            params.field, params.u_block.rows, params.u_block.cols, rng));
    return in;
}

namespace {

void validate_inputs(const ProtocolParams& params, const RunInputs& inputs) {
    if (inputs.source_contributions.size() != params.sources)
        throw std::invalid_argument("inputs: need S contribution vectors");
    for (const auto& contribs : inputs.source_contributions) {
        if (contribs.size() != params.blocks)
            throw std::invalid_argument("inputs: each source contributes K blocks");
        for (const FieldMatrix& m : contribs)
            if (m.shape() != params.w_block)
                throw std::invalid_argument("inputs: W block shape mismatch");
    }
    if (inputs.user_blocks.size() != params.blocks)
        throw std::invalid_argument("inputs: need K user blocks");
    for (const FieldMatrix& m : inputs.user_blocks)
        if (m.shape() != params.u_block)
            throw std::invalid_argument("inputs: U block shape mismatch");
}

std::string summarize(const ProtocolParams& p) {
    std::ostringstream os;
    os << "q=" << p.field.modulus() << ",N=" << p.workers << ",K=" << p.blocks
       << ",S=" << p.sources << ",X=" << p.collusion << ",A=" << p.byzantine
       << ",B=" << p.stragglers << ",deg=" << p.deg_h << ",wblk=" << p.w_block.rows
       << "x" << p.w_block.cols << ",ublk=" << p.u_block.rows << "x"
       << p.u_block.cols;
    return os.str();
}

} // namespace

std::vector<FieldMatrix> plaintext_results(const ProtocolParams& params,
                                           const RunInputs& inputs,
                                           const PolyFunction& h) {
    validate_inputs(params, inputs);
    std::vector<FieldMatrix> out;
    for (std::size_t j = 0; j < params.blocks; ++j) {
        FieldMatrix w = inputs.source_contributions[0][j];
        for (std::size_t i = 1; i < params.sources; ++i)
            w += inputs.source_contributions[i][j];
        out.push_back(h.eval(w, inputs.user_blocks[j]));
    }
    return out;
}

RunResult run_protocol(const ProtocolParams& params, const RunInputs& inputs,
                       const PolyFunction& h, const AdversaryPlan& plan,
                       std::uint64_t seed, const RunOptions& options) {
    params.validate();
    validate_inputs(params, inputs);
    plan.validate(params);
    if (h.w_shape() != params.w_block || h.u_shape() != params.u_block)
        throw std::invalid_argument("run: h domain shapes do not match params");
    if (h.degree() != params.deg_h)
        throw std::invalid_argument("run: h degree does not match params");

    RunResult rr;
    Transcript& tr = rr.transcript;
    tr.seed = seed;
    tr.params_summary = summarize(params);
    tr.plan = plan;

    const std::size_t n = params.workers;
    auto log_message = [&](Phase phase, const std::string& from, const std::string& to,
                           const FieldMatrix& payload, std::size_t worker_id) {
        std::vector<std::uint8_t> bytes = serialize_record(
            make_record(payload, worker_id, params.points.alphas[worker_id - 1]));
        tr.events.push_back(
            TranscriptEvent{phase, from, to, payload.shape().elems(), fnv1a64(bytes)});
        if (options.keep_payloads) tr.records.push_back(std::move(bytes));
    };

    // Sharing: sources
    std::vector<std::vector<Share>> source_shares;  // [S][N]
    for (std::size_t i = 1; i <= params.sources; ++i) {
        SeededRng mask_rng = make_stream(seed, "source-mask", i);
        MaskSet masks = MaskSet::sample(ShareOrigin::source(i), params.collusion,
                                        params.w_block, params.field, mask_rng);
        std::vector<FieldMatrix> nodes = inputs.source_contributions[i - 1];
        for (FieldMatrix& m : masks.masks) nodes.push_back(std::move(m));
        std::vector<FieldMatrix> payloads = lagrange_encode(nodes, params.points);
        std::vector<Share> shares;
        for (std::size_t k = 1; k <= n; ++k) {
            log_message(Phase::sharing, ShareOrigin::source(i).label(),
                        "worker:" + std::to_string(k), payloads[k - 1], k);
            shares.push_back(
                Share{ShareOrigin::source(i), k, std::move(payloads[k - 1])});
        }
        source_shares.push_back(std::move(shares));
    }

    // Sharing: user
    SeededRng user_rng = make_stream(seed, "user-mask");
    MaskSet user_masks = MaskSet::sample(ShareOrigin::user(), params.collusion,
                                         params.u_block, params.field, user_rng);
    std::vector<FieldMatrix> user_nodes = inputs.user_blocks;
    for (FieldMatrix& m : user_masks.masks) user_nodes.push_back(std::move(m));
    std::vector<FieldMatrix> user_payloads = lagrange_encode(user_nodes, params.points);
    for (std::size_t k = 1; k <= n; ++k)
        log_message(Phase::sharing, ShareOrigin::user().label(),
                    "worker:" + std::to_string(k), user_payloads[k - 1], k);

    // Computing
    const std::set<std::size_t> stragglers(plan.straggler_workers.begin(),
                                           plan.straggler_workers.end());
    const std::set<std::size_t> byzantine(plan.byzantine_workers.begin(),
                                          plan.byzantine_workers.end());
    const std::size_t degree_bound =
        (params.blocks + params.collusion - 1) * params.deg_h;

    std::optional<MatrixPolynomial> lie;
    if (plan.mode == ByzantineMode::consistent_lie && !byzantine.empty()) {
        SeededRng lie_rng = plan.lie_seed != 0 ? make_stream(plan.lie_seed, "byz-lie")
                                               : make_stream(seed, "byz-lie");
        lie = MatrixPolynomial::random(params.field, h.out_shape(), degree_bound,
                                       lie_rng);
    }

    std::vector<WorkerResponse> responses;  // worker-index order, responders only
    for (std::size_t k = 1; k <= n; ++k) {
        const FieldElement alpha = params.points.alphas[k - 1];
        if (stragglers.count(k)) continue;

        std::vector<Share> mine;
        for (std::size_t i = 0; i < params.sources; ++i)
            mine.push_back(source_shares[i][k - 1]);
        FieldMatrix agg = aggregate_shares(mine, params.sources);
        FieldMatrix y = worker_compute(agg, user_payloads[k - 1], h);

        if (byzantine.count(k)) {
            if (plan.mode == ByzantineMode::uniform_noise) {
                SeededRng noise = make_stream(seed, "byz-noise", k);
                y = FieldMatrix::random(params.field, y.rows(), y.cols(), noise);
            } else {
                y = lie->eval(alpha);
            }
        }
        log_message(Phase::computing, "worker:" + std::to_string(k), "user", y, k);
        responses.push_back(WorkerResponse{k, alpha, std::move(y)});
    }

    // arrival order: (tick, worker id)
    std::stable_sort(responses.begin(), responses.end(),
                     [&](const WorkerResponse& a, const WorkerResponse& b) {
                         auto tick = [&](std::size_t id) {
                             auto it = plan.delays.find(id);
                             return it == plan.delays.end() ? 0ull : it->second;
                         };
                         std::uint64_t ta = tick(a.worker_id), tb = tick(b.worker_id);
                         return ta != tb ? ta < tb : a.worker_id < b.worker_id;
                     });

    ReconstructResult rec =
        reconstruct(responses, params, h, options.use_all_responses);
    tr.used_workers = rec.used_workers;
    tr.outcome = rec.status;

    rr.status = rec.status;
    rr.needed = rec.needed;
    rr.results = std::move(rec.block_results);
    rr.costs = meter_costs(tr);
    return rr;
}

CostReport meter_costs(const Transcript& transcript) {
    CostReport costs;
    const std::set<std::size_t> used(transcript.used_workers.begin(),
                                     transcript.used_workers.end());
    std::set<std::size_t> responders;
    for (const TranscriptEvent& e : transcript.events) {
        if (e.from.rfind("source:", 0) == 0) {
            std::size_t id = std::stoul(e.from.substr(7));
            if (id == 0) throw std::invalid_argument("transcript: bad source id");
            if (costs.source_upload.size() < id) costs.source_upload.resize(id, 0);
            costs.source_upload[id - 1] += e.elements;
        } else if (e.from == "user") {
            costs.user_upload += e.elements;
        } else if (e.from.rfind("worker:", 0) == 0) {
            std::size_t id = std::stoul(e.from.substr(7));
            responders.insert(id);
            if (used.count(id)) costs.user_download += e.elements;
        } else {
            throw std::invalid_argument("transcript: unknown sender " + e.from);
        }
    }
    for (std::size_t id : used)
        if (!responders.count(id))
            throw std::invalid_argument("transcript: used worker has no response event");
    costs.responses_used = transcript.used_workers.size();
    for (std::size_t id : transcript.used_workers) {
        auto it = transcript.plan.delays.find(id);
        if (it != transcript.plan.delays.end())
            costs.ticks = std::max(costs.ticks, it->second);
    }
    return costs;
}

AdversaryPlan random_plan(const ProtocolParams& params, ByzantineMode mode,
                          SeededRng& rng) {
    std::vector<std::size_t> ids(params.workers);
    for (std::size_t i = 0; i < params.workers; ++i) ids[i] = i + 1;
    // partial Fisher-Yates for the first A + B slots
    const std::size_t picks = params.byzantine + params.stragglers;
    for (std::size_t i = 0; i < picks && i + 1 < ids.size(); ++i) {
        std::size_t j = i + rng.next_u64() % (ids.size() - i);
        std::swap(ids[i], ids[j]);
    }
    AdversaryPlan plan;
    plan.mode = mode;
    for (std::size_t i = 0; i < params.byzantine; ++i)
        plan.byzantine_workers.push_back(ids[i]);
    for (std::size_t i = 0; i < params.stragglers; ++i)
        plan.straggler_workers.push_back(ids[params.byzantine + i]);
    return plan;
}

std::vector<SweepRow> sweep(std::span<const SweepCell> cells, std::size_t trials,
                            std::uint64_t seed, const PlanGenerator& gen,
                            std::size_t threads) {
    if (trials == 0 || cells.empty()) return {};

    struct Task {
        std::size_t cell, trial;
    };
    std::vector<Task> tasks;
    for (std::size_t c = 0; c < cells.size(); ++c)
        for (std::size_t t = 0; t < trials; ++t) tasks.push_back({c, t});

    std::vector<SweepTrial> outcomes(tasks.size());
    auto run_task = [&](std::size_t idx) {
        const Task& task = tasks[idx];
        const SweepCell& cell = cells[task.cell];
        std::uint64_t run_seed =
            make_stream(seed, "sweep-trial", (task.cell << 20) | task.trial).next_u64();
        SeededRng data_rng = make_stream(run_seed, "data");
        RunInputs inputs = RunInputs::random_owned(cell.params, data_rng);
        SeededRng plan_rng = make_stream(run_seed, "plan");
        AdversaryPlan plan = gen(cell.params, plan_rng);
        RunResult rr = run_protocol(cell.params, inputs, cell.h, plan, run_seed);
        bool success =
            rr.ok() && rr.results == plaintext_results(cell.params, inputs, cell.h);
        outcomes[idx] = SweepTrial{std::to_string(task.cell) + "-" +
                                       std::to_string(task.trial),
                                   run_seed, success, rr.costs};
    };

    if (threads <= 1) {
        for (std::size_t i = 0; i < tasks.size(); ++i) run_task(i);
    } else {
        std::vector<std::thread> pool;
        const std::size_t nthreads = std::min(threads, tasks.size());
        for (std::size_t t = 0; t < nthreads; ++t) {
            pool.emplace_back([&, t] {
                for (std::size_t i = t; i < tasks.size(); i += nthreads) run_task(i);
            });
        }
        for (std::thread& th : pool) th.join();
    }

    std::vector<SweepRow> rows(cells.size());
    for (std::size_t c = 0; c < cells.size(); ++c) {
        rows[c].label = cells[c].label;
        rows[c].threshold = cells[c].params.threshold();
    }
    for (std::size_t i = 0; i < tasks.size(); ++i) {
        SweepRow& row = rows[tasks[i].cell];
        const SweepTrial& tr = outcomes[i];
        row.trials += 1;
        row.successes += tr.success ? 1 : 0;
        if (!tr.costs.source_upload.empty())
            row.mean_source_upload += static_cast<double>(tr.costs.source_upload[0]);
        row.mean_user_upload += static_cast<double>(tr.costs.user_upload);
        row.mean_download += static_cast<double>(tr.costs.user_download);
        row.runs.push_back(tr);
    }
    for (SweepRow& row : rows) {
        row.success_rate = static_cast<double>(row.successes) / row.trials;
        row.mean_source_upload /= row.trials;
        row.mean_user_upload /= row.trials;
        row.mean_download /= row.trials;
    }
    return rows;
}

} // namespace lcc
