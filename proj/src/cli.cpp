#include "lcc/cli.hpp"

#include <fstream>
#include <iomanip>
#include <ostream>
#include <sstream>

#include <json.hpp>

namespace lcc::cli {

namespace {

using nlohmann::json;

json load_json(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError("cannot open config file: " + path);
    try {
        return json::parse(in);
    } catch (const json::parse_error& e) {
        throw ConfigError("config " + path + ": " + e.what());
    }
}

std::uint64_t get_u64(const json& j, const std::string& key,
                      std::optional<std::uint64_t> fallback = {}) {
    if (!j.contains(key)) {
        if (fallback) return *fallback;
        throw ConfigError("config: missing field '" + key + "'");
    }
    const json& v = j.at(key);
    if (!v.is_number_unsigned())
        throw ConfigError("config: field '" + key + "' must be a non-negative integer");
    return v.get<std::uint64_t>();
}

std::vector<std::size_t> get_id_list(const json& j, const std::string& key) {
    std::vector<std::size_t> out;
    if (!j.contains(key)) return out;
    const json& v = j.at(key);
    if (!v.is_array())
        throw ConfigError("config: field '" + key + "' must be an array of worker ids");
    for (const json& e : v) {
        if (!e.is_number_unsigned())
            throw ConfigError("config: '" + key + "' entries must be positive integers");
        out.push_back(e.get<std::size_t>());
    }
    return out;
}

ByzantineMode parse_mode(const std::string& s) {
    if (s == "uniform_noise") return ByzantineMode::uniform_noise;
    if (s == "consistent_lie") return ByzantineMode::consistent_lie;
    throw ConfigError("config: adversary mode must be uniform_noise or consistent_lie");
}

std::vector<ElementwiseTerm> canonical_terms(std::size_t degree) {
    if (degree == 0) throw ConfigError("config: elementwise degree must be >= 1");
    if (degree == 1) return {{1, 0, 1}, {0, 1, 1}};
    return {{(degree + 1) / 2, degree / 2, 1}, {1, 0, 1}, {0, 1, 1}};
}

struct Job {
    ProtocolParams params;
    PolyFunction h;
    bool strassen = false;
    std::size_t dim = 0;  // strassen only
};

Job build_job(const RunConfig& cfg) {
    PrimeField field(cfg.q);
    switch (cfg.h.kind) {
        case HSpec::Kind::matmul: {
            const std::size_t width = cfg.b * cfg.sources / cfg.blocks;
            if (cfg.blocks == 0 || cfg.sources == 0 ||
                (cfg.b * cfg.sources) % cfg.blocks != 0 || width != cfg.a)
                throw ConfigError(
                    "config: matmul h needs square blocks (b*S/K must equal a)");
            ProtocolParams params = ProtocolParams::uniform(
                field, cfg.workers, cfg.blocks, cfg.sources, cfg.collusion,
                cfg.byzantine, cfg.stragglers, cfg.a, cfg.b, 2);
            return Job{params, builtin_matmul(cfg.a, cfg.a, cfg.a), false, 0};
        }
        case HSpec::Kind::elementwise: {
            ProtocolParams params = ProtocolParams::uniform(
                field, cfg.workers, cfg.blocks, cfg.sources, cfg.collusion,
                cfg.byzantine, cfg.stragglers, cfg.a, cfg.b, cfg.h.degree);
            PolyFunction h = builtin_elementwise(field, params.w_block,
                                                 canonical_terms(cfg.h.degree),
                                                 cfg.h.degree);
            return Job{params, h, false, 0};
        }
        case HSpec::Kind::strassen: {
            if (cfg.blocks != 7 || cfg.sources != 2)
                throw ConfigError("config: strassen h requires K=7 and S=2");
            if (cfg.h.dim < 2 || cfg.h.dim % 2 != 0)
                throw ConfigError("config: strassen dim must be even and >= 2");
            Shape block{cfg.h.dim / 2, cfg.h.dim / 2};
            EvalPoints pts = EvalPoints::standard(field, 7 + cfg.collusion, cfg.workers);
            ProtocolParams params = ProtocolParams::custom(
                field, cfg.workers, 7, 2, cfg.collusion, cfg.byzantine, cfg.stragglers,
                block, block, 2, std::move(pts));
            PolyFunction h =
                builtin_matmul(block.rows, block.cols, block.cols);
            return Job{params, h, true, cfg.h.dim};
        }
    }
    throw ConfigError("config: unknown h kind");
}

struct RunRow {
    std::string run_id;
    std::uint64_t seed = 0;
    bool success = false;
    std::size_t m_used = 0;
    std::size_t u_src = 0;
    std::size_t u_user = 0;
    std::size_t d_elements = 0;
    std::uint64_t ticks = 0;
};

void write_csv(std::ostream& out, std::span<const RunRow> rows) {
    out << "run_id,seed,success,M_used,U_src,U_user,D_elements,ticks\n";
    for (const RunRow& r : rows)
        out << r.run_id << "," << r.seed << "," << (r.success ? 1 : 0) << ","
            << r.m_used << "," << r.u_src << "," << r.u_user << "," << r.d_elements
            << "," << r.ticks << "\n";
}

void write_table(std::ostream& out, std::span<const RunRow> rows) {
    out << std::left << std::setw(10) << "run_id" << std::setw(14) << "seed"
        << std::setw(9) << "success" << std::setw(8) << "M_used" << std::setw(8)
        << "U_src" << std::setw(8) << "U_user" << std::setw(12) << "D_elements"
        << std::setw(7) << "ticks" << "\n";
    for (const RunRow& r : rows)
        out << std::left << std::setw(10) << r.run_id << std::setw(14) << r.seed
            << std::setw(9) << (r.success ? "yes" : "no") << std::setw(8) << r.m_used
            << std::setw(8) << r.u_src << std::setw(8) << r.u_user << std::setw(12)
            << r.d_elements << std::setw(7) << r.ticks << "\n";
}

void write_json_rows(std::ostream& out, std::span<const RunRow> rows) {
    json arr = json::array();
    for (const RunRow& r : rows) {
        arr.push_back({{"run_id", r.run_id},
                       {"seed", r.seed},
                       {"success", r.success},
                       {"M_used", r.m_used},
                       {"U_src", r.u_src},
                       {"U_user", r.u_user},
                       {"D_elements", r.d_elements},
                       {"ticks", r.ticks}});
    }
    out << arr.dump(2) << "\n";
}

RunRow row_from(const std::string& run_id, std::uint64_t seed, bool success,
                const CostReport& costs) {
    RunRow row;
    row.run_id = run_id;
    row.seed = seed;
    row.success = success;
    row.m_used = costs.responses_used;
    row.u_src = costs.source_upload.empty() ? 0 : costs.source_upload[0];
    row.u_user = costs.user_upload;
    row.d_elements = costs.user_download;
    row.ticks = costs.ticks;
    return row;
}

void emit_rows(const CommonOpts& opts, std::ostream& out,
               std::span<const RunRow> rows) {
    write_table(out, rows);
    if (opts.json) write_json_rows(out, rows);
    if (opts.out_csv) {
        std::ofstream csv(*opts.out_csv);
        if (!csv) throw ConfigError("cannot open output file: " + *opts.out_csv);
        write_csv(csv, rows);
    }
}

} // namespace

RunConfig load_run_config(const std::string& path) {
    const json j = load_json(path);
    RunConfig cfg;
    cfg.q = get_u64(j, "q", cfg.q);
    cfg.workers = get_u64(j, "N");
    cfg.blocks = get_u64(j, "K");
    cfg.sources = get_u64(j, "S", 1);
    cfg.collusion = get_u64(j, "X", 0);
    cfg.byzantine = get_u64(j, "A", 0);
    cfg.stragglers = get_u64(j, "B", 0);
    cfg.a = get_u64(j, "a", 1);
    cfg.b = get_u64(j, "b", 1);
    cfg.seed = get_u64(j, "seed", 1);
    cfg.trials = get_u64(j, "trials", 1);

    if (j.contains("h")) {
        const json& h = j.at("h");
        if (!h.is_object() || !h.contains("type"))
            throw ConfigError("config: 'h' must be an object with a 'type'");
        const std::string type = h.at("type").get<std::string>();
        if (type == "matmul") {
            cfg.h.kind = HSpec::Kind::matmul;
        } else if (type == "elementwise") {
            cfg.h.kind = HSpec::Kind::elementwise;
            cfg.h.degree = get_u64(h, "degree", 2);
        } else if (type == "strassen") {
            cfg.h.kind = HSpec::Kind::strassen;
            cfg.h.dim = get_u64(h, "dim", 4);
        } else {
            throw ConfigError("config: h type must be matmul, elementwise or strassen");
        }
    }

    if (j.contains("adversary")) {
        const json& a = j.at("adversary");
        if (!a.is_object()) throw ConfigError("config: 'adversary' must be an object");
        cfg.adversary.straggler_workers = get_id_list(a, "stragglers");
        cfg.adversary.byzantine_workers = get_id_list(a, "byzantine");
        if (a.contains("mode"))
            cfg.adversary.mode = parse_mode(a.at("mode").get<std::string>());
        cfg.adversary.lie_seed = get_u64(a, "lie_seed", 0);
        if (a.contains("delays")) {
            const json& d = a.at("delays");
            if (!d.is_object())
                throw ConfigError("config: 'delays' must map worker id to ticks");
            for (auto it = d.begin(); it != d.end(); ++it) {
                std::size_t id = 0;
                try {
                    id = std::stoul(it.key());
                } catch (const std::exception&) {
                    throw ConfigError("config: delay key '" + it.key() +
                                      "' is not a worker id");
                }
                if (!it.value().is_number_unsigned())
                    throw ConfigError("config: delay ticks must be non-negative integers");
                cfg.adversary.delays[id] = it.value().get<std::uint64_t>();
            }
        }
    }
    if (j.contains("transcript_out"))
        cfg.transcript_out = j.at("transcript_out").get<std::string>();
    return cfg;
}

int cmd_run(const std::string& config_path, const CommonOpts& opts, std::ostream& out,
            std::ostream& err) {
    RunConfig cfg;
    std::optional<Job> job;
    try {
        cfg = load_run_config(config_path);
        if (opts.seed) cfg.seed = *opts.seed;
        if (opts.trials) cfg.trials = *opts.trials;
        job = build_job(cfg);
        cfg.adversary.validate(job->params);
    } catch (const std::exception& e) {
        err << "error: " << e.what() << "\n";
        return 2;
    }

    std::optional<BilinearConstruction> strassen;
    if (job->strassen) strassen = strassen_2x2(job->params.field);

    auto dump_transcript = [&](const Transcript& tr) {
        std::ofstream log(*cfg.transcript_out + ".log");
        tr.write_log(log);
        std::ofstream bin(*cfg.transcript_out + ".bin", std::ios::binary);
        for (const auto& rec : tr.records)
            bin.write(reinterpret_cast<const char*>(rec.data()),
                      static_cast<std::streamsize>(rec.size()));
    };

    std::vector<RunRow> rows;
    bool any_failure = false;
    for (std::size_t t = 0; t < cfg.trials; ++t) {
        const std::uint64_t run_seed = cfg.seed + t;
        RunOptions ropts;
        ropts.keep_payloads = cfg.transcript_out && t == 0;

        bool success = false;
        CostReport costs;
        if (job->strassen) {
            SeededRng wrng = make_stream(run_seed, "data-w");
            SeededRng urng = make_stream(run_seed, "data-u");
            FieldMatrix w =
                FieldMatrix::random(job->params.field, job->dim, job->dim, wrng);
            FieldMatrix u =
                FieldMatrix::random(job->params.field, job->dim, job->dim, urng);
            BilinearJob bj = bilinear_to_lcc_job(*strassen, w, 2, u);
            RunInputs inputs = RunInputs::from_bilinear(bj);
            RunResult rr = run_protocol(job->params, inputs, job->h, cfg.adversary,
                                        run_seed, ropts);
            success = rr.ok() &&
                      rr.results == plaintext_results(job->params, inputs, job->h) &&
                      recombine(*strassen, rr.results) == w * u;
            costs = rr.costs;
            if (ropts.keep_payloads) dump_transcript(rr.transcript);
        } else {
            SeededRng drng = make_stream(run_seed, "data");
            RunInputs inputs = RunInputs::random_owned(job->params, drng);
            RunResult rr = run_protocol(job->params, inputs, job->h, cfg.adversary,
                                        run_seed, ropts);
            success = rr.ok() &&
                      rr.results == plaintext_results(job->params, inputs, job->h);
            costs = rr.costs;
            if (ropts.keep_payloads) dump_transcript(rr.transcript);
        }
        any_failure = any_failure || !success;
        rows.push_back(row_from(std::to_string(t), run_seed, success, costs));
    }

    try {
        emit_rows(opts, out, rows);
    } catch (const std::exception& e) {
        err << "error: " << e.what() << "\n";
        return 2;
    }
    if (opts.expect_failure) return any_failure ? 0 : 1;
    return any_failure ? 1 : 0;
}

int cmd_strassen_demo(std::size_t dim, std::uint64_t seed, std::ostream& out,
                      std::ostream& err) {
    if (dim < 2 || dim % 2 != 0) {
        err << "error: dimension must be even and >= 2\n";
        return 2;
    }
    PrimeField field(2147483647ULL);
    EvalPoints pts = EvalPoints::standard(field, 9, 20);
    ProtocolParams params = ProtocolParams::custom(
        field, 20, 7, 2, 2, 1, 1, Shape{dim / 2, dim / 2}, Shape{dim / 2, dim / 2}, 2,
        std::move(pts));
    PolyFunction h = builtin_matmul(dim / 2, dim / 2, dim / 2);
    BilinearConstruction strassen = strassen_2x2(field);

    SeededRng wrng = make_stream(seed, "data-w");
    SeededRng urng = make_stream(seed, "data-u");
    FieldMatrix w = FieldMatrix::random(field, dim, dim, wrng);
    FieldMatrix u = FieldMatrix::random(field, dim, dim, urng);
    BilinearJob job = bilinear_to_lcc_job(strassen, w, 2, u);
    RunInputs inputs = RunInputs::from_bilinear(job);

    SeededRng prng = make_stream(seed, "demo-plan");
    AdversaryPlan plan = random_plan(params, ByzantineMode::uniform_noise, prng);

    RunResult rr = run_protocol(params, inputs, h, plan, seed);
    if (!rr.ok()) {
        err << "decode failed: " << to_string(rr.status) << "\n";
        return 1;
    }
    FieldMatrix decoded = recombine(strassen, rr.results);
    const bool match = decoded == w * u;

    out << "workers=" << params.workers << " threshold=" << params.threshold()
        << " byzantine=" << plan.byzantine_workers[0]
        << " straggler=" << plan.straggler_workers[0]
        << " M_used=" << rr.costs.responses_used << "\n";
    if (dim <= 8) {
        out << "decoded product:\n";
        for (std::size_t i = 0; i < decoded.rows(); ++i) {
            for (std::size_t j = 0; j < decoded.cols(); ++j)
                out << decoded.at(i, j).value() << (j + 1 < decoded.cols() ? " " : "");
            out << "\n";
        }
    }
    out << (match ? "MATCH" : "MISMATCH") << "\n";
    return match ? 0 : 1;
}

namespace {

struct AuditConfig {
    std::uint64_t q = 5;
    std::size_t sources = 1, blocks = 1, collusion = 1, workers = 2;
    std::size_t a = 1, b = 0;  // b defaults to K/S (scalar blocks)
    std::size_t probe = 0;     // 0 = derive from X
    std::size_t pairs = 10;
    std::size_t trials = 100000;
    double significance = 0.01;
    std::uint64_t seed = 1;
    bool zero_masks = false;
};

AuditConfig load_audit_config(const std::string& path) {
    const json j = load_json(path);
    AuditConfig cfg;
    cfg.q = get_u64(j, "q");
    cfg.sources = get_u64(j, "S", 1);
    cfg.blocks = get_u64(j, "K", 1);
    cfg.collusion = get_u64(j, "X", 1);
    cfg.workers = get_u64(j, "N");
    cfg.a = get_u64(j, "a", 1);
    cfg.b = get_u64(j, "b", 0);
    cfg.probe = get_u64(j, "probe", 0);
    cfg.pairs = get_u64(j, "pairs", 10);
    cfg.trials = get_u64(j, "trials", 100000);
    cfg.seed = get_u64(j, "seed", 1);
    if (j.contains("significance")) cfg.significance = j.at("significance").get<double>();
    if (j.contains("zero_masks")) cfg.zero_masks = j.at("zero_masks").get<bool>();
    return cfg;
}

ProtocolParams audit_params(const AuditConfig& cfg) {
    PrimeField field(cfg.q);
    const std::size_t b = cfg.b != 0 ? cfg.b : cfg.blocks / cfg.sources;
    return ProtocolParams::uniform(field, cfg.workers, cfg.blocks, cfg.sources,
                                   cfg.collusion, 0, 0, cfg.a, b, 1);
}

RunInputs constant_inputs(const ProtocolParams& params, std::uint64_t value) {
    RunInputs in;
    const std::size_t per_source = params.blocks / params.sources;
    for (std::size_t i = 1; i <= params.sources; ++i) {
        SourceData s;
        s.source_id = i;
        for (std::size_t j = 0; j < per_source; ++j)
            s.blocks.push_back(FieldMatrix::filled(
                params.field, params.w_block.rows, params.w_block.cols, value));
        in.source_contributions.push_back(
            s.contributions(params.blocks, params.sources));
    }
    for (std::size_t j = 0; j < params.blocks; ++j)
        in.user_blocks.push_back(FieldMatrix::filled(
            params.field, params.u_block.rows, params.u_block.cols, value));
    return in;
}

RunInputs random_inputs(const ProtocolParams& params, SeededRng& rng) {
    return RunInputs::random_owned(params, rng);
}

} // namespace

int cmd_audit(const std::string& mode, const std::string& config_path,
              const CommonOpts& opts, std::ostream& out, std::ostream& err) {
    AuditConfig cfg;
    try {
        cfg = load_audit_config(config_path);
        if (opts.seed) cfg.seed = *opts.seed;
        if (opts.trials) cfg.trials = *opts.trials;
    } catch (const std::exception& e) {
        err << "error: " << e.what() << "\n";
        return 2;
    }

    try {
        ProtocolParams params = audit_params(cfg);
        const std::size_t probe =
            cfg.probe != 0 ? cfg.probe : std::max<std::size_t>(cfg.collusion, 1);

        // secret pairs: the extremes first, then seeded random pairs
        std::vector<std::pair<RunInputs, RunInputs>> pairs;
        pairs.emplace_back(constant_inputs(params, 0),
                           constant_inputs(params, cfg.q - 1));
        for (std::size_t p = 0; p < cfg.pairs; ++p) {
            SeededRng ra = make_stream(cfg.seed, "audit-pair-a", p);
            SeededRng rb = make_stream(cfg.seed, "audit-pair-b", p);
            pairs.emplace_back(random_inputs(params, ra), random_inputs(params, rb));
        }

        bool violation = false;
        if (mode == "exhaustive") {
            for (std::size_t p = 0; p < pairs.size() && !violation; ++p) {
                PrivacyReport r = exhaustive_privacy_audit(params, pairs[p].first,
                                                           pairs[p].second, probe);
                out << "pair " << p << ": subsets=" << r.subsets_checked
                    << " mask_space=" << r.mask_space
                    << " identical=" << (r.identical ? "yes" : "no")
                    << " marginals_uniform=" << (r.marginals_uniform ? "yes" : "no")
                    << "\n";
                if (!r.identical) {
                    violation = true;
                    out << "violation: probe {";
                    for (std::size_t i = 0; i < r.offending_subset.size(); ++i)
                        out << (i ? "," : "") << r.offending_subset[i];
                    out << "} distinguishes the secrets\n";
                }
            }
        } else if (mode == "statistical") {
            for (std::size_t p = 0; p < pairs.size() && !violation; ++p) {
                StatOptions sopts;
                sopts.zero_masks = cfg.zero_masks;
                StatReport r = statistical_privacy_audit(
                    params, pairs[p].first, pairs[p].second, probe, cfg.trials,
                    cfg.significance, cfg.seed + p, sopts);
                out << "pair " << p << ": trials=" << r.trials << " coords=" << r.coords
                    << " min_p=" << r.min_p
                    << " rejected=" << (r.rejected ? "yes" : "no") << "\n";
                violation = violation || r.rejected;
            }
        } else {
            err << "error: audit mode must be exhaustive or statistical\n";
            return 2;
        }
        out << (violation ? "PRIVACY VIOLATION" : "privacy audit passed") << "\n";
        return violation ? 1 : 0;
    } catch (const std::invalid_argument& e) {
        err << "refused: " << e.what() << "\n";
        return 2;
    }
}

int cmd_costs(const std::string& config_path, const CommonOpts& opts, std::ostream& out,
              std::ostream& err) {
    RunConfig cfg;
    try {
        cfg = load_run_config(config_path);
        if (opts.seed) cfg.seed = *opts.seed;
        Job job = build_job(cfg);

        const std::size_t m = job.params.threshold();
        const std::size_t analytic_src = job.params.workers * job.params.w_block.elems();
        const std::size_t analytic_user = job.params.workers * job.params.u_block.elems();
        const std::size_t analytic_down = m * job.h.out_shape().elems();

        RunInputs inputs;
        if (job.strassen) {
            BilinearConstruction strassen = strassen_2x2(job.params.field);
            SeededRng wrng = make_stream(cfg.seed, "data-w");
            SeededRng urng = make_stream(cfg.seed, "data-u");
            FieldMatrix w =
                FieldMatrix::random(job.params.field, job.dim, job.dim, wrng);
            FieldMatrix u =
                FieldMatrix::random(job.params.field, job.dim, job.dim, urng);
            inputs = RunInputs::from_bilinear(bilinear_to_lcc_job(strassen, w, 2, u));
        } else {
            SeededRng drng = make_stream(cfg.seed, "data");
            inputs = RunInputs::random_owned(job.params, drng);
        }
        RunResult rr = run_protocol(job.params, inputs, job.h, AdversaryPlan{}, cfg.seed);
        if (!rr.ok()) {
            err << "error: honest dry run failed to decode\n";
            return 1;
        }

        bool all_match = true;
        auto row = [&](const char* name, std::size_t analytic, std::size_t metered) {
            const bool match = analytic == metered;
            all_match = all_match && match;
            out << std::left << std::setw(16) << name << std::setw(12) << analytic
                << std::setw(12) << metered << (match ? "yes" : "NO") << "\n";
        };
        out << std::left << std::setw(16) << "metric" << std::setw(12) << "analytic"
            << std::setw(12) << "metered" << "match\n";
        for (std::size_t i = 0; i < rr.costs.source_upload.size(); ++i)
            row(("source_upload" + std::to_string(i + 1)).c_str(), analytic_src,
                rr.costs.source_upload[i]);
        row("user_upload", analytic_user, rr.costs.user_upload);
        row("download", analytic_down, rr.costs.user_download);
        out << "threshold M=" << m << " responses_used=" << rr.costs.responses_used
            << "\n";
        all_match = all_match && rr.costs.responses_used == m;
        return all_match ? 0 : 1;
    } catch (const std::exception& e) {
        err << "error: " << e.what() << "\n";
        return 2;
    }
}

namespace {

std::vector<std::size_t> get_grid(const json& j, const std::string& key,
                                  std::vector<std::size_t> fallback) {
    if (!j.contains(key)) return fallback;
    const json& v = j.at(key);
    std::vector<std::size_t> out;
    if (v.is_number_unsigned()) {
        out.push_back(v.get<std::size_t>());
    } else if (v.is_array()) {
        for (const json& e : v) out.push_back(e.get<std::size_t>());
    } else {
        throw ConfigError("config: '" + key + "' must be an integer or array");
    }
    if (out.empty()) throw ConfigError("config: '" + key + "' must be non-empty");
    return out;
}

} // namespace

int cmd_sweep(const std::string& config_path, const CommonOpts& opts, std::ostream& out,
              std::ostream& err) {
    try {
        const json j = load_json(config_path);
        const std::uint64_t q = get_u64(j, "q", 2147483647ULL);
        const std::size_t sources = get_u64(j, "S", 1);
        std::uint64_t seed = get_u64(j, "seed", 1);
        std::size_t trials = get_u64(j, "trials", 10);
        if (opts.seed) seed = *opts.seed;
        if (opts.trials) trials = *opts.trials;
        ByzantineMode mode = ByzantineMode::uniform_noise;
        if (j.contains("mode")) mode = parse_mode(j.at("mode").get<std::string>());

        const json grid = j.contains("grid") ? j.at("grid") : json::object();
        auto ks = get_grid(grid, "K", {1});
        auto xs = get_grid(grid, "X", {0});
        auto as = get_grid(grid, "A", {0});
        auto bs = get_grid(grid, "B", {0});
        auto degs = get_grid(grid, "deg", {1});

        PrimeField field(q);
        std::vector<SweepCell> cells;
        for (std::size_t k : ks)
            for (std::size_t x : xs)
                for (std::size_t a : as)
                    for (std::size_t b : bs)
                        for (std::size_t deg : degs) {
                            if (k % sources != 0) continue;
                            const std::size_t m = (k + x - 1) * deg + 2 * a + 1;
                            const std::size_t n = m + b;
                            std::ostringstream label;
                            label << "K=" << k << ",X=" << x << ",A=" << a << ",B=" << b
                                  << ",deg=" << deg << ",N=" << n;
                            ProtocolParams params = ProtocolParams::uniform(
                                field, n, k, sources, x, a, b, 1, k / sources, deg);
                            PolyFunction h = builtin_elementwise(
                                field, params.w_block, canonical_terms(deg), deg);
                            cells.push_back(SweepCell{label.str(), params, h});
                        }

        auto gen = [mode](const ProtocolParams& p, SeededRng& rng) {
            return random_plan(p, mode, rng);
        };
        std::vector<SweepRow> rows =
            sweep(cells, trials, seed, gen, std::max<std::size_t>(opts.threads, 1));

        out << std::left << std::setw(36) << "cell" << std::setw(8) << "trials"
            << std::setw(10) << "successes" << std::setw(8) << "rate" << std::setw(6)
            << "M" << std::setw(10) << "U_src" << std::setw(10) << "U_user"
            << std::setw(10) << "D" << "\n";
        bool all_ok = true;
        std::vector<RunRow> run_rows;
        for (const SweepRow& r : rows) {
            out << std::left << std::setw(36) << r.label << std::setw(8) << r.trials
                << std::setw(10) << r.successes << std::setw(8) << r.success_rate
                << std::setw(6) << r.threshold << std::setw(10) << r.mean_source_upload
                << std::setw(10) << r.mean_user_upload << std::setw(10)
                << r.mean_download << "\n";
            all_ok = all_ok && r.successes == r.trials;
            for (const SweepTrial& t : r.runs)
                run_rows.push_back(row_from(t.run_id, t.seed, t.success, t.costs));
        }
        if (rows.empty()) out << "(empty sweep)\n";
        if (opts.json) write_json_rows(out, run_rows);
        if (opts.out_csv) {
            std::ofstream csv(*opts.out_csv);
            if (!csv) throw ConfigError("cannot open output file: " + *opts.out_csv);
            write_csv(csv, run_rows);
        }
        if (opts.expect_failure) return all_ok ? 1 : 0;
        return all_ok ? 0 : 1;
    } catch (const std::exception& e) {
        err << "error: " << e.what() << "\n";
        return 2;
    }
}

} // namespace lcc::cli
