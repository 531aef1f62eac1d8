#include "lcc/audit.hpp"

#include <algorithm>
#include <cmath>
#include <set>
#include <stdexcept>

namespace lcc {

namespace {

double gamma_series(double a, double x) {
    double ap = a;
    double sum = 1.0 / a;
    double del = sum;
    for (int i = 0; i < 1000; ++i) {
        ap += 1.0;
        del *= x / ap;
        sum += del;
        if (std::fabs(del) < std::fabs(sum) * 1e-15) break;
    }
    return sum * std::exp(-x + a * std::log(x) - std::lgamma(a));
}

double gamma_contfrac(double a, double x) {
    const double fpmin = 1e-300;
    double b = x + 1.0 - a;
    double c = 1.0 / fpmin;
    double d = 1.0 / b;
    double h = d;
    for (int i = 1; i < 1000; ++i) {
        double an = -static_cast<double>(i) * (i - a);
        b += 2.0;
        d = an * d + b;
        if (std::fabs(d) < fpmin) d = fpmin;
        c = b + an / c;
        if (std::fabs(c) < fpmin) c = fpmin;
        d = 1.0 / d;
        double del = d * c;
        h *= del;
        if (std::fabs(del - 1.0) < 1e-15) break;
    }
    return std::exp(-x + a * std::log(x) - std::lgamma(a)) * h;
}

double gamma_p(double a, double x) {
    if (x <= 0.0) return 0.0;
    if (x < a + 1.0) return gamma_series(a, x);
    return 1.0 - gamma_contfrac(a, x);
}

std::uint64_t mulmod(std::uint64_t a, std::uint64_t b, std::uint64_t m) {
    return static_cast<std::uint64_t>(static_cast<unsigned __int128>(a) * b % m);
}
std::uint64_t addmod(std::uint64_t a, std::uint64_t b, std::uint64_t m) {
    std::uint64_t s = a + b;
    if (s >= m || s < a) s -= m;
    return s;
}

/// Enumerates fixed-size index combinations in lexicographic order.
class Combinations {
public:
    Combinations(std::size_t n, std::size_t k) : n_(n), k_(k) {
        for (std::size_t i = 0; i < k; ++i) idx_.push_back(i);
        done_ = k > n;
    }
    bool done() const { return done_; }
    const std::vector<std::size_t>& current() const { return idx_; }
    void next() {
        if (k_ == 0) {
            done_ = true;
            return;
        }
        std::size_t i = k_;
        while (i-- > 0) {
            if (idx_[i] + 1 <= n_ - k_ + i) {
                ++idx_[i];
                for (std::size_t j = i + 1; j < k_; ++j) idx_[j] = idx_[j - 1] + 1;
                return;
            }
        }
        done_ = true;
    }

private:
    std::size_t n_, k_;
    std::vector<std::size_t> idx_;
    bool done_ = false;
};

} // namespace

double chi_square_p_value(double stat, std::size_t df) {
    if (df == 0) return 1.0;
    if (stat <= 0.0) return 1.0;
    return 1.0 - gamma_p(df / 2.0, stat / 2.0);
}

void CollusionProbe::validate(const ProtocolParams& params) const {
    std::set<std::size_t> seen;
    for (std::size_t id : workers) {
        if (id == 0 || id > params.workers)
            throw std::invalid_argument("probe: worker id out of range");
        if (!seen.insert(id).second)
            throw std::invalid_argument("probe: duplicate worker id");
    }
}

CauchyReport check_cauchy_points(std::span<const FieldElement> alphas,
                                 std::span<const FieldElement> mask_betas,
                                 std::size_t max_subsets) {
    const std::size_t x = mask_betas.size();
    if (x == 0) return {};
    std::set<std::uint64_t> beta_vals;
    for (FieldElement b : mask_betas)
        if (!beta_vals.insert(b.value()).second)
            throw std::invalid_argument("cauchy check: duplicate mask nodes");
    if (alphas.size() < x)
        throw std::invalid_argument("cauchy check: fewer alphas than mask nodes");

    // subset count guard: C(n, x) computed with early exit
    double count = 1.0;
    for (std::size_t i = 0; i < x; ++i)
        count *= static_cast<double>(alphas.size() - i) / static_cast<double>(i + 1);
    if (count > static_cast<double>(max_subsets))
        throw std::invalid_argument("cauchy check: too many subsets to enumerate (max " +
                                    std::to_string(max_subsets) + ")");

    CauchyReport report;
    for (Combinations comb(alphas.size(), x); !comb.done(); comb.next()) {
        const std::vector<std::size_t>& idx = comb.current();
        std::vector<std::size_t> ids;
        for (std::size_t i : idx) ids.push_back(i + 1);
        report.subsets_checked += 1;

        bool shared = false;
        for (std::size_t i : idx)
            if (beta_vals.count(alphas[i].value())) shared = true;
        if (shared) {
            report.failures.push_back(
                {ids, CauchySubsetFailure::Reason::shared_point});
            continue;
        }

        PrimeField field(mask_betas[0].modulus());
        FieldMatrix m(field, x, x);
        for (std::size_t r = 0; r < x; ++r)
            for (std::size_t c = 0; c < x; ++c)
                m.set(r, c, lagrange_basis_at(mask_betas, c, alphas[idx[r]]));
        if (!invert_matrix(m))
            report.failures.push_back({ids, CauchySubsetFailure::Reason::singular});
    }
    return report;
}

CauchyReport check_cauchy_all_subsets(const ProtocolParams& params,
                                      std::size_t max_subsets) {
    std::span<const FieldElement> betas(params.points.betas);
    return check_cauchy_points(params.points.alphas, betas.subspan(params.blocks),
                               max_subsets);
}

SumUniformReport check_sum_uniform_exhaustive(std::uint64_t q, std::size_t summands,
                                              std::uint64_t max_enumeration) {
    if (summands == 0) throw std::invalid_argument("sum check: need >= 1 summand");
    std::uint64_t space = 1;
    for (std::size_t i = 0; i < summands; ++i) {
        if (space > max_enumeration / q)
            throw std::invalid_argument("sum check: enumeration too large");
        space *= q;
    }

    SumUniformReport report;
    report.exhaustive = true;
    report.counts.assign(q, 0);
    report.expected_count = space / q;

    std::vector<std::uint64_t> digits(summands, 0);
    for (std::uint64_t it = 0; it < space; ++it) {
        std::uint64_t sum = 0;
        for (std::uint64_t d : digits) sum = addmod(sum, d, q);
        report.counts[sum] += 1;
        for (std::size_t pos = 0; pos < summands; ++pos) {
            if (++digits[pos] < q) break;
            digits[pos] = 0;
        }
    }
    report.pass = std::all_of(report.counts.begin(), report.counts.end(),
                              [&](std::uint64_t c) { return c == report.expected_count; });
    return report;
}

SumUniformReport check_sum_uniform_sampled(const PrimeField& field,
                                           std::size_t summands, std::size_t trials,
                                           std::uint64_t seed, double significance) {
    if (summands == 0) throw std::invalid_argument("sum check: need >= 1 summand");
    const std::size_t buckets = 16;
    std::vector<std::uint64_t> hist(buckets, 0);
    SeededRng rng = make_stream(seed, "sum-uniform");
    const std::uint64_t q = field.modulus();
    for (std::size_t t = 0; t < trials; ++t) {
        std::uint64_t sum = 0;
        for (std::size_t i = 0; i < summands; ++i)
            sum = addmod(sum, sample_uniform(field, rng).value(), q);
        std::size_t b = static_cast<std::size_t>(
            static_cast<unsigned __int128>(sum) * buckets / q);
        hist[b] += 1;
    }

    SumUniformReport report;
    report.exhaustive = false;
    const double expected = static_cast<double>(trials) / buckets;
    double stat = 0.0;
    for (std::uint64_t c : hist) {
        double d = static_cast<double>(c) - expected;
        stat += d * d / expected;
    }
    report.p_value = trials == 0 ? 1.0 : chi_square_p_value(stat, buckets - 1);
    report.pass = report.p_value >= significance;
    return report;
}

namespace {

struct ShareModel {
    // flattened data parts: [party][worker][entry]; parties are the S
    // sources then the user
    std::vector<std::vector<std::vector<std::uint64_t>>> data_part;
    // mask basis coefficients l_{K+x}(alpha_k): [x][worker]
    std::vector<std::vector<std::uint64_t>> mask_coef;
    std::size_t w_elems = 0, u_elems = 0;
    std::uint64_t q = 0;
};

ShareModel build_model(const ProtocolParams& params, const RunInputs& secrets) {
    ShareModel model;
    model.q = params.field.modulus();
    model.w_elems = params.w_block.elems();
    model.u_elems = params.u_block.elems();

    const std::size_t nodes = params.blocks + params.collusion;
    std::vector<std::vector<std::uint64_t>> basis(
        nodes, std::vector<std::uint64_t>(params.workers));
    for (std::size_t j = 0; j < nodes; ++j)
        for (std::size_t k = 0; k < params.workers; ++k)
            basis[j][k] =
                lagrange_basis_at(params.points.betas, j, params.points.alphas[k])
                    .value();

    auto data_for = [&](const std::vector<FieldMatrix>& blocks, std::size_t elems) {
        std::vector<std::vector<std::uint64_t>> per_worker(
            params.workers, std::vector<std::uint64_t>(elems, 0));
        for (std::size_t k = 0; k < params.workers; ++k)
            for (std::size_t j = 0; j < params.blocks; ++j) {
                const std::uint64_t coef = basis[j][k];
                if (coef == 0) continue;
                auto raw = blocks[j].raw();
                for (std::size_t e = 0; e < elems; ++e)
                    per_worker[k][e] = addmod(per_worker[k][e],
                                              mulmod(raw[e], coef, model.q), model.q);
            }
        return per_worker;
    };

    for (std::size_t i = 0; i < params.sources; ++i)
        model.data_part.push_back(
            data_for(secrets.source_contributions[i], model.w_elems));
    model.data_part.push_back(data_for(secrets.user_blocks, model.u_elems));

    model.mask_coef.resize(params.collusion);
    for (std::size_t x = 0; x < params.collusion; ++x)
        model.mask_coef[x] = basis[params.blocks + x];
    return model;
}

std::uint64_t mask_space_size(const ProtocolParams& params, std::uint64_t bound) {
    const std::uint64_t q = params.field.modulus();
    const std::size_t cells = params.collusion * (params.sources * params.w_block.elems() +
                                                  params.u_block.elems());
    std::uint64_t space = 1;
    for (std::size_t i = 0; i < cells; ++i) {
        if (space > bound / q)
            throw std::invalid_argument(
                "exhaustive audit infeasible: mask space q^" + std::to_string(cells) +
                " exceeds the enumeration bound " + std::to_string(bound) +
                "; use the statistical audit");
        space *= q;
    }
    return space;
}

DistributionTable enumerate_table(const ProtocolParams& params, const ShareModel& model,
                                  std::span<const std::size_t> probe_ids,
                                  std::uint64_t space,
                                  std::vector<std::vector<std::uint64_t>>* marginals) {
    const std::uint64_t q = model.q;
    const std::size_t sources = params.sources;
    const std::size_t x_count = params.collusion;

    // mask digit layout: sources first (per source: X masks, each w_elems
    // entries), then the user's X masks of u_elems entries
    struct Cell {
        std::size_t party;  // 0..S-1 sources, S = user
        std::size_t mask;   // 0..X-1
        std::size_t entry;
    };
    std::vector<Cell> cells;
    for (std::size_t i = 0; i < sources; ++i)
        for (std::size_t x = 0; x < x_count; ++x)
            for (std::size_t e = 0; e < model.w_elems; ++e) cells.push_back({i, x, e});
    for (std::size_t x = 0; x < x_count; ++x)
        for (std::size_t e = 0; e < model.u_elems; ++e)
            cells.push_back({sources, x, e});

    const std::size_t tuple_len =
        probe_ids.size() * (sources * model.w_elems + model.u_elems);
    if (marginals)
        marginals->assign(tuple_len, std::vector<std::uint64_t>(q, 0));

    DistributionTable table;
    std::vector<std::uint64_t> digits(cells.size(), 0);
    std::vector<std::uint64_t> tuple(tuple_len);

    for (std::uint64_t it = 0; it < space; ++it) {
        std::size_t pos = 0;
        for (std::size_t worker_id : probe_ids) {
            const std::size_t k = worker_id - 1;
            for (std::size_t party = 0; party <= sources; ++party) {
                const std::size_t elems =
                    party < sources ? model.w_elems : model.u_elems;
                for (std::size_t e = 0; e < elems; ++e) {
                    std::uint64_t v = model.data_part[party][k][e];
                    for (std::size_t x = 0; x < x_count; ++x) {
                        // digit index of (party, x, e) in the fixed layout
                        std::size_t di =
                            party < sources
                                ? (party * x_count + x) * model.w_elems + e
                                : sources * x_count * model.w_elems +
                                      x * model.u_elems + e;
                        v = addmod(v, mulmod(digits[di], model.mask_coef[x][k], q), q);
                    }
                    tuple[pos++] = v;
                }
            }
        }
        table.counts[tuple] += 1;
        table.total += 1;
        if (marginals)
            for (std::size_t i = 0; i < tuple_len; ++i) (*marginals)[i][tuple[i]] += 1;

        for (std::size_t c = 0; c < cells.size(); ++c) {
            if (++digits[c] < q) break;
            digits[c] = 0;
        }
    }
    return table;
}

} // namespace

DistributionTable observed_share_table(const ProtocolParams& params,
                                       const RunInputs& secrets,
                                       const CollusionProbe& probe,
                                       const AuditOptions& options) {
    probe.validate(params);
    const std::uint64_t space = mask_space_size(params, options.max_enumeration);
    ShareModel model = build_model(params, secrets);
    return enumerate_table(params, model, probe.workers, space, nullptr);
}

PrivacyReport exhaustive_privacy_audit(const ProtocolParams& params,
                                       const RunInputs& secrets_a,
                                       const RunInputs& secrets_b,
                                       const CollusionProbe& probe,
                                       const AuditOptions& options) {
    probe.validate(params);
    const std::uint64_t space = mask_space_size(params, options.max_enumeration);
    ShareModel model_a = build_model(params, secrets_a);
    ShareModel model_b = build_model(params, secrets_b);

    PrivacyReport report;
    report.probe_size = probe.workers.size();
    report.mask_space = space;
    report.subsets_checked = 1;

    std::vector<std::vector<std::uint64_t>> marginals;
    const bool want_marginals = params.collusion >= 1;
    DistributionTable ta = enumerate_table(params, model_a, probe.workers, space,
                                           want_marginals ? &marginals : nullptr);
    DistributionTable tb = enumerate_table(params, model_b, probe.workers, space, nullptr);

    report.marginals_uniform = want_marginals;
    const std::uint64_t per_value = space / params.field.modulus();
    for (const auto& m : marginals)
        for (std::uint64_t c : m)
            if (c != per_value) report.marginals_uniform = false;

    if (ta == tb) {
        report.identical = true;
        return report;
    }
    report.identical = false;
    report.offending_subset = probe.workers;
    for (const auto& [tuple, count] : ta.counts) {
        auto it = tb.counts.find(tuple);
        if (it == tb.counts.end() || it->second != count) {
            report.distinguishing_tuple = tuple;
            break;
        }
    }
    return report;
}

PrivacyReport exhaustive_privacy_audit(const ProtocolParams& params,
                                       const RunInputs& secrets_a,
                                       const RunInputs& secrets_b,
                                       std::size_t probe_size,
                                       const AuditOptions& options) {
    if (probe_size == 0 || probe_size > params.workers)
        throw std::invalid_argument("audit: probe size out of range");

    PrivacyReport combined;
    combined.probe_size = probe_size;
    combined.identical = true;
    combined.marginals_uniform = true;
    for (Combinations comb(params.workers, probe_size); !comb.done(); comb.next()) {
        CollusionProbe probe;
        for (std::size_t i : comb.current()) probe.workers.push_back(i + 1);
        PrivacyReport r =
            exhaustive_privacy_audit(params, secrets_a, secrets_b, probe, options);
        combined.subsets_checked += 1;
        combined.mask_space = r.mask_space;
        combined.marginals_uniform = combined.marginals_uniform && r.marginals_uniform;
        if (!r.identical && combined.identical) {
            combined.identical = false;
            combined.offending_subset = r.offending_subset;
            combined.distinguishing_tuple = r.distinguishing_tuple;
        }
    }
    return combined;
}

StatReport statistical_privacy_audit(const ProtocolParams& params,
                                     const RunInputs& secrets_a,
                                     const RunInputs& secrets_b,
                                     std::size_t probe_size, std::size_t trials,
                                     double significance, std::uint64_t seed,
                                     const StatOptions& options) {
    if (probe_size == 0 || probe_size > params.workers)
        throw std::invalid_argument("audit: probe size out of range");
    const std::size_t buckets = options.buckets;
    if (buckets < 2) throw std::invalid_argument("audit: need >= 2 buckets");

    StatReport report;
    report.trials = trials;
    report.significance = significance;
    report.coords = probe_size * (params.sources + 1);
    if (trials == 0) return report;

    ShareModel model_a = build_model(params, secrets_a);
    ShareModel model_b = build_model(params, secrets_b);
    const std::uint64_t q = params.field.modulus();
    const std::size_t x_count = params.collusion;

    std::vector<std::vector<std::uint64_t>> hist_a(
        report.coords, std::vector<std::uint64_t>(buckets, 0));
    std::vector<std::vector<std::uint64_t>> hist_b = hist_a;

    // projected coordinate: entry (0,0) of every share seen by the probe
    auto record = [&](const ShareModel& model, SeededRng& rng,
                      std::vector<std::vector<std::uint64_t>>& hist) {
        // one fresh mask scalar per (party, mask index); entry (0,0) only
        std::vector<std::uint64_t> mask_vals((params.sources + 1) * x_count, 0);
        if (!options.zero_masks)
            for (auto& v : mask_vals) v = sample_uniform(params.field, rng).value();
        std::size_t coord = 0;
        for (std::size_t pk = 0; pk < probe_size; ++pk) {
            for (std::size_t party = 0; party <= params.sources; ++party) {
                std::uint64_t v = model.data_part[party][pk][0];
                for (std::size_t x = 0; x < x_count; ++x)
                    v = addmod(v,
                               mulmod(mask_vals[party * x_count + x],
                                      model.mask_coef[x][pk], q),
                               q);
                std::size_t b = static_cast<std::size_t>(
                    static_cast<unsigned __int128>(v) * buckets / q);
                hist[coord++][b] += 1;
            }
        }
    };

    SeededRng rng_a = make_stream(seed, "stat-audit-a");
    SeededRng rng_b = make_stream(seed, "stat-audit-b");
    for (std::size_t t = 0; t < trials; ++t) {
        record(model_a, rng_a, hist_a);
        record(model_b, rng_b, hist_b);
    }

    const double adjusted = significance / static_cast<double>(report.coords);
    for (std::size_t c = 0; c < report.coords; ++c) {
        double stat = 0.0;
        std::size_t df = 0;
        for (std::size_t b = 0; b < buckets; ++b) {
            const double oa = static_cast<double>(hist_a[c][b]);
            const double ob = static_cast<double>(hist_b[c][b]);
            if (oa + ob == 0.0) continue;
            ++df;
            const double d = oa - ob;
            stat += d * d / (oa + ob);
        }
        double p = df > 1 ? chi_square_p_value(stat, df - 1) : 1.0;
        report.p_values.push_back(p);
        report.min_p = std::min(report.min_p, p);
        if (p < adjusted) report.rejected = true;
    }
    return report;
}

} // namespace lcc
