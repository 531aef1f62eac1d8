#pragma once

#include <cstdint>
#include <map>
#include <vector>

#include "lcc/codec.hpp"
#include "lcc/sim.hpp"

namespace lcc {

/// Upper-tail p-value of the chi-square distribution with df degrees of
/// freedom (regularized incomplete gamma).
double chi_square_p_value(double stat, std::size_t df);

/// A coalition of colluding workers, identified by 1-based ids.
struct CollusionProbe {
    std::vector<std::size_t> workers;

    void validate(const ProtocolParams& params) const;
};

/// Exact joint distribution of an observed share tuple over the enumerated
/// mask space.
struct DistributionTable {
    std::map<std::vector<std::uint64_t>, std::uint64_t> counts;
    std::uint64_t total = 0;

    friend bool operator==(const DistributionTable&, const DistributionTable&) = default;
};

struct CauchySubsetFailure {
    enum class Reason { shared_point, singular };
    std::vector<std::size_t> worker_ids;
    Reason reason;
};

struct CauchyReport {
    std::size_t subsets_checked = 0;
    std::vector<CauchySubsetFailure> failures;

    bool all_ok() const { return failures.empty(); }
};

/// Invertibility of the generalized Cauchy matrix [l_j(alpha_i)] (basis on
/// the X mask nodes) for every X-subset of worker points. Point collisions
/// between a subset and the mask nodes violate the hypothesis and are
/// flagged as failures in their own right.
CauchyReport check_cauchy_points(std::span<const FieldElement> alphas,
                                 std::span<const FieldElement> mask_betas,
                                 std::size_t max_subsets = 1'000'000);
CauchyReport check_cauchy_all_subsets(const ProtocolParams& params,
                                      std::size_t max_subsets = 1'000'000);

struct SumUniformReport {
    bool exhaustive = false;
    bool pass = false;
    std::vector<std::uint64_t> counts;  // exhaustive: per sum value
    std::uint64_t expected_count = 0;   // q^(X-1)
    double p_value = 1.0;               // sampled mode
};

/// Exact counting of sum values over all q^X mask tuples.
SumUniformReport check_sum_uniform_exhaustive(std::uint64_t q, std::size_t summands,
                                              std::uint64_t max_enumeration = 10'000'000);
/// Sampled chi-square against uniformity, residues bucketed.
SumUniformReport check_sum_uniform_sampled(const PrimeField& field,
                                           std::size_t summands, std::size_t trials,
                                           std::uint64_t seed, double significance);

struct AuditOptions {
    std::uint64_t max_enumeration = 20'000'000;
};

struct PrivacyReport {
    bool identical = false;
    std::size_t probe_size = 0;
    std::size_t subsets_checked = 0;
    std::uint64_t mask_space = 0;
    bool marginals_uniform = false;
    // first violation found, if any
    std::vector<std::size_t> offending_subset;
    std::vector<std::uint64_t> distinguishing_tuple;
};

/// Enumerate the full mask space and compare the exact joint distribution of
/// the observed shares under two secret assignments, for every probe-sized
/// subset of workers. Identical tables mean this probe learns nothing that
/// distinguishes the secrets. Throws when the mask space exceeds
/// options.max_enumeration.
PrivacyReport exhaustive_privacy_audit(const ProtocolParams& params,
                                       const RunInputs& secrets_a,
                                       const RunInputs& secrets_b,
                                       std::size_t probe_size,
                                       const AuditOptions& options = {});

/// Same comparison for one explicit coalition.
PrivacyReport exhaustive_privacy_audit(const ProtocolParams& params,
                                       const RunInputs& secrets_a,
                                       const RunInputs& secrets_b,
                                       const CollusionProbe& probe,
                                       const AuditOptions& options = {});

/// Exact tables for one probe under one secret assignment (exposed for
/// report inspection and tests).
DistributionTable observed_share_table(const ProtocolParams& params,
                                       const RunInputs& secrets,
                                       const CollusionProbe& probe,
                                       const AuditOptions& options = {});

struct StatOptions {
    std::size_t buckets = 16;
    /// Test-only sabotage: encode with zeroed masks.
    bool zero_masks = false;
};

struct StatReport {
    std::size_t trials = 0;
    std::size_t coords = 0;
    double significance = 0.0;
    bool rejected = false;
    double min_p = 1.0;
    std::vector<double> p_values;
};

/// Sampled two-sample chi-square between bucketed share coordinates under
/// two secrets; the probe is the first probe_size workers. Reports p-values
/// with a Bonferroni-adjusted rejection rule; never a proof.
StatReport statistical_privacy_audit(const ProtocolParams& params,
                                     const RunInputs& secrets_a,
                                     const RunInputs& secrets_b,
                                     std::size_t probe_size, std::size_t trials,
                                     double significance, std::uint64_t seed,
                                     const StatOptions& options = {});

} // namespace lcc
