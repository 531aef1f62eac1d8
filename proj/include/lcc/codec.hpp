#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "lcc/poly.hpp"

namespace lcc {

class PolyFunction;

/// Instance parameters: N workers, K data blocks split across S sources,
/// X-collusion privacy, tolerance for A byzantine workers and B stragglers,
/// block shapes, and the declared total degree of h.
struct ProtocolParams {
    PrimeField field;
    std::size_t workers;     // N
    std::size_t blocks;      // K
    std::size_t sources;     // S
    std::size_t collusion;   // X
    std::size_t byzantine;   // A
    std::size_t stragglers;  // B
    std::size_t deg_h;
    Shape w_block, u_block;
    EvalPoints points;

    /// M = (K + X - 1) * deg_h + 2A + 1.
    std::size_t threshold() const {
        return (blocks + collusion - 1) * deg_h + 2 * byzantine + 1;
    }

    void validate() const;

    /// Uniform layout from base dimensions a, b: every block is
    /// a x (b*S/K), with the canonical point layout.
    static ProtocolParams uniform(const PrimeField& field, std::size_t workers,
                                  std::size_t blocks, std::size_t sources,
                                  std::size_t collusion, std::size_t byzantine,
                                  std::size_t stragglers, std::size_t a, std::size_t b,
                                  std::size_t deg_h);

    /// Explicit block shapes and points (e.g. bilinear jobs).
    static ProtocolParams custom(const PrimeField& field, std::size_t workers,
                                 std::size_t blocks, std::size_t sources,
                                 std::size_t collusion, std::size_t byzantine,
                                 std::size_t stragglers, Shape w_block, Shape u_block,
                                 std::size_t deg_h, EvalPoints points);
};

inline std::size_t recovery_threshold(const ProtocolParams& params) {
    return params.threshold();
}

struct ShareOrigin {
    enum class Kind { source, user };
    Kind kind = Kind::user;
    std::size_t source_id = 0;  // 1-based, sources only

    static ShareOrigin source(std::size_t id) { return {Kind::source, id}; }
    static ShareOrigin user() { return {Kind::user, 0}; }
    std::string label() const;
    friend bool operator==(const ShareOrigin&, const ShareOrigin&) = default;
};

/// One encoded matrix sent to one worker.
struct Share {
    ShareOrigin origin;
    std::size_t worker_id = 0;  // 1-based
    FieldMatrix payload;
};

/// The X random masks one party appends at the extra interpolation nodes.
struct MaskSet {
    ShareOrigin owner;
    std::vector<FieldMatrix> masks;

    static MaskSet sample(ShareOrigin owner, std::size_t count, Shape shape,
                          const PrimeField& field, SeededRng& rng);
};

/// Source i's K/S data blocks.
struct SourceData {
    std::size_t source_id = 0;  // 1-based
    std::vector<FieldMatrix> blocks;

    /// Zero-padded length-K vector with the owned blocks in slots
    /// [(i-1)K/S, iK/S).
    std::vector<FieldMatrix> contributions(std::size_t total_blocks,
                                           std::size_t sources) const;
};

struct UserData {
    std::vector<FieldMatrix> blocks;  // K
};

/// A worker's reply; no payload means it straggled. Byzantine corruption is
/// invisible here: it arrives as a normal payload with wrong contents.
struct WorkerResponse {
    std::size_t worker_id = 0;
    FieldElement alpha;
    std::optional<FieldMatrix> result;

    bool responded() const { return result.has_value(); }
};

/// Evaluate at every alpha the matrix polynomial that interpolates
/// node_values at the betas. node_values.size() must equal betas.size().
std::vector<FieldMatrix> lagrange_encode(std::span<const FieldMatrix> node_values,
                                         const EvalPoints& points);

std::vector<Share> encode_user(const UserData& u, const MaskSet& masks,
                               const ProtocolParams& params);
std::vector<Share> encode_source(const SourceData& w, const MaskSet& masks,
                                 const ProtocolParams& params);

/// Entrywise sum of one worker's source shares.
FieldMatrix aggregate_shares(std::span<const Share> worker_shares,
                             std::size_t sources);

FieldMatrix worker_compute(const FieldMatrix& w_share, const FieldMatrix& u_share,
                           const PolyFunction& h);

/// Matrix with one scalar polynomial per entry.
struct MatrixPolynomial {
    Shape shape;
    std::vector<Polynomial> entries;  // row-major

    FieldMatrix eval(FieldElement z) const;
    std::ptrdiff_t degree() const;
    const Polynomial& entry(std::size_t r, std::size_t c) const {
        return entries[r * shape.cols + c];
    }

    static MatrixPolynomial random(const PrimeField& field, Shape shape,
                                   std::size_t degree, SeededRng& rng);
};

enum class DecodeStatus { ok, insufficient_responses, decoding_failure };
const char* to_string(DecodeStatus s);

struct DecodeResult {
    DecodeStatus status = DecodeStatus::decoding_failure;
    std::size_t needed = 0;  // for insufficient_responses
    std::optional<MatrixPolynomial> poly;
};

/// Error-erasure decoding of the matrix polynomial of degree <= degree_bound
/// from responded points, tolerating up to max_errors corruptions.
/// Stragglers are erasures: their points are simply absent. The error
/// locator is derived once from a pilot entry and validated across entries,
/// with a per-entry fallback when validation fails.
DecodeResult rs_decode(std::span<const WorkerResponse> responses,
                       std::size_t degree_bound, std::size_t max_errors);

struct ReconstructResult {
    DecodeStatus status = DecodeStatus::decoding_failure;
    std::size_t needed = 0;
    std::vector<FieldMatrix> block_results;  // K matrices on ok
    std::vector<std::size_t> used_workers;

    bool ok() const { return status == DecodeStatus::ok; }
};

/// Decode h(f(z), g(z)) from the first M responded entries in list order
/// (all of them with use_all) and evaluate at the K data nodes.
ReconstructResult reconstruct(std::span<const WorkerResponse> responses,
                              const ProtocolParams& params, const PolyFunction& h,
                              bool use_all = false);

/// Wire format: header (q, rows, cols, worker_id, alpha) then a
/// length-prefixed array of residues, all little-endian 64-bit.
struct WireRecord {
    std::uint64_t modulus = 0, rows = 0, cols = 0, worker_id = 0, alpha = 0;
    std::vector<std::uint64_t> residues;

    friend bool operator==(const WireRecord&, const WireRecord&) = default;
};

WireRecord make_record(const FieldMatrix& m, std::size_t worker_id,
                       FieldElement alpha);
std::vector<std::uint8_t> serialize_record(const WireRecord& rec);
WireRecord parse_record(std::span<const std::uint8_t> bytes);
FieldMatrix record_matrix(const WireRecord& rec);

} // namespace lcc
