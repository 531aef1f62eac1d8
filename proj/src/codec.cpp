#include "lcc/codec.hpp"

#include <algorithm>
#include <set>
#include <stdexcept>

#include "lcc/funcs.hpp"

namespace lcc {

void ProtocolParams::validate() const {
    if (workers == 0 || blocks == 0 || sources == 0 || deg_h == 0)
        throw std::invalid_argument("params: N, K, S, deg_h must be >= 1");
    if (threshold() + stragglers > workers)
        throw std::invalid_argument("params: threshold M exceeds N - B");
    if (field.modulus() <= workers + blocks + collusion)
        throw std::invalid_argument("params: field too small for distinct points");
    if (w_block.elems() == 0 || u_block.elems() == 0)
        throw std::invalid_argument("params: block shapes must be non-empty");
    if (points.betas.size() != blocks + collusion)
        throw std::invalid_argument("params: need K + X interpolation nodes");
    if (points.alphas.size() != workers)
        throw std::invalid_argument("params: need N worker points");
}

ProtocolParams ProtocolParams::uniform(const PrimeField& field, std::size_t workers,
                                       std::size_t blocks, std::size_t sources,
                                       std::size_t collusion, std::size_t byzantine,
                                       std::size_t stragglers, std::size_t a,
                                       std::size_t b, std::size_t deg_h) {
    if (a == 0 || b == 0) throw std::invalid_argument("params: a, b must be >= 1");
    if (blocks == 0 || sources == 0 || blocks % sources != 0)
        throw std::invalid_argument("params: S must divide K");
    if ((b * sources) % blocks != 0)
        throw std::invalid_argument("params: K must divide b*S (block width)");
    Shape block{a, b * sources / blocks};
    EvalPoints pts = EvalPoints::standard(field, blocks + collusion, workers);
    return custom(field, workers, blocks, sources, collusion, byzantine, stragglers,
                  block, block, deg_h, std::move(pts));
}

ProtocolParams ProtocolParams::custom(const PrimeField& field, std::size_t workers,
                                      std::size_t blocks, std::size_t sources,
                                      std::size_t collusion, std::size_t byzantine,
                                      std::size_t stragglers, Shape w_block,
                                      Shape u_block, std::size_t deg_h,
                                      EvalPoints points) {
    ProtocolParams p{field,     workers,   blocks,  sources, collusion, byzantine,
                     stragglers, deg_h,    w_block, u_block, std::move(points)};
    p.validate();
    return p;
}

std::string ShareOrigin::label() const {
    return kind == Kind::user ? "user" : "source:" + std::to_string(source_id);
}

MaskSet MaskSet::sample(ShareOrigin owner, std::size_t count, Shape shape,
                        const PrimeField& field, SeededRng& rng) {
    MaskSet m;
    m.owner = owner;
    for (std::size_t i = 0; i < count; ++i)
        m.masks.push_back(FieldMatrix::random(field, shape.rows, shape.cols, rng));
    return m;
}

std::vector<FieldMatrix> SourceData::contributions(std::size_t total_blocks,
                                                   std::size_t sources) const {
    if (sources == 0 || total_blocks % sources != 0)
        throw std::invalid_argument("sources must divide the block count");
    const std::size_t per_source = total_blocks / sources;
    if (source_id == 0 || source_id > sources)
        throw std::invalid_argument("source id out of range");
    if (blocks.size() != per_source)
        throw std::invalid_argument("source holds the wrong number of blocks");
    const PrimeField& f = blocks[0].field();
    std::vector<FieldMatrix> out;
    out.reserve(total_blocks);
    const std::size_t base = (source_id - 1) * per_source;
    for (std::size_t j = 0; j < total_blocks; ++j) {
        if (j >= base && j < base + per_source)
            out.push_back(blocks[j - base]);
        else
            out.push_back(FieldMatrix(f, blocks[0].rows(), blocks[0].cols()));
    }
    return out;
}

std::vector<FieldMatrix> lagrange_encode(std::span<const FieldMatrix> node_values,
                                         const EvalPoints& points) {
    if (node_values.size() != points.betas.size())
        throw std::invalid_argument("encode: one node value per beta required");
    const Shape shape = node_values[0].shape();
    for (const FieldMatrix& m : node_values)
        if (m.shape() != shape)
            throw std::invalid_argument("encode: node value shape mismatch");

    std::vector<FieldMatrix> shares;
    shares.reserve(points.alphas.size());
    for (FieldElement alpha : points.alphas) {
        FieldMatrix acc(node_values[0].field(), shape.rows, shape.cols);
        for (std::size_t j = 0; j < node_values.size(); ++j) {
            FieldElement coef = lagrange_basis_at(points.betas, j, alpha);
            if (!coef.is_zero()) acc += node_values[j].scaled(coef);
        }
        shares.push_back(std::move(acc));
    }
    return shares;
}

namespace {

std::vector<Share> wrap_shares(std::vector<FieldMatrix> payloads, ShareOrigin origin) {
    std::vector<Share> out;
    out.reserve(payloads.size());
    for (std::size_t k = 0; k < payloads.size(); ++k)
        out.push_back(Share{origin, k + 1, std::move(payloads[k])});
    return out;
}

} // namespace

std::vector<Share> encode_user(const UserData& u, const MaskSet& masks,
                               const ProtocolParams& params) {
    if (u.blocks.size() != params.blocks)
        throw std::invalid_argument("encode_user: need K data blocks");
    if (masks.masks.size() != params.collusion)
        throw std::invalid_argument("encode_user: need X masks");
    std::vector<FieldMatrix> nodes;
    nodes.reserve(params.blocks + params.collusion);
    for (const FieldMatrix& b : u.blocks) {
        if (b.shape() != params.u_block)
            throw std::invalid_argument("encode_user: block shape mismatch");
        nodes.push_back(b);
    }
    for (const FieldMatrix& m : masks.masks) {
        if (m.shape() != params.u_block)
            throw std::invalid_argument("encode_user: mask shape mismatch");
        nodes.push_back(m);
    }
    return wrap_shares(lagrange_encode(nodes, params.points), ShareOrigin::user());
}

std::vector<Share> encode_source(const SourceData& w, const MaskSet& masks,
                                 const ProtocolParams& params) {
    if (masks.masks.size() != params.collusion)
        throw std::invalid_argument("encode_source: need X masks");
    std::vector<FieldMatrix> nodes = w.contributions(params.blocks, params.sources);
    for (const FieldMatrix& b : nodes)
        if (b.shape() != params.w_block)
            throw std::invalid_argument("encode_source: block shape mismatch");
    for (const FieldMatrix& m : masks.masks) {
        if (m.shape() != params.w_block)
            throw std::invalid_argument("encode_source: mask shape mismatch");
        nodes.push_back(m);
    }
    return wrap_shares(lagrange_encode(nodes, params.points),
                       ShareOrigin::source(w.source_id));
}

FieldMatrix aggregate_shares(std::span<const Share> worker_shares,
                             std::size_t sources) {
    if (worker_shares.size() != sources)
        throw std::invalid_argument("aggregate: need one share per source");
    std::set<std::size_t> seen;
    FieldMatrix acc = worker_shares[0].payload;
    for (std::size_t i = 0; i < worker_shares.size(); ++i) {
        const Share& s = worker_shares[i];
        if (s.origin.kind != ShareOrigin::Kind::source)
            throw std::invalid_argument("aggregate: only source shares are summed");
        if (s.worker_id != worker_shares[0].worker_id)
            throw std::invalid_argument("aggregate: shares belong to different workers");
        if (!seen.insert(s.origin.source_id).second)
            throw std::invalid_argument("aggregate: duplicate source share");
        if (i > 0) acc += s.payload;
    }
    return acc;
}

FieldMatrix worker_compute(const FieldMatrix& w_share, const FieldMatrix& u_share,
                           const PolyFunction& h) {
    return h.eval(w_share, u_share);
}

FieldMatrix MatrixPolynomial::eval(FieldElement z) const {
    PrimeField field(entries[0].field());
    FieldMatrix out(field, shape.rows, shape.cols);
    for (std::size_t r = 0; r < shape.rows; ++r)
        for (std::size_t c = 0; c < shape.cols; ++c)
            out.set(r, c, entries[r * shape.cols + c](z));
    return out;
}

std::ptrdiff_t MatrixPolynomial::degree() const {
    std::ptrdiff_t d = -1;
    for (const Polynomial& p : entries) d = std::max(d, p.degree());
    return d;
}

MatrixPolynomial MatrixPolynomial::random(const PrimeField& field, Shape shape,
                                          std::size_t degree, SeededRng& rng) {
    MatrixPolynomial mp;
    mp.shape = shape;
    for (std::size_t i = 0; i < shape.elems(); ++i)
        mp.entries.push_back(Polynomial::random(field, degree, rng));
    return mp;
}

const char* to_string(DecodeStatus s) {
    switch (s) {
        case DecodeStatus::ok: return "ok";
        case DecodeStatus::insufficient_responses: return "insufficient_responses";
        case DecodeStatus::decoding_failure: return "decoding_failure";
    }
    return "unknown";
}

namespace {

/// Gao decoding: interpolate all points, run the partial extended Euclidean
/// algorithm down to the degree threshold, divide out the error locator.
/// Returns the unique polynomial of degree <= degree_bound within
/// floor((n - k) / 2) errors of the received word, or nullopt.
std::optional<Polynomial> gao_decode(const PrimeField& field,
                                     std::span<const FieldElement> xs,
                                     std::span<const FieldElement> ys,
                                     std::size_t degree_bound) {
    const std::size_t n = xs.size();
    const std::size_t k = degree_bound + 1;
    if (n < k) return std::nullopt;

    Polynomial g0(field, {1});
    for (FieldElement x : xs) g0 = g0 * Polynomial(field, {(-x).value(), 1});

    std::vector<std::pair<FieldElement, FieldElement>> pts(n);
    for (std::size_t i = 0; i < n; ++i) pts[i] = {xs[i], ys[i]};
    Polynomial g1 = interpolate(pts);

    Polynomial r0 = g0, r1 = g1;
    Polynomial v0(field), v1(field, {1});
    while (!r1.is_zero() &&
           2 * r1.degree() >= static_cast<std::ptrdiff_t>(n + k)) {
        auto [q, rem] = r0.divmod(r1);
        Polynomial vn = v0 - q * v1;
        r0 = r1;
        r1 = rem;
        v0 = v1;
        v1 = vn;
    }

    if (v1.is_zero()) return std::nullopt;
    auto [f, frem] = r1.divmod(v1);
    if (!frem.is_zero()) return std::nullopt;
    if (f.degree() > static_cast<std::ptrdiff_t>(degree_bound)) return std::nullopt;

    const std::size_t t_max = (n - k) / 2;
    std::size_t mismatches = 0;
    for (std::size_t i = 0; i < n; ++i)
        if (f(xs[i]) != ys[i] && ++mismatches > t_max) return std::nullopt;
    return f;
}

} // namespace

DecodeResult rs_decode(std::span<const WorkerResponse> responses,
                       std::size_t degree_bound, std::size_t max_errors) {
    std::vector<const WorkerResponse*> usable;
    for (const WorkerResponse& r : responses)
        if (r.responded()) usable.push_back(&r);

    const std::size_t needed = degree_bound + 2 * max_errors + 1;
    if (usable.size() < needed)
        return {DecodeStatus::insufficient_responses, needed, std::nullopt};

    std::set<std::uint64_t> alpha_set;
    for (const WorkerResponse* r : usable)
        if (!alpha_set.insert(r->alpha.value()).second)
            throw std::invalid_argument("rs_decode: duplicate evaluation points");

    const Shape shape = usable[0]->result->shape();
    for (const WorkerResponse* r : usable)
        if (r->result->shape() != shape)
            throw std::invalid_argument("rs_decode: response shape mismatch");

    const PrimeField field = usable[0]->result->field();
    const std::size_t n = usable.size();
    std::vector<FieldElement> xs(n);
    for (std::size_t i = 0; i < n; ++i) xs[i] = usable[i]->alpha;

    auto entry_values = [&](std::size_t e) {
        std::vector<FieldElement> ys(n);
        for (std::size_t i = 0; i < n; ++i)
            ys[i] = usable[i]->result->at(e / shape.cols, e % shape.cols);
        return ys;
    };

    const std::size_t entry_count = shape.elems();
    std::vector<Polynomial> out(entry_count, Polynomial(field));

    // pilot entry fixes a candidate error support shared by the whole matrix
    std::vector<FieldElement> pilot_ys = entry_values(0);
    std::optional<Polynomial> pilot = gao_decode(field, xs, pilot_ys, degree_bound);

    bool shared_ok = false;
    if (pilot) {
        std::vector<std::size_t> kept;
        for (std::size_t i = 0; i < n; ++i)
            if ((*pilot)(xs[i]) == pilot_ys[i]) kept.push_back(i);

        if (kept.size() >= degree_bound + 1) {
            shared_ok = true;
            out[0] = *pilot;
            std::vector<std::pair<FieldElement, FieldElement>> pts(kept.size());
            for (std::size_t e = 1; e < entry_count && shared_ok; ++e) {
                std::vector<FieldElement> ys = entry_values(e);
                for (std::size_t i = 0; i < kept.size(); ++i)
                    pts[i] = {xs[kept[i]], ys[kept[i]]};
                Polynomial p = interpolate(pts);
                if (p.degree() > static_cast<std::ptrdiff_t>(degree_bound))
                    shared_ok = false;
                else
                    out[e] = p;
            }
        }
    }

    if (!shared_ok) {
        for (std::size_t e = 0; e < entry_count; ++e) {
            std::optional<Polynomial> p =
                gao_decode(field, xs, entry_values(e), degree_bound);
            if (!p) return {DecodeStatus::decoding_failure, needed, std::nullopt};
            out[e] = std::move(*p);
        }
    }

    MatrixPolynomial mp;
    mp.shape = shape;
    mp.entries = std::move(out);
    return {DecodeStatus::ok, needed, std::move(mp)};
}

ReconstructResult reconstruct(std::span<const WorkerResponse> responses,
                              const ProtocolParams& params, const PolyFunction& h,
                              bool use_all) {
    const std::size_t m_needed = params.threshold();
    std::vector<WorkerResponse> usable;
    for (const WorkerResponse& r : responses) {
        if (!r.responded()) continue;
        if (r.result->shape() != h.out_shape())
            throw std::invalid_argument("reconstruct: response shape mismatch");
        usable.push_back(r);
    }
    if (usable.size() < m_needed)
        return {DecodeStatus::insufficient_responses, m_needed, {}, {}};
    if (!use_all) usable.resize(m_needed);

    const std::size_t degree_bound =
        (params.blocks + params.collusion - 1) * params.deg_h;
    DecodeResult dec = rs_decode(usable, degree_bound, params.byzantine);

    ReconstructResult res;
    res.status = dec.status;
    res.needed = dec.needed;
    // the decode consumed these responses whether or not it succeeded
    for (const WorkerResponse& r : usable) res.used_workers.push_back(r.worker_id);
    if (dec.status != DecodeStatus::ok) return res;
    for (std::size_t j = 0; j < params.blocks; ++j)
        res.block_results.push_back(dec.poly->eval(params.points.betas[j]));
    return res;
}

namespace {

void put_u64(std::vector<std::uint8_t>& out, std::uint64_t v) {
    for (int i = 0; i < 8; ++i) out.push_back(static_cast<std::uint8_t>(v >> (8 * i)));
}

std::uint64_t get_u64(std::span<const std::uint8_t> bytes, std::size_t pos) {
    std::uint64_t v = 0;
    for (int i = 0; i < 8; ++i) v |= static_cast<std::uint64_t>(bytes[pos + i]) << (8 * i);
    return v;
}

} // namespace

WireRecord make_record(const FieldMatrix& m, std::size_t worker_id,
                       FieldElement alpha) {
    if (alpha.modulus() != m.field().modulus())
        throw std::invalid_argument("record: alpha field mismatch");
    WireRecord rec;
    rec.modulus = m.field().modulus();
    rec.rows = m.rows();
    rec.cols = m.cols();
    rec.worker_id = worker_id;
    rec.alpha = alpha.value();
    rec.residues.assign(m.raw().begin(), m.raw().end());
    return rec;
}

std::vector<std::uint8_t> serialize_record(const WireRecord& rec) {
    std::vector<std::uint8_t> out;
    out.reserve(48 + 8 * rec.residues.size());
    put_u64(out, rec.modulus);
    put_u64(out, rec.rows);
    put_u64(out, rec.cols);
    put_u64(out, rec.worker_id);
    put_u64(out, rec.alpha);
    put_u64(out, rec.residues.size());
    for (std::uint64_t r : rec.residues) put_u64(out, r);
    return out;
}

WireRecord parse_record(std::span<const std::uint8_t> bytes) {
    if (bytes.size() < 48) throw std::invalid_argument("record: truncated header");
    WireRecord rec;
    rec.modulus = get_u64(bytes, 0);
    rec.rows = get_u64(bytes, 8);
    rec.cols = get_u64(bytes, 16);
    rec.worker_id = get_u64(bytes, 24);
    rec.alpha = get_u64(bytes, 32);
    const std::uint64_t count = get_u64(bytes, 40);
    if (rec.rows == 0 || rec.cols == 0 ||
        static_cast<unsigned __int128>(rec.rows) * rec.cols != count)
        throw std::invalid_argument("record: length prefix does not match shape");
    if (count > (bytes.size() - 48) / 8 || bytes.size() != 48 + 8 * count)
        throw std::invalid_argument("record: truncated payload");
    if (rec.modulus < 3) throw std::invalid_argument("record: bad modulus");
    rec.residues.reserve(count);
    for (std::uint64_t i = 0; i < count; ++i) {
        std::uint64_t v = get_u64(bytes, 48 + 8 * i);
        if (v >= rec.modulus) throw std::invalid_argument("record: residue out of range");
        rec.residues.push_back(v);
    }
    if (rec.alpha >= rec.modulus)
        throw std::invalid_argument("record: alpha out of range");
    return rec;
}

FieldMatrix record_matrix(const WireRecord& rec) {
    PrimeField field(rec.modulus);
    FieldMatrix m(field, rec.rows, rec.cols);
    for (std::size_t r = 0; r < rec.rows; ++r)
        for (std::size_t c = 0; c < rec.cols; ++c)
            m.set(r, c, rec.residues[r * rec.cols + c]);
    return m;
}

} // namespace lcc
