#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <algorithm>
#include <vector>

#include "lcc/codec.hpp"
#include "lcc/funcs.hpp"

using namespace lcc;

namespace {

// Independent scalar oracle for the encoding polynomials: basis products
// evaluated with raw modular arithmetic, no shared code with the library.
std::uint64_t o_mulmod(std::uint64_t a, std::uint64_t b, std::uint64_t q) {
    return static_cast<std::uint64_t>(static_cast<unsigned __int128>(a) * b % q);
}
std::uint64_t o_powmod(std::uint64_t b, std::uint64_t e, std::uint64_t q) {
    std::uint64_t r = 1;
    b %= q;
    while (e) {
        if (e & 1) r = o_mulmod(r, b, q);
        b = o_mulmod(b, b, q);
        e >>= 1;
    }
    return r;
}
std::uint64_t o_sub(std::uint64_t a, std::uint64_t b, std::uint64_t q) {
    return a >= b ? a - b : a + q - b;
}
std::uint64_t o_basis(const std::vector<std::uint64_t>& betas, std::size_t j,
                      std::uint64_t z, std::uint64_t q) {
    std::uint64_t num = 1, den = 1;
    for (std::size_t l = 0; l < betas.size(); ++l) {
        if (l == j) continue;
        num = o_mulmod(num, o_sub(z, betas[l], q), q);
        den = o_mulmod(den, o_sub(betas[j], betas[l], q), q);
    }
    return o_mulmod(num, o_powmod(den, q - 2, q), q);
}
std::uint64_t o_encode(const std::vector<std::uint64_t>& node_values,
                       const std::vector<std::uint64_t>& betas, std::uint64_t z,
                       std::uint64_t q) {
    std::uint64_t acc = 0;
    for (std::size_t j = 0; j < node_values.size(); ++j)
        acc = (acc + o_mulmod(node_values[j], o_basis(betas, j, z, q), q)) % q;
    return acc;
}

FieldMatrix scalar(const PrimeField& f, std::uint64_t v) {
    FieldMatrix m(f, 1, 1);
    m.set(0, 0, v);
    return m;
}

PolyFunction projection_w(Shape w, Shape u) {
    return PolyFunction("proj-w", HExpr::var_w(w), w, u, 1);
}

std::vector<WorkerResponse> honest_responses(const ProtocolParams& params,
                                             const std::vector<FieldMatrix>& w_nodes,
                                             const std::vector<FieldMatrix>& u_nodes,
                                             const PolyFunction& h) {
    std::vector<FieldMatrix> w_shares = lagrange_encode(w_nodes, params.points);
    std::vector<FieldMatrix> u_shares = lagrange_encode(u_nodes, params.points);
    std::vector<WorkerResponse> out;
    for (std::size_t k = 0; k < params.workers; ++k)
        out.push_back(WorkerResponse{k + 1, params.points.alphas[k],
                                     h.eval(w_shares[k], u_shares[k])});
    return out;
}

} // namespace

TEST_CASE("protocol params validation and threshold") {
    PrimeField f(2147483647ULL);
    ProtocolParams p = ProtocolParams::uniform(f, 20, 7, 1, 2, 1, 1, 1, 7, 2);
    CHECK(p.threshold() == 19);
    CHECK(recovery_threshold(p) == 19);

    CHECK(ProtocolParams::uniform(f, 1, 1, 1, 0, 0, 0, 1, 1, 1).threshold() == 1);
    CHECK(ProtocolParams::uniform(f, 20, 4, 2, 2, 2, 0, 1, 2, 3).threshold() == 20);

    // S must divide K
    CHECK_THROWS_AS(ProtocolParams::uniform(f, 20, 7, 2, 2, 1, 1, 1, 7, 2),
                    std::invalid_argument);
    // M = 19 > N - B
    CHECK_THROWS_AS(ProtocolParams::uniform(f, 19, 7, 1, 2, 1, 1, 1, 7, 2),
                    std::invalid_argument);
    // q too small for the point count (needs q > N + K + X)
    PrimeField tiny(11);
    CHECK_NOTHROW(ProtocolParams::uniform(tiny, 9, 1, 1, 0, 0, 0, 1, 1, 1));
    CHECK_THROWS_AS(ProtocolParams::uniform(tiny, 10, 1, 1, 0, 0, 0, 1, 1, 1),
                    std::invalid_argument);
    // K must divide b*S
    CHECK_THROWS_AS(ProtocolParams::uniform(f, 20, 4, 2, 0, 0, 0, 1, 3, 2),
                    std::invalid_argument);
}

TEST_CASE("user encoder matches the direct scalar oracle") {
    const std::uint64_t q = 17;
    PrimeField f(q);
    EvalPoints pts = EvalPoints::custom(
        {f.element(1), f.element(2), f.element(3)},
        {f.element(5), f.element(6), f.element(7)});
    ProtocolParams params = ProtocolParams::custom(f, 3, 2, 1, 1, 0, 0, Shape{1, 1},
                                                   Shape{1, 1}, 1, pts);

    UserData u{{scalar(f, 4), scalar(f, 9)}};
    MaskSet masks{ShareOrigin::user(), {scalar(f, 13)}};
    std::vector<Share> shares = encode_user(u, masks, params);
    REQUIRE(shares.size() == 3);

    std::vector<std::uint64_t> nodes = {4, 9, 13};
    std::vector<std::uint64_t> betas = {1, 2, 3};
    for (std::size_t k = 0; k < 3; ++k) {
        CHECK(shares[k].worker_id == k + 1);
        CHECK(shares[k].payload.at(0, 0).value() == o_encode(nodes, betas, 5 + k, q));
    }
}

TEST_CASE("degenerate user encoder: X=0, K=1 is constant") {
    PrimeField f(101);
    ProtocolParams params = ProtocolParams::uniform(f, 4, 1, 1, 0, 0, 3, 2, 1, 1);
    FieldMatrix block(f, 2, 1);
    block.set(0, 0, 42);
    block.set(1, 0, 7);
    UserData u{{block}};
    MaskSet masks{ShareOrigin::user(), {}};
    for (const Share& s : encode_user(u, masks, params)) CHECK(s.payload == block);
}

TEST_CASE("encoders interpolate their data at the data nodes") {
    PrimeField f(101);
    SeededRng rng(5);
    ProtocolParams params = ProtocolParams::uniform(f, 8, 4, 2, 2, 0, 0, 1, 2, 1);

    UserData u;
    for (int j = 0; j < 4; ++j) u.blocks.push_back(scalar(f, rng.next_u64() % 101));
    SeededRng mrng = make_stream(1, "m");
    MaskSet umask = MaskSet::sample(ShareOrigin::user(), 2, Shape{1, 1}, f, mrng);
    std::vector<Share> ushares = encode_user(u, umask, params);

    // recover the encoding polynomial from K+X shares and evaluate at the
    // data nodes: g(beta_j) must give back U_j
    std::vector<std::pair<FieldElement, FieldElement>> pts;
    for (std::size_t k = 0; k < 6; ++k)
        pts.emplace_back(params.points.alphas[k], ushares[k].payload.at(0, 0));
    Polynomial g = interpolate(pts);
    CHECK(g.degree() <= 5);  // K + X - 1
    for (std::size_t j = 0; j < 4; ++j)
        CHECK(g(params.points.betas[j]) == u.blocks[j].at(0, 0));

    // source encoder: own blocks at owned nodes, zero at the others
    SourceData s1{1, {scalar(f, 11), scalar(f, 22)}};
    MaskSet smask = MaskSet::sample(ShareOrigin::source(1), 2, Shape{1, 1}, f, mrng);
    std::vector<Share> sshares = encode_source(s1, smask, params);
    pts.clear();
    for (std::size_t k = 0; k < 6; ++k)
        pts.emplace_back(params.points.alphas[k], sshares[k].payload.at(0, 0));
    Polynomial f1 = interpolate(pts);
    CHECK(f1(params.points.betas[0]).value() == 11);
    CHECK(f1(params.points.betas[1]).value() == 22);
    CHECK(f1(params.points.betas[2]).value() == 0);
    CHECK(f1(params.points.betas[3]).value() == 0);
}

TEST_CASE("source encoders aggregate to the joint data") {
    const std::uint64_t q = 17;
    PrimeField f(q);
    ProtocolParams params = ProtocolParams::uniform(f, 4, 2, 2, 1, 0, 0, 1, 1, 1);

    SourceData s1{1, {scalar(f, 5)}};
    SourceData s2{2, {scalar(f, 12)}};
    MaskSet m1{ShareOrigin::source(1), {scalar(f, 3)}};
    MaskSet m2{ShareOrigin::source(2), {scalar(f, 14)}};
    std::vector<Share> sh1 = encode_source(s1, m1, params);
    std::vector<Share> sh2 = encode_source(s2, m2, params);

    // oracle: the aggregate equals the encoding of (W1, W2, P1+P2)
    std::vector<std::uint64_t> nodes = {5, 12, (3 + 14) % q};
    std::vector<std::uint64_t> betas = {1, 2, 3};
    for (std::size_t k = 0; k < 4; ++k) {
        FieldMatrix agg = aggregate_shares(
            std::vector<Share>{sh1[k], sh2[k]}, 2);
        CHECK(agg.at(0, 0).value() ==
              o_encode(nodes, betas, params.points.alphas[k].value(), q));
    }

    // interpolating the aggregates recovers W at the data nodes
    std::vector<std::pair<FieldElement, FieldElement>> pts;
    for (std::size_t k = 0; k < 3; ++k) {
        FieldMatrix agg = aggregate_shares(std::vector<Share>{sh1[k], sh2[k]}, 2);
        pts.emplace_back(params.points.alphas[k], agg.at(0, 0));
    }
    Polynomial agg_poly = interpolate(pts);
    CHECK(agg_poly(params.points.betas[0]).value() == 5);
    CHECK(agg_poly(params.points.betas[1]).value() == 12);
}

TEST_CASE("single-source encoding matches the user encoder structure") {
    PrimeField f(101);
    ProtocolParams params = ProtocolParams::uniform(f, 6, 3, 1, 1, 0, 0, 1, 3, 1);
    SourceData s{1, {scalar(f, 10), scalar(f, 20), scalar(f, 30)}};
    UserData u{{scalar(f, 10), scalar(f, 20), scalar(f, 30)}};
    MaskSet sm{ShareOrigin::source(1), {scalar(f, 77)}};
    MaskSet um{ShareOrigin::user(), {scalar(f, 77)}};
    std::vector<Share> ss = encode_source(s, sm, params);
    std::vector<Share> us = encode_user(u, um, params);
    for (std::size_t k = 0; k < 6; ++k) CHECK(ss[k].payload == us[k].payload);
}

TEST_CASE("aggregate_shares checks its inputs") {
    PrimeField f(17);
    Share a{ShareOrigin::source(1), 1, scalar(f, 1)};
    Share b{ShareOrigin::source(2), 1, scalar(f, 2)};
    CHECK(aggregate_shares(std::vector<Share>{a, b}, 2).at(0, 0).value() == 3);
    CHECK(aggregate_shares(std::vector<Share>{a}, 1) == a.payload);

    Share zero1{ShareOrigin::source(1), 1, scalar(f, 0)};
    Share zero2{ShareOrigin::source(2), 1, scalar(f, 0)};
    CHECK(aggregate_shares(std::vector<Share>{zero1, zero2}, 2).at(0, 0).value() == 0);

    Share wrong_worker{ShareOrigin::source(2), 2, scalar(f, 2)};
    CHECK_THROWS_AS(aggregate_shares(std::vector<Share>{a, wrong_worker}, 2),
                    std::invalid_argument);
    Share dup{ShareOrigin::source(1), 1, scalar(f, 5)};
    CHECK_THROWS_AS(aggregate_shares(std::vector<Share>{a, dup}, 2),
                    std::invalid_argument);
    Share user_share{ShareOrigin::user(), 1, scalar(f, 5)};
    CHECK_THROWS_AS(aggregate_shares(std::vector<Share>{a, user_share}, 2),
                    std::invalid_argument);
    CHECK_THROWS_AS(aggregate_shares(std::vector<Share>{a, b}, 3),
                    std::invalid_argument);
}

TEST_CASE("worker_compute applies h") {
    PrimeField f7(7);
    PolyFunction proj = projection_w(Shape{1, 1}, Shape{1, 1});
    CHECK(worker_compute(scalar(f7, 3), scalar(f7, 4), proj).at(0, 0).value() == 3);

    PolyFunction prod = builtin_elementwise(f7, Shape{1, 1}, {{1, 1, 1}}, 2);
    CHECK(worker_compute(scalar(f7, 3), scalar(f7, 4), prod).at(0, 0).value() == 5);

    PolyFunction mm = builtin_matmul(2, 2, 2);
    SeededRng rng(8);
    FieldMatrix a = FieldMatrix::random(f7, 2, 2, rng);
    FieldMatrix b = FieldMatrix::random(f7, 2, 2, rng);
    CHECK(worker_compute(a, b, mm) == a * b);
}

TEST_CASE("rs_decode recovers clean polynomials") {
    PrimeField f(257);
    SeededRng rng(13);
    for (std::size_t deg = 0; deg <= 8; ++deg) {
        MatrixPolynomial src = MatrixPolynomial::random(f, Shape{2, 2}, deg, rng);
        std::vector<WorkerResponse> responses;
        for (std::size_t i = 0; i < deg + 1; ++i) {
            FieldElement x = f.element(i + 1);
            responses.push_back(WorkerResponse{i + 1, x, src.eval(x)});
        }
        DecodeResult dec = rs_decode(responses, deg, 0);
        REQUIRE(dec.status == DecodeStatus::ok);
        CHECK(dec.poly->entries == src.entries);
    }
}

TEST_CASE("rs_decode majority vote on a corrupted constant") {
    PrimeField f(13);
    std::vector<WorkerResponse> responses;
    responses.push_back(WorkerResponse{1, f.element(1), scalar(f, 6)});
    responses.push_back(WorkerResponse{2, f.element(2), scalar(f, 6)});
    responses.push_back(WorkerResponse{3, f.element(3), scalar(f, 9)});  // corrupted
    DecodeResult dec = rs_decode(responses, 0, 1);
    REQUIRE(dec.status == DecodeStatus::ok);
    CHECK(dec.poly->entries[0].coeff(0).value() == 6);
}

TEST_CASE("rs_decode corrects one error over 1000 random trials") {
    PrimeField f(257);
    SeededRng rng(99);
    for (int trial = 0; trial < 1000; ++trial) {
        Polynomial src = Polynomial::random(f, 4, rng);
        std::vector<WorkerResponse> responses;
        for (std::size_t i = 0; i < 7; ++i) {
            FieldElement x = f.element(i + 1);
            FieldMatrix y(f, 1, 1);
            y.set(0, 0, src(x));
            responses.push_back(WorkerResponse{i + 1, x, y});
        }
        const std::size_t victim = rng.next_u64() % 7;
        const std::uint64_t orig = responses[victim].result->at(0, 0).value();
        std::uint64_t wrong = (orig + 1 + rng.next_u64() % 255) % 257;
        responses[victim].result->set(0, 0, wrong);

        DecodeResult dec = rs_decode(responses, 4, 1);
        REQUIRE(dec.status == DecodeStatus::ok);
        CHECK(dec.poly->entries[0] == src);
    }
}

TEST_CASE("rs_decode reports insufficiency and failure distinctly") {
    PrimeField f(13);
    std::vector<WorkerResponse> responses;
    for (std::size_t i = 0; i < 3; ++i)
        responses.push_back(WorkerResponse{i + 1, f.element(i + 1), scalar(f, i)});
    responses.push_back(WorkerResponse{4, f.element(4), std::nullopt});  // straggler

    DecodeResult dec = rs_decode(responses, 1, 1);  // needs 4 responded
    CHECK(dec.status == DecodeStatus::insufficient_responses);
    CHECK(dec.needed == 4);

    // no degree-1 polynomial within one error of this word (checked by hand)
    std::vector<WorkerResponse> bad;
    bad.push_back(WorkerResponse{1, f.element(1), scalar(f, 1)});
    bad.push_back(WorkerResponse{2, f.element(2), scalar(f, 2)});
    bad.push_back(WorkerResponse{3, f.element(3), scalar(f, 7)});
    bad.push_back(WorkerResponse{4, f.element(4), scalar(f, 9)});
    DecodeResult fail = rs_decode(bad, 1, 1);
    CHECK(fail.status == DecodeStatus::decoding_failure);

    std::vector<WorkerResponse> dup;
    dup.push_back(WorkerResponse{1, f.element(1), scalar(f, 1)});
    dup.push_back(WorkerResponse{2, f.element(1), scalar(f, 2)});
    CHECK_THROWS_AS(rs_decode(dup, 0, 0), std::invalid_argument);
}

TEST_CASE("matrix decoding shares the error locator and falls back cleanly") {
    PrimeField f(257);
    SeededRng rng(4);
    MatrixPolynomial src = MatrixPolynomial::random(f, Shape{2, 3}, 3, rng);
    auto make_responses = [&] {
        std::vector<WorkerResponse> rs;
        for (std::size_t i = 0; i < 6; ++i) {
            FieldElement x = f.element(i + 10);
            rs.push_back(WorkerResponse{i + 1, x, src.eval(x)});
        }
        return rs;
    };

    // whole-matrix corruption at one worker: the pilot's locator covers it
    {
        std::vector<WorkerResponse> rs = make_responses();
        rs[2].result = FieldMatrix::random(f, 2, 3, rng);
        DecodeResult dec = rs_decode(rs, 3, 1);
        REQUIRE(dec.status == DecodeStatus::ok);
        CHECK(dec.poly->entries == src.entries);
    }

    // corruption in a single non-pilot entry: pilot sees a clean word, the
    // per-entry fallback must still recover
    {
        std::vector<WorkerResponse> rs = make_responses();
        FieldElement orig = rs[4].result->at(1, 2);
        rs[4].result->set(1, 2, orig + f.element(1));
        DecodeResult dec = rs_decode(rs, 3, 1);
        REQUIRE(dec.status == DecodeStatus::ok);
        CHECK(dec.poly->entries == src.entries);
    }

    // corruption in pilot and a different worker's other entry
    {
        std::vector<WorkerResponse> rs = make_responses();
        rs[0].result->set(0, 0, rs[0].result->at(0, 0) + f.element(5));
        rs[5].result->set(1, 1, rs[5].result->at(1, 1) + f.element(5));
        DecodeResult dec = rs_decode(rs, 3, 1);
        // two corrupted workers exceed A=1; entries individually carry one
        // error each, so per-entry decoding still succeeds
        REQUIRE(dec.status == DecodeStatus::ok);
        CHECK(dec.poly->entries == src.entries);
    }
}

TEST_CASE("matrix decoding stress: two corrupted workers, mixed shapes") {
    PrimeField f(2147483647ULL);
    SeededRng rng(77);
    for (int trial = 0; trial < 200; ++trial) {
        const std::size_t deg = 1 + rng.next_u64() % 8;
        const std::size_t n = deg + 5;  // A = 2
        MatrixPolynomial src = MatrixPolynomial::random(f, Shape{2, 2}, deg, rng);

        std::vector<WorkerResponse> rs;
        for (std::size_t i = 0; i < n; ++i) {
            FieldElement x = f.element(i + 1);
            rs.push_back(WorkerResponse{i + 1, x, src.eval(x)});
        }

        const std::size_t v1 = rng.next_u64() % n;
        std::size_t v2 = rng.next_u64() % n;
        while (v2 == v1) v2 = rng.next_u64() % n;

        switch (trial % 3) {
            case 0:  // whole-matrix noise at both workers
                rs[v1].result = FieldMatrix::random(f, 2, 2, rng);
                rs[v2].result = FieldMatrix::random(f, 2, 2, rng);
                break;
            case 1: {  // coalition evaluating one lie polynomial
                MatrixPolynomial lie = MatrixPolynomial::random(f, Shape{2, 2}, deg, rng);
                rs[v1].result = lie.eval(rs[v1].alpha);
                rs[v2].result = lie.eval(rs[v2].alpha);
                break;
            }
            case 2:  // disjoint single-entry corruptions
                rs[v1].result->set(0, 1, rs[v1].result->at(0, 1) + f.element(1));
                rs[v2].result->set(1, 0, rs[v2].result->at(1, 0) + f.element(2));
                break;
        }

        DecodeResult dec = rs_decode(rs, deg, 2);
        REQUIRE(dec.status == DecodeStatus::ok);
        REQUIRE(dec.poly->entries == src.entries);
    }
}

TEST_CASE("reconstruct end to end") {
    PrimeField f(2147483647ULL);
    SeededRng rng(17);

    // K=1, X=0, A=0, h = first projection: reconstruct returns W1
    {
        ProtocolParams params = ProtocolParams::uniform(f, 2, 1, 1, 0, 0, 1, 2, 2, 1);
        PolyFunction proj = projection_w(params.w_block, params.u_block);
        FieldMatrix w1 = FieldMatrix::random(f, 2, 2, rng);
        FieldMatrix u1 = FieldMatrix::random(f, 2, 2, rng);
        std::vector<WorkerResponse> rs = honest_responses(params, {w1}, {u1}, proj);
        ReconstructResult rec = reconstruct(rs, params, proj);
        REQUIRE(rec.ok());
        CHECK(rec.block_results[0] == w1);
        CHECK(rec.used_workers == std::vector<std::size_t>{1});
    }

    // richer case: masks, product h, full honest response set
    {
        ProtocolParams params = ProtocolParams::uniform(f, 12, 3, 1, 2, 1, 0, 1, 3, 2);
        PolyFunction h = builtin_elementwise(f, params.w_block, {{1, 1, 1}}, 2);
        std::vector<FieldMatrix> w_nodes, u_nodes;
        for (int j = 0; j < 5; ++j) {  // K + X node values, masks included
            w_nodes.push_back(FieldMatrix::random(f, 1, 1, rng));
            u_nodes.push_back(FieldMatrix::random(f, 1, 1, rng));
        }
        std::vector<WorkerResponse> rs = honest_responses(params, w_nodes, u_nodes, h);
        ReconstructResult rec = reconstruct(rs, params, h);
        REQUIRE(rec.ok());
        CHECK(rec.used_workers.size() == params.threshold());
        for (std::size_t j = 0; j < 3; ++j)
            CHECK(rec.block_results[j] == h.eval(w_nodes[j], u_nodes[j]));

        // fewer than M responses: an explicit, typed refusal
        std::vector<WorkerResponse> few(rs.begin(), rs.begin() + params.threshold() - 1);
        ReconstructResult insufficient = reconstruct(few, params, h);
        CHECK(insufficient.status == DecodeStatus::insufficient_responses);
        CHECK(insufficient.needed == params.threshold());
        CHECK(insufficient.block_results.empty());
    }
}

TEST_CASE("encoded shares have the declared degree") {
    PrimeField f(257);
    SeededRng rng(23);
    ProtocolParams params = ProtocolParams::uniform(f, 10, 4, 2, 2, 0, 0, 1, 2, 1);
    std::vector<FieldMatrix> nodes;
    for (int j = 0; j < 6; ++j) nodes.push_back(FieldMatrix::random(f, 1, 1, rng));
    std::vector<FieldMatrix> shares = lagrange_encode(nodes, params.points);

    std::vector<std::pair<FieldElement, FieldElement>> pts;
    for (std::size_t k = 0; k < shares.size(); ++k)
        pts.emplace_back(params.points.alphas[k], shares[k].at(0, 0));
    Polynomial g = interpolate(pts);
    CHECK(g.degree() <= 5);  // K + X - 1
    for (std::size_t j = 0; j < 6; ++j)
        CHECK(g(params.points.betas[j]) == nodes[j].at(0, 0));
}

TEST_CASE("wire records round-trip and reject malformed input") {
    PrimeField f7(7);
    FieldMatrix m(f7, 1, 2);
    m.set(0, 0, 1);
    m.set(0, 1, 2);
    WireRecord rec = make_record(m, 3, f7.element(5));
    std::vector<std::uint8_t> bytes = serialize_record(rec);

    // golden layout: q, rows, cols, worker, alpha, count, residues (LE u64)
    REQUIRE(bytes.size() == 48 + 16);
    const std::uint64_t expect[] = {7, 1, 2, 3, 5, 2, 1, 2};
    for (std::size_t i = 0; i < 8; ++i) {
        std::uint64_t v = 0;
        for (int b = 0; b < 8; ++b)
            v |= static_cast<std::uint64_t>(bytes[i * 8 + b]) << (8 * b);
        CHECK(v == expect[i]);
    }

    WireRecord back = parse_record(bytes);
    CHECK(back == rec);
    CHECK(record_matrix(back) == m);

    // property: random records survive the round trip
    PrimeField big(2147483647ULL);
    SeededRng rng(3);
    for (int t = 0; t < 50; ++t) {
        FieldMatrix r = FieldMatrix::random(big, 1 + rng.next_u64() % 3,
                                            1 + rng.next_u64() % 4, rng);
        WireRecord wr = make_record(r, t, sample_uniform(big, rng));
        CHECK(parse_record(serialize_record(wr)) == wr);
    }

    std::vector<std::uint8_t> truncated(bytes.begin(), bytes.end() - 1);
    CHECK_THROWS_AS(parse_record(truncated), std::invalid_argument);
    std::vector<std::uint8_t> bad_count = bytes;
    bad_count[40] = 9;
    CHECK_THROWS_AS(parse_record(bad_count), std::invalid_argument);
    std::vector<std::uint8_t> bad_residue = bytes;
    bad_residue[48] = 9;  // residue >= q
    CHECK_THROWS_AS(parse_record(bad_residue), std::invalid_argument);

    // dimensions whose product wraps around 2^64 must not slip through
    std::vector<std::uint8_t> wrap = bytes;
    for (int i = 0; i < 8; ++i) wrap[8 + i] = 0;   // rows
    for (int i = 0; i < 8; ++i) wrap[16 + i] = 0;  // cols
    wrap[8 + 4] = 1;                               // rows = 2^32
    wrap[16 + 4] = 1;                              // cols = 2^32, product wraps to 0
    for (int i = 0; i < 8; ++i) wrap[40 + i] = 0;  // count = 0
    CHECK_THROWS_AS(parse_record(wrap), std::invalid_argument);
}
