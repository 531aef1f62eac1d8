#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <utility>
#include <vector>

#include "lcc/poly.hpp"

using namespace lcc;

namespace {

std::vector<FieldElement> elems(const PrimeField& f,
                                std::initializer_list<std::uint64_t> vals) {
    std::vector<FieldElement> out;
    for (std::uint64_t v : vals) out.push_back(f.element(v));
    return out;
}

} // namespace

TEST_CASE("lagrange basis properties") {
    PrimeField f(17);
    std::vector<FieldElement> betas = elems(f, {1, 2, 3, 4});
    for (std::size_t j = 0; j < betas.size(); ++j) {
        for (std::size_t m = 0; m < betas.size(); ++m) {
            FieldElement v = lagrange_basis_at(betas, j, betas[m]);
            CHECK(v.value() == (j == m ? 1 : 0));
        }
    }

    // hand evaluation: q=7, betas (1,2,3), first basis poly at z=4:
    // (4-2)(4-3) / ((1-2)(1-3)) = 2 / 2 = 1
    PrimeField f7(7);
    std::vector<FieldElement> b3 = elems(f7, {1, 2, 3});
    CHECK(lagrange_basis_at(b3, 0, f7.element(4)).value() == 1);

    // partition of unity at arbitrary points
    SeededRng rng(11);
    for (int t = 0; t < 50; ++t) {
        FieldElement z = sample_uniform(f, rng);
        FieldElement sum = f.zero();
        for (std::size_t j = 0; j < betas.size(); ++j)
            sum += lagrange_basis_at(betas, j, z);
        CHECK(sum.value() == 1);
    }

    std::vector<FieldElement> dup = elems(f, {1, 1, 2});
    CHECK_THROWS_AS(lagrange_basis_at(dup, 0, f.element(5)), std::invalid_argument);
}

TEST_CASE("polynomial evaluation") {
    PrimeField f7(7);
    Polynomial zero(f7);
    CHECK(zero(f7.element(3)).value() == 0);
    CHECK(zero.is_zero());
    CHECK(zero.degree() == -1);

    Polynomial p(f7, {1, 0, 1});  // z^2 + 1
    CHECK(p(f7.element(3)).value() == 3);

    std::vector<FieldElement> zs = elems(f7, {0, 1, 2, 3, 4, 5, 6});
    std::vector<FieldElement> batch = p.eval_batch(zs);
    for (std::size_t i = 0; i < zs.size(); ++i) CHECK(batch[i] == p(zs[i]));
}

TEST_CASE("polynomial ring operations") {
    PrimeField f(257);
    SeededRng rng(21);
    for (int t = 0; t < 100; ++t) {
        Polynomial a = Polynomial::random(f, 1 + rng.next_u64() % 10, rng);
        Polynomial b = Polynomial::random(f, 1 + rng.next_u64() % 6, rng);
        auto [q, r] = a.divmod(b);
        CHECK(q * b + r == a);
        CHECK(r.degree() < b.degree());
        FieldElement z = sample_uniform(f, rng);
        CHECK((a + b)(z) == a(z) + b(z));
        CHECK((a - b)(z) == a(z) - b(z));
        CHECK((a * b)(z) == a(z) * b(z));
    }
    Polynomial a = Polynomial::random(f, 4, rng);
    CHECK_THROWS_AS(a.divmod(Polynomial(f)), std::invalid_argument);
}

TEST_CASE("interpolation recovers the generator") {
    for (std::uint64_t q : {13ULL, 2147483647ULL}) {
        PrimeField f(q);
        SeededRng rng(q);
        for (std::size_t deg = 0; deg <= 12; ++deg) {
            Polynomial src = Polynomial::random(f, deg, rng);
            std::vector<std::pair<FieldElement, FieldElement>> pts;
            for (std::size_t i = 0; i <= deg; ++i) {
                FieldElement x = f.element(i);
                pts.emplace_back(x, src(x));
            }
            Polynomial rec = interpolate(pts);
            CHECK(rec == src);
            if (q > deg + 1) {
                FieldElement held_out = f.element(deg + 1);
                CHECK(rec(held_out) == src(held_out));
            }
        }
    }

    PrimeField f(13);
    std::vector<std::pair<FieldElement, FieldElement>> single = {
        {f.element(5), f.element(9)}};
    Polynomial c = interpolate(single);
    CHECK(c.degree() == 0);
    CHECK(c(f.element(0)).value() == 9);

    std::vector<std::pair<FieldElement, FieldElement>> dup = {
        {f.element(1), f.element(2)}, {f.element(1), f.element(3)}};
    CHECK_THROWS_AS(interpolate(dup), std::invalid_argument);
}

TEST_CASE("cauchy matrices from valid point sets are invertible") {
    PrimeField f7(7);
    std::vector<FieldElement> alphas = {f7.element(4), f7.element(5)};
    std::vector<FieldElement> betas = {f7.element(1), f7.element(2)};
    FieldMatrix m = cauchy_matrix(alphas, betas);

    // independent 2x2 determinant oracle: ad - bc
    FieldElement det = m.at(0, 0) * m.at(1, 1) - m.at(0, 1) * m.at(1, 0);
    CHECK_FALSE(det.is_zero());
    CHECK(invert_matrix(m).has_value());

    // 1x1 case: single basis value is nonzero when the alpha avoids betas
    std::vector<FieldElement> a1 = {f7.element(6)};
    std::vector<FieldElement> b1 = {f7.element(2)};
    FieldMatrix m1 = cauchy_matrix(a1, b1);
    CHECK_FALSE(m1.at(0, 0).is_zero());

    std::vector<FieldElement> overlap = {f7.element(2)};
    CHECK_THROWS_AS(cauchy_matrix(overlap, b1), std::invalid_argument);
}

TEST_CASE("cauchy invertibility exhaustive over small instances") {
    PrimeField f(17);
    for (std::size_t x = 1; x <= 3; ++x) {
        std::vector<FieldElement> betas;
        for (std::size_t j = 1; j <= x; ++j) betas.push_back(f.element(j));
        std::vector<FieldElement> pool;
        for (std::size_t k = 0; k < 8; ++k) pool.push_back(f.element(x + 1 + k));

        // all x-subsets of the 8 candidate alphas
        std::vector<std::size_t> idx(x);
        for (std::size_t i = 0; i < x; ++i) idx[i] = i;
        while (true) {
            std::vector<FieldElement> alphas;
            for (std::size_t i : idx) alphas.push_back(pool[i]);
            CHECK(invert_matrix(cauchy_matrix(alphas, betas)).has_value());

            std::size_t i = x;
            while (i-- > 0) {
                if (idx[i] + 1 <= pool.size() - x + i) {
                    ++idx[i];
                    for (std::size_t j = i + 1; j < x; ++j) idx[j] = idx[j - 1] + 1;
                    break;
                }
                if (i == 0) goto done;
            }
        }
    done:;
    }
}

TEST_CASE("matrix inversion") {
    PrimeField f7(7);
    FieldMatrix id = FieldMatrix::identity(f7, 3);
    CHECK(*invert_matrix(id) == id);

    FieldMatrix m(f7, 2, 2);
    m.set(0, 0, 1);
    m.set(0, 1, 2);
    m.set(1, 0, 3);
    m.set(1, 1, 4);
    // adjugate oracle: det = -2 = 5, inv = det^-1 * [[4,-2],[-3,1]]
    FieldElement det = m.at(0, 0) * m.at(1, 1) - m.at(0, 1) * m.at(1, 0);
    CHECK(det.value() == 5);
    FieldMatrix inv = *invert_matrix(m);
    FieldElement dinv = det.inverse();
    CHECK(inv.at(0, 0) == f7.element(4) * dinv);
    CHECK(inv.at(0, 1) == f7.from_signed(-2) * dinv);
    CHECK(inv.at(1, 0) == f7.from_signed(-3) * dinv);
    CHECK(inv.at(1, 1) == f7.element(1) * dinv);
    CHECK(m * inv == FieldMatrix::identity(f7, 2));

    CHECK_FALSE(invert_matrix(FieldMatrix(f7, 2, 2)).has_value());

    // rank deficient: second row is twice the first
    FieldMatrix sing(f7, 2, 2);
    sing.set(0, 0, 1);
    sing.set(0, 1, 3);
    sing.set(1, 0, 2);
    sing.set(1, 1, 6);
    CHECK_FALSE(invert_matrix(sing).has_value());

    PrimeField big(2147483647ULL);
    SeededRng rng(31);
    for (int t = 0; t < 20; ++t) {
        FieldMatrix r = FieldMatrix::random(big, 4, 4, rng);
        auto rinv = invert_matrix(r);
        if (rinv) CHECK(r * *rinv == FieldMatrix::identity(big, 4));
    }

    CHECK_THROWS_AS(invert_matrix(FieldMatrix(f7, 2, 3)), std::invalid_argument);
}

TEST_CASE("eval point layout and validation") {
    PrimeField f(101);
    EvalPoints pts = EvalPoints::standard(f, 4, 6);
    REQUIRE(pts.betas.size() == 4);
    REQUIRE(pts.alphas.size() == 6);
    for (std::size_t j = 0; j < 4; ++j) CHECK(pts.betas[j].value() == j + 1);
    for (std::size_t k = 0; k < 6; ++k) CHECK(pts.alphas[k].value() == 5 + k);

    // alphas must avoid every beta, mask nodes included
    CHECK_THROWS_AS(
        EvalPoints::custom({f.element(1), f.element(2)}, {f.element(2), f.element(9)}),
        std::invalid_argument);
    CHECK_THROWS_AS(
        EvalPoints::custom({f.element(1), f.element(1)}, {f.element(3)}),
        std::invalid_argument);
    CHECK_THROWS_AS(
        EvalPoints::custom({f.element(1)}, {f.element(3), f.element(3)}),
        std::invalid_argument);

    // q too small to fit all points wraps into duplicates and is rejected
    PrimeField tiny(5);
    CHECK_THROWS_AS(EvalPoints::standard(tiny, 3, 5), std::invalid_argument);
}
