#include "lcc/poly.hpp"

#include <algorithm>
#include <set>
#include <stdexcept>

namespace lcc {

Polynomial::Polynomial(const PrimeField& field, std::vector<std::uint64_t> coeffs)
    : field_(field), c_(std::move(coeffs)) {
    for (auto& x : c_) x %= field_.modulus();
    trim();
}

Polynomial Polynomial::random(const PrimeField& field, std::size_t degree,
                              SeededRng& rng) {
    std::vector<std::uint64_t> c(degree + 1);
    for (std::size_t i = 0; i < degree; ++i) c[i] = sample_uniform(field, rng).value();
    // leading coefficient nonzero so the degree is exact
    std::uint64_t lead;
    do {
        lead = sample_uniform(field, rng).value();
    } while (lead == 0);
    c[degree] = lead;
    return Polynomial(field, std::move(c));
}

void Polynomial::trim() {
    while (!c_.empty() && c_.back() == 0) c_.pop_back();
}

FieldElement Polynomial::operator()(FieldElement z) const {
    FieldElement acc = field_.zero();
    for (std::size_t i = c_.size(); i-- > 0;) {
        acc = acc * z + field_.element(c_[i]);
    }
    return acc;
}

std::vector<FieldElement> Polynomial::eval_batch(
    std::span<const FieldElement> zs) const {
    std::vector<FieldElement> out;
    out.reserve(zs.size());
    for (FieldElement z : zs) out.push_back((*this)(z));
    return out;
}

Polynomial Polynomial::operator+(const Polynomial& o) const {
    if (field_.modulus() != o.field_.modulus())
        throw std::invalid_argument("field mismatch");
    std::vector<std::uint64_t> c(std::max(c_.size(), o.c_.size()), 0);
    const std::uint64_t q = field_.modulus();
    for (std::size_t i = 0; i < c.size(); ++i) {
        std::uint64_t a = i < c_.size() ? c_[i] : 0;
        std::uint64_t b = i < o.c_.size() ? o.c_[i] : 0;
        std::uint64_t s = a + b;
        if (s >= q || s < a) s -= q;
        c[i] = s;
    }
    return Polynomial(field_, std::move(c));
}

Polynomial Polynomial::operator-(const Polynomial& o) const {
    if (field_.modulus() != o.field_.modulus())
        throw std::invalid_argument("field mismatch");
    std::vector<std::uint64_t> c(std::max(c_.size(), o.c_.size()), 0);
    const std::uint64_t q = field_.modulus();
    for (std::size_t i = 0; i < c.size(); ++i) {
        std::uint64_t a = i < c_.size() ? c_[i] : 0;
        std::uint64_t b = i < o.c_.size() ? o.c_[i] : 0;
        c[i] = a >= b ? a - b : a + (q - b);
    }
    return Polynomial(field_, std::move(c));
}

Polynomial Polynomial::operator*(const Polynomial& o) const {
    if (field_.modulus() != o.field_.modulus())
        throw std::invalid_argument("field mismatch");
    if (is_zero() || o.is_zero()) return Polynomial(field_);
    std::vector<std::uint64_t> c(c_.size() + o.c_.size() - 1, 0);
    const std::uint64_t q = field_.modulus();
    for (std::size_t i = 0; i < c_.size(); ++i) {
        if (c_[i] == 0) continue;
        for (std::size_t j = 0; j < o.c_.size(); ++j) {
            auto p = static_cast<unsigned __int128>(c_[i]) * o.c_[j] % q;
            std::uint64_t s = c[i + j] + static_cast<std::uint64_t>(p);
            if (s >= q || s < c[i + j]) s -= q;
            c[i + j] = s;
        }
    }
    return Polynomial(field_, std::move(c));
}

Polynomial Polynomial::scaled(FieldElement s) const {
    if (s.modulus() != field_.modulus()) throw std::invalid_argument("field mismatch");
    std::vector<std::uint64_t> c(c_.size());
    const std::uint64_t q = field_.modulus();
    for (std::size_t i = 0; i < c_.size(); ++i)
        c[i] = static_cast<std::uint64_t>(
            static_cast<unsigned __int128>(c_[i]) * s.value() % q);
    return Polynomial(field_, std::move(c));
}

std::pair<Polynomial, Polynomial> Polynomial::divmod(const Polynomial& divisor) const {
    if (field_.modulus() != divisor.field_.modulus())
        throw std::invalid_argument("field mismatch");
    if (divisor.is_zero()) throw std::invalid_argument("division by zero polynomial");
    if (degree() < divisor.degree()) return {Polynomial(field_), *this};

    std::vector<std::uint64_t> rem = c_;
    std::vector<std::uint64_t> quot(c_.size() - divisor.c_.size() + 1, 0);
    const std::uint64_t q = field_.modulus();
    const FieldElement lead_inv = field_.element(divisor.c_.back()).inverse();

    for (std::size_t i = rem.size(); i-- >= divisor.c_.size();) {
        if (rem[i] == 0) {
            if (i == 0) break;
            continue;
        }
        FieldElement f = field_.element(rem[i]) * lead_inv;
        quot[i - divisor.c_.size() + 1] = f.value();
        for (std::size_t j = 0; j < divisor.c_.size(); ++j) {
            std::size_t pos = i - divisor.c_.size() + 1 + j;
            auto p = static_cast<unsigned __int128>(f.value()) * divisor.c_[j] % q;
            std::uint64_t b = static_cast<std::uint64_t>(p);
            rem[pos] = rem[pos] >= b ? rem[pos] - b : rem[pos] + (q - b);
        }
        if (i == 0) break;
    }
    return {Polynomial(field_, std::move(quot)), Polynomial(field_, std::move(rem))};
}

bool operator==(const Polynomial& a, const Polynomial& b) {
    return a.field_.modulus() == b.field_.modulus() && a.c_ == b.c_;
}

FieldElement lagrange_basis_at(std::span<const FieldElement> betas, std::size_t j,
                               FieldElement z) {
    if (j >= betas.size()) throw std::out_of_range("basis index");
    FieldElement num = z;  // borrow field
    num = num.pow(0);      // one
    FieldElement den = num;
    for (std::size_t l = 0; l < betas.size(); ++l) {
        if (l == j) continue;
        if (betas[l] == betas[j])
            throw std::invalid_argument("duplicate interpolation nodes");
        num = num * (z - betas[l]);
        den = den * (betas[j] - betas[l]);
    }
    return num / den;
}

Polynomial interpolate(std::span<const std::pair<FieldElement, FieldElement>> points) {
    if (points.empty()) throw std::invalid_argument("no points to interpolate");
    const std::uint64_t q = points[0].first.modulus();
    PrimeField field(q);

    const std::size_t n = points.size();
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = i + 1; j < n; ++j)
            if (points[i].first == points[j].first)
                throw std::invalid_argument("duplicate interpolation nodes");

    // Newton divided differences
    std::vector<FieldElement> dd(n);
    for (std::size_t i = 0; i < n; ++i) dd[i] = points[i].second;
    for (std::size_t level = 1; level < n; ++level) {
        for (std::size_t i = n - 1; i >= level; --i) {
            dd[i] = (dd[i] - dd[i - 1]) / (points[i].first - points[i - level].first);
            if (i == level) break;
        }
    }

    // expand Newton form into monomial coefficients
    Polynomial acc(field, {dd[n - 1].value()});
    for (std::size_t i = n - 1; i-- > 0;) {
        Polynomial shift(field, {(-points[i].first).value(), 1});
        acc = acc * shift + Polynomial(field, {dd[i].value()});
    }
    return acc;
}

FieldMatrix cauchy_matrix(std::span<const FieldElement> alphas,
                          std::span<const FieldElement> betas) {
    if (alphas.empty() || alphas.size() != betas.size())
        throw std::invalid_argument("cauchy matrix needs equally many alphas and betas");
    std::set<std::uint64_t> seen;
    for (FieldElement a : alphas)
        if (!seen.insert(a.value()).second)
            throw std::invalid_argument("cauchy matrix points must be pairwise distinct");
    for (FieldElement b : betas)
        if (!seen.insert(b.value()).second)
            throw std::invalid_argument("cauchy matrix points must be pairwise distinct");

    PrimeField field(alphas[0].modulus());
    FieldMatrix m(field, alphas.size(), betas.size());
    for (std::size_t i = 0; i < alphas.size(); ++i)
        for (std::size_t j = 0; j < betas.size(); ++j)
            m.set(i, j, lagrange_basis_at(betas, j, alphas[i]));
    return m;
}

std::optional<FieldMatrix> invert_matrix(const FieldMatrix& m) {
    if (m.rows() != m.cols()) throw std::invalid_argument("inverse of non-square matrix");
    const std::size_t n = m.rows();
    const PrimeField& field = m.field();

    FieldMatrix a = m;
    FieldMatrix inv = FieldMatrix::identity(field, n);

    for (std::size_t col = 0; col < n; ++col) {
        std::size_t pivot = col;
        while (pivot < n && a.at(pivot, col).is_zero()) ++pivot;
        if (pivot == n) return std::nullopt;
        if (pivot != col) {
            for (std::size_t j = 0; j < n; ++j) {
                FieldElement t = a.at(col, j);
                a.set(col, j, a.at(pivot, j));
                a.set(pivot, j, t);
                t = inv.at(col, j);
                inv.set(col, j, inv.at(pivot, j));
                inv.set(pivot, j, t);
            }
        }
        FieldElement pinv = a.at(col, col).inverse();
        for (std::size_t j = 0; j < n; ++j) {
            a.set(col, j, a.at(col, j) * pinv);
            inv.set(col, j, inv.at(col, j) * pinv);
        }
        for (std::size_t r = 0; r < n; ++r) {
            if (r == col) continue;
            FieldElement f = a.at(r, col);
            if (f.is_zero()) continue;
            for (std::size_t j = 0; j < n; ++j) {
                a.set(r, j, a.at(r, j) - f * a.at(col, j));
                inv.set(r, j, inv.at(r, j) - f * inv.at(col, j));
            }
        }
    }
    return inv;
}

EvalPoints EvalPoints::standard(const PrimeField& field, std::size_t nodes,
                                std::size_t workers) {
    std::vector<FieldElement> betas, alphas;
    betas.reserve(nodes);
    alphas.reserve(workers);
    for (std::size_t j = 1; j <= nodes; ++j) betas.push_back(field.element(j));
    for (std::size_t k = 1; k <= workers; ++k)
        alphas.push_back(field.element(nodes + k));
    return custom(std::move(betas), std::move(alphas));
}

EvalPoints EvalPoints::custom(std::vector<FieldElement> betas,
                              std::vector<FieldElement> alphas) {
    if (betas.empty() || alphas.empty())
        throw std::invalid_argument("eval points must be non-empty");
    std::set<std::uint64_t> bset;
    for (FieldElement b : betas)
        if (!bset.insert(b.value()).second)
            throw std::invalid_argument("duplicate beta points");
    std::set<std::uint64_t> aset;
    for (FieldElement a : alphas) {
        if (!aset.insert(a.value()).second)
            throw std::invalid_argument("duplicate alpha points");
        if (bset.count(a.value()))
            throw std::invalid_argument("alpha points must avoid all beta points");
    }
    EvalPoints p;
    p.betas = std::move(betas);
    p.alphas = std::move(alphas);
    return p;
}

} // namespace lcc
