#pragma once

#include <cstddef>
#include <optional>
#include <span>
#include <utility>
#include <vector>

#include "lcc/matrix.hpp"

namespace lcc {

/// Dense univariate polynomial over a prime field, monomial basis,
/// low-order coefficient first. Trailing zero coefficients are trimmed,
/// so the zero polynomial has no coefficients and degree() == -1.
class Polynomial {
public:
    explicit Polynomial(const PrimeField& field) : field_(field) {}
    Polynomial(const PrimeField& field, std::vector<std::uint64_t> coeffs);

    /// Leading coefficient drawn from [1, q), all others uniform.
    static Polynomial random(const PrimeField& field, std::size_t degree,
                             SeededRng& rng);

    const PrimeField& field() const { return field_; }
    bool is_zero() const { return c_.empty(); }
    std::ptrdiff_t degree() const {
        return static_cast<std::ptrdiff_t>(c_.size()) - 1;
    }
    FieldElement coeff(std::size_t i) const {
        return field_.element(i < c_.size() ? c_[i] : 0);
    }
    std::size_t coeff_count() const { return c_.size(); }

    /// Horner evaluation.
    FieldElement operator()(FieldElement z) const;
    std::vector<FieldElement> eval_batch(std::span<const FieldElement> zs) const;

    Polynomial operator+(const Polynomial& o) const;
    Polynomial operator-(const Polynomial& o) const;
    Polynomial operator*(const Polynomial& o) const;
    Polynomial scaled(FieldElement s) const;
    /// Quotient and remainder; divisor must be nonzero.
    std::pair<Polynomial, Polynomial> divmod(const Polynomial& divisor) const;

    friend bool operator==(const Polynomial&, const Polynomial&);

private:
    void trim();

    PrimeField field_;
    std::vector<std::uint64_t> c_;
};

bool operator==(const Polynomial& a, const Polynomial& b);

/// Value of the Lagrange basis polynomial built on `betas` for index j
/// (0-based) at point z.
FieldElement lagrange_basis_at(std::span<const FieldElement> betas, std::size_t j,
                               FieldElement z);

/// Unique polynomial of degree < points.size() through all pairs.
Polynomial interpolate(std::span<const std::pair<FieldElement, FieldElement>> points);

/// Generalized Cauchy matrix [l_j(alpha_i)] with the basis built on `betas`.
/// All 2X points must be pairwise distinct across both lists.
FieldMatrix cauchy_matrix(std::span<const FieldElement> alphas,
                          std::span<const FieldElement> betas);

/// Gauss-Jordan inverse; nullopt when singular.
std::optional<FieldMatrix> invert_matrix(const FieldMatrix& m);

/// Interpolation nodes (betas, data blocks then masks) and worker
/// evaluation points (alphas). Alphas are kept disjoint from all betas,
/// mask nodes included.
struct EvalPoints {
    std::vector<FieldElement> betas;
    std::vector<FieldElement> alphas;

    /// Canonical layout: beta_j = j for j in [1, nodes],
    /// alpha_k = nodes + k for k in [1, workers].
    static EvalPoints standard(const PrimeField& field, std::size_t nodes,
                               std::size_t workers);
    /// Validates pairwise distinctness and beta/alpha disjointness.
    static EvalPoints custom(std::vector<FieldElement> betas,
                             std::vector<FieldElement> alphas);
};

} // namespace lcc
