#pragma once

#include <cstdint>
#include <stdexcept>

#include "lcc/rng.hpp"

namespace lcc {

/// Deterministic Miller-Rabin, exact for all n < 2^64.
bool is_prime_u64(std::uint64_t n);

class FieldElement;

/// Prime field F_q with 3 <= q < 2^64. Primality is verified at
/// construction; copies are trivial.
class PrimeField {
public:
    explicit PrimeField(std::uint64_t modulus);

    std::uint64_t modulus() const { return q_; }

    FieldElement element(std::uint64_t value) const;
    FieldElement from_signed(std::int64_t value) const;
    FieldElement zero() const;
    FieldElement one() const;

    friend bool operator==(const PrimeField&, const PrimeField&) = default;

private:
    std::uint64_t q_;
};

/// A residue in [0, q) tagged with its modulus. Mixing elements of
/// different fields (or the default null element) is a usage error.
class FieldElement {
public:
    FieldElement() = default;

    std::uint64_t value() const { return v_; }
    std::uint64_t modulus() const { return q_; }
    bool is_zero() const { return v_ == 0; }

    friend bool operator==(const FieldElement&, const FieldElement&) = default;

    friend FieldElement operator+(FieldElement a, FieldElement b) {
        require_same(a, b);
        std::uint64_t s = a.v_ + b.v_;
        if (s >= a.q_ || s < a.v_) s -= a.q_;
        return FieldElement(s, a.q_);
    }

    friend FieldElement operator-(FieldElement a, FieldElement b) {
        require_same(a, b);
        std::uint64_t s = a.v_ >= b.v_ ? a.v_ - b.v_ : a.v_ + (a.q_ - b.v_);
        return FieldElement(s, a.q_);
    }

    friend FieldElement operator*(FieldElement a, FieldElement b) {
        require_same(a, b);
        auto p = static_cast<unsigned __int128>(a.v_) * b.v_;
        return FieldElement(static_cast<std::uint64_t>(p % a.q_), a.q_);
    }

    friend FieldElement operator/(FieldElement a, FieldElement b) {
        return a * b.inverse();
    }

    FieldElement operator-() const {
        require_field();
        return FieldElement(v_ == 0 ? 0 : q_ - v_, q_);
    }

    FieldElement& operator+=(FieldElement o) { return *this = *this + o; }
    FieldElement& operator-=(FieldElement o) { return *this = *this - o; }
    FieldElement& operator*=(FieldElement o) { return *this = *this * o; }

    FieldElement pow(std::uint64_t e) const {
        require_field();
        FieldElement r(1 % q_, q_);
        FieldElement b = *this;
        while (e) {
            if (e & 1) r *= b;
            b *= b;
            e >>= 1;
        }
        return r;
    }

    /// Multiplicative inverse via Fermat; zero has none.
    FieldElement inverse() const {
        require_field();
        if (v_ == 0) throw std::domain_error("inverse of zero field element");
        return pow(q_ - 2);
    }

private:
    friend class PrimeField;
    FieldElement(std::uint64_t v, std::uint64_t q) : v_(v), q_(q) {}

    void require_field() const {
        if (q_ == 0) throw std::invalid_argument("operation on null field element");
    }

    static void require_same(FieldElement a, FieldElement b) {
        a.require_field();
        if (a.q_ != b.q_) throw std::invalid_argument("field mismatch");
    }

    std::uint64_t v_ = 0;
    std::uint64_t q_ = 0;
};

inline FieldElement PrimeField::element(std::uint64_t value) const {
    return FieldElement(value % q_, q_);
}

inline FieldElement PrimeField::from_signed(std::int64_t value) const {
    if (value >= 0) return element(static_cast<std::uint64_t>(value));
    std::uint64_t mag = static_cast<std::uint64_t>(-(value + 1)) + 1;
    std::uint64_t r = mag % q_;
    return FieldElement(r == 0 ? 0 : q_ - r, q_);
}

inline FieldElement PrimeField::zero() const { return FieldElement(0, q_); }
inline FieldElement PrimeField::one() const { return FieldElement(1, q_); }

/// Uniform draw over [0, q) by rejection; no modulo bias.
FieldElement sample_uniform(const PrimeField& field, SeededRng& rng);

} // namespace lcc
