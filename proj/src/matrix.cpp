#include "lcc/matrix.hpp"

#include <stdexcept>

namespace lcc {

namespace {
std::uint64_t mulmod(std::uint64_t a, std::uint64_t b, std::uint64_t m) {
    return static_cast<std::uint64_t>(static_cast<unsigned __int128>(a) * b % m);
}
std::uint64_t addmod(std::uint64_t a, std::uint64_t b, std::uint64_t m) {
    std::uint64_t s = a + b;
    if (s >= m || s < a) s -= m;
    return s;
}
} // namespace

FieldMatrix::FieldMatrix(const PrimeField& field, std::size_t rows, std::size_t cols)
    : field_(field), rows_(rows), cols_(cols), v_(rows * cols, 0) {
    if (rows == 0 || cols == 0)
        throw std::invalid_argument("matrix dimensions must be positive");
}

FieldMatrix FieldMatrix::identity(const PrimeField& field, std::size_t n) {
    FieldMatrix m(field, n, n);
    for (std::size_t i = 0; i < n; ++i) m.v_[i * n + i] = 1 % field.modulus();
    return m;
}

FieldMatrix FieldMatrix::filled(const PrimeField& field, std::size_t rows,
                                std::size_t cols, std::uint64_t value) {
    FieldMatrix m(field, rows, cols);
    std::uint64_t r = value % field.modulus();
    for (auto& x : m.v_) x = r;
    return m;
}

FieldMatrix FieldMatrix::random(const PrimeField& field, std::size_t rows,
                                std::size_t cols, SeededRng& rng) {
    FieldMatrix m(field, rows, cols);
    for (auto& x : m.v_) x = sample_uniform(field, rng).value();
    return m;
}

FieldElement FieldMatrix::at(std::size_t r, std::size_t c) const {
    if (r >= rows_ || c >= cols_) throw std::out_of_range("matrix index");
    return field_.element(v_[r * cols_ + c]);
}

void FieldMatrix::set(std::size_t r, std::size_t c, FieldElement v) {
    if (r >= rows_ || c >= cols_) throw std::out_of_range("matrix index");
    if (v.modulus() != field_.modulus())
        throw std::invalid_argument("field mismatch");
    v_[r * cols_ + c] = v.value();
}

void FieldMatrix::set(std::size_t r, std::size_t c, std::uint64_t v) {
    set(r, c, field_.element(v));
}

void FieldMatrix::require_same_shape(const FieldMatrix& o) const {
    require_same_field(o);
    if (rows_ != o.rows_ || cols_ != o.cols_)
        throw std::invalid_argument("matrix shape mismatch");
}

void FieldMatrix::require_same_field(const FieldMatrix& o) const {
    if (field_.modulus() != o.field_.modulus())
        throw std::invalid_argument("field mismatch");
}

FieldMatrix FieldMatrix::operator+(const FieldMatrix& o) const {
    require_same_shape(o);
    FieldMatrix r = *this;
    const std::uint64_t q = field_.modulus();
    for (std::size_t i = 0; i < v_.size(); ++i) r.v_[i] = addmod(v_[i], o.v_[i], q);
    return r;
}

FieldMatrix& FieldMatrix::operator+=(const FieldMatrix& o) {
    require_same_shape(o);
    const std::uint64_t q = field_.modulus();
    for (std::size_t i = 0; i < v_.size(); ++i) v_[i] = addmod(v_[i], o.v_[i], q);
    return *this;
}

FieldMatrix FieldMatrix::operator-(const FieldMatrix& o) const {
    require_same_shape(o);
    FieldMatrix r = *this;
    const std::uint64_t q = field_.modulus();
    for (std::size_t i = 0; i < v_.size(); ++i) {
        const std::uint64_t a = v_[i];
        const std::uint64_t b = o.v_[i];
        r.v_[i] = a >= b ? a - b : a + (q - b);
    }
    return r;
}

FieldMatrix FieldMatrix::operator*(const FieldMatrix& o) const {
    require_same_field(o);
    if (cols_ != o.rows_)
        throw std::invalid_argument("matrix product inner dimension mismatch");
    FieldMatrix r(field_, rows_, o.cols_);
    const std::uint64_t q = field_.modulus();
    for (std::size_t i = 0; i < rows_; ++i) {
        for (std::size_t k = 0; k < cols_; ++k) {
            const std::uint64_t a = v_[i * cols_ + k];
            if (a == 0) continue;
            for (std::size_t j = 0; j < o.cols_; ++j) {
                std::uint64_t& dst = r.v_[i * o.cols_ + j];
                dst = addmod(dst, mulmod(a, o.v_[k * o.cols_ + j], q), q);
            }
        }
    }
    return r;
}

FieldMatrix FieldMatrix::hadamard(const FieldMatrix& o) const {
    require_same_shape(o);
    FieldMatrix r = *this;
    const std::uint64_t q = field_.modulus();
    for (std::size_t i = 0; i < v_.size(); ++i) r.v_[i] = mulmod(v_[i], o.v_[i], q);
    return r;
}

FieldMatrix FieldMatrix::scaled(FieldElement s) const {
    if (s.modulus() != field_.modulus())
        throw std::invalid_argument("field mismatch");
    FieldMatrix r = *this;
    const std::uint64_t q = field_.modulus();
    for (auto& x : r.v_) x = mulmod(x, s.value(), q);
    return r;
}

FieldMatrix FieldMatrix::submatrix(std::size_t r0, std::size_t c0, std::size_t nr,
                                   std::size_t nc) const {
    if (r0 + nr > rows_ || c0 + nc > cols_)
        throw std::out_of_range("submatrix out of range");
    FieldMatrix r(field_, nr, nc);
    for (std::size_t i = 0; i < nr; ++i)
        for (std::size_t j = 0; j < nc; ++j)
            r.v_[i * nc + j] = v_[(r0 + i) * cols_ + (c0 + j)];
    return r;
}

void FieldMatrix::paste(std::size_t r0, std::size_t c0, const FieldMatrix& block) {
    require_same_field(block);
    if (r0 + block.rows_ > rows_ || c0 + block.cols_ > cols_)
        throw std::out_of_range("paste out of range");
    for (std::size_t i = 0; i < block.rows_; ++i)
        for (std::size_t j = 0; j < block.cols_; ++j)
            v_[(r0 + i) * cols_ + (c0 + j)] = block.v_[i * block.cols_ + j];
}

} // namespace lcc
