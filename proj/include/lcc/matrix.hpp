#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include "lcc/field.hpp"

namespace lcc {

struct Shape {
    std::size_t rows = 0;
    std::size_t cols = 0;

    std::size_t elems() const { return rows * cols; }
    friend bool operator==(const Shape&, const Shape&) = default;
};

/// Dense row-major matrix over one prime field. All entries stay reduced.
class FieldMatrix {
public:
    FieldMatrix(const PrimeField& field, std::size_t rows, std::size_t cols);
    FieldMatrix(const PrimeField& field, Shape shape)
        : FieldMatrix(field, shape.rows, shape.cols) {}

    static FieldMatrix identity(const PrimeField& field, std::size_t n);
    static FieldMatrix filled(const PrimeField& field, std::size_t rows,
                              std::size_t cols, std::uint64_t value);
    /// Entries drawn row-major from the stream; draw order is pinned.
    static FieldMatrix random(const PrimeField& field, std::size_t rows,
                              std::size_t cols, SeededRng& rng);

    const PrimeField& field() const { return field_; }
    std::size_t rows() const { return rows_; }
    std::size_t cols() const { return cols_; }
    Shape shape() const { return {rows_, cols_}; }

    FieldElement at(std::size_t r, std::size_t c) const;
    void set(std::size_t r, std::size_t c, FieldElement v);
    void set(std::size_t r, std::size_t c, std::uint64_t v);

    std::span<const std::uint64_t> raw() const { return v_; }

    FieldMatrix operator+(const FieldMatrix& o) const;
    FieldMatrix operator-(const FieldMatrix& o) const;
    FieldMatrix& operator+=(const FieldMatrix& o);
    /// Matrix product; inner dimensions must agree.
    FieldMatrix operator*(const FieldMatrix& o) const;
    /// Entrywise product.
    FieldMatrix hadamard(const FieldMatrix& o) const;
    FieldMatrix scaled(FieldElement s) const;

    friend bool operator==(const FieldMatrix&, const FieldMatrix&) = default;

    FieldMatrix submatrix(std::size_t r0, std::size_t c0, std::size_t nr,
                          std::size_t nc) const;
    void paste(std::size_t r0, std::size_t c0, const FieldMatrix& block);

private:
    void require_same_shape(const FieldMatrix& o) const;
    void require_same_field(const FieldMatrix& o) const;

    PrimeField field_;
    std::size_t rows_;
    std::size_t cols_;
    std::vector<std::uint64_t> v_;
};

} // namespace lcc
