#pragma once

#include <iosfwd>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "lcc/poly.hpp"

namespace lcc {

/// Expression over two matrix inputs, built from the closed operation set
/// {add, subtract, scalar multiply, matrix multiply, entrywise multiply,
/// constant}. Shape and total degree are inferred structurally, so a
/// PolyFunction can certify its declared degree without evaluating.
class HExpr {
public:
    static HExpr var_w(Shape shape);
    static HExpr var_u(Shape shape);
    static HExpr constant(FieldMatrix value);

    HExpr operator+(const HExpr& o) const;
    HExpr operator-(const HExpr& o) const;
    HExpr matmul(const HExpr& o) const;
    HExpr hadamard(const HExpr& o) const;
    HExpr scaled(FieldElement s) const;

    Shape shape() const;
    std::size_t degree() const;
    FieldMatrix eval(const FieldMatrix& w, const FieldMatrix& u) const;

    struct Node;  // definition is internal to funcs.cpp

private:
    explicit HExpr(std::shared_ptr<const Node> n) : node_(std::move(n)) {}
    std::shared_ptr<const Node> node_;
};

/// A named polynomial map h(w, u) with declared shapes and total degree.
/// Construction fails if the declared degree does not match the degree
/// computed from the expression DAG.
class PolyFunction {
public:
    PolyFunction(std::string name, HExpr body, Shape w_shape, Shape u_shape,
                 std::size_t declared_degree);

    const std::string& name() const { return name_; }
    std::size_t degree() const { return degree_; }
    Shape w_shape() const { return w_shape_; }
    Shape u_shape() const { return u_shape_; }
    Shape out_shape() const { return out_shape_; }

    FieldMatrix eval(const FieldMatrix& w, const FieldMatrix& u) const;

private:
    std::string name_;
    HExpr body_;
    Shape w_shape_, u_shape_, out_shape_;
    std::size_t degree_;
};

/// h(w, u) = w * u on rows x inner and inner x cols blocks; degree 2.
PolyFunction builtin_matmul(std::size_t rows, std::size_t inner, std::size_t cols);

/// One term coeff * w^w_pow (*) u^u_pow of an entrywise polynomial.
struct ElementwiseTerm {
    std::size_t w_pow = 0;
    std::size_t u_pow = 0;
    std::uint64_t coeff = 1;
};

/// Entrywise h(w, u) = sum of terms; max(w_pow + u_pow) must equal `degree`.
/// Zero coefficients are rejected so the structural degree is meaningful.
PolyFunction builtin_elementwise(const PrimeField& field, Shape block,
                                 std::vector<ElementwiseTerm> terms,
                                 std::size_t degree);

/// Rank-R bilinear construction for an m x p by p x n block product:
/// tensors a, b, c such that sum_r c_r[k][j] * (a_r : A) * (b_r : B)
/// equals (A B)[k][j]. The identity is verified on random scalar blocks
/// at construction.
struct BilinearConstruction {
    PrimeField field;
    std::size_t rank, m, p, n;
    std::vector<FieldMatrix> a;  // R matrices, m x p
    std::vector<FieldMatrix> b;  // R matrices, p x n
    std::vector<FieldMatrix> c;  // R matrices, m x n

    /// Linear form a_r applied to an m x p grid of equally-shaped blocks.
    FieldMatrix left_form(std::size_t r,
                          const std::vector<std::vector<FieldMatrix>>& blocks) const;
    /// Linear form b_r applied to a p x n grid of blocks.
    FieldMatrix right_form(std::size_t r,
                           const std::vector<std::vector<FieldMatrix>>& blocks) const;
};

BilinearConstruction make_bilinear(const PrimeField& field, std::size_t rank,
                                   std::size_t m, std::size_t p, std::size_t n,
                                   std::vector<FieldMatrix> a,
                                   std::vector<FieldMatrix> b,
                                   std::vector<FieldMatrix> c);

/// The classic rank-7 construction for 2x2 block products.
BilinearConstruction strassen_2x2(const PrimeField& field);

/// Plain-text tensor format: header "R m p n", then for each r the a, b, c
/// matrices as whitespace-separated integers (negative values allowed,
/// reduced mod q).
BilinearConstruction load_bilinear(std::istream& in, const PrimeField& field);

/// Reassemble the full product from the R block products M_r.
FieldMatrix recombine(const BilinearConstruction& constr,
                      std::span<const FieldMatrix> products);

/// An encoding job derived from a bilinear construction: each party holds an
/// additive piece of every one of the R left forms, the user holds the R
/// right forms, and block r decodes to M_r under h = matmul with degree 2.
struct BilinearJob {
    std::vector<std::vector<FieldMatrix>> source_contributions;  // [sources][R]
    std::vector<FieldMatrix> user_blocks;                        // [R]
    Shape w_block, u_block;
    std::size_t n_blocks = 0;
    std::size_t deg_h = 2;
};

/// Split W's block columns across `sources` contiguous owners and derive the
/// per-source additive pieces of every left form. With require_local set,
/// a left form whose support spans more than one owner is rejected instead.
BilinearJob bilinear_to_lcc_job(const BilinearConstruction& constr,
                                const FieldMatrix& w, std::size_t sources,
                                const FieldMatrix& u, bool require_local = false);

} // namespace lcc
