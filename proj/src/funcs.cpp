#include "lcc/funcs.hpp"

#include <istream>
#include <stdexcept>

namespace lcc {

struct HExpr::Node {
    enum class Kind { var_w, var_u, constant, add, sub, scalar_mul, mat_mul, hadamard };

    Kind kind;
    std::shared_ptr<const Node> lhs, rhs;
    std::optional<FieldMatrix> value;   // constant
    std::optional<FieldElement> scalar; // scalar_mul
    Shape shape;
    std::size_t degree = 0;
};

namespace {

using Node = HExpr::Node;

std::shared_ptr<const Node> make_node(Node n) {
    return std::make_shared<const Node>(std::move(n));
}

} // namespace

HExpr HExpr::var_w(Shape shape) {
    Node n;
    n.kind = Node::Kind::var_w;
    n.shape = shape;
    n.degree = 1;
    return HExpr(make_node(std::move(n)));
}

HExpr HExpr::var_u(Shape shape) {
    Node n;
    n.kind = Node::Kind::var_u;
    n.shape = shape;
    n.degree = 1;
    return HExpr(make_node(std::move(n)));
}

HExpr HExpr::constant(FieldMatrix value) {
    Node n;
    n.kind = Node::Kind::constant;
    n.shape = value.shape();
    n.degree = 0;
    n.value = std::move(value);
    return HExpr(make_node(std::move(n)));
}

HExpr HExpr::operator+(const HExpr& o) const {
    if (node_->shape != o.node_->shape)
        throw std::invalid_argument("h expression: addition shape mismatch");
    Node n;
    n.kind = Node::Kind::add;
    n.lhs = node_;
    n.rhs = o.node_;
    n.shape = node_->shape;
    n.degree = std::max(node_->degree, o.node_->degree);
    return HExpr(make_node(std::move(n)));
}

HExpr HExpr::operator-(const HExpr& o) const {
    if (node_->shape != o.node_->shape)
        throw std::invalid_argument("h expression: subtraction shape mismatch");
    Node n;
    n.kind = Node::Kind::sub;
    n.lhs = node_;
    n.rhs = o.node_;
    n.shape = node_->shape;
    n.degree = std::max(node_->degree, o.node_->degree);
    return HExpr(make_node(std::move(n)));
}

HExpr HExpr::matmul(const HExpr& o) const {
    if (node_->shape.cols != o.node_->shape.rows)
        throw std::invalid_argument("h expression: product inner dimension mismatch");
    Node n;
    n.kind = Node::Kind::mat_mul;
    n.lhs = node_;
    n.rhs = o.node_;
    n.shape = {node_->shape.rows, o.node_->shape.cols};
    n.degree = node_->degree + o.node_->degree;
    return HExpr(make_node(std::move(n)));
}

HExpr HExpr::hadamard(const HExpr& o) const {
    if (node_->shape != o.node_->shape)
        throw std::invalid_argument("h expression: entrywise product shape mismatch");
    Node n;
    n.kind = Node::Kind::hadamard;
    n.lhs = node_;
    n.rhs = o.node_;
    n.shape = node_->shape;
    n.degree = node_->degree + o.node_->degree;
    return HExpr(make_node(std::move(n)));
}

HExpr HExpr::scaled(FieldElement s) const {
    Node n;
    n.kind = Node::Kind::scalar_mul;
    n.lhs = node_;
    n.scalar = s;
    n.shape = node_->shape;
    n.degree = node_->degree;
    return HExpr(make_node(std::move(n)));
}

Shape HExpr::shape() const { return node_->shape; }
std::size_t HExpr::degree() const { return node_->degree; }

namespace {

FieldMatrix eval_node(const Node& n, const FieldMatrix& w, const FieldMatrix& u) {
    switch (n.kind) {
        case Node::Kind::var_w: return w;
        case Node::Kind::var_u: return u;
        case Node::Kind::constant: return *n.value;
        case Node::Kind::add: return eval_node(*n.lhs, w, u) + eval_node(*n.rhs, w, u);
        case Node::Kind::sub: return eval_node(*n.lhs, w, u) - eval_node(*n.rhs, w, u);
        case Node::Kind::scalar_mul: return eval_node(*n.lhs, w, u).scaled(*n.scalar);
        case Node::Kind::mat_mul:
            return eval_node(*n.lhs, w, u) * eval_node(*n.rhs, w, u);
        case Node::Kind::hadamard:
            return eval_node(*n.lhs, w, u).hadamard(eval_node(*n.rhs, w, u));
    }
    throw std::logic_error("unreachable");
}

} // namespace

FieldMatrix HExpr::eval(const FieldMatrix& w, const FieldMatrix& u) const {
    return eval_node(*node_, w, u);
}

PolyFunction::PolyFunction(std::string name, HExpr body, Shape w_shape, Shape u_shape,
                           std::size_t declared_degree)
    : name_(std::move(name)),
      body_(std::move(body)),
      w_shape_(w_shape),
      u_shape_(u_shape),
      out_shape_(body_.shape()),
      degree_(declared_degree) {
    if (body_.degree() != declared_degree)
        throw std::invalid_argument("declared degree does not match expression degree");
}

FieldMatrix PolyFunction::eval(const FieldMatrix& w, const FieldMatrix& u) const {
    if (w.shape() != w_shape_)
        throw std::invalid_argument("h: w input shape mismatch");
    if (u.shape() != u_shape_)
        throw std::invalid_argument("h: u input shape mismatch");
    return body_.eval(w, u);
}

PolyFunction builtin_matmul(std::size_t rows, std::size_t inner, std::size_t cols) {
    Shape ws{rows, inner}, us{inner, cols};
    HExpr body = HExpr::var_w(ws).matmul(HExpr::var_u(us));
    return PolyFunction("matmul", body, ws, us, 2);
}

PolyFunction builtin_elementwise(const PrimeField& field, Shape block,
                                 std::vector<ElementwiseTerm> terms,
                                 std::size_t degree) {
    if (terms.empty()) throw std::invalid_argument("elementwise h needs terms");
    HExpr w = HExpr::var_w(block);
    HExpr u = HExpr::var_u(block);

    auto power = [&](const HExpr& base, std::size_t e) {
        HExpr acc = base;
        for (std::size_t i = 1; i < e; ++i) acc = acc.hadamard(base);
        return acc;
    };

    std::optional<HExpr> sum;
    std::size_t max_deg = 0;
    for (const ElementwiseTerm& t : terms) {
        if (t.coeff % field.modulus() == 0)
            throw std::invalid_argument("elementwise term coefficient must be nonzero");
        max_deg = std::max(max_deg, t.w_pow + t.u_pow);
        std::optional<HExpr> factor;
        if (t.w_pow > 0) factor = power(w, t.w_pow);
        if (t.u_pow > 0) {
            HExpr up = power(u, t.u_pow);
            factor = factor ? factor->hadamard(up) : up;
        }
        HExpr term = factor
                         ? factor->scaled(field.element(t.coeff))
                         : HExpr::constant(FieldMatrix::filled(field, block.rows,
                                                               block.cols, t.coeff));
        sum = sum ? *sum + term : term;
    }
    if (max_deg != degree)
        throw std::invalid_argument("elementwise terms do not reach the declared degree");
    return PolyFunction("elementwise-deg" + std::to_string(degree), *sum, block, block,
                        degree);
}

namespace {

void require_grid(const std::vector<std::vector<FieldMatrix>>& blocks,
                  std::size_t rows, std::size_t cols) {
    if (blocks.size() != rows)
        throw std::invalid_argument("bilinear form: wrong block grid height");
    for (const auto& row : blocks)
        if (row.size() != cols)
            throw std::invalid_argument("bilinear form: wrong block grid width");
}

} // namespace

FieldMatrix BilinearConstruction::left_form(
    std::size_t r, const std::vector<std::vector<FieldMatrix>>& blocks) const {
    require_grid(blocks, m, p);
    FieldMatrix acc(field, blocks[0][0].rows(), blocks[0][0].cols());
    for (std::size_t k = 0; k < m; ++k)
        for (std::size_t l = 0; l < p; ++l)
            if (!a[r].at(k, l).is_zero())
                acc += blocks[k][l].scaled(a[r].at(k, l));
    return acc;
}

FieldMatrix BilinearConstruction::right_form(
    std::size_t r, const std::vector<std::vector<FieldMatrix>>& blocks) const {
    require_grid(blocks, p, n);
    FieldMatrix acc(field, blocks[0][0].rows(), blocks[0][0].cols());
    for (std::size_t l = 0; l < p; ++l)
        for (std::size_t j = 0; j < n; ++j)
            if (!b[r].at(l, j).is_zero())
                acc += blocks[l][j].scaled(b[r].at(l, j));
    return acc;
}

BilinearConstruction make_bilinear(const PrimeField& field, std::size_t rank,
                                   std::size_t m, std::size_t p, std::size_t n,
                                   std::vector<FieldMatrix> a,
                                   std::vector<FieldMatrix> b,
                                   std::vector<FieldMatrix> c) {
    if (rank == 0 || m == 0 || p == 0 || n == 0)
        throw std::invalid_argument("bilinear construction dimensions must be positive");
    if (a.size() != rank || b.size() != rank || c.size() != rank)
        throw std::invalid_argument("bilinear construction needs rank-many tensors");
    for (std::size_t r = 0; r < rank; ++r) {
        if (a[r].shape() != Shape{m, p} || b[r].shape() != Shape{p, n} ||
            c[r].shape() != Shape{m, n})
            throw std::invalid_argument("bilinear tensor shape mismatch");
    }
    BilinearConstruction out{field, rank, m, p, n, std::move(a), std::move(b),
                             std::move(c)};

    // identity check on random scalar blocks; the seed is fixed so
    // construction stays deterministic
    SeededRng rng = make_stream(0x62696C696E656172ULL, "bilinear-check");
    for (int trial = 0; trial < 8; ++trial) {
        FieldMatrix A = FieldMatrix::random(field, m, p, rng);
        FieldMatrix B = FieldMatrix::random(field, p, n, rng);
        FieldMatrix direct = A * B;
        FieldMatrix recon(field, m, n);
        for (std::size_t r = 0; r < rank; ++r) {
            FieldElement abar = field.zero(), bbar = field.zero();
            for (std::size_t k = 0; k < m; ++k)
                for (std::size_t l = 0; l < p; ++l)
                    abar += out.a[r].at(k, l) * A.at(k, l);
            for (std::size_t l = 0; l < p; ++l)
                for (std::size_t j = 0; j < n; ++j)
                    bbar += out.b[r].at(l, j) * B.at(l, j);
            recon += out.c[r].scaled(abar * bbar);
        }
        if (recon != direct)
            throw std::invalid_argument("bilinear identity does not hold");
    }
    return out;
}

BilinearConstruction strassen_2x2(const PrimeField& field) {
    auto mat = [&](std::initializer_list<std::int64_t> vals) {
        FieldMatrix m(field, 2, 2);
        std::size_t i = 0;
        for (std::int64_t v : vals) {
            m.set(i / 2, i % 2, field.from_signed(v));
            ++i;
        }
        return m;
    };
    std::vector<FieldMatrix> a = {
        mat({1, 0, 0, 1}),   // W11 + W22
        mat({0, 0, 1, 1}),   // W21 + W22
        mat({1, 0, 0, 0}),   // W11
        mat({0, 0, 0, 1}),   // W22
        mat({1, 1, 0, 0}),   // W11 + W12
        mat({-1, 0, 1, 0}),  // W21 - W11
        mat({0, 1, 0, -1}),  // W12 - W22
    };
    std::vector<FieldMatrix> b = {
        mat({1, 0, 0, 1}),   // U11 + U22
        mat({1, 0, 0, 0}),   // U11
        mat({0, 1, 0, -1}),  // U12 - U22
        mat({-1, 0, 1, 0}),  // U21 - U11
        mat({0, 0, 0, 1}),   // U22
        mat({1, 1, 0, 0}),   // U11 + U12
        mat({0, 0, 1, 1}),   // U21 + U22
    };
    std::vector<FieldMatrix> c = {
        mat({1, 0, 0, 1}),   // M1 -> C11, C22
        mat({0, 0, 1, -1}),  // M2 -> C21, -C22
        mat({0, 1, 0, 1}),   // M3 -> C12, C22
        mat({1, 0, 1, 0}),   // M4 -> C11, C21
        mat({-1, 1, 0, 0}),  // M5 -> -C11, C12
        mat({0, 0, 0, 1}),   // M6 -> C22
        mat({1, 0, 0, 0}),   // M7 -> C11
    };
    return make_bilinear(field, 7, 2, 2, 2, std::move(a), std::move(b), std::move(c));
}

BilinearConstruction load_bilinear(std::istream& in, const PrimeField& field) {
    std::size_t rank, m, p, n;
    if (!(in >> rank >> m >> p >> n))
        throw std::invalid_argument("bilinear file: bad header (expected R m p n)");

    auto read_matrix = [&](std::size_t rows, std::size_t cols) {
        FieldMatrix mt(field, rows, cols);
        for (std::size_t i = 0; i < rows; ++i)
            for (std::size_t j = 0; j < cols; ++j) {
                std::int64_t v;
                if (!(in >> v))
                    throw std::invalid_argument("bilinear file: truncated tensor data");
                mt.set(i, j, field.from_signed(v));
            }
        return mt;
    };

    std::vector<FieldMatrix> a, b, c;
    for (std::size_t r = 0; r < rank; ++r) {
        a.push_back(read_matrix(m, p));
        b.push_back(read_matrix(p, n));
        c.push_back(read_matrix(m, n));
    }
    return make_bilinear(field, rank, m, p, n, std::move(a), std::move(b), std::move(c));
}

FieldMatrix recombine(const BilinearConstruction& constr,
                      std::span<const FieldMatrix> products) {
    if (products.size() != constr.rank)
        throw std::invalid_argument("recombine needs rank-many products");
    const Shape block = products[0].shape();
    for (const FieldMatrix& m : products)
        if (m.shape() != block)
            throw std::invalid_argument("recombine: product shape mismatch");

    FieldMatrix out(constr.field, constr.m * block.rows, constr.n * block.cols);
    for (std::size_t k = 0; k < constr.m; ++k) {
        for (std::size_t j = 0; j < constr.n; ++j) {
            FieldMatrix cell(constr.field, block.rows, block.cols);
            for (std::size_t r = 0; r < constr.rank; ++r) {
                FieldElement coef = constr.c[r].at(k, j);
                if (!coef.is_zero()) cell += products[r].scaled(coef);
            }
            out.paste(k * block.rows, j * block.cols, cell);
        }
    }
    return out;
}

BilinearJob bilinear_to_lcc_job(const BilinearConstruction& constr,
                                const FieldMatrix& w, std::size_t sources,
                                const FieldMatrix& u, bool require_local) {
    if (sources == 0 || constr.p % sources != 0)
        throw std::invalid_argument("sources must evenly split the block columns of W");
    if (w.rows() % constr.m != 0 || w.cols() % constr.p != 0)
        throw std::invalid_argument("W does not tile into the construction's block grid");
    if (u.rows() % constr.p != 0 || u.cols() % constr.n != 0)
        throw std::invalid_argument("U does not tile into the construction's block grid");

    const std::size_t wbr = w.rows() / constr.m;
    const std::size_t wbc = w.cols() / constr.p;
    const std::size_t ubr = u.rows() / constr.p;
    const std::size_t ubc = u.cols() / constr.n;
    if (wbc != ubr)
        throw std::invalid_argument("W and U block shapes are not product-compatible");

    std::vector<std::vector<FieldMatrix>> wg, ug;
    for (std::size_t k = 0; k < constr.m; ++k) {
        std::vector<FieldMatrix> row;
        for (std::size_t l = 0; l < constr.p; ++l)
            row.push_back(w.submatrix(k * wbr, l * wbc, wbr, wbc));
        wg.push_back(std::move(row));
    }
    for (std::size_t l = 0; l < constr.p; ++l) {
        std::vector<FieldMatrix> row;
        for (std::size_t j = 0; j < constr.n; ++j)
            row.push_back(u.submatrix(l * ubr, j * ubc, ubr, ubc));
        ug.push_back(std::move(row));
    }

    const std::size_t cols_per_source = constr.p / sources;
    if (require_local) {
        for (std::size_t r = 0; r < constr.rank; ++r) {
            std::optional<std::size_t> owner;
            for (std::size_t k = 0; k < constr.m; ++k)
                for (std::size_t l = 0; l < constr.p; ++l) {
                    if (constr.a[r].at(k, l).is_zero()) continue;
                    std::size_t o = l / cols_per_source;
                    if (owner && *owner != o)
                        throw std::invalid_argument(
                            "left form " + std::to_string(r + 1) +
                            " spans multiple sources; partition is non-local");
                    owner = o;
                }
        }
    }

    BilinearJob job;
    job.w_block = {wbr, wbc};
    job.u_block = {ubr, ubc};
    job.n_blocks = constr.rank;

    for (std::size_t s = 0; s < sources; ++s) {
        std::vector<FieldMatrix> pieces;
        for (std::size_t r = 0; r < constr.rank; ++r) {
            FieldMatrix acc(constr.field, wbr, wbc);
            for (std::size_t k = 0; k < constr.m; ++k)
                for (std::size_t l = s * cols_per_source; l < (s + 1) * cols_per_source;
                     ++l) {
                    FieldElement coef = constr.a[r].at(k, l);
                    if (!coef.is_zero()) acc += wg[k][l].scaled(coef);
                }
            pieces.push_back(std::move(acc));
        }
        job.source_contributions.push_back(std::move(pieces));
    }
    for (std::size_t r = 0; r < constr.rank; ++r)
        job.user_blocks.push_back(constr.right_form(r, ug));
    return job;
}

} // namespace lcc
