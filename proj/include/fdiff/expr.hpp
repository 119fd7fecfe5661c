#pragma once

#include <complex>
#include <memory>
#include <string>
#include <vector>

namespace fdiff {

using cplx = std::complex<double>;

/// Expression trees for continuous complex-valued functions of one plane
/// variable. Atoms are z, conj(z), Re(z), Im(z) and constants; composite
/// nodes are the four arithmetic operations, integer powers and composition.
/// Values are immutable and cheap to copy (shared subtrees).
class expr {
public:
    enum class op {
        var,      // z
        conj,     // conjugate of z
        re,       // Re(z), as a complex value
        im,       // Im(z), as a complex value
        constant, // c
        add,
        sub,
        mul,
        div,
        pow,      // integer power, exponent >= 0
        compose,  // outer(inner(z))
    };

    struct node;
    using node_ptr = std::shared_ptr<const node>;

    struct node {
        op kind;
        cplx value{};            // constant
        int exponent = 0;        // pow
        node_ptr a, b;           // children: (lhs,rhs), (base,-), (outer,inner)
    };

    expr(); // the variable z

    static expr var();
    static expr conj_z();
    static expr re_z();
    static expr im_z();
    static expr constant(cplx c);
    static expr pow(expr base, int n);
    static expr compose(expr outer, expr inner);

    friend expr operator+(expr l, expr r);
    friend expr operator-(expr l, expr r);
    friend expr operator*(expr l, expr r);
    friend expr operator/(expr l, expr r);

    op kind() const { return node_->kind; }
    const node_ptr& root() const { return node_; }
    static expr from_node(node_ptr n) { return expr(std::move(n)); }

    /// Recursive evaluation at a point. Throws DivisionByZero naming the
    /// offending subtree and point.
    cplx eval(cplx z) const;

    /// True when the tree contains no conj/re/im atom.
    bool holomorphic() const;

    /// Constant folding plus a few local identities (x+x -> 2x, x*x -> x^2,
    /// x-x -> 0, x/x -> 1, pow-of-pow collapse).
    expr simplified() const;

    /// Compact prefix form, e.g. "mul(z,z)".
    std::string str() const;

    size_t size() const; // node count

    friend bool structurally_equal(const expr& a, const expr& b);

private:
    explicit expr(node_ptr n) : node_(std::move(n)) {}
    node_ptr node_;
};

/// Symbolic complex derivative for the holomorphic fragment.
/// Throws NotHolomorphic naming the offending node otherwise.
expr holo_derivative(const expr& e);

/// Parse the compact prefix form. Accepts z, conj, re, im, i, decimal
/// literals, const(re[,im]) and add/sub/mul/div/pow/compose(...).
expr parse_expr(const std::string& text);

/// A list [f^(0), f^(1), ..., f^(n)] asserted as successive derivatives.
struct deriv_sequence {
    std::vector<expr> terms;

    int order() const { return static_cast<int>(terms.size()) - 1; }
    const expr& at(int k) const;
};

/// Sequence of the first `order`+1 symbolic derivatives of a holomorphic f.
deriv_sequence holo_sequence(const expr& f, int order);

} // namespace fdiff
