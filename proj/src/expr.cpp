#include "fdiff/expr.hpp"

#include "fdiff/errors.hpp"

#include <cctype>
#include <cmath>
#include <sstream>

namespace fdiff {

namespace {

expr::node_ptr make_node(expr::node n) {
    return std::make_shared<const expr::node>(std::move(n));
}

expr wrap(expr::node_ptr n) { return expr::from_node(std::move(n)); }

expr binary(expr::op k, const expr& l, const expr& r) {
    return wrap(make_node({k, {}, 0, l.root(), r.root()}));
}

} // namespace

expr::expr() : node_(make_node({op::var, {}, 0, nullptr, nullptr})) {}

expr expr::var() { return expr(); }
expr expr::conj_z() { return wrap(make_node({op::conj, {}, 0, nullptr, nullptr})); }
expr expr::re_z() { return wrap(make_node({op::re, {}, 0, nullptr, nullptr})); }
expr expr::im_z() { return wrap(make_node({op::im, {}, 0, nullptr, nullptr})); }
expr expr::constant(cplx c) { return wrap(make_node({op::constant, c, 0, nullptr, nullptr})); }

expr expr::pow(expr base, int n) {
    if (n < 0) raise(errc::invalid_argument, "pow exponent must be >= 0, got " + std::to_string(n));
    return wrap(make_node({op::pow, {}, n, base.root(), nullptr}));
}

expr expr::compose(expr outer, expr inner) {
    return wrap(make_node({op::compose, {}, 0, outer.root(), inner.root()}));
}

expr operator+(expr l, expr r) { return binary(expr::op::add, l, r); }
expr operator-(expr l, expr r) { return binary(expr::op::sub, l, r); }
expr operator*(expr l, expr r) { return binary(expr::op::mul, l, r); }
expr operator/(expr l, expr r) { return binary(expr::op::div, l, r); }

namespace {

cplx eval_node(const expr::node& n, cplx z) {
    using op = expr::op;
    switch (n.kind) {
    case op::var: return z;
    case op::conj: return std::conj(z);
    case op::re: return cplx(z.real(), 0.0);
    case op::im: return cplx(z.imag(), 0.0);
    case op::constant: return n.value;
    case op::add: return eval_node(*n.a, z) + eval_node(*n.b, z);
    case op::sub: return eval_node(*n.a, z) - eval_node(*n.b, z);
    case op::mul: return eval_node(*n.a, z) * eval_node(*n.b, z);
    case op::div: {
        cplx num = eval_node(*n.a, z);
        cplx den = eval_node(*n.b, z);
        if (den == cplx(0.0, 0.0)) {
            std::ostringstream os;
            os << "denominator " << wrap(n.b).str() << " vanishes at z=(" << z.real() << ","
               << z.imag() << ")";
            raise(errc::division_by_zero, os.str());
        }
        return num / den;
    }
    case op::pow: {
        cplx base = eval_node(*n.a, z);
        cplx acc(1.0, 0.0);
        for (int k = 0; k < n.exponent; ++k) acc *= base;
        return acc;
    }
    case op::compose: return eval_node(*n.a, eval_node(*n.b, z));
    }
    raise(errc::invalid_argument, "corrupt expression node");
}

bool holo_node(const expr::node& n) {
    using op = expr::op;
    switch (n.kind) {
    case op::conj:
    case op::re:
    case op::im: return false;
    case op::var:
    case op::constant: return true;
    case op::pow: return holo_node(*n.a);
    default: return holo_node(*n.a) && holo_node(*n.b);
    }
}

} // namespace

cplx expr::eval(cplx z) const { return eval_node(*node_, z); }

bool expr::holomorphic() const { return holo_node(*node_); }

namespace {

bool eq_node(const expr::node& a, const expr::node& b) {
    if (a.kind != b.kind) return false;
    using op = expr::op;
    switch (a.kind) {
    case op::var:
    case op::conj:
    case op::re:
    case op::im: return true;
    case op::constant: return a.value == b.value;
    case op::pow: return a.exponent == b.exponent && eq_node(*a.a, *b.a);
    default: return eq_node(*a.a, *b.a) && eq_node(*a.b, *b.b);
    }
}

} // namespace

bool structurally_equal(const expr& a, const expr& b) { return eq_node(*a.root(), *b.root()); }

namespace {

bool is_const(const expr& e, cplx c) {
    return e.kind() == expr::op::constant && e.root()->value == c;
}

bool is_const(const expr& e) { return e.kind() == expr::op::constant; }

expr simplify_node(const expr& e); // forward

expr simplify_children(const expr& e) {
    using op = expr::op;
    const auto& n = *e.root();
    switch (n.kind) {
    case op::var:
    case op::conj:
    case op::re:
    case op::im:
    case op::constant: return e;
    case op::pow: return expr::pow(simplify_node(wrap(n.a)), n.exponent);
    case op::compose: return expr::compose(simplify_node(wrap(n.a)), simplify_node(wrap(n.b)));
    case op::add: return simplify_node(wrap(n.a)) + simplify_node(wrap(n.b));
    case op::sub: return simplify_node(wrap(n.a)) - simplify_node(wrap(n.b));
    case op::mul: return simplify_node(wrap(n.a)) * simplify_node(wrap(n.b));
    case op::div: return simplify_node(wrap(n.a)) / simplify_node(wrap(n.b));
    }
    return e;
}

expr simplify_node(const expr& e) {
    using op = expr::op;
    expr s = simplify_children(e);
    const auto& n = *s.root();
    switch (n.kind) {
    case op::add: {
        expr l = wrap(n.a), r = wrap(n.b);
        if (is_const(l) && is_const(r)) return expr::constant(n.a->value + n.b->value);
        if (is_const(l, {0, 0})) return r;
        if (is_const(r, {0, 0})) return l;
        if (structurally_equal(l, r)) return expr::constant({2, 0}) * l;
        return s;
    }
    case op::sub: {
        expr l = wrap(n.a), r = wrap(n.b);
        if (is_const(l) && is_const(r)) return expr::constant(n.a->value - n.b->value);
        if (is_const(r, {0, 0})) return l;
        if (structurally_equal(l, r)) return expr::constant({0, 0});
        return s;
    }
    case op::mul: {
        expr l = wrap(n.a), r = wrap(n.b);
        if (is_const(l) && is_const(r)) return expr::constant(n.a->value * n.b->value);
        if (is_const(l, {0, 0}) || is_const(r, {0, 0})) return expr::constant({0, 0});
        if (is_const(l, {1, 0})) return r;
        if (is_const(r, {1, 0})) return l;
        if (structurally_equal(l, r)) return expr::pow(l, 2);
        return s;
    }
    case op::div: {
        expr l = wrap(n.a), r = wrap(n.b);
        if (is_const(l) && is_const(r) && n.b->value != cplx{0, 0})
            return expr::constant(n.a->value / n.b->value);
        if (is_const(l, {0, 0})) return expr::constant({0, 0});
        if (is_const(r, {1, 0})) return l;
        if (structurally_equal(l, r)) return expr::constant({1, 0});
        return s;
    }
    case op::pow: {
        expr base = wrap(n.a);
        if (n.exponent == 0) return expr::constant({1, 0});
        if (n.exponent == 1) return base;
        if (is_const(base)) {
            cplx acc(1, 0);
            for (int k = 0; k < n.exponent; ++k) acc *= n.a->value;
            return expr::constant(acc);
        }
        if (base.kind() == op::pow) return expr::pow(wrap(base.root()->a), n.exponent * base.root()->exponent);
        return s;
    }
    case op::compose: {
        expr outer = wrap(n.a), inner = wrap(n.b);
        if (is_const(outer)) return outer;
        if (outer.kind() == op::var) return inner;
        if (inner.kind() == op::var) return outer;
        return s;
    }
    default: return s;
    }
}

} // namespace

expr expr::simplified() const {
    expr cur = *this;
    for (int pass = 0; pass < 8; ++pass) {
        expr next = simplify_node(cur);
        if (structurally_equal(next, cur)) return next;
        cur = next;
    }
    return cur;
}

namespace {

void fmt_double(std::ostream& os, double x) {
    if (x == static_cast<long long>(x) && std::abs(x) < 1e15) {
        os << static_cast<long long>(x);
    } else {
        char buf[40];
        std::snprintf(buf, sizeof buf, "%.17g", x);
        os << buf;
    }
}

void str_node(std::ostream& os, const expr::node& n) {
    using op = expr::op;
    switch (n.kind) {
    case op::var: os << "z"; return;
    case op::conj: os << "conj"; return;
    case op::re: os << "re"; return;
    case op::im: os << "im"; return;
    case op::constant:
        os << "const(";
        fmt_double(os, n.value.real());
        if (n.value.imag() != 0.0) {
            os << ",";
            fmt_double(os, n.value.imag());
        }
        os << ")";
        return;
    case op::pow:
        os << "pow(";
        str_node(os, *n.a);
        os << "," << n.exponent << ")";
        return;
    case op::add:
    case op::sub:
    case op::mul:
    case op::div:
    case op::compose: {
        const char* name = n.kind == op::add   ? "add"
                           : n.kind == op::sub ? "sub"
                           : n.kind == op::mul ? "mul"
                           : n.kind == op::div ? "div"
                                               : "compose";
        os << name << "(";
        str_node(os, *n.a);
        os << ",";
        str_node(os, *n.b);
        os << ")";
        return;
    }
    }
}

size_t size_node(const expr::node& n) {
    size_t s = 1;
    if (n.a) s += size_node(*n.a);
    if (n.b) s += size_node(*n.b);
    return s;
}

} // namespace

std::string expr::str() const {
    std::ostringstream os;
    str_node(os, *node_);
    return os.str();
}

size_t expr::size() const { return size_node(*node_); }

namespace {

expr deriv_node(const expr& e) {
    using op = expr::op;
    const auto& n = *e.root();
    switch (n.kind) {
    case op::var: return expr::constant({1, 0});
    case op::constant: return expr::constant({0, 0});
    case op::conj:
    case op::re:
    case op::im:
        raise(errc::not_holomorphic, "cannot differentiate node '" + e.str() + "'");
    case op::add: return deriv_node(wrap(n.a)) + deriv_node(wrap(n.b));
    case op::sub: return deriv_node(wrap(n.a)) - deriv_node(wrap(n.b));
    case op::mul: {
        expr l = wrap(n.a), r = wrap(n.b);
        return deriv_node(l) * r + l * deriv_node(r);
    }
    case op::div: {
        expr l = wrap(n.a), r = wrap(n.b);
        return (deriv_node(l) * r - l * deriv_node(r)) / expr::pow(r, 2);
    }
    case op::pow: {
        expr base = wrap(n.a);
        if (n.exponent == 0) return expr::constant({0, 0});
        return expr::constant({static_cast<double>(n.exponent), 0}) *
               expr::pow(base, n.exponent - 1) * deriv_node(base);
    }
    case op::compose: {
        expr outer = wrap(n.a), inner = wrap(n.b);
        return expr::compose(deriv_node(outer), inner) * deriv_node(inner);
    }
    }
    raise(errc::invalid_argument, "corrupt expression node");
}

} // namespace

expr holo_derivative(const expr& e) { return deriv_node(e).simplified(); }

const expr& deriv_sequence::at(int k) const {
    if (k < 0 || k >= static_cast<int>(terms.size()))
        raise(errc::order_too_low,
              "sequence of order " + std::to_string(order()) + " has no term " + std::to_string(k));
    return terms[static_cast<size_t>(k)];
}

deriv_sequence holo_sequence(const expr& f, int order) {
    deriv_sequence seq;
    seq.terms.push_back(f.simplified());
    for (int k = 1; k <= order; ++k) seq.terms.push_back(holo_derivative(seq.terms.back()));
    return seq;
}

namespace {

struct parser {
    const std::string& s;
    size_t pos = 0;

    explicit parser(const std::string& text) : s(text) {}

    void skip_ws() {
        while (pos < s.size() && std::isspace(static_cast<unsigned char>(s[pos]))) ++pos;
    }

    [[noreturn]] void fail(const std::string& msg) {
        raise(errc::parse_error, msg + " at offset " + std::to_string(pos) + " in '" + s + "'");
    }

    bool eat(char c) {
        skip_ws();
        if (pos < s.size() && s[pos] == c) {
            ++pos;
            return true;
        }
        return false;
    }

    void expect(char c) {
        if (!eat(c)) fail(std::string("expected '") + c + "'");
    }

    std::string ident() {
        skip_ws();
        size_t start = pos;
        while (pos < s.size() && std::isalpha(static_cast<unsigned char>(s[pos]))) ++pos;
        if (pos == start) fail("expected identifier");
        return s.substr(start, pos - start);
    }

    double number() {
        skip_ws();
        size_t start = pos;
        if (pos < s.size() && (s[pos] == '+' || s[pos] == '-')) ++pos;
        while (pos < s.size() &&
               (std::isdigit(static_cast<unsigned char>(s[pos])) || s[pos] == '.' ||
                s[pos] == 'e' || s[pos] == 'E' ||
                ((s[pos] == '+' || s[pos] == '-') && (s[pos - 1] == 'e' || s[pos - 1] == 'E'))))
            ++pos;
        if (pos == start) fail("expected number");
        return std::stod(s.substr(start, pos - start));
    }

    bool peek_number() {
        skip_ws();
        if (pos >= s.size()) return false;
        char c = s[pos];
        if (std::isdigit(static_cast<unsigned char>(c)) || c == '.') return true;
        if ((c == '+' || c == '-') && pos + 1 < s.size()) {
            char d = s[pos + 1];
            return std::isdigit(static_cast<unsigned char>(d)) || d == '.';
        }
        return false;
    }

    expr term() {
        if (peek_number()) return expr::constant({number(), 0});
        std::string name = ident();
        if (name == "z") return expr::var();
        if (name == "i") return expr::constant({0, 1});
        if (name == "conj") return expr::conj_z();
        if (name == "re") return expr::re_z();
        if (name == "im") return expr::im_z();
        if (name == "const") {
            expect('(');
            double re = number();
            double imv = eat(',') ? number() : 0.0;
            expect(')');
            return expr::constant({re, imv});
        }
        if (name == "pow") {
            expect('(');
            expr base = term();
            expect(',');
            double n = number();
            expect(')');
            if (n != std::floor(n)) fail("pow exponent must be an integer");
            return expr::pow(base, static_cast<int>(n));
        }
        if (name == "add" || name == "sub" || name == "mul" || name == "div" ||
            name == "compose") {
            expect('(');
            expr a = term();
            expect(',');
            expr b = term();
            expect(')');
            if (name == "add") return a + b;
            if (name == "sub") return a - b;
            if (name == "mul") return a * b;
            if (name == "div") return a / b;
            return expr::compose(a, b);
        }
        fail("unknown operator '" + name + "'");
    }
};

} // namespace

expr parse_expr(const std::string& text) {
    parser p(text);
    expr e = p.term();
    p.skip_ws();
    if (p.pos != text.size()) p.fail("trailing input");
    return e;
}

} // namespace fdiff
