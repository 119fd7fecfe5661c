#include "fdiff/path.hpp"

#include "fdiff/errors.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

namespace fdiff {

namespace {
constexpr int kTableSamples = 1 << 12; // cumulative-variation table resolution
constexpr int kMinSplits = 3;          // refinement levels before a piece may stop
} // namespace

struct path::node {
    kind k;

    // polyline
    std::vector<cplx> vertices;
    std::vector<double> cumlen; // cumulative chord length per vertex

    expr map = expr::var(); // mapped
    double lo = 0.0, hi = 1.0; // sub

    // arclength / normalised: cumulative variation at t_i = i/kTableSamples
    std::vector<double> cumvar;
    double table_len = 0.0;

    node_ptr base, second;

    double polyline_total() const { return cumlen.back(); }

    // inverse of the cumulative-variation table: arc position s -> base param
    double inv_table(double s) const {
        if (s <= 0.0) return 0.0;
        if (s >= table_len) {
            // land at the start of a trailing plateau, if any
            auto it = std::lower_bound(cumvar.begin(), cumvar.end(), table_len);
            return static_cast<double>(it - cumvar.begin()) / kTableSamples;
        }
        auto it = std::lower_bound(cumvar.begin(), cumvar.end(), s);
        size_t i = static_cast<size_t>(it - cumvar.begin());
        if (i == 0) return 0.0;
        double v0 = cumvar[i - 1], v1 = cumvar[i];
        double frac = v1 > v0 ? (s - v0) / (v1 - v0) : 0.0;
        return (static_cast<double>(i - 1) + frac) / kTableSamples;
    }

    // forward table lookup: base param -> arc position
    double fwd_table(double t) const {
        if (t <= 0.0) return 0.0;
        if (t >= 1.0) return cumvar.back();
        double x = t * kTableSamples;
        size_t i = static_cast<size_t>(x);
        double frac = x - static_cast<double>(i);
        return cumvar[i] + frac * (cumvar[i + 1] - cumvar[i]);
    }
};

namespace {

path::node_ptr make_node(path::node n) {
    return std::make_shared<const path::node>(std::move(n));
}

cplx eval_node(const path::node& n, double t);

cplx eval_polyline(const path::node& n, double t) {
    const auto& v = n.vertices;
    if (t <= 0.0) return v.front();
    if (t >= 1.0) return v.back();
    double s = t * n.polyline_total();
    auto it = std::lower_bound(n.cumlen.begin(), n.cumlen.end(), s);
    size_t i = static_cast<size_t>(it - n.cumlen.begin());
    if (i == 0) return v.front();
    double seg = n.cumlen[i] - n.cumlen[i - 1];
    double frac = seg > 0.0 ? (s - n.cumlen[i - 1]) / seg : 0.0;
    return v[i - 1] + frac * (v[i] - v[i - 1]);
}

cplx eval_node(const path::node& n, double t) {
    switch (n.k) {
    case path::kind::polyline: return eval_polyline(n, t);
    case path::kind::mapped: return n.map.eval(eval_node(*n.base, t));
    case path::kind::reversed: return eval_node(*n.base, 1.0 - t);
    case path::kind::joined:
        return t < 0.5 ? eval_node(*n.base, 2.0 * t) : eval_node(*n.second, 2.0 * t - 1.0);
    case path::kind::sub: return eval_node(*n.base, n.lo + t * (n.hi - n.lo));
    case path::kind::arclength:
    case path::kind::normalised: {
        if (t <= 0.0) return eval_node(*n.base, 0.0);
        if (t >= 1.0) return eval_node(*n.base, 1.0);
        return eval_node(*n.base, n.inv_table(t * n.table_len));
    }
    }
    raise(errc::invalid_argument, "corrupt path node");
}

} // namespace

path path::polyline(std::vector<cplx> vertices) {
    if (vertices.size() < 2)
        raise(errc::invalid_argument, "polyline needs at least 2 vertices");
    node n;
    n.k = kind::polyline;
    n.cumlen.reserve(vertices.size());
    n.cumlen.push_back(0.0);
    for (size_t i = 0; i < vertices.size(); ++i) {
        if (!std::isfinite(vertices[i].real()) || !std::isfinite(vertices[i].imag()))
            raise(errc::invalid_argument, "polyline vertex " + std::to_string(i) + " not finite");
        if (i > 0) {
            double d = std::abs(vertices[i] - vertices[i - 1]);
            if (d == 0.0)
                raise(errc::invalid_argument,
                      "polyline vertices " + std::to_string(i - 1) + " and " + std::to_string(i) +
                          " coincide");
            n.cumlen.push_back(n.cumlen.back() + d);
        }
    }
    n.vertices = std::move(vertices);
    return path(make_node(std::move(n)));
}

path path::mapped(path base, expr map) {
    node n;
    n.k = kind::mapped;
    n.base = base.root();
    n.map = std::move(map);
    return path(make_node(std::move(n)));
}

path path::reversed(path base) {
    node n;
    n.k = kind::reversed;
    n.base = base.root();
    return path(make_node(std::move(n)));
}

path path::joined(path first, path second, double eps_join) {
    cplx gap = first.end() - second.start();
    if (std::abs(gap) > eps_join) {
        std::ostringstream os;
        os << "endpoint gap " << std::abs(gap) << " exceeds eps_join " << eps_join;
        raise(errc::join_mismatch, os.str());
    }
    node n;
    n.k = kind::joined;
    n.base = first.root();
    n.second = second.root();
    return path(make_node(std::move(n)));
}

path path::sub(path base, double lo, double hi) {
    if (!(lo >= 0.0 && lo < hi && hi <= 1.0))
        raise(errc::invalid_interval,
              "sub requires 0 <= lo < hi <= 1, got [" + std::to_string(lo) + "," +
                  std::to_string(hi) + "]");
    node n;
    n.k = kind::sub;
    n.base = base.root();
    n.lo = lo;
    n.hi = hi;
    return path(make_node(std::move(n)));
}

namespace {

path make_table_variant(path::kind k, const path& base, double eps_const) {
    path::node n;
    n.k = k;
    n.base = base.root();
    n.cumvar.resize(kTableSamples + 1);
    n.cumvar[0] = 0.0;
    cplx prev = base(0.0);
    for (int i = 1; i <= kTableSamples; ++i) {
        cplx cur = base(static_cast<double>(i) / kTableSamples);
        n.cumvar[i] = n.cumvar[i - 1] + std::abs(cur - prev);
        prev = cur;
    }
    n.table_len = n.cumvar.back();
    if (n.table_len < eps_const)
        raise(errc::constant_path, "cannot reparametrize a constant path (length " +
                                       std::to_string(n.table_len) + ")");
    return path::from_node(make_node(std::move(n)));
}

} // namespace

path path::arclength(path base, double eps_const) {
    return make_table_variant(kind::arclength, base, eps_const);
}

path path::normalised(path base, double eps_const) {
    return make_table_variant(kind::normalised, base, eps_const);
}

cplx path::operator()(double t) const { return eval_node(*node_, t); }

path::kind path::variant() const { return node_->k; }

namespace {

void collect_breaks(const path::node& n, double lo, double hi, std::vector<double>& out);

void remap_breaks(const path::node& base, double blo, double bhi,
                  const std::function<double(double)>& back, std::vector<double>& out) {
    std::vector<double> inner;
    collect_breaks(base, blo, bhi, inner);
    for (double s : inner) out.push_back(back(s));
}

void collect_breaks(const path::node& n, double lo, double hi, std::vector<double>& out) {
    switch (n.k) {
    case path::kind::polyline: {
        double total = n.polyline_total();
        for (size_t j = 1; j + 1 < n.vertices.size(); ++j) {
            double t = n.cumlen[j] / total;
            if (t > lo && t < hi) out.push_back(t);
        }
        return;
    }
    case path::kind::mapped: collect_breaks(*n.base, lo, hi, out); return;
    case path::kind::reversed:
        remap_breaks(*n.base, 1.0 - hi, 1.0 - lo, [](double s) { return 1.0 - s; }, out);
        return;
    case path::kind::joined: {
        if (0.5 > lo && 0.5 < hi) out.push_back(0.5);
        if (lo < 0.5)
            remap_breaks(*n.base, 2.0 * lo, std::min(1.0, 2.0 * hi),
                         [](double s) { return s / 2.0; }, out);
        if (hi > 0.5)
            remap_breaks(*n.second, std::max(0.0, 2.0 * lo - 1.0), 2.0 * hi - 1.0,
                         [](double s) { return (1.0 + s) / 2.0; }, out);
        return;
    }
    case path::kind::sub: {
        double a = n.lo, w = n.hi - n.lo;
        remap_breaks(*n.base, a + lo * w, a + hi * w, [a, w](double s) { return (s - a) / w; },
                     out);
        return;
    }
    case path::kind::arclength:
    case path::kind::normalised: {
        if (n.table_len <= 0.0) return;
        double blo = n.inv_table(lo * n.table_len);
        double bhi = n.inv_table(hi * n.table_len);
        remap_breaks(*n.base, blo, bhi,
                     [&n](double s) { return n.fwd_table(s) / n.table_len; }, out);
        return;
    }
    }
}

} // namespace

std::vector<double> path::breakpoints(double lo, double hi) const {
    std::vector<double> out;
    collect_breaks(*node_, lo, hi, out);
    std::sort(out.begin(), out.end());
    std::vector<double> dedup;
    for (double t : out) {
        if (t <= lo + 1e-15 || t >= hi - 1e-15) continue;
        if (dedup.empty() || t - dedup.back() > 1e-15) dedup.push_back(t);
    }
    return dedup;
}

// --- total variation -------------------------------------------------------

namespace {

struct tv_piece_ctx {
    const path& p;
    double tol;
    int max_depth;
};

double tv_refine(const tv_piece_ctx& c, double u, double v, cplx pu, cplx pv, double chord,
                 double tol_local, int depth) {
    double m = 0.5 * (u + v);
    cplx pm = c.p(m);
    double left = std::abs(pm - pu);
    double right = std::abs(pv - pm);
    double s = left + right;
    if (depth >= kMinSplits && s - chord <= tol_local) return s;
    if (depth >= c.max_depth) {
        std::ostringstream os;
        os << "partition-sum increase " << s - chord << " still above " << tol_local
           << " at depth " << depth;
        raise(errc::non_convergent, os.str());
    }
    return tv_refine(c, u, m, pu, pm, left, tol_local / 2.0, depth + 1) +
           tv_refine(c, m, v, pm, pv, right, tol_local / 2.0, depth + 1);
}

// adaptive dyadic refinement on [lo,hi], assumed free of interior corners
double tv_adaptive_piece(const path& p, double lo, double hi, double tol, int max_depth) {
    cplx a = p(lo), b = p(hi);
    tv_piece_ctx c{p, tol, max_depth};
    return tv_refine(c, lo, hi, a, b, std::abs(b - a), tol, 0);
}

double tv_node(const path& p, double lo, double hi, double tol, int max_depth);

double tv_numeric(const path& p, double lo, double hi, double tol, int max_depth) {
    std::vector<double> cuts = p.breakpoints(lo, hi);
    cuts.insert(cuts.begin(), lo);
    cuts.push_back(hi);
    double total = 0.0;
    double span = hi - lo;
    for (size_t i = 0; i + 1 < cuts.size(); ++i) {
        double u = cuts[i], v = cuts[i + 1];
        if (v - u <= 0.0) continue;
        total += tv_adaptive_piece(p, u, v, tol * (v - u) / span, max_depth);
    }
    return total;
}

double tv_node(const path& p, double lo, double hi, double tol, int max_depth) {
    const auto& n = *p.root();
    switch (n.k) {
    case path::kind::polyline:
        // chord-proportional parametrization: V(t) = t * length, exactly
        return (hi - lo) * n.polyline_total();
    case path::kind::reversed:
        return tv_node(path::from_node(n.base), 1.0 - hi, 1.0 - lo, tol, max_depth);
    case path::kind::sub: {
        double w = n.hi - n.lo;
        return tv_node(path::from_node(n.base), n.lo + lo * w, n.lo + hi * w, tol, max_depth);
    }
    case path::kind::joined: {
        path first = path::from_node(n.base);
        path second = path::from_node(n.second);
        if (hi <= 0.5) return tv_node(first, 2.0 * lo, 2.0 * hi, tol, max_depth);
        if (lo >= 0.5) return tv_node(second, 2.0 * lo - 1.0, 2.0 * hi - 1.0, tol, max_depth);
        return tv_node(first, 2.0 * lo, 1.0, tol / 2.0, max_depth) +
               tv_node(second, 0.0, 2.0 * hi - 1.0, tol / 2.0, max_depth);
    }
    case path::kind::arclength:
    case path::kind::normalised: {
        double blo = n.inv_table(lo * n.table_len);
        double bhi = n.inv_table(hi * n.table_len);
        if (bhi <= blo) return 0.0;
        return tv_node(path::from_node(n.base), blo, bhi, tol, max_depth);
    }
    case path::kind::mapped: return tv_numeric(p, lo, hi, tol, max_depth);
    }
    raise(errc::invalid_argument, "corrupt path node");
}

} // namespace

double total_variation(const path& p, double lo, double hi, double tol, int max_depth) {
    if (!(lo < hi))
        raise(errc::invalid_interval,
              "total_variation requires lo < hi, got [" + std::to_string(lo) + "," +
                  std::to_string(hi) + "]");
    return tv_node(p, std::max(0.0, lo), std::min(1.0, hi), tol, max_depth);
}

double path_length(const path& p, double tol, int max_depth) {
    return total_variation(p, 0.0, 1.0, tol, max_depth);
}

// --- admissibility ---------------------------------------------------------

admissibility is_admissible(const path& p, double eps_const, int probe_depth) {
    admissibility rep;
    rep.probe_depth = probe_depth;
    rep.eps_const = eps_const;
    try {
        total_variation(p, 0.0, 1.0);
    } catch (const error& e) {
        if (e.code() == errc::non_convergent) {
            rep.result = admissibility::verdict::nonrectifiable;
            return rep;
        }
        throw;
    }

    // chord sums two levels finer than the coarsest probed interval
    int fine = std::min(probe_depth + 2, 16);
    size_t cells = size_t{1} << fine;
    std::vector<double> prefix(cells + 1, 0.0);
    cplx prev = p(0.0);
    for (size_t j = 1; j <= cells; ++j) {
        cplx cur = p(static_cast<double>(j) / static_cast<double>(cells));
        prefix[j] = prefix[j - 1] + std::abs(cur - prev);
        prev = cur;
    }
    for (int d = 0; d <= probe_depth; ++d) {
        size_t n_int = size_t{1} << d;
        size_t stride = cells >> d;
        for (size_t j = 0; j < n_int; ++j) {
            double sum = prefix[(j + 1) * stride] - prefix[j * stride];
            if (sum < eps_const) {
                rep.result = admissibility::verdict::constant_subpath;
                rep.lo = static_cast<double>(j) / static_cast<double>(n_int);
                rep.hi = static_cast<double>(j + 1) / static_cast<double>(n_int);
                return rep;
            }
        }
    }
    rep.result = admissibility::verdict::admissible;
    return rep;
}

// --- combinators ------------------------------------------------------------

path arc_length_param(const path& p, double tol) {
    (void)tol; // table resolution is fixed; tol documents the caller's budget
    return path::arclength(p);
}

path reverse(const path& p) { return path::reversed(p); }

path join(const path& p1, const path& p2, double eps_join) {
    return path::joined(p1, p2, eps_join);
}

path subpath(const path& p, double lo, double hi) { return path::sub(p, lo, hi); }

std::pair<cplx, cplx> endpoints(const path& p) { return {p.start(), p.end()}; }

// --- flattening --------------------------------------------------------------

namespace detail {

namespace {

bool flatten_into(const path::node& n, double lo, double hi, std::vector<segment>& out) {
    switch (n.k) {
    case path::kind::polyline: {
        double total = n.polyline_total();
        double s0 = lo * total, s1 = hi * total;
        cplx start = eval_polyline(n, lo);
        cplx prev = start;
        for (size_t j = 1; j + 1 < n.vertices.size(); ++j) {
            if (n.cumlen[j] > s0 && n.cumlen[j] < s1) {
                if (std::abs(n.vertices[j] - prev) > 0.0) out.push_back({prev, n.vertices[j]});
                prev = n.vertices[j];
            }
        }
        cplx stop = eval_polyline(n, hi);
        if (std::abs(stop - prev) > 0.0) out.push_back({prev, stop});
        return true;
    }
    case path::kind::reversed: {
        std::vector<segment> inner;
        if (!flatten_into(*n.base, 1.0 - hi, 1.0 - lo, inner)) return false;
        for (auto it = inner.rbegin(); it != inner.rend(); ++it) out.push_back({it->b, it->a});
        return true;
    }
    case path::kind::joined: {
        if (lo < 0.5 && !flatten_into(*n.base, 2.0 * lo, std::min(1.0, 2.0 * hi), out))
            return false;
        if (hi > 0.5 &&
            !flatten_into(*n.second, std::max(0.0, 2.0 * lo - 1.0), 2.0 * hi - 1.0, out))
            return false;
        return true;
    }
    case path::kind::sub: {
        double w = n.hi - n.lo;
        return flatten_into(*n.base, n.lo + lo * w, n.lo + hi * w, out);
    }
    case path::kind::arclength:
    case path::kind::normalised: {
        double blo = n.inv_table(lo * n.table_len);
        double bhi = n.inv_table(hi * n.table_len);
        if (bhi <= blo) return true;
        return flatten_into(*n.base, blo, bhi, out);
    }
    case path::kind::mapped: return false;
    }
    return false;
}

} // namespace

std::optional<std::vector<segment>> flatten_to_segments(const path& p) {
    std::vector<segment> out;
    if (!flatten_into(*p.root(), 0.0, 1.0, out)) return std::nullopt;
    return out;
}

} // namespace detail

} // namespace fdiff
