#pragma once

#include "fdiff/expr.hpp"

#include <memory>
#include <optional>
#include <vector>

namespace fdiff {

/// A rectifiable plane curve with an evaluable parametrization on [0,1].
/// Polylines carry the chord-length-proportional parametrization, so they
/// are their own path-length parametrization and have exact total variation.
/// All other variants wrap a base path: mapped image, reverse, join,
/// subpath restriction, and the path-length / normalised parametrizations
/// (identical maps once every domain is rescaled to [0,1]).
///
/// Paths are immutable; any lookup table is built at construction time, so
/// values are safe to share and evaluate concurrently.
class path {
public:
    enum class kind { polyline, mapped, reversed, joined, sub, arclength, normalised };

    struct node;
    using node_ptr = std::shared_ptr<const node>;

    static path polyline(std::vector<cplx> vertices);
    static path mapped(path base, expr map);
    static path reversed(path base);
    static path joined(path first, path second, double eps_join = 1e-9);
    static path sub(path base, double lo, double hi);
    /// gamma^pl rescaled to [0,1]; throws ConstantPath when the base length
    /// is below eps_const.
    static path arclength(path base, double eps_const = 1e-12);
    /// gamma^no; same parametrization as arclength under [0,1] domains.
    static path normalised(path base, double eps_const = 1e-12);

    cplx operator()(double t) const;
    cplx start() const { return (*this)(0.0); }
    cplx end() const { return (*this)(1.0); }

    kind variant() const;
    const node_ptr& root() const { return node_; }
    static path from_node(node_ptr n) { return path(std::move(n)); }

    /// Parameter values in (lo,hi) where the path may have a corner
    /// (polyline vertices, join seams), mapped through every wrapper.
    /// Between consecutive breakpoints the curve is smooth whenever the
    /// maps involved are.
    std::vector<double> breakpoints(double lo, double hi) const;

private:
    explicit path(node_ptr n) : node_(std::move(n)) {}
    node_ptr node_;
};

/// Total variation of p over [lo,hi] as a supremum of dyadic partition sums.
/// Exact (no refinement) for chord-parametrized polyline geometry; elsewhere
/// the partition is refined adaptively until the level increase drops below
/// tol. Throws NonConvergent when max_depth is reached first, InvalidInterval
/// when lo >= hi.
double total_variation(const path& p, double lo, double hi, double tol = 1e-9,
                       int max_depth = 24);

/// Length shorthand: total variation over the whole domain.
double path_length(const path& p, double tol = 1e-9, int max_depth = 24);

struct admissibility {
    enum class verdict { admissible, constant_subpath, nonrectifiable };
    verdict result;
    // witness interval for constant_subpath
    double lo = 0.0, hi = 0.0;
    int probe_depth = 0;
    double eps_const = 0.0;

    bool admissible() const { return result == verdict::admissible; }
};

/// Falsifiable admissibility check: "admissible" means no counterexample was
/// found at this probe depth. A dyadic subinterval whose sampled chord sum is
/// below eps_const is reported as a constant subpath; a non-convergent total
/// variation as nonrectifiable.
admissibility is_admissible(const path& p, double eps_const = 1e-12, int probe_depth = 8);

/// Path-length reparametrization via an inverse lookup table on the
/// cumulative-variation function (2^12 samples, monotone linear
/// interpolation). Throws ConstantPath for constant base paths.
path arc_length_param(const path& p, double tol = 1e-9);

path reverse(const path& p);
path join(const path& p1, const path& p2, double eps_join = 1e-9);
path subpath(const path& p, double lo, double hi);
std::pair<cplx, cplx> endpoints(const path& p);

namespace detail {
/// Flatten polyline-backed structure (no mapped nodes) to oriented segments.
struct segment {
    cplx a, b;
};
std::optional<std::vector<segment>> flatten_to_segments(const path& p);
} // namespace detail

} // namespace fdiff
