#pragma once

#include "fdiff/expr.hpp"
#include "fdiff/path.hpp"

#include <string>
#include <vector>

namespace fdiff {

/// Finite generator list standing in for an effective collection of paths.
/// Closure under subpaths is realized by dyadic meshing in the checks;
/// density of the union of images in the ambient set is recorded as
/// documentation, not checked.
struct path_family {
    std::string name;
    std::vector<path> generators;
    bool closed_under_subpaths = true;
    bool closed_under_reverses = false;
    bool closed_under_joins = false;

    /// Validates that every generator passes is_admissible at default depth.
    static path_family make(std::string name, std::vector<path> generators,
                            bool closed_under_subpaths = true, bool closed_under_reverses = false,
                            bool closed_under_joins = false);
};

/// An asserted pair (f, g) meaning "g is the F-derivative of f".
struct deriv_pair {
    expr f, g;
    std::string provenance = "declared";
};

struct check_report {
    bool pass = true;
    double max_residual = 0.0;
    int witness_path = -1; // generator index (0 for single-path checks)
    double witness_lo = 0.0, witness_hi = 1.0;
    long paths_checked = 0;
    long subpaths_checked = 0;
    double tol = 0.0;
    int mesh_depth = 0;
};

/// Checks |∫_sigma g dz - (f(sigma+) - f(sigma-))| < tol over the full path
/// and every dyadic subinterval down to mesh_depth, integrating by the RS
/// route. Finest-cell integrals are computed once and aggregated upward by
/// additivity.
check_report check_gamma_derivative(const deriv_pair& pair, const path& p, int mesh_depth = 6,
                                    double tol = 1e-6);

check_report check_family_derivative(const deriv_pair& pair, const path_family& fam,
                                     int mesh_depth = 6, double tol = 1e-6);

struct pgen_result {
    bool rejected = false;
    int witness_pair = -1; // index into S when rejected
    check_report report;   // witness report when rejected, max-residual one otherwise
};

/// Sound numerical rejection certificate for "p is generated by S": rejected
/// when some pair's gamma-derivative check fails; consistent means only that
/// no counterexample exists in S at this mesh and tolerance.
pgen_result pgen_reject(const std::vector<deriv_pair>& S, const path& p, int mesh_depth = 6,
                        double tol = 1e-6);

deriv_pair product_pair(const deriv_pair& p1, const deriv_pair& p2);
deriv_pair linear_pair(const std::vector<deriv_pair>& pairs, const std::vector<cplx>& coeffs);

/// Quotient construction (f/g, (g f' - f g')/g^2); requires the sampled
/// minimum of |g| on the family to exceed eps_pole.
deriv_pair quotient_pair(const deriv_pair& pf, const deriv_pair& pg, const path_family& fam,
                         int samples = 257, double eps_pole = 1e-8);

/// Lower estimate of the uniform norm: max of |e| over equispaced samples of
/// every generator.
double sup_on_paths(const expr& e, const path_family& fam, int samples = 257);

/// Truncated norm sum_{k<=n} sup|f^(k)| / k!.
double dn_norm(const deriv_sequence& seq, const path_family& fam, int n, int samples = 257);

struct regularity_result {
    bool reachable = true;
    double constant = 0.0;  // max over targets of min-path-length / |x-y|
    cplx unreachable_target{};
};

/// Estimates the family-regularity constant at x over the given targets,
/// using generators, their dyadic subpaths, reverses and joins as permitted
/// by the family's closure flags.
regularity_result regularity_constant(const path_family& fam, cplx x,
                                      const std::vector<cplx>& targets, double tol,
                                      int mesh_depth = 6);

} // namespace fdiff
