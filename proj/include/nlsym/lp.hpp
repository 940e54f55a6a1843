#pragma once

#include <optional>
#include <vector>

#include "nlsym/cyclotomic.hpp"
#include "nlsym/rational.hpp"

namespace nlsym {

/// Feasibility of {x >= 0 : Ax = b} in exact rational arithmetic.
/// Infeasible outcomes carry a Farkas vector y with y^T A <= 0 (componentwise
/// over columns) and y^T b > 0.
struct ExactLpResult {
    bool feasible = false;
    std::vector<Rat> x;       // a basic feasible solution when feasible
    std::vector<Rat> farkas;  // per-row certificate when infeasible
};

/// Primal phase-1 simplex with Bland's rule; terminates on all inputs.
ExactLpResult lp_feasible_exact(const std::vector<std::vector<Rat>>& rows,
                                const std::vector<Rat>& b);

/// Float counterpart used for warm starts and large surveys. Dantzig pricing
/// with an iteration cap; `reliable` is false when the cap was hit.
struct FloatLpResult {
    bool feasible = false;
    bool reliable = true;
    std::vector<double> x;
    std::vector<double> farkas;
};

FloatLpResult lp_feasible_float(const std::vector<std::vector<double>>& rows,
                                const std::vector<double>& b, double eps = 1e-9);

/// One solution of Ax = b over Q (free variables set to zero), or nullopt if
/// the system is inconsistent.
std::optional<std::vector<Rat>> solve_linear_rat(std::vector<std::vector<Rat>> rows,
                                                 std::vector<Rat> b);

/// Same elimination with a cyclotomic right-hand side; the solution lives in
/// the cyclotomic field since the matrix is rational.
std::optional<std::vector<Cyclotomic>> solve_linear_cyclo(std::vector<std::vector<Rat>> rows,
                                                          std::vector<Cyclotomic> b);

}  // namespace nlsym
