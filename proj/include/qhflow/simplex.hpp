#pragma once

#include <Eigen/Dense>

#include <functional>
#include <optional>

namespace qhflow {

/*
 * Revised simplex on the dual of
 *     max g.x   s.t.  a_j.x <= cost_j  (columns priced on demand),  |x_k| <= box
 * i.e.  min sum cost_j y_j + box*(s+ + s-)  s.t.  sum y_j a_j + s+ - s- = g.
 * The starting basis is the box slacks, so the dual is feasible from the start
 * and x (the simplex multipliers) is the primal point.
 */
struct LPColumn {
    Eigen::VectorXd a;
    double cost = 1.0;
    double reduced = 0.0;  // cost - a.x at pricing time
    long key = 0;          // stable id, used for Bland ordering
};

enum class LPStatus { Optimal, IterationLimit };

struct LPResult {
    Eigen::VectorXd x;
    LPStatus status = LPStatus::Optimal;
    int iterations = 0;
    int degenerate = 0;  // pivots with zero step
    bool box_active = false;
};

struct LPOptions {
    double box = 1e6;
    double tol = 1e-10;       // reduced cost tolerance
    int max_iter = 5000;
    int stall_limit = 40;     // degenerate pivots before switching to Bland
    double perturb = 1e-7;    // relative right-hand side perturbation, 0 = off
};

// pricer(x, bland) -> column with negative reduced cost, or nullopt
using Pricer = std::function<std::optional<LPColumn>(const Eigen::VectorXd& x, bool bland)>;

LPResult solve_boxed_dual(const Eigen::VectorXd& g, const Pricer& price, const LPOptions& opt = {});

}  // namespace qhflow
