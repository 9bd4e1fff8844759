#include "qhflow/simplex.hpp"

#include "qhflow/error.hpp"

#include <Eigen/LU>

#include <cmath>
#include <limits>
#include <random>
#include <algorithm>
#include <vector>

namespace qhflow {

LPResult solve_boxed_dual(const Eigen::VectorXd& g_in, const Pricer& price, const LPOptions& opt) {
    const Eigen::Index m = g_in.size();
    require(m > 0, "empty LP");
    const long nbox = 2 * static_cast<long>(m);

    // fixed-seed perturbation of the right-hand side against degenerate stalling
    Eigen::VectorXd g = g_in;
    if (opt.perturb > 0) {
        std::mt19937_64 rng(0x9e3779b97f4a7c15ULL);
        std::uniform_real_distribution<double> u(0.5, 1.0);
        const double gn = std::max(g_in.cwiseAbs().maxCoeff(), 1e-300);
        for (Eigen::Index k = 0; k < m; ++k) g(k) += (g(k) >= 0 ? 1 : -1) * opt.perturb * gn * u(rng);
    }

    // basis: columns, costs, keys (box slack k+ has key k, k- has key m+k)
    Eigen::MatrixXd B = Eigen::MatrixXd::Zero(m, m);
    Eigen::VectorXd cB(m);
    std::vector<long> keys(m);
    for (Eigen::Index k = 0; k < m; ++k) {
        bool plus = g(k) >= 0;
        B(k, k) = plus ? 1.0 : -1.0;
        cB(k) = opt.box;
        keys[k] = plus ? k : m + k;
    }

    LPResult res;
    Eigen::VectorXd beta = B.diagonal().cwiseProduct(g);
    Eigen::VectorXd x = B.diagonal().cwiseProduct(cB);
    int stall = 0;
    bool bland = false;

    for (res.iterations = 0; res.iterations < opt.max_iter; ++res.iterations) {
        // entering column: box slacks first, then priced columns
        std::optional<LPColumn> best;
        for (Eigen::Index k = 0; k < m; ++k) {
            for (int s = 0; s < 2; ++s) {
                double r = opt.box - (s == 0 ? x(k) : -x(k));
                if (r >= -opt.tol * opt.box) continue;
                long key = s == 0 ? k : m + k;
                bool take = !best || (bland ? key < best->key : r < best->reduced);
                if (!take) continue;
                LPColumn c;
                c.a = Eigen::VectorXd::Zero(m);
                c.a(k) = s == 0 ? 1.0 : -1.0;
                c.cost = opt.box;
                c.reduced = r;
                c.key = key;
                best = std::move(c);
            }
        }
        if (!best || !bland) {
            auto col = price(x, bland);
            if (col && std::find(keys.begin(), keys.end(), col->key + nbox) != keys.end()) col.reset();
            if (col && col->reduced < -opt.tol) {
                col->key += nbox;
                if (!best || col->reduced < best->reduced) best = std::move(col);
            }
        }
        if (!best) {
            res.status = LPStatus::Optimal;
            break;
        }

        Eigen::PartialPivLU<Eigen::MatrixXd> lu(B);
        Eigen::VectorXd d = lu.solve(best->a);
        double dmax = d.cwiseAbs().maxCoeff();
        double piv_tol = 1e-11 * std::max(1.0, dmax);
        Eigen::Index leave = -1;
        double t = std::numeric_limits<double>::infinity();
        if (bland) {
            for (Eigen::Index i = 0; i < m; ++i) {
                if (d(i) <= piv_tol) continue;
                double ti = std::max(0.0, beta(i)) / d(i);
                if (ti < t - 1e-15 || (ti <= t + 1e-15 && leave >= 0 && keys[i] < keys[leave])) {
                    t = ti;
                    leave = i;
                }
            }
        } else {
            // Harris: relaxed bound first, then the largest pivot under it
            double tmax = std::numeric_limits<double>::infinity();
            for (Eigen::Index i = 0; i < m; ++i)
                if (d(i) > piv_tol) tmax = std::min(tmax, (std::max(0.0, beta(i)) + 1e-9) / d(i));
            for (Eigen::Index i = 0; i < m; ++i) {
                if (d(i) <= piv_tol) continue;
                double ti = std::max(0.0, beta(i)) / d(i);
                if (ti > tmax) continue;
                if (leave < 0 || d(i) > d(leave) || (d(i) == d(leave) && keys[i] < keys[leave])) leave = i;
            }
            if (leave >= 0) t = std::max(0.0, beta(leave)) / d(leave);
        }
        if (leave < 0) throw NumericError("LP unbounded: degenerate constraint set");

        res.degenerate += t <= 1e-14;
        stall = t <= 1e-14 ? stall + 1 : 0;
        if (stall > opt.stall_limit) bland = true;
        if (t > 1e-14 && bland && stall == 0) bland = false;

        B.col(leave) = best->a;
        cB(leave) = best->cost;
        keys[leave] = best->key;

        Eigen::PartialPivLU<Eigen::MatrixXd> lu2(B);
        beta = lu2.solve(g);
        x = lu2.transpose().solve(cB);
        if (!beta.allFinite() || !x.allFinite()) throw NumericError("LP basis became singular");
    }
    if (res.iterations >= opt.max_iter) res.status = LPStatus::IterationLimit;
    res.x = x;
    res.box_active = x.cwiseAbs().maxCoeff() >= opt.box * (1 - 1e-6);
    return res;
}

}  // namespace qhflow
