#include "cvxhole/small_lp.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace cvxhole::lp {

Solution maximize(const std::vector<double>& objective,
                  const std::vector<std::vector<double>>& rows,
                  const std::vector<double>& rhs) {
    const std::size_t k = objective.size();
    const std::size_t m = rows.size();
    const std::size_t cols = 2 * k;  // x = x_plus - x_minus

    Solution sol;
    sol.x.assign(k, 0.0);
    for (double b : rhs) {
        if (b < 0.0) {
            sol.status = Status::infeasible_start;
            return sol;
        }
    }

    // Dictionary: basic_i = rhs_i - sum_j coef[i][j] * nonbasic_j,
    //             z = z0 + sum_j cost[j] * nonbasic_j.
    // Variable ids: [0, cols) structural, [cols, cols + m) slacks.
    std::vector<double> coef(m * cols);
    std::vector<double> b(rhs);
    std::vector<double> cost(cols);
    std::vector<std::size_t> nonbasic(cols), basic(m);
    for (std::size_t i = 0; i < m; ++i) {
        for (std::size_t j = 0; j < k; ++j) {
            coef[i * cols + 2 * j] = rows[i][j];
            coef[i * cols + 2 * j + 1] = -rows[i][j];
        }
        basic[i] = cols + i;
    }
    for (std::size_t j = 0; j < k; ++j) {
        cost[2 * j] = objective[j];
        cost[2 * j + 1] = -objective[j];
    }
    for (std::size_t j = 0; j < cols; ++j) nonbasic[j] = j;
    double z = 0.0;

    double scale = 1.0;
    for (double c : objective) scale = std::max(scale, std::fabs(c));
    const double cost_tol = 1e-12 * scale;
    constexpr double kPivotTol = 1e-12;
    const std::size_t max_iter = 50 * (m + cols) + 100;

    std::size_t iter = 0;
    for (; iter < max_iter; ++iter) {
        // Bland: entering variable with the smallest id among improving ones.
        std::size_t enter = cols;
        for (std::size_t j = 0; j < cols; ++j) {
            if (cost[j] > cost_tol && (enter == cols || nonbasic[j] < nonbasic[enter])) enter = j;
        }
        if (enter == cols) break;

        std::size_t leave = m;
        double best_ratio = std::numeric_limits<double>::infinity();
        for (std::size_t i = 0; i < m; ++i) {
            const double a = coef[i * cols + enter];
            if (a <= kPivotTol) continue;
            const double ratio = b[i] / a;
            if (leave == m) {
                best_ratio = ratio;
                leave = i;
                continue;
            }
            const double slack = 1e-15 * std::max(1.0, std::fabs(best_ratio));
            if (ratio < best_ratio - slack ||
                (std::fabs(ratio - best_ratio) <= slack && basic[i] < basic[leave])) {
                best_ratio = ratio;
                leave = i;
            }
        }
        if (leave == m) {
            sol.status = Status::unbounded;
            return sol;
        }

        // Pivot: nonbasic[enter] becomes basic in row `leave`.
        const double piv = coef[leave * cols + enter];
        double* prow = &coef[leave * cols];
        b[leave] /= piv;
        for (std::size_t j = 0; j < cols; ++j) prow[j] /= piv;
        prow[enter] = 1.0 / piv;
        for (std::size_t i = 0; i < m; ++i) {
            if (i == leave) continue;
            double* row = &coef[i * cols];
            const double f = row[enter];
            if (f == 0.0) continue;
            b[i] -= f * b[leave];
            if (b[i] < 0.0 && b[i] > -1e-13) b[i] = 0.0;
            for (std::size_t j = 0; j < cols; ++j) row[j] -= f * prow[j];
            row[enter] = -f * prow[enter];
        }
        const double cf = cost[enter];
        z += cf * b[leave];
        for (std::size_t j = 0; j < cols; ++j) cost[j] -= cf * prow[j];
        cost[enter] = -cf * prow[enter];
        std::swap(basic[leave], nonbasic[enter]);
    }
    if (iter == max_iter) sol.status = Status::iteration_limit;

    std::vector<double> values(cols, 0.0);
    for (std::size_t i = 0; i < m; ++i) {
        if (basic[i] < cols) values[basic[i]] = b[i];
    }
    for (std::size_t j = 0; j < k; ++j) sol.x[j] = values[2 * j] - values[2 * j + 1];
    sol.value = z;
    return sol;
}

}  // namespace cvxhole::lp
