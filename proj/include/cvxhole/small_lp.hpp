#pragma once

#include <vector>

namespace cvxhole::lp {

enum class Status { optimal, unbounded, infeasible_start, iteration_limit };

struct Solution {
    Status status = Status::optimal;
    std::vector<double> x;
    double value = 0.0;
};

/// Dense dictionary simplex for small problems:
///   maximize dot(objective, x)  subject to  rows[i] . x <= rhs[i],  x free.
/// The origin must be feasible (every rhs >= 0); callers shift coordinates to
/// a known interior point first. Bland's rule prevents cycling.
Solution maximize(const std::vector<double>& objective,
                  const std::vector<std::vector<double>>& rows,
                  const std::vector<double>& rhs);

}  // namespace cvxhole::lp
