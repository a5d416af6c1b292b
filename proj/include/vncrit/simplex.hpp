#pragma once

#include <vector>

namespace vncrit::lp {

enum class RowSense { LE, GE, EQ };

struct Phase1Result {
    bool converged = false;
    double objective = 0.0;  // total artificial mass = infeasibility at optimum
    std::vector<double> x;   // structural variables only
    int iterations = 0;
};

// Phase-1 feasibility for { rows * x (sense) rhs, x >= 0 }: minimizes the
// total artificial-variable mass with Bland's rule (deterministic, no
// cycling). objective ~ 0 iff the system is feasible.
Phase1Result phase1_feasibility(const std::vector<std::vector<double>>& rows,
                                const std::vector<RowSense>& senses,
                                const std::vector<double>& rhs, int max_iterations = 200000);

}  // namespace vncrit::lp
