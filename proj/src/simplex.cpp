#include "vncrit/simplex.hpp"

#include <cmath>
#include <cstddef>
#include <cstdint>

namespace vncrit::lp {

namespace {
constexpr double kPivotEps = 1e-9;
}

Phase1Result phase1_feasibility(const std::vector<std::vector<double>>& rows,
                                const std::vector<RowSense>& senses,
                                const std::vector<double>& rhs, int max_iterations) {
    const std::size_t m = rows.size();
    const std::size_t n = m == 0 ? 0 : rows[0].size();

    // Normalize to rhs >= 0, then append slack/surplus/artificial columns.
    std::vector<std::vector<double>> a(rows);
    std::vector<RowSense> sense(senses);
    std::vector<double> b(rhs);
    for (std::size_t i = 0; i < m; ++i) {
        if (b[i] < 0.0) {
            b[i] = -b[i];
            for (double& v : a[i]) v = -v;
            if (sense[i] == RowSense::LE) sense[i] = RowSense::GE;
            else if (sense[i] == RowSense::GE) sense[i] = RowSense::LE;
        }
    }

    std::size_t cols = n;
    std::vector<std::size_t> slack_col(m, SIZE_MAX), art_col(m, SIZE_MAX);
    for (std::size_t i = 0; i < m; ++i) {
        if (sense[i] == RowSense::LE) slack_col[i] = cols++;
        else if (sense[i] == RowSense::GE) { slack_col[i] = cols++; art_col[i] = cols++; }
        else art_col[i] = cols++;
    }

    std::vector<bool> artificial(cols, false);
    std::vector<std::vector<double>> t(m, std::vector<double>(cols + 1, 0.0));
    std::vector<std::size_t> basic(m);
    for (std::size_t i = 0; i < m; ++i) {
        for (std::size_t j = 0; j < n; ++j) t[i][j] = a[i][j];
        t[i][cols] = b[i];
        if (sense[i] == RowSense::LE) {
            t[i][slack_col[i]] = 1.0;
            basic[i] = slack_col[i];
        } else if (sense[i] == RowSense::GE) {
            t[i][slack_col[i]] = -1.0;
            t[i][art_col[i]] = 1.0;
            artificial[art_col[i]] = true;
            basic[i] = art_col[i];
        } else {
            t[i][art_col[i]] = 1.0;
            artificial[art_col[i]] = true;
            basic[i] = art_col[i];
        }
    }

    // Reduced costs for min sum-of-artificials, priced out over the basis.
    std::vector<double> reduced(cols, 0.0);
    double objective = 0.0;
    for (std::size_t j = 0; j < cols; ++j) {
        double priced = 0.0;
        for (std::size_t i = 0; i < m; ++i)
            if (artificial[basic[i]]) priced += t[i][j];
        reduced[j] = (artificial[j] ? 1.0 : 0.0) - priced;
    }
    for (std::size_t i = 0; i < m; ++i)
        if (artificial[basic[i]]) objective += t[i][cols];

    Phase1Result result;
    for (int iter = 0; iter < max_iterations; ++iter) {
        // Bland: lowest-index improving column; artificials never re-enter.
        std::size_t enter = SIZE_MAX;
        for (std::size_t j = 0; j < cols; ++j) {
            if (artificial[j]) continue;
            if (reduced[j] < -kPivotEps) { enter = j; break; }
        }
        if (enter == SIZE_MAX) {
            result.converged = true;
            result.iterations = iter;
            break;
        }

        std::size_t leave = SIZE_MAX;
        double best_ratio = 0.0;
        for (std::size_t i = 0; i < m; ++i) {
            if (t[i][enter] <= kPivotEps) continue;
            const double ratio = t[i][cols] / t[i][enter];
            if (leave == SIZE_MAX || ratio < best_ratio - 1e-15 ||
                (std::abs(ratio - best_ratio) <= 1e-15 && basic[i] < basic[leave])) {
                leave = i;
                best_ratio = ratio;
            }
        }
        if (leave == SIZE_MAX) break;  // unbounded improving ray; treat as stalled

        const double pivot = t[leave][enter];
        for (std::size_t j = 0; j <= cols; ++j) t[leave][j] /= pivot;
        for (std::size_t i = 0; i < m; ++i) {
            if (i == leave) continue;
            const double factor = t[i][enter];
            if (factor == 0.0) continue;
            for (std::size_t j = 0; j <= cols; ++j) t[i][j] -= factor * t[leave][j];
        }
        const double rfactor = reduced[enter];
        for (std::size_t j = 0; j < cols; ++j) reduced[j] -= rfactor * t[leave][j];
        basic[leave] = enter;

        objective = 0.0;
        for (std::size_t i = 0; i < m; ++i)
            if (artificial[basic[i]]) objective += t[i][cols];
    }

    result.objective = std::max(0.0, objective);
    result.x.assign(n, 0.0);
    for (std::size_t i = 0; i < m; ++i)
        if (basic[i] < n) result.x[basic[i]] = std::max(0.0, t[i][cols]);
    return result;
}

}  // namespace vncrit::lp
