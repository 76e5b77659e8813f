#include "obbtrack/assignment.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>

namespace obbtrack {

namespace {

// Classical potentials formulation; requires rows <= cols. Indices are
// 1-based with column 0 as the virtual start of each augmenting path.
std::vector<int> lap_rows_le_cols(const std::vector<std::vector<double>>& a) {
    const int n = static_cast<int>(a.size());
    const int m = static_cast<int>(a[0].size());
    const double kInf = std::numeric_limits<double>::infinity();

    std::vector<double> u(n + 1, 0.0), v(m + 1, 0.0);
    std::vector<int> match(m + 1, 0);  // match[j] = row occupying column j
    std::vector<int> way(m + 1, 0);

    for (int i = 1; i <= n; ++i) {
        match[0] = i;
        int j0 = 0;
        std::vector<double> minv(m + 1, kInf);
        std::vector<char> used(m + 1, 0);
        do {
            used[j0] = 1;
            const int i0 = match[j0];
            int j1 = -1;
            double delta = kInf;
            for (int j = 1; j <= m; ++j) {
                if (used[j]) continue;
                const double cur = a[i0 - 1][j - 1] - u[i0] - v[j];
                if (cur < minv[j]) {
                    minv[j] = cur;
                    way[j] = j0;
                }
                if (minv[j] < delta) {
                    delta = minv[j];
                    j1 = j;
                }
            }
            for (int j = 0; j <= m; ++j) {
                if (used[j]) {
                    u[match[j]] += delta;
                    v[j] -= delta;
                } else {
                    minv[j] -= delta;
                }
            }
            j0 = j1;
        } while (match[j0] != 0);
        do {
            const int j1 = way[j0];
            match[j0] = match[j1];
            j0 = j1;
        } while (j0 != 0);
    }

    std::vector<int> row_to_col(n, -1);
    for (int j = 1; j <= m; ++j) {
        if (match[j] > 0) row_to_col[match[j] - 1] = j - 1;
    }
    return row_to_col;
}

}  // namespace

std::vector<int> solve_min_cost_assignment(const std::vector<std::vector<double>>& cost) {
    const int n = static_cast<int>(cost.size());
    if (n == 0) return {};
    const int m = static_cast<int>(cost[0].size());
    if (m == 0) return std::vector<int>(n, -1);
    for (const auto& row : cost) {
        if (static_cast<int>(row.size()) != m) {
            throw std::invalid_argument("solve_min_cost_assignment: ragged cost matrix");
        }
        for (double c : row) {
            if (!std::isfinite(c)) {
                throw std::invalid_argument("solve_min_cost_assignment: non-finite cost");
            }
        }
    }

    if (n <= m) return lap_rows_le_cols(cost);

    // Transpose, solve, invert the mapping.
    std::vector<std::vector<double>> t(m, std::vector<double>(n));
    for (int i = 0; i < n; ++i) {
        for (int j = 0; j < m; ++j) t[j][i] = cost[i][j];
    }
    const std::vector<int> col_to_row = lap_rows_le_cols(t);
    std::vector<int> row_to_col(n, -1);
    for (int j = 0; j < m; ++j) {
        if (col_to_row[j] >= 0) row_to_col[col_to_row[j]] = j;
    }
    return row_to_col;
}

}  // namespace obbtrack
