#include "nlsym/lp.hpp"

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <stdexcept>

namespace nlsym {

ExactLpResult lp_feasible_exact(const std::vector<std::vector<Rat>>& rows,
                                const std::vector<Rat>& b) {
    const size_t m = rows.size();
    const size_t n = m ? rows[0].size() : 0;
    if (b.size() != m) throw std::logic_error("lp_feasible_exact: shape mismatch");

    // Phase-1: min sum of artificials over [A I]y = b', b' >= 0.
    std::vector<int> sign(m, 1);
    std::vector<std::vector<Rat>> t(m, std::vector<Rat>(n + m + 1, Rat(0)));
    for (size_t i = 0; i < m; ++i) {
        sign[i] = (b[i] < 0) ? -1 : 1;
        for (size_t j = 0; j < n; ++j) t[i][j] = sign[i] * rows[i][j];
        t[i][n + i] = 1;
        t[i][n + m] = sign[i] * b[i];
    }
    std::vector<size_t> basis(m);
    for (size_t i = 0; i < m; ++i) basis[i] = n + i;
    // reduced costs: d_j = c_j - sum_i t[i][j] (artificial costs are 1)
    std::vector<Rat> d(n + m + 1, Rat(0));
    for (size_t j = 0; j <= n + m; ++j) {
        Rat s(0);
        for (size_t i = 0; i < m; ++i) s += t[i][j];
        d[j] = (j >= n && j < n + m ? Rat(1) : Rat(0)) - s;
    }

    while (true) {
        // Bland: lowest-index column with negative reduced cost
        size_t enter = n + m;
        for (size_t j = 0; j < n + m; ++j)
            if (d[j] < 0) {
                enter = j;
                break;
            }
        if (enter == n + m) break;
        // ratio test; ties resolved by lowest basis index (Bland)
        size_t leave = m;
        Rat best;
        for (size_t i = 0; i < m; ++i) {
            if (t[i][enter] > 0) {
                Rat ratio = t[i][n + m] / t[i][enter];
                if (leave == m || ratio < best ||
                    (ratio == best && basis[i] < basis[leave])) {
                    leave = i;
                    best = ratio;
                }
            }
        }
        if (leave == m)
            throw std::logic_error("lp_feasible_exact: unbounded phase-1 objective");
        // pivot
        Rat piv = t[leave][enter];
        for (auto& v : t[leave]) v /= piv;
        for (size_t i = 0; i < m; ++i) {
            if (i == leave || t[i][enter] == 0) continue;
            Rat f = t[i][enter];
            for (size_t j = 0; j <= n + m; ++j) t[i][j] -= f * t[leave][j];
        }
        if (d[enter] != 0) {
            Rat f = d[enter];
            for (size_t j = 0; j <= n + m; ++j) d[j] -= f * t[leave][j];
        }
        basis[leave] = enter;
    }

    ExactLpResult res;
    Rat value = -d[n + m];
    if (value > 0) {
        // Farkas vector from the simplex multipliers: pi_i = 1 - d[artificial_i],
        // undone for the row sign flips.
        res.feasible = false;
        res.farkas.resize(m);
        for (size_t i = 0; i < m; ++i) res.farkas[i] = Rat(sign[i]) * (Rat(1) - d[n + i]);
        return res;
    }
    res.feasible = true;
    res.x.assign(n, Rat(0));
    for (size_t i = 0; i < m; ++i)
        if (basis[i] < n) res.x[basis[i]] = t[i][n + m];
    return res;
}

FloatLpResult lp_feasible_float(const std::vector<std::vector<double>>& rows,
                                const std::vector<double>& b, double eps) {
    const size_t m = rows.size();
    const size_t n = m ? rows[0].size() : 0;
    std::vector<int> sign(m, 1);
    std::vector<std::vector<double>> t(m, std::vector<double>(n + m + 1, 0.0));
    for (size_t i = 0; i < m; ++i) {
        sign[i] = (b[i] < 0) ? -1 : 1;
        for (size_t j = 0; j < n; ++j) t[i][j] = sign[i] * rows[i][j];
        t[i][n + i] = 1.0;
        t[i][n + m] = sign[i] * b[i];
    }
    std::vector<size_t> basis(m);
    for (size_t i = 0; i < m; ++i) basis[i] = n + i;
    std::vector<double> d(n + m + 1, 0.0);
    for (size_t j = 0; j <= n + m; ++j) {
        double s = 0;
        for (size_t i = 0; i < m; ++i) s += t[i][j];
        d[j] = (j >= n && j < n + m ? 1.0 : 0.0) - s;
    }

    FloatLpResult res;
    const size_t max_iter = 200 * (m + 2) + 2 * n;
    size_t iter = 0;
    while (true) {
        if (++iter > max_iter) {
            res.reliable = false;
            break;
        }
        size_t enter = n + m;
        double most = -eps;
        for (size_t j = 0; j < n + m; ++j)
            if (d[j] < most) {
                most = d[j];
                enter = j;
            }
        if (enter == n + m) break;
        size_t leave = m;
        double best = 0;
        for (size_t i = 0; i < m; ++i) {
            if (t[i][enter] > eps) {
                double ratio = t[i][n + m] / t[i][enter];
                if (leave == m || ratio < best - 1e-15 ||
                    (std::abs(ratio - best) <= 1e-15 && basis[i] < basis[leave])) {
                    leave = i;
                    best = ratio;
                }
            }
        }
        if (leave == m) {
            res.reliable = false;
            break;
        }
        double piv = t[leave][enter];
        for (auto& v : t[leave]) v /= piv;
        for (size_t i = 0; i < m; ++i) {
            if (i == leave) continue;
            double f = t[i][enter];
            if (f == 0) continue;
            for (size_t j = 0; j <= n + m; ++j) t[i][j] -= f * t[leave][j];
        }
        double f = d[enter];
        if (f != 0)
            for (size_t j = 0; j <= n + m; ++j) d[j] -= f * t[leave][j];
        basis[leave] = enter;
    }

    double value = -d[n + m];
    if (value > eps) {
        res.feasible = false;
        res.farkas.resize(m);
        for (size_t i = 0; i < m; ++i) res.farkas[i] = sign[i] * (1.0 - d[n + i]);
    } else {
        res.feasible = true;
        res.x.assign(n, 0.0);
        for (size_t i = 0; i < m; ++i)
            if (basis[i] < n) res.x[basis[i]] = t[i][n + m];
    }
    return res;
}

std::optional<std::vector<Rat>> solve_linear_rat(std::vector<std::vector<Rat>> a,
                                                 std::vector<Rat> b) {
    const size_t m = a.size();
    const size_t n = m ? a[0].size() : 0;
    std::vector<size_t> pivot_col;
    size_t row = 0;
    for (size_t col = 0; col < n && row < m; ++col) {
        size_t sel = row;
        while (sel < m && a[sel][col] == 0) ++sel;
        if (sel == m) continue;
        std::swap(a[sel], a[row]);
        std::swap(b[sel], b[row]);
        Rat piv = a[row][col];
        for (size_t j = col; j < n; ++j) a[row][j] /= piv;
        b[row] /= piv;
        for (size_t i = 0; i < m; ++i) {
            if (i == row || a[i][col] == 0) continue;
            Rat f = a[i][col];
            for (size_t j = col; j < n; ++j) a[i][j] -= f * a[row][j];
            b[i] -= f * b[row];
        }
        pivot_col.push_back(col);
        ++row;
    }
    for (size_t i = row; i < m; ++i)
        if (b[i] != 0) return std::nullopt;
    std::vector<Rat> x(n, Rat(0));
    for (size_t i = 0; i < row; ++i) x[pivot_col[i]] = b[i];
    return x;
}

std::optional<std::vector<Cyclotomic>> solve_linear_cyclo(std::vector<std::vector<Rat>> a,
                                                          std::vector<Cyclotomic> b) {
    const size_t m = a.size();
    const size_t n = m ? a[0].size() : 0;
    std::vector<size_t> pivot_col;
    size_t row = 0;
    for (size_t col = 0; col < n && row < m; ++col) {
        size_t sel = row;
        while (sel < m && a[sel][col] == 0) ++sel;
        if (sel == m) continue;
        std::swap(a[sel], a[row]);
        std::swap(b[sel], b[row]);
        Rat piv = a[row][col];
        for (size_t j = col; j < n; ++j) a[row][j] /= piv;
        b[row] = b[row] / piv;
        for (size_t i = 0; i < m; ++i) {
            if (i == row || a[i][col] == 0) continue;
            Rat f = a[i][col];
            for (size_t j = col; j < n; ++j) a[i][j] -= f * a[row][j];
            b[i] = b[i] - b[row] * f;
        }
        pivot_col.push_back(col);
        ++row;
    }
    for (size_t i = row; i < m; ++i)
        if (!b[i].is_zero()) return std::nullopt;
    std::vector<Cyclotomic> x(n, Cyclotomic());
    for (size_t i = 0; i < row; ++i) x[pivot_col[i]] = b[i];
    return x;
}

}  // namespace nlsym
