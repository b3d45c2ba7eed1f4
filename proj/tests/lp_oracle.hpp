// Brute-force LP reference: enumerates basic solutions (vertices) of the
// polytope after boxing every infinite bound at +/-BIG. Exponential; only for
// tiny instances.
#pragma once

#include "capex/lp.hpp"

#include <cmath>
#include <vector>

namespace oracle {

constexpr double kBig = 1e6;

struct Result {
    capex::lp::Status status = capex::lp::Status::infeasible;
    double objective = 0.0;
};

namespace detail {

struct Plane {
    std::vector<double> a;
    double b = 0.0;
    bool box = false; // artificial +/-BIG bound
};

// solves sq * x = rhs in place; returns false when singular
inline bool gauss(std::vector<double>& sq, std::vector<double>& rhs, int n) {
    for (int c = 0; c < n; ++c) {
        int piv = -1;
        double best = 1e-9;
        for (int r = c; r < n; ++r)
            if (std::abs(sq[r * n + c]) > best) {
                best = std::abs(sq[r * n + c]);
                piv = r;
            }
        if (piv < 0) return false;
        if (piv != c) {
            for (int k = c; k < n; ++k) std::swap(sq[c * n + k], sq[piv * n + k]);
            std::swap(rhs[c], rhs[piv]);
        }
        for (int r = 0; r < n; ++r) {
            if (r == c) continue;
            const double f = sq[r * n + c] / sq[c * n + c];
            if (f == 0.0) continue;
            for (int k = c; k < n; ++k) sq[r * n + k] -= f * sq[c * n + k];
            rhs[r] -= f * rhs[c];
        }
    }
    for (int c = 0; c < n; ++c) rhs[c] /= sq[c * n + c];
    return true;
}

} // namespace detail

inline Result solve(const capex::lp::LinearProgram& lp) {
    using capex::lp::Sense;
    const int n = lp.num_vars();
    const int m = lp.num_rows();

    std::vector<std::vector<double>> rows(m, std::vector<double>(n, 0.0));
    for (const auto& e : lp.entries) rows[e.row][e.col] += e.value;

    std::vector<detail::Plane> planes;   // optional active planes
    std::vector<int> forced;             // equality rows, always active
    for (int i = 0; i < m; ++i) {
        if (lp.senses[i] == Sense::eq) forced.push_back(static_cast<int>(planes.size()));
        planes.push_back({rows[i], lp.rhs[i], false});
    }
    for (int j = 0; j < n; ++j) {
        std::vector<double> e(n, 0.0);
        e[j] = 1.0;
        if (std::isfinite(lp.lo[j])) planes.push_back({e, lp.lo[j], false});
        else planes.push_back({e, -kBig, true});
        if (std::isfinite(lp.hi[j])) planes.push_back({e, lp.hi[j], false});
        else planes.push_back({e, kBig, true});
    }
    const int P = static_cast<int>(planes.size());

    auto feasible = [&](const std::vector<double>& x) {
        for (int i = 0; i < m; ++i) {
            double ax = 0.0, scale = 1.0;
            for (int j = 0; j < n; ++j) {
                ax += rows[i][j] * x[j];
                scale = std::max(scale, std::abs(rows[i][j] * x[j]));
            }
            const double tol = 1e-7 * std::max(scale, std::abs(lp.rhs[i]));
            if (lp.senses[i] == Sense::le && ax > lp.rhs[i] + tol) return false;
            if (lp.senses[i] == Sense::ge && ax < lp.rhs[i] - tol) return false;
            if (lp.senses[i] == Sense::eq && std::abs(ax - lp.rhs[i]) > tol) return false;
        }
        for (int j = 0; j < n; ++j) {
            const double lo = std::isfinite(lp.lo[j]) ? lp.lo[j] : -kBig;
            const double hi = std::isfinite(lp.hi[j]) ? lp.hi[j] : kBig;
            const double tol = 1e-7 * std::max(1.0, std::abs(x[j]));
            if (x[j] < lo - tol || x[j] > hi + tol) return false;
        }
        return true;
    };

    bool any = false, any_interior = false;
    double best_boxed = capex::lp::kInf, best_plain = capex::lp::kInf;

    std::vector<int> pick(n, 0);
    std::vector<char> is_forced(P, 0);
    for (int f : forced) is_forced[f] = 1;
    const int need = n - static_cast<int>(forced.size());
    if (need < 0) return {};

    // iterate subsets of non-forced planes of size `need`
    std::vector<int> free_planes;
    for (int p = 0; p < P; ++p)
        if (!is_forced[p]) free_planes.push_back(p);
    const int F = static_cast<int>(free_planes.size());
    std::vector<int> idx(need);
    for (int k = 0; k < need; ++k) idx[k] = k;

    std::vector<double> sq(n * n), rhs(n), x(n);
    auto visit = [&](const std::vector<int>& chosen) {
        for (int r = 0; r < n; ++r) {
            const detail::Plane& pl = planes[chosen[r]];
            for (int c = 0; c < n; ++c) sq[r * n + c] = pl.a[c];
            rhs[r] = pl.b;
        }
        std::vector<double> sq2(sq), rhs2(rhs);
        if (!detail::gauss(sq2, rhs2, n)) return;
        x = rhs2;
        if (!feasible(x)) return;
        double obj = lp.objective_offset;
        for (int j = 0; j < n; ++j) obj += lp.cost[j] * x[j];
        any = true;
        bool on_box = false;
        for (int c : chosen)
            if (planes[c].box) on_box = true;
        if (on_box) {
            best_boxed = std::min(best_boxed, obj);
        } else {
            any_interior = true;
            best_plain = std::min(best_plain, obj);
        }
    };

    if (need == 0) {
        std::vector<int> chosen;
        for (int f : forced) chosen.push_back(f);
        visit(chosen);
    } else if (need <= F) {
        for (;;) {
            std::vector<int> chosen;
            for (int f : forced) chosen.push_back(f);
            for (int k = 0; k < need; ++k) chosen.push_back(free_planes[idx[k]]);
            visit(chosen);
            int k = need - 1;
            while (k >= 0 && idx[k] == F - need + k) --k;
            if (k < 0) break;
            ++idx[k];
            for (int j = k + 1; j < need; ++j) idx[j] = idx[j - 1] + 1;
        }
    }

    Result out;
    if (!any) {
        out.status = capex::lp::Status::infeasible;
        return out;
    }
    if (!any_interior || best_boxed < best_plain - 1e-3) {
        out.status = capex::lp::Status::unbounded;
        return out;
    }
    out.status = capex::lp::Status::optimal;
    out.objective = best_plain;
    return out;
}

} // namespace oracle
