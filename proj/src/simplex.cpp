#include "capex/lp.hpp"

#include "capex/types.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <cstring>
#include <sstream>
#include <vector>

namespace capex::lp {

std::string status_name(Status s) {
    switch (s) {
    case Status::optimal: return "optimal";
    case Status::infeasible: return "infeasible";
    case Status::unbounded: return "unbounded";
    case Status::iteration_limit: return "iteration_limit";
    }
    return "?";
}

int LinearProgram::add_var(double c, double lower, double upper) {
    cost.push_back(c);
    lo.push_back(lower);
    hi.push_back(upper);
    return static_cast<int>(cost.size()) - 1;
}

int LinearProgram::add_row(Sense sense, double b) {
    senses.push_back(sense);
    rhs.push_back(b);
    return static_cast<int>(rhs.size()) - 1;
}

void LinearProgram::add_entry(int row, int col, double value) {
    if (value != 0.0) entries.push_back({row, col, value});
}

void LinearProgram::check() const {
    const int n = num_vars();
    const int m = num_rows();
    if (lo.size() != cost.size() || hi.size() != cost.size())
        throw ValidationError("LP: bounds/cost size mismatch");
    if (senses.size() != rhs.size()) throw ValidationError("LP: senses/rhs size mismatch");
    for (int j = 0; j < n; ++j) {
        if (std::isnan(cost[j])) throw ValidationError("LP: NaN cost");
        if (std::isnan(lo[j]) || std::isnan(hi[j])) throw ValidationError("LP: NaN bound");
        if (lo[j] > hi[j]) throw ValidationError("LP: inverted bounds");
    }
    for (const auto& e : entries) {
        if (e.row < 0 || e.row >= m || e.col < 0 || e.col >= n)
            throw ValidationError("LP: entry index out of range");
        if (!std::isfinite(e.value)) throw ValidationError("LP: non-finite coefficient");
    }
    for (double b : rhs)
        if (!std::isfinite(b)) throw ValidationError("LP: non-finite rhs");
}

namespace {

constexpr double kPivTol = 1e-10;
constexpr double kTieTol = 1e-9;

struct Simplex {
    const LinearProgram& in;
    const SolveOptions& opts;

    int m = 0, n = 0, N = 0; // rows, structurals, total columns
    std::vector<double> row_scale, col_scale;

    // CSC of every column (structurals, slacks, artificials), scaled
    std::vector<int> col_start, col_ridx;
    std::vector<double> col_val;
    std::vector<double> lob, hib;  // scaled bounds per column
    std::vector<double> cost2;     // scaled phase-2 cost per column
    std::vector<char> artificial;
    std::vector<double> b;         // scaled rhs

    std::vector<double> Binv;      // m*m, column-major
    std::vector<int> basis;        // column index per row
    std::vector<int> basis_pos;    // per column: row position or -1
    std::vector<char> at_upper;    // nonbasic bound flag
    std::vector<double> x;         // nonbasic values (bound values)
    std::vector<double> xB;        // basic values

    std::vector<double> y, w, d_work;
    std::vector<double> refw; // devex reference weights per column
    std::vector<double> rho;  // scratch: leaving row of B^-1
    std::vector<char> banned; // columns refused for numerically tiny pivots
    bool any_banned = false;
    int iterations = 0;
    int max_iter = 0;
    double dtol = 1e-9;
    bool bland = false;
    int degen_streak = 0;
    bool log = false;

    explicit Simplex(const LinearProgram& lp, const SolveOptions& o) : in(lp), opts(o) {}

    bool is_free(int j) const { return std::isinf(lob[j]) && std::isinf(hib[j]); }
    bool is_fixed(int j) const { return lob[j] == hib[j]; }

    void compute_scaling() {
        row_scale.assign(m, 1.0);
        col_scale.assign(n, 1.0);
        for (int pass = 0; pass < 3; ++pass) {
            std::vector<double> rmin(m, 0.0), rmax(m, 0.0), cmin(n, 0.0), cmax(n, 0.0);
            for (const auto& e : in.entries) {
                const double a = std::abs(e.value) * row_scale[e.row] * col_scale[e.col];
                if (a == 0.0) continue;
                if (rmin[e.row] == 0 || a < rmin[e.row]) rmin[e.row] = a;
                if (a > rmax[e.row]) rmax[e.row] = a;
            }
            for (int i = 0; i < m; ++i)
                if (rmax[i] > 0) row_scale[i] /= std::sqrt(rmin[i] * rmax[i]);
            for (const auto& e : in.entries) {
                const double a = std::abs(e.value) * row_scale[e.row] * col_scale[e.col];
                if (a == 0.0) continue;
                if (cmin[e.col] == 0 || a < cmin[e.col]) cmin[e.col] = a;
                if (a > cmax[e.col]) cmax[e.col] = a;
            }
            for (int j = 0; j < n; ++j)
                if (cmax[j] > 0) col_scale[j] /= std::sqrt(cmin[j] * cmax[j]);
        }
        // unclamped equilibration can drift orders of magnitude on structured
        // problems, which silently shrinks reduced costs below the dual
        // tolerance and pivot entries below the pivot tolerance
        auto clamp = [](double& s) { s = std::clamp(s, 1e-4, 1e4); };
        for (double& s : row_scale) clamp(s);
        for (double& s : col_scale) clamp(s);
    }

    void setup() {
        m = in.num_rows();
        n = in.num_vars();
        N = n + m;
        compute_scaling();

        // structural columns, sorted triplets -> CSC with duplicates summed
        std::vector<Triplet> tr(in.entries);
        std::sort(tr.begin(), tr.end(), [](const Triplet& a, const Triplet& b) {
            return a.col != b.col ? a.col < b.col : a.row < b.row;
        });
        col_start.assign(N + 1, 0);
        col_ridx.reserve(tr.size() + m);
        col_val.reserve(tr.size() + m);
        size_t k = 0;
        for (int j = 0; j < n; ++j) {
            col_start[j] = static_cast<int>(col_ridx.size());
            while (k < tr.size() && tr[k].col == j) {
                const int r = tr[k].row;
                double v = 0.0;
                while (k < tr.size() && tr[k].col == j && tr[k].row == r)
                    v += tr[k++].value;
                v *= row_scale[r] * col_scale[j];
                if (v != 0.0) {
                    col_ridx.push_back(r);
                    col_val.push_back(v);
                }
            }
        }
        for (int i = 0; i < m; ++i) { // slack columns
            col_start[n + i] = static_cast<int>(col_ridx.size());
            col_ridx.push_back(i);
            col_val.push_back(1.0);
        }
        col_start[N] = static_cast<int>(col_ridx.size());

        lob.resize(N);
        hib.resize(N);
        cost2.assign(N, 0.0);
        artificial.assign(N, 0);
        for (int j = 0; j < n; ++j) {
            lob[j] = in.lo[j] / col_scale[j];
            hib[j] = in.hi[j] / col_scale[j];
            cost2[j] = in.cost[j] * col_scale[j];
        }
        for (int i = 0; i < m; ++i) {
            const int j = n + i;
            switch (in.senses[i]) {
            case Sense::le: lob[j] = 0.0; hib[j] = kInf; break;
            case Sense::ge: lob[j] = -kInf; hib[j] = 0.0; break;
            case Sense::eq: lob[j] = 0.0; hib[j] = 0.0; break;
            }
        }
        b.resize(m);
        for (int i = 0; i < m; ++i) b[i] = in.rhs[i] * row_scale[i];

        // nonbasic starting point
        x.assign(N, 0.0);
        at_upper.assign(N, 0);
        for (int j = 0; j < N; ++j) {
            if (std::isfinite(lob[j])) {
                x[j] = lob[j];
            } else if (std::isfinite(hib[j])) {
                x[j] = hib[j];
                at_upper[j] = 1;
            } else {
                x[j] = 0.0;
            }
        }

        // residuals with every column nonbasic
        std::vector<double> r(b);
        for (int j = 0; j < N; ++j) {
            if (x[j] == 0.0) continue;
            for (int p = col_start[j]; p < col_start[j + 1]; ++p)
                r[col_ridx[p]] -= col_val[p] * x[j];
        }

        // initial basis: slack where the residual fits its bounds, else an
        // artificial column
        basis.assign(m, -1);
        basis_pos.assign(N, -1);
        xB.assign(m, 0.0);
        Binv.assign(static_cast<size_t>(m) * m, 0.0);
        for (int i = 0; i < m; ++i) {
            const int s = n + i;
            const double want = r[i] + x[s]; // slack value if it were basic
            double diag = 1.0;
            int bcol = s;
            if (want >= lob[s] - 1e-12 && want <= hib[s] + 1e-12) {
                xB[i] = want;
            } else {
                const double resid = r[i];
                const double sign = resid >= 0 ? 1.0 : -1.0;
                bcol = N++;
                col_start.push_back(static_cast<int>(col_ridx.size()) + 1);
                col_ridx.push_back(i);
                col_val.push_back(sign);
                lob.push_back(0.0);
                hib.push_back(kInf);
                cost2.push_back(0.0);
                artificial.push_back(1);
                basis_pos.push_back(-1);
                at_upper.push_back(0);
                x.push_back(0.0);
                xB[i] = std::abs(resid);
                diag = sign;
            }
            basis[i] = bcol;
            basis_pos[bcol] = i;
            Binv[static_cast<size_t>(i) * m + i] = diag;
        }
        y.resize(m);
        w.resize(m);
        rho.resize(m);
        refw.assign(N, 1.0);
        banned.assign(N, 0);
        log = std::getenv("CAPEX_LP_LOG") != nullptr;

        dtol = std::max(opts.tolerance, 1e-11);
        max_iter = opts.max_iterations > 0
                       ? opts.max_iterations
                       : std::min(100000, 5000 + 20 * (m + n));
    }

    // rebuilds B^-1 from scratch; throws if the basis matrix is singular
    void refactorize() {
        // row-major copy of B (column i = basis[i]) so elimination sweeps are
        // contiguous; invert with Gauss-Jordan and transpose into Binv
        std::vector<double> A(static_cast<size_t>(m) * m, 0.0);
        std::vector<double> inv(static_cast<size_t>(m) * m, 0.0);
        for (int i = 0; i < m; ++i) {
            for (int p = col_start[basis[i]]; p < col_start[basis[i] + 1]; ++p)
                A[static_cast<size_t>(col_ridx[p]) * m + i] = col_val[p];
            inv[static_cast<size_t>(i) * m + i] = 1.0;
        }
        for (int c = 0; c < m; ++c) {
            int piv = -1;
            double best = 1e-12;
            for (int r = c; r < m; ++r) {
                const double a = std::abs(A[static_cast<size_t>(r) * m + c]);
                if (a > best) { best = a; piv = r; }
            }
            if (piv < 0) {
                if (log) {
                    std::vector<int> srt(basis);
                    std::sort(srt.begin(), srt.end());
                    const bool dup =
                        std::adjacent_find(srt.begin(), srt.end()) != srt.end();
                    std::fprintf(stderr,
                                 "refactorize: no pivot in column %d of %d, "
                                 "duplicate basis cols: %d\n",
                                 c, m, static_cast<int>(dup));
                }
                throw SolveError("simplex: singular basis matrix");
            }
            if (piv != c) {
                std::swap_ranges(A.begin() + static_cast<size_t>(c) * m,
                                 A.begin() + static_cast<size_t>(c + 1) * m,
                                 A.begin() + static_cast<size_t>(piv) * m);
                std::swap_ranges(inv.begin() + static_cast<size_t>(c) * m,
                                 inv.begin() + static_cast<size_t>(c + 1) * m,
                                 inv.begin() + static_cast<size_t>(piv) * m);
            }
            double* ac = &A[static_cast<size_t>(c) * m];
            double* vc = &inv[static_cast<size_t>(c) * m];
            const double pd = ac[c];
            for (int k = 0; k < m; ++k) { ac[k] /= pd; vc[k] /= pd; }
            for (int r = 0; r < m; ++r) {
                if (r == c) continue;
                double* ar = &A[static_cast<size_t>(r) * m];
                const double f = ar[c];
                if (f == 0.0) continue;
                double* vr = &inv[static_cast<size_t>(r) * m];
                for (int k = c; k < m; ++k) ar[k] -= f * ac[k];
                for (int k = 0; k < m; ++k) vr[k] -= f * vc[k];
            }
        }
        for (int r = 0; r < m; ++r)
            for (int c = 0; c < m; ++c)
                Binv[static_cast<size_t>(c) * m + r] = inv[static_cast<size_t>(r) * m + c];
    }

    // recomputes xB = B^-1 r and returns the relative residual |B xB - r|
    double refresh_basics() {
        std::vector<double> r(b);
        for (int j = 0; j < N; ++j) {
            if (basis_pos[j] >= 0 || x[j] == 0.0) continue;
            for (int p = col_start[j]; p < col_start[j + 1]; ++p)
                r[col_ridx[p]] -= col_val[p] * x[j];
        }
        std::fill(xB.begin(), xB.end(), 0.0);
        for (int kcol = 0; kcol < m; ++kcol) {
            const double rk = r[kcol];
            if (rk == 0.0) continue;
            const double* col = &Binv[static_cast<size_t>(kcol) * m];
            for (int i = 0; i < m; ++i) xB[i] += rk * col[i];
        }
        std::vector<double> chk(r);
        double scale = 1.0;
        for (int i = 0; i < m; ++i) {
            const double v = xB[i];
            scale = std::max(scale, std::abs(v));
            if (v == 0.0) continue;
            for (int p = col_start[basis[i]]; p < col_start[basis[i] + 1]; ++p)
                chk[col_ridx[p]] -= col_val[p] * v;
        }
        double err = 0.0;
        for (int i = 0; i < m; ++i) err = std::max(err, std::abs(chk[i]));
        return err / scale;
    }

    // periodic accuracy maintenance: refresh basics, refactorize when the
    // accumulated product-form error got too large, recompute duals exactly
    void refresh_and_check(const std::vector<double>& costs) {
        const double err = refresh_basics();
        if (log)
            std::fprintf(stderr, "refresh iter %d residual %.3g\n", iterations, err);
        if (err > 1e-9 || std::getenv("CAPEX_LP_FORCE_REFACTOR")) {
            refactorize();
            refresh_basics();
        }
        compute_duals(costs);
        if (any_banned) { // re-admit columns rejected with a stale B^-1
            std::fill(banned.begin(), banned.end(), 0);
            any_banned = false;
        }
    }

    void compute_duals(const std::vector<double>& costs) {
        for (int kcol = 0; kcol < m; ++kcol) {
            const double* col = &Binv[static_cast<size_t>(kcol) * m];
            double acc = 0.0;
            for (int i = 0; i < m; ++i) acc += costs[basis[i]] * col[i];
            y[kcol] = acc;
        }
    }

    double reduced_cost(const std::vector<double>& costs, int j) const {
        double d = costs[j];
        for (int p = col_start[j]; p < col_start[j + 1]; ++p)
            d -= y[col_ridx[p]] * col_val[p];
        return d;
    }

    // returns entering column (devex-priced), its direction and reduced
    // cost, or -1 if optimal for `costs`
    int price(const std::vector<double>& costs, int& dir, double& dq) {
        int best = -1;
        double best_score = 0.0;
        int best_dir = 1;
        double best_d = 0.0;
        for (int j = 0; j < N; ++j) {
            if (basis_pos[j] >= 0 || is_fixed(j) || banned[j]) continue;
            const double d = reduced_cost(costs, j);
            double viol = 0.0;
            int dd = 0;
            if (is_free(j)) {
                if (d < -dtol) { viol = -d; dd = 1; }
                else if (d > dtol) { viol = d; dd = -1; }
            } else if (!at_upper[j]) {
                if (d < -dtol) { viol = -d; dd = 1; }
            } else {
                if (d > dtol) { viol = d; dd = -1; }
            }
            if (dd == 0) continue;
            if (bland) { dir = dd; dq = d; return j; }
            const double score = viol * viol / refw[j];
            if (score > best_score) {
                best_score = score;
                best = j;
                best_dir = dd;
                best_d = d;
            }
        }
        dir = best_dir;
        dq = best_d;
        return best;
    }

    void ftran(int j) {
        std::fill(w.begin(), w.end(), 0.0);
        for (int p = col_start[j]; p < col_start[j + 1]; ++p) {
            const double v = col_val[p];
            const double* col = &Binv[static_cast<size_t>(col_ridx[p]) * m];
            for (int i = 0; i < m; ++i) w[i] += v * col[i];
        }
    }

    void update_inverse(int leave) {
        const double pr = w[leave];
        for (int kcol = 0; kcol < m; ++kcol) {
            double* col = &Binv[static_cast<size_t>(kcol) * m];
            const double piv = col[leave] / pr;
            if (piv == 0.0) continue;
            for (int i = 0; i < m; ++i) col[i] -= w[i] * piv;
            col[leave] = piv;
        }
    }

    // one phase of the bounded simplex; returns true when optimal for the
    // given costs, false on iteration limit. `unbounded` set in phase 2.
    bool run(const std::vector<double>& costs, bool* unbounded) {
        if (unbounded) *unbounded = false;
        int stall_rounds = 0;
        compute_duals(costs);
        while (true) {
            if (iterations >= max_iter) return false;
            int dir = 1;
            double dq = 0.0;
            int enter = price(costs, dir, dq);
            if (enter < 0) {
                // confirm optimality with exact duals (y drifts between
                // refresh points because it is updated incrementally)
                compute_duals(costs);
                enter = price(costs, dir, dq);
                if (enter < 0 && any_banned && stall_rounds < 50) {
                    // re-admit rejected columns against a fresh factorization
                    ++stall_rounds;
                    if (log)
                        std::fprintf(stderr, "stall round %d at iter %d\n",
                                     stall_rounds, iterations);
                    refactorize();
                    refresh_basics();
                    compute_duals(costs);
                    std::fill(banned.begin(), banned.end(), 0);
                    any_banned = false;
                    enter = price(costs, dir, dq);
                }
                if (enter < 0) return true;
            }
            ftran(enter);

            // two-pass Harris ratio test over x_B - t * dir * w: pass 1 finds
            // the step limit with bounds relaxed by a feasibility tolerance,
            // pass 2 picks the largest pivot among rows blocking within that
            // limit. A pivot that is too small would make the basis matrix
            // numerically singular, so the tolerance is escalated until the
            // chosen pivot is acceptably large.
            double t_flip = kInf; // entering variable hits its other bound
            if (std::isfinite(lob[enter]) && std::isfinite(hib[enter]))
                t_flip = hib[enter] - lob[enter];
            // pivot acceptability is judged relative to the column's largest
            // transformed entry so badly scaled columns are not rejected
            double wmax = 0.0;
            for (int i = 0; i < m; ++i) wmax = std::max(wmax, std::abs(w[i]));
            const double piv_tol = kPivTol * std::max(1.0, wmax);
            int leave = -1;
            double best_piv = 0.0;
            double t_best = t_flip;
            bool ray = false;
            for (double feas_eps = 1e-9; feas_eps <= 1.1e-5; feas_eps *= 100.0) {
                double t_max = t_flip;
                for (int i = 0; i < m; ++i) {
                    const double gi = dir * w[i];
                    if (std::abs(gi) <= piv_tol) continue;
                    const int bj = basis[i];
                    double lim;
                    if (gi > 0) {
                        if (!std::isfinite(lob[bj])) continue;
                        lim = (xB[i] - lob[bj] + feas_eps) / gi;
                    } else {
                        if (!std::isfinite(hib[bj])) continue;
                        lim = (xB[i] - hib[bj] - feas_eps) / gi;
                    }
                    if (lim < t_max) t_max = lim;
                }
                if (!std::isfinite(t_max)) {
                    ray = true;
                    break;
                }
                leave = -1;
                best_piv = 0.0;
                t_best = t_flip;
                for (int i = 0; i < m; ++i) {
                    const double gi = dir * w[i];
                    if (std::abs(gi) <= piv_tol) continue;
                    const int bj = basis[i];
                    double lim;
                    if (gi > 0) {
                        if (!std::isfinite(lob[bj])) continue;
                        lim = (xB[i] - lob[bj]) / gi;
                    } else {
                        if (!std::isfinite(hib[bj])) continue;
                        lim = (xB[i] - hib[bj]) / gi;
                    }
                    if (lim > t_max + kTieTol) continue;
                    if (std::abs(gi) > best_piv) {
                        best_piv = std::abs(gi);
                        leave = i;
                        t_best = std::max(0.0, lim);
                    }
                }
                if (leave < 0 || best_piv >= 1e-5 * std::max(1.0, wmax)) break;
            }
            if (ray) {
                if (unbounded) *unbounded = true;
                return true;
            }
            if (leave < 0) t_best = t_flip;
            if (leave >= 0 && best_piv < 1e-7 * std::max(1.0, wmax)) {
                // the entering column is numerically dependent on the basis;
                // pivoting here would make B^-1 meaningless
                banned[enter] = 1;
                any_banned = true;
                if (log)
                    std::fprintf(stderr, "iter %d ban col %d piv %.3g dq %.3g\n",
                                 iterations, enter, best_piv, dq);
                ++iterations;
                continue;
            }

            ++iterations;
            const double t = t_best;
            for (int i = 0; i < m; ++i) xB[i] -= dir * w[i] * t;

            if (leave < 0) { // bound flip: basis, B^-1 and duals unchanged
                x[enter] = dir > 0 ? hib[enter] : lob[enter];
                at_upper[enter] = dir > 0;
            } else {
                const int lcol = basis[leave];
                const double entering_value = x[enter] + dir * t;
                if (dir * w[leave] > 0) {
                    x[lcol] = lob[lcol];
                    at_upper[lcol] = 0;
                } else {
                    x[lcol] = hib[lcol];
                    at_upper[lcol] = 1;
                }

                // rho = leaving row of the current B^-1, needed for both the
                // O(m) dual update and the devex weight update
                const double aq = w[leave];
                for (int k = 0; k < m; ++k)
                    rho[k] = Binv[static_cast<size_t>(k) * m + leave];
                const double mu = dq / aq;
                for (int k = 0; k < m; ++k) y[k] += mu * rho[k];

                const double gq = std::max(refw[enter], 1.0);
                if (gq > 1e10) { // start a fresh devex reference framework
                    std::fill(refw.begin(), refw.end(), 1.0);
                } else {
                    for (int j = 0; j < N; ++j) {
                        if (basis_pos[j] >= 0 || j == enter || is_fixed(j)) continue;
                        double alpha = 0.0;
                        for (int p = col_start[j]; p < col_start[j + 1]; ++p)
                            alpha += rho[col_ridx[p]] * col_val[p];
                        if (alpha == 0.0) continue;
                        const double cand = (alpha / aq) * (alpha / aq) * gq;
                        if (cand > refw[j]) refw[j] = cand;
                    }
                    refw[lcol] = std::max(gq / (aq * aq), 1.0);
                }

                basis_pos[lcol] = -1;
                basis[leave] = enter;
                basis_pos[enter] = leave;
                update_inverse(leave);
                xB[leave] = entering_value;
            }

            if (t <= 1e-10) {
                if (++degen_streak > 150) bland = true;
            } else {
                degen_streak = 0;
                bland = false;
            }
            if (iterations % 256 == 0) refresh_and_check(costs);
            if (log && iterations % 1000 == 0) {
                double obj = 0.0;
                for (int i = 0; i < m; ++i) obj += costs[basis[i]] * xB[i];
                std::fprintf(stderr, "lp iter %d obj %.6g bland %d\n", iterations,
                             obj, static_cast<int>(bland));
            }
        }
    }

    Solution solve() {
        Solution sol;
        setup();

        const bool has_artificial = N > n + m;

        if (has_artificial) {
            std::vector<double> c1(N, 0.0);
            for (int j = 0; j < N; ++j)
                if (artificial[j]) c1[j] = 1.0;
            bool unb = false;
            if (!run(c1, &unb)) {
                sol.status = Status::iteration_limit;
                sol.iterations = iterations;
                sol.message = "iteration limit in phase 1";
                return sol;
            }
            if (refresh_basics() > 1e-9) {
                refactorize();
                refresh_basics();
            }
            double infeas = 0.0;
            for (int i = 0; i < m; ++i)
                if (artificial[basis[i]]) infeas += std::abs(xB[i]);
            for (int j = 0; j < N; ++j)
                if (artificial[j] && basis_pos[j] < 0) infeas += std::abs(x[j]);
            double bscale = 1.0;
            for (int i = 0; i < m; ++i) bscale = std::max(bscale, std::abs(b[i]));
            if (infeas > 1e-7 * bscale) {
                sol.status = Status::infeasible;
                sol.iterations = iterations;
                return sol;
            }
            for (int j = 0; j < N; ++j) {
                if (!artificial[j]) continue;
                lob[j] = 0.0;
                hib[j] = 0.0;
                if (basis_pos[j] < 0) x[j] = 0.0;
            }
            std::fill(refw.begin(), refw.end(), 1.0);
            degen_streak = 0;
            bland = false;
        }

        bool unbounded = false;
        if (!run(cost2, &unbounded)) {
            sol.status = Status::iteration_limit;
            sol.iterations = iterations;
            sol.message = "iteration limit in phase 2";
            return sol;
        }
        if (unbounded) {
            sol.status = Status::unbounded;
            sol.iterations = iterations;
            return sol;
        }
        if (refresh_basics() > 1e-11) {
            refactorize();
            refresh_basics();
        }

        sol.status = Status::optimal;
        sol.iterations = iterations;
        sol.x.assign(n, 0.0);
        for (int j = 0; j < n; ++j) {
            const double v = basis_pos[j] >= 0 ? xB[basis_pos[j]] : x[j];
            sol.x[j] = v * col_scale[j];
            // snap to original bounds against scaling roundoff
            if (sol.x[j] < in.lo[j]) sol.x[j] = in.lo[j];
            if (sol.x[j] > in.hi[j]) sol.x[j] = in.hi[j];
        }
        double obj = in.objective_offset;
        for (int j = 0; j < n; ++j) obj += in.cost[j] * sol.x[j];
        sol.objective = obj;
        if (opts.want_duals) {
            compute_duals(cost2);
            sol.duals.assign(m, 0.0);
            for (int i = 0; i < m; ++i) sol.duals[i] = y[i] * row_scale[i];
        }
        return sol;
    }
};

} // namespace

Solution solve(const LinearProgram& lp, const SolveOptions& opts) {
    lp.check();
    if (lp.num_vars() == 0) {
        Solution sol;
        sol.status = lp.num_rows() == 0 ? Status::optimal : Status::infeasible;
        for (int i = 0; i < lp.num_rows(); ++i) {
            const double b = lp.rhs[i];
            const bool ok = (lp.senses[i] == Sense::le && b >= 0) ||
                            (lp.senses[i] == Sense::ge && b <= 0) ||
                            (lp.senses[i] == Sense::eq && b == 0);
            if (!ok) return sol;
        }
        sol.status = Status::optimal;
        sol.objective = lp.objective_offset;
        sol.duals.assign(lp.num_rows(), 0.0);
        return sol;
    }
    Simplex s(lp, opts);
    return s.solve();
}

} // namespace capex::lp
