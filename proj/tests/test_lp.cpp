#include "doctest.h"

#include "capex/lp.hpp"
#include "capex/mps.hpp"
#include "capex/types.hpp"
#include "lp_oracle.hpp"

#include <cmath>
#include <cstdio>
#include <filesystem>
#include <random>

using namespace capex;

namespace {

lp::LinearProgram random_lp(std::mt19937_64& rng) {
    std::uniform_int_distribution<int> nd(1, 8);
    std::uniform_int_distribution<int> coef(-5, 5);
    std::uniform_int_distribution<int> rhs(-10, 20);
    std::uniform_int_distribution<int> cost(-10, 10);
    std::uniform_real_distribution<double> u(0.0, 1.0);

    lp::LinearProgram p;
    const int n = nd(rng);
    std::uniform_int_distribution<int> md(1, std::min(8, n + 2));
    const int m = md(rng);
    for (int j = 0; j < n; ++j) {
        double hi = lp::kInf;
        if (u(rng) < 0.3) hi = 1 + 9 * u(rng);
        p.add_var(cost(rng), 0.0, hi);
    }
    for (int i = 0; i < m; ++i) {
        const double r = u(rng);
        const lp::Sense s = r < 0.6   ? lp::Sense::le
                            : r < 0.9 ? lp::Sense::ge
                                      : lp::Sense::eq;
        p.add_row(s, rhs(rng));
        int nnz = 0;
        for (int j = 0; j < n; ++j) {
            if (u(rng) > 0.6) continue;
            const int v = coef(rng);
            if (v == 0) continue;
            p.add_entry(i, j, v);
            ++nnz;
        }
        if (nnz == 0) p.add_entry(i, static_cast<int>(u(rng) * n) % n, 1 + coef(rng) % 3);
    }
    return p;
}

} // namespace

TEST_CASE("hand-built LPs") {
    SUBCASE("simple bounded minimum") {
        lp::LinearProgram p;
        p.add_var(-1.0, 0.0, lp::kInf); // max x s.t. x <= 4
        const int r = p.add_row(lp::Sense::le, 4.0);
        p.add_entry(r, 0, 1.0);
        const auto sol = lp::solve(p);
        REQUIRE(sol.status == lp::Status::optimal);
        CHECK(sol.objective == doctest::Approx(-4.0));
        CHECK(sol.x[0] == doctest::Approx(4.0));
    }
    SUBCASE("two variables with equality") {
        // min 2x + 3y  s.t. x + y = 10, x <= 6
        lp::LinearProgram p;
        p.add_var(2.0, 0.0, 6.0);
        p.add_var(3.0, 0.0, lp::kInf);
        const int r = p.add_row(lp::Sense::eq, 10.0);
        p.add_entry(r, 0, 1.0);
        p.add_entry(r, 1, 1.0);
        const auto sol = lp::solve(p);
        REQUIRE(sol.status == lp::Status::optimal);
        CHECK(sol.objective == doctest::Approx(2 * 6 + 3 * 4));
    }
    SUBCASE("infeasible") {
        lp::LinearProgram p;
        p.add_var(1.0, 0.0, 1.0);
        const int r = p.add_row(lp::Sense::ge, 5.0);
        p.add_entry(r, 0, 1.0);
        CHECK(lp::solve(p).status == lp::Status::infeasible);
    }
    SUBCASE("unbounded") {
        lp::LinearProgram p;
        p.add_var(-1.0, 0.0, lp::kInf);
        const auto sol = lp::solve(p);
        CHECK(sol.status == lp::Status::unbounded);
    }
    SUBCASE("negative lower bounds and offset") {
        // min x, x >= -3, plus constant 7
        lp::LinearProgram p;
        p.add_var(1.0, -3.0, 5.0);
        p.objective_offset = 7.0;
        const auto sol = lp::solve(p);
        REQUIRE(sol.status == lp::Status::optimal);
        CHECK(sol.objective == doctest::Approx(4.0));
    }
    SUBCASE("free variable via equality") {
        // min x + y s.t. x - y = 2, y in [-inf, inf) handled as two rows
        lp::LinearProgram p;
        p.add_var(1.0, -lp::kInf, lp::kInf);
        p.add_var(1.0, 0.0, lp::kInf);
        const int r = p.add_row(lp::Sense::eq, 2.0);
        p.add_entry(r, 0, 1.0);
        p.add_entry(r, 1, -1.0);
        const auto sol = lp::solve(p); // x = 2 + y, obj = 2 + 2y -> y = 0
        REQUIRE(sol.status == lp::Status::optimal);
        CHECK(sol.objective == doctest::Approx(2.0));
    }
    SUBCASE("degenerate ties") {
        lp::LinearProgram p;
        for (int j = 0; j < 3; ++j) p.add_var(-1.0, 0.0, lp::kInf);
        for (int i = 0; i < 3; ++i) {
            const int r = p.add_row(lp::Sense::le, 0.0);
            for (int j = 0; j < 3; ++j) p.add_entry(r, j, i == j ? 1.0 : 0.5);
        }
        const auto sol = lp::solve(p);
        REQUIRE(sol.status == lp::Status::optimal);
        CHECK(sol.objective == doctest::Approx(0.0));
    }
}

TEST_CASE("duals of a tight constraint") {
    // min 3x s.t. x >= 2  -> dual of the row is 3
    lp::LinearProgram p;
    p.add_var(3.0, 0.0, lp::kInf);
    const int r = p.add_row(lp::Sense::ge, 2.0);
    p.add_entry(r, 0, 1.0);
    const auto sol = lp::solve(p);
    REQUIRE(sol.status == lp::Status::optimal);
    REQUIRE(sol.duals.size() == 1);
    CHECK(sol.duals[0] == doctest::Approx(3.0));
}

TEST_CASE("random LPs match the vertex-enumeration oracle") {
    std::mt19937_64 rng(20240817);
    int optimal = 0, infeasible = 0, unbounded = 0;
    for (int trial = 0; trial < 200; ++trial) {
        const lp::LinearProgram p = random_lp(rng);
        const auto ref = oracle::solve(p);
        const auto got = lp::solve(p);
        CAPTURE(trial);
        REQUIRE(got.status == ref.status);
        if (ref.status == lp::Status::optimal) {
            ++optimal;
            const double scale = std::max(1.0, std::abs(ref.objective));
            CHECK(std::abs(got.objective - ref.objective) <= 1e-6 * scale);
        } else if (ref.status == lp::Status::infeasible) {
            ++infeasible;
        } else {
            ++unbounded;
        }
    }
    // the generator must exercise all three outcomes
    CHECK(optimal > 50);
    CHECK(infeasible > 5);
    CHECK(unbounded > 5);
}

TEST_CASE("solution feasibility on random instances") {
    std::mt19937_64 rng(7);
    for (int trial = 0; trial < 100; ++trial) {
        const lp::LinearProgram p = random_lp(rng);
        const auto sol = lp::solve(p);
        if (sol.status != lp::Status::optimal) continue;
        std::vector<double> ax(p.num_rows(), 0.0);
        for (const auto& e : p.entries) ax[e.row] += e.value * sol.x[e.col];
        for (int i = 0; i < p.num_rows(); ++i) {
            const double tol = 1e-6 * std::max(1.0, std::abs(p.rhs[i]));
            CAPTURE(trial);
            if (p.senses[i] == lp::Sense::le) CHECK(ax[i] <= p.rhs[i] + tol);
            if (p.senses[i] == lp::Sense::ge) CHECK(ax[i] >= p.rhs[i] - tol);
            if (p.senses[i] == lp::Sense::eq)
                CHECK(std::abs(ax[i] - p.rhs[i]) <= tol);
        }
        for (int j = 0; j < p.num_vars(); ++j) {
            CHECK(sol.x[j] >= p.lo[j] - 1e-9);
            CHECK(sol.x[j] <= p.hi[j] + 1e-9);
        }
    }
}

TEST_CASE("mps round trip") {
    std::mt19937_64 rng(99);
    const auto dir = std::filesystem::temp_directory_path() / "capex_mps_test";
    std::filesystem::create_directories(dir);
    for (int trial = 0; trial < 20; ++trial) {
        lp::LinearProgram p = random_lp(rng);
        p.objective_offset = trial * 0.125;
        std::vector<std::string> names;
        for (int j = 0; j < p.num_vars(); ++j) names.push_back("X" + std::to_string(j));
        const auto path = dir / ("t" + std::to_string(trial) + ".mps");
        lp::export_mps(p, names, path, "RND");
        const auto back = lp::import_mps(path);
        REQUIRE(back.var_names == names);
        const auto a = lp::solve(p);
        const auto b = lp::solve(back.lp);
        REQUIRE(a.status == b.status);
        if (a.status == lp::Status::optimal)
            CHECK(a.objective == doctest::Approx(b.objective).epsilon(1e-12));
    }
    std::filesystem::remove_all(dir);
}

TEST_CASE("mps error handling") {
    const auto dir = std::filesystem::temp_directory_path() / "capex_mps_err";
    std::filesystem::create_directories(dir);
    SUBCASE("no columns") {
        lp::LinearProgram p;
        CHECK_THROWS_AS(lp::export_mps(p, {}, dir / "x.mps", "X"), ValidationError);
    }
    SUBCASE("duplicate names") {
        lp::LinearProgram p;
        p.add_var(1.0);
        p.add_var(1.0);
        CHECK_THROWS_AS(lp::export_mps(p, {"A", "A"}, dir / "x.mps", "X"),
                        ValidationError);
    }
    SUBCASE("unknown section") {
        const auto path = dir / "bad.mps";
        {
            std::FILE* f = std::fopen(path.c_str(), "w");
            std::fputs("NAME x\nROWS\n N  COST\nGARBAGE\nENDATA\n", f);
            std::fclose(f);
        }
        CHECK_THROWS_WITH_AS(lp::import_mps(path),
                             doctest::Contains("unknown section"), IoError);
    }
    SUBCASE("malformed sense") {
        const auto path = dir / "bad2.mps";
        {
            std::FILE* f = std::fopen(path.c_str(), "w");
            std::fputs("NAME x\nROWS\n N  COST\n Q  R1\nENDATA\n", f);
            std::fclose(f);
        }
        CHECK_THROWS_WITH_AS(lp::import_mps(path),
                             doctest::Contains("malformed row sense"), IoError);
    }
    std::filesystem::remove_all(dir);
}

TEST_CASE("empty problem") {
    lp::LinearProgram p;
    const auto sol = lp::solve(p);
    CHECK(sol.status == lp::Status::optimal);
    CHECK(sol.objective == 0.0);
}

TEST_CASE("solver determinism") {
    std::mt19937_64 rng(123);
    const lp::LinearProgram p = random_lp(rng);
    const auto a = lp::solve(p);
    const auto b = lp::solve(p);
    CHECK(a.status == b.status);
    CHECK(a.objective == b.objective);
    CHECK(a.x == b.x);
    CHECK(a.iterations == b.iterations);
}
