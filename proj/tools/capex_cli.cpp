// capex: capacity expansion planning CLI.
#include "capex/capex_c.h"

#include "CLI11.hpp"

#include <cstdio>
#include <cstdlib>
#include <string>
#include <vector>

namespace {

int exit_code(capex_status rc) {
    switch (rc) {
    case CAPEX_OK: return 0;
    case CAPEX_ERR_VALIDATION: return 2;
    case CAPEX_ERR_IO: return 2;
    case CAPEX_ERR_INVALID_ARG: return 2;
    case CAPEX_ERR_SOLVE: return 3;
    case CAPEX_ERR_PARTIAL: return 4;
    }
    return 1;
}

int report(capex_status rc) {
    if (rc != CAPEX_OK) std::fprintf(stderr, "error: %s\n", capex_last_error());
    return exit_code(rc);
}

struct SystemArgs {
    std::string config;
    int synthetic_years = 0;
    std::uint64_t seed = 1;
    int hours = 8760;

    void attach(CLI::App* cmd) {
        auto* cfg = cmd->add_option("--config", config,
                                    "system config file (env: CAPEX_CONFIG)")
                        ->envname("CAPEX_CONFIG");
        auto* synth = cmd->add_option("--synthetic-years", synthetic_years,
                                      "generate N synthetic weather/load years");
        cmd->add_option("--seed", seed, "synthetic data seed");
        cmd->add_option("--hours", hours, "hours per synthetic year");
        cfg->excludes(synth);
    }

    capex_status open(capex_system** out) const {
        if (!config.empty()) return capex_system_load(config.c_str(), out);
        if (synthetic_years > 0)
            return capex_system_generate(synthetic_years, seed, hours, out);
        std::fprintf(stderr, "error: give --config or --synthetic-years\n");
        return CAPEX_ERR_INVALID_ARG;
    }
};

bool parse_co2(const std::string& s, capex_run_options& opts) {
    if (s.empty()) {
        opts.co2_kind = CAPEX_CO2_FROM_CONFIG;
        return true;
    }
    if (s == "none") {
        opts.co2_kind = CAPEX_CO2_NONE;
        return true;
    }
    const auto eq = s.find('=');
    if (eq == std::string::npos) return false;
    const std::string kind = s.substr(0, eq);
    try {
        opts.co2_value = std::stod(s.substr(eq + 1));
    } catch (const std::exception&) {
        return false;
    }
    if (kind == "total") opts.co2_kind = CAPEX_CO2_TOTAL;
    else if (kind == "intensity") opts.co2_kind = CAPEX_CO2_INTENSITY;
    else return false;
    return true;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"capacity expansion planning engine"};
    app.require_subcommand(1);

    // validate ---------------------------------------------------------------
    auto* validate = app.add_subcommand("validate", "load and check a dataset");
    SystemArgs validate_sys;
    validate_sys.attach(validate);

    // generate ---------------------------------------------------------------
    auto* generate =
        app.add_subcommand("generate", "write a synthetic dataset to a directory");
    int gen_years = 11;
    std::uint64_t gen_seed = 1;
    int gen_hours = 8760;
    std::string gen_out;
    generate->add_option("--years", gen_years, "number of weather/load years");
    generate->add_option("--seed", gen_seed, "rng seed");
    generate->add_option("--hours", gen_hours, "hours per year");
    generate->add_option("--out", gen_out, "output directory")->required();

    // run ---------------------------------------------------------------------
    auto* run = app.add_subcommand("run", "solve one planning case");
    SystemArgs run_sys;
    run_sys.attach(run);
    std::string run_year, run_co2, run_out, run_mps;
    bool run_all_years = false;
    double run_tol = 0.0;
    int run_iters = 0;
    auto* year_opt = run->add_option("--year", run_year, "plan for this single year");
    auto* all_opt =
        run->add_flag("--all-years", run_all_years, "multi-year stochastic plan");
    year_opt->excludes(all_opt);
    run->add_option("--co2", run_co2, "none | total=TONNES | intensity=G_PER_KWH");
    run->add_option("--out", run_out, "results directory");
    run->add_option("--export-mps", run_mps, "write the LP as MPS and stop");
    run->add_option("--tolerance", run_tol, "solver tolerance");
    run->add_option("--max-iterations", run_iters, "solver iteration limit");

    // study --------------------------------------------------------------------
    auto* study = app.add_subcommand("study", "run a batch study");
    SystemArgs study_sys;
    study_sys.attach(study);
    std::string study_kind, study_out;
    int study_jobs = 1;
    double study_tol = 0.0;
    int study_iters = 0;
    std::vector<double> study_fracs, study_durs, study_caps;
    study->add_option("--study", study_kind, "co2 | duration | years")->required();
    study->add_option("--out", study_out, "results directory")->required();
    study->add_option("--jobs", study_jobs, "parallel cases");
    study->add_option("--cap-fractions", study_fracs, "co2 sweep cap fractions");
    study->add_option("--durations", study_durs, "duration sweep hours");
    study->add_option("--capacities-gwh", study_caps, "duration sweep energies (GWh)");
    study->add_option("--tolerance", study_tol, "solver tolerance");
    study->add_option("--max-iterations", study_iters, "solver iteration limit");

    CLI11_PARSE(app, argc, argv);

    if (validate->parsed()) {
        capex_system* sys = nullptr;
        const capex_status rc = validate_sys.open(&sys);
        if (rc != CAPEX_OK) return report(rc);
        char buf[8192];
        capex_system_summary(sys, buf, sizeof buf);
        std::fputs(buf, stdout);
        capex_system_free(sys);
        return 0;
    }

    if (generate->parsed()) {
        capex_system* sys = nullptr;
        capex_status rc = capex_system_generate(gen_years, gen_seed, gen_hours, &sys);
        if (rc != CAPEX_OK) return report(rc);
        rc = capex_system_write(sys, gen_out.c_str());
        capex_system_free(sys);
        if (rc == CAPEX_OK)
            std::printf("wrote %d-year dataset to %s\n", gen_years, gen_out.c_str());
        return report(rc);
    }

    if (run->parsed()) {
        capex_run_options opts{};
        opts.year = run_year.empty() ? nullptr : run_year.c_str();
        opts.tolerance = run_tol;
        opts.max_iterations = run_iters;
        if (!parse_co2(run_co2, opts)) {
            std::fprintf(stderr, "error: bad --co2 value '%s'\n", run_co2.c_str());
            return 2;
        }
        capex_system* sys = nullptr;
        capex_status rc = run_sys.open(&sys);
        if (rc != CAPEX_OK) return report(rc);
        if (!run_mps.empty()) {
            rc = capex_export_mps(sys, &opts, run_mps.c_str());
            capex_system_free(sys);
            if (rc == CAPEX_OK) std::printf("wrote %s\n", run_mps.c_str());
            return report(rc);
        }
        if (run_out.empty()) {
            std::fprintf(stderr, "error: --out is required unless --export-mps\n");
            capex_system_free(sys);
            return 2;
        }
        rc = capex_run_case(sys, &opts, run_out.c_str());
        capex_system_free(sys);
        if (rc == CAPEX_OK) std::printf("results in %s\n", run_out.c_str());
        return report(rc);
    }

    // study
    capex_study_options opts{};
    if (study_kind == "co2") opts.kind = CAPEX_STUDY_CO2;
    else if (study_kind == "duration") opts.kind = CAPEX_STUDY_DURATION;
    else if (study_kind == "years") opts.kind = CAPEX_STUDY_YEARS;
    else {
        std::fprintf(stderr, "error: bad --study value '%s'\n", study_kind.c_str());
        return 2;
    }
    opts.jobs = study_jobs;
    opts.tolerance = study_tol;
    opts.max_iterations = study_iters;
    if (!study_fracs.empty()) {
        opts.cap_fractions = study_fracs.data();
        opts.num_cap_fractions = study_fracs.size();
    }
    if (!study_durs.empty()) {
        opts.durations_h = study_durs.data();
        opts.num_durations = study_durs.size();
    }
    if (!study_caps.empty()) {
        opts.capacities_gwh = study_caps.data();
        opts.num_capacities = study_caps.size();
    }
    capex_system* sys = nullptr;
    capex_status rc = study_sys.open(&sys);
    if (rc != CAPEX_OK) return report(rc);
    rc = capex_run_study(sys, &opts, study_out.c_str());
    capex_system_free(sys);
    if (rc == CAPEX_OK) std::printf("study results in %s\n", study_out.c_str());
    return report(rc);
}
