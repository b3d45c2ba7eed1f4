#include "capex/capex_c.h"

#include "capex/config.hpp"
#include "capex/model.hpp"
#include "capex/mps.hpp"
#include "capex/scenario.hpp"
#include "capex/synth.hpp"

#include <cstdio>
#include <cstring>
#include <filesystem>
#include <functional>
#include <string>

struct capex_system {
    capex::SystemSpec spec;
};

namespace {

thread_local std::string g_last_error;

capex_status fail(capex_status code, const std::string& msg) {
    g_last_error = msg;
    return code;
}

capex_status guard(const std::function<void()>& body) {
    try {
        body();
        g_last_error.clear();
        return CAPEX_OK;
    } catch (const capex::ValidationError& e) {
        return fail(CAPEX_ERR_VALIDATION, e.what());
    } catch (const capex::PartialStudyError& e) {
        return fail(CAPEX_ERR_PARTIAL, e.what());
    } catch (const capex::SolveError& e) {
        return fail(CAPEX_ERR_SOLVE, e.what());
    } catch (const capex::IoError& e) {
        return fail(CAPEX_ERR_IO, e.what());
    } catch (const std::exception& e) {
        return fail(CAPEX_ERR_SOLVE, e.what());
    }
}

capex_status copy_out(const std::string& s, char* buf, size_t len) {
    if (!buf || len == 0) return fail(CAPEX_ERR_INVALID_ARG, "null/empty buffer");
    const size_t n = std::min(len - 1, s.size());
    std::memcpy(buf, s.data(), n);
    buf[n] = '\0';
    return CAPEX_OK;
}

// spec copy with the run options' CO2 override applied
capex::SystemSpec spec_for_run(const capex_system* sys, const capex_run_options* opts) {
    capex::SystemSpec spec = sys->spec;
    if (opts) {
        switch (opts->co2_kind) {
        case CAPEX_CO2_FROM_CONFIG: break;
        case CAPEX_CO2_NONE: spec.co2 = {}; break;
        case CAPEX_CO2_TOTAL:
            spec.co2 = {capex::Co2Policy::Kind::total_cap, opts->co2_value};
            break;
        case CAPEX_CO2_INTENSITY:
            spec.co2 = {capex::Co2Policy::Kind::intensity_cap, opts->co2_value};
            break;
        }
    }
    return spec;
}

std::vector<std::string> years_for_run(const capex::SystemSpec& spec,
                                       const capex_run_options* opts) {
    if (opts && opts->year) return {opts->year};
    std::vector<std::string> all;
    for (const auto& y : spec.years) all.push_back(y.label);
    return all;
}

capex::lp::SolveOptions solver_for_run(const capex_run_options* opts) {
    capex::lp::SolveOptions s;
    if (opts) {
        if (opts->tolerance > 0) s.tolerance = opts->tolerance;
        if (opts->max_iterations > 0) s.max_iterations = opts->max_iterations;
    }
    return s;
}

} // namespace

extern "C" {

const char* capex_last_error(void) { return g_last_error.c_str(); }

const char* capex_version(void) { return "1.0.0"; }

capex_status capex_system_load(const char* config_path, capex_system** out) {
    if (!config_path || !out) return fail(CAPEX_ERR_INVALID_ARG, "null argument");
    *out = nullptr;
    return guard([&] { *out = new capex_system{capex::load_system(config_path)}; });
}

capex_status capex_system_generate(int years, uint64_t seed, int hours,
                                   capex_system** out) {
    if (!out) return fail(CAPEX_ERR_INVALID_ARG, "null output pointer");
    if (years < 1 || hours < 1)
        return fail(CAPEX_ERR_INVALID_ARG, "years and hours must be >= 1");
    *out = nullptr;
    return guard(
        [&] { *out = new capex_system{capex::default_system(years, seed, hours)}; });
}

capex_status capex_system_write(const capex_system* sys, const char* dir) {
    if (!sys || !dir) return fail(CAPEX_ERR_INVALID_ARG, "null argument");
    return guard([&] { capex::save_system(sys->spec, dir); });
}

void capex_system_free(capex_system* sys) { delete sys; }

int capex_system_tech_count(const capex_system* sys) {
    return sys ? static_cast<int>(sys->spec.technologies.size()) : 0;
}

int capex_system_year_count(const capex_system* sys) {
    return sys ? static_cast<int>(sys->spec.years.size()) : 0;
}

capex_status capex_system_summary(const capex_system* sys, char* buf, size_t len) {
    if (!sys) return fail(CAPEX_ERR_INVALID_ARG, "null system");
    std::string s;
    char line[256];
    std::snprintf(line, sizeof line, "%d technologies, %d demand years, %d hours\n",
                  capex_system_tech_count(sys), capex_system_year_count(sys),
                  sys->spec.hours);
    s += line;
    std::snprintf(line, sizeof line, "%-16s %-16s %10s %10s\n", "technology", "class",
                  "existing", "investable");
    s += line;
    for (const auto& t : sys->spec.technologies) {
        std::snprintf(line, sizeof line, "%-16s %-16s %10.1f %10s\n", t.name.c_str(),
                      capex::tech_class_name(t.tech_class).c_str(), t.existing_capacity,
                      t.investable ? "yes" : "no");
        s += line;
    }
    return copy_out(s, buf, len);
}

capex_status capex_system_hash(const capex_system* sys, char* buf, size_t len) {
    if (!sys) return fail(CAPEX_ERR_INVALID_ARG, "null system");
    std::string h;
    const capex_status rc = guard([&] { h = capex::spec_hash(sys->spec); });
    if (rc != CAPEX_OK) return rc;
    return copy_out(h, buf, len);
}

capex_status capex_run_case(const capex_system* sys, const capex_run_options* opts,
                            const char* out_dir) {
    if (!sys || !out_dir) return fail(CAPEX_ERR_INVALID_ARG, "null argument");
    return guard([&] {
        const capex::SystemSpec spec = spec_for_run(sys, opts);
        const auto years = years_for_run(spec, opts);
        const capex::PlanSolution sol =
            capex::solve_plan(spec, years, {}, solver_for_run(opts));
        const std::string id = years.size() == 1 ? "year_" + years[0] : "multi";
        const capex::ScenarioResult r = capex::summarize_case(id, spec, sol);

        const std::filesystem::path dir(out_dir);
        std::filesystem::create_directories(dir);
        capex::write_file_atomic(dir / "result.json", capex::to_json(r));
        capex::write_file_atomic(dir / "summary.csv", capex::summary_csv({r}, spec));
    });
}

capex_status capex_export_mps(const capex_system* sys, const capex_run_options* opts,
                              const char* path) {
    if (!sys || !path) return fail(CAPEX_ERR_INVALID_ARG, "null argument");
    return guard([&] {
        const capex::SystemSpec spec = spec_for_run(sys, opts);
        const auto years = years_for_run(spec, opts);
        const capex::ModelArtifacts model = years.size() == 1
                                                ? capex::build_single_year(spec, years[0])
                                                : capex::build_multi_year(spec, years);
        capex::lp::export_mps(model.lp, capex::variable_names(model, spec), path,
                              "capex");
    });
}

capex_status capex_run_study(const capex_system* sys, const capex_study_options* opts,
                             const char* out_dir) {
    if (!sys || !opts || !out_dir) return fail(CAPEX_ERR_INVALID_ARG, "null argument");
    return guard([&] {
        capex::StudyPlan plan;
        plan.spec = sys->spec;
        switch (opts->kind) {
        case CAPEX_STUDY_CO2: plan.kind = capex::StudyPlan::Kind::co2_sweep; break;
        case CAPEX_STUDY_DURATION:
            plan.kind = capex::StudyPlan::Kind::duration_sweep;
            break;
        case CAPEX_STUDY_YEARS: plan.kind = capex::StudyPlan::Kind::year_study; break;
        default: throw capex::ValidationError("unknown study kind");
        }
        if (opts->cap_fractions)
            plan.cap_fractions.assign(opts->cap_fractions,
                                      opts->cap_fractions + opts->num_cap_fractions);
        if (opts->durations_h)
            plan.durations_h.assign(opts->durations_h,
                                    opts->durations_h + opts->num_durations);
        if (opts->capacities_gwh) {
            plan.energy_capacities_mwh.clear();
            for (size_t i = 0; i < opts->num_capacities; ++i)
                plan.energy_capacities_mwh.push_back(opts->capacities_gwh[i] * 1000.0);
        }
        plan.jobs = opts->jobs > 0 ? opts->jobs : 1;
        if (opts->tolerance > 0) plan.solver.tolerance = opts->tolerance;
        if (opts->max_iterations > 0) plan.solver.max_iterations = opts->max_iterations;
        plan.out_dir = out_dir;
        capex::run_study(plan);
    });
}

} // extern "C"
