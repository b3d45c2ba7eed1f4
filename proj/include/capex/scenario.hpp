#pragma once

#include "capex/lp.hpp"
#include "capex/metrics.hpp"
#include "capex/model.hpp"
#include "capex/types.hpp"

#include <filesystem>
#include <map>
#include <optional>
#include <string>
#include <vector>

namespace capex {

struct StudyPlan {
    enum class Kind { co2_sweep, duration_sweep, year_study };

    SystemSpec spec;
    Kind kind = Kind::co2_sweep;

    // co2_sweep
    std::vector<double> cap_fractions{1.0, 0.5, 0.1, 0.05, 0.0};

    // duration_sweep
    std::vector<double> durations_h{1, 3, 8, 15, 24, 48, 100};
    std::vector<double> energy_capacities_mwh{1000, 10000, 100000}; // 1, 10, 100 GWh
    double sweep_roundtrip_efficiency = 0.85;

    // year_study
    std::vector<std::string> years; // empty = all years of the spec

    int jobs = 1;
    std::filesystem::path out_dir;
    lp::SolveOptions solver;
};

struct ScenarioResult {
    std::string case_id;
    std::string status;
    double objective = 0.0;
    int iterations = 0;
    std::map<std::string, double> invested_mw;
    std::map<std::string, double> net_capacity_mw;
    std::map<std::string, double> energy_share;       // generation / annual demand
    std::map<std::string, double> curtailment_frac;   // VRE techs with available energy
    CostBreakdown costs;
    EmissionsReport emissions;
    double ens_mwh = 0.0;
    double unmet_reserve_mwh = 0.0;
    std::optional<double> breakeven_cost_per_kwh;     // duration sweep only
    std::map<std::string, double> extra;              // study-specific scalars
};

/// Thrown when some cases of a study fail after others completed; the
/// finished cases are already persisted.
class PartialStudyError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

std::string to_json(const ScenarioResult& r);
ScenarioResult result_from_json(const std::string& text);

/// Metrics bundle for one solved plan. Throws SolveError when the solution
/// is not optimal.
ScenarioResult summarize_case(std::string case_id, const SystemSpec& spec,
                              const PlanSolution& sol);

/// One row per result, columns fixed by the spec's technology order.
std::string summary_csv(const std::vector<ScenarioResult>& results,
                        const SystemSpec& spec);

/// CO2 sweep: per battery mode (with / without investable-storage options),
/// solve unconstrained to fix the emissions baseline, then each cap
/// fraction as a total cap.
std::vector<ScenarioResult> run_co2_sweep(const StudyPlan& plan);

/// Duration sweep at zero emissions: exogenous storage of each (energy,
/// duration) pair with no investment cost, plus a no-storage baseline;
/// breakeven cost against the baseline.
std::vector<ScenarioResult> run_duration_sweep(const StudyPlan& plan);

struct YearStudyResult {
    std::vector<std::string> plan_labels; // single years, then "multi"
    std::vector<std::string> eval_years;
    // operating_cost[p][e]: plan p re-dispatched over evaluation year e
    std::vector<std::vector<double>> operating_cost;
    std::vector<std::vector<double>> ens_mwh;
    std::vector<double> plan_investment_cost; // annuitized inv + fixed OM per plan
    std::vector<ScenarioResult> cases;        // persisted per-case results
};

/// Single- vs multi-year robustness study: each single-year plan is frozen
/// and re-dispatched over every evaluation year; the multi-year plan gets
/// the same treatment.
YearStudyResult run_year_study(const StudyPlan& plan);

/// Runs whichever study the plan names and writes
/// <out>/<study>/<case-id>/result.json plus summary.csv and plot-ready
/// long-format tables. Returns the results in case-id order.
std::vector<ScenarioResult> run_study(const StudyPlan& plan);

/// Atomic file write: temp file in the same directory, then rename.
void write_file_atomic(const std::filesystem::path& path, const std::string& content);

} // namespace capex
