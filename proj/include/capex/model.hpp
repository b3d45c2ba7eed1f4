#pragma once

#include "capex/lp.hpp"
#include "capex/types.hpp"

#include <map>
#include <string>
#include <vector>

namespace capex {

/// Linear expression over invest/retire columns plus a constant: the net
/// capacity of a technology (existing + invested - retired).
struct NetCapacityExpr {
    int invest_col = -1; // -1 when investment is not a decision
    int retire_col = -1;
    double constant = 0.0; // existing capacity (or the fixed plan value)
};

struct ReserveRequirements {
    double operating = 0.0;  // MW
    double regulation = 0.0; // MW
};

/// Requirement levels from the reserve rules: operating reserve as a
/// fraction of load plus available VRE energy, regulation as a fraction of
/// load.
ReserveRequirements compute_reserve_requirements(const ReserveRules& rules,
                                                 double demand_mw,
                                                 double vre_available_mwh);

/// Column index bookkeeping for one built model. Hourly families store the
/// base column of a T-long block; -1 marks an absent family.
struct VariableMap {
    int T = 0;          // hours per year
    int num_weeks = 0;  // reservoir resolution
    int num_techs = 0;
    std::vector<std::string> year_labels; // model years, in order
    std::vector<double> year_weights;     // objective weights per model year

    // per technology
    std::vector<int> invest, retire;

    // per (year, tech): index = y * num_techs + g
    std::vector<int> dispatch;  // generation, or discharge for storage
    std::vector<int> commit, startup;
    std::vector<int> charge, soc;
    std::vector<int> level, spill; // weekly reservoir families
    std::vector<int> res_op, res_reg;

    // per year
    std::vector<int> ens, slack_op, slack_reg;

    int yt(int year, int tech) const { return year * num_techs + tech; }
};

struct RowRange {
    std::string family;
    int begin = 0;
    int end = 0; // half-open
};

struct ModelArtifacts {
    lp::LinearProgram lp;
    VariableMap vars;
    std::vector<RowRange> row_ranges;
    bool co2_applied = false;
};

struct BuildOptions {
    /// Fix net capacities to these values (re-dispatch studies). Techs not
    /// listed keep their existing capacity with no investment decision.
    std::map<std::string, double> fixed_capacity;
    bool operation_only = false; // no investment decisions at all
    bool skip_co2 = false;       // build without the spec's CO2 policy
};

/// Single-year investment + operation LP: objective and constraint groups
/// (investment bounds, operational limits, relaxed unit commitment, unit
/// reserves, CO2 cap, hourly balance with ENS/unmet-reserve slacks, system
/// reserve requirements).
ModelArtifacts build_single_year(const SystemSpec& spec, const std::string& year,
                                 const BuildOptions& opts = {});

/// Multi-year stochastic LP: one shared investment variable set, operational
/// families replicated per year, operating costs weighted by W_y.
ModelArtifacts build_multi_year(const SystemSpec& spec,
                                const std::vector<std::string>& years,
                                const BuildOptions& opts = {});

/// Adds the CO2 constraint rows (one per model year). Throws on double
/// application.
void apply_co2_policy(ModelArtifacts& model, const Co2Policy& policy,
                      const SystemSpec& spec);

/// Hourly series and totals extracted from a solved model.
struct YearOperation {
    std::map<std::string, std::vector<double>> dispatch; // MWh per hour (discharge for storage)
    std::map<std::string, std::vector<double>> charge;
    std::map<std::string, std::vector<double>> soc;
    std::map<std::string, std::vector<double>> reserve;  // op + reg provision
    std::map<std::string, std::vector<double>> startup;  // MW started per hour
    std::vector<double> ens;
    std::vector<double> unmet_op, unmet_reg;
};

struct PlanSolution {
    lp::Status status = lp::Status::iteration_limit;
    double objective = 0.0;
    int iterations = 0;
    std::map<std::string, double> invested, retired, net_capacity; // MW
    std::vector<std::string> years;
    std::vector<double> year_weights;
    std::vector<YearOperation> per_year;
};

PlanSolution extract_solution(const ModelArtifacts& model, const SystemSpec& spec,
                              const lp::Solution& sol);

/// Human-readable column names for a built model (inv_<tech>,
/// phi_<tech>_<year>_t<hour>, ...), suitable for MPS export.
std::vector<std::string> variable_names(const ModelArtifacts& model,
                                        const SystemSpec& spec);

/// Convenience: build (optionally under fixed capacities), solve, extract.
PlanSolution solve_plan(const SystemSpec& spec, const std::vector<std::string>& years,
                        const BuildOptions& opts = {}, const lp::SolveOptions& solver = {});

} // namespace capex
