#include "capex/metrics.hpp"

#include "capex/finance.hpp"

#include <cmath>
#include <numeric>
#include <sstream>

namespace capex {

namespace {

double sum(const std::vector<double>& v) {
    return std::accumulate(v.begin(), v.end(), 0.0);
}

double availability_at(const TechnologySpec& tech, const YearData& yd, int t) {
    if (!tech.availability_series.empty()) {
        auto it = yd.hourly.find(tech.availability_series);
        if (it != yd.hourly.end()) return it->second.values[t];
    }
    return tech.availability_const;
}

void require_optimal(const PlanSolution& sol, const char* who) {
    if (sol.status != lp::Status::optimal)
        throw SolveError(std::string(who) + ": solution status is " +
                         lp::status_name(sol.status));
}

} // namespace

std::optional<double> utilization(const PlanSolution& sol, const SystemSpec& spec,
                                  const std::string& tech, const std::string& year) {
    require_optimal(sol, "utilization");
    const TechnologySpec* g = spec.find_tech(tech);
    if (!g) throw ValidationError("utilization: unknown technology '" + tech + "'");
    if (g->is_storage())
        throw ValidationError("utilization: '" + tech + "' is a storage technology");
    int y = -1;
    for (size_t k = 0; k < sol.years.size(); ++k)
        if (sol.years[k] == year) y = static_cast<int>(k);
    if (y < 0) throw ValidationError("utilization: year '" + year + "' not in solution");

    const YearData& yd = spec.years[spec.year_index(year)];
    const double cap = sol.net_capacity.at(tech);
    const auto& phi = sol.per_year[y].dispatch.at(tech);
    double available = 0.0;
    for (size_t t = 0; t < phi.size(); ++t)
        available += availability_at(*g, yd, static_cast<int>(t)) * cap;
    if (available <= 0.0) return std::nullopt;
    return sum(phi) / available;
}

std::optional<double> curtailment(const PlanSolution& sol, const SystemSpec& spec,
                                  const std::string& tech, const std::string& year) {
    const auto theta = utilization(sol, spec, tech, year);
    if (!theta) return std::nullopt;
    return 1.0 - *theta;
}

double annual_demand(const PlanSolution& sol, const SystemSpec& spec) {
    double total = 0.0;
    for (size_t y = 0; y < sol.years.size(); ++y) {
        const YearData& yd = spec.years[spec.year_index(sol.years[y])];
        total += sol.year_weights[y] * sum(yd.demand.values);
    }
    return total;
}

std::map<std::string, double> annual_generation(const PlanSolution& sol,
                                                const SystemSpec& spec) {
    std::map<std::string, double> out;
    for (const auto& tech : spec.technologies) out[tech.name] = 0.0;
    for (size_t y = 0; y < sol.years.size(); ++y)
        for (const auto& [name, phi] : sol.per_year[y].dispatch)
            out[name] += sol.year_weights[y] * sum(phi);
    return out;
}

CostBreakdown cost_breakdown(const PlanSolution& sol, const SystemSpec& spec) {
    require_optimal(sol, "cost_breakdown");
    CostBreakdown c;
    const double r = spec.discount_rate;

    for (const auto& tech : spec.technologies) {
        const double inv = sol.invested.at(tech.name);
        const double ret = sol.retired.at(tech.name);
        const double net = sol.net_capacity.at(tech.name);
        const double a = annuity_factor(r, tech.lifetime);
        // a fixed-capacity plan carries zero invest/retire decisions; its
        // built share is whatever exceeds the existing fleet
        double built = inv;
        if (std::abs(net - (tech.existing_capacity + inv - ret)) > 1e-9 * (1.0 + net))
            built = std::max(0.0, net - tech.existing_capacity);
        c.investment += tech.inv_cost * 1000.0 * a * built;
        c.fixed_om += tech.fixed_om * 1000.0 * net;
    }

    for (size_t y = 0; y < sol.years.size(); ++y) {
        const double w = sol.year_weights[y];
        const YearOperation& op = sol.per_year[y];
        for (const auto& tech : spec.technologies) {
            const double energy = sum(op.dispatch.at(tech.name));
            c.variable_om += w * tech.var_om * energy;
            if (tech.is_storage())
                c.variable_om += w * tech.var_om * sum(op.charge.at(tech.name));
            if (!tech.fuel.empty())
                c.fuel += w * fuel_cost_per_mwh(tech, spec) * energy;
            auto su = op.startup.find(tech.name);
            if (su != op.startup.end())
                c.startup += w * tech.startup_cost * sum(su->second);
        }
        c.ens_cost += w * spec.voll * sum(op.ens);
        c.unmet_reserve_cost +=
            w * spec.unmet_reserve_penalty * (sum(op.unmet_op) + sum(op.unmet_reg));
    }

    c.total = c.sum_of_parts();
    const double scale = std::max({1.0, std::abs(c.total), std::abs(sol.objective)});
    if (std::abs(c.total - sol.objective) > 1e-6 * scale) {
        std::ostringstream os;
        os << "cost_breakdown: recomputed total " << c.total
           << " drifts from LP objective " << sol.objective;
        throw SolveError(os.str());
    }
    const double demand = annual_demand(sol, spec);
    c.average_energy_cost = demand > 0 ? c.total / demand : 0.0;
    return c;
}

EmissionsReport emissions_report(const PlanSolution& sol, const SystemSpec& spec) {
    require_optimal(sol, "emissions_report");
    EmissionsReport rep;
    for (size_t y = 0; y < sol.years.size(); ++y) {
        const double w = sol.year_weights[y];
        for (const auto& tech : spec.technologies) {
            if (tech.fuel.empty()) continue;
            rep.total += w * emissions_rate(tech, spec) *
                         sum(sol.per_year[y].dispatch.at(tech.name));
        }
    }
    const double demand = annual_demand(sol, spec);
    rep.intensity = demand > 0 ? rep.total / demand * 1000.0 : 0.0; // t/MWh -> g/kWh
    return rep;
}

double operating_cost(const CostBreakdown& c) {
    return c.total - c.investment - c.fixed_om;
}

} // namespace capex
