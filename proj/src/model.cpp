#include "capex/model.hpp"

#include "capex/finance.hpp"

#include <cmath>
#include <cstdio>
#include <sstream>

namespace capex {

ReserveRequirements compute_reserve_requirements(const ReserveRules& rules,
                                                 double demand_mw,
                                                 double vre_available_mwh) {
    ReserveRequirements r;
    r.operating = rules.op_load_frac * demand_mw + rules.op_vre_frac * vre_available_mwh;
    r.regulation = rules.reg_load_frac * demand_mw;
    return r;
}

namespace {

struct NetCap {
    int inv = -1;
    int ret = -1;
    double c0 = 0.0; // constant part (existing or fixed plan capacity)
    bool variable() const { return inv >= 0 || ret >= 0; }
};

// availability of tech g at hour t of a given year
struct Availability {
    const std::vector<double>* series = nullptr;
    double constant = 1.0;
    double at(int t) const { return series ? (*series)[t] : constant; }
};

struct Builder {
    const SystemSpec& spec;
    const BuildOptions& opts;
    std::vector<int> year_idx;     // indices into spec.years
    std::vector<double> weights;

    ModelArtifacts model;
    std::vector<NetCap> netcap;    // per tech
    std::vector<double> eta;       // sqrt(roundtrip) per tech (storage)

    int T = 0, W = 0, G = 0, Y = 0;

    Builder(const SystemSpec& s, const BuildOptions& o) : spec(s), opts(o) {}

    lp::LinearProgram& lp() { return model.lp; }
    VariableMap& vars() { return model.vars; }

    void range(const std::string& family, int begin) {
        const int end = lp().num_rows();
        if (end > begin) model.row_ranges.push_back({family, begin, end});
    }

    int add_block(double cost, double lo, double hi, int count) {
        const int base = lp().num_vars();
        for (int k = 0; k < count; ++k) lp().add_var(cost, lo, hi);
        return base;
    }

    // adds coef * (net capacity of g) to a row; returns the constant part
    // that belongs on the right-hand side (with sign flipped by the caller)
    double add_net(int row, int g, double coef) {
        const NetCap& nc = netcap[g];
        if (nc.inv >= 0) lp().add_entry(row, nc.inv, coef);
        if (nc.ret >= 0) lp().add_entry(row, nc.ret, -coef);
        return coef * nc.c0;
    }

    Availability avail(int g, int y) const {
        const TechnologySpec& tech = spec.technologies[g];
        Availability a;
        a.constant = tech.availability_const;
        if (!tech.availability_series.empty()) {
            const auto& hourly = spec.years[year_idx[y]].hourly;
            auto it = hourly.find(tech.availability_series);
            if (it != hourly.end()) a.series = &it->second.values;
        }
        return a;
    }

    void make_investment_vars() {
        const double r = spec.discount_rate;
        netcap.resize(G);
        eta.resize(G, 1.0);
        vars().invest.assign(G, -1);
        vars().retire.assign(G, -1);
        for (int g = 0; g < G; ++g) {
            const TechnologySpec& tech = spec.technologies[g];
            if (tech.is_storage()) eta[g] = std::sqrt(tech.roundtrip_efficiency);
            NetCap& nc = netcap[g];
            auto fixed = opts.fixed_capacity.find(tech.name);
            if (fixed != opts.fixed_capacity.end()) {
                nc.c0 = fixed->second;
                const double built = std::max(0.0, fixed->second - tech.existing_capacity);
                lp().objective_offset +=
                    tech.inv_cost * 1000.0 * annuity_factor(r, tech.lifetime) * built +
                    tech.fixed_om * 1000.0 * nc.c0;
                continue;
            }
            nc.c0 = tech.existing_capacity;
            lp().objective_offset += tech.fixed_om * 1000.0 * tech.existing_capacity;
            if (opts.operation_only) continue;
            const bool can_invest =
                tech.investable && !(tech.is_storage() && tech.fixed_energy_capacity);
            if (can_invest) {
                double ub = lp::kInf;
                if (tech.max_capacity)
                    ub = std::max(0.0, *tech.max_capacity - tech.existing_capacity);
                const double c = tech.inv_cost * 1000.0 * annuity_factor(r, tech.lifetime) +
                                 tech.fixed_om * 1000.0;
                nc.inv = lp().add_var(c, 0.0, ub);
                vars().invest[g] = nc.inv;
            }
            if (tech.retirable && tech.existing_capacity > 0) {
                nc.ret = lp().add_var(-tech.fixed_om * 1000.0, 0.0, tech.existing_capacity);
                vars().retire[g] = nc.ret;
            }
        }
        // net capacity >= 0 and <= max_capacity where both decisions exist
        const int begin = lp().num_rows();
        for (int g = 0; g < G; ++g) {
            const NetCap& nc = netcap[g];
            if (nc.ret < 0) continue;
            {
                const int row = lp().add_row(lp::Sense::ge, -nc.c0);
                add_net(row, g, 1.0); // inv - ret >= -existing
            }
            const TechnologySpec& tech = spec.technologies[g];
            if (tech.max_capacity && nc.inv >= 0) {
                const int row = lp().add_row(lp::Sense::le, *tech.max_capacity - nc.c0);
                add_net(row, g, 1.0);
            }
        }
        range("capacity_bounds", begin);
        if (spec.hydro.capacity_cap_mw > 0) {
            double fixed_part = 0.0;
            bool any_variable = false;
            for (int g = 0; g < G; ++g) {
                if (spec.technologies[g].tech_class != TechClass::hydro_reservoir)
                    continue;
                fixed_part += netcap[g].c0;
                any_variable = any_variable || netcap[g].variable();
            }
            if (any_variable) {
                const int row =
                    lp().add_row(lp::Sense::le, spec.hydro.capacity_cap_mw - fixed_part);
                for (int g = 0; g < G; ++g)
                    if (spec.technologies[g].tech_class == TechClass::hydro_reservoir &&
                        netcap[g].variable())
                        add_net(row, g, 1.0); // constants already folded into rhs
                range("hydro_capacity_cap", row);
            }
        }
    }

    void build_year(int y) {
        const YearData& yd = spec.years[year_idx[y]];
        const double w = weights[y];
        const std::string& yl = yd.label;
        const bool reserves = spec.reserve_rules.any();
        VariableMap& vm = vars();

        std::vector<Availability> af(G);
        for (int g = 0; g < G; ++g) af[g] = avail(g, y);

        // --- variables -----------------------------------------------------
        for (int g = 0; g < G; ++g) {
            const TechnologySpec& tech = spec.technologies[g];
            const int slot = vm.yt(y, g);
            const double fuel = fuel_cost_per_mwh(tech, spec);
            switch (tech.tech_class) {
            case TechClass::thermal:
            case TechClass::hydro_reservoir:
            case TechClass::vre: {
                // dispatch is a plain bound when capacity is constant and no
                // commitment couples it
                if (!tech.uc_flag && !netcap[g].variable() && !tech.reserve_flag) {
                    vm.dispatch[slot] = lp().num_vars();
                    for (int t = 0; t < T; ++t)
                        lp().add_var(w * (tech.var_om + fuel), 0.0,
                                     af[g].at(t) * netcap[g].c0);
                } else {
                    vm.dispatch[slot] =
                        add_block(w * (tech.var_om + fuel), 0.0, lp::kInf, T);
                }
                if (tech.uc_flag) {
                    vm.commit[slot] = add_block(0.0, 0.0, lp::kInf, T);
                    vm.startup[slot] = add_block(w * tech.startup_cost, 0.0, lp::kInf, T);
                }
                break;
            }
            case TechClass::storage: {
                vm.dispatch[slot] = add_block(w * tech.var_om, 0.0, lp::kInf, T); // discharge
                vm.charge[slot] = add_block(w * tech.var_om, 0.0, lp::kInf, T);
                double soc_hi = lp::kInf;
                if (tech.fixed_energy_capacity)
                    soc_hi = *tech.fixed_energy_capacity;
                else if (!netcap[g].variable())
                    soc_hi = tech.duration * netcap[g].c0;
                vm.soc[slot] = add_block(0.0, 0.0, soc_hi, T);
                break;
            }
            }
            if (reserves && tech.reserve_flag) {
                vm.res_op[slot] = add_block(0.0, 0.0, lp::kInf, T);
                vm.res_reg[slot] = add_block(0.0, 0.0, lp::kInf, T);
            }
            if (tech.tech_class == TechClass::hydro_reservoir &&
                !spec.hydro.inflow_series.empty()) {
                vm.level[slot] = lp().num_vars();
                const double e = spec.hydro.reservoir_energy_mwh;
                const double init = spec.hydro.initial_level_mwh;
                const double tol = spec.hydro.end_tolerance;
                for (int k = 0; k < W; ++k) {
                    double lo = 0.0, hi = e;
                    if (k == W - 1) { // end-year level near the initial level
                        lo = std::max(0.0, (1.0 - tol) * init);
                        hi = std::min(e, (1.0 + tol) * init);
                    }
                    lp().add_var(0.0, lo, hi);
                }
                vm.spill[slot] = add_block(0.0, 0.0, lp::kInf, W);
            }
        }
        vm.ens[y] = lp().num_vars();
        for (int t = 0; t < T; ++t)
            lp().add_var(w * spec.voll, 0.0, yd.demand.values[t]);
        if (reserves) {
            vm.slack_op[y] = add_block(w * spec.unmet_reserve_penalty, 0.0, lp::kInf, T);
            vm.slack_reg[y] = add_block(w * spec.unmet_reserve_penalty, 0.0, lp::kInf, T);
        }

        // --- per-technology constraint rows ---------------------------------
        for (int g = 0; g < G; ++g) {
            const TechnologySpec& tech = spec.technologies[g];
            const int slot = vm.yt(y, g);
            const int phi = vm.dispatch[slot];
            const std::string tag = ":" + yl + ":" + tech.name;

            if (tech.uc_flag) {
                const int u = vm.commit[slot];
                const int s = vm.startup[slot];
                int begin = lp().num_rows();
                for (int t = 0; t < T; ++t) { // u <= AF * net
                    const int row = lp().add_row(lp::Sense::le, 0.0);
                    lp().add_entry(row, u + t, 1.0);
                    lp().rhs[row] += add_net(row, g, -af[g].at(t)) * -1.0;
                }
                range("commit_cap" + tag, begin);
                begin = lp().num_rows();
                for (int t = 0; t < T; ++t) { // dispatch <= commit
                    const int row = lp().add_row(lp::Sense::le, 0.0);
                    lp().add_entry(row, phi + t, 1.0);
                    lp().add_entry(row, u + t, -1.0);
                }
                range("dispatch_le_commit" + tag, begin);
                if (tech.min_output_frac > 0) {
                    begin = lp().num_rows();
                    for (int t = 0; t < T; ++t) { // min output on committed capacity
                        const int row = lp().add_row(lp::Sense::le, 0.0);
                        lp().add_entry(row, u + t, tech.min_output_frac);
                        lp().add_entry(row, phi + t, -1.0);
                    }
                    range("min_output" + tag, begin);
                }
                begin = lp().num_rows();
                for (int t = 0; t < T; ++t) { // startup >= commit ramp-up (cyclic)
                    const int prev = t == 0 ? T - 1 : t - 1;
                    const int row = lp().add_row(lp::Sense::le, 0.0);
                    lp().add_entry(row, u + t, 1.0);
                    lp().add_entry(row, u + prev, -1.0);
                    lp().add_entry(row, s + t, -1.0);
                }
                range("startup" + tag, begin);
            } else if (tech.tech_class != TechClass::storage &&
                       (netcap[g].variable() || tech.reserve_flag)) {
                const int begin = lp().num_rows();
                const int rop = vm.res_op[slot];
                for (int t = 0; t < T; ++t) {
                    // dispatch (+ reserve headroom) <= AF * net
                    const double f = af[g].at(t);
                    const int row = lp().add_row(lp::Sense::le, 0.0);
                    lp().add_entry(row, phi + t, 1.0);
                    if (rop >= 0) {
                        lp().add_entry(row, rop + t, 1.0);
                        lp().add_entry(row, vm.res_reg[slot] + t, 1.0);
                    }
                    lp().rhs[row] = add_net(row, g, -f) * -1.0;
                }
                range("dispatch_cap" + tag, begin);
            }

            if (tech.is_storage()) {
                const int dis = phi;
                const int chg = vm.charge[slot];
                const int soc = vm.soc[slot];
                int begin = lp().num_rows();
                if (netcap[g].variable()) {
                    for (int t = 0; t < T; ++t) {
                        const int row = lp().add_row(lp::Sense::le, 0.0);
                        lp().add_entry(row, dis + t, 1.0);
                        lp().rhs[row] = add_net(row, g, -1.0) * -1.0;
                    }
                    for (int t = 0; t < T; ++t) {
                        const int row = lp().add_row(lp::Sense::le, 0.0);
                        lp().add_entry(row, chg + t, 1.0);
                        lp().rhs[row] = add_net(row, g, -1.0) * -1.0;
                    }
                } else {
                    for (int t = 0; t < T; ++t) {
                        lp().hi[dis + t] = netcap[g].c0;
                        lp().hi[chg + t] = netcap[g].c0;
                    }
                }
                range("storage_power" + tag, begin);
                if (!tech.fixed_energy_capacity && netcap[g].variable()) {
                    begin = lp().num_rows();
                    for (int t = 0; t < T; ++t) { // soc <= duration * net
                        const int row = lp().add_row(lp::Sense::le, 0.0);
                        lp().add_entry(row, soc + t, 1.0);
                        lp().rhs[row] = add_net(row, g, -tech.duration) * -1.0;
                    }
                    range("storage_energy" + tag, begin);
                }
                begin = lp().num_rows();
                const double ec = eta[g], ed = eta[g];
                for (int t = 0; t < T; ++t) { // cyclic SoC dynamics
                    const int prev = t == 0 ? T - 1 : t - 1;
                    const int row = lp().add_row(lp::Sense::eq, 0.0);
                    lp().add_entry(row, soc + t, 1.0);
                    lp().add_entry(row, soc + prev, -1.0);
                    lp().add_entry(row, chg + t, -ec);
                    lp().add_entry(row, dis + t, 1.0 / ed);
                }
                range("soc_dynamics" + tag, begin);
                if (vm.res_op[slot] >= 0) {
                    begin = lp().num_rows();
                    for (int t = 0; t < T; ++t) { // reserve within unused power
                        const int row = lp().add_row(lp::Sense::le, 0.0);
                        lp().add_entry(row, vm.res_op[slot] + t, 1.0);
                        lp().add_entry(row, vm.res_reg[slot] + t, 1.0);
                        lp().add_entry(row, dis + t, 1.0);
                        lp().add_entry(row, chg + t, -1.0);
                        lp().rhs[row] = add_net(row, g, -1.0) * -1.0;
                    }
                    for (int t = 0; t < T; ++t) { // one hour of reserve energy in SoC
                        const int row = lp().add_row(lp::Sense::le, 0.0);
                        lp().add_entry(row, vm.res_op[slot] + t, 1.0);
                        lp().add_entry(row, vm.res_reg[slot] + t, 1.0);
                        lp().add_entry(row, soc + t, -1.0);
                    }
                    range("storage_reserve" + tag, begin);
                }
            } else if (tech.uc_flag && vm.res_op[slot] >= 0) {
                const int begin = lp().num_rows();
                const int u = vm.commit[slot];
                for (int t = 0; t < T; ++t) { // reserve within committed headroom
                    const int row = lp().add_row(lp::Sense::le, 0.0);
                    lp().add_entry(row, vm.res_op[slot] + t, 1.0);
                    lp().add_entry(row, vm.res_reg[slot] + t, 1.0);
                    lp().add_entry(row, phi + t, 1.0);
                    lp().add_entry(row, u + t, -1.0);
                }
                range("unit_reserve" + tag, begin);
            }

            if (vm.level[slot] >= 0) {
                const int begin = lp().num_rows();
                const auto& inflow =
                    spec.years[year_idx[y]].weekly.at(spec.hydro.inflow_series).values;
                const int lvl = vm.level[slot];
                const int spl = vm.spill[slot];
                for (int k = 0; k < W; ++k) {
                    const int t0 = k * 168;
                    const int t1 = std::min(T, (k + 1) * 168);
                    double rhs = inflow[k];
                    if (k == 0) rhs += spec.hydro.initial_level_mwh;
                    const int row = lp().add_row(lp::Sense::eq, rhs);
                    lp().add_entry(row, lvl + k, 1.0);
                    if (k > 0) lp().add_entry(row, lvl + k - 1, -1.0);
                    lp().add_entry(row, spl + k, 1.0);
                    for (int t = t0; t < t1; ++t) lp().add_entry(row, phi + t, 1.0);
                }
                range("reservoir" + tag, begin);
                if (spec.hydro.annual_energy_cap_mwh > 0) {
                    const int row =
                        lp().add_row(lp::Sense::le, spec.hydro.annual_energy_cap_mwh);
                    for (int t = 0; t < T; ++t) lp().add_entry(row, phi + t, 1.0);
                    range("hydro_energy_cap" + tag, row);
                }
            }
        }

        // --- energy balance --------------------------------------------------
        {
            const int begin = lp().num_rows();
            for (int t = 0; t < T; ++t) {
                const int row = lp().add_row(lp::Sense::eq, yd.demand.values[t]);
                for (int g = 0; g < G; ++g) {
                    const int slot = vm.yt(y, g);
                    lp().add_entry(row, vm.dispatch[slot] + t, 1.0);
                    if (vm.charge[slot] >= 0)
                        lp().add_entry(row, vm.charge[slot] + t, -1.0);
                }
                lp().add_entry(row, vm.ens[y] + t, 1.0);
            }
            range("balance:" + yl, begin);
        }

        // --- system reserve requirements -------------------------------------
        if (reserves) {
            const ReserveRules& rr = spec.reserve_rules;
            int begin = lp().num_rows();
            for (int t = 0; t < T; ++t) {
                double rhs = rr.op_load_frac * yd.demand.values[t];
                const int row = lp().add_row(lp::Sense::ge, 0.0);
                for (int g = 0; g < G; ++g) {
                    const int slot = vm.yt(y, g);
                    if (vm.res_op[slot] >= 0)
                        lp().add_entry(row, vm.res_op[slot] + t, 1.0);
                    if (spec.technologies[g].tech_class == TechClass::vre)
                        rhs += add_net(row, g, -rr.op_vre_frac * af[g].at(t)) * -1.0;
                }
                lp().add_entry(row, vm.slack_op[y] + t, 1.0);
                lp().rhs[row] += rhs;
            }
            range("operating_reserve:" + yl, begin);
            begin = lp().num_rows();
            for (int t = 0; t < T; ++t) {
                const int row =
                    lp().add_row(lp::Sense::ge, rr.reg_load_frac * yd.demand.values[t]);
                for (int g = 0; g < G; ++g) {
                    const int slot = vm.yt(y, g);
                    if (vm.res_reg[slot] >= 0)
                        lp().add_entry(row, vm.res_reg[slot] + t, 1.0);
                }
                lp().add_entry(row, vm.slack_reg[y] + t, 1.0);
            }
            range("regulation_reserve:" + yl, begin);
        }
    }

    ModelArtifacts build(const std::vector<std::string>& years) {
        validate(spec);
        if (years.empty()) throw ValidationError("build: no years given");
        for (const auto& label : years) {
            const int idx = spec.year_index(label);
            if (idx < 0) throw ValidationError("build: unknown year '" + label + "'");
            year_idx.push_back(idx);
        }
        G = static_cast<int>(spec.technologies.size());
        Y = static_cast<int>(year_idx.size());
        T = spec.hours;
        W = (T + 167) / 168;

        weights.assign(Y, 1.0);
        if (Y > 1) {
            double sum = 0.0;
            for (int y = 0; y < Y; ++y) sum += spec.years[year_idx[y]].weight;
            if (sum <= 0) throw ValidationError("build: year weights sum to zero");
            for (int y = 0; y < Y; ++y)
                weights[y] = spec.years[year_idx[y]].weight / sum;
        }

        VariableMap& vm = vars();
        vm.T = T;
        vm.num_weeks = W;
        vm.num_techs = G;
        vm.year_labels = years;
        vm.year_weights = weights;
        const int slots = Y * G;
        vm.dispatch.assign(slots, -1);
        vm.commit.assign(slots, -1);
        vm.startup.assign(slots, -1);
        vm.charge.assign(slots, -1);
        vm.soc.assign(slots, -1);
        vm.level.assign(slots, -1);
        vm.spill.assign(slots, -1);
        vm.res_op.assign(slots, -1);
        vm.res_reg.assign(slots, -1);
        vm.ens.assign(Y, -1);
        vm.slack_op.assign(Y, -1);
        vm.slack_reg.assign(Y, -1);

        make_investment_vars();
        for (int y = 0; y < Y; ++y) build_year(y);

        if (!opts.skip_co2 && spec.co2.kind != Co2Policy::Kind::none)
            apply_co2_policy(model, spec.co2, spec);
        return std::move(model);
    }
};

} // namespace

ModelArtifacts build_single_year(const SystemSpec& spec, const std::string& year,
                                 const BuildOptions& opts) {
    Builder b(spec, opts);
    return b.build({year});
}

ModelArtifacts build_multi_year(const SystemSpec& spec,
                                const std::vector<std::string>& years,
                                const BuildOptions& opts) {
    Builder b(spec, opts);
    return b.build(years);
}

void apply_co2_policy(ModelArtifacts& model, const Co2Policy& policy,
                      const SystemSpec& spec) {
    if (policy.kind == Co2Policy::Kind::none) return;
    if (model.co2_applied)
        throw ValidationError("apply_co2_policy: policy already applied");
    const VariableMap& vm = model.vars;
    const int Y = static_cast<int>(vm.year_labels.size());
    const int G = vm.num_techs;
    for (int y = 0; y < Y; ++y) {
        const int yi = spec.year_index(vm.year_labels[y]);
        double cap = policy.value;
        if (policy.kind == Co2Policy::Kind::intensity_cap) {
            double demand = 0.0;
            for (double d : spec.years[yi].demand.values) demand += d;
            cap = policy.value * 1e-3 * demand; // g/kWh == kg/MWh
        }
        const int row = model.lp.add_row(lp::Sense::le, cap);
        for (int g = 0; g < G; ++g) {
            const TechnologySpec& tech = spec.technologies[g];
            if (tech.fuel.empty()) continue;
            const double er = emissions_rate(tech, spec);
            if (er == 0.0) continue;
            const int phi = vm.dispatch[vm.yt(y, g)];
            for (int t = 0; t < vm.T; ++t) model.lp.add_entry(row, phi + t, er);
        }
        model.row_ranges.push_back({"co2_cap:" + vm.year_labels[y], row, row + 1});
    }
    model.co2_applied = true;
}

std::vector<std::string> variable_names(const ModelArtifacts& model,
                                        const SystemSpec& spec) {
    const VariableMap& vm = model.vars;
    std::vector<std::string> names(model.lp.num_vars());
    auto tag = [&](const char* prefix, int g, int y) {
        return std::string(prefix) + "_" + spec.technologies[g].name + "_" +
               vm.year_labels[y];
    };
    auto fill = [&](int base, const std::string& stem, int count) {
        if (base < 0) return;
        char buf[16];
        for (int k = 0; k < count; ++k) {
            std::snprintf(buf, sizeof buf, "_t%04d", k);
            names[base + k] = stem + buf;
        }
    };
    const int G = vm.num_techs;
    const int Y = static_cast<int>(vm.year_labels.size());
    for (int g = 0; g < G; ++g) {
        const std::string& t = spec.technologies[g].name;
        if (vm.invest[g] >= 0) names[vm.invest[g]] = "inv_" + t;
        if (vm.retire[g] >= 0) names[vm.retire[g]] = "ret_" + t;
    }
    for (int y = 0; y < Y; ++y) {
        for (int g = 0; g < G; ++g) {
            const int slot = vm.yt(y, g);
            fill(vm.dispatch[slot], tag("phi", g, y), vm.T);
            fill(vm.commit[slot], tag("u", g, y), vm.T);
            fill(vm.startup[slot], tag("su", g, y), vm.T);
            fill(vm.charge[slot], tag("chg", g, y), vm.T);
            fill(vm.soc[slot], tag("soc", g, y), vm.T);
            fill(vm.level[slot], tag("lvl", g, y), vm.num_weeks);
            fill(vm.spill[slot], tag("spl", g, y), vm.num_weeks);
            fill(vm.res_op[slot], tag("rop", g, y), vm.T);
            fill(vm.res_reg[slot], tag("rrg", g, y), vm.T);
        }
        fill(vm.ens[y], "ens_" + vm.year_labels[y], vm.T);
        fill(vm.slack_op[y], "uop_" + vm.year_labels[y], vm.T);
        fill(vm.slack_reg[y], "urg_" + vm.year_labels[y], vm.T);
    }
    for (size_t j = 0; j < names.size(); ++j)
        if (names[j].empty()) names[j] = "x" + std::to_string(j);
    return names;
}

namespace {

std::vector<double> block(const lp::Solution& sol, int base, int count) {
    std::vector<double> out;
    if (base < 0) return out;
    out.assign(sol.x.begin() + base, sol.x.begin() + base + count);
    return out;
}

} // namespace

PlanSolution extract_solution(const ModelArtifacts& model, const SystemSpec& spec,
                              const lp::Solution& sol) {
    PlanSolution out;
    out.status = sol.status;
    out.objective = sol.objective;
    out.iterations = sol.iterations;
    out.years = model.vars.year_labels;
    out.year_weights = model.vars.year_weights;
    if (sol.status != lp::Status::optimal) return out;

    const VariableMap& vm = model.vars;
    const int G = vm.num_techs;
    for (int g = 0; g < G; ++g) {
        const TechnologySpec& tech = spec.technologies[g];
        const double inv = vm.invest[g] >= 0 ? sol.x[vm.invest[g]] : 0.0;
        const double ret = vm.retire[g] >= 0 ? sol.x[vm.retire[g]] : 0.0;
        out.invested[tech.name] = inv;
        out.retired[tech.name] = ret;
        // fixed-capacity builds carry the plan value in the builder constant;
        // reconstruct it the same way
        double base = tech.existing_capacity;
        // (no direct access to build options here; fixed plans pass through
        //  invested = retired = 0 and net = base unless the caller overrode it)
        out.net_capacity[tech.name] = base + inv - ret;
    }

    const int Y = static_cast<int>(vm.year_labels.size());
    out.per_year.resize(Y);
    for (int y = 0; y < Y; ++y) {
        YearOperation& op = out.per_year[y];
        for (int g = 0; g < G; ++g) {
            const TechnologySpec& tech = spec.technologies[g];
            const int slot = vm.yt(y, g);
            op.dispatch[tech.name] = block(sol, vm.dispatch[slot], vm.T);
            if (vm.startup[slot] >= 0)
                op.startup[tech.name] = block(sol, vm.startup[slot], vm.T);
            if (vm.charge[slot] >= 0) {
                op.charge[tech.name] = block(sol, vm.charge[slot], vm.T);
                op.soc[tech.name] = block(sol, vm.soc[slot], vm.T);
            }
            if (vm.res_op[slot] >= 0) {
                auto r = block(sol, vm.res_op[slot], vm.T);
                const auto rr = block(sol, vm.res_reg[slot], vm.T);
                for (int t = 0; t < vm.T; ++t) r[t] += rr[t];
                op.reserve[tech.name] = std::move(r);
            }
        }
        op.ens = block(sol, vm.ens[y], vm.T);
        if (vm.slack_op[y] >= 0) {
            op.unmet_op = block(sol, vm.slack_op[y], vm.T);
            op.unmet_reg = block(sol, vm.slack_reg[y], vm.T);
        } else {
            op.unmet_op.assign(vm.T, 0.0);
            op.unmet_reg.assign(vm.T, 0.0);
        }
    }
    return out;
}

PlanSolution solve_plan(const SystemSpec& spec, const std::vector<std::string>& years,
                        const BuildOptions& opts, const lp::SolveOptions& solver) {
    Builder b(spec, opts);
    ModelArtifacts model = b.build(years);
    const lp::Solution sol = lp::solve(model.lp, solver);
    PlanSolution plan = extract_solution(model, spec, sol);
    // fixed-capacity plans: net capacity comes from the options, not from
    // invest/retire variables
    for (const auto& [name, cap] : opts.fixed_capacity) plan.net_capacity[name] = cap;
    return plan;
}

} // namespace capex
