#include "capex/scenario.hpp"

#include "capex/config.hpp"
#include "capex/finance.hpp"

#include "json.hpp"

#include <algorithm>
#include <atomic>
#include <cinttypes>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <functional>
#include <sstream>
#include <thread>

namespace capex {

namespace {

using json = nlohmann::ordered_json;

std::vector<std::string> all_year_labels(const SystemSpec& spec) {
    std::vector<std::string> out;
    for (const auto& y : spec.years) out.push_back(y.label);
    return out;
}

double availability_at(const TechnologySpec& tech, const YearData& yd, int t) {
    if (!tech.availability_series.empty()) {
        auto it = yd.hourly.find(tech.availability_series);
        if (it != yd.hourly.end()) return it->second.values[t];
    }
    return tech.availability_const;
}

// weighted-over-years curtailment per VRE technology
std::map<std::string, double> aggregate_curtailment(const PlanSolution& sol,
                                                    const SystemSpec& spec) {
    std::map<std::string, double> out;
    for (const auto& tech : spec.technologies) {
        if (tech.tech_class != TechClass::vre) continue;
        const double cap = sol.net_capacity.at(tech.name);
        double dispatched = 0.0, available = 0.0;
        for (size_t y = 0; y < sol.years.size(); ++y) {
            const double w = sol.year_weights[y];
            const YearData& yd = spec.years[spec.year_index(sol.years[y])];
            const auto& phi = sol.per_year[y].dispatch.at(tech.name);
            for (size_t t = 0; t < phi.size(); ++t) {
                dispatched += w * phi[t];
                available += w * availability_at(tech, yd, static_cast<int>(t)) * cap;
            }
        }
        if (available > 1e-9) out[tech.name] = 1.0 - dispatched / available;
    }
    return out;
}

double vec_sum(const std::vector<double>& v) {
    double s = 0.0;
    for (double x : v) s += x;
    return s;
}

} // namespace

ScenarioResult summarize_case(std::string case_id, const SystemSpec& spec,
                              const PlanSolution& sol) {
    if (sol.status != lp::Status::optimal)
        throw SolveError("case '" + case_id + "': solver returned " +
                         lp::status_name(sol.status));
    ScenarioResult r;
    r.case_id = std::move(case_id);
    r.status = lp::status_name(sol.status);
    r.objective = sol.objective;
    r.iterations = sol.iterations;
    r.invested_mw = sol.invested;
    r.net_capacity_mw = sol.net_capacity;
    r.costs = cost_breakdown(sol, spec);
    r.emissions = emissions_report(sol, spec);
    const double demand = annual_demand(sol, spec);
    for (const auto& [name, gen] : annual_generation(sol, spec))
        r.energy_share[name] = demand > 0 ? gen / demand : 0.0;
    r.curtailment_frac = aggregate_curtailment(sol, spec);
    for (size_t y = 0; y < sol.years.size(); ++y) {
        const double w = sol.year_weights[y];
        r.ens_mwh += w * vec_sum(sol.per_year[y].ens);
        r.unmet_reserve_mwh +=
            w * (vec_sum(sol.per_year[y].unmet_op) + vec_sum(sol.per_year[y].unmet_reg));
    }
    return r;
}

namespace {

json map_to_json(const std::map<std::string, double>& m) {
    json j = json::object();
    for (const auto& [k, v] : m) j[k] = v;
    return j;
}

std::map<std::string, double> map_from_json(const json& j) {
    std::map<std::string, double> out;
    for (auto it = j.begin(); it != j.end(); ++it) out[it.key()] = it.value();
    return out;
}

struct CaseJob {
    std::string id;
    std::function<ScenarioResult()> run;
};

/// Runs the jobs (sorted by id) across up to plan.jobs workers, persisting
/// each finished case immediately when the plan has an output directory.
/// Throws PartialStudyError when any case failed.
std::vector<ScenarioResult> run_jobs(std::vector<CaseJob> jobs, const StudyPlan& plan,
                                     const std::string& study_name) {
    std::sort(jobs.begin(), jobs.end(),
              [](const CaseJob& a, const CaseJob& b) { return a.id < b.id; });
    const size_t n = jobs.size();
    std::vector<ScenarioResult> results(n);
    std::vector<std::string> errors(n);
    std::atomic<size_t> next{0};

    auto worker = [&] {
        for (;;) {
            const size_t i = next.fetch_add(1);
            if (i >= n) return;
            try {
                ScenarioResult r = jobs[i].run();
                r.case_id = jobs[i].id;
                if (!plan.out_dir.empty()) {
                    const auto dir = plan.out_dir / study_name / r.case_id;
                    std::filesystem::create_directories(dir);
                    write_file_atomic(dir / "result.json", to_json(r));
                }
                results[i] = std::move(r);
            } catch (const std::exception& e) {
                errors[i] = e.what();
            }
        }
    };

    const int workers =
        std::max(1, std::min<int>(plan.jobs, static_cast<int>(n)));
    if (workers == 1) {
        worker();
    } else {
        std::vector<std::thread> pool;
        for (int k = 0; k < workers; ++k) pool.emplace_back(worker);
        for (auto& t : pool) t.join();
    }

    std::string failure;
    for (size_t i = 0; i < n; ++i)
        if (!errors[i].empty()) {
            if (!failure.empty()) failure += "; ";
            failure += "case '" + jobs[i].id + "': " + errors[i];
        }
    if (!failure.empty()) throw PartialStudyError(failure);
    return results;
}

lp::SolveOptions solver_opts(const StudyPlan& plan) { return plan.solver; }

SystemSpec without_storage_investment(SystemSpec spec) {
    for (auto& tech : spec.technologies)
        if (tech.is_storage()) tech.investable = false;
    return spec;
}

std::string frac_id(double frac) {
    char buf[16];
    std::snprintf(buf, sizeof buf, "f%03d", static_cast<int>(std::llround(frac * 100)));
    return buf;
}

} // namespace

void write_file_atomic(const std::filesystem::path& path, const std::string& content) {
    const std::filesystem::path tmp = path.string() + ".tmp";
    {
        std::ofstream out(tmp, std::ios::trunc | std::ios::binary);
        if (!out) throw IoError("cannot write '" + tmp.string() + "'");
        out << content;
        out.flush();
        if (!out) throw IoError("write failed for '" + tmp.string() + "'");
    }
    std::filesystem::rename(tmp, path);
}

std::string to_json(const ScenarioResult& r) {
    json j;
    j["case_id"] = r.case_id;
    j["status"] = r.status;
    j["objective"] = r.objective;
    j["iterations"] = r.iterations;
    j["invested_mw"] = map_to_json(r.invested_mw);
    j["net_capacity_mw"] = map_to_json(r.net_capacity_mw);
    j["energy_share"] = map_to_json(r.energy_share);
    j["curtailment_frac"] = map_to_json(r.curtailment_frac);
    j["costs"] = {{"investment", r.costs.investment},
                  {"fixed_om", r.costs.fixed_om},
                  {"variable_om", r.costs.variable_om},
                  {"fuel", r.costs.fuel},
                  {"startup", r.costs.startup},
                  {"ens_cost", r.costs.ens_cost},
                  {"unmet_reserve_cost", r.costs.unmet_reserve_cost},
                  {"total", r.costs.total},
                  {"average_energy_cost", r.costs.average_energy_cost}};
    j["emissions"] = {{"total", r.emissions.total}, {"intensity", r.emissions.intensity}};
    j["ens_mwh"] = r.ens_mwh;
    j["unmet_reserve_mwh"] = r.unmet_reserve_mwh;
    if (r.breakeven_cost_per_kwh)
        j["breakeven_cost_per_kwh"] = *r.breakeven_cost_per_kwh;
    else
        j["breakeven_cost_per_kwh"] = nullptr;
    j["extra"] = map_to_json(r.extra);
    return j.dump(2) + "\n";
}

ScenarioResult result_from_json(const std::string& text) {
    json j;
    try {
        j = json::parse(text);
    } catch (const std::exception& e) {
        throw IoError(std::string("result_from_json: ") + e.what());
    }
    ScenarioResult r;
    r.case_id = j.at("case_id").get<std::string>();
    r.status = j.at("status").get<std::string>();
    r.objective = j.at("objective").get<double>();
    r.iterations = j.at("iterations").get<int>();
    r.invested_mw = map_from_json(j.at("invested_mw"));
    r.net_capacity_mw = map_from_json(j.at("net_capacity_mw"));
    r.energy_share = map_from_json(j.at("energy_share"));
    r.curtailment_frac = map_from_json(j.at("curtailment_frac"));
    const json& c = j.at("costs");
    r.costs.investment = c.at("investment").get<double>();
    r.costs.fixed_om = c.at("fixed_om").get<double>();
    r.costs.variable_om = c.at("variable_om").get<double>();
    r.costs.fuel = c.at("fuel").get<double>();
    r.costs.startup = c.at("startup").get<double>();
    r.costs.ens_cost = c.at("ens_cost").get<double>();
    r.costs.unmet_reserve_cost = c.at("unmet_reserve_cost").get<double>();
    r.costs.total = c.at("total").get<double>();
    r.costs.average_energy_cost = c.at("average_energy_cost").get<double>();
    r.emissions.total = j.at("emissions").at("total").get<double>();
    r.emissions.intensity = j.at("emissions").at("intensity").get<double>();
    r.ens_mwh = j.at("ens_mwh").get<double>();
    r.unmet_reserve_mwh = j.at("unmet_reserve_mwh").get<double>();
    if (!j.at("breakeven_cost_per_kwh").is_null())
        r.breakeven_cost_per_kwh = j.at("breakeven_cost_per_kwh").get<double>();
    r.extra = map_from_json(j.at("extra"));
    return r;
}

std::vector<ScenarioResult> run_co2_sweep(const StudyPlan& plan) {
    validate(plan.spec);
    if (plan.cap_fractions.empty())
        throw ValidationError("co2 sweep: no cap fractions");
    for (double f : plan.cap_fractions)
        if (f < 0.0 || f > 1.0)
            throw ValidationError("co2 sweep: cap fraction outside [0,1]");

    const auto years = all_year_labels(plan.spec);
    std::vector<CaseJob> jobs;
    for (const bool battery : {true, false}) {
        SystemSpec base = battery ? plan.spec : without_storage_investment(plan.spec);
        base.co2 = {};
        // unconstrained solve fixes this mode's emissions baseline
        const PlanSolution free_run = solve_plan(base, years, {}, solver_opts(plan));
        if (free_run.status != lp::Status::optimal)
            throw SolveError(std::string("co2 sweep baseline (") +
                             (battery ? "bat" : "nobat") + "): solver returned " +
                             lp::status_name(free_run.status));
        const double baseline = emissions_report(free_run, base).total;

        for (double frac : plan.cap_fractions) {
            const std::string id =
                std::string(battery ? "bat_" : "nobat_") + frac_id(frac);
            SystemSpec cased = base;
            cased.co2 = {Co2Policy::Kind::total_cap, frac * baseline};
            jobs.push_back({id, [id, cased, frac, baseline, &plan] {
                                const PlanSolution sol = solve_plan(
                                    cased, all_year_labels(cased), {}, solver_opts(plan));
                                ScenarioResult r = summarize_case(id, cased, sol);
                                r.extra["cap_fraction"] = frac;
                                r.extra["cap_tonnes"] = frac * baseline;
                                r.extra["battery"] = id[0] == 'b' ? 1.0 : 0.0;
                                return r;
                            }});
        }
    }
    return run_jobs(std::move(jobs), plan, "co2");
}

std::vector<ScenarioResult> run_duration_sweep(const StudyPlan& plan) {
    validate(plan.spec);
    if (plan.durations_h.empty() || plan.energy_capacities_mwh.empty())
        throw ValidationError("duration sweep: empty parameter set");
    for (double d : plan.durations_h)
        if (d <= 0) throw ValidationError("duration sweep: duration must be > 0");

    SystemSpec base = without_storage_investment(plan.spec);
    base.co2 = {Co2Policy::Kind::total_cap, 0.0}; // zero-emission setting
    const auto years = all_year_labels(base);

    const PlanSolution base_run = solve_plan(base, years, {}, solver_opts(plan));
    ScenarioResult baseline = summarize_case("baseline", base, base_run);
    const double base_total = baseline.costs.total;
    const double rate = base.discount_rate;

    std::vector<CaseJob> jobs;
    jobs.push_back({"baseline", [baseline] { return baseline; }});
    for (double e_mwh : plan.energy_capacities_mwh) {
        for (double dur : plan.durations_h) {
            char buf[40];
            std::snprintf(buf, sizeof buf, "e%04dgwh_d%03dh",
                          static_cast<int>(std::llround(e_mwh / 1000.0)),
                          static_cast<int>(std::llround(dur)));
            const std::string id = buf;
            SystemSpec cased = base;
            TechnologySpec ess;
            ess.name = "sweep_ess";
            ess.tech_class = TechClass::storage;
            ess.existing_capacity = e_mwh / dur; // power rating
            ess.duration = dur;
            ess.fixed_energy_capacity = e_mwh;
            ess.roundtrip_efficiency = plan.sweep_roundtrip_efficiency;
            ess.reserve_flag = true;
            ess.investable = false; // its investment cost is the study output
            cased.technologies.push_back(ess);
            jobs.push_back({id, [id, cased, e_mwh, dur, base_total, rate, &plan] {
                                const PlanSolution sol = solve_plan(
                                    cased, all_year_labels(cased), {}, solver_opts(plan));
                                ScenarioResult r = summarize_case(id, cased, sol);
                                r.breakeven_cost_per_kwh = breakeven_cost(
                                    base_total, r.costs.total, rate, 25, e_mwh * 1000.0);
                                r.extra["energy_capacity_mwh"] = e_mwh;
                                r.extra["duration_h"] = dur;
                                r.extra["savings"] = base_total - r.costs.total;
                                return r;
                            }});
        }
    }
    return run_jobs(std::move(jobs), plan, "duration");
}

YearStudyResult run_year_study(const StudyPlan& plan) {
    validate(plan.spec);
    const std::vector<std::string> eval_years =
        plan.years.empty() ? all_year_labels(plan.spec) : plan.years;
    if (eval_years.size() < 2)
        throw ValidationError("year study: needs at least 2 years");
    for (const auto& y : eval_years)
        if (plan.spec.year_index(y) < 0)
            throw ValidationError("year study: unknown year '" + y + "'");

    YearStudyResult out;
    out.plan_labels = eval_years;
    out.plan_labels.push_back("multi");
    out.eval_years = eval_years;
    const size_t P = out.plan_labels.size(), E = eval_years.size();
    out.operating_cost.assign(P, std::vector<double>(E, 0.0));
    out.ens_mwh.assign(P, std::vector<double>(E, 0.0));
    out.plan_investment_cost.assign(P, 0.0);

    std::vector<CaseJob> jobs;
    std::vector<size_t> job_plan; // jobs are sorted later; map back by id
    std::map<std::string, size_t> id_to_plan;
    for (size_t p = 0; p < P; ++p) {
        const std::string& label = out.plan_labels[p];
        const std::string id = "plan_" + label;
        id_to_plan[id] = p;
        jobs.push_back({id, [id, label, &plan, &eval_years] {
            const bool multi = label == "multi";
            const std::vector<std::string> plan_years =
                multi ? eval_years : std::vector<std::string>{label};
            const PlanSolution expansion =
                solve_plan(plan.spec, plan_years, {}, solver_opts(plan));
            ScenarioResult r = summarize_case(id, plan.spec, expansion);

            BuildOptions fixed;
            fixed.fixed_capacity = expansion.net_capacity;
            fixed.operation_only = true;
            for (const auto& ey : eval_years) {
                const PlanSolution ev =
                    solve_plan(plan.spec, {ey}, fixed, solver_opts(plan));
                if (ev.status != lp::Status::optimal)
                    throw SolveError("re-dispatch of '" + id + "' on year '" + ey +
                                     "': solver returned " + lp::status_name(ev.status));
                const CostBreakdown cb = cost_breakdown(ev, plan.spec);
                r.extra["op_cost_eval_" + ey] = operating_cost(cb);
                r.extra["ens_eval_" + ey] = vec_sum(ev.per_year[0].ens);
            }
            return r;
        }});
        (void)job_plan;
    }

    out.cases = run_jobs(std::move(jobs), plan, "years");
    for (const auto& r : out.cases) {
        const size_t p = id_to_plan.at(r.case_id);
        out.plan_investment_cost[p] = r.costs.investment + r.costs.fixed_om;
        for (size_t e = 0; e < E; ++e) {
            out.operating_cost[p][e] = r.extra.at("op_cost_eval_" + eval_years[e]);
            out.ens_mwh[p][e] = r.extra.at("ens_eval_" + eval_years[e]);
        }
    }
    return out;
}

namespace {

std::string study_dir_name(StudyPlan::Kind kind) {
    switch (kind) {
    case StudyPlan::Kind::co2_sweep: return "co2";
    case StudyPlan::Kind::duration_sweep: return "duration";
    case StudyPlan::Kind::year_study: return "years";
    }
    return "study";
}

std::string fmt(double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.12g", v);
    return buf;
}

} // namespace

std::string summary_csv(const std::vector<ScenarioResult>& results,
                        const SystemSpec& spec) {
    std::ostringstream os;
    os << "case_id,status,objective,total_cost,average_energy_cost,co2_tonnes,"
          "co2_g_per_kwh,ens_mwh,unmet_reserve_mwh,breakeven_usd_per_kwh";
    for (const auto& t : spec.technologies) os << ",share_" << t.name;
    for (const auto& t : spec.technologies)
        if (t.tech_class == TechClass::vre) os << ",curt_" << t.name;
    os << "\n";
    for (const auto& r : results) {
        os << r.case_id << "," << r.status << "," << fmt(r.objective) << ","
           << fmt(r.costs.total) << "," << fmt(r.costs.average_energy_cost) << ","
           << fmt(r.emissions.total) << "," << fmt(r.emissions.intensity) << ","
           << fmt(r.ens_mwh) << "," << fmt(r.unmet_reserve_mwh) << ",";
        if (r.breakeven_cost_per_kwh) os << fmt(*r.breakeven_cost_per_kwh);
        for (const auto& t : spec.technologies) {
            auto it = r.energy_share.find(t.name);
            os << "," << (it != r.energy_share.end() ? fmt(it->second) : "");
        }
        for (const auto& t : spec.technologies) {
            if (t.tech_class != TechClass::vre) continue;
            auto it = r.curtailment_frac.find(t.name);
            os << "," << (it != r.curtailment_frac.end() ? fmt(it->second) : "");
        }
        os << "\n";
    }
    return os.str();
}

namespace {

std::string plot_csv(const std::vector<ScenarioResult>& results) {
    std::ostringstream os;
    os << "case_id,metric,value\n";
    for (const auto& r : results) {
        auto emit = [&](const std::string& metric, double v) {
            os << r.case_id << "," << metric << "," << fmt(v) << "\n";
        };
        emit("objective", r.objective);
        emit("cost:investment", r.costs.investment);
        emit("cost:fixed_om", r.costs.fixed_om);
        emit("cost:variable_om", r.costs.variable_om);
        emit("cost:fuel", r.costs.fuel);
        emit("cost:startup", r.costs.startup);
        emit("cost:ens", r.costs.ens_cost);
        emit("cost:unmet_reserve", r.costs.unmet_reserve_cost);
        emit("average_energy_cost", r.costs.average_energy_cost);
        emit("emissions:total", r.emissions.total);
        emit("emissions:intensity", r.emissions.intensity);
        emit("ens_mwh", r.ens_mwh);
        for (const auto& [k, v] : r.energy_share) emit("share:" + k, v);
        for (const auto& [k, v] : r.curtailment_frac) emit("curtailment:" + k, v);
        for (const auto& [k, v] : r.net_capacity_mw) emit("capacity:" + k, v);
        for (const auto& [k, v] : r.invested_mw) emit("invested:" + k, v);
        if (r.breakeven_cost_per_kwh) emit("breakeven_usd_per_kwh", *r.breakeven_cost_per_kwh);
        for (const auto& [k, v] : r.extra) emit("extra:" + k, v);
    }
    return os.str();
}

void write_manifest(const StudyPlan& plan, const std::string& study_name,
                    const std::vector<std::string>& case_ids) {
    json j;
    j["study"] = study_name;
    j["version"] = "1.0.0";
    j["spec_hash"] = spec_hash(plan.spec);
    j["created_unix"] = static_cast<std::int64_t>(std::time(nullptr));
    j["jobs"] = plan.jobs;
    j["solver"] = {{"tolerance", plan.solver.tolerance},
                   {"max_iterations", plan.solver.max_iterations}};
    j["cases"] = case_ids;
    write_file_atomic(plan.out_dir / study_name / "manifest.json", j.dump(2) + "\n");
}

std::vector<std::string> expected_case_ids(const StudyPlan& plan) {
    std::vector<std::string> ids;
    switch (plan.kind) {
    case StudyPlan::Kind::co2_sweep:
        for (const char* mode : {"bat_", "nobat_"})
            for (double f : plan.cap_fractions) ids.push_back(mode + frac_id(f));
        break;
    case StudyPlan::Kind::duration_sweep:
        ids.push_back("baseline");
        for (double e : plan.energy_capacities_mwh)
            for (double d : plan.durations_h) {
                char buf[40];
                std::snprintf(buf, sizeof buf, "e%04dgwh_d%03dh",
                              static_cast<int>(std::llround(e / 1000.0)),
                              static_cast<int>(std::llround(d)));
                ids.push_back(buf);
            }
        break;
    case StudyPlan::Kind::year_study: {
        const auto years =
            plan.years.empty() ? all_year_labels(plan.spec) : plan.years;
        for (const auto& y : years) ids.push_back("plan_" + y);
        ids.push_back("plan_multi");
        break;
    }
    }
    std::sort(ids.begin(), ids.end());
    return ids;
}

} // namespace

std::vector<ScenarioResult> run_study(const StudyPlan& plan) {
    const std::string study_name = study_dir_name(plan.kind);
    if (!plan.out_dir.empty()) {
        std::filesystem::create_directories(plan.out_dir / study_name);
        write_manifest(plan, study_name, expected_case_ids(plan));
    }

    std::vector<ScenarioResult> results;
    switch (plan.kind) {
    case StudyPlan::Kind::co2_sweep: results = run_co2_sweep(plan); break;
    case StudyPlan::Kind::duration_sweep: results = run_duration_sweep(plan); break;
    case StudyPlan::Kind::year_study: results = run_year_study(plan).cases; break;
    }

    if (!plan.out_dir.empty()) {
        const auto dir = plan.out_dir / study_name;
        write_file_atomic(dir / "summary.csv", summary_csv(results, plan.spec));
        write_file_atomic(dir / "plot_data.csv", plot_csv(results));
    }
    return results;
}

} // namespace capex
