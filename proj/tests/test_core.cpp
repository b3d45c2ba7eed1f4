#include "doctest.h"

#include "capex/config.hpp"
#include "capex/finance.hpp"
#include "capex/profile.hpp"
#include "capex/synth.hpp"
#include "capex/types.hpp"

#include <cmath>
#include <filesystem>
#include <fstream>

using namespace capex;

namespace {

std::filesystem::path scratch_dir(const std::string& tag) {
    auto p = std::filesystem::temp_directory_path() / ("capex_core_" + tag);
    std::filesystem::remove_all(p);
    std::filesystem::create_directories(p);
    return p;
}

void write_text(const std::filesystem::path& p, const std::string& text) {
    std::ofstream out(p);
    out << text;
}

} // namespace

TEST_CASE("annuity factor") {
    CHECK(annuity_factor(0.10, 25) == doctest::Approx(0.11016807).epsilon(1e-6));
    CHECK(annuity_factor(0.10, 1) == doctest::Approx(1.10));
    // strictly decreasing in lifetime, always above the rate
    double prev = annuity_factor(0.08, 1);
    for (int life = 2; life <= 60; ++life) {
        const double a = annuity_factor(0.08, life);
        CHECK(a < prev);
        CHECK(a > 0.08);
        prev = a;
    }
    CHECK_THROWS_AS(annuity_factor(0.0, 25), ValidationError);
    CHECK_THROWS_AS(annuity_factor(0.1, 0), ValidationError);
}

TEST_CASE("heat rate and emissions rate") {
    CHECK(heat_rate(1.0) == doctest::Approx(3.412142));
    CHECK(heat_rate(0.5) == doctest::Approx(6.824284));
    CHECK_THROWS_AS(heat_rate(0.0), ValidationError);
    CHECK_THROWS_AS(heat_rate(1.5), ValidationError);

    FuelSpec gas{"gas", 13.0, 0.053, false};
    TechnologySpec ccgt;
    ccgt.efficiency = 0.517;
    // hand value: 3.412142 / 0.517 * 0.053
    CHECK(emissions_rate(ccgt, gas, 0.0) == doctest::Approx(0.349794).epsilon(1e-4));

    TechnologySpec ccs;
    ccs.efficiency = 0.447;
    // 3.412142 / 0.447 * 0.053 * (1 - 0.88)
    CHECK(emissions_rate(ccs, gas, 0.88) == doctest::Approx(0.0485486).epsilon(1e-4));

    FuelSpec bio{"biofuel", 20.0, 0.0, true};
    TechnologySpec b;
    b.efficiency = 0.341;
    CHECK(emissions_rate(b, bio, 0.0) == 0.0);
}

TEST_CASE("fuel cost per mwh") {
    SystemSpec s;
    s.fuels.push_back({"gas", 10.0, 0.053, false});
    TechnologySpec t;
    t.efficiency = 0.5;
    t.fuel = "gas";
    s.technologies.push_back(t);
    CHECK(fuel_cost_per_mwh(t, s) == doctest::Approx(3.412142 / 0.5 * 10.0));
    TechnologySpec none;
    CHECK(fuel_cost_per_mwh(none, s) == 0.0);
    t.fuel = "unobtanium";
    CHECK_THROWS_AS(fuel_cost_per_mwh(t, s), ValidationError);
}

TEST_CASE("breakeven cost") {
    CHECK(breakeven_cost(100.0, 100.0, 0.1, 25, 1000.0) == 0.0);
    // 1e6 $/yr savings, 10^5 kWh -> 90.77 $/kWh
    CHECK(breakeven_cost(2e6, 1e6, 0.10, 25, 1e5) ==
          doctest::Approx(90.7704).epsilon(1e-4));
    // linear in 1/capacity
    CHECK(breakeven_cost(2e6, 1e6, 0.10, 25, 1e6) ==
          doctest::Approx(9.07704).epsilon(1e-4));
    CHECK_THROWS_AS(breakeven_cost(1, 0, 0.1, 25, 0.0), ValidationError);
}

TEST_CASE("profile scaling") {
    Profile p;
    p.values = {0.2, 0.4, 0.6};
    const auto r = scale_profile(p, 0.8);
    CHECK(r.profile.values[0] == doctest::Approx(0.4));
    CHECK(r.profile.values[1] == doctest::Approx(0.8));
    CHECK(r.profile.values[2] == 1.0); // clipped from 1.2
    CHECK(r.clipped_hours == 1);

    Profile zero;
    zero.values = {0.0, 0.0};
    CHECK_THROWS_AS(scale_profile(zero, 0.5), ValidationError);
    CHECK_THROWS_AS(scale_profile(p, 0.0), ValidationError);
}

TEST_CASE("csv io") {
    const auto dir = scratch_dir("csv");
    SUBCASE("round trip") {
        std::map<std::string, std::vector<double>> data{
            {"demand", {1.5, 2.25, 3.0}}, {"wind", {0.1, 0.2, 0.3}}};
        write_csv(dir / "a.csv", {"demand", "wind"}, data);
        const auto back = read_csv(dir / "a.csv");
        CHECK(back == data);
    }
    SUBCASE("bad number reports the line") {
        write_text(dir / "bad.csv", "demand\n1.0\nnope\n");
        CHECK_THROWS_WITH_AS(read_csv(dir / "bad.csv"), doctest::Contains("line 3"),
                             IoError);
    }
    SUBCASE("missing file") {
        CHECK_THROWS_AS(read_csv(dir / "absent.csv"), IoError);
    }
    SUBCASE("ragged row") {
        write_text(dir / "ragged.csv", "a,b\n1.0\n");
        CHECK_THROWS_WITH_AS(read_csv(dir / "ragged.csv"),
                             doctest::Contains("expected 2 columns"), IoError);
    }
    std::filesystem::remove_all(dir);
}

TEST_CASE("toml subset parser") {
    SUBCASE("tables, arrays, comments") {
        const auto doc = toml::parse("# header\n[system]\nhours = 24 # trailing\n"
                                     "name = \"x # not a comment\"\nflag = true\n"
                                     "[[fuel]]\nname = \"gas\"\n[[fuel]]\nname = \"oil\"\n");
        CHECK(std::get<double>(doc.tables.at("system").at("hours")) == 24);
        CHECK(std::get<std::string>(doc.tables.at("system").at("name")) ==
              "x # not a comment");
        CHECK(std::get<bool>(doc.tables.at("system").at("flag")) == true);
        REQUIRE(doc.table_arrays.at("fuel").size() == 2);
        CHECK(std::get<std::string>(doc.table_arrays.at("fuel")[1].at("name")) == "oil");
    }
    SUBCASE("errors carry the line number") {
        CHECK_THROWS_WITH_AS(toml::parse("[system]\nbad line\n"),
                             doctest::Contains(":2"), ValidationError);
        CHECK_THROWS_AS(toml::parse("key_outside = 1\n"), ValidationError);
        CHECK_THROWS_AS(toml::parse("[unclosed\n"), ValidationError);
    }
}

TEST_CASE("default dataset") {
    const SystemSpec s = default_system(2, 1, 48);
    CHECK(s.technologies.size() == 14);
    CHECK(s.years.size() == 2);
    CHECK(s.hours == 48);
    // fuel prices are Euro/boe converted at 1.10 USD/EUR, 5.698 MMBtu/boe
    CHECK(s.find_fuel("gas")->price == doctest::Approx(68.0 * 1.10 / 5.698));
    CHECK(s.find_fuel("biofuel")->co2_content == 0.0);
    CHECK(s.find_tech("hydro_reservoir")->existing_capacity == doctest::Approx(12126));
    CHECK(s.find_tech("battery_8h")->duration == 8.0);
    CHECK(s.voll == 13000.0);
    // availability targets survive scaling (up to clipping loss)
    const auto& solar = s.years[0].hourly.at("solar_af");
    double m = 0;
    for (double v : solar.values) {
        CHECK(v >= 0.0);
        CHECK(v <= 1.0);
        m += v;
    }
    m /= solar.values.size();
    CHECK(m == doctest::Approx(0.173).epsilon(0.05));
    // deterministic for a fixed seed
    const SystemSpec again = default_system(2, 1, 48);
    CHECK(s == again);
    const SystemSpec other = default_system(2, 2, 48);
    CHECK(s.years[0].demand.values != other.years[0].demand.values);
}

TEST_CASE("validate rejects broken specs") {
    SystemSpec s = default_system(2, 1, 48);
    SUBCASE("accepts the default") { CHECK_NOTHROW(validate(s)); }
    SUBCASE("weights must sum to 1") {
        s.years[0].weight = 0.2;
        CHECK_THROWS_WITH_AS(validate(s), doctest::Contains("weights"), ValidationError);
    }
    SUBCASE("dangling fuel") {
        s.technologies[0].fuel = "plutonium";
        CHECK_THROWS_AS(validate(s), ValidationError);
    }
    SUBCASE("profile length") {
        s.years[0].demand.values.pop_back();
        CHECK_THROWS_AS(validate(s), ValidationError);
    }
    SUBCASE("biofuel with carbon") {
        s.fuels[3].co2_content = 0.01;
        CHECK_THROWS_AS(validate(s), ValidationError);
    }
    SUBCASE("duplicate tech names") {
        s.technologies.push_back(s.technologies[0]);
        CHECK_THROWS_AS(validate(s), ValidationError);
    }
    SUBCASE("availability outside [0,1]") {
        s.technologies[6].availability_const = 1.5; // hydro_ror constant
        CHECK_THROWS_AS(validate(s), ValidationError);
    }
    SUBCASE("storage duration") {
        s.find_tech("battery_3h");
        s.technologies[9].duration = 0.0;
        CHECK_THROWS_AS(validate(s), ValidationError);
    }
    SUBCASE("no technologies") {
        s.technologies.clear();
        CHECK_THROWS_AS(validate(s), ValidationError);
    }
}

TEST_CASE("config save/load round trip") {
    const auto dir = scratch_dir("cfg");
    const SystemSpec s = default_system(2, 7, 24);
    save_system(s, dir);
    const SystemSpec back = load_system(dir / "config.toml");
    CHECK(back.fuels == s.fuels);
    REQUIRE(back.technologies.size() == s.technologies.size());
    for (size_t i = 0; i < s.technologies.size(); ++i) {
        CAPTURE(s.technologies[i].name);
        CHECK(back.technologies[i] == s.technologies[i]);
    }
    REQUIRE(back.years.size() == s.years.size());
    for (size_t i = 0; i < s.years.size(); ++i) {
        CAPTURE(s.years[i].label);
        CHECK(back.years[i].weight == s.years[i].weight);
        CHECK(back.years[i].demand == s.years[i].demand);
        CHECK(back.years[i].hourly == s.years[i].hourly);
        CHECK(back.years[i].weekly == s.years[i].weekly);
    }
    CHECK(back.reserve_rules == s.reserve_rules);
    CHECK(back.voll == s.voll);
    CHECK(back.unmet_reserve_penalty == s.unmet_reserve_penalty);
    CHECK(back.discount_rate == s.discount_rate);
    CHECK(back.co2 == s.co2);
    CHECK(back.hydro == s.hydro);
    CHECK(back.hours == s.hours);
    CHECK(back == s);
    CHECK(spec_hash(back) == spec_hash(s));
    std::filesystem::remove_all(dir);
}

TEST_CASE("spec hash is stable under key reordering") {
    const auto dir = scratch_dir("hash");
    // two configs with the same content, different key order
    const std::string csv = "demand,af\n10,0.5\n12,0.25\n";
    write_text(dir / "y.csv", csv);
    write_text(dir / "a.toml",
               "[system]\nhours = 2\nvoll = 9000\n"
               "[reserves]\nop_load_frac = 0\nop_vre_frac = 0\nreg_load_frac = 0\n"
               "[[technology]]\nname = \"pv\"\nclass = \"vre\"\ninv_cost = 500\n"
               "availability = \"af\"\n"
               "[[year]]\nlabel = \"y\"\nweight = 1\nhourly = \"y.csv\"\n");
    write_text(dir / "b.toml",
               "[system]\nvoll = 9000\nhours = 2\n"
               "[reserves]\nreg_load_frac = 0\nop_vre_frac = 0\nop_load_frac = 0\n"
               "[[technology]]\nclass = \"vre\"\navailability = \"af\"\n"
               "inv_cost = 500\nname = \"pv\"\n"
               "[[year]]\nweight = 1\nhourly = \"y.csv\"\nlabel = \"y\"\n");
    const SystemSpec a = load_system(dir / "a.toml");
    const SystemSpec b = load_system(dir / "b.toml");
    CHECK(a == b);
    CHECK(spec_hash(a) == spec_hash(b));
    std::filesystem::remove_all(dir);
}

TEST_CASE("load_system error paths") {
    const auto dir = scratch_dir("cfgerr");
    SUBCASE("missing config") {
        CHECK_THROWS_WITH_AS(load_system(dir / "nope.toml"), doctest::Contains("nope"),
                             IoError);
    }
    SUBCASE("missing profile csv") {
        write_text(dir / "c.toml",
                   "[[technology]]\nname = \"pv\"\nclass = \"vre\"\n"
                   "[[year]]\nlabel = \"y\"\nweight = 1\nhourly = \"absent.csv\"\n");
        CHECK_THROWS_WITH_AS(load_system(dir / "c.toml"), doctest::Contains("absent"),
                             IoError);
    }
    SUBCASE("no demand column") {
        write_text(dir / "y.csv", "wind\n0.5\n");
        write_text(dir / "c.toml",
                   "[[technology]]\nname = \"pv\"\nclass = \"vre\"\n"
                   "[[year]]\nlabel = \"y\"\nweight = 1\nhourly = \"y.csv\"\n");
        CHECK_THROWS_WITH_AS(load_system(dir / "c.toml"), doctest::Contains("demand"),
                             ValidationError);
    }
    std::filesystem::remove_all(dir);
}
