#include "doctest.h"

#include "capex/capex_c.h"

#include <cctype>
#include <cstring>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>

namespace fs = std::filesystem;

namespace {

std::string slurp(const fs::path& p) {
    std::ifstream in(p, std::ios::binary);
    REQUIRE(in.good());
    std::ostringstream os;
    os << in.rdbuf();
    return os.str();
}

fs::path fresh_dir(const std::string& name) {
    const fs::path dir = fs::temp_directory_path() / ("capex_capi_" + name);
    fs::remove_all(dir);
    return dir;
}

struct SystemHandle {
    capex_system* sys = nullptr;
    ~SystemHandle() { capex_system_free(sys); }
};

} // namespace

TEST_CASE("version and error strings are always valid") {
    REQUIRE(capex_version() != nullptr);
    CHECK(std::strlen(capex_version()) > 0);
    REQUIRE(capex_last_error() != nullptr);
}

TEST_CASE("null arguments map to the invalid-argument status") {
    capex_system* sys = nullptr;
    CHECK(capex_system_load(nullptr, &sys) == CAPEX_ERR_INVALID_ARG);
    CHECK(capex_system_load("x", nullptr) == CAPEX_ERR_INVALID_ARG);
    CHECK(capex_system_generate(1, 1, 24, nullptr) == CAPEX_ERR_INVALID_ARG);
    CHECK(capex_system_generate(0, 1, 24, &sys) == CAPEX_ERR_INVALID_ARG);
    CHECK(capex_system_generate(1, 1, 0, &sys) == CAPEX_ERR_INVALID_ARG);
    CHECK(capex_system_write(nullptr, "x") == CAPEX_ERR_INVALID_ARG);
    CHECK(capex_run_case(nullptr, nullptr, "x") == CAPEX_ERR_INVALID_ARG);
    CHECK(capex_export_mps(nullptr, nullptr, "x") == CAPEX_ERR_INVALID_ARG);
    CHECK(capex_run_study(nullptr, nullptr, "x") == CAPEX_ERR_INVALID_ARG);
    CHECK(capex_last_error()[0] != '\0');

    // counting on a null handle is defined and returns zero
    CHECK(capex_system_tech_count(nullptr) == 0);
    CHECK(capex_system_year_count(nullptr) == 0);
    // freeing a null handle is a no-op
    capex_system_free(nullptr);
}

TEST_CASE("generate, inspect, write and reload a system") {
    SystemHandle h;
    REQUIRE(capex_system_generate(2, 42, 48, &h.sys) == CAPEX_OK);
    REQUIRE(h.sys != nullptr);
    CHECK(capex_system_tech_count(h.sys) == 14);
    CHECK(capex_system_year_count(h.sys) == 2);

    char summary[4096];
    REQUIRE(capex_system_summary(h.sys, summary, sizeof summary) == CAPEX_OK);
    const std::string text = summary;
    CHECK(text.find("14 technologies") != std::string::npos);
    CHECK(text.find("ccgt") != std::string::npos);
    CHECK(text.find("battery_3h") != std::string::npos);

    char hash[64];
    REQUIRE(capex_system_hash(h.sys, hash, sizeof hash) == CAPEX_OK);
    REQUIRE(std::strlen(hash) == 16);
    for (const char* p = hash; *p; ++p) CHECK(std::isxdigit(static_cast<unsigned char>(*p)));

    SUBCASE("tiny output buffers truncate but stay terminated") {
        char small[4];
        REQUIRE(capex_system_hash(h.sys, small, sizeof small) == CAPEX_OK);
        CHECK(std::strlen(small) == 3);
        CHECK(std::strncmp(small, hash, 3) == 0);
        CHECK(capex_system_hash(h.sys, nullptr, 0) == CAPEX_ERR_INVALID_ARG);
    }

    SUBCASE("same seed reproduces the same hash, other seeds differ") {
        SystemHandle again, other;
        REQUIRE(capex_system_generate(2, 42, 48, &again.sys) == CAPEX_OK);
        REQUIRE(capex_system_generate(2, 43, 48, &other.sys) == CAPEX_OK);
        char h2[64], h3[64];
        REQUIRE(capex_system_hash(again.sys, h2, sizeof h2) == CAPEX_OK);
        REQUIRE(capex_system_hash(other.sys, h3, sizeof h3) == CAPEX_OK);
        CHECK(std::string(hash) == h2);
        CHECK(std::string(hash) != h3);
    }

    SUBCASE("written directories load back to the same system") {
        const fs::path dir = fresh_dir("roundtrip");
        REQUIRE(capex_system_write(h.sys, dir.string().c_str()) == CAPEX_OK);
        REQUIRE(fs::exists(dir / "config.toml"));

        SystemHandle back;
        REQUIRE(capex_system_load((dir / "config.toml").string().c_str(), &back.sys) ==
                CAPEX_OK);
        CHECK(capex_system_tech_count(back.sys) == 14);
        CHECK(capex_system_year_count(back.sys) == 2);
        char h2[64];
        REQUIRE(capex_system_hash(back.sys, h2, sizeof h2) == CAPEX_OK);
        CHECK(std::string(hash) == h2);
        fs::remove_all(dir);
    }
}

TEST_CASE("loading a missing config reports an io error") {
    capex_system* sys = reinterpret_cast<capex_system*>(0x1);
    CHECK(capex_system_load("/nonexistent/system.toml", &sys) == CAPEX_ERR_IO);
    CHECK(sys == nullptr); // cleared on failure
    CHECK(capex_last_error()[0] != '\0');
}

TEST_CASE("run_case writes results and maps failures to statuses") {
    SystemHandle h;
    REQUIRE(capex_system_generate(1, 7, 24, &h.sys) == CAPEX_OK);

    capex_run_options opts{};
    opts.year = "2006";
    opts.co2_kind = CAPEX_CO2_NONE;

    const fs::path dir = fresh_dir("runcase");
    REQUIRE(capex_run_case(h.sys, &opts, dir.string().c_str()) == CAPEX_OK);
    const std::string json = slurp(dir / "result.json");
    CHECK(json.find("\"case_id\": \"year_2006\"") != std::string::npos);
    CHECK(json.find("\"status\": \"optimal\"") != std::string::npos);
    const std::string csv = slurp(dir / "summary.csv");
    CHECK(csv.rfind("case_id,status,objective", 0) == 0);
    CHECK(csv.find("year_2006,optimal,") != std::string::npos);
    fs::remove_all(dir);

    SUBCASE("unknown year is a validation error") {
        capex_run_options bad = opts;
        bad.year = "1999";
        CHECK(capex_run_case(h.sys, &bad, dir.string().c_str()) ==
              CAPEX_ERR_VALIDATION);
        CHECK(std::string(capex_last_error()).find("1999") != std::string::npos);
    }
    SUBCASE("starved solver is a solve error") {
        capex_run_options starved = opts;
        starved.max_iterations = 1;
        CHECK(capex_run_case(h.sys, &starved, dir.string().c_str()) ==
              CAPEX_ERR_SOLVE);
    }
}

TEST_CASE("export_mps writes a well-formed fixed-format file") {
    SystemHandle h;
    REQUIRE(capex_system_generate(1, 7, 24, &h.sys) == CAPEX_OK);

    capex_run_options opts{};
    opts.year = "2006";
    opts.co2_kind = CAPEX_CO2_TOTAL;
    opts.co2_value = 1e6;

    const fs::path dir = fresh_dir("mps");
    fs::create_directories(dir);
    const fs::path file = dir / "model.mps";
    REQUIRE(capex_export_mps(h.sys, &opts, file.string().c_str()) == CAPEX_OK);

    const std::string mps = slurp(file);
    CHECK(mps.rfind("NAME", 0) == 0);
    for (const char* section : {"\nROWS\n", "\nCOLUMNS\n", "\nRHS\n", "\nBOUNDS\n",
                                "\nENDATA"})
        CHECK(mps.find(section) != std::string::npos);
    // investment variables are named after their technologies
    CHECK(mps.find("inv_ccgt") != std::string::npos);

    // the emissions cap adds one constraint row per year
    const fs::path uncapped = dir / "uncapped.mps";
    capex_run_options no_cap = opts;
    no_cap.co2_kind = CAPEX_CO2_NONE;
    REQUIRE(capex_export_mps(h.sys, &no_cap, uncapped.string().c_str()) == CAPEX_OK);
    auto count_rows = [](const std::string& text) {
        const size_t a = text.find("\nROWS\n"), b = text.find("\nCOLUMNS\n");
        REQUIRE(a != std::string::npos);
        REQUIRE(b != std::string::npos);
        int n = 0;
        for (size_t i = a + 6; i < b; ++i)
            if (text[i] == '\n') ++n;
        return n;
    };
    CHECK(count_rows(mps) == count_rows(slurp(uncapped)) + 1);
    fs::remove_all(dir);
}

TEST_CASE("run_study drives the scenario engine end to end") {
    SystemHandle h;
    REQUIRE(capex_system_generate(1, 7, 24, &h.sys) == CAPEX_OK);

    capex_study_options opts{};
    opts.kind = CAPEX_STUDY_CO2;
    opts.jobs = 2;
    const double fracs[] = {1.0, 0.0};
    opts.cap_fractions = fracs;
    opts.num_cap_fractions = 2;

    const fs::path dir = fresh_dir("study");
    REQUIRE(capex_run_study(h.sys, &opts, dir.string().c_str()) == CAPEX_OK);

    CHECK(fs::exists(dir / "co2" / "manifest.json"));
    CHECK(fs::exists(dir / "co2" / "plot_data.csv"));
    const std::string csv = slurp(dir / "co2" / "summary.csv");
    int lines = 0;
    for (char c : csv)
        if (c == '\n') ++lines;
    CHECK(lines == 5); // header + 4 cases
    for (const char* id : {"bat_f100", "bat_f000", "nobat_f100", "nobat_f000"}) {
        CHECK(csv.find(id) != std::string::npos);
        CHECK(fs::exists(dir / "co2" / id / "result.json"));
    }
    fs::remove_all(dir);
}
