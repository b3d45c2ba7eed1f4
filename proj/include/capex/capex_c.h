/* C API for the capacity expansion engine. Opaque handles, status codes,
 * thread-local error messages. */
#ifndef CAPEX_C_H
#define CAPEX_C_H

#include <stddef.h>
#include <stdint.h>

#ifdef __cplusplus
extern "C" {
#endif

typedef enum capex_status {
    CAPEX_OK = 0,
    CAPEX_ERR_VALIDATION = 2,
    CAPEX_ERR_SOLVE = 3,
    CAPEX_ERR_PARTIAL = 4,
    CAPEX_ERR_IO = 5,
    CAPEX_ERR_INVALID_ARG = 6
} capex_status;

typedef struct capex_system capex_system;

typedef enum capex_co2_kind {
    CAPEX_CO2_FROM_CONFIG = 0,
    CAPEX_CO2_NONE = 1,
    CAPEX_CO2_TOTAL = 2,
    CAPEX_CO2_INTENSITY = 3
} capex_co2_kind;

typedef struct capex_run_options {
    const char* year;        /* NULL = multi-year over all years */
    capex_co2_kind co2_kind;
    double co2_value;        /* tonnes/yr or g/kWh */
    double tolerance;        /* 0 = default */
    int max_iterations;      /* 0 = default */
} capex_run_options;

typedef enum capex_study_kind {
    CAPEX_STUDY_CO2 = 0,
    CAPEX_STUDY_DURATION = 1,
    CAPEX_STUDY_YEARS = 2
} capex_study_kind;

typedef struct capex_study_options {
    capex_study_kind kind;
    int jobs;                       /* <=0 = 1 */
    const double* cap_fractions;    /* NULL = defaults */
    size_t num_cap_fractions;
    const double* durations_h;      /* NULL = defaults */
    size_t num_durations;
    const double* capacities_gwh;   /* NULL = defaults */
    size_t num_capacities;
    double tolerance;
    int max_iterations;
} capex_study_options;

/* Last error message of the calling thread; valid until the next API call
 * on the same thread. */
const char* capex_last_error(void);

const char* capex_version(void);

/* --- system lifecycle ---------------------------------------------------- */

capex_status capex_system_load(const char* config_path, capex_system** out);

/* Deterministic synthetic dataset: bundled technologies, `years` synthetic
 * weather/load years of `hours` steps each. */
capex_status capex_system_generate(int years, uint64_t seed, int hours,
                                   capex_system** out);

/* Writes config + profile CSVs; the directory loads back to an equal
 * system. */
capex_status capex_system_write(const capex_system* sys, const char* dir);

void capex_system_free(capex_system* sys);

int capex_system_tech_count(const capex_system* sys);
int capex_system_year_count(const capex_system* sys);

/* Human-readable technology/profile summary table. Truncates to len-1. */
capex_status capex_system_summary(const capex_system* sys, char* buf, size_t len);

/* Stable hash of the system, independent of config key order. */
capex_status capex_system_hash(const capex_system* sys, char* buf, size_t len);

/* --- solving ------------------------------------------------------------- */

/* Builds and solves one case; writes result.json + summary.csv + manifest
 * under out_dir. */
capex_status capex_run_case(const capex_system* sys, const capex_run_options* opts,
                            const char* out_dir);

/* Builds the case and writes a fixed-format MPS file instead of solving. */
capex_status capex_export_mps(const capex_system* sys, const capex_run_options* opts,
                              const char* path);

/* Runs a study; writes <out>/<study>/<case>/result.json, summary.csv and
 * long-format plot tables. CAPEX_ERR_PARTIAL when some cases failed after
 * others were persisted. */
capex_status capex_run_study(const capex_system* sys, const capex_study_options* opts,
                             const char* out_dir);

#ifdef __cplusplus
} /* extern "C" */
#endif

#endif /* CAPEX_C_H */
