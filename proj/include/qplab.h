#ifndef QPLAB_H
#define QPLAB_H

/* C interface to the q-parabolic laboratory. All functions return a
 * qpl_status unless documented otherwise; on any nonzero status the
 * thread-local message from qpl_last_error() explains what went wrong.
 * Handles are opaque and must be released with the matching _free call. */

#include <stddef.h>

#if defined(_WIN32)
#define QPL_API __declspec(dllexport)
#else
#define QPL_API __attribute__((visibility("default")))
#endif

#ifdef __cplusplus
extern "C" {
#endif

typedef enum qpl_status {
    QPL_OK = 0,
    QPL_ASSERTION_FAILED = 1, /* a requested check did not hold */
    QPL_CONFIG_ERROR = 2,     /* invalid parameters or configuration */
    QPL_SOLVER_FAILURE = 3,   /* integration or iteration broke down */
    QPL_INVALID_ARGUMENT = 4  /* null pointer, bad buffer, bad enum */
} qpl_status;

/* Library version string, e.g. "1.0.0". Never NULL. */
QPL_API const char* qpl_version(void);

/* Message for the most recent failure on this thread. Never NULL; empty
 * string when the last call succeeded. The pointer stays valid until the
 * next qplab call on the same thread. */
QPL_API const char* qpl_last_error(void);

/* ----------------------------------------------------------- exponents */

typedef struct qpl_derived {
    double d;      /* fictitious dimension (n-1)(q-1)/(p-1) + 1 */
    double lambda; /* d(q-2) + q */
    double alpha;  /* d / lambda: sup-norm decay rate */
    double spread; /* 1 / lambda: support growth rate */
    double sigma;  /* d - n */
    double mu;     /* sigma / lambda */
    int range_condition; /* 1 when 2n < q(n-1) + 2p */
    int regime;          /* 0 slow (q > 2), 1 linear (q = 2), 2 fast (q < 2) */
} qpl_derived;

QPL_API qpl_status qpl_params_derive(int n, double p, double q, qpl_derived* out);

/* -------------------------------------------------- source-type family */

/* Value of the source-type (Barenblatt) solution with constant C and age
 * offset t_delay, at radius r and time t. */
QPL_API qpl_status qpl_barenblatt_eval(int n, double p, double q, double C,
                                       double t_delay, double r, double t,
                                       double* out);

/* Support radius at time t (slow regime; +inf otherwise). */
QPL_API qpl_status qpl_barenblatt_support(int n, double p, double q, double C,
                                          double t_delay, double t, double* out);

/* Conserved d-mass integral of the profile. */
QPL_API qpl_status qpl_barenblatt_mass(int n, double p, double q, double C,
                                       double* out);

/* Inverts the mass map: the C whose source solution carries `mass`. */
QPL_API qpl_status qpl_barenblatt_c_for_mass(int n, double p, double q, double mass,
                                             double* out);

/* --------------------------------------------------- separable profile */

/* The friendly-giant spatial profile V on the unit ball (q > 2), computed
 * by monotone fixed-point iteration from a constant upper solution. */
typedef struct qpl_giant qpl_giant;

typedef struct qpl_giant_report {
    int iterations;
    double final_change;      /* sup change of the last iterate */
    double integral_residual; /* sup |V - TV| at the fixed point */
    double ode_residual;      /* first-order gradient-equation residual */
    double value_at_origin;
} qpl_giant_report;

/* nodes >= 16 (1024 is the library default passed as 0), tol > 0 (0 picks
 * 1e-10), max_iter > 0 (0 picks 200). */
QPL_API qpl_status qpl_giant_solve(int n, double p, double q, int nodes,
                                   double tol, int max_iter, qpl_giant** out);
QPL_API void qpl_giant_free(qpl_giant* g);

QPL_API qpl_status qpl_giant_get_report(const qpl_giant* g, qpl_giant_report* out);

/* Number of radial nodes in the stored profile. */
QPL_API qpl_status qpl_giant_nodes(const qpl_giant* g, int* out);

/* Separable solution t^{-1/(q-2)} V(r) at radius r in [0, 1], time t > 0. */
QPL_API qpl_status qpl_giant_eval(const qpl_giant* g, double r, double t,
                                  double* out);

/* Writes the profile as a two-column r,V CSV with provenance comments. */
QPL_API qpl_status qpl_giant_export_csv(const qpl_giant* g, const char* path);

/* ------------------------------------------------------------- solver */

/* A radial finite-volume simulation, configured by the same text format as
 * scenario files (sections [params], [domain], [solver], [initial], [run],
 * [analysis], [output]). Checks and output sections are accepted but only
 * consulted by qpl_scenario_run, not by the stepping interface. */
typedef struct qpl_sim qpl_sim;

QPL_API qpl_status qpl_sim_create(const char* scenario_text, qpl_sim** out);
QPL_API void qpl_sim_free(qpl_sim* s);

QPL_API qpl_status qpl_sim_cells(const qpl_sim* s, int* out);
QPL_API qpl_status qpl_sim_time(const qpl_sim* s, double* out);
QPL_API qpl_status qpl_sim_sup(const qpl_sim* s, double* out);
QPL_API qpl_status qpl_sim_mass(const qpl_sim* s, double* out);
QPL_API qpl_status qpl_sim_support(const qpl_sim* s, double* out);

/* Copies cell midpoints and values into caller buffers of length capacity;
 * fails with QPL_INVALID_ARGUMENT when capacity < cell count. Either
 * destination may be NULL to skip it. */
QPL_API qpl_status qpl_sim_profile(const qpl_sim* s, double* r_out, double* u_out,
                                   size_t capacity);

/* Advances the simulation to exactly t_target (adaptive explicit steps). */
QPL_API qpl_status qpl_sim_advance(qpl_sim* s, double t_target);

/* --------------------------------------------------------- scenarios */

/* Parses and runs a scenario file end to end: build, integrate, write the
 * artifact tree under out_root (NULL or "" means "out"), evaluate checks.
 * Returns the scenario exit code: 0 pass, 1 a check failed, 2 configuration
 * error, 3 solver failure (qpl_last_error carries the reason for 1-3).
 * seed_override >= 0 replaces the scenario seed; strict is reserved.
 * When out_dir is non-NULL the resolved artifact directory is copied into
 * it (truncated to out_dir_capacity - 1 characters, always terminated). */
QPL_API int qpl_scenario_run(const char* config_path, const char* out_root,
                             long long seed_override, int strict, char* out_dir,
                             size_t out_dir_capacity);

#ifdef __cplusplus
} /* extern "C" */
#endif

#endif /* QPLAB_H */
