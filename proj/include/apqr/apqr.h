#ifndef APQR_H
#define APQR_H

/* C interface to the all-photonic quantum repeater performance model.
 *
 * Workflow: parse a JSON configuration into an opaque model handle, then run
 * commands against it. Every string returned through a char** out-parameter
 * is heap-allocated and must be released with apqr_string_free().
 */

#ifdef __cplusplus
extern "C" {
#endif

#if defined(_WIN32)
#define APQR_API __declspec(dllexport)
#else
#define APQR_API __attribute__((visibility("default")))
#endif

/* Return codes; apqr_model_run mirrors the CLI exit codes. */
enum {
    APQR_OK = 0,        /* success */
    APQR_E_COMPUTE = 1, /* computation failed (stage named in the document) */
    APQR_E_CONFIG = 2,  /* schema violation (field path in the message) */
    APQR_E_VERDICT = 3  /* a consistency verdict failed; document still valid */
};

typedef struct apqr_model apqr_model;

APQR_API const char* apqr_version(void);

/* Parses and validates a JSON configuration. On success stores a handle in
 * *out and returns APQR_OK; otherwise returns APQR_E_CONFIG and, when error
 * is non-null, stores a diagnostic in *error. */
APQR_API int apqr_model_create(const char* config_json, apqr_model** out,
                               char** error);

APQR_API void apqr_model_destroy(apqr_model* model);

/* Copies the configuration's output preferences (format: "json" or "csv";
 * path: "" means stdout) into the given out-parameters. */
APQR_API int apqr_model_output(apqr_model* model, char** format_out,
                               char** path_out);

/* Runs one command: "evaluate", "optimize", "sweep", "mc", or "oracle".
 *
 * overrides_json may be NULL or a JSON object with any of: trials, seed,
 * threads, format. *document_out receives the machine document in the
 * requested format; *human_out (optional) a 3-significant-figure summary.
 * Returns the code taxonomy above. For APQR_E_COMPUTE and APQR_E_CONFIG the
 * document is a JSON error object and *error carries a short message; for
 * APQR_E_VERDICT the document holds the full results. */
APQR_API int apqr_model_run(apqr_model* model, const char* command,
                            const char* overrides_json, char** document_out,
                            char** human_out, char** error);

APQR_API void apqr_string_free(char* s);

/* Scalar helpers (no handle needed). */

/* Number of photons in one tree-encoded qubit, root excluded; -1 on bad
 * input or overflow. */
APQR_API long long apqr_tree_qubit_count(const int* branches, int levels);

/* Photon survival probability across one feed-forward step of fiber delay. */
APQR_API double apqr_survival_per_step(double tau_a_s, double c_m_per_s,
                                       double att_length_km);

/* Linear-optics Bell measurement success probability at photon loss
 * epsilon0. */
APQR_API double apqr_bell_success(double epsilon0);

/* Expected photons and seconds per qubit delivered by direct transmission
 * (no repeaters). Returns APQR_OK or APQR_E_COMPUTE. */
APQR_API int apqr_direct_transmission_cost(double length_km,
                                           double source_rate_hz,
                                           double att_length_km,
                                           double* photons, double* seconds);

#ifdef __cplusplus
}
#endif

#endif /* APQR_H */
