/* C interface to the c1k library.
 *
 * Every call that can fail returns a c1k_status. On failure the message is
 * available from c1k_last_error(ctx) until the next call on that context.
 * Strings returned through char** are owned by the caller and released with
 * c1k_string_free. Handles are released with their *_free function; passing
 * NULL to any *_free is a no-op.
 *
 * A context is not thread-safe; use one context per thread. Set, jet and
 * charge handles are immutable and may be shared between contexts.
 */
#ifndef C1K_C1K_H
#define C1K_C1K_H

#include <stddef.h>

#ifdef __cplusplus
extern "C" {
#endif

#if defined(_WIN32)
#define C1K_API __declspec(dllexport)
#else
#define C1K_API __attribute__((visibility("default")))
#endif

typedef enum c1k_status {
  C1K_OK = 0,
  C1K_CONTRACT = 2,     /* precondition violated */
  C1K_INCONCLUSIVE = 3, /* verdict computed but Inconclusive; output is still written */
  C1K_USAGE = 64,       /* bad arguments (null handles, unknown mode names) */
  C1K_PARSE = 65,       /* malformed JSON */
  C1K_INTERNAL = 70
} c1k_status;

typedef struct c1k_context c1k_context;
typedef struct c1k_set c1k_set;
typedef struct c1k_jet c1k_jet;
typedef struct c1k_charge c1k_charge;

C1K_API const char* c1k_version(void);

/* config_json may be NULL for defaults. C1K_CELL_BUDGET in the environment
 * overrides the cell budget. */
C1K_API c1k_status c1k_context_new(const char* config_json, c1k_context** out);
C1K_API void c1k_context_free(c1k_context* ctx);
C1K_API const char* c1k_last_error(const c1k_context* ctx);
C1K_API c1k_status c1k_context_config(c1k_context* ctx, char** out_json);
C1K_API void c1k_string_free(char* s);

/* 64-bit FNV-1a of a byte buffer, as 16 hex digits. */
C1K_API c1k_status c1k_fnv1a64(const char* data, size_t len, char** out);

/* Wraps a result in the report envelope. inputs_json is an array of
 * [name, hash] pairs (may be NULL). */
C1K_API c1k_status c1k_report(c1k_context* ctx, const char* command, const char* inputs_json,
                              const char* result_json, char** out);

/* ---- sets ---------------------------------------------------------------- */

C1K_API c1k_status c1k_set_from_json(c1k_context* ctx, const char* json, c1k_set** out);
/* Named constructions. Region ids (disk, square, rectangle, annulus, cusp,
 * sauter, disk_with_holes, product, halfplane_clip) rasterize at cell size h.
 * One-dimensional specs: geometric, power, cantor, interval,
 * isolated_sequence, regular_interval_sequence (h is ignored). */
C1K_API c1k_status c1k_set_build(c1k_context* ctx, const char* spec, const char* params_json,
                                 double h, c1k_set** out);
C1K_API c1k_status c1k_set_to_json(c1k_context* ctx, const c1k_set* set, char** out);
/* 1 or 2; 0 for NULL. */
C1K_API int c1k_set_dimension(const c1k_set* set);
C1K_API c1k_status c1k_set_info(c1k_context* ctx, const c1k_set* set, char** out);
C1K_API void c1k_set_free(c1k_set* set);

/* ---- one-dimensional structure ------------------------------------------ */

/* policy_json may be NULL (the context policy applies). */
C1K_API c1k_status c1k_sigma(c1k_context* ctx, const c1k_set* set, double xi,
                             const char* policy_json, char** out);
C1K_API c1k_status c1k_decide_equality(c1k_context* ctx, const c1k_set* set, char** out);
C1K_API c1k_status c1k_counterexample(c1k_context* ctx, const c1k_set* set, double xi, int windows,
                                      char** out);

/* ---- intrinsic metric ----------------------------------------------------- */

/* Completeness verdict; the probe is used for raster sets without a certificate. */
C1K_API c1k_status c1k_completeness(c1k_context* ctx, const c1k_set* set, double probe_x,
                                    double probe_y, char** out);
/* Distances from the source. When both target coordinates are finite the
 * geodesic to the target is included. order is 8 or 16 (0: context order). */
C1K_API c1k_status c1k_geodesic(c1k_context* ctx, const c1k_set* set, double sx, double sy,
                                double tx, double ty, double eps, int order, char** out);
/* mode: pointwise, uniform, interior or local. The series covers the base
 * raster plus `refinements` doublings (negative: context setting) when the
 * raster has a source descriptor. */
C1K_API c1k_status c1k_regularity(c1k_context* ctx, const c1k_set* set, const char* mode,
                                  double px, double py, double delta, int refinements, char** out);

/* ---- paths ---------------------------------------------------------------- */

/* field_spec: "constant:a,b", "linear:a,b,c,d" (F = (a x + b y, c x + d y)),
 * "gradient-xy" (grad of x y) or "rotation" ((-y, x)). */
C1K_API c1k_status c1k_path_integrate(c1k_context* ctx, const char* field_spec,
                                      const char* path_json, int levels, char** out);

/* ---- jets ----------------------------------------------------------------- */

C1K_API c1k_status c1k_jet_from_json(c1k_context* ctx, const char* json, c1k_jet** out);
/* Rows "x,y,f,dfx,dfy" (or "x,f,df" for a one-dimensional jet); a header
 * line and blank lines are skipped. */
C1K_API c1k_status c1k_jet_from_csv(c1k_context* ctx, const char* csv, c1k_jet** out);
C1K_API c1k_status c1k_jet_to_json(c1k_context* ctx, const c1k_jet* jet, char** out);
/* ladder_count radii 2^-1 .. 2^-count times the site diameter. */
C1K_API c1k_status c1k_jet_verify(c1k_context* ctx, const c1k_jet* jet, int ladder_count, char** out);
C1K_API c1k_status c1k_jet_norms(c1k_context* ctx, const c1k_jet* jet, char** out);
/* mode "pou" (param = rho) or "blowup" (param = r, set required). */
C1K_API c1k_status c1k_jet_extend(c1k_context* ctx, const c1k_jet* jet, const c1k_set* set,
                                  const char* mode, double param, char** out);
C1K_API void c1k_jet_free(c1k_jet* jet);

/* ---- charges -------------------------------------------------------------- */

C1K_API c1k_status c1k_charge_from_json(c1k_context* ctx, const char* json, c1k_charge** out);
/* Charge of a polyline on the grid origin + [0, nx h] x [0, ny h]. */
C1K_API c1k_status c1k_charge_from_path(c1k_context* ctx, const char* path_json, double ox,
                                        double oy, double h, int nx, int ny, c1k_charge** out);
C1K_API c1k_status c1k_charge_to_json(c1k_context* ctx, const c1k_charge* charge, char** out);
C1K_API c1k_status c1k_charge_info(c1k_context* ctx, const c1k_charge* charge, char** out);
/* exact: 1 exact, 0 float, -1 context arithmetic mode. */
C1K_API c1k_status c1k_charge_decompose(c1k_context* ctx, const c1k_charge* charge, int exact,
                                        char** out);
C1K_API c1k_status c1k_charge_check(c1k_context* ctx, const char* decomposition_json,
                                    const c1k_charge* charge, char** out);
C1K_API void c1k_charge_free(c1k_charge* charge);

/* ---- gallery -------------------------------------------------------------- */

C1K_API c1k_status c1k_gallery_list(c1k_context* ctx, char** out);
/* params_json: object of numeric parameters, or NULL. */
C1K_API c1k_status c1k_gallery_build(c1k_context* ctx, const char* id, const char* params_json,
                                     char** out);
C1K_API c1k_status c1k_gallery_run(c1k_context* ctx, const char* id, const char* params_json,
                                   char** out);

#ifdef __cplusplus
}
#endif

#endif /* C1K_C1K_H */
