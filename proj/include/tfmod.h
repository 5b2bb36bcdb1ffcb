/*
 * tfmod — time-frequency modulation-norm toolkit, C interface.
 *
 * All objects are opaque handles created and destroyed through this API.
 * Every fallible function returns a tf_status; on failure the thread-local
 * message from tf_last_error() describes the violated condition. Strings
 * returned through char** out-parameters are owned by the caller and must
 * be released with tf_string_free().
 */
#ifndef TFMOD_H
#define TFMOD_H

#include <stddef.h>
#include <stdint.h>

#ifdef __cplusplus
extern "C" {
#endif

typedef struct tf_grid tf_grid;
typedef struct tf_fn tf_fn;
typedef struct tf_window tf_window;
typedef struct tf_stft_mat tf_stft_mat;
typedef struct tf_decomp tf_decomp;
typedef struct tf_density tf_density;

typedef enum {
    TF_OK = 0,
    TF_EINVAL = 1,    /* malformed arguments or descriptors */
    TF_EPRECOND = 2,  /* documented precondition violated */
    TF_ENUMERIC = 3,  /* iteration/quadrature budget exhausted */
    TF_EIO = 4,       /* file system failure */
    TF_EINTERNAL = 5
} tf_status;

typedef enum {
    TF_WEIGHT_NONE = 0,
    TF_WEIGHT_POLYNOMIAL = 1,
    TF_WEIGHT_GEVREY = 2
} tf_weight_kind;

/* p and q may be HUGE_VAL/INFINITY for the sup-norm cases. */
typedef struct {
    double p;
    double q;
    tf_weight_kind weight;
    double weight_s;
} tf_norm_params;

const char* tf_version(void);
const char* tf_last_error(void);
void tf_string_free(char* s);

/* ---- grid ------------------------------------------------------------- */
tf_status tf_grid_create(int n, int N, double L, tf_grid** out);
void tf_grid_destroy(tf_grid* g);
tf_status tf_grid_info(const tf_grid* g, int* n, int* N, double* L, double* dx, double* dxi);

/* ---- grid functions ----------------------------------------------------
 * Descriptors are JSON: gaussian, modulated_gaussian, poly_gaussian,
 * trig_poly, random_bandlimited{seed,K,real}, samples{re,im}.           */
tf_status tf_fn_create(const tf_grid* g, const char* descriptor_json, tf_fn** out);
tf_status tf_fn_from_samples(const tf_grid* g, const double* re, const double* im, size_t len,
                             tf_fn** out);
void tf_fn_destroy(tf_fn* f);
tf_status tf_fn_len(const tf_fn* f, size_t* out);
tf_status tf_fn_copy_values(const tf_fn* f, double* re, double* im);
tf_status tf_fn_save(const tf_fn* f, const char* path);
tf_status tf_fn_load(const char* path, tf_fn** out);
tf_status tf_fn_lp_norm(const tf_fn* f, double p, double* out);
tf_status tf_fn_boundary_decay(const tf_fn* f, double* out);
tf_status tf_fn_spectral_tail(const tf_fn* f, double radius, double* out);
tf_status tf_fn_translate(const tf_fn* f, const double* x0, tf_fn** out);
tf_status tf_fn_modulate(const tf_fn* f, const double* xi0, tf_fn** out);
tf_status tf_fn_involution(const tf_fn* f, tf_fn** out);
tf_status tf_fn_product(const tf_fn* f, const tf_fn* g, tf_fn** out);

/* ---- windows ------------------------------------------------------------ */
tf_status tf_window_create(const tf_grid* g, const char* descriptor_json, tf_window** out);
void tf_window_destroy(tf_window* w);
/* Gelfand-Shilov decay test of the window and its transform. */
tf_status tf_window_validate(const tf_window* w, double s, int* pass, double* space_eps,
                             double* freq_eps);

/* ---- STFT ----------------------------------------------------------------- */
tf_status tf_stft(const tf_fn* f, const tf_window* phi, tf_stft_mat** out);
tf_status tf_stft_spectral(const tf_fn* f, const tf_window* phi, tf_stft_mat** out);
void tf_stft_destroy(tf_stft_mat* m);
tf_status tf_stft_mixed_l2(const tf_stft_mat* m, double* out);
tf_status tf_stft_save_csv(const tf_stft_mat* m, const tf_window* phi, const char* csv_path,
                           const char* json_header_path);
tf_status tf_istft(const tf_stft_mat* m, const tf_window* gamma, const tf_window* phi,
                   tf_fn** out);
/* JSON report of the representation identities and the domination margin. */
tf_status tf_verify_identities(const tf_fn* f, const tf_window* phi, const tf_window* gamma,
                               uint64_t seed, char** json_out);
/* re/im must hold (2*alpha_max+1)^n entries, row-major over alpha. */
tf_status tf_periodic_coefficients(const tf_fn* f, const tf_window* phi, int alpha_max,
                                   double* re, double* im);

/* ---- frequency-uniform decomposition ----------------------------------------- */
tf_status tf_decomp_build(const tf_grid* g, int K, tf_decomp** out);
void tf_decomp_destroy(tf_decomp* d);
tf_status tf_decomp_partition_residual(const tf_decomp* d, double* out);
tf_status tf_decomp_save_csv(const tf_decomp* d, const char* path);
tf_status tf_box_apply(const tf_fn* f, const int* k, const tf_decomp* d, tf_fn** out);

/* ---- modulation norms ----------------------------------------------------------- */
tf_status tf_norm_decomp(const tf_fn* f, tf_norm_params params, const tf_decomp* d,
                         double* log_value);
tf_status tf_norm_stft(const tf_fn* f, const tf_window* phi, tf_norm_params params,
                       double* log_value);
tf_status tf_equivalence_ratio(const tf_fn* f, tf_norm_params params, const tf_window* phi,
                               const tf_decomp* d, double* ratio);

/* ---- multiplication algebra and superposition ------------------------------------- */
tf_status tf_algebra_ratio(const tf_fn* f, const tf_fn* g, tf_norm_params params,
                           const tf_decomp* d, double* same_exponent, double* holder);
tf_status tf_subalgebra_constant(double R, double s, double q, int n, double delta, double C0,
                                 double* out);
tf_status tf_choose_R(double target, double s, double q, int n, double delta, double C0,
                      double* out);
tf_status tf_weight_inequality_margin(double s, double delta, int Kmax, int n, double* out);
tf_status tf_nikolskij_ratio(const tf_fn* f, double r, double p, double q, double* out);
tf_status tf_exp_lp_margin(const tf_fn* u, double p, double* out);
tf_status tf_gevrey_exp_norm(const tf_fn* u, tf_norm_params params, const tf_decomp* d,
                             double* log_value);

tf_status tf_density_create(const char* descriptor_json, tf_density** out);
void tf_density_destroy(tf_density* d);
/* JSON: {"lambdas":[...],"L1":[...],"zero_residual":..,"admissible":..}. */
tf_status tf_check_admissible(const tf_density* d, double s, const double* lambdas,
                              size_t count, char** json_out);
tf_status tf_superpose(const tf_fn* u, const tf_density* d, double tol, tf_fn** out);

/* ---- wave propagator --------------------------------------------------------------- */
tf_status tf_wave_propagate(const tf_fn* f, const tf_fn* g, double t, tf_fn** u, tf_fn** ut);
tf_status tf_wave_energy(const tf_fn* u, const tf_fn* ut, double* out);
/* CSV columns: t, solution_log_norm, c_of_t, c_alt, energy. */
tf_status tf_wave_apriori_csv(const tf_fn* f, const tf_fn* g, tf_norm_params params,
                              const tf_decomp* d, const double* tgrid, size_t count,
                              const char* csv_path);

/* ---- verification ------------------------------------------------------------------- */
/* config_json may be NULL or "{}" for defaults; see the CLI --config schema. */
tf_status tf_verify_run(const char* config_json, char** report_json, int* all_pass);

#ifdef __cplusplus
}
#endif

#endif /* TFMOD_H */
