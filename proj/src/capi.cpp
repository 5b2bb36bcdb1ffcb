#include "tfmod.h"

#include <cstring>
#include <string>

#include "json.hpp"
#include "tfmod/algebra.hpp"
#include "tfmod/functions.hpp"
#include "tfmod/verify.hpp"
#include "tfmod/wave.hpp"

struct tf_grid {
    tfmod::GridSpec spec;
};
struct tf_fn {
    tfmod::GridFunction f;
};
struct tf_window {
    tfmod::Window w;
};
struct tf_stft_mat {
    tfmod::STFTMatrix m;
};
struct tf_decomp {
    tfmod::DecompositionFamily d;
};
struct tf_density {
    tfmod::Density d;
};

namespace {

thread_local std::string g_last_error;

tf_status map_code(tfmod::errc code) {
    switch (code) {
        case tfmod::errc::invalid_argument: return TF_EINVAL;
        case tfmod::errc::precondition: return TF_EPRECOND;
        case tfmod::errc::numeric: return TF_ENUMERIC;
        case tfmod::errc::io: return TF_EIO;
    }
    return TF_EINTERNAL;
}

template <typename Fn>
tf_status wrap(Fn&& fn) {
    try {
        fn();
        return TF_OK;
    } catch (const tfmod::Error& e) {
        g_last_error = e.what();
        return map_code(e.code());
    } catch (const std::exception& e) {
        g_last_error = e.what();
        return TF_EINTERNAL;
    } catch (...) {
        g_last_error = "unknown error";
        return TF_EINTERNAL;
    }
}

char* dup_string(const std::string& s) {
    char* out = new char[s.size() + 1];
    std::memcpy(out, s.c_str(), s.size() + 1);
    return out;
}

tfmod::NormParams convert(tf_norm_params p) {
    tfmod::WeightSpec w;
    switch (p.weight) {
        case TF_WEIGHT_NONE: w = tfmod::WeightSpec::none(); break;
        case TF_WEIGHT_POLYNOMIAL: w = tfmod::WeightSpec::polynomial(p.weight_s); break;
        case TF_WEIGHT_GEVREY: w = tfmod::WeightSpec::gevrey(p.weight_s); break;
        default:
            tfmod::fail(tfmod::errc::invalid_argument, "norm params: unknown weight kind");
    }
    tfmod::NormParams out{p.p, p.q, w};
    out.validate();
    return out;
}

void require_handle(const void* h, const char* what) {
    tfmod::require(h != nullptr, tfmod::errc::invalid_argument,
                   std::string(what) + ": null handle");
}

tfmod::Window window_from_json(const tfmod::GridSpec& spec, const char* descriptor_json) {
    tfmod::require(descriptor_json != nullptr, tfmod::errc::invalid_argument,
                   "window: null descriptor");
    nlohmann::json j;
    try {
        j = nlohmann::json::parse(descriptor_json);
    } catch (const std::exception& e) {
        tfmod::fail(tfmod::errc::invalid_argument,
                    std::string("window descriptor: bad JSON: ") + e.what());
    }
    if (j.value("kind", "") == "gaussian") {
        std::optional<double> s;
        if (j.contains("gelfand_shilov_s")) s = j["gelfand_shilov_s"].get<double>();
        return tfmod::gaussian_window(spec, j.value("width", 1.0), s);
    }
    tfmod::Window w;
    w.g = tfmod::make_function(spec, descriptor_json);
    w.kind = "custom";
    w.validate();
    return w;
}

}  // namespace

extern "C" {

const char* tf_version(void) { return "tfmod 1.0.0"; }

const char* tf_last_error(void) { return g_last_error.c_str(); }

void tf_string_free(char* s) { delete[] s; }

/* ---- grid -------------------------------------------------------------- */

tf_status tf_grid_create(int n, int N, double L, tf_grid** out) {
    return wrap([&] {
        require_handle(out, "tf_grid_create");
        *out = new tf_grid{tfmod::make_grid(n, N, L)};
    });
}

void tf_grid_destroy(tf_grid* g) { delete g; }

tf_status tf_grid_info(const tf_grid* g, int* n, int* N, double* L, double* dx, double* dxi) {
    return wrap([&] {
        require_handle(g, "tf_grid_info");
        if (n) *n = g->spec.n;
        if (N) *N = g->spec.N;
        if (L) *L = g->spec.L;
        if (dx) *dx = g->spec.dx;
        if (dxi) *dxi = g->spec.dxi;
    });
}

/* ---- grid functions ------------------------------------------------------ */

tf_status tf_fn_create(const tf_grid* g, const char* descriptor_json, tf_fn** out) {
    return wrap([&] {
        require_handle(g, "tf_fn_create");
        require_handle(out, "tf_fn_create");
        require_handle(descriptor_json, "tf_fn_create");
        *out = new tf_fn{tfmod::make_function(g->spec, descriptor_json)};
    });
}

tf_status tf_fn_from_samples(const tf_grid* g, const double* re, const double* im, size_t len,
                             tf_fn** out) {
    return wrap([&] {
        require_handle(g, "tf_fn_from_samples");
        require_handle(out, "tf_fn_from_samples");
        require_handle(re, "tf_fn_from_samples");
        tfmod::require(len == g->spec.total(), tfmod::errc::invalid_argument,
                       "tf_fn_from_samples: length must equal N^n");
        tfmod::GridFunction f;
        f.spec = g->spec;
        f.values.resize(len);
        for (size_t i = 0; i < len; ++i) f.values[i] = tfmod::cplx(re[i], im ? im[i] : 0.0);
        f.validate();
        *out = new tf_fn{std::move(f)};
    });
}

void tf_fn_destroy(tf_fn* f) { delete f; }

tf_status tf_fn_len(const tf_fn* f, size_t* out) {
    return wrap([&] {
        require_handle(f, "tf_fn_len");
        require_handle(out, "tf_fn_len");
        *out = f->f.values.size();
    });
}

tf_status tf_fn_copy_values(const tf_fn* f, double* re, double* im) {
    return wrap([&] {
        require_handle(f, "tf_fn_copy_values");
        for (size_t i = 0; i < f->f.values.size(); ++i) {
            if (re) re[i] = f->f.values[i].real();
            if (im) im[i] = f->f.values[i].imag();
        }
    });
}

tf_status tf_fn_save(const tf_fn* f, const char* path) {
    return wrap([&] {
        require_handle(f, "tf_fn_save");
        require_handle(path, "tf_fn_save");
        tfmod::save_function(f->f, path);
    });
}

tf_status tf_fn_load(const char* path, tf_fn** out) {
    return wrap([&] {
        require_handle(path, "tf_fn_load");
        require_handle(out, "tf_fn_load");
        *out = new tf_fn{tfmod::load_function(path)};
    });
}

tf_status tf_fn_lp_norm(const tf_fn* f, double p, double* out) {
    return wrap([&] {
        require_handle(f, "tf_fn_lp_norm");
        require_handle(out, "tf_fn_lp_norm");
        *out = tfmod::lp_norm(f->f, p);
    });
}

tf_status tf_fn_boundary_decay(const tf_fn* f, double* out) {
    return wrap([&] {
        require_handle(f, "tf_fn_boundary_decay");
        require_handle(out, "tf_fn_boundary_decay");
        *out = tfmod::boundary_decay(f->f);
    });
}

tf_status tf_fn_spectral_tail(const tf_fn* f, double radius, double* out) {
    return wrap([&] {
        require_handle(f, "tf_fn_spectral_tail");
        require_handle(out, "tf_fn_spectral_tail");
        *out = tfmod::spectral_tail_ratio(tfmod::forward_transform(f->f), radius);
    });
}

tf_status tf_fn_translate(const tf_fn* f, const double* x0, tf_fn** out) {
    return wrap([&] {
        require_handle(f, "tf_fn_translate");
        require_handle(x0, "tf_fn_translate");
        require_handle(out, "tf_fn_translate");
        *out = new tf_fn{tfmod::translate(
            f->f, std::span<const double>(x0, static_cast<size_t>(f->f.spec.n)))};
    });
}

tf_status tf_fn_modulate(const tf_fn* f, const double* xi0, tf_fn** out) {
    return wrap([&] {
        require_handle(f, "tf_fn_modulate");
        require_handle(xi0, "tf_fn_modulate");
        require_handle(out, "tf_fn_modulate");
        *out = new tf_fn{tfmod::modulate(
            f->f, std::span<const double>(xi0, static_cast<size_t>(f->f.spec.n)))};
    });
}

tf_status tf_fn_involution(const tf_fn* f, tf_fn** out) {
    return wrap([&] {
        require_handle(f, "tf_fn_involution");
        require_handle(out, "tf_fn_involution");
        *out = new tf_fn{tfmod::involution(f->f)};
    });
}

tf_status tf_fn_product(const tf_fn* f, const tf_fn* g, tf_fn** out) {
    return wrap([&] {
        require_handle(f, "tf_fn_product");
        require_handle(g, "tf_fn_product");
        require_handle(out, "tf_fn_product");
        *out = new tf_fn{tfmod::pointwise_product(f->f, g->f)};
    });
}

/* ---- windows --------------------------------------------------------------- */

tf_status tf_window_create(const tf_grid* g, const char* descriptor_json, tf_window** out) {
    return wrap([&] {
        require_handle(g, "tf_window_create");
        require_handle(out, "tf_window_create");
        *out = new tf_window{window_from_json(g->spec, descriptor_json)};
    });
}

void tf_window_destroy(tf_window* w) { delete w; }

tf_status tf_window_validate(const tf_window* w, double s, int* pass, double* space_eps,
                             double* freq_eps) {
    return wrap([&] {
        require_handle(w, "tf_window_validate");
        const tfmod::WindowDecayReport rep = tfmod::validate_window(w->w, s);
        if (pass) *pass = rep.pass ? 1 : 0;
        if (space_eps) *space_eps = rep.space_epsilon;
        if (freq_eps) *freq_eps = rep.freq_epsilon;
    });
}

/* ---- STFT --------------------------------------------------------------------- */

tf_status tf_stft(const tf_fn* f, const tf_window* phi, tf_stft_mat** out) {
    return wrap([&] {
        require_handle(f, "tf_stft");
        require_handle(phi, "tf_stft");
        require_handle(out, "tf_stft");
        *out = new tf_stft_mat{tfmod::stft(f->f, phi->w)};
    });
}

tf_status tf_stft_spectral(const tf_fn* f, const tf_window* phi, tf_stft_mat** out) {
    return wrap([&] {
        require_handle(f, "tf_stft_spectral");
        require_handle(phi, "tf_stft_spectral");
        require_handle(out, "tf_stft_spectral");
        *out = new tf_stft_mat{tfmod::stft_spectral(f->f, phi->w)};
    });
}

void tf_stft_destroy(tf_stft_mat* m) { delete m; }

tf_status tf_stft_mixed_l2(const tf_stft_mat* m, double* out) {
    return wrap([&] {
        require_handle(m, "tf_stft_mixed_l2");
        require_handle(out, "tf_stft_mixed_l2");
        *out = m->m.mixed_l2_norm();
    });
}

tf_status tf_stft_save_csv(const tf_stft_mat* m, const tf_window* phi, const char* csv_path,
                           const char* json_header_path) {
    return wrap([&] {
        require_handle(m, "tf_stft_save_csv");
        require_handle(phi, "tf_stft_save_csv");
        require_handle(csv_path, "tf_stft_save_csv");
        require_handle(json_header_path, "tf_stft_save_csv");
        tfmod::save_csv(m->m, phi->w, csv_path, json_header_path);
    });
}

tf_status tf_istft(const tf_stft_mat* m, const tf_window* gamma, const tf_window* phi,
                   tf_fn** out) {
    return wrap([&] {
        require_handle(m, "tf_istft");
        require_handle(gamma, "tf_istft");
        require_handle(phi, "tf_istft");
        require_handle(out, "tf_istft");
        *out = new tf_fn{tfmod::istft(m->m, gamma->w, phi->w)};
    });
}

tf_status tf_verify_identities(const tf_fn* f, const tf_window* phi, const tf_window* gamma,
                               uint64_t seed, char** json_out) {
    return wrap([&] {
        require_handle(f, "tf_verify_identities");
        require_handle(phi, "tf_verify_identities");
        require_handle(gamma, "tf_verify_identities");
        require_handle(json_out, "tf_verify_identities");
        const tfmod::IdentityReport r = tfmod::verify_identities(f->f, phi->w, gamma->w, seed);
        nlohmann::ordered_json j;
        j["dev_inner"] = r.dev_inner;
        j["dev_spectral_fourier"] = r.dev_spectral_fourier;
        j["dev_spectral_stft"] = r.dev_spectral_stft;
        j["dev_conv_space"] = r.dev_conv_space;
        j["dev_conv_freq"] = r.dev_conv_freq;
        j["max_deviation"] = r.max_deviation();
        j["domination_margin"] = r.domination_margin;
        *json_out = dup_string(j.dump(2));
    });
}

tf_status tf_periodic_coefficients(const tf_fn* f, const tf_window* phi, int alpha_max,
                                   double* re, double* im) {
    return wrap([&] {
        require_handle(f, "tf_periodic_coefficients");
        require_handle(phi, "tf_periodic_coefficients");
        require_handle(re, "tf_periodic_coefficients");
        require_handle(im, "tf_periodic_coefficients");
        const tfmod::CoefficientTable t = tfmod::periodic_coefficients(f->f, phi->w, alpha_max);
        for (size_t i = 0; i < t.c.size(); ++i) {
            re[i] = t.c[i].real();
            im[i] = t.c[i].imag();
        }
    });
}

/* ---- decomposition --------------------------------------------------------------- */

tf_status tf_decomp_build(const tf_grid* g, int K, tf_decomp** out) {
    return wrap([&] {
        require_handle(g, "tf_decomp_build");
        require_handle(out, "tf_decomp_build");
        *out = new tf_decomp{tfmod::build_sigma(g->spec, K)};
    });
}

void tf_decomp_destroy(tf_decomp* d) { delete d; }

tf_status tf_decomp_partition_residual(const tf_decomp* d, double* out) {
    return wrap([&] {
        require_handle(d, "tf_decomp_partition_residual");
        require_handle(out, "tf_decomp_partition_residual");
        *out = tfmod::partition_residual(d->d);
    });
}

tf_status tf_decomp_save_csv(const tf_decomp* d, const char* path) {
    return wrap([&] {
        require_handle(d, "tf_decomp_save_csv");
        require_handle(path, "tf_decomp_save_csv");
        tfmod::save_csv(d->d, path);
    });
}

tf_status tf_box_apply(const tf_fn* f, const int* k, const tf_decomp* d, tf_fn** out) {
    return wrap([&] {
        require_handle(f, "tf_box_apply");
        require_handle(k, "tf_box_apply");
        require_handle(d, "tf_box_apply");
        require_handle(out, "tf_box_apply");
        *out = new tf_fn{tfmod::box_apply(
            f->f, std::span<const int>(k, static_cast<size_t>(f->f.spec.n)), d->d)};
    });
}

/* ---- norms --------------------------------------------------------------------------- */

tf_status tf_norm_decomp(const tf_fn* f, tf_norm_params params, const tf_decomp* d,
                         double* log_value) {
    return wrap([&] {
        require_handle(f, "tf_norm_decomp");
        require_handle(d, "tf_norm_decomp");
        require_handle(log_value, "tf_norm_decomp");
        *log_value = tfmod::modulation_norm_decomp(f->f, convert(params), d->d).log_value;
    });
}

tf_status tf_norm_stft(const tf_fn* f, const tf_window* phi, tf_norm_params params,
                       double* log_value) {
    return wrap([&] {
        require_handle(f, "tf_norm_stft");
        require_handle(phi, "tf_norm_stft");
        require_handle(log_value, "tf_norm_stft");
        *log_value = tfmod::modulation_norm_stft(f->f, phi->w, convert(params)).log_value;
    });
}

tf_status tf_equivalence_ratio(const tf_fn* f, tf_norm_params params, const tf_window* phi,
                               const tf_decomp* d, double* ratio) {
    return wrap([&] {
        require_handle(f, "tf_equivalence_ratio");
        require_handle(phi, "tf_equivalence_ratio");
        require_handle(d, "tf_equivalence_ratio");
        require_handle(ratio, "tf_equivalence_ratio");
        *ratio = tfmod::equivalence_ratio(f->f, convert(params), phi->w, d->d);
    });
}

/* ---- algebra ---------------------------------------------------------------------------- */

tf_status tf_algebra_ratio(const tf_fn* f, const tf_fn* g, tf_norm_params params,
                           const tf_decomp* d, double* same_exponent, double* holder) {
    return wrap([&] {
        require_handle(f, "tf_algebra_ratio");
        require_handle(g, "tf_algebra_ratio");
        require_handle(d, "tf_algebra_ratio");
        const tfmod::AlgebraRatios r = tfmod::algebra_ratio(f->f, g->f, convert(params), d->d);
        if (same_exponent) *same_exponent = r.same_exponent;
        if (holder) *holder = r.holder;
    });
}

tf_status tf_subalgebra_constant(double R, double s, double q, int n, double delta, double C0,
                                 double* out) {
    return wrap([&] {
        require_handle(out, "tf_subalgebra_constant");
        *out = tfmod::subalgebra_constant(R, s, q, n, delta, C0);
    });
}

tf_status tf_choose_R(double target, double s, double q, int n, double delta, double C0,
                      double* out) {
    return wrap([&] {
        require_handle(out, "tf_choose_R");
        *out = tfmod::choose_R(target, s, q, n, delta, C0);
    });
}

tf_status tf_weight_inequality_margin(double s, double delta, int Kmax, int n, double* out) {
    return wrap([&] {
        require_handle(out, "tf_weight_inequality_margin");
        *out = tfmod::weight_inequality_margin(s, delta, Kmax, n);
    });
}

tf_status tf_nikolskij_ratio(const tf_fn* f, double r, double p, double q, double* out) {
    return wrap([&] {
        require_handle(f, "tf_nikolskij_ratio");
        require_handle(out, "tf_nikolskij_ratio");
        *out = tfmod::nikolskij_ratio(f->f, r, p, q);
    });
}

tf_status tf_exp_lp_margin(const tf_fn* u, double p, double* out) {
    return wrap([&] {
        require_handle(u, "tf_exp_lp_margin");
        require_handle(out, "tf_exp_lp_margin");
        *out = tfmod::exp_lp_margin(u->f, p);
    });
}

tf_status tf_gevrey_exp_norm(const tf_fn* u, tf_norm_params params, const tf_decomp* d,
                             double* log_value) {
    return wrap([&] {
        require_handle(u, "tf_gevrey_exp_norm");
        require_handle(d, "tf_gevrey_exp_norm");
        require_handle(log_value, "tf_gevrey_exp_norm");
        *log_value = tfmod::gevrey_exp_norm(u->f, convert(params), d->d).log_value;
    });
}

tf_status tf_density_create(const char* descriptor_json, tf_density** out) {
    return wrap([&] {
        require_handle(descriptor_json, "tf_density_create");
        require_handle(out, "tf_density_create");
        *out = new tf_density{tfmod::Density::from_json(descriptor_json)};
    });
}

void tf_density_destroy(tf_density* d) { delete d; }

tf_status tf_check_admissible(const tf_density* d, double s, const double* lambdas, size_t count,
                              char** json_out) {
    return wrap([&] {
        require_handle(d, "tf_check_admissible");
        require_handle(lambdas, "tf_check_admissible");
        require_handle(json_out, "tf_check_admissible");
        const tfmod::AdmissibilityReport rep =
            tfmod::check_admissible(d->d, s, std::span<const double>(lambdas, count));
        nlohmann::ordered_json j;
        j["lambdas"] = rep.lambdas;
        j["L1"] = rep.L1;
        j["zero_residual"] = rep.zero_residual;
        j["tail_bound"] = rep.tail_bound;
        j["degenerate"] = rep.degenerate;
        j["admissible"] = rep.admissible;
        *json_out = dup_string(j.dump(2));
    });
}

tf_status tf_superpose(const tf_fn* u, const tf_density* d, double tol, tf_fn** out) {
    return wrap([&] {
        require_handle(u, "tf_superpose");
        require_handle(d, "tf_superpose");
        require_handle(out, "tf_superpose");
        *out = new tf_fn{tfmod::superpose(u->f, d->d, tol)};
    });
}

/* ---- wave ---------------------------------------------------------------------------------- */

tf_status tf_wave_propagate(const tf_fn* f, const tf_fn* g, double t, tf_fn** u, tf_fn** ut) {
    return wrap([&] {
        require_handle(f, "tf_wave_propagate");
        require_handle(g, "tf_wave_propagate");
        require_handle(u, "tf_wave_propagate");
        require_handle(ut, "tf_wave_propagate");
        tfmod::WaveState w = tfmod::propagate(f->f, g->f, t);
        *u = new tf_fn{std::move(w.u)};
        *ut = new tf_fn{std::move(w.ut)};
    });
}

tf_status tf_wave_energy(const tf_fn* u, const tf_fn* ut, double* out) {
    return wrap([&] {
        require_handle(u, "tf_wave_energy");
        require_handle(ut, "tf_wave_energy");
        require_handle(out, "tf_wave_energy");
        *out = tfmod::energy({u->f, ut->f, 0.0});
    });
}

tf_status tf_wave_apriori_csv(const tf_fn* f, const tf_fn* g, tf_norm_params params,
                              const tf_decomp* d, const double* tgrid, size_t count,
                              const char* csv_path) {
    return wrap([&] {
        require_handle(f, "tf_wave_apriori_csv");
        require_handle(g, "tf_wave_apriori_csv");
        require_handle(d, "tf_wave_apriori_csv");
        require_handle(tgrid, "tf_wave_apriori_csv");
        require_handle(csv_path, "tf_wave_apriori_csv");
        const auto rows = tfmod::apriori_report(f->f, g->f, convert(params), d->d,
                                                std::span<const double>(tgrid, count));
        tfmod::save_csv(rows, csv_path);
    });
}

/* ---- verification ---------------------------------------------------------------------------- */

tf_status tf_verify_run(const char* config_json, char** report_json, int* all_pass) {
    return wrap([&] {
        require_handle(report_json, "tf_verify_run");
        const std::string text = config_json == nullptr ? "{}" : config_json;
        const tfmod::VerifyConfig config = tfmod::VerifyConfig::from_json(text);
        bool pass = false;
        const std::string report = tfmod::run_verify(config, &pass);
        *report_json = dup_string(report);
        if (all_pass) *all_pass = pass ? 1 : 0;
    });
}

}  // extern "C"
