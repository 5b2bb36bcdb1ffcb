// tfmod command-line front end. Talks to the core exclusively through the
// shared-library C API (tfmod.h).
//
// Exit codes: 0 all checks passed / command succeeded, 1 a verification or
// admissibility check failed, 2 configuration error.

#include <cmath>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"
#include "tfmod.h"

namespace {

using nlohmann::json;
using nlohmann::ordered_json;

struct Options {
    int grid_n = 1;
    int grid_N = 256;
    double L_over_pi = 8.0;
    std::string weight = "none";
    double p = 2.0;
    double q = 2.0;
    int K = 8;
    std::string form = "decomp";
    std::string out_path;
    std::uint64_t seed = 42;
    double tol = 1e-8;
    std::string input_path;
    std::string window_json = R"({"kind":"gaussian","width":1.0})";
    std::string function_json;
    std::string density_json;
    std::vector<double> times;
    int count = 20;
};

[[noreturn]] void die_config(const std::string& msg) {
    std::cerr << "config error: " << msg << "\n";
    std::exit(2);
}

void check(tf_status st, const char* what) {
    if (st == TF_OK) return;
    const std::string msg = std::string(what) + ": " + tf_last_error();
    if (st == TF_EINVAL || st == TF_EPRECOND || st == TF_EIO) die_config(msg);
    std::cerr << "error: " << msg << "\n";
    std::exit(1);
}

tf_norm_params make_params(const Options& opt) {
    tf_norm_params params{};
    params.p = opt.p;
    params.q = opt.q;
    params.weight = TF_WEIGHT_NONE;
    params.weight_s = 0.0;
    if (opt.weight == "none" || opt.weight.empty()) return params;
    const auto colon = opt.weight.find(':');
    if (colon == std::string::npos)
        die_config("weight: expected 'none', 'poly:<s>' or 'gevrey:<s>', got '" + opt.weight + "'");
    const std::string kind = opt.weight.substr(0, colon);
    try {
        params.weight_s = std::stod(opt.weight.substr(colon + 1));
    } catch (const std::exception&) {
        die_config("weight: bad parameter in '" + opt.weight + "'");
    }
    if (kind == "poly")
        params.weight = TF_WEIGHT_POLYNOMIAL;
    else if (kind == "gevrey")
        params.weight = TF_WEIGHT_GEVREY;
    else
        die_config("weight: unknown kind '" + kind + "'");
    return params;
}

struct GridHandle {
    tf_grid* g = nullptr;
    ~GridHandle() { tf_grid_destroy(g); }
};
struct FnHandle {
    tf_fn* f = nullptr;
    ~FnHandle() { tf_fn_destroy(f); }
};
struct WindowHandle {
    tf_window* w = nullptr;
    ~WindowHandle() { tf_window_destroy(w); }
};
struct DecompHandle {
    tf_decomp* d = nullptr;
    ~DecompHandle() { tf_decomp_destroy(d); }
};
struct DensityHandle {
    tf_density* d = nullptr;
    ~DensityHandle() { tf_density_destroy(d); }
};
struct StftHandle {
    tf_stft_mat* m = nullptr;
    ~StftHandle() { tf_stft_destroy(m); }
};

std::string take_string(char* s) {
    std::string out = s ? s : "";
    tf_string_free(s);
    return out;
}

void make_grid_handle(const Options& opt, GridHandle& grid) {
    check(tf_grid_create(opt.grid_n, opt.grid_N, opt.L_over_pi * 3.14159265358979323846, &grid.g),
          "grid");
}

void emit(const Options& opt, const std::string& text) {
    if (opt.out_path.empty()) {
        std::cout << text << "\n";
        return;
    }
    std::ofstream out(opt.out_path);
    if (!out.good()) die_config("cannot open output path " + opt.out_path);
    out << text << "\n";
}

std::string default_function_json(const Options& opt) {
    if (!opt.function_json.empty()) return opt.function_json;
    if (!opt.input_path.empty()) return "";  // loaded from file instead
    return R"({"kind":"gaussian","width":1.0})";
}

void load_input_function(const Options& opt, const GridHandle& grid, FnHandle& fn) {
    if (!opt.input_path.empty()) {
        check(tf_fn_load(opt.input_path.c_str(), &fn.f), "input function");
        return;
    }
    const std::string desc = default_function_json(opt);
    check(tf_fn_create(grid.g, desc.c_str(), &fn.f), "input function");
}

int cmd_verify(const Options& opt, const std::string& config_json) {
    ordered_json cfg;
    if (!config_json.empty()) {
        try {
            cfg = ordered_json::parse(config_json);
        } catch (const std::exception& e) {
            die_config(std::string("--config: ") + e.what());
        }
    }
    cfg["n"] = opt.grid_n;
    cfg["N"] = opt.grid_N;
    cfg["L_over_pi"] = opt.L_over_pi;
    cfg["K"] = opt.K;
    cfg["p"] = opt.p;
    cfg["q"] = opt.q;
    cfg["weight"] = opt.weight == "" ? "none" : opt.weight;
    cfg["seed"] = opt.seed;
    try {
        cfg["window"] = json::parse(opt.window_json);
    } catch (const std::exception& e) {
        die_config(std::string("--window: ") + e.what());
    }
    char* report = nullptr;
    int pass = 0;
    check(tf_verify_run(cfg.dump().c_str(), &report, &pass), "verify");
    emit(opt, take_string(report));
    return pass ? 0 : 1;
}

int cmd_norm(const Options& opt) {
    GridHandle grid;
    make_grid_handle(opt, grid);
    FnHandle fn;
    load_input_function(opt, grid, fn);
    const tf_norm_params params = make_params(opt);

    ordered_json out;
    out["params"] = {{"p", opt.p}, {"q", opt.q}, {"weight", opt.weight},
                     {"K", opt.K}, {"form", opt.form}};
    double tail = 0.0;
    check(tf_fn_spectral_tail(fn.f, static_cast<double>(opt.K - 1), &tail), "spectral tail");
    out["tail_mass"] = tail;

    auto value_field = [](double log_value) -> ordered_json {
        if (log_value == -INFINITY) return 0.0;
        const double v = std::exp(log_value);
        if (std::isinf(v)) return "inf";
        return v;
    };

    if (opt.form == "decomp" || opt.form == "both") {
        DecompHandle d;
        check(tf_decomp_build(grid.g, opt.K, &d.d), "decomposition");
        double lv = 0.0;
        check(tf_norm_decomp(fn.f, params, d.d, &lv), "decomposition norm");
        out["decomp"] = {{"log_value", lv}, {"value_or_inf", value_field(lv)}};
    }
    if (opt.form == "stft" || opt.form == "both") {
        WindowHandle w;
        check(tf_window_create(grid.g, opt.window_json.c_str(), &w.w), "window");
        double lv = 0.0;
        check(tf_norm_stft(fn.f, w.w, params, &lv), "stft norm");
        out["stft"] = {{"log_value", lv}, {"value_or_inf", value_field(lv)}};
    }
    if (opt.form == "both") {
        const double ratio =
            std::exp(out["decomp"]["log_value"].get<double>() - out["stft"]["log_value"].get<double>());
        out["ratio"] = ratio;
    }
    if (opt.form != "decomp" && opt.form != "stft" && opt.form != "both")
        die_config("--form must be decomp, stft or both");
    emit(opt, out.dump(2));
    return 0;
}

int cmd_stft(const Options& opt) {
    GridHandle grid;
    make_grid_handle(opt, grid);
    FnHandle fn;
    load_input_function(opt, grid, fn);
    WindowHandle w;
    check(tf_window_create(grid.g, opt.window_json.c_str(), &w.w), "window");
    StftHandle m;
    check(tf_stft(fn.f, w.w, &m.m), "stft");
    if (opt.out_path.empty()) die_config("stft requires --out <basename> for CSV output");
    check(tf_stft_save_csv(m.m, w.w, (opt.out_path + ".csv").c_str(),
                           (opt.out_path + ".json").c_str()),
          "stft export");
    double mixed = 0.0;
    check(tf_stft_mixed_l2(m.m, &mixed), "stft norm");
    ordered_json summary;
    summary["csv"] = opt.out_path + ".csv";
    summary["header"] = opt.out_path + ".json";
    summary["mixed_l2"] = mixed;
    std::cout << summary.dump(2) << "\n";
    return 0;
}

int cmd_decompose(const Options& opt) {
    GridHandle grid;
    make_grid_handle(opt, grid);
    DecompHandle d;
    check(tf_decomp_build(grid.g, opt.K, &d.d), "decomposition");
    double residual = 0.0;
    check(tf_decomp_partition_residual(d.d, &residual), "partition residual");
    if (opt.out_path.empty()) die_config("decompose requires --out <path> for CSV output");
    check(tf_decomp_save_csv(d.d, opt.out_path.c_str()), "decomposition export");
    ordered_json summary;
    summary["csv"] = opt.out_path;
    summary["K"] = opt.K;
    summary["partition_residual"] = residual;
    std::cout << summary.dump(2) << "\n";
    return residual <= 1e-12 ? 0 : 1;
}

int cmd_algebra(const Options& opt) {
    GridHandle grid;
    make_grid_handle(opt, grid);
    DecompHandle d;
    check(tf_decomp_build(grid.g, opt.K, &d.d), "decomposition");
    const tf_norm_params params = make_params(opt);

    ordered_json rows = ordered_json::array();
    double worst = 0.0;
    for (int i = 0; i < opt.count; ++i) {
        const std::uint64_t sf = opt.seed + 2ULL * static_cast<std::uint64_t>(i);
        const std::uint64_t sg = opt.seed + 2ULL * static_cast<std::uint64_t>(i) + 1;
        const std::string df = std::string(R"({"kind":"random_bandlimited","seed":)") +
                               std::to_string(sf) + R"(,"K":)" + std::to_string(opt.K / 2) + "}";
        const std::string dg = std::string(R"({"kind":"random_bandlimited","seed":)") +
                               std::to_string(sg) + R"(,"K":)" + std::to_string(opt.K / 2) + "}";
        FnHandle f, g;
        check(tf_fn_create(grid.g, df.c_str(), &f.f), "corpus function");
        check(tf_fn_create(grid.g, dg.c_str(), &g.f), "corpus function");
        double same = 0.0, holder = 0.0;
        check(tf_algebra_ratio(f.f, g.f, params, d.d, &same, &holder), "algebra ratio");
        rows.push_back({{"seed_f", sf}, {"seed_g", sg}, {"same_exponent", same}, {"holder", holder}});
        worst = std::max(worst, same);
    }
    ordered_json out;
    out["params"] = {{"p", opt.p}, {"q", opt.q}, {"weight", opt.weight}, {"K", opt.K}};
    out["pairs"] = rows;
    out["max_same_exponent_ratio"] = worst;
    emit(opt, out.dump(2));
    return 0;
}

int cmd_superpose(const Options& opt) {
    GridHandle grid;
    make_grid_handle(opt, grid);
    FnHandle u;
    load_input_function(opt, grid, u);
    const std::string density =
        opt.density_json.empty()
            ? R"({"kind":"closed_form","name":"odd_gaussian","B":10.0})"
            : opt.density_json;
    DensityHandle den;
    check(tf_density_create(density.c_str(), &den.d), "density");

    const double lambdas[3] = {1.0, 2.0, 4.0};
    char* rep = nullptr;
    check(tf_check_admissible(den.d, 2.0, lambdas, 3, &rep), "admissibility");
    const std::string report = take_string(rep);
    ordered_json repj = ordered_json::parse(report);

    FnHandle result;
    const tf_status st = tf_superpose(u.f, den.d, opt.tol, &result.f);
    if (st == TF_EPRECOND) {
        std::cerr << "superpose rejected: " << tf_last_error() << "\n";
        std::cout << report << "\n";
        return 1;
    }
    check(st, "superpose");
    if (!opt.out_path.empty())
        check(tf_fn_save(result.f, opt.out_path.c_str()), "output function");
    ordered_json out;
    out["admissibility"] = repj;
    out["output"] = opt.out_path.empty() ? "-" : opt.out_path;
    std::cout << out.dump(2) << "\n";
    return 0;
}

int cmd_wave(const Options& opt) {
    GridHandle grid;
    make_grid_handle(opt, grid);
    const std::string fdesc =
        opt.function_json.empty()
            ? R"({"kind":"trig_poly","coeffs":[{"k":[1],"re":0.5},{"k":[-1],"re":0.5}]})"
            : opt.function_json;
    FnHandle f;
    check(tf_fn_create(grid.g, fdesc.c_str(), &f.f), "initial data f");
    FnHandle g;
    {
        size_t len = 0;
        check(tf_fn_len(f.f, &len), "initial data");
        std::vector<double> zeros(len, 0.0);
        check(tf_fn_from_samples(grid.g, zeros.data(), nullptr, len, &g.f), "initial data g");
    }
    DecompHandle d;
    check(tf_decomp_build(grid.g, opt.K, &d.d), "decomposition");
    tf_norm_params params = make_params(opt);
    if (params.q != 1.0)
        std::cerr << "warning: the classical-solution setting uses q = 1 (got q = " << params.q
                  << ")\n";
    std::vector<double> times = opt.times;
    if (times.empty())
        for (int i = 0; i <= 30; ++i) times.push_back(0.1 * i);
    if (opt.out_path.empty()) die_config("wave requires --out <path> for CSV output");
    check(tf_wave_apriori_csv(f.f, g.f, params, d.d, times.data(), times.size(),
                              opt.out_path.c_str()),
          "wave report");
    std::cout << "wrote " << opt.out_path << "\n";
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"time-frequency modulation-norm toolkit"};
    app.require_subcommand(1);

    Options opt;
    std::string config_path;

    app.add_option("--config", config_path, "JSON config file (same schema as flags)");
    app.add_option("--grid-n", opt.grid_n, "dimension (1..3)");
    app.add_option("--grid-N", opt.grid_N, "points per axis (power of two)");
    app.add_option("--L-over-pi", opt.L_over_pi, "half-width of the box in units of pi");
    app.add_option("--weight", opt.weight, "weight: none | poly:<s> | gevrey:<s>");
    app.add_option("--p", opt.p, "inner integrability exponent (inf allowed)");
    app.add_option("--q", opt.q, "outer integrability exponent (inf allowed)");
    app.add_option("--K", opt.K, "decomposition truncation radius");
    app.add_option("--form", opt.form, "norm form: decomp | stft | both");
    app.add_option("--out", opt.out_path, "output path");
    app.add_option("--seed", opt.seed, "seed for reproducible corpora");
    app.add_option("--tol", opt.tol, "quadrature tolerance");
    app.add_option("--in", opt.input_path, "input function file (JSON)");
    app.add_option("--window", opt.window_json, "window descriptor JSON");
    app.add_option("--function", opt.function_json, "function descriptor JSON");
    app.add_option("--density", opt.density_json, "density descriptor JSON");
    app.add_option("--times", opt.times, "time grid for the wave report");
    app.add_option("--count", opt.count, "corpus size for algebra runs");

    auto* sub_verify = app.add_subcommand("verify", "run the verification suites");
    auto* sub_norm = app.add_subcommand("norm", "compute a modulation norm");
    auto* sub_stft = app.add_subcommand("stft", "compute and export an STFT");
    auto* sub_dec = app.add_subcommand("decompose", "build and export the decomposition");
    auto* sub_alg = app.add_subcommand("algebra", "algebra-ratio corpus diagnostics");
    auto* sub_sup = app.add_subcommand("superpose", "apply a superposition operator");
    auto* sub_wave = app.add_subcommand("wave", "propagate the wave equation and report");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : 2;
    }

    // --config supplies defaults; explicit flags override them.
    std::string config_text;
    if (!config_path.empty()) {
        std::ifstream in(config_path);
        if (!in.good()) die_config("cannot open config file " + config_path);
        json cfg;
        try {
            in >> cfg;
        } catch (const std::exception& e) {
            die_config(std::string("config file: ") + e.what());
        }
        config_text = cfg.dump();
        auto maybe = [&](const char* key, auto& slot, const auto* opt_ptr) {
            using T = std::decay_t<decltype(slot)>;
            if (cfg.contains(key) && opt_ptr->count() == 0) slot = cfg[key].template get<T>();
        };
        maybe("n", opt.grid_n, app.get_option("--grid-n"));
        maybe("N", opt.grid_N, app.get_option("--grid-N"));
        maybe("L_over_pi", opt.L_over_pi, app.get_option("--L-over-pi"));
        maybe("weight", opt.weight, app.get_option("--weight"));
        maybe("p", opt.p, app.get_option("--p"));
        maybe("q", opt.q, app.get_option("--q"));
        maybe("K", opt.K, app.get_option("--K"));
        maybe("form", opt.form, app.get_option("--form"));
        maybe("out", opt.out_path, app.get_option("--out"));
        maybe("seed", opt.seed, app.get_option("--seed"));
        maybe("tol", opt.tol, app.get_option("--tol"));
        maybe("in", opt.input_path, app.get_option("--in"));
        if (cfg.contains("window") && app.get_option("--window")->count() == 0)
            opt.window_json = cfg["window"].dump();
        if (cfg.contains("function") && app.get_option("--function")->count() == 0)
            opt.function_json = cfg["function"].dump();
        if (cfg.contains("density") && app.get_option("--density")->count() == 0)
            opt.density_json = cfg["density"].dump();
        if (cfg.contains("times") && app.get_option("--times")->count() == 0)
            opt.times = cfg["times"].get<std::vector<double>>();
    }

    if (sub_verify->parsed()) return cmd_verify(opt, config_text);
    if (sub_norm->parsed()) return cmd_norm(opt);
    if (sub_stft->parsed()) return cmd_stft(opt);
    if (sub_dec->parsed()) return cmd_decompose(opt);
    if (sub_alg->parsed()) return cmd_algebra(opt);
    if (sub_sup->parsed()) return cmd_superpose(opt);
    if (sub_wave->parsed()) return cmd_wave(opt);
    return 2;
}
