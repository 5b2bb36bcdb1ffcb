#include "tfmod/grid.hpp"

#include <fftw3.h>

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdlib>
#include <map>
#include <mutex>
#include <thread>

namespace tfmod {

double unitary_factor(int n) { return std::pow(kTwoPi, -0.5 * n); }

namespace {

bool is_power_of_two(int v) { return v > 0 && (v & (v - 1)) == 0; }

}  // namespace

std::size_t GridSpec::total() const {
    std::size_t t = 1;
    for (int i = 0; i < n; ++i) t *= static_cast<std::size_t>(N);
    return t;
}

int GridSpec::axis_offset(std::size_t flat, int axis) const {
    std::size_t stride = 1;
    for (int i = axis + 1; i < n; ++i) stride *= static_cast<std::size_t>(N);
    int a = static_cast<int>((flat / stride) % static_cast<std::size_t>(N));
    return a - N / 2;
}

std::array<int, 3> GridSpec::offsets(std::size_t flat) const {
    std::array<int, 3> j{0, 0, 0};
    for (int axis = n - 1; axis >= 0; --axis) {
        int a = static_cast<int>(flat % static_cast<std::size_t>(N));
        flat /= static_cast<std::size_t>(N);
        j[static_cast<std::size_t>(axis)] = a - N / 2;
    }
    return j;
}

std::array<double, 3> GridSpec::point(std::size_t flat) const {
    auto j = offsets(flat);
    std::array<double, 3> x{0.0, 0.0, 0.0};
    for (int i = 0; i < n; ++i) x[static_cast<std::size_t>(i)] = j[static_cast<std::size_t>(i)] * dx;
    return x;
}

std::array<double, 3> GridSpec::frequency(std::size_t flat) const {
    auto m = offsets(flat);
    std::array<double, 3> xi{0.0, 0.0, 0.0};
    for (int i = 0; i < n; ++i) xi[static_cast<std::size_t>(i)] = m[static_cast<std::size_t>(i)] * dxi;
    return xi;
}

std::size_t GridSpec::flat_from_offsets(std::span<const int> j) const {
    std::size_t flat = 0;
    for (int i = 0; i < n; ++i) {
        long a = static_cast<long>(j[static_cast<std::size_t>(i)]) + N / 2;
        a %= N;
        if (a < 0) a += N;
        flat = flat * static_cast<std::size_t>(N) + static_cast<std::size_t>(a);
    }
    return flat;
}

bool GridSpec::integer_lattice_aligned() const {
    double ratio = L / kPi;
    return std::abs(ratio - std::round(ratio)) < 1e-9 && std::round(ratio) >= 1.0;
}

int GridSpec::lattice_steps_per_unit() const {
    require(integer_lattice_aligned(), errc::precondition,
            "grid: L must be an integer multiple of pi for integer-lattice operations");
    return static_cast<int>(std::round(L / kPi));
}

bool GridSpec::operator==(const GridSpec& other) const {
    return n == other.n && N == other.N && L == other.L;
}

GridSpec make_grid(int n, int N, double L) {
    require(n >= 1, errc::invalid_argument, "make_grid: dimension must be >= 1");
    require(n <= 3, errc::invalid_argument, "make_grid: dimension must be <= 3 (memory guard)");
    require(is_power_of_two(N) && N >= 8, errc::invalid_argument,
            "make_grid: N must be a power of two >= 8 (FFT size violation)");
    require(L > 0.0 && std::isfinite(L), errc::invalid_argument, "make_grid: L must be positive");
    GridSpec s;
    s.n = n;
    s.N = N;
    s.L = L;
    s.dx = 2.0 * L / N;
    s.dxi = kPi / L;
    return s;
}

void GridFunction::validate() const {
    require(values.size() == spec.total(), errc::invalid_argument,
            "grid function: value count does not match N^n");
    for (const cplx& v : values)
        require(std::isfinite(v.real()) && std::isfinite(v.imag()), errc::invalid_argument,
                "grid function: non-finite value");
}

GridFunction sample(const GridSpec& spec,
                    const std::function<cplx(const std::array<double, 3>&)>& fn) {
    GridFunction f;
    f.spec = spec;
    f.values.resize(spec.total());
    for (std::size_t i = 0; i < f.values.size(); ++i) f.values[i] = fn(spec.point(i));
    return f;
}

namespace {

// FFTW plan cache. Planning is not thread-safe, so creation is serialized;
// execution uses the new-array interface on per-call fftw_malloc buffers,
// which share the prototype buffers' alignment class.
struct PlanKey {
    int n;
    int N;
    int sign;
    bool operator<(const PlanKey& o) const {
        return std::tie(n, N, sign) < std::tie(o.n, o.N, o.sign);
    }
};

struct PlanEntry {
    fftw_plan plan = nullptr;
    fftw_complex* proto_in = nullptr;
    fftw_complex* proto_out = nullptr;
};

std::mutex g_plan_mutex;
std::map<PlanKey, PlanEntry>& plan_cache() {
    static std::map<PlanKey, PlanEntry> cache;
    return cache;
}

fftw_plan get_plan(int n, int N, int sign) {
    std::lock_guard<std::mutex> lock(g_plan_mutex);
    auto& cache = plan_cache();
    PlanKey key{n, N, sign};
    auto it = cache.find(key);
    if (it != cache.end()) return it->second.plan;

    std::size_t total = 1;
    for (int i = 0; i < n; ++i) total *= static_cast<std::size_t>(N);
    PlanEntry e;
    e.proto_in = fftw_alloc_complex(total);
    e.proto_out = fftw_alloc_complex(total);
    std::vector<int> dims(static_cast<std::size_t>(n), N);
    e.plan = fftw_plan_dft(n, dims.data(), e.proto_in, e.proto_out, sign, FFTW_ESTIMATE);
    require(e.plan != nullptr, errc::numeric, "fftw: plan creation failed");
    cache.emplace(key, e);
    return e.plan;
}

struct FftwBuffer {
    fftw_complex* ptr;
    explicit FftwBuffer(std::size_t count) : ptr(fftw_alloc_complex(count)) {}
    ~FftwBuffer() { fftw_free(ptr); }
    FftwBuffer(const FftwBuffer&) = delete;
    FftwBuffer& operator=(const FftwBuffer&) = delete;
};

// Centered index <-> DFT bin. For even N, (a + N/2) mod N == a ^ (N/2) on
// each axis digit and the digits occupy disjoint bit ranges, so the whole
// flat index can be shifted with a single xor mask.
std::size_t shift_mask(const GridSpec& spec) {
    std::size_t mask = 0;
    for (int i = 0; i < spec.n; ++i)
        mask = mask * static_cast<std::size_t>(spec.N) + static_cast<std::size_t>(spec.N / 2);
    return mask;
}

void run_dft(const GridSpec& spec, const std::vector<cplx>& in, std::vector<cplx>& out,
             int sign, double scale) {
    const std::size_t total = spec.total();
    FftwBuffer bin(total), bout(total);
    const std::size_t mask = shift_mask(spec);
    for (std::size_t i = 0; i < total; ++i) {
        const cplx v = in[i];
        bin.ptr[i ^ mask][0] = v.real();
        bin.ptr[i ^ mask][1] = v.imag();
    }
    fftw_execute_dft(get_plan(spec.n, spec.N, sign), bin.ptr, bout.ptr);
    out.resize(total);
    for (std::size_t i = 0; i < total; ++i) {
        const fftw_complex& v = bout.ptr[i ^ mask];
        out[i] = cplx(v[0] * scale, v[1] * scale);
    }
}

}  // namespace

SpectralFunction forward_transform(const GridFunction& f) {
    f.validate();
    SpectralFunction F;
    F.spec = f.spec;
    const double scale = unitary_factor(f.spec.n) * std::pow(f.spec.dx, f.spec.n);
    run_dft(f.spec, f.values, F.coefficients, FFTW_FORWARD, scale);
    return F;
}

GridFunction inverse_transform(const SpectralFunction& F) {
    require(F.coefficients.size() == F.spec.total(), errc::invalid_argument,
            "inverse_transform: coefficient count does not match N^n");
    GridFunction f;
    f.spec = F.spec;
    const double scale = unitary_factor(F.spec.n) * std::pow(F.spec.dxi, F.spec.n);
    run_dft(F.spec, F.coefficients, f.values, FFTW_BACKWARD, scale);
    return f;
}

double lp_norm(const GridFunction& f, double p) {
    f.validate();
    require(p >= 1.0, errc::invalid_argument, "lp_norm: p must satisfy p >= 1");
    if (std::isinf(p)) {
        double m = 0.0;
        for (const cplx& v : f.values) m = std::max(m, std::abs(v));
        return m;
    }
    const double cell = std::pow(f.spec.dx, f.spec.n);
    long double acc = 0.0L;
    if (p == 2.0) {
        for (const cplx& v : f.values) acc += static_cast<long double>(std::norm(v));
    } else if (p == 1.0) {
        for (const cplx& v : f.values) acc += static_cast<long double>(std::abs(v));
    } else {
        for (const cplx& v : f.values) acc += static_cast<long double>(std::pow(std::abs(v), p));
    }
    return std::pow(static_cast<double>(acc) * cell, 1.0 / p);
}

double boundary_decay(const GridFunction& f) {
    f.validate();
    double overall = 0.0, edge = 0.0;
    for (std::size_t i = 0; i < f.values.size(); ++i) {
        const double a = std::abs(f.values[i]);
        overall = std::max(overall, a);
        for (int axis = 0; axis < f.spec.n; ++axis) {
            const int j = f.spec.axis_offset(i, axis);
            if (j == -f.spec.N / 2 || j == f.spec.N / 2 - 1) {
                edge = std::max(edge, a);
                break;
            }
        }
    }
    return overall == 0.0 ? 0.0 : edge / overall;
}

double spectral_tail_ratio(const SpectralFunction& F, double radius, bool euclidean) {
    long double total = 0.0L, tail = 0.0L;
    for (std::size_t i = 0; i < F.coefficients.size(); ++i) {
        const long double m = std::norm(F.coefficients[i]);
        total += m;
        auto xi = F.spec.frequency(i);
        bool outside;
        if (euclidean) {
            double r2 = 0.0;
            for (int ax = 0; ax < F.spec.n; ++ax) r2 += xi[static_cast<std::size_t>(ax)] * xi[static_cast<std::size_t>(ax)];
            outside = r2 > radius * radius * (1.0 + 1e-12);
        } else {
            double a = 0.0;
            for (int ax = 0; ax < F.spec.n; ++ax) a = std::max(a, std::abs(xi[static_cast<std::size_t>(ax)]));
            outside = a > radius * (1.0 + 1e-12);
        }
        if (outside) tail += m;
    }
    if (total == 0.0L) return 0.0;
    return static_cast<double>(std::sqrt(tail / total));
}

namespace {

struct QuadState {
    const std::function<cplx(double)>* g;
    double tol;
    long evals = 0;
    static constexpr long kMaxEvals = 4'000'000;
    static constexpr int kMaxDepth = 56;

    cplx eval(double x) {
        if (++evals > kMaxEvals)
            fail(errc::numeric, "quadrature_1d: evaluation budget exhausted before convergence");
        return (*g)(x);
    }
};

cplx simpson(double a, double b, cplx fa, cplx fm, cplx fb) {
    return (b - a) / 6.0 * (fa + 4.0 * fm + fb);
}

cplx adapt(QuadState& st, double a, double b, cplx fa, cplx fm, cplx fb, cplx whole,
           double tol, int depth) {
    if (depth > QuadState::kMaxDepth)
        fail(errc::numeric, "quadrature_1d: subdivision budget exhausted before convergence");
    const double m = 0.5 * (a + b);
    const double lm = 0.5 * (a + m), rm = 0.5 * (m + b);
    const cplx flm = st.eval(lm), frm = st.eval(rm);
    const cplx left = simpson(a, m, fa, flm, fm);
    const cplx right = simpson(m, b, fm, frm, fb);
    const cplx delta = left + right - whole;
    if (std::abs(delta) <= 15.0 * tol) return left + right + delta / 15.0;
    return adapt(st, a, m, fa, flm, fm, left, 0.5 * tol, depth + 1) +
           adapt(st, m, b, fm, frm, fb, right, 0.5 * tol, depth + 1);
}

}  // namespace

cplx quadrature_1d(const std::function<cplx(double)>& g, double a, double b, double tol) {
    require(tol > 0.0, errc::invalid_argument, "quadrature_1d: tolerance must be positive");
    require(std::isfinite(a) && std::isfinite(b), errc::invalid_argument,
            "quadrature_1d: interval endpoints must be finite");
    if (a == b) return cplx(0.0, 0.0);
    QuadState st{&g, tol};
    const cplx fa = st.eval(a), fb = st.eval(b), fm = st.eval(0.5 * (a + b));
    const cplx whole = simpson(a, b, fa, fm, fb);
    return adapt(st, a, b, fa, fm, fb, whole, tol, 0);
}

namespace {

int max_threads() {
    static int cached = [] {
        if (const char* env = std::getenv("TFMOD_THREADS")) {
            const int v = std::atoi(env);
            if (v >= 1) return v;
        }
        const unsigned hc = std::thread::hardware_concurrency();
        return hc == 0 ? 1 : static_cast<int>(std::min(hc, 8u));
    }();
    return cached;
}

}  // namespace

void parallel_for(std::size_t count, const std::function<void(std::size_t)>& fn) {
    const int workers = std::min<std::size_t>(static_cast<std::size_t>(max_threads()), count);
    if (workers <= 1) {
        for (std::size_t i = 0; i < count; ++i) fn(i);
        return;
    }
    std::atomic<std::size_t> next{0};
    std::vector<std::thread> pool;
    pool.reserve(static_cast<std::size_t>(workers));
    std::exception_ptr err;
    std::mutex err_mutex;
    for (int w = 0; w < workers; ++w) {
        pool.emplace_back([&] {
            for (;;) {
                const std::size_t i = next.fetch_add(1);
                if (i >= count) return;
                try {
                    fn(i);
                } catch (...) {
                    std::lock_guard<std::mutex> lock(err_mutex);
                    if (!err) err = std::current_exception();
                    return;
                }
            }
        });
    }
    for (auto& t : pool) t.join();
    if (err) std::rethrow_exception(err);
}

}  // namespace tfmod
