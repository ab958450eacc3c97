#include "fracport/kernels.hpp"

#include <atomic>
#include <cmath>
#include <cstdlib>
#include <numbers>
#include <sstream>
#include <string>

#include "fracport/errors.hpp"

namespace fracport::kernels {

namespace scalar {
extern const Ops table;
}
#if defined(__x86_64__) || defined(_M_X64)
namespace avx2 {
extern const Ops table;
}
#endif

namespace {

bool cpu_has_avx2() {
#if defined(__x86_64__) || defined(_M_X64)
    return __builtin_cpu_supports("avx2");
#else
    return false;
#endif
}

Backend detect() {
    if (const char* env = std::getenv("FRACPORT_KERNEL")) {
        const std::string v(env);
        if (v == "scalar") return Backend::Scalar;
        if (v == "avx2" && cpu_has_avx2()) return Backend::Avx2;
        // unrecognized or unsupported value: fall through to auto-detect
    }
    return cpu_has_avx2() ? Backend::Avx2 : Backend::Scalar;
}

std::atomic<Backend> g_backend{detect()};

} // namespace

bool supported(Backend b) {
    switch (b) {
    case Backend::Scalar: return true;
    case Backend::Avx2: return cpu_has_avx2();
    }
    return false;
}

const char* name(Backend b) {
    switch (b) {
    case Backend::Scalar: return "scalar";
    case Backend::Avx2: return "avx2";
    }
    return "?";
}

Backend active_backend() { return g_backend.load(std::memory_order_relaxed); }

bool set_backend(Backend b) {
    if (!supported(b)) return false;
    g_backend.store(b, std::memory_order_relaxed);
    return true;
}

const Ops& ops_for(Backend b) {
    if (!supported(b)) {
        std::ostringstream msg;
        msg << "kernel backend '" << name(b) << "' not supported on this CPU";
        throw ConfigError(msg.str());
    }
#if defined(__x86_64__) || defined(_M_X64)
    if (b == Backend::Avx2) return avx2::table;
#endif
    return scalar::table;
}

const Ops& ops() { return ops_for(active_backend()); }

double fraction_prox_g(double a, double lam, double gamma) {
    const double ag = 1.0 + a * std::fabs(gamma);
    double arg = 27.0 * lam * a * a / (4.0 * ag * ag * ag) - 1.0;
    if (arg > 1.0 || arg < -1.0) {
        if (arg > 1.0 + 1e-12 || arg < -1.0 - 1e-12) {
            std::ostringstream msg;
            msg << "fraction prox: arccos argument " << arg
                << " outside [-1,1] (a=" << a << ", lam=" << lam
                << ", gamma=" << gamma << ")";
            throw NumericError(msg.str());
        }
        arg = arg > 1.0 ? 1.0 : -1.0;
    }
    const double psi = std::acos(arg);
    const double root =
        (ag / 3.0 * (1.0 + 2.0 * std::cos(psi / 3.0 - std::numbers::pi / 3.0)) - 1.0) / a;
    return std::copysign(root, gamma);
}

} // namespace fracport::kernels
