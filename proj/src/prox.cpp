#include "fracport/prox.hpp"

#include <cmath>
#include <sstream>

#include "fracport/errors.hpp"
#include "fracport/kernels.hpp"

namespace fracport {

ProxParams::ProxParams(double a_, double lam_) : a(a_), lam(lam_) {
    if (!(a > 0.0) || !std::isfinite(a)) throw ConfigError("prox: a must be positive");
    if (!(lam > 0.0) || !std::isfinite(lam)) throw ConfigError("prox: lam must be positive");
}

ThresholdValue threshold(const ProxParams& params) {
    const double a = params.a;
    if (params.lam <= 1.0 / (a * a)) {
        return {params.lam * a / 2.0, ThresholdRegime::SmallLambda};
    }
    const double t = std::sqrt(params.lam) - 1.0 / (2.0 * a);
    return {t > 0.0 ? t : 0.0, ThresholdRegime::LargeLambda};
}

double prox_scalar(const ProxParams& params, double gamma) {
    if (std::fabs(gamma) <= threshold(params).t_star) return 0.0;
    return kernels::fraction_prox_g(params.a, params.lam, gamma);
}

void prox_vector_into(const ProxParams& params, double t_star,
                      std::span<const double> in, std::span<double> out) {
    if (in.size() != out.size()) throw DimensionError("prox_vector: size mismatch");
    try {
        kernels::ops().threshold_apply(params.a, params.lam, t_star, in.data(),
                                       out.data(), in.size());
    } catch (const NumericError& e) {
        // locate the offending component for the message
        for (std::size_t i = 0; i < in.size(); ++i) {
            if (std::fabs(in[i]) <= t_star) continue;
            try {
                kernels::fraction_prox_g(params.a, params.lam, in[i]);
            } catch (const NumericError&) {
                std::ostringstream msg;
                msg << "prox_vector: component " << i << ": " << e.what();
                throw NumericError(msg.str());
            }
        }
        throw;
    }
}

void prox_vector_into(const ProxParams& params, std::span<const double> in,
                      std::span<double> out) {
    prox_vector_into(params, threshold(params).t_star, in, out);
}

std::vector<double> prox_vector(const ProxParams& params, std::span<const double> x) {
    std::vector<double> out(x.size());
    prox_vector_into(params, x, out);
    return out;
}

} // namespace fracport
