#include "fracport/penalty.hpp"

#include <cmath>
#include <sstream>

#include "fracport/errors.hpp"
#include "fracport/kernels.hpp"

namespace fracport {

PenaltyParams::PenaltyParams(double a_) : a(a_) {
    if (!(a > 0.0) || !std::isfinite(a)) {
        std::ostringstream msg;
        msg << "penalty shape parameter a must be a positive real, got " << a_;
        throw ConfigError(msg.str());
    }
}

double rho(const PenaltyParams& params, double t) {
    const double at = params.a * std::fabs(t);
    return at / (at + 1.0);
}

double penalty(const PenaltyParams& params, std::span<const double> x) {
    return kernels::ops().penalty_sum(params.a, x.data(), x.size());
}

double rho_derivative(const PenaltyParams& params, double t) {
    if (t == 0.0) throw NumericError("rho_derivative undefined at t = 0");
    const double d = 1.0 + params.a * std::fabs(t);
    return std::copysign(params.a / (d * d), t);
}

} // namespace fracport
