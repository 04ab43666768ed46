#include "psam/wiener_mmse.hpp"

#include <cassert>
#include <cmath>
#include <complex>
#include <stdexcept>

#include "psam/errors.hpp"
#include "psam/quadrature.hpp"

namespace psam {

std::string to_string(FilterKind kind) {
    return kind == FilterKind::Noncausal ? "noncausal" : "causal";
}

std::string to_string(AliasMode mode) {
    return mode == AliasMode::Considered ? "considered" : "ignored";
}

namespace {

void check_args(const ChannelParams& ch, int M, double pilot_power, int min_period) {
    ch.validate();
    if (M < min_period) {
        throw std::invalid_argument("wiener_mmse: period M must be >= " +
                                    std::to_string(min_period));
    }
    if (!(pilot_power >= 0.0)) {
        throw std::invalid_argument("wiener_mmse: pilot power must be nonnegative");
    }
}

// Clamp quadrature noise into [0, hi]; anything past the guard band means the
// integral itself is unreliable.
double clamp_mmse(double v, double hi) {
    constexpr double kGuard = 1e-8;
    if (v < -kGuard || v > hi + kGuard) {
        throw NumericalError("wiener_mmse: result " + std::to_string(v) +
                             " clamped beyond the quadrature guard band");
    }
    return std::min(std::max(v, 0.0), hi);
}

struct AliasIntegrals {
    double symmetric;  // weighting alpha^{2m} + alpha^{2(M-m)}
    double cross;      // weighting 2 alpha^M
};

// |S_{h,m}|^2 for the Gauss-Markov chain splits into a position-independent
// pair of integrals: with a = alpha^M and D(w) = 1 / |1 - a e^{-jw}|^2,
//   |S_{h,m}|^2 = sigma_h^4 [ (alpha^{2m} + alpha^{2(M-m)}) D
//                             + 2 alpha^M Re( e^{-jw} / (1 - a e^{-jw})^2 ) ].
AliasIntegrals alias_integrals(const ChannelParams& ch, int M, double pilot_power) {
    const double a = std::pow(ch.alpha, M);
    const double sh4 = ch.sigma_h_sq * ch.sigma_h_sq;
    // |1 - a e^{-jw}|^2 = (1-a)^2 + 4a sin^2(w/2), cancellation-free at w = 0
    const auto denom = [&](double w) {
        const double s = std::sin(0.5 * w);
        const double d = (1.0 - a) * (1.0 - a) + 4.0 * a * s * s;
        const double pilot_psd = ch.sigma_h_sq * (1.0 - a * a) / d;  // S_{h,0}
        return std::pair{d, pilot_power * pilot_psd + ch.sigma_n_sq};
    };
    AliasIntegrals out;
    out.symmetric = quadrature::spectral_mean_even(
        [&](double w) {
            const auto [d, den] = denom(w);
            return sh4 / (d * den);
        },
        kPi);
    out.cross = quadrature::spectral_mean_even(
        [&](double w) {
            const auto [d, den] = denom(w);
            const double s = std::sin(0.5 * w);
            const std::complex<double> g{(1.0 - a) + 2.0 * a * s * s, a * std::sin(w)};
            const std::complex<double> z{std::cos(w), -std::sin(w)};
            return sh4 * std::real(z / (g * g)) / den;
        },
        kPi);
    return out;
}

double assemble_aliased(const ChannelParams& ch, int M, int m, double pilot_power,
                        const AliasIntegrals& integrals) {
    const double sym = std::pow(ch.alpha, 2 * m) + std::pow(ch.alpha, 2 * (M - m));
    const double cross = 2.0 * std::pow(ch.alpha, M);
    const double removed = pilot_power * (sym * integrals.symmetric + cross * integrals.cross);
    return clamp_mmse(ch.sigma_h_sq - removed, ch.sigma_h_sq);
}

}  // namespace

CanonicalFactors gm_canonical_factors(const ChannelParams& ch, int M, double pilot_power) {
    check_args(ch, M, pilot_power, 1);
    const double alpha = ch.alpha;
    const double sn2 = ch.sigma_n_sq;
    const double c =
        (pilot_power / M) * (1.0 - alpha * alpha) * ch.sigma_h_sq + (1.0 + alpha * alpha) * sn2;
    const double disc = c * c - 4.0 * alpha * alpha * sn2 * sn2;
    assert(disc >= 0.0 && "discriminant c^2 - 4 alpha^2 sigma_n^4 is nonnegative by construction");
    const double r_f = 0.5 * (c + std::sqrt(std::max(disc, 0.0)));
    const double u = alpha * sn2 / r_f;
    return {r_f, u, c};
}

double noncausal_mmse_aliased(const ChannelParams& ch, int M, int m, double pilot_power) {
    check_args(ch, M, pilot_power, 2);
    if (m < 1 || m >= M) {
        throw std::invalid_argument("noncausal_mmse_aliased: m must lie in [1, M-1]");
    }
    if (pilot_power == 0.0) return ch.sigma_h_sq;
    return assemble_aliased(ch, M, m, pilot_power, alias_integrals(ch, M, pilot_power));
}

std::vector<double> noncausal_error_variances_aliased(const ChannelParams& ch, int M,
                                                      double pilot_power) {
    check_args(ch, M, pilot_power, 2);
    std::vector<double> out(static_cast<std::size_t>(M) - 1);
    if (pilot_power == 0.0) {
        for (auto& v : out) v = ch.sigma_h_sq;
        return out;
    }
    const AliasIntegrals integrals = alias_integrals(ch, M, pilot_power);
    for (int m = 1; m < M; ++m) {
        out[m - 1] = assemble_aliased(ch, M, m, pilot_power, integrals);
    }
    return out;
}

double noncausal_mmse_no_alias(const ChannelParams& ch, int M, double pilot_power) {
    check_args(ch, M, pilot_power, 1);
    if (pilot_power == 0.0) return ch.sigma_h_sq;
    const double floor_noise = M * ch.sigma_n_sq;
    const double removed = quadrature::spectral_mean_even(
        [&](double w) {
            const double s = gm_psd(ch, w);
            return pilot_power * s * s / (pilot_power * s + floor_noise);
        },
        kPi / M);
    return clamp_mmse(ch.sigma_h_sq - removed, ch.sigma_h_sq);
}

double causal_mmse_no_alias(const ChannelParams& ch, int M, double pilot_power) {
    const double noncausal = noncausal_mmse_no_alias(ch, M, pilot_power);
    if (pilot_power == 0.0 || ch.alpha == 0.0) return noncausal;  // no anticausal branch
    const auto [r_f, u, c] = gm_canonical_factors(ch, M, pilot_power);
    const double gain = (1.0 - ch.alpha * ch.alpha) * ch.sigma_h_sq * u / (1.0 - u * ch.alpha);
    const double penalty = (pilot_power / (M * r_f)) *
                           quadrature::spectral_mean_even(
                               [&](double w) {
                                   const double s = std::sin(0.5 * w);
                                   return gain * gain /
                                          ((1.0 - u) * (1.0 - u) + 4.0 * u * s * s);
                               },
                               kPi / M);
    return clamp_mmse(noncausal + penalty, ch.sigma_h_sq);
}

EstimateQuality estimate_quality(const ChannelParams& ch, int M, double pilot_power,
                                 FilterKind filter, AliasMode alias) {
    if (filter == FilterKind::Causal && alias == AliasMode::Considered) {
        throw UnsupportedError(
            "estimate_quality: the causal filter with aliasing considered has no analytic "
            "error variance; use kalman_steady_state_mmse for the exact value");
    }
    check_args(ch, M, pilot_power, 2);
    EstimateQuality q;
    q.filter = filter;
    q.alias = alias;
    if (alias == AliasMode::Considered) {
        q.err_var = noncausal_error_variances_aliased(ch, M, pilot_power);
    } else {
        const double v = filter == FilterKind::Causal ? causal_mmse_no_alias(ch, M, pilot_power)
                                                      : noncausal_mmse_no_alias(ch, M, pilot_power);
        q.err_var.assign(static_cast<std::size_t>(M) - 1, v);
    }
    q.est_var.resize(q.err_var.size());
    for (std::size_t i = 0; i < q.err_var.size(); ++i) {
        q.est_var[i] = ch.sigma_h_sq - q.err_var[i];
    }
    return q;
}

}  // namespace psam
