#include "psam/channel_spectrum.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

#include "psam/errors.hpp"
#include "psam/quadrature.hpp"

namespace psam {

void ChannelParams::validate() const {
    if (!(alpha >= 0.0 && alpha < 1.0)) {
        throw ConfigError("alpha: must satisfy 0 <= alpha < 1, got " + std::to_string(alpha));
    }
    if (!(sigma_h_sq > 0.0)) {
        throw ConfigError("sigma-h-sq: must be positive, got " + std::to_string(sigma_h_sq));
    }
    if (!(sigma_n_sq > 0.0)) {
        throw ConfigError("sigma-n-sq: must be positive, got " + std::to_string(sigma_n_sq));
    }
}

double gm_psd(const ChannelParams& ch, double w) {
    const double a = ch.alpha;
    // 1 + a^2 - 2a cos w, written without the 1 - cos cancellation so the
    // peak at w = 0 keeps full relative precision as a -> 1
    const double s = std::sin(0.5 * w);
    const double denom = (1.0 - a) * (1.0 - a) + 4.0 * a * s * s;
    return (1.0 - a * a) * ch.sigma_h_sq / denom;
}

PsdFn gm_psd_fn(const ChannelParams& ch) {
    return [ch](double w) { return gm_psd(ch, w); };
}

namespace {

// Wrap into [-pi, pi] by 2pi-periodic extension.
double wrap_to_pi(double w) {
    w = std::remainder(w, 2.0 * kPi);
    return w;
}

}  // namespace

std::complex<double> undersampled_spectrum(const PsdFn& psd, int M, int m, double w) {
    if (M < 1) throw std::invalid_argument("undersampled_spectrum: M must be >= 1");
    if (m < 0 || m >= M) {
        throw std::invalid_argument("undersampled_spectrum: m must lie in [0, M-1]");
    }
    std::complex<double> acc{0.0, 0.0};
    for (int k = 0; k < M; ++k) {
        const double arg = (w - 2.0 * kPi * k) / M;
        const double phase = m * arg;
        acc += std::polar(psd(wrap_to_pi(arg)), phase);
    }
    return acc / static_cast<double>(M);
}

std::complex<double> gm_undersampled_spectrum(const ChannelParams& ch, int M, int m, double w) {
    if (M < 1) throw std::invalid_argument("gm_undersampled_spectrum: M must be >= 1");
    if (m < 0 || m >= M) {
        throw std::invalid_argument("gm_undersampled_spectrum: m must lie in [0, M-1]");
    }
    const double a = std::pow(ch.alpha, M);
    // 1 - a e^{-jw} with the real part free of 1 - cos cancellation
    const double s = std::sin(0.5 * w);
    const std::complex<double> denom{(1.0 - a) + 2.0 * a * s * s, a * std::sin(w)};
    const std::complex<double> z = std::polar(1.0, -w);  // e^{-jw}
    const std::complex<double> fwd = std::pow(ch.alpha, m) / denom;
    const std::complex<double> bwd = std::pow(ch.alpha, M - m) * std::conj(z) / std::conj(denom);
    return ch.sigma_h_sq * (fwd + bwd);
}

double power_fraction(const ChannelParams& ch, double half_width) {
    if (!(half_width > 0.0 && half_width <= kPi)) {
        throw std::invalid_argument("power_fraction: W must lie in (0, pi]");
    }
    const double mass =
        quadrature::spectral_mean_even([&](double w) { return gm_psd(ch, w); }, half_width);
    return mass / ch.sigma_h_sq;
}

int alias_safe_period(const ChannelParams& ch, double threshold) {
    if (!(threshold > 0.0 && threshold < 1.0)) {
        throw std::invalid_argument("alias_safe_period: threshold must lie in (0, 1)");
    }
    const auto ok = [&](int M) { return power_fraction(ch, kPi / M) >= threshold; };
    if (!ok(1)) return 1;
    // power_fraction(pi/M) is nonincreasing in M: doubling search, then bisect.
    int lo = 1, hi = 2;
    while (ok(hi)) {
        lo = hi;
        if (hi > (1 << 24)) break;
        hi *= 2;
    }
    while (hi - lo > 1) {
        const int mid = lo + (hi - lo) / 2;
        (ok(mid) ? lo : hi) = mid;
    }
    return lo;
}

}  // namespace psam
