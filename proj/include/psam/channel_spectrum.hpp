#pragma once

#include <complex>
#include <functional>

namespace psam {

inline constexpr double kPi = 3.14159265358979323846;

// Fading statistics of the first-order Gauss-Markov channel
//   h_k = alpha * h_{k-1} + z_k,  z_k ~ CN(0, (1 - alpha^2) * sigma_h_sq),
// observed through noise of variance sigma_n_sq. The symbol time is
// normalized to one channel use.
struct ChannelParams {
    double alpha = 0.99;      // AR(1) coefficient, 0 <= alpha < 1
    double sigma_h_sq = 1.0;  // stationary fading variance
    double sigma_n_sq = 1.0;  // additive noise variance

    // Throws ConfigError naming the first field outside its domain.
    void validate() const;
};

// Any even, nonnegative, 2pi-periodic spectral density.
using PsdFn = std::function<double(double)>;

// Doppler power spectral density of the Gauss-Markov process,
//   S_h(e^{jw}) = (1 - alpha^2) sigma_h_sq / (1 + alpha^2 - 2 alpha cos w).
// Normalized so that (1/2pi) * integral over [-pi, pi] equals sigma_h_sq.
double gm_psd(const ChannelParams& ch, double w);

PsdFn gm_psd_fn(const ChannelParams& ch);

// Pilot-rate undersampled spectrum with phase offset m:
//   S_{h,m}(e^{jw}) = (1/M) sum_{k=0}^{M-1} e^{jm(w-2pi k)/M} S_h(e^{j(w-2pi k)/M}),
// PSD arguments wrapped into [-pi, pi]. Rejects m outside [0, M-1].
std::complex<double> undersampled_spectrum(const PsdFn& psd, int M, int m, double w);

// Closed form of the same quantity for the Gauss-Markov PSD: the pilot-spaced
// samples form an AR(1) chain with coefficient alpha^M, giving
//   S_{h,m}(e^{jw}) = sigma_h_sq [ alpha^m / (1 - a e^{-jw})
//                                + alpha^{M-m} e^{jw} / (1 - a e^{jw}) ],  a = alpha^M.
std::complex<double> gm_undersampled_spectrum(const ChannelParams& ch, int M, int m, double w);

// Fraction of the fading power inside [-W, W], W in (0, pi].
double power_fraction(const ChannelParams& ch, double half_width);

// Largest training period M such that [-pi/M, pi/M] still holds at least
// `threshold` of the fading power; the sampling-friendly regime boundary.
int alias_safe_period(const ChannelParams& ch, double threshold);

}  // namespace psam
