#pragma once

#include <complex>
#include <cstdint>
#include <vector>

#include "psam/channel_spectrum.hpp"
#include "psam/wiener_mmse.hpp"

namespace psam {

// A simulated fading realization with its pilot-slot observations
// y_{lM} = sqrt(P_t) h_{lM} + n_{lM}.
struct ChannelTrace {
    std::vector<std::complex<double>> coefficients;  // h_k, k = 0..length-1
    std::vector<std::complex<double>> observations;  // y at pilot slots 0, M, 2M, ...
    std::uint64_t seed = 0;
    std::size_t length = 0;
    int period = 1;
    double pilot_power = 0.0;
};

// Autocovariance of the pilot-sampled fading chain: sigma_h_sq * alpha^{M |lag|}.
double pilot_autocovariance(const ChannelParams& ch, int M, int lag);

// Solve T x = b for a symmetric positive-definite Toeplitz matrix given by its
// first row, by Levinson recursion; falls back to a dense Cholesky solve when
// a reflection coefficient approaches unit magnitude.
std::vector<double> solve_symmetric_toeplitz(const std::vector<double>& first_row,
                                             const std::vector<double>& rhs);

// Exact linear-MMSE error variance for estimating h at data offset m from a
// finite pilot window: 2K+1 pilots centered at the nearest pilot (noncausal)
// or the K most recent pilots at or before it (causal). Converges to the
// corresponding Wiener MMSE as K grows and never increases with K.
double finite_window_mmse(const ChannelParams& ch, int M, int m, double pilot_power, int K,
                          FilterKind filter);

// Exact causal MMSE from the infinite pilot past: steady state of the scalar
// filtering recursion for the decimated chain (coefficient alpha^M), then
// m-step prediction:  sigma_h_sq (1 - alpha^{2m}) + alpha^{2m} Sigma_filt.
double kalman_steady_state_mmse(const ChannelParams& ch, int M, int m, double pilot_power);

// AR(1) fading realization started from its stationary law, plus pilot
// observations; bit-reproducible for a fixed (seed, arguments) pair.
ChannelTrace simulate_channel(const ChannelParams& ch, std::size_t n_symbols, int M,
                              double pilot_power, std::uint64_t seed);

struct EmpiricalMmse {
    double mean = 0.0;       // sample mean of |h - hhat|^2
    double std_error = 0.0;  // standard error of that mean
    std::size_t events = 0;
};

// Applies the finite-window LMMSE taps along a trace and averages the squared
// estimation error. Requires at least 10^4 estimation events.
EmpiricalMmse empirical_mmse_stats(const ChannelTrace& trace, const ChannelParams& ch, int M,
                                   int m, double pilot_power, int K, FilterKind filter);

double empirical_mmse(const ChannelTrace& trace, const ChannelParams& ch, int M, int m,
                      double pilot_power, int K, FilterKind filter);

}  // namespace psam
