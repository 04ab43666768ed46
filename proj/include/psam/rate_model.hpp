#pragma once

#include <vector>

#include "psam/channel_spectrum.hpp"
#include "psam/wiener_mmse.hpp"

namespace psam {

// One pilot followed by M-1 data symbols, repeated with average-power budget P:
//   (P_t + sum_m P_m) / M <= P.
struct TrainingConfig {
    int period = 2;                   // M
    double pilot_power = 0.0;         // P_t
    std::vector<double> data_powers;  // P_m for m = 1..M-1
    double avg_power = 1.0;           // P

    // Uniform data allocation P_m = (M P - P_t) / (M - 1), optimal whenever
    // the estimate quality is position-independent.
    static TrainingConfig uniform(int M, double avg_power, double pilot_power);

    void validate() const;
};

// Achievable-rate lower bound together with the inputs that produced it.
struct RateResult {
    double rate_nats = 0.0;
    double rate_bits = 0.0;
    TrainingConfig config;
    EstimateQuality quality;
};

// E[ln(1 + gamma Z)] for Z a unit-mean exponential, evaluated through the
// exponential-integral identity e^{1/gamma} E_1(1/gamma). Stable over
// gamma in [1e-12, 1e12]; exactly 0 at gamma = 0.
double exp_log_expectation(double gamma);

// Lower bound on the achievable rate (nats and bits per channel use):
//   (1/M) sum_{m=1}^{M-1} E[ln(1 + P_m shat_m / (P_m serr_m + sigma_n_sq) |xi|^2)].
RateResult rate_lower_bound(const ChannelParams& ch, const TrainingConfig& cfg,
                            const EstimateQuality& quality);

// Normalized energy per information bit, SNR / C(SNR), both linear.
// Throws std::domain_error when the rate is not positive.
double bit_energy(double snr_linear, double rate_bits);

}  // namespace psam
