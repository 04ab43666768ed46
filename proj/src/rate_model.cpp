#include "psam/rate_model.hpp"

#include <cmath>
#include <numeric>
#include <stdexcept>
#include <string>

#include "psam/errors.hpp"

namespace psam {

TrainingConfig TrainingConfig::uniform(int M, double avg_power, double pilot_power) {
    TrainingConfig cfg;
    cfg.period = M;
    cfg.avg_power = avg_power;
    cfg.pilot_power = pilot_power;
    const double per_symbol = (M * avg_power - pilot_power) / (M - 1);
    cfg.data_powers.assign(static_cast<std::size_t>(M) - 1, per_symbol);
    return cfg;
}

void TrainingConfig::validate() const {
    if (period < 2) throw std::invalid_argument("TrainingConfig: period must be >= 2");
    if (!(avg_power > 0.0)) throw std::invalid_argument("TrainingConfig: avg_power must be > 0");
    if (!(pilot_power >= 0.0)) {
        throw std::invalid_argument("TrainingConfig: pilot_power must be >= 0");
    }
    if (data_powers.size() != static_cast<std::size_t>(period) - 1) {
        throw std::invalid_argument("TrainingConfig: expected M-1 data powers");
    }
    double total = pilot_power;
    for (double p : data_powers) {
        if (!(p >= 0.0)) throw std::invalid_argument("TrainingConfig: data powers must be >= 0");
        total += p;
    }
    if (total / period > avg_power + 1e-9) {
        throw std::invalid_argument("TrainingConfig: average power constraint violated");
    }
}

double exp_log_expectation(double gamma) {
    if (!(gamma >= 0.0)) {
        throw std::domain_error("exp_log_expectation: gamma must be nonnegative");
    }
    if (gamma == 0.0) return 0.0;
    const double x = 1.0 / gamma;
    if (x >= 1.0) {
        // Modified Lentz continued fraction; yields e^x E_1(x) directly, so
        // there is no overflow for small gamma.
        double b = x + 1.0;
        double c = 1e308;
        double d = 1.0 / b;
        double h = d;
        for (int i = 1; i <= 300; ++i) {
            const double an = -static_cast<double>(i) * i;
            b += 2.0;
            d = 1.0 / (an * d + b);
            c = b + an / c;
            const double del = c * d;
            h *= del;
            if (std::abs(del - 1.0) < 1e-16) return h;
        }
        throw NumericalError("exp_log_expectation: continued fraction did not converge");
    }
    // Power series E_1(x) = -euler - ln x + sum_{k>=1} (-1)^{k+1} x^k / (k k!).
    constexpr double kEuler = 0.57721566490153286060651209;
    double sum = 0.0;
    double term = 1.0;  // (-x)^k / k!
    for (int k = 1; k <= 80; ++k) {
        term *= -x / k;
        const double contrib = -term / k;
        sum += contrib;
        if (std::abs(contrib) < 1e-18 * (std::abs(sum) + 1.0)) break;
    }
    return std::exp(x) * (-kEuler - std::log(x) + sum);
}

RateResult rate_lower_bound(const ChannelParams& ch, const TrainingConfig& cfg,
                            const EstimateQuality& quality) {
    cfg.validate();
    if (quality.err_var.size() != cfg.data_powers.size()) {
        throw std::invalid_argument("rate_lower_bound: quality has " +
                                    std::to_string(quality.err_var.size()) +
                                    " positions, config expects " +
                                    std::to_string(cfg.data_powers.size()));
    }
    double nats = 0.0;
    for (std::size_t i = 0; i < cfg.data_powers.size(); ++i) {
        const double p = cfg.data_powers[i];
        const double sinr = p * quality.est_var[i] / (p * quality.err_var[i] + ch.sigma_n_sq);
        nats += exp_log_expectation(sinr);
    }
    nats /= cfg.period;
    return {nats, nats / std::log(2.0), cfg, quality};
}

double bit_energy(double snr_linear, double rate_bits) {
    if (!(snr_linear > 0.0)) throw std::domain_error("bit_energy: snr must be positive");
    if (!(rate_bits > 0.0)) {
        throw std::domain_error("bit_energy: rate must be positive to normalize per bit");
    }
    return snr_linear / rate_bits;
}

}  // namespace psam
