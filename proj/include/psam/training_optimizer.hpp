#pragma once

#include <cstddef>
#include <string>
#include <vector>

#include "psam/rate_model.hpp"

namespace psam {

struct OptimizerDiagnostics {
    std::size_t rate_evaluations = 0;
    bool boundary_optimum = false;  // pilot-power optimum within one grid cell of 0 or MP
    bool grid_fallback = false;     // golden-section refinement lost to the coarse grid
};

struct PilotPowerResult {
    double pilot_power = 0.0;
    RateResult rate;
    OptimizerDiagnostics diagnostics;
};

// Maximizes the uniform-power rate bound over P_t in (0, MP): a 200-point
// coarse grid followed by golden-section refinement to |dP_t| <= 1e-6 * MP.
PilotPowerResult optimize_pilot_power(const ChannelParams& ch, int M, double avg_power,
                                      FilterKind filter, AliasMode alias);

struct PeriodRange {
    int lo = 2;
    int hi = 100;
};

struct OptimizationResult {
    RateResult best;
    int period_star = 0;
    double pilot_power_star = 0.0;
    std::vector<double> profile;  // data powers at the optimum
    OptimizerDiagnostics diagnostics;
};

// Exhaustive search over the integer period range; candidates are evaluated
// in parallel and ties break toward the smaller period.
OptimizationResult optimize_period(const ChannelParams& ch, double avg_power, PeriodRange range,
                                   FilterKind filter, AliasMode alias);

// Concave water-filling-style allocation of the data budget MP - P_t across
// positions with unequal estimate quality (noncausal filter, aliasing
// considered): bisection on the shared Lagrange multiplier, with per-symbol
// derivative root-finding. Marginal utilities are matched to a KKT residual
// of 1e-8.
std::vector<double> optimize_power_profile(const ChannelParams& ch, int M, double avg_power,
                                           double pilot_power);

// Same allocation for an explicitly supplied quality (exposed for tests and
// for nesting inside the pilot-power search).
std::vector<double> optimize_power_profile(const EstimateQuality& quality, double sigma_n_sq,
                                           double budget);

struct ProfileResult {
    double pilot_power = 0.0;
    std::vector<double> data_powers;
    double rate_nats = 0.0;
    double rate_bits = 0.0;
};

// Joint pilot-power and per-symbol allocation (noncausal, aliasing
// considered): a 400-point scalar search over P_t with the concave profile
// program nested inside.
ProfileResult optimize_joint_profile(const ChannelParams& ch, int M, double avg_power);

struct SnrSweepRow {
    double snr_db = 0.0;
    int period_star = 0;
    double pilot_power_star = 0.0;
    double rate_bits = 0.0;
    bool ok = false;
    std::string error;
};

// optimize_period at every SNR of the grid; failed rows are marked, never
// silently dropped, and input order is preserved.
std::vector<SnrSweepRow> sweep_snr(const ChannelParams& ch, const std::vector<double>& snr_grid_db,
                                   FilterKind filter, AliasMode alias, PeriodRange range);

struct BitEnergyRow {
    double snr_db = 0.0;
    double eb_n0_db = 0.0;
    double rate_bits = 0.0;
    int period_star = 0;
};

struct BitEnergyResult {
    double snr_star_db = 0.0;
    double eb_n0_min_db = 0.0;
    std::vector<BitEnergyRow> curve;
};

// Minimizes E_b/N_0 = SNR / C(SNR) over the sweep. The grid must span at
// least [-10, 10] dB with steps of at most 0.5 dB.
BitEnergyResult minimum_bit_energy(const ChannelParams& ch,
                                   const std::vector<double>& snr_grid_db, FilterKind filter,
                                   AliasMode alias, PeriodRange range);

}  // namespace psam
