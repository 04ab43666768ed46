#include "psam/training_optimizer.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

#include "psam/errors.hpp"
#include "psam/parallel.hpp"

namespace psam {

namespace {

constexpr int kCoarseGridPoints = 200;
constexpr int kJointGridPoints = 400;

RateResult uniform_rate(const ChannelParams& ch, int M, double avg_power, double pilot_power,
                        FilterKind filter, AliasMode alias) {
    const EstimateQuality q = estimate_quality(ch, M, pilot_power, filter, alias);
    return rate_lower_bound(ch, TrainingConfig::uniform(M, avg_power, pilot_power), q);
}

}  // namespace

PilotPowerResult optimize_pilot_power(const ChannelParams& ch, int M, double avg_power,
                                      FilterKind filter, AliasMode alias) {
    ch.validate();
    if (M < 2) throw std::invalid_argument("optimize_pilot_power: M must be >= 2");
    if (!(avg_power > 0.0)) throw std::invalid_argument("optimize_pilot_power: P must be > 0");

    const double budget = M * avg_power;
    PilotPowerResult result;
    auto evaluate = [&](double pt) {
        ++result.diagnostics.rate_evaluations;
        return uniform_rate(ch, M, avg_power, pt, filter, alias);
    };

    const double step = budget / (kCoarseGridPoints + 1);
    double best_pt = step;
    RateResult best = evaluate(best_pt);
    for (int i = 2; i <= kCoarseGridPoints; ++i) {
        const double pt = step * i;
        RateResult r = evaluate(pt);
        if (r.rate_nats > best.rate_nats) {
            best = std::move(r);
            best_pt = pt;
        }
    }
    const double grid_best_rate = best.rate_nats;
    result.diagnostics.boundary_optimum = best_pt <= step || best_pt >= budget - step;

    // Golden-section refinement inside the bracketing grid cells.
    constexpr double kInvPhi = 0.6180339887498949;
    double lo = std::max(best_pt - step, 0.0);
    double hi = std::min(best_pt + step, budget);
    double c = hi - kInvPhi * (hi - lo);
    double d = lo + kInvPhi * (hi - lo);
    RateResult fc = evaluate(c);
    RateResult fd = evaluate(d);
    while (hi - lo > 1e-6 * budget) {
        if (fc.rate_nats > fd.rate_nats) {
            hi = d;
            d = c;
            fd = std::move(fc);
            c = hi - kInvPhi * (hi - lo);
            fc = evaluate(c);
        } else {
            lo = c;
            c = d;
            fc = std::move(fd);
            d = lo + kInvPhi * (hi - lo);
            fd = evaluate(d);
        }
    }
    RateResult& refined = fc.rate_nats > fd.rate_nats ? fc : fd;
    const double refined_pt = fc.rate_nats > fd.rate_nats ? c : d;
    if (refined.rate_nats >= grid_best_rate) {
        best = std::move(refined);
        best_pt = refined_pt;
    } else {
        // Non-unimodal rate profile: keep the dense-grid winner.
        result.diagnostics.grid_fallback = true;
    }
    result.pilot_power = best_pt;
    result.rate = std::move(best);
    return result;
}

OptimizationResult optimize_period(const ChannelParams& ch, double avg_power, PeriodRange range,
                                   FilterKind filter, AliasMode alias) {
    if (range.lo < 2 || range.hi < range.lo || range.hi > 200) {
        throw std::invalid_argument("optimize_period: range must satisfy 2 <= lo <= hi <= 200");
    }
    const std::size_t count = static_cast<std::size_t>(range.hi - range.lo + 1);
    std::vector<PilotPowerResult> candidates = parallel_map(count, [&](std::size_t i) {
        return optimize_pilot_power(ch, range.lo + static_cast<int>(i), avg_power, filter, alias);
    });

    std::size_t best_idx = 0;
    OptimizationResult out;
    for (std::size_t i = 0; i < candidates.size(); ++i) {
        out.diagnostics.rate_evaluations += candidates[i].diagnostics.rate_evaluations;
        out.diagnostics.grid_fallback |= candidates[i].diagnostics.grid_fallback;
        if (candidates[i].rate.rate_nats > candidates[best_idx].rate.rate_nats) {
            best_idx = i;  // strict inequality: ties stay with the smaller period
        }
    }
    PilotPowerResult& winner = candidates[best_idx];
    out.period_star = range.lo + static_cast<int>(best_idx);
    out.pilot_power_star = winner.pilot_power;
    out.profile = winner.rate.config.data_powers;
    out.diagnostics.boundary_optimum = winner.diagnostics.boundary_optimum;
    out.best = std::move(winner.rate);
    return out;
}

namespace {

// d/dP of exp_log_expectation(P shat / (P serr + sn2)), central difference
// with a relative step of 1e-6; analytic slope shat/sn2 at P = 0.
double marginal_rate(double p, double est, double err, double sigma_n_sq) {
    if (p <= 0.0) return est / sigma_n_sq;
    const double h = 1e-6 * p;
    const auto f = [&](double q) {
        return exp_log_expectation(q * est / (q * err + sigma_n_sq));
    };
    return (f(p + h) - f(p - h)) / (2.0 * h);
}

double power_at_multiplier(double lambda, double est, double err, double sigma_n_sq,
                           double budget) {
    if (marginal_rate(0.0, est, err, sigma_n_sq) <= lambda) return 0.0;
    double hi = budget;
    while (marginal_rate(hi, est, err, sigma_n_sq) > lambda) {
        hi *= 2.0;
        if (hi > 1e15) throw NumericalError("optimize_power_profile: multiplier bracket blew up");
    }
    double lo = 0.0;
    for (int it = 0; it < 200 && hi - lo > 1e-13 * std::max(budget, 1.0); ++it) {
        const double mid = 0.5 * (lo + hi);
        (marginal_rate(mid, est, err, sigma_n_sq) > lambda ? lo : hi) = mid;
    }
    return 0.5 * (lo + hi);
}

}  // namespace

std::vector<double> optimize_power_profile(const EstimateQuality& quality, double sigma_n_sq,
                                           double budget) {
    if (!(budget > 0.0)) {
        throw std::invalid_argument("optimize_power_profile: data-power budget must be positive");
    }
    const std::size_t n = quality.err_var.size();
    if (n == 0) throw std::invalid_argument("optimize_power_profile: empty quality");

    double lambda_hi = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        lambda_hi = std::max(lambda_hi, quality.est_var[i] / sigma_n_sq);
    }
    if (lambda_hi == 0.0) {
        // No usable estimate anywhere: the objective is flat, split evenly.
        return std::vector<double>(n, budget / n);
    }

    std::vector<double> profile(n, 0.0);
    double lambda_lo = 0.0;
    for (int it = 0; it < 200; ++it) {
        const double lambda = 0.5 * (lambda_lo + lambda_hi);
        double total = 0.0;
        for (std::size_t i = 0; i < n; ++i) {
            profile[i] = power_at_multiplier(lambda, quality.est_var[i], quality.err_var[i],
                                             sigma_n_sq, budget);
            total += profile[i];
        }
        if (total > budget) {
            lambda_lo = lambda;
        } else {
            lambda_hi = lambda;
        }
        if (std::abs(total - budget) <= 1e-12 * budget) break;
    }
    // Land exactly on the budget; the correction is within the bisection slack.
    double total = 0.0;
    for (double p : profile) total += p;
    if (total > 0.0) {
        const double scale = budget / total;
        for (double& p : profile) p *= scale;
    } else {
        std::fill(profile.begin(), profile.end(), budget / n);
    }

    // KKT check: active positions share one marginal utility.
    const double lambda = 0.5 * (lambda_lo + lambda_hi);
    for (std::size_t i = 0; i < n; ++i) {
        if (profile[i] > 1e-9 * budget) {
            const double g = marginal_rate(profile[i], quality.est_var[i], quality.err_var[i],
                                           sigma_n_sq);
            if (std::abs(g - lambda) > 1e-8 * std::max(1.0, lambda)) {
                throw NumericalError("optimize_power_profile: KKT residual above 1e-8");
            }
        }
    }
    return profile;
}

std::vector<double> optimize_power_profile(const ChannelParams& ch, int M, double avg_power,
                                           double pilot_power) {
    const double budget = M * avg_power - pilot_power;
    if (!(budget > 0.0)) {
        throw std::invalid_argument("optimize_power_profile: pilot power exhausts the budget");
    }
    const EstimateQuality q =
        estimate_quality(ch, M, pilot_power, FilterKind::Noncausal, AliasMode::Considered);
    return optimize_power_profile(q, ch.sigma_n_sq, budget);
}

ProfileResult optimize_joint_profile(const ChannelParams& ch, int M, double avg_power) {
    ch.validate();
    if (M < 2) throw std::invalid_argument("optimize_joint_profile: M must be >= 2");
    const double budget = M * avg_power;

    std::vector<ProfileResult> evals = parallel_map(kJointGridPoints, [&](std::size_t i) {
        ProfileResult r;
        r.pilot_power = budget * static_cast<double>(i + 1) / (kJointGridPoints + 1);
        const EstimateQuality q = estimate_quality(ch, M, r.pilot_power, FilterKind::Noncausal,
                                                   AliasMode::Considered);
        r.data_powers = optimize_power_profile(q, ch.sigma_n_sq, budget - r.pilot_power);
        TrainingConfig cfg;
        cfg.period = M;
        cfg.avg_power = avg_power;
        cfg.pilot_power = r.pilot_power;
        cfg.data_powers = r.data_powers;
        const RateResult rate = rate_lower_bound(ch, cfg, q);
        r.rate_nats = rate.rate_nats;
        r.rate_bits = rate.rate_bits;
        return r;
    });

    std::size_t best = 0;
    for (std::size_t i = 1; i < evals.size(); ++i) {
        if (evals[i].rate_nats > evals[best].rate_nats) best = i;
    }
    return evals[best];
}

std::vector<SnrSweepRow> sweep_snr(const ChannelParams& ch, const std::vector<double>& snr_grid_db,
                                   FilterKind filter, AliasMode alias, PeriodRange range) {
    if (snr_grid_db.empty()) throw std::invalid_argument("sweep_snr: empty SNR grid");
    std::vector<SnrSweepRow> rows(snr_grid_db.size());
    for (std::size_t i = 0; i < snr_grid_db.size(); ++i) {
        SnrSweepRow& row = rows[i];
        row.snr_db = snr_grid_db[i];
        try {
            const double p = std::pow(10.0, snr_grid_db[i] / 10.0) * ch.sigma_n_sq;
            const OptimizationResult r = optimize_period(ch, p, range, filter, alias);
            row.period_star = r.period_star;
            row.pilot_power_star = r.pilot_power_star;
            row.rate_bits = r.best.rate_bits;
            row.ok = true;
        } catch (const std::exception& e) {
            row.ok = false;
            row.error = e.what();
        }
    }
    return rows;
}

BitEnergyResult minimum_bit_energy(const ChannelParams& ch,
                                   const std::vector<double>& snr_grid_db, FilterKind filter,
                                   AliasMode alias, PeriodRange range) {
    if (snr_grid_db.size() < 2) {
        throw std::invalid_argument("minimum_bit_energy: grid needs at least two points");
    }
    constexpr double kTol = 1e-9;
    double max_step = 0.0;
    for (std::size_t i = 1; i < snr_grid_db.size(); ++i) {
        max_step = std::max(max_step, snr_grid_db[i] - snr_grid_db[i - 1]);
        if (snr_grid_db[i] <= snr_grid_db[i - 1]) {
            throw std::invalid_argument("minimum_bit_energy: grid must be strictly increasing");
        }
    }
    if (snr_grid_db.front() > -10.0 + kTol || snr_grid_db.back() < 10.0 - kTol ||
        max_step > 0.5 + kTol) {
        throw std::invalid_argument(
            "minimum_bit_energy: grid must span [-10, 10] dB with step <= 0.5 dB");
    }

    const std::vector<SnrSweepRow> sweep = sweep_snr(ch, snr_grid_db, filter, alias, range);
    BitEnergyResult out;
    out.eb_n0_min_db = std::numeric_limits<double>::infinity();
    bool any_rate = false;
    for (const SnrSweepRow& row : sweep) {
        if (!row.ok) throw NumericalError("minimum_bit_energy: sweep failed at " +
                                          std::to_string(row.snr_db) + " dB: " + row.error);
        if (!(row.rate_bits > 0.0)) continue;
        any_rate = true;
        const double snr_linear = std::pow(10.0, row.snr_db / 10.0);
        const double eb_db = 10.0 * std::log10(bit_energy(snr_linear, row.rate_bits));
        out.curve.push_back({row.snr_db, eb_db, row.rate_bits, row.period_star});
        if (eb_db < out.eb_n0_min_db) {
            out.eb_n0_min_db = eb_db;
            out.snr_star_db = row.snr_db;
        }
    }
    if (!any_rate) throw NumericalError("minimum_bit_energy: every grid point produced zero rate");
    return out;
}

}  // namespace psam
