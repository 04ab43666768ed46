#include <doctest.h>

#include <array>
#include <cmath>
#include <vector>

#include "psam/quadrature.hpp"
#include "psam/rate_model.hpp"
#include "psam/rng.hpp"
#include "psam/wiener_mmse.hpp"

using namespace psam;

namespace {

// Independent oracle: E[ln(1+gamma Z)] by adaptive quadrature of
// ln(1+gamma z) e^{-z} on [0, 60]; the discarded tail is below 1e-24.
double expectation_by_quadrature(double gamma) {
    quadrature::Options opt;
    opt.abs_tol = 1e-12;
    return quadrature::integrate(
        [gamma](double z) { return std::log1p(gamma * z) * std::exp(-z); }, 0.0, 60.0, opt);
}

// 64-node Gauss-Laguerre rule (weight e^{-z}), nodes by Newton iteration on
// the Laguerre recurrence.
std::pair<std::array<double, 64>, std::array<double, 64>> gauss_laguerre_64() {
    constexpr int n = 64;
    std::array<double, 64> x{}, w{};
    double z = 0.0;
    for (int i = 0; i < n; ++i) {
        if (i == 0) {
            z = 3.0 / (1.0 + 2.4 * n);
        } else if (i == 1) {
            z += 15.0 / (1.0 + 2.5 * n);
        } else {
            z += ((1.0 + 2.55 * (i - 1)) / (1.9 * (i - 1))) * (z - x[i - 2]);
        }
        double pp = 0.0;
        for (int it = 0; it < 200; ++it) {
            double p1 = 1.0, p2 = 0.0;
            for (int j = 1; j <= n; ++j) {
                const double p3 = p2;
                p2 = p1;
                p1 = ((2 * j - 1 - z) * p2 - (j - 1) * p3) / j;
            }
            pp = n * (p1 - p2) / z;
            const double z1 = z;
            z = z1 - p1 / pp;
            if (std::abs(z - z1) < 1e-15 * z) break;
        }
        x[i] = z;
        // weight for L_n with unit leading normalization: -1/(n pp L_{n-1})
        double p1 = 1.0, p2 = 0.0;
        for (int j = 1; j <= n; ++j) {
            const double p3 = p2;
            p2 = p1;
            p1 = ((2 * j - 1 - z) * p2 - (j - 1) * p3) / j;
        }
        w[i] = -1.0 / (n * pp * p2);
    }
    return {x, w};
}

}  // namespace

TEST_CASE("exp_log_expectation: anchors") {
    CHECK(exp_log_expectation(0.0) == 0.0);
    CHECK(exp_log_expectation(1e-6) == doctest::Approx(1e-6).epsilon(1e-3));
    // e * E1(1)
    CHECK(exp_log_expectation(1.0) == doctest::Approx(0.596347362323194).epsilon(1e-12));
    CHECK_THROWS_AS(exp_log_expectation(-0.5), std::domain_error);
}

TEST_CASE("exp_log_expectation: Gauss-Laguerre oracle at gamma = 1") {
    const auto [x, w] = gauss_laguerre_64();
    double acc = 0.0;
    for (int i = 0; i < 64; ++i) acc += w[i] * std::log1p(x[i]);
    CHECK(std::abs(acc - exp_log_expectation(1.0)) < 1e-8);
}

TEST_CASE("exp_log_expectation: quadrature oracle across twelve decades") {
    for (double g = 1e-6; g <= 1.0001e6; g *= 10.0) {
        CHECK(std::abs(exp_log_expectation(g) - expectation_by_quadrature(g)) < 1e-8);
    }
}

TEST_CASE("exp_log_expectation: increasing, concave, below Jensen") {
    double prev = 0.0;
    double prev_slope = 1.0e18;
    for (double lg = -6.0; lg <= 6.0; lg += 0.25) {
        const double g = std::pow(10.0, lg);
        const double v = exp_log_expectation(g);
        CHECK(v > prev);
        CHECK(v <= std::log1p(g));
        const double h = 1e-4 * g;
        const double slope = (exp_log_expectation(g + h) - exp_log_expectation(g - h)) / (2 * h);
        CHECK(slope > 0.0);
        CHECK(slope <= prev_slope * (1.0 + 1e-7));
        prev = v;
        prev_slope = slope;
    }
    // extreme arguments stay finite and ordered
    CHECK(exp_log_expectation(1e-12) > 0.0);
    CHECK(exp_log_expectation(1e12) > exp_log_expectation(1e11));
    CHECK(std::isfinite(exp_log_expectation(1e12)));
}

TEST_CASE("TrainingConfig: uniform split and the power constraint") {
    const auto cfg = TrainingConfig::uniform(5, 2.0, 4.0);
    REQUIRE(cfg.data_powers.size() == 4);
    for (double p : cfg.data_powers) CHECK(p == doctest::Approx(1.5));
    CHECK_NOTHROW(cfg.validate());

    TrainingConfig greedy = cfg;
    greedy.data_powers.assign(4, 2.0);  // (4 + 8)/5 > 2
    CHECK_THROWS_AS(greedy.validate(), std::invalid_argument);
}

TEST_CASE("rate_lower_bound: degenerate inputs give zero rate") {
    const ChannelParams ch{0.9, 1.0, 1.0};
    const auto quality = estimate_quality(ch, 4, 2.0, FilterKind::Noncausal, AliasMode::Ignored);

    TrainingConfig idle = TrainingConfig::uniform(4, 1.0, 1.0);
    idle.data_powers.assign(3, 0.0);
    CHECK(rate_lower_bound(ch, idle, quality).rate_nats == 0.0);

    const auto blind = estimate_quality(ch, 4, 0.0, FilterKind::Noncausal, AliasMode::Ignored);
    const auto cfg = TrainingConfig::uniform(4, 1.0, 0.0);
    CHECK(rate_lower_bound(ch, cfg, blind).rate_nats == 0.0);
}

TEST_CASE("rate_lower_bound: uniform case collapses to the (M-1)/M form") {
    const ChannelParams ch{0.99, 1.0, 1.0};
    const int M = 8;
    const double pt = 3.0;
    const auto quality = estimate_quality(ch, M, pt, FilterKind::Noncausal, AliasMode::Ignored);
    const auto cfg = TrainingConfig::uniform(M, 1.0, pt);
    const double p0 = cfg.data_powers.front();
    const double gamma =
        p0 * quality.est_var.front() / (p0 * quality.err_var.front() + ch.sigma_n_sq);
    const double expected = (M - 1.0) / M * exp_log_expectation(gamma);
    const RateResult r = rate_lower_bound(ch, cfg, quality);
    CHECK(r.rate_nats == doctest::Approx(expected).epsilon(1e-14));
    CHECK(r.rate_bits == doctest::Approx(r.rate_nats / std::log(2.0)));
}

TEST_CASE("rate_lower_bound: dimension mismatch is rejected") {
    const ChannelParams ch{0.9, 1.0, 1.0};
    const auto quality = estimate_quality(ch, 4, 2.0, FilterKind::Noncausal, AliasMode::Ignored);
    const auto cfg = TrainingConfig::uniform(5, 1.0, 2.0);
    CHECK_THROWS_AS(rate_lower_bound(ch, cfg, quality), std::invalid_argument);
}

TEST_CASE("rate_lower_bound: Monte Carlo expectation agrees at an optimized point") {
    const ChannelParams ch{0.99, 1.0, 1.0};
    const int M = 16;
    const double pt = 2.533;  // near-optimal pilot power at SNR 0 dB
    const auto quality = estimate_quality(ch, M, pt, FilterKind::Noncausal, AliasMode::Considered);
    const auto cfg = TrainingConfig::uniform(M, 1.0, pt);
    const RateResult r = rate_lower_bound(ch, cfg, quality);
    CHECK(r.rate_nats > 0.0);

    Rng rng(20240817);
    constexpr int kDraws = 1000000;
    double sum = 0.0, sum_sq = 0.0;
    for (int i = 0; i < kDraws; ++i) {
        const double z = rng.exponential();
        double nats = 0.0;
        for (std::size_t m = 0; m < quality.err_var.size(); ++m) {
            const double p0 = cfg.data_powers[m];
            const double gamma =
                p0 * quality.est_var[m] / (p0 * quality.err_var[m] + ch.sigma_n_sq);
            nats += std::log1p(gamma * z);
        }
        nats /= M;
        sum += nats;
        sum_sq += nats * nats;
    }
    const double mean = sum / kDraws;
    const double sd = std::sqrt((sum_sq - sum * sum / kDraws) / (kDraws - 1) / kDraws);
    CHECK(std::abs(mean - r.rate_nats) < 3.0 * sd);
}

TEST_CASE("rate bound responds to estimate quality and SNR the right way") {
    const ChannelParams ch{0.9, 1.0, 1.0};
    const auto cfg = TrainingConfig::uniform(4, 1.0, 2.0);
    EstimateQuality q;
    q.err_var.assign(3, 0.2);
    q.est_var.assign(3, 0.8);
    const double base = rate_lower_bound(ch, cfg, q).rate_nats;
    // better estimate at fixed error: rate up
    EstimateQuality stronger = q;
    stronger.est_var.assign(3, 0.9);
    CHECK(rate_lower_bound(ch, cfg, stronger).rate_nats > base);
    // worse error at fixed estimate: rate down
    EstimateQuality noisier = q;
    noisier.err_var.assign(3, 0.5);
    CHECK(rate_lower_bound(ch, cfg, noisier).rate_nats < base);

    // vanishing power budget drives the bound to zero, more power raises it
    double prev = -1.0;
    double smallest = 1.0;
    for (double p : {1e-9, 1e-3, 1.0, 100.0}) {
        const auto quality =
            estimate_quality(ch, 4, p, FilterKind::Noncausal, AliasMode::Ignored);
        const double r =
            rate_lower_bound(ch, TrainingConfig::uniform(4, p, p), quality).rate_nats;
        CHECK(r > prev);
        if (prev < 0.0) smallest = r;
        prev = r;
    }
    CHECK(smallest < 1e-9);
}

TEST_CASE("bit_energy") {
    CHECK(bit_energy(1.0, 1.0) == 1.0);
    CHECK(10.0 * std::log10(bit_energy(2.0, 0.5)) == doctest::Approx(6.0206).epsilon(1e-4));
    CHECK_THROWS_AS(bit_energy(1.0, 0.0), std::domain_error);
    CHECK_THROWS_AS(bit_energy(0.0, 1.0), std::domain_error);
}
