#include "psam/estimation_oracle.hpp"

#include <cmath>
#include <cstdlib>
#include <stdexcept>
#include <string>

#include "psam/errors.hpp"
#include "psam/rng.hpp"

namespace psam {

double pilot_autocovariance(const ChannelParams& ch, int M, int lag) {
    return ch.sigma_h_sq * std::pow(ch.alpha, M * std::abs(lag));
}

namespace {

std::vector<double> cholesky_solve(const std::vector<double>& first_row,
                                   const std::vector<double>& rhs) {
    const std::size_t n = rhs.size();
    std::vector<double> a(n * n);
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = 0; j <= i; ++j) {
            a[i * n + j] = first_row[i - j];
        }
    }
    for (std::size_t j = 0; j < n; ++j) {
        double d = a[j * n + j];
        for (std::size_t k = 0; k < j; ++k) d -= a[j * n + k] * a[j * n + k];
        if (!(d > 0.0)) throw NumericalError("cholesky_solve: matrix not positive definite");
        const double l = std::sqrt(d);
        a[j * n + j] = l;
        for (std::size_t i = j + 1; i < n; ++i) {
            double s = a[i * n + j];
            for (std::size_t k = 0; k < j; ++k) s -= a[i * n + k] * a[j * n + k];
            a[i * n + j] = s / l;
        }
    }
    std::vector<double> x(rhs);
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t k = 0; k < i; ++k) x[i] -= a[i * n + k] * x[k];
        x[i] /= a[i * n + i];
    }
    for (std::size_t ii = n; ii-- > 0;) {
        for (std::size_t k = ii + 1; k < n; ++k) x[ii] -= a[k * n + ii] * x[k];
        x[ii] /= a[ii * n + ii];
    }
    return x;
}

}  // namespace

std::vector<double> solve_symmetric_toeplitz(const std::vector<double>& first_row,
                                             const std::vector<double>& rhs) {
    const std::size_t n = rhs.size();
    if (first_row.size() != n || n == 0) {
        throw std::invalid_argument("solve_symmetric_toeplitz: dimension mismatch");
    }
    const double t0 = first_row[0];
    if (!(t0 > 0.0)) throw NumericalError("solve_symmetric_toeplitz: diagonal must be positive");
    if (n == 1) return {rhs[0] / t0};

    // Levinson recursion on the unit-diagonal system (T/t0) x = b/t0.
    std::vector<double> r(n - 1), b(n);
    for (std::size_t i = 0; i + 1 < n; ++i) r[i] = first_row[i + 1] / t0;
    for (std::size_t i = 0; i < n; ++i) b[i] = rhs[i] / t0;

    std::vector<double> y(n), x(n), work(n);
    y[0] = -r[0];
    x[0] = b[0];
    double beta = 1.0;
    double alpha = -r[0];
    constexpr double kReflectionLimit = 1.0 - 1e-12;
    if (std::abs(alpha) >= kReflectionLimit) return cholesky_solve(first_row, rhs);

    for (std::size_t k = 1; k < n; ++k) {
        beta *= (1.0 - alpha * alpha);
        double mu = b[k];
        for (std::size_t i = 0; i < k; ++i) mu -= r[i] * x[k - 1 - i];
        mu /= beta;
        for (std::size_t i = 0; i < k; ++i) work[i] = x[i] + mu * y[k - 1 - i];
        for (std::size_t i = 0; i < k; ++i) x[i] = work[i];
        x[k] = mu;
        if (k + 1 < n) {
            alpha = r[k];
            for (std::size_t i = 0; i < k; ++i) alpha += r[i] * y[k - 1 - i];
            alpha = -alpha / beta;
            if (std::abs(alpha) >= kReflectionLimit) return cholesky_solve(first_row, rhs);
            for (std::size_t i = 0; i < k; ++i) work[i] = y[i] + alpha * y[k - 1 - i];
            for (std::size_t i = 0; i < k; ++i) y[i] = work[i];
            y[k] = alpha;
        }
    }
    return x;
}

namespace {

// Signed time offsets (pilot instant minus estimation target Ml+m) of the
// window used by each filter, plus the Toeplitz first row of the pilot
// observation covariance.
struct WindowSystem {
    std::vector<double> first_row;
    std::vector<double> cross;  // r_i = sqrt(P_t) sigma_h_sq alpha^{|offset_i|}
};

WindowSystem build_window(const ChannelParams& ch, int M, int m, double pilot_power, int K,
                          FilterKind filter) {
    const std::size_t n =
        filter == FilterKind::Noncausal ? 2 * static_cast<std::size_t>(K) + 1 : K;
    WindowSystem sys;
    sys.first_row.resize(n);
    sys.cross.resize(n);
    for (std::size_t i = 0; i < n; ++i) {
        sys.first_row[i] = pilot_power * pilot_autocovariance(ch, M, static_cast<int>(i)) +
                           (i == 0 ? ch.sigma_n_sq : 0.0);
    }
    const double gain = std::sqrt(pilot_power) * ch.sigma_h_sq;
    for (std::size_t i = 0; i < n; ++i) {
        const long offset = filter == FilterKind::Noncausal
                                ? static_cast<long>(M) * (static_cast<long>(i) - K) - m
                                : -(static_cast<long>(M) * static_cast<long>(i) + m);
        sys.cross[i] = gain * std::pow(ch.alpha, std::labs(offset));
    }
    return sys;
}

}  // namespace

double finite_window_mmse(const ChannelParams& ch, int M, int m, double pilot_power, int K,
                          FilterKind filter) {
    ch.validate();
    if (M < 1 || K < 1 || m < 0 || m >= M) {
        throw std::invalid_argument("finite_window_mmse: need M >= 1, K >= 1, m in [0, M-1]");
    }
    if (pilot_power == 0.0) return ch.sigma_h_sq;
    const WindowSystem sys = build_window(ch, M, m, pilot_power, K, filter);
    const std::vector<double> taps = solve_symmetric_toeplitz(sys.first_row, sys.cross);
    double explained = 0.0;
    for (std::size_t i = 0; i < taps.size(); ++i) explained += sys.cross[i] * taps[i];
    return ch.sigma_h_sq - explained;
}

double kalman_steady_state_mmse(const ChannelParams& ch, int M, int m, double pilot_power) {
    ch.validate();
    if (M < 1 || m < 0) {
        throw std::invalid_argument("kalman_steady_state_mmse: need M >= 1 and m >= 0");
    }
    const double a = std::pow(ch.alpha, M);
    const double q = (1.0 - a * a) * ch.sigma_h_sq;
    double filt = ch.sigma_h_sq;
    for (int it = 0; it < 2000000; ++it) {
        const double pred = a * a * filt + q;
        const double next = pred * ch.sigma_n_sq / (pilot_power * pred + ch.sigma_n_sq);
        if (std::abs(next - filt) <= 1e-14) {
            filt = next;
            break;
        }
        filt = next;
    }
    const double decay = std::pow(ch.alpha, 2 * m);
    return ch.sigma_h_sq * (1.0 - decay) + decay * filt;
}

ChannelTrace simulate_channel(const ChannelParams& ch, std::size_t n_symbols, int M,
                              double pilot_power, std::uint64_t seed) {
    ch.validate();
    if (n_symbols < 1) throw std::invalid_argument("simulate_channel: n_symbols must be >= 1");
    if (M < 1) throw std::invalid_argument("simulate_channel: M must be >= 1");

    ChannelTrace trace;
    trace.seed = seed;
    trace.length = n_symbols;
    trace.period = M;
    trace.pilot_power = pilot_power;

    // Stream 0 drives the fading recursion, stream 1 the pilot noise.
    Rng fading(seed, 0);
    Rng noise(seed, 1);

    trace.coefficients.resize(n_symbols);
    trace.coefficients[0] = fading.complex_normal(ch.sigma_h_sq);
    const double innov_var = (1.0 - ch.alpha * ch.alpha) * ch.sigma_h_sq;
    for (std::size_t k = 1; k < n_symbols; ++k) {
        trace.coefficients[k] = ch.alpha * trace.coefficients[k - 1] +
                                fading.complex_normal(innov_var);
    }
    const double gain = std::sqrt(pilot_power);
    trace.observations.reserve(n_symbols / M + 1);
    for (std::size_t k = 0; k < n_symbols; k += M) {
        trace.observations.push_back(gain * trace.coefficients[k] +
                                     noise.complex_normal(ch.sigma_n_sq));
    }
    return trace;
}

EmpiricalMmse empirical_mmse_stats(const ChannelTrace& trace, const ChannelParams& ch, int M,
                                   int m, double pilot_power, int K, FilterKind filter) {
    if (M != trace.period || pilot_power != trace.pilot_power) {
        throw std::invalid_argument("empirical_mmse: M/P_t must match the trace generation");
    }
    if (m < 0 || m >= M) throw std::invalid_argument("empirical_mmse: m must lie in [0, M-1]");

    const WindowSystem sys = build_window(ch, M, m, pilot_power, K, filter);
    const std::vector<double> taps =
        pilot_power > 0.0 ? solve_symmetric_toeplitz(sys.first_row, sys.cross)
                          : std::vector<double>(sys.cross.size(), 0.0);

    const long n_pilots = static_cast<long>(trace.observations.size());
    const long first = filter == FilterKind::Noncausal ? K : K - 1;
    const long last_excl = filter == FilterKind::Noncausal ? n_pilots - K : n_pilots;

    std::vector<double> errors;
    errors.reserve(static_cast<std::size_t>(std::max(last_excl - first, 0L)));
    for (long l = first; l < last_excl; ++l) {
        const std::size_t target = static_cast<std::size_t>(l) * M + m;
        if (target >= trace.length) break;
        std::complex<double> est{0.0, 0.0};
        if (filter == FilterKind::Noncausal) {
            for (int j = -K; j <= K; ++j) est += taps[j + K] * trace.observations[l + j];
        } else {
            for (int j = 0; j < K; ++j) est += taps[j] * trace.observations[l - j];
        }
        errors.push_back(std::norm(trace.coefficients[target] - est));
    }
    const std::size_t events = errors.size();
    if (events < 10000) {
        throw std::invalid_argument("empirical_mmse: trace too short, got " +
                                    std::to_string(events) + " estimation events");
    }
    EmpiricalMmse out;
    out.events = events;
    double sum = 0.0;
    for (double e : errors) sum += e;
    out.mean = sum / static_cast<double>(events);
    // Consecutive events share window samples and fading history, so the
    // naive iid standard error is optimistic; estimate it from the spread of
    // contiguous batch means instead.
    constexpr std::size_t kBatches = 50;
    const std::size_t batch = events / kBatches;
    double ss = 0.0;
    for (std::size_t b = 0; b < kBatches; ++b) {
        double bm = 0.0;
        for (std::size_t i = b * batch; i < (b + 1) * batch; ++i) bm += errors[i];
        bm /= static_cast<double>(batch);
        ss += (bm - out.mean) * (bm - out.mean);
    }
    out.std_error = std::sqrt(ss / (kBatches - 1) / kBatches);
    return out;
}

double empirical_mmse(const ChannelTrace& trace, const ChannelParams& ch, int M, int m,
                      double pilot_power, int K, FilterKind filter) {
    return empirical_mmse_stats(trace, ch, M, m, pilot_power, K, filter).mean;
}

}  // namespace psam
