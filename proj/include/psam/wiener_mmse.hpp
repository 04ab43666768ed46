#pragma once

#include <string>
#include <vector>

#include "psam/channel_spectrum.hpp"

namespace psam {

enum class FilterKind { Noncausal, Causal };
enum class AliasMode { Considered, Ignored };

std::string to_string(FilterKind kind);
std::string to_string(AliasMode mode);

// Constants of the canonical factorization of the pilot-branch spectrum,
//   P_t S_h(e^{jw}) / M + sigma_n_sq = r_f F(e^{jw}) F*(e^{jw}),
//   F(e^{jw}) = (1 - u e^{-jw}) / (1 - alpha e^{-jw}),
// with r_f > 0 and 0 <= u < 1 (u = 0 exactly when alpha = 0). Matching the
// constant Fourier coefficient requires r_f (1 + u^2) = c.
struct CanonicalFactors {
    double r_f;  // factorization gain
    double u;    // canonical zero
    double c;    // (P_t/M)(1-alpha^2) sigma_h_sq + (1+alpha^2) sigma_n_sq
};

CanonicalFactors gm_canonical_factors(const ChannelParams& ch, int M, double pilot_power);

// Estimation-error variance of the noncausal Wiener interpolator at data
// position m in [1, M-1], with spectral aliasing of the pilot-sampled Doppler
// spectrum fully accounted for:
//   sigma_h_sq - (1/2pi) Int P_t |S_{h,m}|^2 / (P_t S_{h,0} + sigma_n_sq) dw.
double noncausal_mmse_aliased(const ChannelParams& ch, int M, int m, double pilot_power);

// All positions m = 1..M-1 at once (index m-1). The position dependence
// factors out of the spectral integrals, so this costs two quadratures total.
std::vector<double> noncausal_error_variances_aliased(const ChannelParams& ch, int M,
                                                      double pilot_power);

// Position-independent error variance when aliasing is ignored:
//   sigma_h_sq - (1/2pi) Int_{-pi/M}^{pi/M} P_t S_h^2 / (P_t S_h + M sigma_n_sq) dw.
double noncausal_mmse_no_alias(const ChannelParams& ch, int M, double pilot_power);

// Causal (past-and-present pilots only) error variance under the same
// no-aliasing assumption: the noncausal value plus the energy of the
// anticausal branch A(e^{jw}) = (1-alpha^2) sigma_h_sq u / (1 - u alpha)
// * e^{jw} / (1 - u e^{jw}) removed by the Wiener-Hopf split.
double causal_mmse_no_alias(const ChannelParams& ch, int M, double pilot_power);

// Per-position error and estimate variances for one filter/aliasing choice.
// Invariant: est_var[m] + err_var[m] == sigma_h_sq (orthogonality).
struct EstimateQuality {
    std::vector<double> err_var;  // sigma_tilde^2 for m = 1..M-1
    std::vector<double> est_var;  // sigma_hat^2 for m = 1..M-1
    FilterKind filter = FilterKind::Noncausal;
    AliasMode alias = AliasMode::Considered;

    int period() const { return static_cast<int>(err_var.size()) + 1; }
};

// Assembles the per-position qualities. (Causal, Considered) has no analytic
// form here and throws UnsupportedError pointing at kalman_steady_state_mmse.
EstimateQuality estimate_quality(const ChannelParams& ch, int M, double pilot_power,
                                 FilterKind filter, AliasMode alias);

}  // namespace psam
