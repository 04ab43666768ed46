#pragma once

#include <array>
#include <cmath>
#include <cstdlib>
#include <utility>

#include "psam/errors.hpp"

namespace psam::quadrature {

// Positive half of the 64-point Gauss-Legendre rule on [-1, 1].
inline constexpr std::array<std::array<double, 2>, 32> kGauss64 = {{
    {0.024350292663424432509, 0.0486909570091397203834},
    {0.0729931217877990394495, 0.0485754674415034269348},
    {0.12146281929612055447, 0.0483447622348029571698},
    {0.169644420423992818037, 0.0479993885964583077281},
    {0.21742364374000708415, 0.0475401657148303086623},
    {0.264687162208767416374, 0.0469681828162100173253},
    {0.311322871990210956158, 0.046284796581314417296},
    {0.35722015833766811595, 0.0454916279274181444798},
    {0.402270157963991603696, 0.0445905581637565630601},
    {0.446366017253464087985, 0.0435837245293234533768},
    {0.489403145707052957479, 0.0424735151236535890073},
    {0.531279464019894545658, 0.0412625632426235286102},
    {0.571895646202634034284, 0.0399537411327203413867},
    {0.611155355172393250249, 0.038550153178615629129},
    {0.648965471254657339858, 0.0370551285402400460404},
    {0.685236313054233242564, 0.0354722132568823838107},
    {0.719881850171610826849, 0.0338051618371416093916},
    {0.752819907260531896612, 0.0320579283548515535855},
    {0.78397235894334140761, 0.030234657072402478868},
    {0.813265315122797559742, 0.0283396726142594832275},
    {0.840629296252580362752, 0.0263774697150546586717},
    {0.865999398154092819761, 0.0243527025687108733382},
    {0.889315445995114105853, 0.0222701738083832541593},
    {0.910522137078502805756, 0.0201348231535302093723},
    {0.929569172131939575821, 0.017951715775697343085},
    {0.946411374858402816062, 0.015726030476024719322},
    {0.961008799652053718919, 0.0134630478967186425981},
    {0.973326827789910963742, 0.0111681394601311288186},
    {0.983336253884625956931, 0.00884675982636394772303},
    {0.991013371476744320739, 0.00650445796897836285612},
    {0.996340116771955279347, 0.00414703326056246763529},
    {0.999305041735772139457, 0.0017832807216964329473},
}};

struct Options {
    double abs_tol = 1e-9;  // absolute tolerance on the whole integral
    int max_depth = 48;
    int min_depth = 2;  // panels are always split this many times first
};

template <typename F>
double gauss_legendre_64(F&& f, double a, double b) {
    const double mid = 0.5 * (a + b);
    const double half = 0.5 * (b - a);
    double acc = 0.0;
    for (const auto& [x, w] : kGauss64) {
        acc += w * (f(mid + half * x) + f(mid - half * x));
    }
    return half * acc;
}

namespace detail {

template <typename F>
double refine(F& f, double a, double b, double whole, double tol, int depth, const Options& opt) {
    const double mid = 0.5 * (a + b);
    if (mid <= a || mid >= b) {
        throw NumericalError("quadrature: interval collapsed before reaching tolerance");
    }
    const double left = gauss_legendre_64(f, a, mid);
    const double right = gauss_legendre_64(f, mid, b);
    const double err = std::abs(left + right - whole);
    // The relative floor keeps tolerance halving from chasing panels below
    // machine precision on tall peaks.
    const double floor_tol = 1e-14 * (std::abs(left) + std::abs(right));
    if (depth >= opt.min_depth && (err <= tol || err <= floor_tol)) {
        return left + right;
    }
    if (depth >= opt.max_depth) {
        throw NumericalError("quadrature: tolerance not reached at maximum subdivision depth");
    }
    return refine(f, a, mid, left, 0.5 * tol, depth + 1, opt) +
           refine(f, mid, b, right, 0.5 * tol, depth + 1, opt);
}

}  // namespace detail

// Adaptive composite Gauss-Legendre integration of f over [a, b]. Panels are
// bisected until the two-half estimate agrees with the parent panel within the
// (per-panel share of the) absolute tolerance, so refinement concentrates
// around sharp features such as the Doppler peak at w = 0. Throws
// NumericalError if the tolerance cannot be met.
template <typename F>
double integrate(F&& f, double a, double b, const Options& opt = {}) {
    if (!(a < b)) return 0.0;
    const double whole = gauss_legendre_64(f, a, b);
    return detail::refine(f, a, b, whole, opt.abs_tol, 0, opt);
}

// (1/2pi) * integral over [-W, W] of an even integrand.
template <typename F>
double spectral_mean_even(F&& f, double half_width, const Options& opt = {}) {
    constexpr double kPi = 3.14159265358979323846;
    return integrate(std::forward<F>(f), 0.0, half_width, opt) / kPi;
}

}  // namespace psam::quadrature
