#pragma once

#include <array>
#include <cmath>
#include <limits>
#include <numbers>

#include "affect/error.hpp"

namespace affect::special {

// Lanczos approximation (g = 7, n = 9); relative error ~1e-15 for x > 0.
// Used instead of std::lgamma, which writes the global signgam on glibc.
inline double log_gamma(double x) {
    static constexpr std::array<double, 9> kCoef{0.99999999999980993,  676.5203681218851,     -1259.1392167224028,
                                                 771.32342877765313,   -176.61502916214059,   12.507343278686905,
                                                 -0.13857109526572012, 9.9843695780195716e-6, 1.5056327351493116e-7};
    if (!(x > 0.0)) throw Error("log_gamma: argument must be positive");
    if (x < 0.5) return std::log(std::numbers::pi / std::sin(std::numbers::pi * x)) - log_gamma(1.0 - x);
    x -= 1.0;
    double a = kCoef[0];
    const double t = x + 7.5;
    for (std::size_t i = 1; i < kCoef.size(); ++i) a += kCoef[i] / (x + static_cast<double>(i));
    return 0.5 * std::log(2.0 * std::numbers::pi) + (x + 0.5) * std::log(t) - t + std::log(a);
}

namespace detail {

// Continued fraction for I_x(a,b), modified Lentz; converges for x < (a+1)/(a+b+2).
inline double beta_continued_fraction(double a, double b, double x) {
    constexpr int kMaxIter = 10000;
    constexpr double kEps = 1e-16;
    constexpr double kTiny = 1e-300;
    const double qab = a + b, qap = a + 1.0, qam = a - 1.0;
    double c = 1.0;
    double d = 1.0 - qab * x / qap;
    if (std::fabs(d) < kTiny) d = kTiny;
    d = 1.0 / d;
    double h = d;
    for (int m = 1; m <= kMaxIter; ++m) {
        const double m2 = 2.0 * m;
        double aa = m * (b - m) * x / ((qam + m2) * (a + m2));
        d = 1.0 + aa * d;
        if (std::fabs(d) < kTiny) d = kTiny;
        c = 1.0 + aa / c;
        if (std::fabs(c) < kTiny) c = kTiny;
        d = 1.0 / d;
        h *= d * c;
        aa = -(a + m) * (qab + m) * x / ((a + m2) * (qap + m2));
        d = 1.0 + aa * d;
        if (std::fabs(d) < kTiny) d = kTiny;
        c = 1.0 + aa / c;
        if (std::fabs(c) < kTiny) c = kTiny;
        d = 1.0 / d;
        const double del = d * c;
        h *= del;
        if (std::fabs(del - 1.0) < kEps) return h;
    }
    throw Error("incomplete beta: continued fraction did not converge");
}

}  // namespace detail

// Regularized incomplete beta I_x(a, b), a, b > 0, x in [0, 1].
inline double incomplete_beta(double x, double a, double b) {
    if (!(a > 0.0) || !(b > 0.0)) throw Error("incomplete beta: a and b must be positive");
    if (!(x >= 0.0 && x <= 1.0)) throw Error("incomplete beta: x must lie in [0, 1]");
    if (x == 0.0) return 0.0;
    if (x == 1.0) return 1.0;
    const double log_front =
        log_gamma(a + b) - log_gamma(a) - log_gamma(b) + a * std::log(x) + b * std::log1p(-x);
    const double front = std::exp(log_front);
    if (x < (a + 1.0) / (a + b + 2.0)) return front * detail::beta_continued_fraction(a, b, x) / a;
    return 1.0 - front * detail::beta_continued_fraction(b, a, 1.0 - x) / b;
}

// P(|T| >= |t|) for Student's t with `df` degrees of freedom.
inline double student_t_two_sided_p(double t, double df) {
    if (!(df > 0.0)) throw Error("t distribution: df must be positive");
    if (std::isinf(t)) return 0.0;
    if (std::isnan(t)) return std::numeric_limits<double>::quiet_NaN();
    return incomplete_beta(df / (df + t * t), df / 2.0, 0.5);
}

// P(F' >= f) for the F distribution with (df1, df2) degrees of freedom.
inline double f_upper_p(double f, double df1, double df2) {
    if (!(df1 > 0.0) || !(df2 > 0.0)) throw Error("F distribution: degrees of freedom must be positive");
    if (std::isinf(f)) return 0.0;
    if (!(f > 0.0)) return 1.0;
    return incomplete_beta(df2 / (df2 + df1 * f), df2 / 2.0, df1 / 2.0);
}

}  // namespace affect::special
