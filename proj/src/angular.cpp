#include "tdcis/angular.hpp"

#include "tdcis/errors.hpp"

#include <algorithm>
#include <cmath>

namespace tdcis {

namespace {

double lfact(int n) { return std::lgamma(double(n) + 1.0); }

} // namespace

double wigner3j(int j1, int j2, int j3, int m1, int m2, int m3) {
    if (m1 + m2 + m3 != 0) return 0.0;
    if (j3 < std::abs(j1 - j2) || j3 > j1 + j2) return 0.0;
    if (std::abs(m1) > j1 || std::abs(m2) > j2 || std::abs(m3) > j3) return 0.0;

    const double log_delta = lfact(j1 + j2 - j3) + lfact(j1 - j2 + j3)
                           + lfact(-j1 + j2 + j3) - lfact(j1 + j2 + j3 + 1);
    const double log_m = lfact(j1 + m1) + lfact(j1 - m1) + lfact(j2 + m2)
                       + lfact(j2 - m2) + lfact(j3 + m3) + lfact(j3 - m3);

    const int k_min = std::max({0, j2 - j3 - m1, j1 - j3 + m2});
    const int k_max = std::min({j1 + j2 - j3, j1 - m1, j2 + m2});
    double sum = 0;
    for (int k = k_min; k <= k_max; ++k) {
        double log_term = lfact(k) + lfact(j1 + j2 - j3 - k) + lfact(j1 - m1 - k)
                        + lfact(j2 + m2 - k) + lfact(j3 - j2 + m1 + k)
                        + lfact(j3 - j1 - m2 + k);
        double term = std::exp(0.5 * (log_delta + log_m) - log_term);
        sum += (k % 2 ? -term : term);
    }
    int phase = j1 - j2 - m3;
    return (phase % 2 ? -1.0 : 1.0) * sum;
}

double coulomb_c(int big_l, int l, int m, int lp, int mp) {
    double t1 = wigner3j(l, big_l, lp, 0, 0, 0);
    if (t1 == 0.0) return 0.0;
    double t2 = wigner3j(l, big_l, lp, -m, m - mp, mp);
    double sign = (m % 2 ? -1.0 : 1.0);
    return sign * std::sqrt(double(2 * l + 1) * double(2 * lp + 1)) * t1 * t2;
}

double dipole_c(int l, int m) {
    double num = double(l + 1) * double(l + 1) - double(m) * double(m);
    if (num <= 0) return 0.0;
    return std::sqrt(num / (double(2 * l + 1) * double(2 * l + 3)));
}

double y_lm_theta(int l, int m, double theta) {
    const int am = std::abs(m);
    require_config(l >= 0 && am <= l, "y_lm_theta: |m| must not exceed l");
    const double pi = 3.14159265358979323846;
    // std::assoc_legendre omits the Condon-Shortley (-1)^m; restore it for
    // m > 0.  At phi = 0, Y_{l,-m} = (-1)^m conj(Y_{l,m}) drops it again.
    double norm = std::sqrt((2 * l + 1) / (4 * pi) *
                            std::exp(std::lgamma(l - am + 1) - std::lgamma(l + am + 1)));
    double p = std::assoc_legendre(l, am, std::cos(theta));
    double cs = (m > 0 && m % 2) ? -1.0 : 1.0;
    return cs * norm * p;
}

} // namespace tdcis
