#pragma once

#include "tdcis/errors.hpp"

#include <cmath>
#include <cstddef>
#include <functional>
#include <utility>
#include <vector>

namespace tdcis {

namespace detail {

inline double adaptive_simpson_rec(const std::function<double(double)>& f, double a, double b,
                                   double fa, double fm, double fb, double whole, double tol,
                                   int depth) {
    double m = 0.5 * (a + b);
    double flm = f(0.5 * (a + m)), frm = f(0.5 * (m + b));
    double left = (m - a) / 6.0 * (fa + 4.0 * flm + fm);
    double right = (b - m) / 6.0 * (fm + 4.0 * frm + fb);
    if (depth <= 0 || std::abs(left + right - whole) < 15.0 * tol)
        return left + right + (left + right - whole) / 15.0;
    return adaptive_simpson_rec(f, a, m, fa, flm, fm, left, 0.5 * tol, depth - 1)
         + adaptive_simpson_rec(f, m, b, fm, frm, fb, right, 0.5 * tol, depth - 1);
}

} // namespace detail

inline double adaptive_simpson(const std::function<double(double)>& f, double a, double b,
                               double tol = 1e-12) {
    if (a == b) return 0.0;
    double fa = f(a), fb = f(b), fm = f(0.5 * (a + b));
    double whole = (b - a) / 6.0 * (fa + 4.0 * fm + fb);
    return detail::adaptive_simpson_rec(f, a, b, fa, fm, fb, whole, tol, 52);
}

// Gauss-Legendre nodes/weights on [-1, 1] by Newton iteration on P_n
inline void gauss_legendre(int n, std::vector<double>& x, std::vector<double>& w) {
    x.resize(n);
    w.resize(n);
    for (int i = 0; i < (n + 1) / 2; ++i) {
        double z = std::cos(3.14159265358979323846 * (i + 0.75) / (n + 0.5));
        double dp = 0;
        for (int it = 0; it < 100; ++it) {
            double p0 = 1, p1 = 0;
            for (int j = 0; j < n; ++j) {
                double p2 = p1;
                p1 = p0;
                p0 = ((2 * j + 1) * z * p1 - j * p2) / (j + 1);
            }
            dp = n * (z * p0 - p1) / (z * z - 1);
            double dz = p0 / dp;
            z -= dz;
            if (std::abs(dz) < 1e-15) break;
        }
        x[i] = -z;
        x[n - 1 - i] = z;
        w[i] = w[n - 1 - i] = 2.0 / ((1 - z * z) * dp * dp);
    }
}

template <class F>
double gl_integrate(F&& f, double a, double b, int n = 64) {
    std::vector<double> x, w;
    gauss_legendre(n, x, w);
    double c = 0.5 * (a + b), s = 0.5 * (b - a), acc = 0;
    for (int i = 0; i < n; ++i) acc += w[i] * f(c + s * x[i]);
    return acc * s;
}

// monotone piecewise-cubic interpolant (Fritsch-Carlson slopes); evaluation
// clamps to the end values outside the table
class Pchip {
  public:
    Pchip() = default;
    Pchip(std::vector<double> x, std::vector<double> y) : x_(std::move(x)), y_(std::move(y)) {
        const size_t n = x_.size();
        require_config(n >= 2 && y_.size() == n, "pchip: need two or more matching samples");
        for (size_t i = 1; i < n; ++i)
            require_config(x_[i] > x_[i - 1], "pchip: abscissae must increase");
        std::vector<double> d(n - 1);
        for (size_t i = 0; i + 1 < n; ++i) d[i] = (y_[i + 1] - y_[i]) / (x_[i + 1] - x_[i]);
        m_.assign(n, 0.0);
        m_[0] = d[0];
        m_[n - 1] = d[n - 2];
        for (size_t i = 1; i + 1 < n; ++i) {
            if (d[i - 1] * d[i] <= 0) {
                m_[i] = 0.0;
            } else {
                double w1 = 2 * (x_[i + 1] - x_[i]) + (x_[i] - x_[i - 1]);
                double w2 = (x_[i + 1] - x_[i]) + 2 * (x_[i] - x_[i - 1]);
                m_[i] = (w1 + w2) / (w1 / d[i - 1] + w2 / d[i]);
            }
        }
        // clip the end slopes so the first/last pieces stay monotone
        for (size_t e : {size_t(0), n - 1}) {
            size_t seg = e == 0 ? 0 : n - 2;
            if (d[seg] == 0) m_[e] = 0;
            else if (m_[e] / d[seg] < 0) m_[e] = 0;
            else if (std::abs(m_[e]) > 3 * std::abs(d[seg])) m_[e] = 3 * d[seg];
        }
    }

    double operator()(double xq) const {
        if (xq <= x_.front()) return y_.front();
        if (xq >= x_.back()) return y_.back();
        size_t lo = 0, hi = x_.size() - 1;
        while (hi - lo > 1) {
            size_t mid = (lo + hi) / 2;
            (x_[mid] <= xq ? lo : hi) = mid;
        }
        double h = x_[lo + 1] - x_[lo], t = (xq - x_[lo]) / h;
        double h00 = (1 + 2 * t) * (1 - t) * (1 - t);
        double h10 = t * (1 - t) * (1 - t);
        double h01 = t * t * (3 - 2 * t);
        double h11 = t * t * (t - 1);
        return h00 * y_[lo] + h * h10 * m_[lo] + h01 * y_[lo + 1] + h * h11 * m_[lo + 1];
    }

  private:
    std::vector<double> x_, y_, m_;
};

// least-squares straight line y = slope x + icept
inline std::pair<double, double> fit_line(const std::vector<double>& x,
                                          const std::vector<double>& y) {
    require_config(x.size() == y.size() && x.size() >= 2, "fit_line: need two or more points");
    double sx = 0, sy = 0, sxx = 0, sxy = 0;
    const double n = double(x.size());
    for (size_t i = 0; i < x.size(); ++i) {
        sx += x[i];
        sy += y[i];
        sxx += x[i] * x[i];
        sxy += x[i] * y[i];
    }
    double det = n * sxx - sx * sx;
    require_numeric(det != 0, "fit_line: degenerate abscissae");
    double slope = (n * sxy - sx * sy) / det;
    return {slope, (sy - slope * sx) / n};
}

} // namespace tdcis
