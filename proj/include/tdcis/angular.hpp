#pragma once

namespace tdcis {

// Wigner 3j symbol for integer angular momenta.  Zero outside the triangle
// or when m1 + m2 + m3 != 0.
double wigner3j(int j1, int j2, int j3, int m1, int m2, int m3);

// Angular factor of one multipole in the two-electron matrix element,
//   c_L(l m, l' m') = (-1)^m sqrt((2l+1)(2l'+1))
//                     * 3j(l L l'; 0 0 0) * 3j(l L l'; -m, m-m', m')
double coulomb_c(int big_l, int l, int m, int lp, int mp);

// <l+1, m | cos(theta) | l, m> = sqrt(((l+1)^2 - m^2) / ((2l+1)(2l+3)))
double dipole_c(int l, int m);

// Y_lm(theta, phi = 0), real, Condon-Shortley convention
double y_lm_theta(int l, int m, double theta);

} // namespace tdcis
