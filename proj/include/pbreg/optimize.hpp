#pragma once

#include <cfloat>
#include <cmath>
#include <utility>

namespace pbreg {

struct OptimizerSettings {
  double abs_tol_theta = 1e-9;
  int max_evaluations = 500;   // per bounded scalar search
  double theta_upper_factor = 3.0;
};

struct ScalarMinResult {
  double x = 0.0;
  double fx = 0.0;
  int evaluations = 0;
  bool converged = false;
};

struct RootResult {
  double x = 0.0;
  int evaluations = 0;
  bool converged = false;
};

// Bounded derivative-free minimization: golden-section search with parabolic
// acceleration. The endpoints of [lo, hi] are never evaluated, so objectives may be
// singular there. The x tolerance keeps a small relative floor but stays far below
// sqrt(machine epsilon) so near-quadratic minima are localized to ~1e-9 absolute.
template <class F>
ScalarMinResult brent_minimize(F&& f, double lo, double hi, double xtol, int max_evaluations) {
  constexpr double kGolden = 0.3819660112501051;  // (3 - sqrt(5)) / 2
  double a = lo, b = hi;
  double x = a + kGolden * (b - a);
  double w = x, v = x;
  double fx = f(x);
  double fw = fx, fv = fx;
  double d = 0.0, e = 0.0;
  int evaluations = 1;
  bool converged = false;

  while (evaluations < max_evaluations) {
    const double m = 0.5 * (a + b);
    const double tol = std::fmax(xtol, 16.0 * DBL_EPSILON * std::fabs(x));
    const double tol2 = 2.0 * tol;
    if (std::fabs(x - m) <= tol2 - 0.5 * (b - a)) {
      converged = true;
      break;
    }
    bool take_golden = true;
    if (std::fabs(e) > tol) {
      // Parabola through (x, fx), (w, fw), (v, fv).
      double r = (x - w) * (fx - fv);
      double q = (x - v) * (fx - fw);
      double p = (x - v) * q - (x - w) * r;
      q = 2.0 * (q - r);
      if (q > 0.0) {
        p = -p;
      } else {
        q = -q;
      }
      const double e_prev = e;
      e = d;
      if (std::fabs(p) < std::fabs(0.5 * q * e_prev) && p > q * (a - x) && p < q * (b - x)) {
        d = p / q;
        const double u = x + d;
        if (u - a < tol2 || b - u < tol2) {
          d = (x < m) ? tol : -tol;
        }
        take_golden = false;
      }
    }
    if (take_golden) {
      e = ((x < m) ? b : a) - x;
      d = kGolden * e;
    }
    const double u = x + ((std::fabs(d) >= tol) ? d : (d > 0.0 ? tol : -tol));
    const double fu = f(u);
    ++evaluations;
    if (fu <= fx) {
      if (u < x) {
        b = x;
      } else {
        a = x;
      }
      v = w;
      fv = fw;
      w = x;
      fw = fx;
      x = u;
      fx = fu;
    } else {
      if (u < x) {
        a = u;
      } else {
        b = u;
      }
      if (fu <= fw || w == x) {
        v = w;
        fv = fw;
        w = u;
        fw = fu;
      } else if (fu <= fv || v == x || v == w) {
        v = u;
        fv = fu;
      }
    }
  }
  return {x, fx, evaluations, converged};
}

// Bracketed root finding (bisection, secant, and inverse quadratic interpolation).
// Requires f(lo) and f(hi) (supplied as flo/fhi) to bracket a sign change.
template <class F>
RootResult brent_root(F&& f, double lo, double hi, double flo, double fhi, double xtol,
                      int max_evaluations) {
  double a = lo, b = hi, fa = flo, fb = fhi;
  if (fa == 0.0) {
    return {a, 0, true};
  }
  if (fb == 0.0) {
    return {b, 0, true};
  }
  if ((fa > 0.0) == (fb > 0.0)) {
    return {b, 0, false};
  }
  double c = a, fc = fa;
  double d = b - a, e = d;
  int evaluations = 0;
  while (evaluations < max_evaluations) {
    if ((fb > 0.0) == (fc > 0.0)) {
      c = a;
      fc = fa;
      d = b - a;
      e = d;
    }
    if (std::fabs(fc) < std::fabs(fb)) {
      a = b;
      b = c;
      c = a;
      fa = fb;
      fb = fc;
      fc = fa;
    }
    const double tol = 2.0 * DBL_EPSILON * std::fabs(b) + 0.5 * xtol;
    const double m = 0.5 * (c - b);
    if (std::fabs(m) <= tol || fb == 0.0) {
      return {b, evaluations, true};
    }
    if (std::fabs(e) < tol || std::fabs(fa) <= std::fabs(fb)) {
      d = m;
      e = m;
    } else {
      double p, q;
      const double s = fb / fa;
      if (a == c) {
        p = 2.0 * m * s;
        q = 1.0 - s;
      } else {
        const double qa = fa / fc;
        const double r = fb / fc;
        p = s * (2.0 * m * qa * (qa - r) - (b - a) * (r - 1.0));
        q = (qa - 1.0) * (r - 1.0) * (s - 1.0);
      }
      if (p > 0.0) {
        q = -q;
      } else {
        p = -p;
      }
      if (2.0 * p < std::fmin(3.0 * m * q - std::fabs(tol * q), std::fabs(e * q))) {
        e = d;
        d = p / q;
      } else {
        d = m;
        e = m;
      }
    }
    a = b;
    fa = fb;
    if (std::fabs(d) > tol) {
      b += d;
    } else {
      b += (m > 0.0 ? tol : -tol);
    }
    fb = f(b);
    ++evaluations;
  }
  return {b, evaluations, false};
}

}  // namespace pbreg
