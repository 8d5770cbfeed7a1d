#include "copdyn/quadrature.hpp"

#include <array>
#include <cmath>

namespace copdyn::detail {

namespace {

// Kronrod nodes on [0, 1] (symmetric), with Kronrod and embedded Gauss weights.
constexpr std::array<double, 8> kNodes = {
    0.991455371120812639206854697526329, 0.949107912342758524526189684047851,
    0.864864423359769072789712788640926, 0.741531185599394439863864773280788,
    0.586087235467691130294144845693013, 0.405845151377397166906606412076961,
    0.207784955007898467600689403773245, 0.000000000000000000000000000000000};
constexpr std::array<double, 8> kKronrod = {
    0.022935322010529224963732008058970, 0.063092092629978553290700663189204,
    0.104790010322250183839876322541518, 0.140653259715525918745189590510238,
    0.169004726639267902826583426598550, 0.190350578064785409913256402421014,
    0.204432940075298892414161999234649, 0.209482141084727828012999174891714};
// weights of the Gauss nodes kNodes[1], kNodes[3], kNodes[5], kNodes[7]
constexpr std::array<double, 4> kGauss = {0.129484966168869693270611432679082, 0.279705391489276667901467771423780,
                                          0.381830050505118944950369775488975, 0.417959183673469387755102040816327};

struct Estimate {
  double kronrod;
  double error;
};

Estimate gk15(const std::function<double(double)>& f, double a, double b) {
  const double half = 0.5 * (b - a);
  const double mid = 0.5 * (a + b);
  const double fc = f(mid);
  double k = kKronrod[7] * fc;
  double g = kGauss[3] * fc;
  for (int i = 0; i < 7; ++i) {
    const double dx = half * kNodes[i];
    const double sum = f(mid - dx) + f(mid + dx);
    k += kKronrod[i] * sum;
    if (i % 2 == 1) g += kGauss[i / 2] * sum;
  }
  return {k * half, std::abs((k - g) * half)};
}

double recurse(const std::function<double(double)>& f, double a, double b, double tol, int depth, Estimate whole) {
  if (whole.error <= tol || depth <= 0) return whole.kronrod;
  const double mid = 0.5 * (a + b);
  const Estimate left = gk15(f, a, mid);
  const Estimate right = gk15(f, mid, b);
  return recurse(f, a, mid, 0.5 * tol, depth - 1, left) + recurse(f, mid, b, 0.5 * tol, depth - 1, right);
}

}  // namespace

double integrate_adaptive(const std::function<double(double)>& f, double a, double b, double abs_tol, int max_depth) {
  if (a == b) return 0.0;
  return recurse(f, a, b, abs_tol, max_depth, gk15(f, a, b));
}

}  // namespace copdyn::detail
