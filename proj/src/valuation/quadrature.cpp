#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <vector>

#include "ilab/quadrature.hpp"

namespace ilab {

namespace {

// Gauss-Kronrod 7-15 nodes/weights on [-1, 1].
constexpr double kXgk[8] = {
    0.991455371120812639206854697526329, 0.949107912342758524526189684047851,
    0.864864423359769072789712788640926, 0.741531185599394439863864773280788,
    0.586087235467691130294144838258730, 0.405845151377397166906606412076961,
    0.207784955007898467600689403773245, 0.000000000000000000000000000000000};
constexpr double kWgk[8] = {
    0.022935322010529224963732008058970, 0.063092092629978553290700663189204,
    0.104790010322250183839876322541518, 0.140653259715525918745189590510238,
    0.169004726639267902826583426598550, 0.190350578064785409913256402421014,
    0.204432940075298892414161999234649, 0.209482141084727828012999174891714};
constexpr double kWg[4] = {
    0.129484966168869693270611432679082, 0.279705391489276667901467771423780,
    0.381830050505118944950369775488975, 0.417959183673469387755102040816327};

struct PanelResult {
  double value;
  double error;
};

PanelResult gk15(const std::function<double(double)>& f, double a, double b) {
  const double c = 0.5 * (a + b);
  const double h = 0.5 * (b - a);
  const double fc = f(c);
  double kron = kWgk[7] * fc;
  double gauss = kWg[3] * fc;
  for (int j = 0; j < 7; ++j) {
    const double x = h * kXgk[j];
    const double fsum = f(c - x) + f(c + x);
    kron += kWgk[j] * fsum;
    if (j % 2 == 1) gauss += kWg[j / 2] * fsum;
  }
  kron *= h;
  gauss *= h;
  return {kron, std::fabs(kron - gauss)};
}

}  // namespace

double integrate(const std::function<double(double)>& f, double a, double b,
                 double abs_tol, std::span<const double> breakpoints) {
  if (!(abs_tol > 0.0)) throw std::invalid_argument("integrate: abs_tol must be > 0");
  if (a == b) return 0.0;
  double sign = 1.0;
  if (a > b) {
    std::swap(a, b);
    sign = -1.0;
  }

  std::vector<double> edges{a, b};
  for (double x : breakpoints)
    if (x > a && x < b) edges.push_back(x);
  std::sort(edges.begin(), edges.end());

  struct Interval {
    double a, b, value, error;
  };
  std::vector<Interval> stack;
  double total = 0.0, total_err = 0.0;
  for (std::size_t i = 0; i + 1 < edges.size(); ++i) {
    const auto r = gk15(f, edges[i], edges[i + 1]);
    stack.push_back({edges[i], edges[i + 1], r.value, r.error});
    total += r.value;
    total_err += r.error;
  }

  int iterations = 0;
  while (total_err > abs_tol && !stack.empty()) {
    if (++iterations > 20000)
      throw std::runtime_error("integrate: failed to reach tolerance");
    auto worst = std::max_element(
        stack.begin(), stack.end(),
        [](const Interval& x, const Interval& y) { return x.error < y.error; });
    const Interval iv = *worst;
    stack.erase(worst);
    const double mid = 0.5 * (iv.a + iv.b);
    if (mid <= iv.a || mid >= iv.b) continue;  // cannot split further
    const auto left = gk15(f, iv.a, mid);
    const auto right = gk15(f, mid, iv.b);
    total += left.value + right.value - iv.value;
    total_err += left.error + right.error - iv.error;
    stack.push_back({iv.a, mid, left.value, left.error});
    stack.push_back({mid, iv.b, right.value, right.error});
  }
  return sign * total;
}

}  // namespace ilab
