#include <cmath>
#include <cstdio>

#include "ilab/common.hpp"

namespace ilab {

double compensated_sum(std::span<const double> xs) {
  double sum = 0.0, comp = 0.0;
  for (double x : xs) {
    const double t = sum + x;
    if (std::fabs(sum) >= std::fabs(x))
      comp += (sum - t) + x;
    else
      comp += (x - t) + sum;
    sum = t;
  }
  return sum + comp;
}

MeanVar mean_and_variance(std::span<const double> xs) {
  MeanVar mv;
  const std::size_t n = xs.size();
  if (n == 0) return mv;
  mv.mean = compensated_sum(xs) / double(n);
  if (n < 2) return mv;
  double ss = 0.0, comp = 0.0;
  for (double x : xs) {
    const double d = (x - mv.mean) * (x - mv.mean);
    const double t = ss + d;
    comp += (ss - t) + d;
    ss = t;
  }
  mv.variance = (ss + comp) / double(n - 1);
  return mv;
}

double clamp01(double x) { return x < 0.0 ? 0.0 : (x > 1.0 ? 1.0 : x); }

std::string format_full(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.16e", v);
  return buf;
}

}  // namespace ilab
