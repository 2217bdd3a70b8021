#include "morseinf/rootfind.hpp"

#include <cmath>
#include <string>

namespace morseinf {

double solve_increasing(const std::function<double(double)>& g, double target,
                        double tol, const char* what) {
  double lo = 1.0, hi = 1.0;
  double glo = g(lo);
  if (glo == target) return lo;

  if (glo < target) {
    // expand upward until we overshoot
    double ghi = glo;
    for (int k = 0; k < 80; ++k) {
      hi *= 2.0;
      ghi = g(hi);
      if (ghi >= target) break;
      lo = hi;
      glo = ghi;
    }
    if (ghi < target)
      throw BracketFailure(std::string(what) +
                           ": no sign change found expanding up to t = " +
                           std::to_string(hi));
  } else {
    // shrink toward 0 until we undershoot
    hi = lo;
    for (int k = 0; k < 80; ++k) {
      lo *= 0.5;
      glo = g(lo);
      if (glo <= target) break;
      hi = lo;
    }
    if (glo > target)
      throw BracketFailure(std::string(what) +
                           ": no sign change found shrinking down to t = " +
                           std::to_string(lo));
  }

  for (int k = 0; k < 200; ++k) {
    const double mid = 0.5 * (lo + hi);
    if (hi - lo <= tol * std::max(1.0, mid)) return mid;
    if (g(mid) < target)
      lo = mid;
    else
      hi = mid;
  }
  return 0.5 * (lo + hi);
}

}  // namespace morseinf
