#include "rotsim/angular.hpp"

#include <cmath>
#include <stdexcept>

namespace rotsim {

namespace {
void check_jm(const char* who, int j, int m) {
  if (j < 0 || std::abs(m) > j)
    throw std::invalid_argument(std::string(who) + ": need 0 <= |m| <= j");
}
}  // namespace

double cos2_diag(int j, int m) {
  check_jm("cos2_diag", j, m);
  const double J = j, M = m;
  const double num = J * (J + 1) - 3.0 * M * M;
  const double den = (2 * J - 1) * (2 * J + 3);
  // num vanishes for j = 0, so the negative den never bites
  return 1.0 / 3.0 + (2.0 / 3.0) * (num == 0.0 ? 0.0 : num / den);
}

double cos2_couple(int j, int m) {
  check_jm("cos2_couple", j, m);
  const double J = j, M = m;
  const double a = (J + 1) * (J + 1) - M * M;
  const double b = (J + 2) * (J + 2) - M * M;
  return std::sqrt(a * b / ((2 * J + 1) * (2 * J + 5))) / (2 * J + 3);
}

Cos2Band cos2_band(int m, int j_max) {
  const int j_min = std::abs(m);
  if (j_max < j_min)
    throw std::invalid_argument("cos2_band: j_max below |m|");
  Cos2Band band;
  band.m = m;
  band.j_min = j_min;
  band.j_max = j_max;
  for (int j = j_min; j <= j_max; ++j) band.diag.push_back(cos2_diag(j, m));
  for (int j = j_min; j + 2 <= j_max; ++j)
    band.couple.push_back(cos2_couple(j, m));
  return band;
}

namespace {

// Fully normalized ascending recurrence (integral of the square over
// x in [-1,1] is 1), Condon-Shortley phase included. Stable upward for
// the J range used here.
struct LegendreIter {
  int m;
  int l;
  double x, sx;
  double pm2 = 0.0, pm1 = 0.0, p = 0.0;

  LegendreIter(int m_, double x_) : m(m_), l(m_), x(x_) {
    sx = std::sqrt(std::max(0.0, 1.0 - x * x));
    p = std::sqrt(0.5);  // P~_0^0
    for (int k = 1; k <= m; ++k)
      p *= -std::sqrt((2.0 * k + 1.0) / (2.0 * k)) * sx;
  }

  void advance() {  // l -> l+1 at the same m
    const int ln = l + 1;
    double pn;
    if (ln == m + 1) {
      pn = std::sqrt(2.0 * m + 3.0) * x * p;
    } else {
      const double a =
          std::sqrt((4.0 * ln * ln - 1.0) / (double(ln) * ln - double(m) * m));
      const int lp = ln - 1;
      const double ap =
          std::sqrt((4.0 * lp * lp - 1.0) / (double(lp) * lp - double(m) * m));
      pn = a * (x * p - pm1 / ap);
    }
    pm2 = pm1;
    pm1 = p;
    p = pn;
    l = ln;
  }
};

}  // namespace

double normalized_legendre(int j, int m, double x) {
  check_jm("normalized_legendre", j, m);
  const int am = std::abs(m);
  LegendreIter it(am, x);
  while (it.l < j) it.advance();
  double v = it.p;
  if (m < 0 && (am & 1)) v = -v;
  return v;
}

void normalized_legendre_ladder(int m, int j_min, int count, double x,
                                double* out) {
  const int am = std::abs(m);
  if (j_min != am && j_min != am + 1)
    throw std::invalid_argument(
        "normalized_legendre_ladder: j_min must be |m| or |m|+1");
  const double sign = (m < 0 && (am & 1)) ? -1.0 : 1.0;
  LegendreIter it(am, x);
  int written = 0;
  while (written < count) {
    if (it.l >= j_min && (it.l - j_min) % 2 == 0) out[written++] = sign * it.p;
    if (written < count) it.advance();
  }
}

}  // namespace rotsim
