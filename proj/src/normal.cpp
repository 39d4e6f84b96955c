#include "rankverify/normal.hpp"

#include <cmath>

namespace rankverify {
namespace {

constexpr double kInvSqrt2 = 0.7071067811865475244008443621048490;
constexpr double kInvSqrt2Pi = 0.3989422804014326779399460599343819;
constexpr double kSqrtPi = 1.7724538509055160272981674833411452;
constexpr double kLogHalf = -0.6931471805599453094172321214581766;

// erfc(x) * exp(x^2) for large positive x via the asymptotic expansion
//   erfcx(x) ~ 1/(x sqrt(pi)) * sum_k (-1)^k (2k-1)!! / (2x^2)^k.
// Only used where erfc itself underflows (x >~ 26); there the series hits
// double precision in under twenty terms.
double erfcx_asymptotic(double x) {
  const double inv_2x2 = 1.0 / (2.0 * x * x);
  double term = 1.0;
  double sum = 1.0;
  for (int k = 1; k < 24; ++k) {
    term *= -static_cast<double>(2 * k - 1) * inv_2x2;
    sum += term;
    if (std::abs(term) < 1e-18 * std::abs(sum)) break;
  }
  return sum / (x * kSqrtPi);
}

// Rational approximation to the normal quantile (Acklam).  Absolute error of
// the raw approximation is ~1.2e-9; Halley refinement below removes it.
double quantile_initial_guess(double p) {
  static const double a[6] = {-3.969683028665376e+01, 2.209460984245205e+02,
                              -2.759285104469687e+02, 1.383577518672690e+02,
                              -3.066479806614716e+01, 2.506628277459239e+00};
  static const double b[5] = {-5.447609879822406e+01, 1.615858368580409e+02,
                              -1.556989798598866e+02, 6.680131188771972e+01,
                              -1.328068155288572e+01};
  static const double c[6] = {-7.784894002430293e-03, -3.223964580411365e-01,
                              -2.400758277161838e+00, -2.549732539343734e+00,
                              4.374664141464968e+00,  2.938163982698783e+00};
  static const double d[4] = {7.784695709041462e-03, 3.224671290700398e-01,
                              2.445134137142996e+00, 3.754408661907416e+00};
  constexpr double p_low = 0.02425;

  if (p < p_low) {
    const double q = std::sqrt(-2.0 * std::log(p));
    return (((((c[0] * q + c[1]) * q + c[2]) * q + c[3]) * q + c[4]) * q + c[5]) /
           ((((d[0] * q + d[1]) * q + d[2]) * q + d[3]) * q + 1.0);
  }
  if (p > 1.0 - p_low) {
    const double q = std::sqrt(-2.0 * std::log(1.0 - p));
    return -(((((c[0] * q + c[1]) * q + c[2]) * q + c[3]) * q + c[4]) * q + c[5]) /
           ((((d[0] * q + d[1]) * q + d[2]) * q + d[3]) * q + 1.0);
  }
  const double q = p - 0.5;
  const double r = q * q;
  return (((((a[0] * r + a[1]) * r + a[2]) * r + a[3]) * r + a[4]) * r + a[5]) * q /
         (((((b[0] * r + b[1]) * r + b[2]) * r + b[3]) * r + b[4]) * r + 1.0);
}

}  // namespace

Probability::Probability(double value) {
  if (!std::isfinite(value)) {
    throw std::invalid_argument("probability must be finite");
  }
  if (value < 0.0) {
    if (value < -kClampSlack) {
      throw std::invalid_argument("probability below 0 beyond round-off slack");
    }
    value = 0.0;
  } else if (value > 1.0) {
    if (value > 1.0 + kClampSlack) {
      throw std::invalid_argument("probability above 1 beyond round-off slack");
    }
    value = 1.0;
  }
  value_ = value;
}

ZScore::ZScore(double value) {
  if (!std::isfinite(value)) {
    throw std::invalid_argument("z-score must be finite");
  }
  value_ = value;
}

double std_normal_pdf(ZScore z) {
  const double v = z.value();
  return kInvSqrt2Pi * std::exp(-0.5 * v * v);
}

Probability std_normal_cdf(ZScore z) {
  return Probability(0.5 * std::erfc(-z.value() * kInvSqrt2));
}

Probability std_normal_sf(ZScore z) {
  return Probability(0.5 * std::erfc(z.value() * kInvSqrt2));
}

double log_std_normal_sf(ZScore z) {
  const double v = z.value();
  if (v < 0.0) {
    // sf(z) = 1 - sf(-z); log1p keeps the near-zero log fully accurate.
    return std::log1p(-std_normal_sf(ZScore(-v)).value());
  }
  const double x = v * kInvSqrt2;
  if (v <= 37.0) {
    // erfc is representable here (sf(37) ~ 5e-300).
    return kLogHalf + std::log(std::erfc(x));
  }
  return kLogHalf + std::log(erfcx_asymptotic(x)) - 0.5 * v * v;
}

ZScore std_normal_quantile(Probability p) {
  const double pv = p.value();
  if (pv <= 0.0 || pv >= 1.0) {
    throw std::domain_error("quantile requires a probability strictly inside (0, 1)");
  }
  double z = quantile_initial_guess(pv);
  // Two Halley steps against the implemented cdf.
  for (int it = 0; it < 2; ++it) {
    const double err = std_normal_cdf(ZScore(z)).value() - pv;
    const double density = std_normal_pdf(ZScore(z));
    if (density <= 0.0) break;
    const double u = err / density;
    z -= u / (1.0 + 0.5 * z * u);
  }
  return ZScore(z);
}

Probability truncated_sf_ratio(ZScore z_num, ZScore z_den) {
  const double zn = z_num.value();
  const double zd = z_den.value();
  if (zn < zd) {
    throw std::logic_error(
        "truncated_sf_ratio: observed z lies below the truncation z "
        "(selection-event bookkeeping bug upstream)");
  }
  if (zn == zd) return Probability(1.0);
  const double log_ratio = log_std_normal_sf(z_num) - log_std_normal_sf(z_den);
  return Probability(std::min(std::exp(log_ratio), 1.0));
}

}  // namespace rankverify
