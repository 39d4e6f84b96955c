#pragma once

#include <stdexcept>

namespace rankverify {

// A probability in [0, 1].  Construction tolerates round-off excursions of
// at most kClampSlack outside the unit interval and rejects anything larger.
class Probability {
 public:
  static constexpr double kClampSlack = 1e-12;

  explicit Probability(double value);

  double value() const noexcept { return value_; }

 private:
  double value_ = 0.0;
};

// A coordinate on the standard-normal z scale; must be finite.
class ZScore {
 public:
  explicit ZScore(double value);

  double value() const noexcept { return value_; }

 private:
  double value_ = 0.0;
};

// Density of the standard normal at z.
double std_normal_pdf(ZScore z);

// Lower-tail probability P(Z <= z).
Probability std_normal_cdf(ZScore z);

// Upper-tail probability P(Z > z), evaluated directly rather than as
// 1 - cdf; relative accuracy holds deep into the tail.
Probability std_normal_sf(ZScore z);

// Natural log of the survival function.  Finite far beyond the range where
// the survival function itself is representable (z up to several hundred).
double log_std_normal_sf(ZScore z);

// Inverse of std_normal_cdf on (0, 1).  A rational initial guess is polished
// with Halley steps against the implemented cdf, so quantile and cdf are
// mutually consistent.
ZScore std_normal_quantile(Probability p);

// sf(z_num) / sf(z_den) for z_num >= z_den, evaluated in log space.  This is
// the tail mass of a truncated normal: the fraction of the mass above z_den
// that also lies above z_num.  Returns 1 when the arguments coincide.
Probability truncated_sf_ratio(ZScore z_num, ZScore z_den);

}  // namespace rankverify
