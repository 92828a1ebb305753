#include "tailrisk/components.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>

#include <boost/math/distributions/normal.hpp>

#include "tailrisk/error.hpp"

namespace tailrisk {
namespace {

const boost::math::normal_distribution<double> kStdNormal(0.0, 1.0);


// -expm1(-t)/t with its limit 1 at t = 0.
double shrink(double t) { return t == 0.0 ? 1.0 : -std::expm1(-t) / t; }

// expm1(t)/t with its limit 1 at t = 0.
double grow(double t) { return t == 0.0 ? 1.0 : std::expm1(t) / t; }

// Mean of an exponential with rate t truncated to [0, 1]: 1/t - 1/(e^t - 1).
double unit_truncated_exp_mean(double t) {
  if (std::abs(t) < 1e-4) return 0.5 - t / 12.0 + t * t * t / 720.0;
  return 1.0 / t - 1.0 / std::expm1(t);
}

// log P(Z > t). Past t = 30 the upper tail underflows soon after, so use the
// asymptotic series, whose truncation error there is below 1e-12.
double log_upper_tail(double t) {
  if (t == std::numeric_limits<double>::infinity()) return -std::numeric_limits<double>::infinity();
  if (t < 30.0) return std::log(boost::math::cdf(boost::math::complement(kStdNormal, t)));
  const double s = 1.0 / (t * t);
  const double series = 1.0 - s * (1.0 - s * (3.0 - s * (15.0 - s * 105.0)));
  return -0.5 * t * t - std::log(t) - 0.5 * std::log(2.0 * std::numbers::pi) + std::log(series);
}

// log(P(Z > a) - P(Z > b)) for a < b.
double log_tail_difference(double a, double b) {
  const double la = log_upper_tail(a);
  const double lb = log_upper_tail(b);
  return la + std::log1p(-std::exp(lb - la));
}

double log_phi(double z) { return -0.5 * z * z - 0.5 * std::log(2.0 * std::numbers::pi); }

}  // namespace

double TruncatedGaussian::log_mass() const {
  const double a = (lo - mu) / sigma;
  const double b = (hi - mu) / sigma;
  if (a > 0.0) return log_tail_difference(a, b);
  if (b < 0.0) return log_tail_difference(-b, -a);
  return std::log(boost::math::cdf(kStdNormal, b) - boost::math::cdf(kStdNormal, a));
}

double TruncatedGaussian::mass() const { return std::exp(log_mass()); }

double TruncatedGaussian::pdf(double x) const {
  if (!(x > lo && x <= hi)) return 0.0;
  return std::exp(log_pdf(x));
}

double TruncatedGaussian::log_pdf(double x) const {
  if (!(x > lo && x <= hi)) return -std::numeric_limits<double>::infinity();
  return log_phi((x - mu) / sigma) - std::log(sigma) - log_mass();
}

namespace {

// phi(t) / Z and t phi(t) / Z, zero at infinite t.
double density_ratio(double t, double log_z) {
  return std::isfinite(t) ? std::exp(log_phi(t) - log_z) : 0.0;
}

}  // namespace

double TruncatedGaussian::mean() const {
  const double a = (lo - mu) / sigma;
  const double b = (hi - mu) / sigma;
  const double lz = log_mass();
  return mu + sigma * (density_ratio(a, lz) - density_ratio(b, lz));
}

double TruncatedGaussian::variance() const {
  const double a = (lo - mu) / sigma;
  const double b = (hi - mu) / sigma;
  const double lz = log_mass();
  const double ra = density_ratio(a, lz), rb = density_ratio(b, lz);
  const double d = ra - rb;
  const double fa = std::isfinite(a) ? a * ra : 0.0;
  const double fb = std::isfinite(b) ? b * rb : 0.0;
  return sigma * sigma * (1.0 + fa - fb - d * d);
}

double TruncatedGaussian::quantile(double u) const {
  const double a = (lo - mu) / sigma;
  const double b = (hi - mu) / sigma;
  double x = 0.0;
  if (a > 0.0) {
    // Upper-tail form avoids cdf values rounding to 1.
    const double qa = boost::math::cdf(boost::math::complement(kStdNormal, a));
    const double qb = boost::math::cdf(boost::math::complement(kStdNormal, b));
    if (qa > 1e-290) {
      const double q = qa - u * (qa - qb);
      x = mu + sigma * boost::math::quantile(boost::math::complement(kStdNormal, q));
    } else {
      // Deep tail: the excess over a is exponential with rate a to leading order.
      const double span = std::isfinite(b) ? -std::expm1(-a * (b - a)) : 1.0;
      x = mu + sigma * (a - std::log1p(-u * span) / a);
    }
  } else if (b < 0.0) {
    x = -TruncatedGaussian{-mu, sigma, -hi, -lo}.quantile(1.0 - u);
  } else {
    const double pa = boost::math::cdf(kStdNormal, a);
    const double pb = boost::math::cdf(kStdNormal, b);
    x = mu + sigma * boost::math::quantile(kStdNormal, pa + u * (pb - pa));
  }
  // Rounding at the edges must not leave the support.
  if (x <= lo) x = std::nextafter(lo, hi);
  return std::min(x, hi);
}

TruncatedGaussian fit_truncated_gaussian(double target_mean, double target_var, double lo,
                                         double hi) {
  if (!(target_var > 0.0)) throw Error(ErrorKind::Degenerate, "zero variance in gaussian fit");
  TruncatedGaussian fallback{target_mean, std::sqrt(target_var), lo, hi};
  // A truncated Gaussian cannot exceed the uniform variance on its interval.
  if (std::isfinite(lo) && std::isfinite(hi) && target_var >= (hi - lo) * (hi - lo) / 12.0) {
    return fallback;
  }
  if (!(target_mean > lo && target_mean < hi)) return fallback;

  // Newton on (mu, log sigma) with a finite-difference Jacobian and step halving
  // on the residual norm.
  double mu = target_mean;
  double ls = 0.5 * std::log(target_var);
  auto residual = [&](double m, double l, double& r0, double& r1) {
    const TruncatedGaussian g{m, std::exp(l), lo, hi};
    const double z = g.mass();
    if (!(z > 1e-300)) return false;
    r0 = (g.mean() - target_mean) / std::sqrt(target_var);
    r1 = g.variance() / target_var - 1.0;
    return std::isfinite(r0) && std::isfinite(r1);
  };
  double r0 = 0.0, r1 = 0.0;
  if (!residual(mu, ls, r0, r1)) return fallback;
  for (int iter = 0; iter < 100; ++iter) {
    const double norm = std::hypot(r0, r1);
    if (norm < 1e-13) break;
    const double hm = 1e-6 * std::sqrt(target_var);
    const double hl = 1e-6;
    double a0 = 0.0, a1 = 0.0, c0 = 0.0, c1 = 0.0;
    if (!residual(mu + hm, ls, a0, a1) || !residual(mu, ls + hl, c0, c1)) return fallback;
    const double j00 = (a0 - r0) / hm, j10 = (a1 - r1) / hm;
    const double j01 = (c0 - r0) / hl, j11 = (c1 - r1) / hl;
    const double det = j00 * j11 - j01 * j10;
    if (!(std::abs(det) > 0.0)) return fallback;
    const double dm = -(j11 * r0 - j01 * r1) / det;
    const double dl = -(-j10 * r0 + j00 * r1) / det;
    double step = 1.0;
    bool improved = false;
    for (int k = 0; k < 40; ++k, step *= 0.5) {
      double n0 = 0.0, n1 = 0.0;
      if (residual(mu + step * dm, ls + step * dl, n0, n1) && std::hypot(n0, n1) < norm) {
        mu += step * dm;
        ls += step * dl;
        r0 = n0;
        r1 = n1;
        improved = true;
        break;
      }
    }
    if (!improved) break;
  }
  if (std::hypot(r0, r1) > 1e-6) return fallback;
  return {mu, std::exp(ls), lo, hi};
}

double TruncatedPowerLaw::pdf(double x) const {
  if (!(x >= eps && x <= hi)) return 0.0;
  return std::exp(log_pdf(x));
}

double TruncatedPowerLaw::log_pdf(double x) const {
  if (!(x >= eps && x <= hi)) return -std::numeric_limits<double>::infinity();
  // y = ln x is exponential(rate alpha) on [ln eps, ln hi] of width L.
  const double width = std::log(hi / eps);
  const double s = std::log(x / eps);
  return -alpha * s - std::log(x) - std::log(width * shrink(alpha * width));
}

double TruncatedPowerLaw::mean() const {
  const double width = std::log(hi / eps);
  // E[e^y] = eps * int_0^L e^{(1-alpha)s} ds / int_0^L e^{-alpha s} ds.
  const double num = grow((1.0 - alpha) * width);
  const double den = shrink(alpha * width);
  return eps * num / den;
}

double TruncatedPowerLaw::quantile(double u) const {
  const double width = std::log(hi / eps);
  double s = 0.0;
  if (alpha == 0.0) {
    s = u * width;
  } else {
    s = -std::log1p(u * std::expm1(-alpha * width)) / alpha;
  }
  return std::clamp(eps * std::exp(s), eps, hi);
}

double fit_truncated_power_law_alpha(double mean_log_x, double eps, double hi) {
  const double width = std::log(hi / eps);
  if (!(width > 0.0)) throw Error(ErrorKind::Degenerate, "empty power-law support");
  const double target = (mean_log_x - std::log(eps)) / width;
  // The unit-interval mean decreases from 1/2 at rate 0; a larger target
  // would need a negative exponent, which the model excludes.
  if (target >= 0.5) return 0.0;
  if (!(target > 0.0)) {
    throw Error(ErrorKind::Degenerate, "all political-regime observations sit at the cutoff");
  }
  double lo_t = 0.0;
  double hi_t = 1.0;
  while (unit_truncated_exp_mean(hi_t) > target) {
    hi_t *= 2.0;
    if (hi_t > 1e12) break;
  }
  for (int i = 0; i < 200; ++i) {
    const double mid = 0.5 * (lo_t + hi_t);
    if (unit_truncated_exp_mean(mid) > target) {
      lo_t = mid;
    } else {
      hi_t = mid;
    }
  }
  return 0.5 * (lo_t + hi_t) / width;
}

}  // namespace tailrisk
