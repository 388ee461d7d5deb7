#include <algorithm>
#include <cmath>
#include <complex>

#include "mcpg/cpg.hpp"
#include "mcpg/error.hpp"

namespace mcpg {

namespace {

using Vec = std::array<double, 2>;
using Mat = std::array<double, 4>;  // row-major 2x2

constexpr int kSeedBurnIn = 100;
constexpr int kSeedCount = 2000;
constexpr int kNewtonIterations = 60;
constexpr double kNewtonTol = 1e-13;
constexpr double kMinimalPeriodTol = 1e-7;

Vec map(const CpgParams& p, const Vec& x) {
  return {sigmoid(p.theta1 + p.w11 * x[0] + p.w12 * x[1]),
          sigmoid(p.theta2 + p.w21 * x[0] + p.w22 * x[1])};
}

Mat mul(const Mat& a, const Mat& b) {
  return {a[0] * b[0] + a[1] * b[2], a[0] * b[1] + a[1] * b[3],
          a[2] * b[0] + a[3] * b[2], a[2] * b[1] + a[3] * b[3]};
}

// p-fold iterate and the Jacobian product along the way.
std::pair<Vec, Mat> iterate(const CpgParams& p, Vec x, int n) {
  Mat m{1.0, 0.0, 0.0, 1.0};
  for (int i = 0; i < n; ++i) {
    const Vec y = map(p, x);
    const double g1 = y[0] * (1.0 - y[0]);
    const double g2 = y[1] * (1.0 - y[1]);
    const Mat j{g1 * p.w11, g1 * p.w12, g2 * p.w21, g2 * p.w22};
    m = mul(j, m);
    x = y;
  }
  return {x, m};
}

double spectral_radius(const Mat& m) {
  const double tr = m[0] + m[3];
  const double det = m[0] * m[3] - m[1] * m[2];
  const std::complex<double> disc = std::sqrt(std::complex<double>(tr * tr / 4.0 - det));
  return std::max(std::abs(tr / 2.0 + disc), std::abs(tr / 2.0 - disc));
}

bool inside_unit_square(const Vec& z) {
  return z[0] > 0.0 && z[0] < 1.0 && z[1] > 0.0 && z[1] < 1.0;
}

// Newton iteration on F(z) = f^n(z) - z.
std::optional<Vec> newton(const CpgParams& p, Vec z, int n) {
  for (int it = 0; it < kNewtonIterations; ++it) {
    const auto [fz, m] = iterate(p, z, n);
    const double r0 = fz[0] - z[0];
    const double r1 = fz[1] - z[1];
    if (std::abs(r0) < kNewtonTol && std::abs(r1) < kNewtonTol) return z;
    // Solve (M - I) dz = -r.
    const double a = m[0] - 1.0, b = m[1], c = m[2], d = m[3] - 1.0;
    const double det = a * d - b * c;
    if (det == 0.0 || !std::isfinite(det)) return std::nullopt;
    z[0] += (-r0 * d + r1 * b) / det;
    z[1] += (-a * r1 + c * r0) / det;
    if (!std::isfinite(z[0]) || !std::isfinite(z[1]) || !inside_unit_square(z)) {
      return std::nullopt;
    }
  }
  return std::nullopt;
}

bool has_minimal_period(const CpgParams& p, const Vec& z, int n) {
  for (int q = 1; q < n; ++q) {
    if (n % q != 0) continue;
    const Vec y = iterate(p, z, q).first;
    if (std::abs(y[0] - z[0]) < kMinimalPeriodTol && std::abs(y[1] - z[1]) < kMinimalPeriodTol) {
      return false;
    }
  }
  return true;
}

}  // namespace

PeriodicOrbit find_periodic_orbit(const CpgParams& params, int period) {
  params.validate();
  if (period < 1) throw InvalidArgument("orbit period must be >= 1");

  std::optional<Vec> best;
  double best_multiplier = 0.0;
  Vec x{kDefaultInit.x1, kDefaultInit.x2};
  for (int i = 0; i < kSeedBurnIn; ++i) x = map(params, x);
  for (int i = 0; i < kSeedCount; ++i) {
    x = map(params, x);
    const auto z = newton(params, x, period);
    if (!z || !has_minimal_period(params, *z, period)) continue;
    const double mult = spectral_radius(iterate(params, *z, period).second);
    if (!best || mult < best_multiplier * (1.0 - 1e-9)) {
      best = z;
      best_multiplier = mult;
    }
  }
  if (!best) {
    throw OrbitNotFound("no orbit of minimal period " + std::to_string(period) +
                        " found for these CPG parameters");
  }

  PeriodicOrbit orbit;
  orbit.period = period;
  orbit.multiplier = best_multiplier;
  Vec z = *best;
  for (int k = 0; k < period; ++k) {
    // Polish every phase point; plain iteration would amplify rounding error.
    if (auto polished = newton(params, z, period)) z = *polished;
    orbit.points.push_back(z);
    z = map(params, z);
  }
  return orbit;
}

}  // namespace mcpg
