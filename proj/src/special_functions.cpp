#include "quasicollapse/special_functions.hpp"

#include <array>
#include <cmath>
#include <limits>
#include <map>
#include <mutex>
#include <numbers>
#include <stdexcept>
#include <utility>

namespace quasicollapse {

double hermite_psi(int n, double x)
{
  if (n < 0 || n > kMaxHermiteLevel) throw std::out_of_range("hermite_psi: level outside [0, 5000]");
  if (!(std::abs(x) < kHermiteRange)) throw std::out_of_range("hermite_psi: |x| must be below 40");

  // Recurrence on psi_k e^{x^2/2}, rescaled on the fly; the Gaussian and the
  // accumulated scale are applied once at the end.
  double prev = 0.0;
  double cur = std::pow(std::numbers::pi, -0.25);
  double log_scale = -0.5 * x * x;
  for (int k = 0; k < n; ++k) {
    const double next = std::sqrt(2.0 / (k + 1)) * x * cur - std::sqrt(double(k) / (k + 1)) * prev;
    prev = cur;
    cur = next;
    const double mag = std::abs(cur);
    if (mag > 1e150) {
      prev /= mag;
      cur /= mag;
      log_scale += std::log(mag);
    }
  }
  return cur * std::exp(log_scale);
}

namespace {

using lcplx = std::complex<long double>;
constexpr long double kPi = std::numbers::pi_v<long double>;

// Lanczos g = 7, n = 9 (about 15 significant digits).
constexpr std::array<long double, 9> kLanczos = {
    0.99999999999980993227684700473478L,  676.520368121885098567009190444019L,
    -1259.13921672240287047156078755283L, 771.3234287776530788486528258894L,
    -176.61502916214059906584551354L,     12.507343278686904814458936853L,
    -0.13857109526572011689554707L,       9.984369578019571e-6L,
    1.50563273514931155834e-7L};

bool is_nonpositive_integer(lcplx z)
{
  return z.imag() == 0.0L && z.real() <= 0.0L && z.real() == std::floor(z.real());
}

// log Gamma(z) for Re z >= 1/2.
lcplx log_gamma_right(lcplx z)
{
  z -= 1.0L;
  lcplx sum = kLanczos[0];
  for (std::size_t i = 1; i < kLanczos.size(); ++i) sum += kLanczos[i] / (z + static_cast<long double>(i));
  const lcplx t = z + 7.5L;
  return 0.5L * std::log(2.0L * kPi) + (z + 0.5L) * std::log(t) - t + std::log(sum);
}

lcplx rgamma_l(lcplx z)
{
  if (is_nonpositive_integer(z)) return 0.0L;
  if (z.real() < 0.5L) return std::sin(kPi * z) / kPi * std::exp(log_gamma_right(1.0L - z));
  return std::exp(-log_gamma_right(z));
}

struct KummerSum {
  lcplx value;
  long double max_term;
};

KummerSum kummer_m(lcplx a, long double b, lcplx w)
{
  lcplx term = 1.0L;
  KummerSum out{1.0L, 1.0L};
  const long double start = std::abs(a) + std::abs(w);
  for (int k = 0; k < 5000; ++k) {
    term *= (a + static_cast<long double>(k)) / ((b + k) * (k + 1.0L)) * w;
    out.value += term;
    const long double mag = std::abs(term);
    out.max_term = std::max(out.max_term, mag);
    if (mag == 0.0L) return out;
    if (k > start && mag <= 1e-21L * std::abs(out.value)) return out;
  }
  throw std::range_error("pcf_d: Kummer series did not converge");
}

struct Prefactors {
  lcplx even;  // 1/Gamma((1-a)/2)
  lcplx odd;   // 1/Gamma(-a/2)
};

Prefactors prefactors_for(lcplx a) { return {rgamma_l((1.0L - a) / 2.0L), rgamma_l(-a / 2.0L)}; }

void check_envelope(cplx a, cplx xi)
{
  if (!(std::abs(xi) <= kPcfMaxArgument)) throw std::out_of_range("pcf_d: |xi| exceeds 30");
  if (!(std::abs(a) <= kPcfMaxOrder)) throw std::out_of_range("pcf_d: |a| exceeds 50");
}

cplx pcf_with(lcplx a, lcplx xi, const Prefactors& pre)
{
  const lcplx w = xi * xi / 2.0L;
  lcplx even = 0.0L, odd = 0.0L;
  long double bound = 0.0L;
  if (pre.even != 0.0L) {
    const KummerSum m = kummer_m(-a / 2.0L, 0.5L, w);
    even = m.value * pre.even;
    bound += m.max_term * std::abs(pre.even);
  }
  if (pre.odd != 0.0L && xi != 0.0L) {
    const KummerSum m = kummer_m((1.0L - a) / 2.0L, 1.5L, w);
    const lcplx scale = std::sqrt(2.0L) * xi * pre.odd;
    odd = m.value * scale;
    bound += m.max_term * std::abs(scale);
  }
  const lcplx bracket = even - odd;
  // Accuracy is judged against the leading series terms as well so that zeros of D_a pass.
  const long double eps = std::numeric_limits<long double>::epsilon();
  const long double leading = std::abs(pre.even) + std::sqrt(2.0L) * std::abs(xi) * std::abs(pre.odd);
  if (bound * eps * 64.0L > 1e-11L * std::max(std::abs(bracket), leading))
    throw std::range_error("pcf_d: cancellation in the Kummer series exceeds the accuracy budget");
  const lcplx value = std::pow(2.0L, a / 2.0L) * std::exp(-xi * xi / 4.0L) * std::sqrt(kPi) * bracket;
  return {static_cast<double>(value.real()), static_cast<double>(value.imag())};
}

}  // namespace

cplx rgamma(cplx z)
{
  const lcplx r = rgamma_l(lcplx(z.real(), z.imag()));
  return {static_cast<double>(r.real()), static_cast<double>(r.imag())};
}

cplx gamma(cplx z)
{
  const lcplx lz(z.real(), z.imag());
  if (is_nonpositive_integer(lz)) throw std::domain_error("gamma: pole at a non-positive integer");
  const lcplx g = 1.0L / rgamma_l(lz);
  return {static_cast<double>(g.real()), static_cast<double>(g.imag())};
}

cplx pcf_d(cplx a, cplx xi)
{
  check_envelope(a, xi);
  const lcplx la(a.real(), a.imag());
  return pcf_with(la, lcplx(xi.real(), xi.imag()), prefactors_for(la));
}

cplx pcf_d_on_ray(cplx a, double s)
{
  const cplx xi = cplx(1.0, 1.0) * s;
  check_envelope(a, xi);

  static std::mutex mutex;
  static std::map<std::pair<double, double>, Prefactors> cache;
  const auto key = std::make_pair(a.real(), a.imag());
  const lcplx la(a.real(), a.imag());
  Prefactors pre;
  {
    std::lock_guard lock(mutex);
    auto it = cache.find(key);
    if (it == cache.end()) {
      if (cache.size() > 4096) cache.clear();
      it = cache.emplace(key, prefactors_for(la)).first;
    }
    pre = it->second;
  }
  return pcf_with(la, lcplx(xi.real(), xi.imag()), pre);
}

}  // namespace quasicollapse
