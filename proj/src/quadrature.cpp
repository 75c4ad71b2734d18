#include "harvest/quadrature.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>
#include <numbers>
#include <sstream>
#include <vector>

namespace harvest::quadrature {

namespace {

// Gauss-Kronrod 21-point abscissae and weights (QUADPACK qk21). Odd indices
// of kXgk are the 10-point Gauss nodes.
constexpr std::array<double, 11> kXgk = {
    0.995657163025808080735527280689003, 0.973906528517171720077964012084452,
    0.930157491355708226001207180059508, 0.865063366688984510732096688423493,
    0.780817726586416897063717578345042, 0.679409568299024406234327365114874,
    0.562757134668604683339000099272694, 0.433395394129247190799265943165784,
    0.294392862701460198131126603103866, 0.148874338981631210884826001129720,
    0.000000000000000000000000000000000};

constexpr std::array<double, 11> kWgk = {
    0.011694638867371874278064396062192, 0.032558162307964727478818972459390,
    0.054755896574351996031381300244580, 0.075039674810919952767043140916190,
    0.093125454583697605535065465083366, 0.109387158802297641899210590325805,
    0.123491976262065851077958109831074, 0.134709217311473325928054001771707,
    0.142775938577060080797094273138717, 0.147739104901338491374841515972068,
    0.149445554002916905664936468389821};

constexpr std::array<double, 5> kWg = {
    0.066671344308688137593568809893332, 0.149451349150580593145776339657697,
    0.219086362515982043995534934228163, 0.269266719309996355091226921569469,
    0.295524224714752870173892994651338};

constexpr double kEps = std::numeric_limits<double>::epsilon();
constexpr int kMaxInitialPanels = 200000;

struct Panel {
  double lo = 0.0;
  double hi = 0.0;
  Complex value{};
  double error = 0.0;
};

bool operator<(const Panel& a, const Panel& b) { return a.error < b.error; }

Complex evaluate(const Integrand& f, double x) {
  const Complex y = f(x);
  if (!std::isfinite(y.real()) || !std::isfinite(y.imag())) {
    throw NonFiniteIntegrandError(x);
  }
  return y;
}

// QUADPACK error heuristic for one real component.
double component_error(double resk, double resg, double resasc, double resabs,
                       double half) {
  double err = std::abs((resk - resg) * half);
  const double asc = resasc * half;
  if (asc != 0.0 && err != 0.0) {
    err = asc * std::min(1.0, std::pow(200.0 * err / asc, 1.5));
  }
  const double abs = resabs * half;
  if (abs > std::numeric_limits<double>::min() / (50.0 * kEps)) {
    err = std::max(50.0 * kEps * abs, err);
  }
  return err;
}

Panel gauss_kronrod(const Integrand& f, double lo, double hi) {
  const double center = 0.5 * (lo + hi);
  const double half = 0.5 * (hi - lo);

  std::array<Complex, 10> f1{};
  std::array<Complex, 10> f2{};
  const Complex fc = evaluate(f, center);
  Complex resg{};
  Complex resk = kWgk[10] * fc;
  double abs_re = kWgk[10] * std::abs(fc.real());
  double abs_im = kWgk[10] * std::abs(fc.imag());
  for (int j = 0; j < 10; ++j) {
    const double absc = half * kXgk[j];
    f1[j] = evaluate(f, center - absc);
    f2[j] = evaluate(f, center + absc);
    const Complex sum = f1[j] + f2[j];
    resk += kWgk[j] * sum;
    if (j % 2 == 1) resg += kWg[j / 2] * sum;
    abs_re += kWgk[j] * (std::abs(f1[j].real()) + std::abs(f2[j].real()));
    abs_im += kWgk[j] * (std::abs(f1[j].imag()) + std::abs(f2[j].imag()));
  }

  const Complex mean = 0.5 * resk;
  double asc_re = kWgk[10] * std::abs(fc.real() - mean.real());
  double asc_im = kWgk[10] * std::abs(fc.imag() - mean.imag());
  for (int j = 0; j < 10; ++j) {
    asc_re += kWgk[j] * (std::abs(f1[j].real() - mean.real()) +
                         std::abs(f2[j].real() - mean.real()));
    asc_im += kWgk[j] * (std::abs(f1[j].imag() - mean.imag()) +
                         std::abs(f2[j].imag() - mean.imag()));
  }

  const double ahalf = std::abs(half);
  const double err_re =
      component_error(resk.real(), resg.real(), asc_re, abs_re, ahalf);
  const double err_im =
      component_error(resk.imag(), resg.imag(), asc_im, abs_im, ahalf);
  return Panel{lo, hi, resk * half, std::hypot(err_re, err_im)};
}

double target(const QuadratureSettings& s, const Complex& value) {
  return std::max(s.abs_tol, s.rel_tol * std::abs(value));
}

// Globally adaptive refinement from a sorted list of breakpoints. `reserve`
// is error budget already consumed elsewhere (truncated tails).
IntegralResult adaptive(const Integrand& f, const std::vector<double>& breaks,
                        const QuadratureSettings& settings,
                        double reserve = 0.0) {
  std::vector<Panel> heap;
  heap.reserve(breaks.size() + 2 * static_cast<size_t>(settings.max_subdivisions));
  Complex total{};
  double total_err = 0.0;
  for (size_t i = 0; i + 1 < breaks.size(); ++i) {
    heap.push_back(gauss_kronrod(f, breaks[i], breaks[i + 1]));
    total += heap.back().value;
    total_err += heap.back().error;
  }
  std::make_heap(heap.begin(), heap.end());

  int splits = 0;
  while (total_err + reserve > target(settings, total)) {
    const Panel& worst = heap.front();
    const double mid = 0.5 * (worst.lo + worst.hi);
    const bool splittable =
        mid > worst.lo && mid < worst.hi &&
        (worst.hi - worst.lo) > 16.0 * kEps * std::max(std::abs(worst.lo), std::abs(worst.hi));
    if (splits >= settings.max_subdivisions || !splittable) {
      // Recompute exactly before reporting.
      double err = reserve;
      for (const auto& p : heap) err += p.error;
      if (err <= target(settings, total)) break;
      throw NonConvergenceError(err, target(settings, total), splits, worst.lo,
                                worst.hi);
    }
    std::pop_heap(heap.begin(), heap.end());
    const Panel old = heap.back();
    heap.pop_back();
    Panel left = gauss_kronrod(f, old.lo, mid);
    Panel right = gauss_kronrod(f, mid, old.hi);
    total += left.value + right.value - old.value;
    total_err += left.error + right.error - old.error;
    heap.push_back(left);
    std::push_heap(heap.begin(), heap.end());
    heap.push_back(right);
    std::push_heap(heap.begin(), heap.end());
    ++splits;

    // Incremental sums drift; refresh them periodically.
    if (splits % 256 == 0) {
      total = {};
      total_err = 0.0;
      for (const auto& p : heap) {
        total += p.value;
        total_err += p.error;
      }
    }
  }

  // Deterministic final summation in abscissa order.
  std::sort(heap.begin(), heap.end(),
            [](const Panel& a, const Panel& b) { return a.lo < b.lo; });
  IntegralResult result;
  result.error_estimate = reserve;
  for (const auto& p : heap) {
    result.value += p.value;
    result.error_estimate += p.error;
  }
  return result;
}

std::vector<double> uniform_breaks(double lo, double hi, int panels) {
  std::vector<double> breaks(static_cast<size_t>(panels) + 1);
  for (int i = 0; i <= panels; ++i) {
    breaks[i] = lo + (hi - lo) * static_cast<double>(i) / panels;
  }
  breaks.back() = hi;
  return breaks;
}

int panel_count(double length, double spacing) {
  const double n = std::ceil(length / spacing - 1e-9);
  if (!(n <= kMaxInitialPanels)) {
    throw std::invalid_argument("quadrature: initial partition too fine");
  }
  return std::max(1, static_cast<int>(n));
}

double initial_spacing(double width, const LineOptions& opt) {
  double spacing = width;
  if (opt.max_frequency > 0.0) {
    spacing = std::min(spacing, std::numbers::pi / (4.0 * opt.max_frequency));
  }
  return spacing;
}

// Breakpoints on [0, half_width]: uniform at `spacing`, plus a geometric
// grading toward the origin down to `feature_scale`.
std::vector<double> positive_breaks(double half_width, double spacing,
                                    double feature_scale) {
  std::vector<double> breaks =
      uniform_breaks(0.0, half_width, panel_count(half_width, spacing));
  if (feature_scale > 0.0 && feature_scale < spacing) {
    for (double x = spacing / 2.0; x > feature_scale / 2.0; x /= 2.0) {
      breaks.push_back(x);
    }
    std::sort(breaks.begin(), breaks.end());
  }
  return breaks;
}

// Integrand magnitude at the window edge, rescaled so that sampling just
// inside the edge cannot miss an oscillation node.
double edge_amplitude(const Integrand& f, double edge, double width,
                      double spacing) {
  double amp = 0.0;
  const double step = std::copysign(std::min(spacing, width) / 4.0, edge);
  for (int k = 0; k < 3; ++k) {
    const double x = edge - k * step;
    const double decay = (edge * edge - x * x) / (width * width);
    amp = std::max(amp, std::abs(evaluate(f, x)) * std::exp(-decay));
  }
  return amp;
}

void validate_width(double width) {
  if (!(width > 0.0) || !std::isfinite(width)) {
    throw std::invalid_argument("quadrature: envelope width must be positive");
  }
}

// Wynn epsilon extrapolation of the last (odd count) partial sums.
double wynn_epsilon(const std::vector<double>& sums) {
  size_t n = std::min<size_t>(sums.size(), 17);
  if (n % 2 == 0) --n;
  if (n < 3) return sums.back();
  std::vector<double> prev(n + 1, 0.0);
  std::vector<double> cur(sums.end() - static_cast<long>(n), sums.end());
  double best = cur.back();
  for (size_t k = 1; k < n; ++k) {
    std::vector<double> next(n - k);
    for (size_t j = 0; j + 1 < cur.size(); ++j) {
      const double diff = cur[j + 1] - cur[j];
      if (diff == 0.0 || !std::isfinite(1.0 / diff)) return best;
      next[j] = prev[j + 1] + 1.0 / diff;
    }
    prev = std::move(cur);
    cur = std::move(next);
    if (k % 2 == 0) best = cur.back();
  }
  return best;
}

}  // namespace

void QuadratureSettings::validate() const {
  if (!(rel_tol > 0.0)) throw std::invalid_argument("rel_tol must be > 0");
  if (!(abs_tol > 0.0)) throw std::invalid_argument("abs_tol must be > 0");
  if (!(truncation_sigmas >= 6.0)) {
    throw std::invalid_argument("truncation_sigmas must be >= 6");
  }
  if (max_subdivisions < 1) {
    throw std::invalid_argument("max_subdivisions must be >= 1");
  }
}

namespace {
std::string convergence_message(double err, double tol, int subdivisions,
                                double lo, double hi) {
  std::ostringstream os;
  os << "quadrature did not converge: error estimate " << err
     << " > tolerance " << tol << " after " << subdivisions
     << " subdivisions (worst panel [" << lo << ", " << hi << "])";
  return os.str();
}

std::string nonfinite_message(double x) {
  std::ostringstream os;
  os << "non-finite integrand value at abscissa " << x;
  return os.str();
}
}  // namespace

NonConvergenceError::NonConvergenceError(double err, double tol, int subdivs,
                                         double lo, double hi)
    : QuadratureError(convergence_message(err, tol, subdivs, lo, hi)),
      error_estimate(err),
      tolerance(tol),
      subdivisions(subdivs),
      worst_lo(lo),
      worst_hi(hi) {}

NonFiniteIntegrandError::NonFiniteIntegrandError(double x)
    : QuadratureError(nonfinite_message(x)), abscissa(x) {}

double gaussian_tail_factor(double a, double width) {
  return width * width / (2.0 * a);
}

IntegralResult integrate_interval(const Integrand& f, double lo, double hi,
                                  const QuadratureSettings& settings,
                                  int initial_panels) {
  settings.validate();
  if (!(hi > lo)) throw std::invalid_argument("integrate_interval: need lo < hi");
  return adaptive(f, uniform_breaks(lo, hi, std::max(1, initial_panels)),
                  settings);
}

IntegralResult integrate_line(const Integrand& f, double envelope_width,
                              const QuadratureSettings& settings,
                              const LineOptions& options) {
  settings.validate();
  validate_width(envelope_width);
  const double edge = settings.truncation_sigmas * envelope_width;
  const double spacing = initial_spacing(envelope_width, options);

  const std::vector<double> half =
      positive_breaks(edge, spacing, options.feature_scale);
  std::vector<double> breaks;
  breaks.reserve(2 * half.size());
  for (auto it = half.rbegin(); it != half.rend(); ++it) {
    if (*it > 0.0) breaks.push_back(-*it);
  }
  breaks.insert(breaks.end(), half.begin(), half.end());

  const double tail =
      (edge_amplitude(f, edge, envelope_width, spacing) +
       edge_amplitude(f, -edge, envelope_width, spacing)) *
      gaussian_tail_factor(edge, envelope_width);
  return adaptive(f, breaks, settings, tail);
}

IntegralResult integrate_halfline(const Integrand& f, double envelope_width,
                                  const QuadratureSettings& settings,
                                  const LineOptions& options) {
  settings.validate();
  validate_width(envelope_width);
  const double edge = settings.truncation_sigmas * envelope_width;
  const double spacing = initial_spacing(envelope_width, options);
  const double tail = edge_amplitude(f, edge, envelope_width, spacing) *
                      gaussian_tail_factor(edge, envelope_width);
  return adaptive(f, positive_breaks(edge, spacing, options.feature_scale),
                  settings, tail);
}

IntegralResult integrate_sine_transform(const Integrand& amplitude,
                                        double omega, double cutoff,
                                        const QuadratureSettings& settings,
                                        int max_cycles) {
  settings.validate();
  if (!(omega > 0.0) || !(cutoff > 0.0)) {
    throw std::invalid_argument("integrate_sine_transform: need omega, cutoff > 0");
  }
  const double half_period = std::numbers::pi / omega;
  const double head_end = std::max(1.0, std::ceil(cutoff / half_period)) * half_period;
  const auto integrand = [&](double r) {
    return amplitude(r) * std::sin(omega * r);
  };

  const double head_spacing = std::min(half_period, cutoff / 8.0);
  const IntegralResult head =
      adaptive(integrand,
               uniform_breaks(0.0, head_end, panel_count(head_end, head_spacing)),
               settings);

  // Tail: one half-period per term; terms alternate in sign.
  std::vector<double> re_sums;
  std::vector<double> im_sums;
  Complex partial{};
  double cycle_err = 0.0;
  Complex last_estimate{};
  double last_change = std::numeric_limits<double>::infinity();
  int small_terms = 0;
  int settled = 0;
  for (int k = 0; k < max_cycles; ++k) {
    const double lo = head_end + k * half_period;
    const IntegralResult term = adaptive(integrand, {lo, lo + half_period}, settings);
    partial += term.value;
    cycle_err += term.error_estimate;
    re_sums.push_back(partial.real());
    im_sums.push_back(partial.imag());

    const Complex estimate(wynn_epsilon(re_sums), wynn_epsilon(im_sums));
    const double tol = target(settings, head.value + estimate);
    small_terms = std::abs(term.value) <= 0.1 * tol ? small_terms + 1 : 0;
    if (small_terms >= 2) {
      return {head.value + partial, head.error_estimate + cycle_err};
    }
    if (k >= 2) {
      last_change = std::abs(estimate - last_estimate);
      settled = last_change <= tol ? settled + 1 : 0;
      if (settled >= 2) {
        return {head.value + estimate,
                head.error_estimate + cycle_err + last_change};
      }
    }
    last_estimate = estimate;
  }
  throw NonConvergenceError(last_change, target(settings, head.value + last_estimate),
                            max_cycles, head_end,
                            head_end + max_cycles * half_period);
}

}  // namespace harvest::quadrature
