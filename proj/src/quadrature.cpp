#include "quadrature.hpp"

#include <algorithm>
#include <array>
#include <queue>
#include <vector>

#include "error.hpp"

namespace polywind {

namespace {

// Kronrod abscissae on [-1, 1]; odd indices are the embedded 7-point Gauss nodes.
constexpr std::array<double, 8> kXk = {
    0.991455371120812639206854697526329, 0.949107912342758524526189684047851,
    0.864864423359769072789712788640926, 0.741531185599394439863864773280788,
    0.586087235467691130294144845693013, 0.405845151377397166906606412076961,
    0.207784955007898467600689403773245, 0.000000000000000000000000000000000};
constexpr std::array<double, 8> kWk = {
    0.022935322010529224963732008058970, 0.063092092629978553290700663189204,
    0.104790010322250183839876322541518, 0.140653259715525918745189590510238,
    0.169004726639267902826583426598550, 0.190350578064785409913256402421014,
    0.204432940075298892414161999234649, 0.209482141084727828012999174891714};
constexpr std::array<double, 4> kWg = {
    0.129484966168869693270611432679082, 0.279705391489276667901467771423780,
    0.381830050505118944950369775488975, 0.417959183673469387755102040816327};

struct Panel {
  double a, b, value, error;
  bool operator<(const Panel& other) const { return error < other.error; }
};

Panel gauss_kronrod(const Integrand& f, double a, double b) {
  const double mid = 0.5 * (a + b);
  const double half = 0.5 * (b - a);
  const double fc = f(mid);
  double kronrod = fc * kWk[7];
  double gauss = fc * kWg[3];
  for (int j = 0; j < 7; ++j) {
    const double dx = half * kXk[static_cast<std::size_t>(j)];
    const double pair = f(mid - dx) + f(mid + dx);
    kronrod += kWk[static_cast<std::size_t>(j)] * pair;
    if (j % 2 == 1) gauss += kWg[static_cast<std::size_t>(j / 2)] * pair;
  }
  kronrod *= half;
  gauss *= half;
  return {a, b, kronrod, std::abs(kronrod - gauss)};
}

}  // namespace

void validate(const QuadratureSpec& spec) {
  require(spec.rel_tol > 0.0 && spec.abs_tol > 0.0, "quadrature tolerances must be positive");
  require(spec.truncation_cutoff > 0.0, "truncation cutoff must be positive");
  require(spec.max_intervals >= 1, "max_intervals must be positive");
}

QuadratureResult integrate(const Integrand& f, double a, double b, const QuadratureSpec& spec) {
  validate(spec);
  require(std::isfinite(a) && std::isfinite(b), "integrate() needs a finite interval");
  if (a == b) return {};

  constexpr int kInitialPanels = 8;
  std::priority_queue<Panel> panels;
  double value = 0.0;
  double error = 0.0;
  for (int i = 0; i < kInitialPanels; ++i) {
    const double lo = a + (b - a) * i / kInitialPanels;
    const double hi = i + 1 == kInitialPanels ? b : a + (b - a) * (i + 1) / kInitialPanels;
    const Panel p = gauss_kronrod(f, lo, hi);
    value += p.value;
    error += p.error;
    panels.push(p);
  }
  while (error > std::max(spec.abs_tol, spec.rel_tol * std::abs(value)) &&
         static_cast<int>(panels.size()) < spec.max_intervals) {
    const Panel worst = panels.top();
    panels.pop();
    const double mid = 0.5 * (worst.a + worst.b);
    if (mid <= worst.a || mid >= worst.b) {
      panels.push(worst);  // panel cannot be split further
      break;
    }
    const Panel left = gauss_kronrod(f, worst.a, mid);
    const Panel right = gauss_kronrod(f, mid, worst.b);
    value += left.value + right.value - worst.value;
    error += left.error + right.error - worst.error;
    panels.push(left);
    panels.push(right);
  }

  // Re-sum from the panels to shed the cancellation drift of the running total.
  QuadratureResult out;
  out.intervals = static_cast<int>(panels.size());
  std::vector<Panel> all;
  all.reserve(panels.size());
  while (!panels.empty()) {
    all.push_back(panels.top());
    panels.pop();
  }
  std::sort(all.begin(), all.end(), [](const Panel& l, const Panel& r) { return l.a < r.a; });
  for (const auto& p : all) {
    out.value += p.value;
    out.error += p.error;
  }
  return out;
}

double truncation_point(const Integrand& envelope, double cutoff, double start) {
  double hi = std::max(start, 1e-3);
  int guard = 0;
  while (envelope(hi) >= cutoff) {
    hi *= 2.0;
    if (++guard > 200) fail(ErrorKind::Runtime, "integrand envelope does not decay");
  }
  double lo = hi * 0.5 < start ? start : hi * 0.5;
  if (envelope(lo) < cutoff) return lo;
  for (int i = 0; i < 60; ++i) {
    const double mid = 0.5 * (lo + hi);
    (envelope(mid) < cutoff ? hi : lo) = mid;
  }
  return hi;
}

QuadratureResult integrate_to_infinity(const Integrand& f, const Integrand& envelope, double a,
                                       const QuadratureSpec& spec) {
  const double b = truncation_point(envelope, spec.truncation_cutoff, std::max(a, 1.0));
  return integrate(f, a, b, spec);
}

}  // namespace polywind
