#include "bnlab/numerics.hpp"

#include "bnlab/errors.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <queue>
#include <string>

namespace bnlab {

void QuadratureSpec::validate() const {
  if (!(rel_tol > 0.0)) throw DomainError("QuadratureSpec: rel_tol must be positive");
  if (!(abs_tol >= 0.0)) throw DomainError("QuadratureSpec: abs_tol must be non-negative");
  if (max_subdivisions < 1) throw DomainError("QuadratureSpec: max_subdivisions must be >= 1");
}

void OdeSpec::validate() const {
  if (!(rel_tol > 0.0) || !(abs_tol >= 0.0)) throw DomainError("OdeSpec: bad tolerances");
  if (!(h_min > 0.0 && h_min <= h_init && h_init <= h_max))
    throw DomainError("OdeSpec: need 0 < h_min <= h_init <= h_max");
}

void RootSpec::validate() const {
  if (!(x_tol > 0.0)) throw DomainError("RootSpec: x_tol must be positive");
  if (max_iter < 1) throw DomainError("RootSpec: max_iter must be >= 1");
}

namespace {

// QUADPACK qk15 abscissae and weights.
constexpr std::array<double, 8> kXgk = {
    0.991455371120812639206854697526329, 0.949107912342758524526189684047851,
    0.864864423359769072789712788640926, 0.741531185599394439863864773280788,
    0.586087235467691130294144845693013, 0.405845151377397166906606412076961,
    0.207784955007898467600689403773245, 0.0};
constexpr std::array<double, 8> kWgk = {
    0.022935322010529224963732008058970, 0.063092092629978553290700663189204,
    0.104790010322250183839876322541518, 0.140653259715525918745189590510238,
    0.169004726639267902826583426598550, 0.190350578064785409913256402421014,
    0.204432940075298892414161999234649, 0.209482141084727828012999174891714};
constexpr std::array<double, 4> kWg = {
    0.129484966168869693270611432679082, 0.279705391489276667901467771423780,
    0.381830050505118944950369775488975, 0.417959183673469387755102040816327};

struct Segment {
  double a, b;
  double value, error, resabs;
  bool tail; // integrand is the transformed tail
  bool operator<(const Segment& o) const { return error < o.error; }
};

double checked(double v, double x) {
  if (!std::isfinite(v))
    throw NonFinite("integrand is not finite at x = " + std::to_string(x));
  return v;
}

Segment gk15(const ScalarFn& f, double a, double b, bool tail, double tail_origin) {
  auto eval = [&](double x) {
    if (!tail) return checked(f(x), x);
    const double r = tail_origin + 1.0 / x - 1.0;
    return checked(f(r), r) / (x * x);
  };
  const double center = 0.5 * (a + b);
  const double half = 0.5 * (b - a);
  const double fc = eval(center);
  double resg = fc * kWg[3];
  double resk = fc * kWgk[7];
  double resabs = std::abs(resk);
  std::array<double, 7> f1{}, f2{};
  for (int j = 0; j < 7; ++j) {
    const double dx = half * kXgk[j];
    f1[j] = eval(center - dx);
    f2[j] = eval(center + dx);
    const double s = f1[j] + f2[j];
    resk += kWgk[j] * s;
    resabs += kWgk[j] * (std::abs(f1[j]) + std::abs(f2[j]));
    if (j % 2 == 1) resg += kWg[j / 2] * s;
  }
  const double mean = resk * 0.5;
  double resasc = kWgk[7] * std::abs(fc - mean);
  for (int j = 0; j < 7; ++j)
    resasc += kWgk[j] * (std::abs(f1[j] - mean) + std::abs(f2[j] - mean));
  const double ah = std::abs(half);
  double err = std::abs((resk - resg) * half);
  resasc *= ah;
  if (resasc != 0.0 && err != 0.0) err = resasc * std::min(1.0, std::pow(200.0 * err / resasc, 1.5));
  const double rab = resabs * ah;
  constexpr double eps = std::numeric_limits<double>::epsilon();
  if (rab > std::numeric_limits<double>::min() / (50.0 * eps)) err = std::max(50.0 * eps * rab, err);
  return {a, b, resk * half, err, rab, tail};
}

} // namespace

QuadratureResult integrate_detailed(const ScalarFn& f, std::span<const double> breakpoints,
                                    const QuadratureSpec& spec) {
  spec.validate();
  if (breakpoints.size() < 2) throw DomainError("integrate: need at least two breakpoints");
  for (std::size_t i = 0; i + 1 < breakpoints.size(); ++i)
    if (!(breakpoints[i] <= breakpoints[i + 1]) || std::isinf(breakpoints[i]))
      throw DomainError("integrate: breakpoints must be finite and non-decreasing (last may be inf)");

  double tail_origin = 0.0;
  std::priority_queue<Segment> heap;
  double total = 0.0, total_err = 0.0;
  for (std::size_t i = 0; i + 1 < breakpoints.size(); ++i) {
    const double a = breakpoints[i], b = breakpoints[i + 1];
    if (a == b) continue;
    Segment s;
    if (std::isinf(b)) {
      if (!spec.infinite_tail_transform)
        throw DomainError("integrate: infinite range needs infinite_tail_transform");
      tail_origin = a;
      s = gk15(f, 0.0, 1.0, true, a);
    } else {
      s = gk15(f, a, b, false, 0.0);
    }
    total += s.value;
    total_err += s.error;
    heap.push(s);
  }

  int subdivisions = 0;
  std::vector<Segment> frozen;
  while (!heap.empty() && total_err > std::max(spec.abs_tol, spec.rel_tol * std::abs(total))) {
    Segment s = heap.top();
    heap.pop();
    const double mid = 0.5 * (s.a + s.b);
    if (!(mid > s.a && mid < s.b) || std::abs(s.b - s.a) < 1e-14 * std::max(std::abs(s.a), 1e-300)) {
      frozen.push_back(s); // cannot be refined further in double precision
      continue;
    }
    if (++subdivisions > spec.max_subdivisions)
      throw NonConvergence("integrate: subdivision budget exhausted (error estimate " +
                           std::to_string(total_err) + ")");
    Segment l = gk15(f, s.a, mid, s.tail, tail_origin);
    Segment r = gk15(f, mid, s.b, s.tail, tail_origin);
    total += l.value + r.value - s.value;
    total_err += l.error + r.error - s.error;
    heap.push(l);
    heap.push(r);
  }
  // resum to shed accumulated update drift
  double sum = 0.0, err = 0.0;
  for (const auto& s : frozen) { sum += s.value; err += s.error; }
  while (!heap.empty()) { sum += heap.top().value; err += heap.top().error; heap.pop(); }
  return {sum, err, subdivisions};
}

double integrate(const ScalarFn& f, std::span<const double> breakpoints, const QuadratureSpec& spec) {
  return integrate_detailed(f, breakpoints, spec).value;
}

double integrate(const ScalarFn& f, double a, double b, const QuadratureSpec& spec) {
  if (a == b) return 0.0;
  if (b < a) return -integrate(f, b, a, spec);
  const std::array<double, 2> pts{a, b};
  return integrate(f, pts, spec);
}

// ---------------------------------------------------------------- ODE

namespace {

namespace dp {
constexpr double c2 = 1.0 / 5, c3 = 3.0 / 10, c4 = 4.0 / 5, c5 = 8.0 / 9;
constexpr double a21 = 1.0 / 5;
constexpr double a31 = 3.0 / 40, a32 = 9.0 / 40;
constexpr double a41 = 44.0 / 45, a42 = -56.0 / 15, a43 = 32.0 / 9;
constexpr double a51 = 19372.0 / 6561, a52 = -25360.0 / 2187, a53 = 64448.0 / 6561,
                 a54 = -212.0 / 729;
constexpr double a61 = 9017.0 / 3168, a62 = -355.0 / 33, a63 = 46732.0 / 5247, a64 = 49.0 / 176,
                 a65 = -5103.0 / 18656;
constexpr double a71 = 35.0 / 384, a73 = 500.0 / 1113, a74 = 125.0 / 192, a75 = -2187.0 / 6784,
                 a76 = 11.0 / 84;
constexpr double e1 = 71.0 / 57600, e3 = -71.0 / 16695, e4 = 71.0 / 1920, e5 = -17253.0 / 339200,
                 e6 = 22.0 / 525, e7 = -1.0 / 40;
constexpr double d1 = -12715105075.0 / 11282082432.0, d3 = 87487479700.0 / 32700410799.0,
                 d4 = -10690763975.0 / 1880347072.0, d5 = 701980252875.0 / 199316789632.0,
                 d6 = -1453857185.0 / 822651844.0, d7 = 69997945.0 / 29380423.0;
} // namespace dp

} // namespace

std::size_t OdeSolution::locate(double t) const {
  if (t_.size() < 2) return 0;
  auto it = std::upper_bound(t_.begin(), t_.end(), t);
  std::size_t i = it == t_.begin() ? 0 : static_cast<std::size_t>(it - t_.begin()) - 1;
  return std::min(i, t_.size() - 2);
}

double OdeSolution::eval(double t, std::size_t component) const {
  if (!has_dense()) throw DomainError("OdeSolution: dense output was not requested");
  if (t_.size() == 1) return y_[component];
  const std::size_t i = locate(t);
  const double h = t_[i + 1] - t_[i];
  const double th = (t - t_[i]) / h;
  const double th1 = 1.0 - th;
  const double* r = dense_.data() + i * 5 * dim_;
  const std::size_t k = component;
  return r[k] + th * (r[dim_ + k] + th1 * (r[2 * dim_ + k] + th * (r[3 * dim_ + k] + th1 * r[4 * dim_ + k])));
}

void OdeSolution::eval(double t, std::span<double> out) const {
  for (std::size_t k = 0; k < dim_; ++k) out[k] = eval(t, k);
}

OdeSolution solve_ivp(const OdeRhs& rhs, std::span<const double> y0, double t0, double t1,
                      const OdeSpec& spec) {
  spec.validate();
  if (!(t1 > t0)) throw DomainError("solve_ivp: integration runs forward only (t1 > t0)");
  const std::size_t n = y0.size();
  OdeSolution sol;
  sol.dim_ = n;
  sol.t_.push_back(t0);
  sol.y_.assign(y0.begin(), y0.end());

  std::vector<double> y(y0.begin(), y0.end()), y1(n), ytmp(n), ysti(n);
  std::vector<double> k1(n), k2(n), k3(n), k4(n), k5(n), k6(n), k7(n);
  rhs(t0, y, k1);

  constexpr double safe = 0.9, beta = 0.04, facc1 = 5.0, facc2 = 0.1;
  const double expo1 = 0.2 - beta * 0.75;
  double facold = 1e-4;
  double t = t0;
  double h = std::min({spec.h_init, spec.h_max, t1 - t0});
  bool last_rejected = false;
  long nsteps = 0;

  while (t < t1) {
    if (++nsteps > spec.max_steps) throw NonConvergence("solve_ivp: step budget exhausted");
    bool last = false;
    if (t + 1.01 * h >= t1) { h = t1 - t; last = true; }
    if (h < spec.h_min && !last)
      throw StepUnderflow("solve_ivp: step size below h_min at t = " + std::to_string(t));

    using namespace dp;
    for (std::size_t i = 0; i < n; ++i) ytmp[i] = y[i] + h * a21 * k1[i];
    rhs(t + c2 * h, ytmp, k2);
    for (std::size_t i = 0; i < n; ++i) ytmp[i] = y[i] + h * (a31 * k1[i] + a32 * k2[i]);
    rhs(t + c3 * h, ytmp, k3);
    for (std::size_t i = 0; i < n; ++i) ytmp[i] = y[i] + h * (a41 * k1[i] + a42 * k2[i] + a43 * k3[i]);
    rhs(t + c4 * h, ytmp, k4);
    for (std::size_t i = 0; i < n; ++i)
      ytmp[i] = y[i] + h * (a51 * k1[i] + a52 * k2[i] + a53 * k3[i] + a54 * k4[i]);
    rhs(t + c5 * h, ytmp, k5);
    for (std::size_t i = 0; i < n; ++i)
      ysti[i] = y[i] + h * (a61 * k1[i] + a62 * k2[i] + a63 * k3[i] + a64 * k4[i] + a65 * k5[i]);
    const double tph = last ? t1 : t + h;
    rhs(tph, ysti, k6);
    for (std::size_t i = 0; i < n; ++i)
      y1[i] = y[i] + h * (a71 * k1[i] + a73 * k3[i] + a74 * k4[i] + a75 * k5[i] + a76 * k6[i]);
    rhs(tph, y1, k7);

    double err = 0.0;
    bool finite = true;
    for (std::size_t i = 0; i < n; ++i) {
      const double ei = h * (e1 * k1[i] + e3 * k3[i] + e4 * k4[i] + e5 * k5[i] + e6 * k6[i] + e7 * k7[i]);
      const double sk = spec.abs_tol + spec.rel_tol * std::max(std::abs(y[i]), std::abs(y1[i]));
      const double q = ei / sk;
      err += q * q;
      if (!std::isfinite(y1[i])) finite = false;
    }
    err = std::sqrt(err / static_cast<double>(n));
    if (!finite || !std::isfinite(err)) {
      // treat as a hard rejection; repeated failure ends in StepUnderflow
      h *= 0.1;
      last_rejected = true;
      ++sol.rejected_;
      if (h < spec.h_min) throw NonFinite("solve_ivp: non-finite state near t = " + std::to_string(t));
      continue;
    }

    const double fac11 = std::pow(err, expo1);
    double fac = fac11 / std::pow(facold, beta);
    fac = std::max(facc2, std::min(facc1, fac / safe));
    double hnew = h / fac;

    if (err <= 1.0) {
      facold = std::max(err, 1e-4);
      if (spec.dense_output) {
        for (std::size_t i = 0; i < n; ++i) {
          const double ydiff = y1[i] - y[i];
          const double bspl = h * k1[i] - ydiff;
          sol.dense_.push_back(y[i]);
          ytmp[i] = ydiff; // reuse scratch to order the coefficients below
          ysti[i] = bspl;
        }
        for (std::size_t i = 0; i < n; ++i) sol.dense_.push_back(ytmp[i]);
        for (std::size_t i = 0; i < n; ++i) sol.dense_.push_back(ysti[i]);
        for (std::size_t i = 0; i < n; ++i) sol.dense_.push_back(ytmp[i] - h * k7[i] - ysti[i]);
        for (std::size_t i = 0; i < n; ++i)
          sol.dense_.push_back(h * (d1 * k1[i] + d3 * k3[i] + d4 * k4[i] + d5 * k5[i] + d6 * k6[i] + d7 * k7[i]));
      }
      std::swap(k1, k7);
      std::swap(y, y1);
      t = tph;
      sol.t_.push_back(t);
      sol.y_.insert(sol.y_.end(), y.begin(), y.end());
      hnew = std::min(std::abs(hnew), spec.h_max);
      if (last_rejected) hnew = std::min(hnew, h);
      last_rejected = false;
      h = hnew;
    } else {
      h = h / std::min(facc1, fac11 / safe);
      last_rejected = true;
      ++sol.rejected_;
      if (h < spec.h_min)
        throw StepUnderflow("solve_ivp: step size below h_min at t = " + std::to_string(t));
    }
  }
  return sol;
}

// ---------------------------------------------------------------- roots

double find_root(const ScalarFn& f, double lo, double hi, const RootSpec& spec) {
  spec.validate();
  double a = lo, b = hi;
  double fa = f(a), fb = f(b);
  if (!std::isfinite(fa) || !std::isfinite(fb)) throw NonFinite("find_root: non-finite endpoint value");
  if (fa == 0.0) return a;
  if (fb == 0.0) return b;
  if ((fa > 0) == (fb > 0))
    throw NoBracket("find_root: f(lo) and f(hi) have the same sign");

  double c = b, fc = fb, d = b - a, e = d;
  for (int iter = 0; iter < spec.max_iter; ++iter) {
    if ((fb > 0) == (fc > 0)) { c = a; fc = fa; d = b - a; e = d; }
    if (std::abs(fc) < std::abs(fb)) {
      a = b; b = c; c = a;
      fa = fb; fb = fc; fc = fa;
    }
    const double tol1 = 2.0 * std::numeric_limits<double>::epsilon() * std::abs(b) + 0.5 * spec.x_tol;
    const double xm = 0.5 * (c - b);
    if (std::abs(xm) <= tol1 || fb == 0.0 || std::abs(fb) <= spec.f_tol) return b;
    if (std::abs(e) >= tol1 && std::abs(fa) > std::abs(fb)) {
      double p, q, r;
      const double s = fb / fa;
      if (a == c) {
        p = 2.0 * xm * s;
        q = 1.0 - s;
      } else {
        q = fa / fc;
        r = fb / fc;
        p = s * (2.0 * xm * q * (q - r) - (b - a) * (r - 1.0));
        q = (q - 1.0) * (r - 1.0) * (s - 1.0);
      }
      if (p > 0) q = -q;
      p = std::abs(p);
      if (2.0 * p < std::min(3.0 * xm * q - std::abs(tol1 * q), std::abs(e * q))) {
        e = d;
        d = p / q;
      } else {
        d = xm;
        e = d;
      }
    } else {
      d = xm;
      e = d;
    }
    a = b;
    fa = fb;
    b += std::abs(d) > tol1 ? d : std::copysign(tol1, xm);
    fb = f(b);
    if (!std::isfinite(fb)) throw NonFinite("find_root: non-finite function value");
  }
  throw NonConvergence("find_root: iteration budget exhausted");
}

double golden_section_max(const ScalarFn& f, double lo, double hi, double x_tol) {
  const double g = 0.5 * (std::sqrt(5.0) - 1.0);
  double a = lo, b = hi;
  double x1 = b - g * (b - a), x2 = a + g * (b - a);
  double f1 = f(x1), f2 = f(x2);
  while (b - a > x_tol) {
    if (f1 < f2) {
      a = x1; x1 = x2; f1 = f2;
      x2 = a + g * (b - a);
      f2 = f(x2);
    } else {
      b = x2; x2 = x1; f2 = f1;
      x1 = b - g * (b - a);
      f1 = f(x1);
    }
  }
  return 0.5 * (a + b);
}

} // namespace bnlab
