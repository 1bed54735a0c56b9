#include "nilspace/gowers.hpp"

#include <atomic>
#include <cmath>
#include <cstdlib>
#include <limits>
#include <numeric>
#include <thread>

#include "nilspace/error.hpp"
#include "nilspace/lattice.hpp"

namespace nilspace {

void derivative_scalar(const Complex* a, const Complex* b, const std::uint32_t* idx, Complex* out, std::size_t n);
void derivative_avx2(const Complex* a, const Complex* b, const std::uint32_t* idx, Complex* out, std::size_t n);

FiniteAbelianGroup::FiniteAbelianGroup(std::vector<long> factors) : k_(std::move(factors)) {
  for (std::size_t j = 0; j < k_.size(); ++j) {
    if (k_[j] < 2) fail(ErrorKind::Invalid, "invariant factors must be at least 2");
    if (j > 0 && k_[j] % k_[j - 1] != 0) fail(ErrorKind::Invalid, "invariant factors must divide each other");
    if (size_ > std::numeric_limits<std::uint32_t>::max() / std::size_t(k_[j]))
      fail(ErrorKind::BudgetExceeded, "group too large");
    size_ *= std::size_t(k_[j]);
  }
}

FiniteAbelianGroup FiniteAbelianGroup::from_orders(const std::vector<long>& orders) {
  std::vector<std::vector<Integer>> rows;
  for (std::size_t j = 0; j < orders.size(); ++j) {
    if (orders[j] < 1) fail(ErrorKind::Invalid, "orders must be positive");
    std::vector<Integer> r(orders.size(), 0);
    r[j] = orders[j];
    rows.push_back(r);
  }
  std::vector<long> k;
  for (const auto& f : smith_invariants(rows, orders.size()))
    if (f > 1) k.push_back(f.get_si());
  return FiniteAbelianGroup(k);
}

std::vector<long> FiniteAbelianGroup::coords(std::size_t index) const {
  std::vector<long> x(k_.size());
  for (std::size_t j = 0; j < k_.size(); ++j) x[j] = long(index % std::size_t(k_[j])), index /= std::size_t(k_[j]);
  return x;
}

std::size_t FiniteAbelianGroup::index(const std::vector<long>& x) const {
  if (x.size() != k_.size()) fail(ErrorKind::DimensionMismatch, "element has the wrong rank");
  std::size_t r = 0, stride = 1;
  for (std::size_t j = 0; j < k_.size(); ++j) {
    long c = ((x[j] % k_[j]) + k_[j]) % k_[j];
    r += std::size_t(c) * stride;
    stride *= std::size_t(k_[j]);
  }
  return r;
}

std::size_t FiniteAbelianGroup::add(std::size_t a, std::size_t b) const {
  std::size_t r = 0, stride = 1;
  for (long k : k_) {
    std::size_t m = std::size_t(k);
    std::size_t c = (a % m + b % m) % m;
    r += c * stride;
    stride *= m;
    a /= m, b /= m;
  }
  return r;
}

std::size_t FiniteAbelianGroup::neg(std::size_t a) const {
  std::size_t r = 0, stride = 1;
  for (long k : k_) {
    std::size_t m = std::size_t(k);
    r += ((m - a % m) % m) * stride;
    stride *= m;
    a /= m;
  }
  return r;
}

bool SignalTable::check_bounded() {
  if (values.size() != group.size()) fail(ErrorKind::DimensionMismatch, "signal length differs from group order");
  bounded = true;
  for (const auto& v : values)
    if (std::abs(v) > 1 + 1e-12) bounded = false;
  return bounded;
}

namespace {

std::atomic<Kernel> g_kernel{Kernel::Auto};

Kernel resolve(Kernel k) {
  if (k == Kernel::Auto) return avx2_available() ? Kernel::Avx2 : Kernel::Scalar;
  if (k == Kernel::Avx2 && !avx2_available()) fail(ErrorKind::Unsupported, "AVX2 not available on this CPU");
  return k;
}

}  // namespace

bool avx2_available() {
#if defined(__x86_64__) || defined(__i386__)
  return __builtin_cpu_supports("avx2");
#else
  return false;
#endif
}

Kernel active_kernel() { return resolve(g_kernel.load()); }
void set_kernel(Kernel k) { g_kernel.store(resolve(k)); }

const char* kernel_name(Kernel k) {
  switch (k) {
    case Kernel::Auto: return "auto";
    case Kernel::Scalar: return "scalar";
    case Kernel::Avx2: return "avx2";
  }
  return "?";
}

void derivative_kernel(const Complex* a, const Complex* b, const std::uint32_t* idx, Complex* out, std::size_t n,
                       Kernel k) {
  if (resolve(k) == Kernel::Avx2)
    derivative_avx2(a, b, idx, out, n);
  else
    derivative_scalar(a, b, idx, out, n);
}

Complex pairwise_sum(const Complex* v, std::size_t n) {
  if (n <= 8) {
    Complex s = 0;
    for (std::size_t i = 0; i < n; ++i) s += v[i];
    return s;
  }
  std::size_t h = n / 2;
  return pairwise_sum(v, h) + pairwise_sum(v + h, n - h);
}

unsigned gowers_threads() {
  unsigned hw = std::max(1u, std::thread::hardware_concurrency());
  if (const char* e = std::getenv("NILSPACE_KIT_THREADS")) {
    char* end = nullptr;
    long t = std::strtol(e, &end, 10);
    if (end != e && *end == 0 && t >= 1) return unsigned(std::min<long>(t, 256));
  }
  return hw;
}

namespace {

struct Shifts {
  const FiniteAbelianGroup* g;
  std::vector<std::uint32_t> idx;
  void fill(std::size_t h) {
    idx.resize(g->size());
    for (std::size_t x = 0; x < idx.size(); ++x) idx[x] = std::uint32_t(g->add(x, h));
  }
};

// Sum over h_j..h_{d-1} of |sum_x Delta f|^2, with F the derivative table at depth j.
double nested(const FiniteAbelianGroup& g, const std::vector<Complex>& F, int remaining, Kernel k,
              std::vector<std::vector<Complex>>& scratch, Shifts& sh) {
  std::size_t n = g.size();
  if (remaining == 0) return std::norm(pairwise_sum(F.data(), n));
  auto& next = scratch[remaining - 1];
  next.resize(n);
  std::vector<double> parts(n);
  for (std::size_t h = 0; h < n; ++h) {
    sh.fill(h);
    derivative_kernel(F.data(), F.data(), sh.idx.data(), next.data(), n, k);
    parts[h] = nested(g, next, remaining - 1, k, scratch, sh);
  }
  double s = 0, c = 0;
  for (double p : parts) {
    double y = p - c, t = s + y;
    c = (t - s) - y;
    s = t;
  }
  return s;
}

}  // namespace

double gowers_power(const SignalTable& f, int d, Budget& budget) {
  if (d < 1) fail(ErrorKind::Invalid, "d must be positive");
  std::size_t n = f.group.size();
  if (f.values.size() != n) fail(ErrorKind::DimensionMismatch, "signal length differs from group order");
  double cost = std::pow(double(n), d + 1);
  if (cost > double(budget.limit - budget.used))
    fail(ErrorKind::BudgetExceeded, "gowers cost " + std::to_string(n) + "^" + std::to_string(d + 1) +
                                        " exceeds the budget");
  budget.charge(std::uint64_t(cost));
  Kernel k = active_kernel();

  // ||f||^{2^d} = E_{h_1..h_{d-1}} |E_x Delta_{h_1..h_{d-1}} f(x)|^2, with Delta_h F(x) = F(x) conj F(x+h).
  double total;
  if (d == 1) {
    total = std::norm(pairwise_sum(f.values.data(), n));
  } else {
    std::vector<double> outer(n);
    unsigned threads = std::min<unsigned>(gowers_threads(), unsigned(n));
    auto work = [&](unsigned t) {
      Shifts sh{&f.group, {}};
      std::vector<std::vector<Complex>> scratch(static_cast<std::size_t>(d));
      std::vector<Complex> first(n);
      for (std::size_t h = t; h < n; h += threads) {
        sh.fill(h);
        derivative_kernel(f.values.data(), f.values.data(), sh.idx.data(), first.data(), n, k);
        outer[h] = nested(f.group, first, d - 2, k, scratch, sh);
      }
    };
    if (threads <= 1) {
      work(0);
    } else {
      std::vector<std::thread> pool;
      for (unsigned t = 0; t < threads; ++t) pool.emplace_back(work, t);
      for (auto& th : pool) th.join();
    }
    double s = 0, c = 0;
    for (double p : outer) {
      double y = p - c, t = s + y;
      c = (t - s) - y;
      s = t;
    }
    total = s;
  }
  // 2 factors of 1/n from the squared inner mean, one per outer shift.
  double norm = total / std::pow(double(n), d + 1);
  return norm < 0 ? 0 : norm;
}

double gowers_norm(const SignalTable& f, int d, Budget& budget) {
  return std::pow(gowers_power(f, d, budget), 1.0 / double(1u << d));
}

std::size_t NaturalSurjection::apply(const std::vector<Integer>& z) const {
  const auto& k = group.factors();
  if (z.size() != k.size()) fail(ErrorKind::DimensionMismatch, "lattice point has the wrong rank");
  std::vector<long> x(k.size());
  for (std::size_t j = 0; j < k.size(); ++j) {
    Integer r = z[j] % k[j];
    if (r < 0) r += k[j];
    x[j] = r.get_si();
  }
  return group.index(x);
}

NaturalSurjection natural_surjection(const FiniteAbelianGroup& ab) {
  NaturalSurjection s{ab, {}};
  s.domain.reserve(ab.size());
  for (std::size_t i = 0; i < ab.size(); ++i) s.domain.push_back(ab.coords(i));
  return s;
}

namespace {

Complex unit(const Rational& t) {
  Rational f = frac(t);
  double a = 2 * M_PI * f.get_d();
  return Complex(std::cos(a), std::sin(a));
}

}  // namespace

Window constant_window(Complex c) {
  return [c](const Point&) { return c; };
}

Window phase_window(std::vector<Rational> coeffs) {
  return [coeffs = std::move(coeffs)](const Point& t) {
    if (t.size() != coeffs.size()) fail(ErrorKind::DimensionMismatch, "window arity differs from the point");
    Rational s = 0;
    for (std::size_t i = 0; i < t.size(); ++i) s += coeffs[i] * t[i];
    return unit(s);
  };
}

Window table_window(std::map<Point, Complex> table) {
  return [table = std::move(table)](const Point& t) {
    auto it = table.find(t);
    if (it == table.end()) fail(ErrorKind::Invalid, "window table has no entry for " + point_to_string(t));
    return it->second;
  };
}

Nilcharacter::Nilcharacter(int n, const Signature& target, std::vector<PolyMorphism> components,
                           CongruenceCandidate gamma, Window window, Budget& budget)
    : target_(target), g_(std::move(components)), gamma_(std::move(gamma)), window_(std::move(window)) {
  if (n < 1) fail(ErrorKind::Invalid, "lattice rank must be positive");
  source_ = Signature::free(1, {n}, {0});
  if (!target_.is_free()) fail(ErrorKind::Invalid, "nilcharacter target must be a free nilspace");
  if (static_cast<int>(g_.size()) != target_.k) fail(ErrorKind::DimensionMismatch, "one component per degree");
  for (int i = 1; i <= target_.k; ++i) {
    auto& c = g_[i - 1];
    if (!(c.source == source_) || c.degree != i || c.target != target_.kinds_of_degree(i))
      fail(ErrorKind::DimensionMismatch, "component " + std::to_string(i) + " has the wrong shape");
    if (auto why = morphism_violation(c)) fail(ErrorKind::NotMorphism, *why);
  }
  if (!(gamma_.base == target_)) fail(ErrorKind::DimensionMismatch, "lattice action on another space");
  if (auto why = candidate_violation(gamma_)) fail(ErrorKind::Invalid, *why);
  if (!is_free_fiber_transitive(gamma_, budget))
    fail(ErrorKind::Invalid, "lattice action is not free fiber-transitive");
  group_ = std::make_shared<PolycyclicTranslationGroup>(target_, gamma_.generators, gamma_.divisible, budget);
}

Point Nilcharacter::map(const Point& x) const {
  if (x.size() != source_.dim()) fail(ErrorKind::DimensionMismatch, "point has the wrong rank");
  Point y(target_.dim());
  for (int i = 1; i <= target_.k; ++i) {
    auto slots = target_.slots_of_degree(i);
    Element v = g_[i - 1].eval(x);
    for (std::size_t j = 0; j < slots.size(); ++j) y[slots[j]] = v[j];
  }
  return y;
}

Point Nilcharacter::representative(const Point& x) const { return group_->representative(map(x)); }

Complex Nilcharacter::eval(const Point& x) const { return window_(representative(x)); }

void Nilcharacter::declare_lipschitz(double L, std::vector<Point> points, std::vector<std::vector<double>> metric) {
  if (metric.size() != points.size()) fail(ErrorKind::DimensionMismatch, "metric table size");
  for (const auto& row : metric)
    if (row.size() != points.size()) fail(ErrorKind::DimensionMismatch, "metric table size");
  lipschitz_ = L;
  metric_points_ = std::move(points);
  metric_ = std::move(metric);
}

std::optional<std::string> Nilcharacter::lipschitz_violation() const {
  std::vector<Complex> w;
  for (const auto& p : metric_points_) w.push_back(window_(p));
  for (std::size_t a = 0; a < w.size(); ++a)
    for (std::size_t b = 0; b < w.size(); ++b)
      if (std::abs(w[a] - w[b]) > lipschitz_ * metric_[a][b] + 1e-12)
        return "window jumps by " + std::to_string(std::abs(w[a] - w[b])) + " between " +
               point_to_string(metric_points_[a]) + " and " + point_to_string(metric_points_[b]);
  return std::nullopt;
}

Complex nilcharacter_eval(const Nilcharacter& chi, const std::vector<long>& x) {
  Point p;
  for (long v : x) p.emplace_back(v);
  return chi.eval(p);
}

double correlation(const SignalTable& f, const Nilcharacter& chi, const NaturalSurjection& s) {
  if (!(f.group == s.group)) fail(ErrorKind::DimensionMismatch, "signal and surjection on different groups");
  if (chi.source().dim() != s.group.rank()) fail(ErrorKind::DimensionMismatch, "nilcharacter rank differs");
  std::vector<Complex> terms(s.domain.size());
  for (std::size_t i = 0; i < s.domain.size(); ++i)
    terms[i] = f.values[i] * std::conj(nilcharacter_eval(chi, s.domain[i]));
  return std::abs(pairwise_sum(terms.data(), terms.size())) / double(terms.size());
}

SignalTable quadratic_phase(long N, long a) {
  SignalTable f{FiniteAbelianGroup({N}), {}, false};
  for (long x = 0; x < N; ++x) f.values.push_back(unit(Rational(a * ((x * x) % N), N)));
  f.check_bounded();
  return f;
}

Nilcharacter quadratic_nilcharacter(long N, long a, Budget& budget) {
  Signature F = Signature::free(2, {0, 0}, {0, 1});
  Signature src = Signature::free(1, {1}, {0});
  Rational c(a, N);
  // x^2 = 2 binom(x,2) + x
  PolyMorphism g1 = zero_morphism(src, F.kinds_of_degree(1), 1);
  PolyMorphism g2 = zero_morphism(src, F.kinds_of_degree(2), 2);
  g2.coeffs[{1}] = {c};
  g2.coeffs[{2}] = {2 * c};
  g2.normalize();
  CongruenceCandidate gamma{F, {shift_translation(F, 2, {Rational(1)})}, {}, {}};
  return Nilcharacter(1, F, {g1, g2}, gamma, phase_window({Rational(1)}), budget);
}

}  // namespace nilspace

namespace nilspace {

void derivative_scalar(const Complex* a, const Complex* b, const std::uint32_t* idx, Complex* out, std::size_t n) {
  for (std::size_t x = 0; x < n; ++x) {
    double ar = a[x].real(), ai = a[x].imag();
    double br = b[idx[x]].real(), bi = b[idx[x]].imag();
    double re = ar * br + ai * bi;
    double im = ai * br - ar * bi;
    out[x] = Complex(re, im);
  }
}

}  // namespace nilspace
