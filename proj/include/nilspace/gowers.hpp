#pragma once

#include <complex>
#include <functional>
#include <map>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "nilspace/congruence.hpp"
#include "nilspace/poly.hpp"

namespace nilspace {

using Complex = std::complex<double>;

// prod_j Z/k_j Z with k_1 | k_2 | ... | k_n; element index is first factor fastest.
class FiniteAbelianGroup {
 public:
  FiniteAbelianGroup() = default;
  explicit FiniteAbelianGroup(std::vector<long> factors);
  // Invariant factors of prod_j Z/m_j Z for arbitrary orders m_j.
  static FiniteAbelianGroup from_orders(const std::vector<long>& orders);

  const std::vector<long>& factors() const { return k_; }
  std::size_t rank() const { return k_.size(); }
  std::size_t size() const { return size_; }
  std::vector<long> coords(std::size_t index) const;
  std::size_t index(const std::vector<long>& x) const;  // reduces x
  std::size_t add(std::size_t a, std::size_t b) const;
  std::size_t neg(std::size_t a) const;
  bool operator==(const FiniteAbelianGroup& o) const { return k_ == o.k_; }

 private:
  std::vector<long> k_;
  std::size_t size_ = 1;
};

struct SignalTable {
  FiniteAbelianGroup group;
  std::vector<Complex> values;
  bool bounded = false;
  // Sets the bounded flag if |f| <= 1 + 1e-12 everywhere.
  bool check_bounded();
};

enum class Kernel { Auto, Scalar, Avx2 };
// The kernel in use after resolving Auto against the CPU.
Kernel active_kernel();
void set_kernel(Kernel k);
bool avx2_available();
const char* kernel_name(Kernel k);

// out[x] = a[x] * conj(b[idx[x]]).
void derivative_kernel(const Complex* a, const Complex* b, const std::uint32_t* idx, Complex* out, std::size_t n,
                       Kernel k);

// Index-ascending pairwise sum.
Complex pairwise_sum(const Complex* v, std::size_t n);

// (E_{x,h_1..h_d} prod_w C^{|w|} f(x + w.h))^(1/2^d), through nested multiplicative derivatives.
double gowers_norm(const SignalTable& f, int d, Budget& budget);
// The 2^d-th power, before the root.
double gowers_power(const SignalTable& f, int d, Budget& budget);
// Worker threads for the outer average: NILSPACE_KIT_THREADS if set, else the hardware count.
unsigned gowers_threads();

struct NaturalSurjection {
  FiniteAbelianGroup group;
  // D = prod_j [0, k_j), listed in group index order.
  std::vector<std::vector<long>> domain;
  std::size_t apply(const std::vector<Integer>& z) const;
};
NaturalSurjection natural_surjection(const FiniteAbelianGroup& ab);

using Window = std::function<Complex(const Point&)>;
Window constant_window(Complex c);
// t -> e(sum_s c_s t_s) on quotient representatives.
Window phase_window(std::vector<Rational> coeffs);
Window table_window(std::map<Point, Complex> table);

// chi(x) = window(rep of pi_Gamma(g(x))) with g : D_1(Z^n) -> F a polynomial map.
class Nilcharacter {
 public:
  // components[i-1] : D_1(Z^n) -> D_i(A_i) for each degree i of F.
  Nilcharacter(int n, const Signature& target, std::vector<PolyMorphism> components, CongruenceCandidate gamma,
               Window window, Budget& budget);
  const Signature& source() const { return source_; }
  const Signature& target() const { return target_; }
  Point map(const Point& x) const;
  Point representative(const Point& x) const;
  Complex eval(const Point& x) const;

  // Optional Lipschitz declaration: |w(a) - w(b)| <= L d(a, b) on tabulated representatives.
  void declare_lipschitz(double L, std::vector<Point> points, std::vector<std::vector<double>> metric);
  std::optional<std::string> lipschitz_violation() const;

 private:
  Signature source_, target_;
  std::vector<PolyMorphism> g_;
  CongruenceCandidate gamma_;
  std::shared_ptr<PolycyclicTranslationGroup> group_;
  Window window_;
  double lipschitz_ = 0;
  std::vector<Point> metric_points_;
  std::vector<std::vector<double>> metric_;
};

Complex nilcharacter_eval(const Nilcharacter& chi, const std::vector<long>& x);
// |E_{x in D} f(x) conj(chi(x))|
double correlation(const SignalTable& f, const Nilcharacter& chi, const NaturalSurjection& s);

// e(a x^2 / N) on Z_N.
SignalTable quadratic_phase(long N, long a);
// The matching nilcharacter: g(x) = (a/N) x^2 into D_2(Q) modulo integer shifts, window e(t).
Nilcharacter quadratic_nilcharacter(long N, long a, Budget& budget);

}  // namespace nilspace
