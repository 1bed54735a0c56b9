#include <immintrin.h>

#include <complex>
#include <cstddef>
#include <cstdint>

namespace nilspace {

using Complex = std::complex<double>;

// Two complex values per register as (re0, im0, re1, im1).
void derivative_avx2(const Complex* a, const Complex* b, const std::uint32_t* idx, Complex* out, std::size_t n) {
  const double* pa = reinterpret_cast<const double*>(a);
  const double* pb = reinterpret_cast<const double*>(b);
  double* po = reinterpret_cast<double*>(out);
  std::size_t x = 0;
  for (; x + 2 <= n; x += 2) {
    __m256d va = _mm256_loadu_pd(pa + 2 * x);
    __m128d b0 = _mm_loadu_pd(pb + 2 * std::size_t(idx[x]));
    __m128d b1 = _mm_loadu_pd(pb + 2 * std::size_t(idx[x + 1]));
    __m256d vb = _mm256_insertf128_pd(_mm256_castpd128_pd256(b0), b1, 1);
    __m256d bswap = _mm256_permute_pd(vb, 0b0101);         // (bi, br)
    __m256d p = _mm256_mul_pd(va, vb);                      // (ar br, ai bi)
    __m256d q = _mm256_mul_pd(va, bswap);                   // (ar bi, ai br)
    __m256d re = _mm256_add_pd(p, _mm256_permute_pd(p, 0b0101));  // ar br + ai bi in both lanes
    __m256d im = _mm256_sub_pd(_mm256_permute_pd(q, 0b0101), q);  // ai br - ar bi in lane 0
    __m256d r = _mm256_blend_pd(re, _mm256_permute_pd(im, 0b0000), 0b1010);
    _mm256_storeu_pd(po + 2 * x, r);
  }
  for (; x < n; ++x) {
    double ar = a[x].real(), ai = a[x].imag();
    double br = b[idx[x]].real(), bi = b[idx[x]].imag();
    out[x] = Complex(ar * br + ai * bi, ai * br - ar * bi);
  }
}

}  // namespace nilspace
