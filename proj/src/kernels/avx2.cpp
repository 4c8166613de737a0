#include "dpforest/kernels/kernels.hpp"

#if defined(__x86_64__) || defined(__i386__)
#define DPFOREST_HAVE_AVX2_KERNELS 1
#include <immintrin.h>
#endif

namespace dpforest::kernels {

#if DPFOREST_HAVE_AVX2_KERNELS

namespace {

// Only raw pointers and intrinsics in this file: anything templated from the
// standard library could be instantiated with AVX2 encodings and then shared
// with scalar callers by the linker.

#define DPF_AVX2 __attribute__((target("avx2")))

DPF_AVX2 inline double reduce_lanes(__m256d v) {
  alignas(32) double lane[4];
  _mm256_store_pd(lane, v);
  return (lane[0] + lane[1]) + (lane[2] + lane[3]);
}

DPF_AVX2 inline __m256d widen_mask(__m128i m32) {
  return _mm256_castsi256_pd(_mm256_cvtepi32_epi64(m32));
}

DPF_AVX2 SplitStats split_stats_avx2(const NodeId* ids, NodeId a, NodeId b, const double* x,
                                     double cut, const double* r, std::size_t n) {
  const __m128i va = _mm_set1_epi32(a);
  const __m128i vb = _mm_set1_epi32(b);
  const __m256d vcut = _mm256_set1_pd(cut);
  __m256d left = _mm256_setzero_pd();
  __m256d right = _mm256_setzero_pd();
  std::size_t n_left = 0;
  std::size_t n_right = 0;
  const std::size_t n4 = n - n % 4;
  for (std::size_t i = 0; i < n4; i += 4) {
    const __m128i id = _mm_loadu_si128(reinterpret_cast<const __m128i*>(ids + i));
    const __m128i in32 = _mm_or_si128(_mm_cmpeq_epi32(id, va), _mm_cmpeq_epi32(id, vb));
    const __m256d in = widen_mask(in32);
    const __m256d le = _mm256_cmp_pd(_mm256_loadu_pd(x + i), vcut, _CMP_LE_OQ);
    const __m256d mask_l = _mm256_and_pd(in, le);
    const __m256d mask_r = _mm256_andnot_pd(le, in);
    const __m256d rv = _mm256_loadu_pd(r + i);
    left = _mm256_add_pd(left, _mm256_and_pd(rv, mask_l));
    right = _mm256_add_pd(right, _mm256_and_pd(rv, mask_r));
    n_left += static_cast<std::size_t>(__builtin_popcount(static_cast<unsigned>(_mm256_movemask_pd(mask_l))));
    n_right += static_cast<std::size_t>(__builtin_popcount(static_cast<unsigned>(_mm256_movemask_pd(mask_r))));
  }
  SplitStats out;
  out.sum_left = reduce_lanes(left);
  out.sum_right = reduce_lanes(right);
  out.n_left = n_left;
  out.n_right = n_right;
  for (std::size_t i = n4; i < n; ++i) {
    if (ids[i] != a && ids[i] != b) continue;
    if (x[i] <= cut) {
      out.sum_left += r[i];
      ++out.n_left;
    } else {
      out.sum_right += r[i];
      ++out.n_right;
    }
  }
  return out;
}

DPF_AVX2 LeafStats leaf_stats_avx2(const NodeId* ids, NodeId leaf, const double* r, std::size_t n) {
  const __m128i vl = _mm_set1_epi32(leaf);
  __m256d acc = _mm256_setzero_pd();
  std::size_t count = 0;
  const std::size_t n4 = n - n % 4;
  for (std::size_t i = 0; i < n4; i += 4) {
    const __m128i id = _mm_loadu_si128(reinterpret_cast<const __m128i*>(ids + i));
    const __m256d in = widen_mask(_mm_cmpeq_epi32(id, vl));
    acc = _mm256_add_pd(acc, _mm256_and_pd(_mm256_loadu_pd(r + i), in));
    count += static_cast<std::size_t>(__builtin_popcount(static_cast<unsigned>(_mm256_movemask_pd(in))));
  }
  LeafStats out;
  out.sum = reduce_lanes(acc);
  out.n = count;
  for (std::size_t i = n4; i < n; ++i) {
    if (ids[i] == leaf) {
      out.sum += r[i];
      ++out.n;
    }
  }
  return out;
}

DPF_AVX2 void partial_residual_avx2(const double* y, const double* total, const double* fit,
                                    double* out, std::size_t n) {
  const std::size_t n4 = n - n % 4;
  for (std::size_t i = 0; i < n4; i += 4) {
    const __m256d d = _mm256_sub_pd(_mm256_loadu_pd(y + i), _mm256_loadu_pd(total + i));
    _mm256_storeu_pd(out + i, _mm256_add_pd(d, _mm256_loadu_pd(fit + i)));
  }
  for (std::size_t i = n4; i < n; ++i) out[i] = (y[i] - total[i]) + fit[i];
}

DPF_AVX2 void apply_delta_avx2(double* total, const double* old_fit, const double* new_fit,
                               std::size_t n) {
  const std::size_t n4 = n - n % 4;
  for (std::size_t i = 0; i < n4; i += 4) {
    const __m256d d = _mm256_sub_pd(_mm256_loadu_pd(total + i), _mm256_loadu_pd(old_fit + i));
    _mm256_storeu_pd(total + i, _mm256_add_pd(d, _mm256_loadu_pd(new_fit + i)));
  }
  for (std::size_t i = n4; i < n; ++i) total[i] = (total[i] - old_fit[i]) + new_fit[i];
}

DPF_AVX2 double sum_squared_diff_avx2(const double* a, const double* b, std::size_t n) {
  __m256d acc = _mm256_setzero_pd();
  const std::size_t n4 = n - n % 4;
  for (std::size_t i = 0; i < n4; i += 4) {
    const __m256d d = _mm256_sub_pd(_mm256_loadu_pd(a + i), _mm256_loadu_pd(b + i));
    acc = _mm256_add_pd(acc, _mm256_mul_pd(d, d));
  }
  double total = reduce_lanes(acc);
  for (std::size_t i = n4; i < n; ++i) {
    const double d = a[i] - b[i];
    total += d * d;
  }
  return total;
}

DPF_AVX2 void gather_avx2(const double* values, const NodeId* idx, double* out, std::size_t n) {
  const std::size_t n4 = n - n % 4;
  for (std::size_t i = 0; i < n4; i += 4) {
    const __m128i id = _mm_loadu_si128(reinterpret_cast<const __m128i*>(idx + i));
    _mm256_storeu_pd(out + i, _mm256_i32gather_pd(values, id, 8));
  }
  for (std::size_t i = n4; i < n; ++i) out[i] = values[idx[i]];
}

#undef DPF_AVX2

constexpr KernelTable kAvx2{
    "avx2",         split_stats_avx2,      leaf_stats_avx2, partial_residual_avx2,
    apply_delta_avx2, sum_squared_diff_avx2, gather_avx2,
};

}  // namespace

const KernelTable* avx2_table() {
  static const bool supported = __builtin_cpu_supports("avx2");
  return supported ? &kAvx2 : nullptr;
}

#else

const KernelTable* avx2_table() { return nullptr; }

#endif

}  // namespace dpforest::kernels
