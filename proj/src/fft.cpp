#include "subgauss/fft.hpp"

#include <fftw3.h>

#include <algorithm>
#include <cstring>
#include <memory>
#include <mutex>

namespace subgauss::fft {

namespace {

// FFTW planning is not thread-safe; execution of distinct plans is.
std::mutex& planner_mutex() {
  static std::mutex m;
  return m;
}

struct FftwFree {
  void operator()(void* p) const noexcept { fftw_free(p); }
};

std::vector<cplx> transform(std::span<const cplx> in, int sign) {
  const std::size_t n = in.size();
  if (n == 0) return {};
  std::unique_ptr<fftw_complex, FftwFree> buf(
      static_cast<fftw_complex*>(fftw_malloc(sizeof(fftw_complex) * n)));
  if (!buf) throw std::bad_alloc();
  fftw_plan plan;
  {
    std::lock_guard lock(planner_mutex());
    plan = fftw_plan_dft_1d(static_cast<int>(n), buf.get(), buf.get(), sign, FFTW_ESTIMATE);
  }
  std::memcpy(buf.get(), in.data(), sizeof(fftw_complex) * n);
  fftw_execute(plan);
  std::vector<cplx> out(n);
  std::memcpy(static_cast<void*>(out.data()), buf.get(), sizeof(fftw_complex) * n);
  {
    std::lock_guard lock(planner_mutex());
    fftw_destroy_plan(plan);
  }
  return out;
}

}  // namespace

std::vector<cplx> forward(std::span<const cplx> in) { return transform(in, FFTW_FORWARD); }
std::vector<cplx> backward(std::span<const cplx> in) { return transform(in, FFTW_BACKWARD); }

std::size_t next_pow2(std::size_t n) noexcept {
  std::size_t p = 1;
  while (p < n) p <<= 1;
  return p;
}

std::vector<double> convolve(std::span<const double> a, std::span<const double> b) {
  if (a.empty() || b.empty()) return {};
  const std::size_t out_len = a.size() + b.size() - 1;
  const std::size_t m = next_pow2(out_len);
  // Pack both real inputs into one complex transform: z = a + i b.
  std::vector<cplx> z(m);
  for (std::size_t i = 0; i < a.size(); ++i) z[i].real(a[i]);
  for (std::size_t i = 0; i < b.size(); ++i) z[i].imag(b[i]);
  const auto Z = forward(z);
  std::vector<cplx> prod(m);
  for (std::size_t k = 0; k < m; ++k) {
    const cplx zk = Z[k];
    const cplx zc = std::conj(Z[(m - k) % m]);
    const cplx A = 0.5 * (zk + zc);
    const cplx B = cplx(0.0, -0.5) * (zk - zc);
    prod[k] = A * B;
  }
  const auto c = backward(prod);
  std::vector<double> out(out_len);
  const double scale = 1.0 / static_cast<double>(m);
  for (std::size_t i = 0; i < out_len; ++i) out[i] = c[i].real() * scale;
  return out;
}

const char* backend_version() noexcept { return fftw_version; }

}  // namespace subgauss::fft
