#include "maxlat/grid_fft.hpp"

#include <mutex>

#include <fftw3.h>

#include "maxlat/errors.hpp"

namespace maxlat {
namespace {

// FFTW planning is not thread-safe; execution of distinct plans is.
std::mutex& planner_mutex() {
  static std::mutex m;
  return m;
}

void run(std::vector<std::complex<double>>& data, int n, int sign) {
  const std::size_t expected = static_cast<std::size_t>(n) * n * n;
  if (n <= 0 || data.size() != expected) {
    throw ShapeError("fft3: expected " + std::to_string(expected) + " samples, got " +
                     std::to_string(data.size()));
  }
  auto* buf = reinterpret_cast<fftw_complex*>(data.data());
  fftw_plan plan;
  {
    std::lock_guard lock(planner_mutex());
    plan = fftw_plan_dft_3d(n, n, n, buf, buf, sign, FFTW_ESTIMATE);
  }
  if (plan == nullptr) throw InternalError("fftw plan creation failed");
  fftw_execute(plan);
  std::lock_guard lock(planner_mutex());
  fftw_destroy_plan(plan);
}

}  // namespace

void fft3_forward(std::vector<std::complex<double>>& data, int n) { run(data, n, FFTW_FORWARD); }
void fft3_backward(std::vector<std::complex<double>>& data, int n) {
  run(data, n, FFTW_BACKWARD);
}

}  // namespace maxlat
