#include "dir/fft.hpp"

#include <fftw3.h>

#include <mutex>

namespace dir::fftu {

namespace {

// FFTW plan creation is not thread-safe; execution of distinct plans is.
std::mutex g_plan_mutex;

CMat transform(const CMat& in, int sign) {
  CMat out(in.rows, in.cols);
  CMat buf = in; // FFTW may clobber the input of c2c transforms
  fftw_plan plan;
  {
    std::lock_guard<std::mutex> lock(g_plan_mutex);
    plan = fftw_plan_dft_2d(in.rows, in.cols,
                            reinterpret_cast<fftw_complex*>(buf.data.data()),
                            reinterpret_cast<fftw_complex*>(out.data.data()),
                            sign, FFTW_ESTIMATE);
  }
  fftw_execute(plan);
  {
    std::lock_guard<std::mutex> lock(g_plan_mutex);
    fftw_destroy_plan(plan);
  }
  return out;
}

} // namespace

int good_size(int n) {
  if (n <= 1) return 1;
  for (int s = n;; ++s) {
    int r = s;
    while (r % 2 == 0) r /= 2;
    while (r % 3 == 0) r /= 3;
    while (r % 5 == 0) r /= 5;
    if (r == 1) return s;
  }
}

CMat fft2(const CMat& in) { return transform(in, FFTW_FORWARD); }

CMat ifft2(const CMat& in) {
  CMat out = transform(in, FFTW_BACKWARD);
  const double scale = 1.0 / (static_cast<double>(in.rows) * in.cols);
  for (auto& z : out.data) z *= scale;
  return out;
}

} // namespace dir::fftu
