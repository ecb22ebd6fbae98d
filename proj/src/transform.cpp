#include "dir/transform.hpp"

#include "dir/fft.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>
#include <thread>

namespace dir {

const CMat& MomentField::channel(int n, int m, int w) const {
  for (size_t i = 0; i < keys.size(); ++i) {
    if (keys[i] == ChannelKey{n, m, w}) return channels[i];
  }
  std::ostringstream msg;
  msg << "missing channel (n=" << n << ", m=" << m << ", w=" << w << ")";
  throw std::invalid_argument(msg.str());
}

Cpx moments_at(const GrayImage& image, const Kernel& kernel, int u, int v) {
  const int w = kernel.w;
  if (u - w < 0 || v - w < 0 || u + w > image.width || v + w > image.height) {
    throw std::domain_error("moments_at: frame disk outside image bounds");
  }
  Cpx acc = 0.0;
  for (int b = 0; b < 2 * w; ++b) {
    const int y = v - w + b;
    const double* row = &image.samples[static_cast<size_t>(y) * image.width];
    for (int a = 0; a < 2 * w; ++a) {
      const Cpx h = kernel.grid(b, a);
      if (h == Cpx{0.0, 0.0}) continue;
      acc += h * row[u - w + a];
    }
  }
  return acc;
}

Cpx moments_at(const GrayImage& image, BasisKind kind, int n, int m, const LocalFrame& frame,
               IntegrationStrategy strategy) {
  const int u = static_cast<int>(std::lround(frame.u));
  const int v = static_cast<int>(std::lround(frame.v));
  const int w = static_cast<int>(std::lround(frame.w));
  if (std::abs(frame.u - u) > 1e-9 || std::abs(frame.v - v) > 1e-9 ||
      std::abs(frame.w - w) > 1e-9) {
    throw std::invalid_argument("moments_at: dense frames use integer (u, v, w)");
  }
  const Kernel kernel = make_kernel(kind, n, m, w, strategy);
  return moments_at(image, kernel, u, v);
}

CMat dense_spatial(const GrayImage& image, const Kernel& kernel) {
  const int w = kernel.w;
  const int M = image.width, N = image.height;
  if (M < 2 * w || N < 2 * w) {
    throw std::invalid_argument("dense_spatial: image smaller than kernel");
  }

  struct Tap {
    int da, db;
    double re, im;
  };
  std::vector<Tap> taps;
  taps.reserve(static_cast<size_t>(4) * w * w);
  for (int b = 0; b < 2 * w; ++b) {
    for (int a = 0; a < 2 * w; ++a) {
      const Cpx h = kernel.grid(b, a);
      if (h == Cpx{0.0, 0.0}) continue;
      taps.push_back({a - w, b - w, h.real(), h.imag()});
    }
  }

  // Tap-major accumulation over each output row: the inner loop is a pair of
  // contiguous multiply-adds, which is what keeps the w^2 path tolerable.
  std::vector<double> out_re(static_cast<size_t>(M) * N, 0.0);
  std::vector<double> out_im(static_cast<size_t>(M) * N, 0.0);
  for (int v = 0; v < N; ++v) {
    double* orow = &out_re[static_cast<size_t>(v) * M];
    double* irow = &out_im[static_cast<size_t>(v) * M];
    for (const Tap& t : taps) {
      const int y = v + t.db;
      if (y < 0 || y >= N) continue;
      const double* src = &image.samples[static_cast<size_t>(y) * M];
      const int u0 = t.da < 0 ? -t.da : 0;
      const int u1 = t.da > 0 ? M - t.da : M;
      const double cre = t.re, cim = t.im;
      for (int u = u0; u < u1; ++u) {
        const double p = src[u + t.da];
        orow[u] += cre * p;
        irow[u] += cim * p;
      }
    }
  }

  CMat out(N, M);
  for (size_t i = 0; i < out.data.size(); ++i) out.data[i] = {out_re[i], out_im[i]};
  return out;
}

CMat dense_fft(const GrayImage& image, const CMat& spectrum, int w) {
  const int M = image.width, N = image.height;
  if (spectrum.cols < M + 2 * w || spectrum.rows < N + 2 * w) {
    std::ostringstream msg;
    msg << "dense_fft: spectrum " << spectrum.cols << "x" << spectrum.rows
        << " smaller than padded image " << (M + 2 * w) << "x" << (N + 2 * w);
    throw std::invalid_argument(msg.str());
  }
  CMat padded(spectrum.rows, spectrum.cols);
  for (int y = 0; y < N; ++y) {
    for (int x = 0; x < M; ++x) padded(y, x) = image.at(x, y);
  }
  CMat img_spec = fftu::fft2(padded);
  for (size_t i = 0; i < img_spec.data.size(); ++i) img_spec.data[i] *= spectrum.data[i];
  const CMat full = fftu::ifft2(img_spec);

  CMat out(N, M);
  for (int y = 0; y < N; ++y) {
    for (int x = 0; x < M; ++x) out(y, x) = full(y, x);
  }
  return out;
}

namespace {

// Shared forward transform of the zero-padded image for the FFT path.
CMat padded_image_spectrum(const GrayImage& image, int cols, int rows) {
  CMat padded(rows, cols);
  for (int y = 0; y < image.height; ++y) {
    for (int x = 0; x < image.width; ++x) padded(y, x) = image.at(x, y);
  }
  return fftu::fft2(padded);
}

CMat product_inverse_crop(const CMat& img_spec, const CMat& kernel_spec, int M, int N) {
  CMat prod(img_spec.rows, img_spec.cols);
  for (size_t i = 0; i < prod.data.size(); ++i) {
    prod.data[i] = img_spec.data[i] * kernel_spec.data[i];
  }
  const CMat full = fftu::ifft2(prod);
  CMat out(N, M);
  for (int y = 0; y < N; ++y) {
    for (int x = 0; x < M; ++x) out(y, x) = full(y, x);
  }
  return out;
}

} // namespace

MomentField decompose(const GrayImage& image, BasisKind kind, const OrderSet& orders,
                      const std::vector<int>& scales, IntegrationStrategy strategy,
                      DensePath path, const KernelBank* bank, int threads) {
  if (scales.empty()) throw std::invalid_argument("decompose: empty scale list");
  const int max_w = *std::max_element(scales.begin(), scales.end());
  if (2 * max_w > std::min(image.width, image.height)) {
    throw std::invalid_argument("decompose: max scale exceeds half the image size");
  }

  MomentField field;
  field.width = image.width;
  field.height = image.height;
  field.kind = kind;
  for (const OrderPair& pair : orders.pairs) {
    for (int w : scales) field.keys.push_back({pair.n, pair.m, w});
  }
  field.channels.resize(field.keys.size());

  int spec_cols = 0, spec_rows = 0;
  CMat img_spec;
  if (path == DensePath::Fft) {
    if (bank != nullptr) {
      spec_cols = bank->spec_cols;
      spec_rows = bank->spec_rows;
      if (spec_cols < image.width + 2 * max_w || spec_rows < image.height + 2 * max_w) {
        throw std::invalid_argument("decompose: bank spectra too small for this image");
      }
    } else {
      spec_cols = fftu::good_size(image.width + 2 * max_w);
      spec_rows = fftu::good_size(image.height + 2 * max_w);
    }
    img_spec = padded_image_spectrum(image, spec_cols, spec_rows);
  }

  auto compute_channel = [&](size_t ci) {
    const ChannelKey& key = field.keys[ci];
    if (path == DensePath::Spatial) {
      const Kernel kernel = make_kernel(kind, key.n, key.m, key.w, strategy);
      field.channels[ci] = dense_spatial(image, kernel);
      return;
    }
    if (bank != nullptr) {
      const CMat* spec = bank->find(key.n, key.m, key.w);
      if (spec == nullptr) {
        std::ostringstream msg;
        msg << "decompose: bank missing spectrum (n=" << key.n << ", m=" << key.m
            << ", w=" << key.w << ")";
        throw std::invalid_argument(msg.str());
      }
      field.channels[ci] = product_inverse_crop(img_spec, *spec, image.width, image.height);
    } else {
      const Kernel kernel = make_kernel(kind, key.n, key.m, key.w, strategy);
      const CMat spec = kernel_spectrum(kernel, spec_cols, spec_rows);
      field.channels[ci] = product_inverse_crop(img_spec, spec, image.width, image.height);
    }
  };

  const size_t n_channels = field.keys.size();
  const int nthreads = std::max(1, std::min<int>(threads, static_cast<int>(n_channels)));
  if (nthreads == 1) {
    for (size_t ci = 0; ci < n_channels; ++ci) compute_channel(ci);
  } else {
    std::vector<std::thread> pool;
    pool.reserve(nthreads);
    for (int t = 0; t < nthreads; ++t) {
      pool.emplace_back([&, t]() {
        for (size_t ci = t; ci < n_channels; ci += nthreads) compute_channel(ci);
      });
    }
    for (auto& th : pool) th.join();
  }
  return field;
}

} // namespace dir
