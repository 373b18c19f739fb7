#include "fbmseg/fbm.hpp"

#include <unsupported/Eigen/FFT>

#include <cmath>
#include <complex>
#include <vector>

#include "fbmseg/rng.hpp"

namespace fbmseg {
namespace {

using cplx = std::complex<double>;

void check_hurst(double h) {
  if (!(h > 0.0 && h < 1.0)) throw DomainError("Hurst index must lie in (0, 1)");
}

/// Discretized kernel weight for offset m >= 0.
double kernel(std::int64_t m, double alpha, KernelRule rule) {
  const auto x = static_cast<double>(m);
  if (rule == KernelRule::point_sample) {
    if (m == 0) return alpha == 0.0 ? 1.0 : 0.0;
    return std::pow(x, alpha);
  }
  const double e = alpha + 1.0;
  return (std::pow(x + 1.0, e) - (m == 0 ? 0.0 : std::pow(x, e))) / e;
}

std::size_t next_pow2(std::size_t n) {
  std::size_t p = 1;
  while (p < n) p <<= 1;
  return p;
}

/// Linear convolution of a and b truncated to `out_len` samples.
std::vector<double> convolve(const std::vector<double>& a, const std::vector<double>& b, std::size_t out_len) {
  const std::size_t n = next_pow2(a.size() + b.size());
  Eigen::FFT<double> fft;
  std::vector<double> ap(a), bp(b);
  ap.resize(n, 0.0);
  bp.resize(n, 0.0);
  std::vector<cplx> fa, fb;
  fft.fwd(fa, ap);
  fft.fwd(fb, bp);
  for (std::size_t i = 0; i < fa.size(); ++i) fa[i] *= fb[i];
  std::vector<double> out;
  fft.inv(out, fa);
  out.resize(out_len);
  return out;
}

/// In-place 3-D DFT by 1-D transforms along each axis.
void fft3(std::vector<cplx>& data, const Dims3& d, bool inverse) {
  Eigen::FFT<double> fft;
  const std::size_t stride[3] = {1, static_cast<std::size_t>(d[0]), static_cast<std::size_t>(d[0]) * static_cast<std::size_t>(d[1])};
  for (int axis = 0; axis < 3; ++axis) {
    const int n = d[static_cast<std::size_t>(axis)];
    if (n == 1) continue;
    const int o1 = axis == 0 ? 1 : 0;
    const int o2 = axis == 2 ? 1 : 2;
    const int n1 = d[static_cast<std::size_t>(o1)];
    const int n2 = d[static_cast<std::size_t>(o2)];
    std::vector<cplx> line(static_cast<std::size_t>(n)), out;
    for (int j = 0; j < n2; ++j) {
      for (int i = 0; i < n1; ++i) {
        const std::size_t base = static_cast<std::size_t>(i) * stride[o1] + static_cast<std::size_t>(j) * stride[o2];
        for (int k = 0; k < n; ++k) line[static_cast<std::size_t>(k)] = data[base + static_cast<std::size_t>(k) * stride[axis]];
        if (inverse)
          fft.inv(out, line);
        else
          fft.fwd(out, line);
        for (int k = 0; k < n; ++k) data[base + static_cast<std::size_t>(k) * stride[axis]] = out[static_cast<std::size_t>(k)];
      }
    }
  }
}

double frequency(int k, int n) {
  const int kk = k <= n / 2 ? k : k - n;
  return static_cast<double>(kk) / static_cast<double>(n);
}

}  // namespace

double fbm_covariance(double s, double t, double h) {
  check_hurst(h);
  const double e = 2.0 * h;
  return 0.5 * (std::pow(std::abs(t), e) + std::pow(std::abs(s), e) - std::pow(std::abs(t - s), e));
}

double fbm_increment_variance(double lag, double h, double sigma) {
  check_hurst(h);
  return sigma * sigma * std::pow(std::abs(lag), 2.0 * h);
}

double fbm_increment_covariance(double lag, double k, double h, double sigma) {
  check_hurst(h);
  const double e = 2.0 * h;
  return 0.5 * sigma * sigma * (std::pow(std::abs(k - lag), e) + std::pow(std::abs(k + lag), e) - 2.0 * std::pow(std::abs(k), e));
}

double fbm_scale_constant(int n, double h, std::int64_t b, double sigma, KernelRule rule) {
  check_hurst(h);
  if (n < 2) throw DomainError("fBm path needs n >= 2");
  if (!(sigma > 0.0)) throw DomainError("sigma must be positive");
  if (b < 0) b = 4 * static_cast<std::int64_t>(n);
  const double alpha = h - 0.5;
  // Variance of x(m+1) - x(m) of the unscaled process at the middle of the path.
  const std::int64_t m = n / 2;
  double v = 0.0;
  for (std::int64_t j = 0; j <= b; ++j) {
    const double d = kernel(m + 1 + j, alpha, rule) - kernel(m + j, alpha, rule);
    v += d * d;
  }
  for (std::int64_t k = 0; k <= m; ++k) {
    const double d = kernel(m + 1 - k, alpha, rule) - kernel(m - k, alpha, rule);
    v += d * d;
  }
  const double k0 = kernel(0, alpha, rule);
  v += k0 * k0;
  return sigma / std::sqrt(v);
}

FbmPath synth_fbm_1d(int n, double h, std::int64_t b, double sigma, std::uint64_t seed, KernelRule rule) {
  check_hurst(h);
  if (n < 2) throw DomainError("fBm path needs n >= 2");
  if (!(sigma > 0.0)) throw DomainError("sigma must be positive");
  if (b < 0) b = 4 * static_cast<std::int64_t>(n);
  const double alpha = h - 0.5;
  const auto nn = static_cast<std::size_t>(n);
  const auto bb = static_cast<std::size_t>(b);

  Rng history(derive_seed(seed, 1));
  Rng innovation(derive_seed(seed, 2));
  // history_rev[i] = B1(-(b - i)), so the history sum becomes a convolution.
  std::vector<double> history_rev(bb + 1);
  for (std::size_t j = 0; j <= bb; ++j) history_rev[bb - j] = history.normal();
  std::vector<double> innov(nn);
  for (auto& v : innov) v = innovation.normal();

  std::vector<double> k_long(nn + bb);
  for (std::size_t m = 0; m < k_long.size(); ++m) k_long[m] = kernel(static_cast<std::int64_t>(m), alpha, rule);
  const std::vector<double> k_short(k_long.begin(), k_long.begin() + static_cast<std::ptrdiff_t>(nn));

  // sum_{j=0}^{b} K(n + j) B1(-j)  ==  (K * history_rev)(n + b)
  const auto hist = convolve(k_long, history_rev, nn + bb);
  // sum_{k=0}^{n} K(n - k) B2(k)
  const auto causal = convolve(k_short, innov, nn);

  FbmPath path;
  path.h = h;
  path.sigma = sigma;
  path.truncation_b = b;
  path.seed = seed;
  path.samples.resize(n);
  const double c = fbm_scale_constant(n, h, b, sigma, rule);
  const double x0 = hist[bb] + causal[0];
  for (std::size_t i = 0; i < nn; ++i) path.samples[static_cast<Eigen::Index>(i)] = c * ((hist[bb + i] + causal[i]) - x0);
  path.samples[0] = 0.0;
  return path;
}

Grid3<double> fbm_texture(const Dims3& dims, double h, std::uint64_t seed, const FieldOptions& options) {
  check_hurst(h);
  for (int d : dims)
    if (d < 2) throw DomainError("field dims must be >= 2");
  const std::size_t n = volume_of(dims);
  Rng rng(derive_seed(seed, 0x46494544ull));
  std::vector<cplx> data(n);
  for (auto& v : data) v = cplx(rng.normal(), 0.0);
  fft3(data, dims, false);

  const double exponent = -(h + 1.5);
  const double k_floor = options.outer_scale > 0.0 ? 1.0 / options.outer_scale : 0.0;
  for (int z = 0; z < dims[2]; ++z) {
    const double fz = frequency(z, dims[2]);
    for (int y = 0; y < dims[1]; ++y) {
      const double fy = frequency(y, dims[1]);
      for (int x = 0; x < dims[0]; ++x) {
        const double fx = frequency(x, dims[0]);
        const std::size_t i = static_cast<std::size_t>(x) + static_cast<std::size_t>(dims[0]) * (static_cast<std::size_t>(y) + static_cast<std::size_t>(dims[1]) * static_cast<std::size_t>(z));
        const double k = std::sqrt(fx * fx + fy * fy + fz * fz);
        data[i] *= k == 0.0 ? 0.0 : std::pow(std::max(k, k_floor), exponent);
      }
    }
  }
  fft3(data, dims, true);

  Grid3<double> out(dims);
  for (std::size_t i = 0; i < n; ++i) out[i] = data[i].real();
  auto& a = out.array();
  a -= a.mean();
  const double sd = std::sqrt(a.square().mean());
  if (sd > 0.0) a /= sd;
  return out;
}

Volume4 synth_fbm_field(const Dims3& dims, double h, std::uint64_t seed, const FieldOptions& options) {
  const auto field = fbm_texture(dims, h, seed, options);
  return Volume4(Dims4{dims[0], dims[1], dims[2], 1}, Eigen::Vector3d::Ones(), 0.0, field.array().cast<float>().eval());
}

}  // namespace fbmseg
