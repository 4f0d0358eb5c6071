#include "metrics.hpp"

#include <cmath>

#include "errors.hpp"

namespace hotvbl {
namespace {

double ratio_db(double signal_sq, double noise_sq) {
  if (!(noise_sq > 0.0)) throw InvalidArgument("snr_db: noise is identically zero");
  return 20.0 * std::log10(std::sqrt(signal_sq / noise_sq));
}

Vector standard_normal(Eigen::Index n, Rng& rng) {
  std::normal_distribution<double> dist(0.0, 1.0);
  Vector out(n);
  for (Eigen::Index i = 0; i < n; ++i) out[i] = dist(rng);
  return out;
}

}  // namespace

double snr_db(const Vector& signal, const Vector& noise) {
  return ratio_db(signal.squaredNorm(), noise.squaredNorm());
}

double snr_db(const ComplexVector& signal, const ComplexVector& noise) {
  return ratio_db(signal.squaredNorm(), noise.squaredNorm());
}

double rel_err(const Vector& estimate, const Vector& truth) {
  if (estimate.size() != truth.size()) throw DimensionError("rel_err: length mismatch");
  const double denom = truth.norm();
  if (!(denom > 0.0)) throw InvalidArgument("rel_err: truth is zero");
  return (estimate - truth).norm() / denom;
}

double max_err(const Vector& estimate, const Vector& truth) {
  if (estimate.size() != truth.size()) throw DimensionError("max_err: length mismatch");
  if (truth.size() == 0) return 0.0;
  return (estimate - truth).cwiseAbs().maxCoeff();
}

NoisyReal add_noise_at_snr(const Vector& clean, double target_db, Rng& rng) {
  const double clean_norm = clean.norm();
  if (!(clean_norm > 0.0)) throw InvalidArgument("add_noise_at_snr: clean signal is zero");
  Vector g = standard_normal(clean.size(), rng);
  const double scale = clean_norm / (g.norm() * std::pow(10.0, target_db / 20.0));
  NoisyReal out;
  out.noise = g * scale;
  out.noisy = clean + out.noise;
  return out;
}

NoisyComplex add_noise_at_snr(const ComplexVector& clean, double target_db, Rng& rng) {
  const double clean_norm = clean.norm();
  if (!(clean_norm > 0.0)) throw InvalidArgument("add_noise_at_snr: clean signal is zero");
  const Vector re = standard_normal(clean.size(), rng);
  const Vector im = standard_normal(clean.size(), rng);
  ComplexVector g(clean.size());
  g.real() = re;
  g.imag() = im;
  const double scale = clean_norm / (g.norm() * std::pow(10.0, target_db / 20.0));
  NoisyComplex out;
  out.noise = g * scale;
  out.noisy = clean + out.noise;
  return out;
}

std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

std::uint64_t derive_seed(std::uint64_t base, std::uint64_t key, std::uint64_t trial) {
  return splitmix64(splitmix64(splitmix64(base) ^ key) ^ trial);
}

}  // namespace hotvbl
