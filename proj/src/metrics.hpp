#pragma once

#include <cstdint>
#include <random>

#include <Eigen/Dense>

namespace hotvbl {

using Vector = Eigen::VectorXd;
using ComplexVector = Eigen::VectorXcd;
using Rng = std::mt19937_64;

// 20 log10(||signal|| / ||noise||).
double snr_db(const Vector& signal, const Vector& noise);
double snr_db(const ComplexVector& signal, const ComplexVector& noise);

double rel_err(const Vector& estimate, const Vector& truth);
double max_err(const Vector& estimate, const Vector& truth);

struct NoisyReal {
  Vector noisy;
  Vector noise;
};
struct NoisyComplex {
  ComplexVector noisy;
  ComplexVector noise;
};

// Standard normal draws rescaled so the realized SNR hits the target.
NoisyReal add_noise_at_snr(const Vector& clean, double target_db, Rng& rng);
// Independent real and imaginary parts, then the same rescaling.
NoisyComplex add_noise_at_snr(const ComplexVector& clean, double target_db, Rng& rng);

std::uint64_t splitmix64(std::uint64_t x);
// Per-trial seed from the run seed, a group key (k, snr, ...) and the trial index.
std::uint64_t derive_seed(std::uint64_t base, std::uint64_t key, std::uint64_t trial);

}  // namespace hotvbl
