#pragma once

#include <complex>
#include <cstdint>
#include <random>

#include "relent/hermitian.hpp"

namespace relent {

// Deterministic random source. All distributions are derived from the
// mt19937_64 engine through fixed arithmetic, so a seed reproduces the
// same stream on every standard library.
class Rng {
public:
    explicit Rng(std::uint64_t seed) : engine_(seed) {}

    // Uniform in [0, 1) with 53 random bits.
    double uniform();
    double uniform(double lo, double hi);
    // Standard normal via Box-Muller.
    double normal();
    std::complex<double> complex_normal();

private:
    std::mt19937_64 engine_;
    bool have_spare_ = false;
    double spare_ = 0.0;
};

// Stream seed for a numbered trial under a master seed. Distinct indices
// give well-separated streams.
std::uint64_t derive_stream(std::uint64_t master_seed, std::uint64_t index);

// Haar-distributed unitary: QR of a complex Gaussian matrix with the
// R-diagonal phases absorbed into Q.
Matrix haar_unitary(int dim, Rng& rng);

// Hermitian operator with eigenvalues drawn uniformly from
// [spectrum_lo, spectrum_hi] and Haar-random eigenvectors.
StateOperator random_state(int dim, double spectrum_lo, double spectrum_hi, Rng& rng);
StateOperator random_state(int dim, double spectrum_lo, double spectrum_hi, std::uint64_t seed);

// Complex Gaussian matrix rescaled so its largest singular value is at
// most 1. force_identity returns the exact identity (square only).
Contraction random_contraction(int rows, int cols, Rng& rng, bool force_identity = false);
Contraction random_contraction(int rows, int cols, std::uint64_t seed, bool force_identity = false);

// Nested projections with Haar-random joint eigenbasis, one per rank.
ProjectionChain random_nested_chain(int ambient_dim, const std::vector<int>& ranks, Rng& rng);

}  // namespace relent
