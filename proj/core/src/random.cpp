#include "relent/random.hpp"

#include <cmath>
#include <numbers>

namespace relent {

double Rng::uniform() {
    return static_cast<double>(engine_() >> 11) * 0x1.0p-53;
}

double Rng::uniform(double lo, double hi) {
    if (lo > hi) {
        throw ValidationError("uniform range is empty");
    }
    return lo + (hi - lo) * uniform();
}

double Rng::normal() {
    if (have_spare_) {
        have_spare_ = false;
        return spare_;
    }
    // 1 - uniform() lies in (0, 1], keeping the log finite.
    const double u1 = 1.0 - uniform();
    const double u2 = uniform();
    const double r = std::sqrt(-2.0 * std::log(u1));
    const double angle = 2.0 * std::numbers::pi * u2;
    spare_ = r * std::sin(angle);
    have_spare_ = true;
    return r * std::cos(angle);
}

std::complex<double> Rng::complex_normal() {
    const double re = normal();
    const double im = normal();
    return {re, im};
}

namespace {

std::uint64_t splitmix64(std::uint64_t x) {
    x += 0x9e3779b97f4a7c15ULL;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
    return x ^ (x >> 31);
}

}  // namespace

std::uint64_t derive_stream(std::uint64_t master_seed, std::uint64_t index) {
    return splitmix64(splitmix64(master_seed) ^ splitmix64(index + 1));
}

Matrix haar_unitary(int dim, Rng& rng) {
    if (dim <= 0) {
        throw ValidationError("unitary dimension must be positive");
    }
    Matrix g(dim, dim);
    for (int i = 0; i < dim; ++i) {
        for (int j = 0; j < dim; ++j) {
            g(i, j) = rng.complex_normal();
        }
    }
    Eigen::HouseholderQR<Matrix> qr(g);
    Matrix q = qr.householderQ() * Matrix::Identity(dim, dim);
    Matrix r = q.adjoint() * g;
    // Fixing the R-diagonal phases makes the distribution Haar rather than
    // merely unitary.
    for (int i = 0; i < dim; ++i) {
        const std::complex<double> d = r(i, i);
        const double mag = std::abs(d);
        if (mag > 0.0) {
            q.col(i) *= d / mag;
        }
    }
    return q;
}

StateOperator random_state(int dim, double spectrum_lo, double spectrum_hi, Rng& rng) {
    if (dim <= 0) {
        throw ValidationError("state dimension must be positive");
    }
    if (!(spectrum_lo >= 0.0 && spectrum_lo <= spectrum_hi && spectrum_hi <= 1.0)) {
        throw ValidationError("spectrum range must satisfy 0 <= lo <= hi <= 1");
    }
    RealVector values(dim);
    for (int i = 0; i < dim; ++i) {
        values[i] = rng.uniform(spectrum_lo, spectrum_hi);
    }
    Matrix u = haar_unitary(dim, rng);
    return StateOperator::from_spectrum(values, u);
}

StateOperator random_state(int dim, double spectrum_lo, double spectrum_hi, std::uint64_t seed) {
    Rng rng(seed);
    return random_state(dim, spectrum_lo, spectrum_hi, rng);
}

Contraction random_contraction(int rows, int cols, Rng& rng, bool force_identity) {
    if (rows <= 0 || cols <= 0) {
        throw ValidationError("contraction dimensions must be positive");
    }
    if (force_identity) {
        if (rows != cols) {
            throw ValidationError("identity contraction must be square");
        }
        return Contraction::identity(rows);
    }
    Matrix g(rows, cols);
    for (int i = 0; i < rows; ++i) {
        for (int j = 0; j < cols; ++j) {
            g(i, j) = rng.complex_normal();
        }
    }
    const double sigma = op_norm(g);
    if (sigma > 1.0) {
        g /= sigma;
    }
    return Contraction(g);
}

Contraction random_contraction(int rows, int cols, std::uint64_t seed, bool force_identity) {
    Rng rng(seed);
    return random_contraction(rows, cols, rng, force_identity);
}

ProjectionChain random_nested_chain(int ambient_dim, const std::vector<int>& ranks, Rng& rng) {
    Matrix u = haar_unitary(ambient_dim, rng);
    std::vector<Matrix> ps;
    ps.reserve(ranks.size());
    for (int r : ranks) {
        if (r < 1 || r > ambient_dim) {
            throw ValidationError("chain rank outside [1, ambient_dim]");
        }
        Matrix v = u.leftCols(r);
        ps.push_back(v * v.adjoint());
    }
    return ProjectionChain(std::move(ps));
}

}  // namespace relent
