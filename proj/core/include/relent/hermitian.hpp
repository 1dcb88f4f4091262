#pragma once

#include <complex>
#include <functional>
#include <limits>
#include <vector>

#include <Eigen/Dense>

#include "relent/errors.hpp"

namespace relent {

using Matrix = Eigen::MatrixXcd;
using RealVector = Eigen::VectorXd;

// A validated complex Hermitian matrix. The stored matrix is the Hermitian
// part (M + M*)/2 of the input, accepted only when the anti-Hermitian
// remainder is below tol in operator norm.
class HermitianMatrix {
public:
    explicit HermitianMatrix(const Matrix& m, double tol = 1e-12);

    int dim() const { return static_cast<int>(m_.rows()); }
    const Matrix& mat() const { return m_; }

private:
    Matrix m_;
};

// Eigenvalues in ascending order with a unitary matrix of eigenvectors
// (columns), so that mat = vectors * diag(values) * vectors^*.
struct SpectralDecomposition {
    RealVector values;
    Matrix vectors;
    int dim() const { return static_cast<int>(values.size()); }
};

SpectralDecomposition spectral_decompose(const HermitianMatrix& m);

// Hermitian operator with spectrum in [0, 1]. Eigenvalues within 1e-10
// outside the interval are clamped onto it; anything further out is
// rejected. The clamped spectral decomposition is stored and used by all
// functional calculus downstream.
class StateOperator {
public:
    explicit StateOperator(const HermitianMatrix& m);

    // Builds the operator from an explicit decomposition without running an
    // eigensolver. Used to plant exact boundary eigenvalues.
    static StateOperator from_spectrum(const RealVector& values, const Matrix& vectors);

    int dim() const { return base_.dim(); }
    const Matrix& mat() const { return base_.mat(); }
    const HermitianMatrix& hermitian() const { return base_; }
    const SpectralDecomposition& spectral() const { return spec_; }

private:
    StateOperator(HermitianMatrix base, SpectralDecomposition spec);

    HermitianMatrix base_;
    SpectralDecomposition spec_;
};

// Linear map X between spaces of possibly different dimension with
// X^* X <= 1 (largest singular value at most 1 + tol).
class Contraction {
public:
    explicit Contraction(const Matrix& x, double tol = 1e-10);

    static Contraction identity(int n);

    int rows() const { return static_cast<int>(x_.rows()); }
    int cols() const { return static_cast<int>(x_.cols()); }
    const Matrix& mat() const { return x_; }

private:
    Matrix x_;
};

// X A X^* for a contraction X acting on A's space.
StateOperator compress(const StateOperator& a, const Contraction& x);

// Nested orthogonal projections of strictly increasing rank on a common
// ambient space. Nesting means P_k P_{k+1} = P_k.
class ProjectionChain {
public:
    explicit ProjectionChain(std::vector<Matrix> projectors, double tol = 1e-10);

    // Projections onto the span of the first r coordinates, one per rank.
    static ProjectionChain coordinate_prefix(int ambient_dim, const std::vector<int>& ranks);

    std::size_t size() const { return projectors_.size(); }
    int ambient_dim() const;
    const Matrix& projector(std::size_t k) const { return projectors_.at(k); }
    int rank(std::size_t k) const { return ranks_.at(k); }

private:
    std::vector<Matrix> projectors_;
    std::vector<int> ranks_;
};

// Scalar function with an evaluation domain. Endpoints marked open are
// excluded from the domain.
struct ScalarFunction {
    std::function<double(double)> fn;
    double lo = -std::numeric_limits<double>::infinity();
    double hi = std::numeric_limits<double>::infinity();
    bool open_lo = false;
    bool open_hi = false;
};

// f(A) through the stored spectral decomposition. Throws DomainError with
// the offending eigenvalue if any clamped eigenvalue leaves f's domain.
HermitianMatrix apply_function(const StateOperator& a, const ScalarFunction& f);

// Deterministic orthonormal basis of the range of an orthogonal projector:
// eigenvectors with eigenvalue above 1/2, phase-fixed, ordered by descending
// eigenvalue with a lexicographic tie break, then re-orthonormalized.
Matrix range_basis(const HermitianMatrix& projector, double tol = 1e-10);

// V^* M V for the deterministic range basis V of the projector. The result
// lives on a space of dimension rank(P).
HermitianMatrix restrict_to_range(const HermitianMatrix& m, const HermitianMatrix& projector,
                                  double tol = 1e-10);

double trace_real(const Matrix& m);
double trace_norm(const Matrix& m);
double hs_norm(const Matrix& m);
double op_norm(const Matrix& m);

}  // namespace relent
