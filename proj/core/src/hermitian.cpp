#include "relent/hermitian.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <sstream>

namespace relent {

namespace {

// Eigenvalues this close to 0 or 1 are pulled onto the boundary; anything
// further outside [0, 1] is rejected.
constexpr double kClampBand = 1e-10;

std::string dim_text(const Matrix& m) {
    std::ostringstream os;
    os << m.rows() << "x" << m.cols();
    return os.str();
}

}  // namespace

HermitianMatrix::HermitianMatrix(const Matrix& m, double tol) {
    if (m.rows() != m.cols()) {
        throw ValidationError("hermitian matrix must be square, got " + dim_text(m));
    }
    if (m.rows() == 0) {
        m_ = m;
        return;
    }
    const double dev = (m - m.adjoint()).norm();
    if (!(dev <= tol * std::max(1.0, m.norm()))) {
        std::ostringstream os;
        os << "matrix is not Hermitian: ||M - M^*|| = " << dev;
        throw ValidationError(os.str());
    }
    m_ = 0.5 * (m + m.adjoint());
}

SpectralDecomposition spectral_decompose(const HermitianMatrix& m) {
    Eigen::SelfAdjointEigenSolver<Matrix> solver(m.mat());
    if (solver.info() != Eigen::Success) {
        throw Error("eigensolver failed to converge");
    }
    return SpectralDecomposition{solver.eigenvalues(), solver.eigenvectors()};
}

StateOperator::StateOperator(HermitianMatrix base, SpectralDecomposition spec)
    : base_(std::move(base)), spec_(std::move(spec)) {}

StateOperator::StateOperator(const HermitianMatrix& m) : base_(m) {
    spec_ = spectral_decompose(base_);
    bool clamped = false;
    for (int i = 0; i < spec_.dim(); ++i) {
        double& v = spec_.values[i];
        if (v < -kClampBand || v > 1.0 + kClampBand) {
            std::ostringstream os;
            os << "eigenvalue " << v << " outside [0,1] beyond the clamp band " << kClampBand;
            throw ValidationError(os.str());
        }
        if (v < 0.0) {
            v = 0.0;
            clamped = true;
        } else if (v > 1.0) {
            v = 1.0;
            clamped = true;
        }
    }
    if (clamped) {
        // Keep the stored matrix consistent with the clamped spectrum.
        Matrix rebuilt = spec_.vectors * spec_.values.asDiagonal().toDenseMatrix().cast<std::complex<double>>() *
                         spec_.vectors.adjoint();
        base_ = HermitianMatrix(rebuilt, 1e-10);
    }
}

StateOperator StateOperator::from_spectrum(const RealVector& values, const Matrix& vectors) {
    const int n = static_cast<int>(values.size());
    if (vectors.rows() != n || vectors.cols() != n) {
        throw ValidationError("spectrum and eigenvector matrix dimensions disagree");
    }
    for (int i = 0; i < n; ++i) {
        if (!(values[i] >= 0.0 && values[i] <= 1.0)) {
            std::ostringstream os;
            os << "explicit eigenvalue " << values[i] << " outside [0,1]";
            throw ValidationError(os.str());
        }
    }
    const double unit_dev = (vectors.adjoint() * vectors - Matrix::Identity(n, n)).norm();
    if (!(unit_dev <= 1e-10 * std::max(1.0, static_cast<double>(n)))) {
        throw ValidationError("eigenvector matrix is not unitary");
    }
    Matrix m = vectors * values.asDiagonal().toDenseMatrix().cast<std::complex<double>>() * vectors.adjoint();
    RealVector sorted = values;
    Matrix cols = vectors;
    // Stored decomposition keeps ascending eigenvalue order.
    std::vector<int> order(n);
    std::iota(order.begin(), order.end(), 0);
    std::stable_sort(order.begin(), order.end(),
                     [&](int i, int j) { return values[i] < values[j]; });
    for (int i = 0; i < n; ++i) {
        sorted[i] = values[order[i]];
        cols.col(i) = vectors.col(order[i]);
    }
    return StateOperator(HermitianMatrix(m, 1e-10), SpectralDecomposition{sorted, cols});
}

Contraction::Contraction(const Matrix& x, double tol) : x_(x) {
    if (x.rows() == 0 || x.cols() == 0) {
        throw ValidationError("contraction must be nonempty");
    }
    const double sigma = op_norm(x);
    if (!(sigma <= 1.0 + tol)) {
        std::ostringstream os;
        os << "largest singular value " << sigma << " exceeds 1";
        throw ValidationError(os.str());
    }
    if (sigma > 1.0) {
        x_ /= sigma;
    }
}

Contraction Contraction::identity(int n) {
    if (n <= 0) {
        throw ValidationError("identity contraction needs positive dimension");
    }
    return Contraction(Matrix::Identity(n, n));
}

StateOperator compress(const StateOperator& a, const Contraction& x) {
    if (x.cols() != a.dim()) {
        std::ostringstream os;
        os << "contraction has " << x.cols() << " columns but operator dimension is " << a.dim();
        throw ValidationError(os.str());
    }
    Matrix m = x.mat() * a.mat() * x.mat().adjoint();
    return StateOperator(HermitianMatrix(m, 1e-10));
}

ProjectionChain::ProjectionChain(std::vector<Matrix> projectors, double tol)
    : projectors_(std::move(projectors)) {
    if (projectors_.empty()) {
        throw ValidationError("projection chain must be nonempty");
    }
    const auto n = projectors_.front().rows();
    int prev_rank = 0;
    for (std::size_t k = 0; k < projectors_.size(); ++k) {
        const Matrix& p = projectors_[k];
        if (p.rows() != n || p.cols() != n) {
            throw ValidationError("projection chain members must share the ambient dimension");
        }
        if ((p - p.adjoint()).norm() > tol * std::max<double>(1.0, p.norm())) {
            throw ValidationError("chain member is not Hermitian");
        }
        if ((p * p - p).norm() > tol * std::max<double>(1.0, p.norm())) {
            throw ValidationError("chain member is not idempotent");
        }
        const double tr = p.trace().real();
        const int rank = static_cast<int>(std::lround(tr));
        if (std::abs(tr - rank) > tol * static_cast<double>(n)) {
            throw ValidationError("chain member trace is not close to an integer rank");
        }
        if (rank <= prev_rank) {
            throw ValidationError("chain ranks must be strictly increasing");
        }
        if (k > 0 && (projectors_[k - 1] * p - projectors_[k - 1]).norm() > tol * static_cast<double>(n)) {
            throw ValidationError("chain members are not nested");
        }
        ranks_.push_back(rank);
        prev_rank = rank;
    }
}

ProjectionChain ProjectionChain::coordinate_prefix(int ambient_dim, const std::vector<int>& ranks) {
    if (ambient_dim <= 0) {
        throw ValidationError("ambient dimension must be positive");
    }
    std::vector<Matrix> ps;
    ps.reserve(ranks.size());
    for (int r : ranks) {
        if (r < 1 || r > ambient_dim) {
            throw ValidationError("prefix rank outside [1, ambient_dim]");
        }
        Matrix p = Matrix::Zero(ambient_dim, ambient_dim);
        p.topLeftCorner(r, r) = Matrix::Identity(r, r);
        ps.push_back(p);
    }
    return ProjectionChain(std::move(ps));
}

int ProjectionChain::ambient_dim() const {
    return static_cast<int>(projectors_.front().rows());
}

HermitianMatrix apply_function(const StateOperator& a, const ScalarFunction& f) {
    const SpectralDecomposition& d = a.spectral();
    RealVector fv(d.dim());
    for (int i = 0; i < d.dim(); ++i) {
        const double v = d.values[i];
        const bool below = v < f.lo || (f.open_lo && v <= f.lo);
        const bool above = v > f.hi || (f.open_hi && v >= f.hi);
        if (below || above) {
            std::ostringstream os;
            os << "eigenvalue " << v << " outside function domain";
            throw DomainError(os.str(), v);
        }
        fv[i] = f.fn(v);
    }
    Matrix m = d.vectors * fv.asDiagonal().toDenseMatrix().cast<std::complex<double>>() * d.vectors.adjoint();
    return HermitianMatrix(m, 1e-10);
}

Matrix range_basis(const HermitianMatrix& projector, double tol) {
    SpectralDecomposition d = spectral_decompose(projector);
    const int n = d.dim();
    std::vector<int> selected;
    for (int i = 0; i < n; ++i) {
        const double v = d.values[i];
        if (std::abs(v) > tol && std::abs(v - 1.0) > tol) {
            std::ostringstream os;
            os << "eigenvalue " << v << " is neither 0 nor 1: not an orthogonal projector";
            throw ValidationError(os.str());
        }
        if (v > 0.5) {
            selected.push_back(i);
        }
    }
    if (selected.empty()) {
        return Matrix(n, 0);
    }
    // Fix each eigenvector's phase so its first significant coordinate is
    // real positive, making the basis reproducible.
    Matrix cols(n, static_cast<Eigen::Index>(selected.size()));
    for (std::size_t k = 0; k < selected.size(); ++k) {
        Eigen::VectorXcd v = d.vectors.col(selected[k]);
        for (int i = 0; i < n; ++i) {
            const double mag = std::abs(v[i]);
            if (mag > 1e-9) {
                v *= std::conj(v[i]) / mag;
                break;
            }
        }
        cols.col(static_cast<Eigen::Index>(k)) = v;
    }
    // Order by descending eigenvalue, breaking ties lexicographically on
    // the phase-fixed coordinates.
    std::vector<int> order(selected.size());
    std::iota(order.begin(), order.end(), 0);
    std::stable_sort(order.begin(), order.end(), [&](int a, int b) {
        const double va = d.values[selected[a]];
        const double vb = d.values[selected[b]];
        if (std::abs(va - vb) > 1e-12) {
            return va > vb;
        }
        for (int i = 0; i < n; ++i) {
            const std::complex<double> ca = cols(i, a);
            const std::complex<double> cb = cols(i, b);
            if (ca.real() != cb.real()) return ca.real() > cb.real();
            if (ca.imag() != cb.imag()) return ca.imag() > cb.imag();
        }
        return false;
    });
    Matrix ordered(n, cols.cols());
    for (std::size_t k = 0; k < order.size(); ++k) {
        ordered.col(static_cast<Eigen::Index>(k)) = cols.col(order[k]);
    }
    // QR pass removes residual non-orthogonality without reordering.
    Eigen::HouseholderQR<Matrix> qr(ordered);
    Matrix q = qr.householderQ() * Matrix::Identity(n, ordered.cols());
    // Householder reflections may flip column phases; restore the convention.
    for (Eigen::Index c = 0; c < q.cols(); ++c) {
        for (int i = 0; i < n; ++i) {
            const double mag = std::abs(q(i, c));
            if (mag > 1e-9) {
                q.col(c) *= std::conj(q(i, c)) / mag;
                break;
            }
        }
    }
    return q;
}

HermitianMatrix restrict_to_range(const HermitianMatrix& m, const HermitianMatrix& projector,
                                  double tol) {
    if (m.dim() != projector.dim()) {
        throw ValidationError("operator and projector dimensions disagree");
    }
    Matrix v = range_basis(projector, tol);
    Matrix restricted = v.adjoint() * m.mat() * v;
    return HermitianMatrix(restricted, 1e-10);
}

double trace_real(const Matrix& m) {
    return m.trace().real();
}

double trace_norm(const Matrix& m) {
    Eigen::JacobiSVD<Matrix> svd(m);
    return svd.singularValues().sum();
}

double hs_norm(const Matrix& m) {
    return m.norm();
}

double op_norm(const Matrix& m) {
    if (m.rows() == 0 || m.cols() == 0) {
        return 0.0;
    }
    Eigen::JacobiSVD<Matrix> svd(m);
    return svd.singularValues()[0];
}

}  // namespace relent
