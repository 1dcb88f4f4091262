#include "relent/measure.hpp"

#include <cmath>
#include <sstream>
#include <utility>

#include "relent/quadrature.hpp"

namespace relent {

namespace {

// Fixed composite Gauss-Legendre mass of one density piece, accurate far
// beyond the 1e-10 validation tolerance for the admissible densities.
double density_mass(const MeasureDensity& d) {
    const auto& nodes = detail::gauss_legendre_nodes();
    const auto& weights = detail::gauss_legendre_weights();
    const int panels = 64;
    const double w = (d.hi - d.lo) / panels;
    double mass = 0.0;
    for (int p = 0; p < panels; ++p) {
        const double a = d.lo + p * w;
        double acc = 0.0;
        for (int k = 0; k < 16; ++k) {
            const double x = a + 0.5 * w * (nodes[k] + 1.0);
            const double r = d.rho(x);
            if (r < -1e-12) {
                std::ostringstream os;
                os << "density is negative at lambda = " << x;
                throw ValidationError(os.str());
            }
            acc += weights[k] * r;
        }
        mass += 0.5 * w * acc;
    }
    return mass;
}

}  // namespace

ProbabilityMeasure::ProbabilityMeasure(std::vector<MeasureAtom> atoms,
                                       std::vector<MeasureDensity> densities)
    : atoms_(std::move(atoms)), densities_(std::move(densities)) {
    double mass = 0.0;
    for (const auto& a : atoms_) {
        if (!(std::abs(a.lambda) < 1.0)) {
            std::ostringstream os;
            os << "atom at lambda = " << a.lambda << " must lie strictly inside (-1, 1)";
            throw ValidationError(os.str());
        }
        if (!(a.weight > 0.0)) {
            throw ValidationError("atom weight must be strictly positive");
        }
        mass += a.weight;
    }
    for (const auto& d : densities_) {
        if (!(d.lo >= -1.0 && d.lo < d.hi && d.hi <= 1.0)) {
            throw ValidationError("density interval must satisfy -1 <= lo < hi <= 1");
        }
        if (!d.rho) {
            throw ValidationError("density is missing its callable");
        }
        mass += density_mass(d);
    }
    if (std::abs(mass - 1.0) > 1e-10) {
        std::ostringstream os;
        os << "total mass " << mass << " differs from 1 beyond 1e-10";
        throw ValidationError(os.str());
    }
    mass_ = mass;
}

ProbabilityMeasure ProbabilityMeasure::point(double lambda0) {
    return ProbabilityMeasure({MeasureAtom{lambda0, 1.0}}, {});
}

ProbabilityMeasure ProbabilityMeasure::uniform(double lo, double hi, double height) {
    MeasureDensity d;
    d.lo = lo;
    d.hi = hi;
    d.height = height;
    d.kind = "uniform";
    d.rho = [height](double) { return height; };
    return ProbabilityMeasure({}, {d});
}

}  // namespace relent
