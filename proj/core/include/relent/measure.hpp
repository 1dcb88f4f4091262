#pragma once

#include <functional>
#include <string>
#include <vector>

#include "relent/errors.hpp"

namespace relent {

struct MeasureAtom {
    double lambda = 0.0;   // location in (-1, 1)
    double weight = 0.0;   // strictly positive
};

// Density part of a measure on a subinterval of [-1, 1]. kind names a
// serializable primitive ("uniform"); an empty kind marks a custom density
// that exists only in memory.
struct MeasureDensity {
    double lo = -1.0;
    double hi = 1.0;
    std::function<double(double)> rho;
    std::string kind;
    double height = 0.0;
};

// Borel probability measure on [-1, 1] with no mass at the endpoints,
// stored as finitely many atoms plus density pieces. Total mass must be 1
// within 1e-10.
class ProbabilityMeasure {
public:
    ProbabilityMeasure(std::vector<MeasureAtom> atoms, std::vector<MeasureDensity> densities);

    // Unit mass at lambda0.
    static ProbabilityMeasure point(double lambda0);
    // Constant density of the given height on [lo, hi].
    static ProbabilityMeasure uniform(double lo, double hi, double height);

    const std::vector<MeasureAtom>& atoms() const { return atoms_; }
    const std::vector<MeasureDensity>& densities() const { return densities_; }
    double total_mass() const { return mass_; }

private:
    std::vector<MeasureAtom> atoms_;
    std::vector<MeasureDensity> densities_;
    double mass_ = 0.0;
};

}  // namespace relent
