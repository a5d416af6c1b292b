#pragma once

#include <optional>
#include <string>
#include <vector>

#include "vncrit/opalg.hpp"

namespace vncrit::phasespace {

constexpr int kMaxQSymbolDim = 16;
constexpr double kDefaultGridRadius = 4.0;
constexpr int kDefaultGridResolution = 61;
constexpr double kDefaultDelta = 1e-6;

// Square lattice over [-radius, radius]^2 in (Re alpha, Im alpha); odd
// resolution keeps the origin on the grid.
struct PhaseSpaceGrid {
    std::vector<Complex> points;
    double radius = 0.0;
    int resolution = 0;
};

struct MomentTargets {
    double mean_a = 0.0;
    double sq_a = 0.0;
    double mean_b = 0.0;
    double sq_b = 0.0;
};

enum class FeasibilityStatus { Feasible, Infeasible };

struct FeasibilityResult {
    FeasibilityStatus status = FeasibilityStatus::Infeasible;
    double residual = 0.0;  // phase-1 objective at optimum
    std::optional<std::vector<double>> witness;  // grid weights when feasible
    std::vector<std::string> constraints_used;
    MomentTargets targets;
    double delta = 0.0;
};

// Coherent-state diagonal symbol <alpha|X|alpha> for an operator embedded in
// the Fock span |0>..|d-1>; real by Hermiticity.
double q_symbol(const HermitianOperator& x, Complex alpha);

PhaseSpaceGrid build_grid(double radius, int resolution);

// Is there a nonnegative distribution on the grid whose classical moments of
// the symbol functions match the targets within delta? Solved as phase-1 LP;
// status = feasible iff residual <= delta.
FeasibilityResult moment_feasibility(const HermitianOperator& a, const HermitianOperator& b,
                                     const MomentTargets& targets, const PhaseSpaceGrid& grid,
                                     double delta);

// Targets taken from the quantum state: Tr(rho A), Tr(rho A^2), Tr(rho B),
// Tr(rho B^2).
FeasibilityResult classical_p_feasibility(const HermitianOperator& a, const HermitianOperator& b,
                                          const DensityMatrix& rho, const PhaseSpaceGrid& grid,
                                          double delta);

}  // namespace vncrit::phasespace
