#include "vncrit/phasespace.hpp"

#include <array>
#include <cmath>

#include "vncrit/simplex.hpp"

namespace vncrit::phasespace {

namespace {

constexpr double kQSymbolImagTol = 1e-12;

double factorial(int n) {
    double f = 1.0;
    for (int k = 2; k <= n; ++k) f *= static_cast<double>(k);
    return f;
}

std::string format_target(const char* name, double lo, double hi) {
    return std::string(name) + " in [" + std::to_string(lo) + ", " + std::to_string(hi) + "]";
}

}  // namespace

double q_symbol(const HermitianOperator& x, Complex alpha) {
    const int d = x.dim();
    if (d > kMaxQSymbolDim)
        throw Error(Errc::DimensionTooLarge,
                    "Fock-span symbols support dimension <= " + std::to_string(kMaxQSymbolDim));

    // Coherent-state coefficients alpha^n / sqrt(n!) for n < d.
    std::vector<Complex> coeff(static_cast<std::size_t>(d));
    Complex power(1.0, 0.0);
    for (int n = 0; n < d; ++n) {
        coeff[static_cast<std::size_t>(n)] = power / std::sqrt(factorial(n));
        power *= alpha;
    }

    Complex sum(0.0, 0.0);
    for (int m = 0; m < d; ++m)
        for (int n = 0; n < d; ++n)
            sum += std::conj(coeff[static_cast<std::size_t>(m)]) * x.matrix()(m, n) *
                   coeff[static_cast<std::size_t>(n)];

    const double envelope = std::exp(-std::norm(alpha));
    const Complex value = envelope * sum;
    if (std::abs(value.imag()) > kQSymbolImagTol)
        throw Error(Errc::ImaginaryResidue,
                    "coherent symbol has imaginary residue " + std::to_string(value.imag()));
    return value.real();
}

PhaseSpaceGrid build_grid(double radius, int resolution) {
    if (radius <= 0.0) throw Error(Errc::BadResolution, "grid radius must be positive");
    if (resolution < 3 || resolution % 2 == 0)
        throw Error(Errc::BadResolution,
                    "grid resolution must be odd and >= 3, got " + std::to_string(resolution));

    PhaseSpaceGrid grid;
    grid.radius = radius;
    grid.resolution = resolution;
    grid.points.reserve(static_cast<std::size_t>(resolution) * resolution);

    const double step = 2.0 * radius / static_cast<double>(resolution - 1);
    for (int i = 0; i < resolution; ++i) {
        const double re = -radius + step * static_cast<double>(i);
        for (int j = 0; j < resolution; ++j) {
            const double im = -radius + step * static_cast<double>(j);
            grid.points.emplace_back(re, im);
        }
    }
    return grid;
}

FeasibilityResult moment_feasibility(const HermitianOperator& a, const HermitianOperator& b,
                                     const MomentTargets& targets, const PhaseSpaceGrid& grid,
                                     double delta) {
    if (a.dim() != b.dim())
        throw Error(Errc::DimensionMismatch, "operators have different dimensions");
    if (grid.points.empty()) throw Error(Errc::BadResolution, "grid has no points");
    if (delta <= 0.0) throw Error(Errc::BadFlag, "delta must be positive");

    const std::size_t n = grid.points.size();
    std::vector<double> sym_a(n), sym_b(n);
    for (std::size_t k = 0; k < n; ++k) {
        sym_a[k] = q_symbol(a, grid.points[k]);
        sym_b[k] = q_symbol(b, grid.points[k]);
    }

    // One normalization equality plus two-sided windows around each of the
    // four classical moments E[X_Q] and E[X_Q^2].
    std::vector<std::vector<double>> rows;
    std::vector<lp::RowSense> senses;
    std::vector<double> rhs;

    rows.emplace_back(n, 1.0);
    senses.push_back(lp::RowSense::EQ);
    rhs.push_back(1.0);

    const std::array<const std::vector<double>*, 2> symbols = {&sym_a, &sym_b};
    const std::array<std::array<double, 2>, 2> moment_targets = {
        std::array<double, 2>{targets.mean_a, targets.sq_a},
        std::array<double, 2>{targets.mean_b, targets.sq_b}};

    FeasibilityResult result;
    result.targets = targets;
    result.delta = delta;
    result.constraints_used.push_back("sum(p) = 1");

    const std::array<const char*, 4> names = {"E[A_Q]", "E[A_Q^2]", "E[B_Q]", "E[B_Q^2]"};
    int name_idx = 0;
    for (int which = 0; which < 2; ++which) {
        for (int power = 1; power <= 2; ++power) {
            std::vector<double> row(n);
            for (std::size_t k = 0; k < n; ++k) {
                const double s = (*symbols[which])[k];
                row[k] = power == 1 ? s : s * s;
            }
            const double target = moment_targets[which][power - 1];
            rows.push_back(row);
            senses.push_back(lp::RowSense::LE);
            rhs.push_back(target + delta);
            rows.push_back(std::move(row));
            senses.push_back(lp::RowSense::GE);
            rhs.push_back(target - delta);
            result.constraints_used.push_back(
                format_target(names[name_idx], target - delta, target + delta));
            ++name_idx;
        }
    }

    const lp::Phase1Result solve = lp::phase1_feasibility(rows, senses, rhs);
    if (!solve.converged)
        throw Error(Errc::SolverFailure, "phase-1 simplex did not converge");

    result.residual = solve.objective;
    if (solve.objective <= delta) {
        result.status = FeasibilityStatus::Feasible;
        result.witness = solve.x;
    } else {
        result.status = FeasibilityStatus::Infeasible;
    }
    return result;
}

FeasibilityResult classical_p_feasibility(const HermitianOperator& a, const HermitianOperator& b,
                                          const DensityMatrix& rho, const PhaseSpaceGrid& grid,
                                          double delta) {
    MomentTargets targets;
    targets.mean_a = expectation(rho, a);
    targets.sq_a = expectation(rho, op_square(a));
    targets.mean_b = expectation(rho, b);
    targets.sq_b = expectation(rho, op_square(b));
    return moment_feasibility(a, b, targets, grid, delta);
}

}  // namespace vncrit::phasespace
