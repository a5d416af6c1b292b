#pragma once

#include <cstdint>
#include <utility>

#include "vncrit/opalg.hpp"

namespace vncrit::criterion {

// Strict-inequality margin for declaring a violation; absolute, intended for
// operators scaled so the entries are O(1).
constexpr double kViolationTol = 1e-8;

struct TripleValidity {
    bool a_psd = false;
    bool b_psd = false;
    bool diff_psd = false;
    double min_eig_a = 0.0;
    double min_eig_b = 0.0;
    double min_eig_diff = 0.0;

    bool all() const { return a_psd && b_psd && diff_psd; }
};

struct CriterionReport {
    double mean_a = 0.0;           // <A>
    double mean_b = 0.0;           // <B>
    double sq_a = 0.0;             // <A^2>
    double sq_b = 0.0;             // <B^2>
    double first_moment_gap = 0.0; // <B> - <A>
    double violation_margin = 0.0; // <A^2> - <B^2>
    bool violated = false;
    double commutator = 0.0;       // commutator_norm(A, B)
};

struct OptimalViolation {
    DensityMatrix rho;
    double margin = 0.0;  // top eigenvalue of A^2 - B^2
    CVector amplitudes;   // the maximizing unit vector, phase-conventioned
};

struct SweepReport {
    int trials = 0;
    double max_margin = 0.0;
    int violations = 0;
};

using OperatorPair = std::pair<HermitianOperator, HermitianOperator>;

// The two-level pair used throughout the docs and tests: A has eigenstates
// |0> and |1> exactly, the triple (A, B, B-A) is valid, and a violating
// state exists.
OperatorPair canonical_pair();

// Two-level amplitudes (0.391, 0.920); norm^2 = 0.99928, accepted with
// renormalization.
CVector reference_amplitudes();

TripleValidity check_triple(const HermitianOperator& a, const HermitianOperator& b);

// Requires check_triple to pass; throws InvalidTriple naming the failed flag.
CriterionReport evaluate_criterion(const HermitianOperator& a, const HermitianOperator& b,
                                   const DensityMatrix& rho);

// Maximizes <A^2> - <B^2> over all states; the maximum is the top eigenvalue
// of A^2 - B^2 and is attained at the matching eigenvector.
OptimalViolation optimal_violation_state(const HermitianOperator& a, const HermitianOperator& b);

// A = M^dagger M, B = A + N^dagger N with M, N i.i.d. complex Gaussian.
// Valid by construction, deterministic per seed.
OperatorPair random_valid_pair(int dim, std::uint64_t seed);

// Shared random eigenbasis, eigenvalues a_i and a_i + c_i with a, c uniform
// in [0,1]; commuting and valid by construction.
OperatorPair commuting_valid_pair(int dim, std::uint64_t seed);

// Runs optimal_violation_state over `trials` commuting pairs; each trial uses
// substream (seed, trial), so the report is independent of worker count.
SweepReport commuting_sweep(int trials, int dim, std::uint64_t seed, int workers = 1);

}  // namespace vncrit::criterion
