#pragma once

#include <cstdint>
#include <vector>

#include "vncrit/opalg.hpp"

namespace vncrit::hv {

// One observable's classical outcome alphabet: merged eigenvalues (ascending)
// with their Born probabilities under the model's state.
struct OutcomeAlphabet {
    ObservableTag label = ObservableTag::A;
    std::vector<double> values;
    std::vector<double> probabilities;
};

// Factorized joint distribution over outcome tuples. The joint table is
// stored flat in lexicographic order of the outcome indices.
struct HiddenVariableModel {
    std::vector<OutcomeAlphabet> alphabets;  // 2 (pair) or 3 (triple)
    std::vector<double> joint;
    bool factorized = true;
    Matrix rho;  // state the Born weights were computed from

    std::size_t outcome_count() const;
    std::size_t rank(const std::vector<std::size_t>& indices) const;
    std::vector<std::size_t> unrank(std::size_t rank) const;
    int alphabet_index(ObservableTag tag) const;  // -1 when absent

    // Rechecks the construction invariants: nonnegative joint summing to 1,
    // exact product form when factorized, marginals matching the alphabets.
    void validate() const;
};

struct EmpiricalReport {
    long long n = 0;
    std::vector<long long> counts;          // per joint outcome rank
    std::vector<double> empirical_mean;     // per alphabet
    std::vector<double> empirical_sq;       // per alphabet
    std::vector<std::uint32_t> draws;       // outcome ranks in draw order
};

// One simultaneous eigenvector's deterministic assignment.
struct DispersionFreeValuation {
    double v_a = 0.0;
    double v_b = 0.0;
    double v_diff = 0.0;  // v(B-A) = v_b - v_a, exact for joint eigenvectors
};

struct ValuationAudit {
    long long samples = 0;
    double frac_negative_diff = 0.0;  // fraction of draws with v(B) - v(A) < 0
    double min_vC = 0.0;
    double frac_sum_rule_holds = 0.0; // fraction with |v(C) - (v(B)-v(A))| < 1e-9
};

// P(A_i, B_j) = P(A_i|rho) P(B_j|rho): independent outcomes, quantum marginals.
HiddenVariableModel build_pair_model(const HermitianOperator& a, const HermitianOperator& b,
                                     const DensityMatrix& rho);

// P(A_i, B_j, C_k) with C = B - A, which must be PSD.
HiddenVariableModel build_triple_model(const HermitianOperator& a, const HermitianOperator& b,
                                       const DensityMatrix& rho);

// E[X^power] straight from the joint table; power is 1 or 2.
double moment(const HiddenVariableModel& model, ObservableTag tag, int power);

// Fourth/second central spread for the sampling error bound: Var(X^power).
double moment_variance(const HiddenVariableModel& model, ObservableTag tag, int power);

// n i.i.d. inverse-CDF draws in fixed blocks so the merged report is
// identical for every worker count.
EmpiricalReport sample(const HiddenVariableModel& model, long long n, std::uint64_t seed,
                       int workers = 1);

ValuationAudit audit_valuations(const HiddenVariableModel& model, long long n, std::uint64_t seed,
                                int workers = 1);

// Requires [A,B] = 0: per joint eigenvector, v(A), v(B) and v(B-A) with the
// sum rule exact.
std::vector<DispersionFreeValuation> joint_eigenbasis_valuation(const HermitianOperator& a,
                                                                const HermitianOperator& b);

}  // namespace vncrit::hv
