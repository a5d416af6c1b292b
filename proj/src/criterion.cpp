#include "vncrit/criterion.hpp"

#include <algorithm>
#include <thread>
#include <vector>

#include "vncrit/rng.hpp"

namespace vncrit::criterion {

namespace {

Matrix random_complex_matrix(int dim, Rng& rng) {
    Matrix m(dim, dim);
    for (int i = 0; i < dim; ++i)
        for (int j = 0; j < dim; ++j) m(i, j) = rng.complex_normal();
    return m;
}

void require_dim_range(int dim) {
    if (dim < 1 || dim > kMaxDim)
        throw Error(Errc::DimensionTooLarge,
                    "dimension " + std::to_string(dim) + " outside [1, " +
                        std::to_string(kMaxDim) + "]");
}

// Run fn(t) for t in [0, count) across `workers` threads. Each unit is
// independent and indexed, so the merged result never depends on the split.
template <typename Fn>
void parallel_trials(int count, int workers, Fn&& fn) {
    workers = std::max(1, std::min(workers, count));
    if (workers == 1) {
        for (int t = 0; t < count; ++t) fn(t);
        return;
    }
    std::vector<std::thread> pool;
    pool.reserve(workers);
    for (int w = 0; w < workers; ++w) {
        pool.emplace_back([=]() {
            for (int t = w; t < count; t += workers) fn(t);
        });
    }
    for (auto& th : pool) th.join();
}

}  // namespace

OperatorPair canonical_pair() {
    Matrix a(2, 2), b(2, 2);
    a << 1.0, 0.0, 0.0, 0.0;
    b << 1.5, 0.5, 0.5, 0.5;
    return {make_hermitian(a), make_hermitian(b)};
}

CVector reference_amplitudes() {
    CVector v(2);
    v << Complex(0.391, 0.0), Complex(0.920, 0.0);
    return v;
}

TripleValidity check_triple(const HermitianOperator& a, const HermitianOperator& b) {
    if (a.dim() != b.dim())
        throw Error(Errc::DimensionMismatch, "A is " + std::to_string(a.dim()) + "-dim, B is " +
                                                 std::to_string(b.dim()) + "-dim");
    const PsdCheck pa = is_psd(a);
    const PsdCheck pb = is_psd(b);
    const PsdCheck pd = is_psd(op_sub(b, a));

    TripleValidity out;
    out.a_psd = pa.psd;
    out.b_psd = pb.psd;
    out.diff_psd = pd.psd;
    out.min_eig_a = pa.min_eigenvalue;
    out.min_eig_b = pb.min_eigenvalue;
    out.min_eig_diff = pd.min_eigenvalue;
    return out;
}

CriterionReport evaluate_criterion(const HermitianOperator& a, const HermitianOperator& b,
                                   const DensityMatrix& rho) {
    const TripleValidity validity = check_triple(a, b);
    if (!validity.all()) {
        std::string which;
        if (!validity.a_psd) which = "A is not PSD";
        else if (!validity.b_psd) which = "B is not PSD";
        else which = "B - A is not PSD";
        throw Error(Errc::InvalidTriple, which);
    }
    if (rho.dim() != a.dim())
        throw Error(Errc::DimensionMismatch, "state dimension does not match the pair");

    CriterionReport report;
    report.mean_a = expectation(rho, a);
    report.mean_b = expectation(rho, b);
    report.sq_a = expectation(rho, op_square(a));
    report.sq_b = expectation(rho, op_square(b));
    report.first_moment_gap = report.mean_b - report.mean_a;
    report.violation_margin = report.sq_a - report.sq_b;
    report.violated = report.violation_margin > kViolationTol;
    report.commutator = commutator_norm(a, b);
    return report;
}

OptimalViolation optimal_violation_state(const HermitianOperator& a, const HermitianOperator& b) {
    const TripleValidity validity = check_triple(a, b);
    if (!validity.all()) throw Error(Errc::InvalidTriple, "triple is not valid");

    const HermitianOperator gap = op_sub(op_square(a), op_square(b));
    const SpectralDecomposition spec = spectral_decompose(gap);
    const Eigen::Index n = spec.eigenvalues.size();
    const double margin = spec.eigenvalues(n - 1);

    // Lowest-index vector of the top cluster; any maximizer is acceptable.
    Eigen::Index pick = n - 1;
    while (pick > 0 && margin - spec.eigenvalues(pick - 1) < kDegenerateGap) --pick;

    const CVector state = spec.eigenvectors.col(pick);
    return {make_pure_state(state), margin, state};
}

OperatorPair random_valid_pair(int dim, std::uint64_t seed) {
    require_dim_range(dim);
    Rng rng(mix_seed(seed, 0));
    const Matrix m = random_complex_matrix(dim, rng);
    const Matrix n = random_complex_matrix(dim, rng);
    const HermitianOperator a = make_hermitian(m.adjoint() * m);
    const HermitianOperator c = make_hermitian(n.adjoint() * n);
    return {a, op_add(a, c)};
}

OperatorPair commuting_valid_pair(int dim, std::uint64_t seed) {
    require_dim_range(dim);
    Rng rng(mix_seed(seed, 1));
    const Matrix g = random_complex_matrix(dim, rng);
    const Matrix basis = Eigen::HouseholderQR<Matrix>(g).householderQ();

    Eigen::VectorXd a(dim), c(dim);
    for (int i = 0; i < dim; ++i) a(i) = rng.uniform01();
    for (int i = 0; i < dim; ++i) c(i) = rng.uniform01();

    const Matrix ma = basis * a.asDiagonal() * basis.adjoint();
    const Matrix mb = basis * (a + c).asDiagonal() * basis.adjoint();
    return {make_hermitian(ma), make_hermitian(mb)};
}

SweepReport commuting_sweep(int trials, int dim, std::uint64_t seed, int workers) {
    SweepReport report;
    report.trials = std::max(0, trials);
    if (report.trials == 0) return report;

    std::vector<double> margins(report.trials);
    parallel_trials(report.trials, workers, [&](int t) {
        const auto [a, b] = commuting_valid_pair(dim, mix_seed(seed, static_cast<std::uint64_t>(t)));
        margins[t] = optimal_violation_state(a, b).margin;
    });

    report.max_margin = *std::max_element(margins.begin(), margins.end());
    report.violations = static_cast<int>(
        std::count_if(margins.begin(), margins.end(), [](double m) { return m > kViolationTol; }));
    return report;
}

}  // namespace vncrit::criterion
