#include "doctest.h"

#include <cmath>

#include "oracles.hpp"
#include "vncrit/criterion.hpp"
#include "vncrit/rng.hpp"

using namespace vncrit;
using criterion::canonical_pair;

namespace {

DensityMatrix random_state(int dim, Rng& rng) {
    return make_density(oracles::random_density(dim, rng));
}

HermitianOperator diag2(double x, double y) {
    Matrix m = Matrix::Zero(2, 2);
    m(0, 0) = x;
    m(1, 1) = y;
    return make_hermitian(m);
}

}  // namespace

TEST_CASE("check_triple on the canonical pair") {
    const auto [a, b] = canonical_pair();
    const criterion::TripleValidity v = criterion::check_triple(a, b);
    CHECK(v.all());
    CHECK(v.min_eig_a == doctest::Approx(0.0).epsilon(1e-12));
    CHECK(v.min_eig_b == doctest::Approx(1.0 - std::sqrt(2.0) / 2.0).epsilon(1e-12));
    CHECK(v.min_eig_diff == doctest::Approx(0.0).epsilon(1e-12));
}

TEST_CASE("check_triple boundary and failing cases") {
    const HermitianOperator id = make_hermitian(Matrix::Identity(2, 2));
    const HermitianOperator half = make_hermitian(0.5 * Matrix::Identity(2, 2));
    const criterion::TripleValidity v = criterion::check_triple(id, half);
    CHECK(v.a_psd);
    CHECK(v.b_psd);
    CHECK_FALSE(v.diff_psd);
    CHECK(v.min_eig_diff == doctest::Approx(-0.5));

    const HermitianOperator zero = make_hermitian(Matrix::Zero(2, 2));
    CHECK(criterion::check_triple(zero, zero).all());
}

TEST_CASE("evaluate_criterion at the optimal state") {
    const auto [a, b] = canonical_pair();
    const criterion::OptimalViolation optimal = criterion::optimal_violation_state(a, b);
    const criterion::CriterionReport report = criterion::evaluate_criterion(a, b, optimal.rho);

    // Closed form: top eigenvalue of [[-1.5,-1],[-1,-0.5]] is (-2+sqrt(5))/2.
    const double expected = (-2.0 + std::sqrt(5.0)) / 2.0;
    CHECK(report.violated);
    CHECK(report.violation_margin == doctest::Approx(expected).epsilon(1e-12));
    CHECK(report.first_moment_gap >= -1e-9);
    CHECK(report.commutator == doctest::Approx(0.5));
}

TEST_CASE("evaluate_criterion on non-violating and degenerate inputs") {
    const auto [a, b] = canonical_pair();

    CVector e0(2);
    e0 << Complex(1.0, 0.0), Complex(0.0, 0.0);
    const criterion::CriterionReport ground = criterion::evaluate_criterion(a, b, make_pure_state(e0));
    CHECK(ground.sq_a == doctest::Approx(1.0).epsilon(1e-14));
    CHECK(ground.sq_b == doctest::Approx(2.5).epsilon(1e-14));
    CHECK_FALSE(ground.violated);

    Rng rng(3);
    const criterion::CriterionReport same =
        criterion::evaluate_criterion(b, b, random_state(2, rng));
    CHECK(same.violation_margin == doctest::Approx(0.0).epsilon(1e-14));
    CHECK_FALSE(same.violated);
}

TEST_CASE("evaluate_criterion rejects invalid triples") {
    const HermitianOperator id = make_hermitian(Matrix::Identity(2, 2));
    const HermitianOperator half = make_hermitian(0.5 * Matrix::Identity(2, 2));
    Rng rng(4);
    CHECK_THROWS_WITH_AS(criterion::evaluate_criterion(id, half, random_state(2, rng)),
                         doctest::Contains("InvalidTriple"), Error);
}

TEST_CASE("optimal_violation_state agrees with the Bloch-sphere grid oracle") {
    const auto [a, b] = canonical_pair();
    const criterion::OptimalViolation optimal = criterion::optimal_violation_state(a, b);

    CHECK(std::abs(optimal.amplitudes(0)) == doctest::Approx(0.5257311121).epsilon(1e-6));
    CHECK(std::abs(optimal.amplitudes(1)) == doctest::Approx(0.8506508084).epsilon(1e-6));

    const double oracle = oracles::bloch_grid_max_margin(a.matrix(), b.matrix());
    CHECK(std::abs(optimal.margin - oracle) <= 1e-4);
    CHECK(optimal.margin >= oracle - 1e-9);  // eigensolver upper-bounds the grid
}

TEST_CASE("optimal_violation_state degenerate and commuting cases") {
    const auto [a, b] = canonical_pair();
    CHECK(criterion::optimal_violation_state(a, a).margin == doctest::Approx(0.0).epsilon(1e-14));

    // Diagonal arithmetic: eigenvalues of A^2 - B^2 are {1-4, 4-9}.
    const auto commuting = criterion::optimal_violation_state(diag2(1.0, 2.0), diag2(2.0, 3.0));
    CHECK(commuting.margin == doctest::Approx(-3.0).epsilon(1e-12));
}

TEST_CASE("optimal margin dominates a large random pure-state sample") {
    const auto [a, b] = canonical_pair();
    const criterion::OptimalViolation optimal = criterion::optimal_violation_state(a, b);
    const Matrix gap = a.matrix() * a.matrix() - b.matrix() * b.matrix();

    Rng rng(5);
    double sample_max = -std::numeric_limits<double>::infinity();
    for (int trial = 0; trial < 10000; ++trial) {
        const CVector v = oracles::random_unit_vector(2, rng);
        sample_max = std::max(sample_max, std::real(v.dot(gap * v)));
    }
    CHECK(optimal.margin >= sample_max - 1e-9);
    CHECK(sample_max >= optimal.margin - 1e-3);  // dense sample gets close in d=2
}

TEST_CASE("random_valid_pair is valid and deterministic") {
    for (const int dim : {1, 2, 3, 5}) {
        const auto [a, b] = criterion::random_valid_pair(dim, 1);
        CHECK(criterion::check_triple(a, b).all());
    }

    const auto [a1, b1] = criterion::random_valid_pair(2, 99);
    const auto [a2, b2] = criterion::random_valid_pair(2, 99);
    CHECK(max_abs_entry(a1.matrix() - a2.matrix()) == 0.0);
    CHECK(max_abs_entry(b1.matrix() - b2.matrix()) == 0.0);

    // Scalars commute: a 1x1 pair can never violate.
    const auto [sa, sb] = criterion::random_valid_pair(1, 17);
    CHECK(criterion::optimal_violation_state(sa, sb).margin <= 0.0);
}

TEST_CASE("commuting_valid_pair commutes and never violates") {
    for (std::uint64_t seed = 0; seed < 20; ++seed) {
        const int dim = 2 + static_cast<int>(seed % 4);
        const auto [a, b] = criterion::commuting_valid_pair(dim, seed);
        CHECK(commutator_norm(a, b) < 1e-10);
        CHECK(criterion::check_triple(a, b).all());
        CHECK(criterion::optimal_violation_state(a, b).margin <= 1e-9);
    }

    const auto [a1, b1] = criterion::commuting_valid_pair(2, 5);
    const auto [a2, b2] = criterion::commuting_valid_pair(2, 5);
    CHECK(max_abs_entry(a1.matrix() - a2.matrix()) == 0.0);
    CHECK(max_abs_entry(b1.matrix() - b2.matrix()) == 0.0);
}

TEST_CASE("commuting_sweep finds no violations and is worker-independent") {
    const criterion::SweepReport sequential = criterion::commuting_sweep(200, 3, 7, 1);
    CHECK(sequential.trials == 200);
    CHECK(sequential.violations == 0);
    CHECK(sequential.max_margin <= 1e-8);

    const criterion::SweepReport threaded = criterion::commuting_sweep(200, 3, 7, 4);
    CHECK(threaded.max_margin == sequential.max_margin);
    CHECK(threaded.violations == sequential.violations);

    const criterion::SweepReport empty = criterion::commuting_sweep(0, 2, 1, 1);
    CHECK(empty.trials == 0);
    CHECK(empty.violations == 0);
}

TEST_CASE("PSD difference forces nonnegative first-moment gaps") {
    Rng rng(21);
    for (const std::uint64_t seed : {2ull, 3ull, 4ull}) {
        const auto [a, b] = criterion::random_valid_pair(3, seed);
        for (int trial = 0; trial < 1000; ++trial) {
            const criterion::CriterionReport report =
                criterion::evaluate_criterion(a, b, random_state(3, rng));
            CHECK(report.first_moment_gap >= -1e-9);
        }
    }
}

TEST_CASE("violation implies noncommutation") {
    int violating_found = 0;
    for (std::uint64_t seed = 1; violating_found < 10 && seed < 200; ++seed) {
        const auto [a, b] = criterion::random_valid_pair(2, seed);
        const criterion::OptimalViolation optimal = criterion::optimal_violation_state(a, b);
        if (optimal.margin > criterion::kViolationTol) {
            ++violating_found;
            CHECK(commutator_norm(a, b) > 1e-8);
        }
    }
    CHECK(violating_found == 10);
}

TEST_CASE("criterion scales covariantly") {
    const auto [a, b] = canonical_pair();
    const criterion::OptimalViolation optimal = criterion::optimal_violation_state(a, b);
    const criterion::CriterionReport base = criterion::evaluate_criterion(a, b, optimal.rho);

    const double s = 3.0;
    const HermitianOperator sa = make_hermitian(s * a.matrix());
    const HermitianOperator sb = make_hermitian(s * b.matrix());
    const criterion::CriterionReport scaled = criterion::evaluate_criterion(sa, sb, optimal.rho);

    CHECK(scaled.first_moment_gap == doctest::Approx(s * base.first_moment_gap).epsilon(1e-12));
    CHECK(scaled.violation_margin == doctest::Approx(s * s * base.violation_margin).epsilon(1e-12));
    CHECK(scaled.violated == base.violated);
}
