#include "doctest.h"

#include <cmath>

#include "oracles.hpp"
#include "vncrit/criterion.hpp"
#include "vncrit/optics.hpp"
#include "vncrit/rng.hpp"

using namespace vncrit;
using criterion::canonical_pair;

namespace {

Eigen::Vector2cd reference_amps() {
    return Eigen::Vector2cd(Complex(0.391, 0.0), Complex(0.920, 0.0));
}

Eigen::Vector2cd random_amps(Rng& rng) {
    Eigen::Vector2cd a(rng.complex_normal(), rng.complex_normal());
    a.normalize();
    return a;
}

}  // namespace

TEST_CASE("tuning diagonalizes the observable it was built from") {
    const auto [a, b] = canonical_pair();

    for (const HermitianOperator* x : {&a, &b}) {
        const optics::InterferometerTuning tuning = optics::tuning_from_observable(*x);
        // U^dagger diag(w) U must rebuild the observable.
        Eigen::Matrix2cd rebuilt = tuning.unitary.adjoint() *
                                   Eigen::Vector2cd(tuning.weights[0], tuning.weights[1])
                                       .asDiagonal()
                                       .toDenseMatrix()
                                       .cast<Complex>() *
                                   tuning.unitary;
        CHECK(max_abs_entry(rebuilt - x->matrix()) <= 1e-12);
        CHECK(max_abs_entry((tuning.unitary.adjoint() * tuning.unitary) -
                            Eigen::Matrix2cd::Identity()) <= 1e-12);
        CHECK(tuning.weights[0] <= tuning.weights[1]);
    }

    const optics::InterferometerTuning tune_a = optics::tuning_from_observable(a);
    CHECK(tune_a.weights[0] == doctest::Approx(0.0).epsilon(1e-12));
    CHECK(tune_a.weights[1] == doctest::Approx(1.0).epsilon(1e-12));

    const optics::InterferometerTuning tune_b = optics::tuning_from_observable(b);
    CHECK(tune_b.weights[0] == doctest::Approx(1.0 - std::sqrt(2.0) / 2.0).epsilon(1e-12));
    CHECK(tune_b.weights[1] == doctest::Approx(1.0 + std::sqrt(2.0) / 2.0).epsilon(1e-12));

    const optics::InterferometerTuning tune_c = optics::tuning_from_observable(op_sub(b, a));
    CHECK(tune_c.weights[0] == doctest::Approx(0.0).epsilon(1e-12));
    CHECK(tune_c.weights[1] == doctest::Approx(1.0).epsilon(1e-12));

    CHECK_THROWS_WITH_AS(optics::tuning_from_observable(make_hermitian(Matrix::Identity(3, 3))),
                         doctest::Contains("WrongDimension"), Error);
}

TEST_CASE("generate_signal kinds and determinism") {
    const optics::ClassicalSignal constant = optics::generate_signal(optics::SignalKind::Constant, 8, 0);
    REQUIRE(constant.samples.size() == 8);
    for (const Complex z : constant.samples) CHECK(z == Complex(1.0, 0.0));

    const optics::ClassicalSignal g1 = optics::generate_signal(optics::SignalKind::GaussianNoise, 64, 5);
    const optics::ClassicalSignal g2 = optics::generate_signal(optics::SignalKind::GaussianNoise, 64, 5);
    for (std::size_t i = 0; i < g1.samples.size(); ++i) CHECK(g1.samples[i] == g2.samples[i]);

    double power = 0.0;
    for (const Complex z : g1.samples) power += std::norm(z);
    CHECK(power > 0.0);

    const optics::ClassicalSignal chirp = optics::generate_signal(optics::SignalKind::Chirp, 32, 0);
    for (const Complex z : chirp.samples) CHECK(std::abs(z) == doctest::Approx(1.0).epsilon(1e-12));

    CHECK_THROWS_AS(optics::generate_signal(optics::SignalKind::Constant, 0, 0), Error);
}

TEST_CASE("simulate reproduces Born statistics for the documented amplitudes") {
    const auto [a, b] = canonical_pair();
    const optics::InterferometerTuning tuning = optics::tuning_from_observable(a);

    // Born oracle: 0.391^2 / 0.999281.
    const CVector v = criterion::reference_amplitudes();
    const double expected = oracles::born_probability(v, 0);

    for (const optics::SignalKind kind :
         {optics::SignalKind::Constant, optics::SignalKind::GaussianNoise, optics::SignalKind::Chirp}) {
        const optics::ClassicalSignal signal = optics::generate_signal(kind, 4096, 11);
        const optics::OpticsResult result = optics::simulate(tuning, reference_amps(), signal);
        CHECK(std::abs(result.weighted_average - expected) <= 1e-12);
    }
}

TEST_CASE("simulate basics and edge cases") {
    const auto [a, b] = canonical_pair();
    const optics::InterferometerTuning tuning = optics::tuning_from_observable(a);
    const optics::ClassicalSignal probe = optics::generate_signal(optics::SignalKind::Constant, 8, 0);

    const optics::OpticsResult eigen_in =
        optics::simulate(tuning, Eigen::Vector2cd(Complex(1.0, 0.0), Complex(0.0, 0.0)), probe);
    CHECK(eigen_in.weighted_average == doctest::Approx(1.0).epsilon(1e-14));

    CHECK_THROWS_WITH_AS(optics::simulate(tuning, Eigen::Vector2cd::Zero(), probe),
                         doctest::Contains("ZeroAmplitudes"), Error);
}

TEST_CASE("difference-tuned averages are never negative for valid triples") {
    const auto [a, b] = canonical_pair();
    const optics::InterferometerTuning tuning = optics::tuning_from_observable(op_sub(b, a));
    const optics::ClassicalSignal probe = optics::generate_signal(optics::SignalKind::Constant, 8, 0);

    Rng rng(61);
    for (int trial = 0; trial < 1000; ++trial) {
        const optics::OpticsResult result = optics::simulate(tuning, random_amps(rng), probe);
        CHECK(result.weighted_average >= -1e-12);
    }
}

TEST_CASE("interferometer ports conserve energy") {
    Rng rng(62);
    for (int trial = 0; trial < 200; ++trial) {
        const HermitianOperator x = make_hermitian(oracles::random_hermitian(2, rng));
        const optics::InterferometerTuning tuning = optics::tuning_from_observable(x);
        Eigen::Vector2cd amps(rng.complex_normal(), rng.complex_normal());
        if (amps.squaredNorm() == 0.0) continue;
        const Eigen::Vector2cd out = tuning.unitary * amps;
        CHECK(out.squaredNorm() == doctest::Approx(amps.squaredNorm()).epsilon(1e-12));
    }
}

TEST_CASE("compare_with_quantum vanishes identically") {
    const auto [a, b] = canonical_pair();
    CHECK(optics::compare_with_quantum(a, reference_amps()) <= 1e-12);

    // <0| B |0> = 1.5: matrix element via eigen-input.
    const optics::InterferometerTuning tune_b = optics::tuning_from_observable(b);
    const optics::ClassicalSignal probe = optics::generate_signal(optics::SignalKind::Constant, 8, 0);
    const optics::OpticsResult r =
        optics::simulate(tune_b, Eigen::Vector2cd(Complex(1.0, 0.0), Complex(0.0, 0.0)), probe);
    CHECK(r.weighted_average == doctest::Approx(1.5).epsilon(1e-14));
    CHECK(optics::compare_with_quantum(b, Eigen::Vector2cd(Complex(1.0, 0.0), Complex(0.0, 0.0))) <=
          1e-12);

    // Any eigenvector maps to its eigenvalue.
    const SpectralDecomposition spec = spectral_decompose(b);
    const Eigen::Vector2cd eigvec(spec.eigenvectors(0, 0), spec.eigenvectors(1, 0));
    CHECK(optics::compare_with_quantum(b, eigvec) <= 1e-12);

    Rng rng(63);
    for (int trial = 0; trial < 1000; ++trial) {
        const HermitianOperator x = make_hermitian(oracles::random_hermitian(2, rng));
        CHECK(optics::compare_with_quantum(x, random_amps(rng)) <= 1e-10);
    }
}

TEST_CASE("squared-weight tunings reproduce the violating second moments") {
    const auto [a, b] = canonical_pair();
    const criterion::OptimalViolation optimal = criterion::optimal_violation_state(a, b);
    Eigen::Vector2cd amps(optimal.amplitudes(0), optimal.amplitudes(1));
    const optics::ClassicalSignal probe = optics::generate_signal(optics::SignalKind::Constant, 8, 0);

    const double e_a2 =
        optics::simulate(optics::squared_weights(optics::tuning_from_observable(a)), amps, probe)
            .weighted_average;
    const double e_b2 =
        optics::simulate(optics::squared_weights(optics::tuning_from_observable(b)), amps, probe)
            .weighted_average;

    CHECK(std::abs(e_a2 - expectation(optimal.rho, op_square(a))) <= 1e-12);
    CHECK(std::abs(e_b2 - expectation(optimal.rho, op_square(b))) <= 1e-12);
    CHECK(e_a2 - e_b2 == doctest::Approx(optimal.margin).epsilon(1e-10));
    CHECK(e_a2 > e_b2);  // the classical device realizes the violation
}
