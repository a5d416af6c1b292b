#pragma once

#include <array>
#include <cstdint>
#include <string>
#include <vector>

#include "vncrit/opalg.hpp"

namespace vncrit::optics {

enum class SignalKind { Constant, GaussianNoise, Chirp };

const char* signal_kind_name(SignalKind kind);
SignalKind signal_kind_from_name(const std::string& name);

// A two-port tuning: rows of `unitary` are the observable's conjugated
// eigenvectors, so a' = U a expresses the input in the eigenbasis and
// detector i carries weight weights[i] (the matching eigenvalue).
struct InterferometerTuning {
    Eigen::Matrix2cd unitary;
    std::array<double, 2> weights{};
    ObservableTag observable_tag = ObservableTag::A;
};

// Classical analytic signal sampled at discrete ticks.
struct ClassicalSignal {
    std::vector<Complex> samples;
    SignalKind kind = SignalKind::Constant;
    std::uint64_t seed = 0;
};

struct OpticsResult {
    double weighted_average = 0.0;
    std::array<double, 2> per_detector_intensity{};  // time-integrated |a'_i I(t)|^2
    double normalization = 0.0;                      // time-integrated |I(t)|^2
};

InterferometerTuning tuning_from_observable(const HermitianOperator& x,
                                            ObservableTag tag = ObservableTag::A);

// Same ports, weights squared: the classical readout for X^2 (measure X,
// square the number).
InterferometerTuning squared_weights(const InterferometerTuning& tuning);

ClassicalSignal generate_signal(SignalKind kind, int n, std::uint64_t seed);

// Weighted detector averages for input amplitudes `a`; the signal's overall
// intensity cancels in the ratio, and the implementation checks it does.
OpticsResult simulate(const InterferometerTuning& tuning, const Eigen::Vector2cd& amplitudes,
                      const ClassicalSignal& signal);

// |classical weighted average - Tr(rho_a X)| with a constant probe signal.
double compare_with_quantum(const HermitianOperator& x, const Eigen::Vector2cd& amplitudes);

}  // namespace vncrit::optics
