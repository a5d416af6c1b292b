#include "vncrit/optics.hpp"

#include <cmath>

#include "vncrit/rng.hpp"

namespace vncrit::optics {

namespace {

constexpr double kUnitaryTol = 1e-12;
constexpr double kCancellationTol = 1e-12;
constexpr int kProbeSamples = 8;

void require_signal(const ClassicalSignal& signal) {
    if (signal.samples.empty())
        throw Error(Errc::SchemaViolation, "signal has no samples");
    double peak = 0.0;
    for (const Complex z : signal.samples) {
        if (!std::isfinite(z.real()) || !std::isfinite(z.imag()))
            throw Error(Errc::NonFinite, "signal has NaN or Inf samples");
        peak = std::max(peak, std::norm(z));
    }
    if (peak <= 0.0) throw Error(Errc::SchemaViolation, "signal carries no intensity");
}

}  // namespace

const char* signal_kind_name(SignalKind kind) {
    switch (kind) {
        case SignalKind::Constant: return "constant";
        case SignalKind::GaussianNoise: return "gaussian-noise";
        case SignalKind::Chirp: return "chirp";
    }
    return "?";
}

SignalKind signal_kind_from_name(const std::string& name) {
    if (name == "constant") return SignalKind::Constant;
    if (name == "gaussian-noise") return SignalKind::GaussianNoise;
    if (name == "chirp") return SignalKind::Chirp;
    throw Error(Errc::BadFlag, "unknown signal kind '" + name + "'");
}

InterferometerTuning tuning_from_observable(const HermitianOperator& x, ObservableTag tag) {
    if (x.dim() != 2)
        throw Error(Errc::WrongDimension,
                    "interferometer tunings are two-port; got dimension " +
                        std::to_string(x.dim()));

    const SpectralDecomposition spec = spectral_decompose(x);

    InterferometerTuning tuning;
    tuning.unitary = spec.eigenvectors.adjoint();  // rows = conjugated eigenvectors
    tuning.weights = {spec.eigenvalues(0), spec.eigenvalues(1)};
    tuning.observable_tag = tag;

    const Eigen::Matrix2cd gram = tuning.unitary.adjoint() * tuning.unitary;
    if (max_abs_entry(gram - Eigen::Matrix2cd::Identity()) > kUnitaryTol)
        throw Error(Errc::InternalError, "tuning matrix failed the unitarity check");
    return tuning;
}

InterferometerTuning squared_weights(const InterferometerTuning& tuning) {
    InterferometerTuning squared = tuning;
    squared.weights = {tuning.weights[0] * tuning.weights[0],
                       tuning.weights[1] * tuning.weights[1]};
    return squared;
}

ClassicalSignal generate_signal(SignalKind kind, int n, std::uint64_t seed) {
    if (n < 1) throw Error(Errc::BadFlag, "signal length must be >= 1");

    ClassicalSignal signal;
    signal.kind = kind;
    signal.seed = seed;
    signal.samples.reserve(static_cast<std::size_t>(n));

    Rng rng(mix_seed(seed, 2));
    for (int t = 0; t < n; ++t) {
        switch (kind) {
            case SignalKind::Constant:
                signal.samples.emplace_back(1.0, 0.0);
                break;
            case SignalKind::GaussianNoise:
                signal.samples.push_back(rng.complex_normal());
                break;
            case SignalKind::Chirp: {
                const double phase =
                    3.14159265358979323846 * static_cast<double>(t) * static_cast<double>(t) /
                    static_cast<double>(n);
                signal.samples.emplace_back(std::cos(phase), std::sin(phase));
                break;
            }
        }
    }
    require_signal(signal);
    return signal;
}

OpticsResult simulate(const InterferometerTuning& tuning, const Eigen::Vector2cd& amplitudes,
                      const ClassicalSignal& signal) {
    for (int i = 0; i < 2; ++i) {
        const Complex z = amplitudes(i);
        if (!std::isfinite(z.real()) || !std::isfinite(z.imag()))
            throw Error(Errc::NonFinite, "input amplitudes have NaN or Inf entries");
    }
    const double input_power = amplitudes.squaredNorm();
    if (input_power == 0.0) throw Error(Errc::ZeroAmplitudes, "both input amplitudes are zero");
    require_signal(signal);

    const Eigen::Vector2cd out = tuning.unitary * amplitudes;
    const std::array<double, 2> port_power = {std::norm(out(0)), std::norm(out(1))};

    OpticsResult result;
    for (const Complex z : signal.samples) {
        const double intensity = std::norm(z);
        result.normalization += intensity;
        result.per_detector_intensity[0] += port_power[0] * intensity;
        result.per_detector_intensity[1] += port_power[1] * intensity;
    }

    result.weighted_average = (tuning.weights[0] * result.per_detector_intensity[0] +
                               tuning.weights[1] * result.per_detector_intensity[1]) /
                              (result.normalization * input_power);

    // The signal intensity must cancel in the ratio.
    const double direct =
        (tuning.weights[0] * port_power[0] + tuning.weights[1] * port_power[1]) / input_power;
    if (std::abs(result.weighted_average - direct) > kCancellationTol)
        throw Error(Errc::InternalError, "signal cancellation check failed");
    return result;
}

double compare_with_quantum(const HermitianOperator& x, const Eigen::Vector2cd& amplitudes) {
    const InterferometerTuning tuning = tuning_from_observable(x);
    const ClassicalSignal probe = generate_signal(SignalKind::Constant, kProbeSamples, 0);
    const double classical = simulate(tuning, amplitudes, probe).weighted_average;

    CVector amps(2);
    amps << amplitudes(0), amplitudes(1);
    const double quantum = expectation(make_pure_state(amps), x);
    return std::abs(classical - quantum);
}

}  // namespace vncrit::optics
