#include "vncrit/hvmodels.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <thread>

#include "vncrit/rng.hpp"

namespace vncrit::hv {

namespace {

constexpr long long kSampleBlock = 8192;  // fixed partition size contract
constexpr double kSumRuleTol = 1e-9;

// Born alphabet with degenerate eigenvalues merged into one outcome whose
// probability is the cluster projector's weight.
OutcomeAlphabet born_alphabet(const HermitianOperator& x, const DensityMatrix& rho,
                              ObservableTag label) {
    const SpectralDecomposition spec = spectral_decompose(x);
    const Eigen::Index n = spec.eigenvalues.size();

    OutcomeAlphabet alphabet;
    alphabet.label = label;

    Eigen::Index lo = 0;
    for (Eigen::Index k = 1; k <= n; ++k) {
        const bool split =
            (k == n) || (spec.eigenvalues(k) - spec.eigenvalues(k - 1) >= kDegenerateGap);
        if (!split) continue;

        double value = 0.0;
        double prob = 0.0;
        for (Eigen::Index i = lo; i < k; ++i) {
            value += spec.eigenvalues(i);
            const Complex q = spec.eigenvectors.col(i).dot(rho.matrix() * spec.eigenvectors.col(i));
            prob += q.real();
        }
        value /= static_cast<double>(k - lo);
        if (prob < -1e-10)
            throw Error(Errc::InternalError, "Born probability came out negative");
        alphabet.values.push_back(value);
        alphabet.probabilities.push_back(std::max(0.0, prob));
        lo = k;
    }
    return alphabet;
}

HiddenVariableModel product_model(std::vector<OutcomeAlphabet> alphabets,
                                  const DensityMatrix& rho) {
    HiddenVariableModel model;
    model.alphabets = std::move(alphabets);
    model.factorized = true;
    model.rho = rho.matrix();

    model.joint.assign(model.outcome_count(), 1.0);
    for (std::size_t r = 0; r < model.joint.size(); ++r) {
        const std::vector<std::size_t> idx = model.unrank(r);
        for (std::size_t ax = 0; ax < model.alphabets.size(); ++ax)
            model.joint[r] *= model.alphabets[ax].probabilities[idx[ax]];
    }
    model.validate();
    return model;
}

void require_power(int power) {
    if (power != 1 && power != 2)
        throw Error(Errc::BadFlag, "moment power must be 1 or 2, got " + std::to_string(power));
}

std::vector<double> cumulative(const std::vector<double>& joint) {
    std::vector<double> cdf(joint.size());
    double run = 0.0;
    for (std::size_t i = 0; i < joint.size(); ++i) {
        run += joint[i];
        cdf[i] = run;
    }
    cdf.back() = std::max(cdf.back(), 1.0);  // guard the top bin against round-off
    return cdf;
}

}  // namespace

std::size_t HiddenVariableModel::outcome_count() const {
    std::size_t count = 1;
    for (const auto& alphabet : alphabets) count *= alphabet.values.size();
    return count;
}

std::size_t HiddenVariableModel::rank(const std::vector<std::size_t>& indices) const {
    std::size_t r = 0;
    for (std::size_t ax = 0; ax < alphabets.size(); ++ax)
        r = r * alphabets[ax].values.size() + indices[ax];
    return r;
}

std::vector<std::size_t> HiddenVariableModel::unrank(std::size_t rank) const {
    std::vector<std::size_t> idx(alphabets.size());
    for (std::size_t ax = alphabets.size(); ax-- > 0;) {
        const std::size_t base = alphabets[ax].values.size();
        idx[ax] = rank % base;
        rank /= base;
    }
    return idx;
}

int HiddenVariableModel::alphabet_index(ObservableTag tag) const {
    for (std::size_t ax = 0; ax < alphabets.size(); ++ax)
        if (alphabets[ax].label == tag) return static_cast<int>(ax);
    return -1;
}

void HiddenVariableModel::validate() const {
    if (alphabets.size() != 2 && alphabets.size() != 3)
        throw Error(Errc::SchemaViolation, "model must carry 2 or 3 alphabets");
    if (joint.size() != outcome_count())
        throw Error(Errc::SchemaViolation, "joint table size does not match the alphabets");

    double total = 0.0;
    for (const double p : joint) {
        if (p < 0.0) throw Error(Errc::SchemaViolation, "joint table has a negative entry");
        total += p;
    }
    if (std::abs(total - 1.0) > 1e-12)
        throw Error(Errc::SchemaViolation, "joint table sums to " + std::to_string(total));

    for (const auto& alphabet : alphabets) {
        if (alphabet.values.size() != alphabet.probabilities.size() || alphabet.values.empty())
            throw Error(Errc::SchemaViolation, "alphabet values/probabilities mismatch");
        double sum = 0.0;
        for (const double p : alphabet.probabilities) {
            if (p < 0.0) throw Error(Errc::SchemaViolation, "negative alphabet probability");
            sum += p;
        }
        if (std::abs(sum - 1.0) > 1e-12)
            throw Error(Errc::SchemaViolation, "alphabet probabilities sum to " +
                                                   std::to_string(sum));
        if (!std::is_sorted(alphabet.values.begin(), alphabet.values.end()))
            throw Error(Errc::SchemaViolation, "alphabet values are not ascending");
    }

    // Marginals must reproduce the alphabets; in the factorized case the
    // table must equal the product exactly.
    for (std::size_t ax = 0; ax < alphabets.size(); ++ax) {
        std::vector<double> marginal(alphabets[ax].values.size(), 0.0);
        for (std::size_t r = 0; r < joint.size(); ++r) marginal[unrank(r)[ax]] += joint[r];
        for (std::size_t i = 0; i < marginal.size(); ++i)
            if (std::abs(marginal[i] - alphabets[ax].probabilities[i]) > 1e-12)
                throw Error(Errc::SchemaViolation, "joint marginal deviates from alphabet");
    }
    if (factorized) {
        for (std::size_t r = 0; r < joint.size(); ++r) {
            double prod = 1.0;
            const std::vector<std::size_t> idx = unrank(r);
            for (std::size_t ax = 0; ax < alphabets.size(); ++ax)
                prod *= alphabets[ax].probabilities[idx[ax]];
            if (std::abs(prod - joint[r]) > 1e-14)
                throw Error(Errc::SchemaViolation, "joint table is not the product of marginals");
        }
    }
}

HiddenVariableModel build_pair_model(const HermitianOperator& a, const HermitianOperator& b,
                                     const DensityMatrix& rho) {
    if (a.dim() != b.dim() || a.dim() != rho.dim())
        throw Error(Errc::DimensionMismatch, "pair model inputs have mixed dimensions");
    std::vector<OutcomeAlphabet> alphabets;
    alphabets.push_back(born_alphabet(a, rho, ObservableTag::A));
    alphabets.push_back(born_alphabet(b, rho, ObservableTag::B));
    return product_model(std::move(alphabets), rho);
}

HiddenVariableModel build_triple_model(const HermitianOperator& a, const HermitianOperator& b,
                                       const DensityMatrix& rho) {
    if (a.dim() != b.dim() || a.dim() != rho.dim())
        throw Error(Errc::DimensionMismatch, "triple model inputs have mixed dimensions");
    const HermitianOperator c = op_sub(b, a);
    if (!is_psd(c).psd)
        throw Error(Errc::InvalidTriple, "B - A is not PSD; the triple construction needs C >= 0");

    std::vector<OutcomeAlphabet> alphabets;
    alphabets.push_back(born_alphabet(a, rho, ObservableTag::A));
    alphabets.push_back(born_alphabet(b, rho, ObservableTag::B));
    alphabets.push_back(born_alphabet(c, rho, ObservableTag::C));
    return product_model(std::move(alphabets), rho);
}

double moment(const HiddenVariableModel& model, ObservableTag tag, int power) {
    require_power(power);
    const int ax = model.alphabet_index(tag);
    if (ax < 0)
        throw Error(Errc::UnknownTag,
                    std::string("model has no observable tagged ") + tag_name(tag));

    double sum = 0.0;
    for (std::size_t r = 0; r < model.joint.size(); ++r) {
        const double value = model.alphabets[ax].values[model.unrank(r)[ax]];
        sum += model.joint[r] * (power == 1 ? value : value * value);
    }
    return sum;
}

double moment_variance(const HiddenVariableModel& model, ObservableTag tag, int power) {
    require_power(power);
    const int ax = model.alphabet_index(tag);
    if (ax < 0)
        throw Error(Errc::UnknownTag,
                    std::string("model has no observable tagged ") + tag_name(tag));

    const auto& alphabet = model.alphabets[ax];
    double first = 0.0, second = 0.0;
    for (std::size_t i = 0; i < alphabet.values.size(); ++i) {
        const double x = power == 1 ? alphabet.values[i] : alphabet.values[i] * alphabet.values[i];
        first += alphabet.probabilities[i] * x;
        second += alphabet.probabilities[i] * x * x;
    }
    return std::max(0.0, second - first * first);
}

EmpiricalReport sample(const HiddenVariableModel& model, long long n, std::uint64_t seed,
                       int workers) {
    if (n < 1) throw Error(Errc::BadFlag, "sample count must be >= 1");

    const std::vector<double> cdf = cumulative(model.joint);
    const long long blocks = (n + kSampleBlock - 1) / kSampleBlock;

    EmpiricalReport report;
    report.n = n;
    report.counts.assign(model.joint.size(), 0);
    report.draws.resize(static_cast<std::size_t>(n));

    // Block b always covers draws [b*kSampleBlock, ...) with substream
    // (seed, b), whichever worker runs it.
    auto run_block = [&](long long b) {
        Rng rng = Rng::substream(seed, static_cast<std::uint64_t>(b));
        const long long begin = b * kSampleBlock;
        const long long end = std::min(n, begin + kSampleBlock);
        for (long long i = begin; i < end; ++i) {
            const double u = rng.uniform01();
            const auto it = std::upper_bound(cdf.begin(), cdf.end(), u);
            const std::size_t rank = std::min<std::size_t>(it - cdf.begin(), cdf.size() - 1);
            report.draws[static_cast<std::size_t>(i)] = static_cast<std::uint32_t>(rank);
        }
    };

    const int used = static_cast<int>(std::max<long long>(1, std::min<long long>(workers, blocks)));
    if (used == 1) {
        for (long long b = 0; b < blocks; ++b) run_block(b);
    } else {
        std::vector<std::thread> pool;
        pool.reserve(used);
        for (int w = 0; w < used; ++w)
            pool.emplace_back([&, w]() {
                for (long long b = w; b < blocks; b += used) run_block(b);
            });
        for (auto& th : pool) th.join();
    }

    for (const std::uint32_t rank : report.draws) ++report.counts[rank];

    report.empirical_mean.assign(model.alphabets.size(), 0.0);
    report.empirical_sq.assign(model.alphabets.size(), 0.0);
    for (std::size_t r = 0; r < report.counts.size(); ++r) {
        if (report.counts[r] == 0) continue;
        const double weight = static_cast<double>(report.counts[r]) / static_cast<double>(n);
        const std::vector<std::size_t> idx = model.unrank(r);
        for (std::size_t ax = 0; ax < model.alphabets.size(); ++ax) {
            const double value = model.alphabets[ax].values[idx[ax]];
            report.empirical_mean[ax] += weight * value;
            report.empirical_sq[ax] += weight * value * value;
        }
    }
    return report;
}

ValuationAudit audit_valuations(const HiddenVariableModel& model, long long n, std::uint64_t seed,
                                int workers) {
    if (model.alphabets.size() != 3)
        throw Error(Errc::SchemaViolation, "valuation audit needs a triple model");

    const EmpiricalReport report = sample(model, n, seed, workers);

    ValuationAudit audit;
    audit.samples = report.n;
    long long negative = 0, sum_rule = 0;
    double min_vc = std::numeric_limits<double>::infinity();
    for (const std::uint32_t rank : report.draws) {
        const std::vector<std::size_t> idx = model.unrank(rank);
        const double va = model.alphabets[0].values[idx[0]];
        const double vb = model.alphabets[1].values[idx[1]];
        const double vc = model.alphabets[2].values[idx[2]];
        if (vb - va < 0.0) ++negative;
        if (std::abs(vc - (vb - va)) < kSumRuleTol) ++sum_rule;
        min_vc = std::min(min_vc, vc);
    }
    audit.frac_negative_diff = static_cast<double>(negative) / static_cast<double>(report.n);
    audit.frac_sum_rule_holds = static_cast<double>(sum_rule) / static_cast<double>(report.n);
    audit.min_vC = min_vc;
    return audit;
}

std::vector<DispersionFreeValuation> joint_eigenbasis_valuation(const HermitianOperator& a,
                                                                const HermitianOperator& b) {
    if (a.dim() != b.dim())
        throw Error(Errc::DimensionMismatch, "operators have different dimensions");
    if (commutator_norm(a, b) >= 1e-10)
        throw Error(Errc::NotCommuting, "operators do not commute; no joint eigenbasis exists");

    // Diagonalize A, then diagonalize B restricted to each degenerate
    // eigenspace of A; the result is a simultaneous eigenbasis.
    const SpectralDecomposition spec_a = spectral_decompose(a);
    const Eigen::Index n = spec_a.eigenvalues.size();
    Matrix basis = spec_a.eigenvectors;

    Eigen::Index lo = 0;
    for (Eigen::Index k = 1; k <= n; ++k) {
        const bool split =
            (k == n) || (spec_a.eigenvalues(k) - spec_a.eigenvalues(k - 1) >= kDegenerateGap);
        if (!split) continue;
        const Eigen::Index width = k - lo;
        if (width > 1) {
            const Matrix block = basis.middleCols(lo, width);
            const Matrix restricted = block.adjoint() * b.matrix() * block;
            Eigen::SelfAdjointEigenSolver<Matrix> solver(0.5 * (restricted + restricted.adjoint()));
            if (solver.info() != Eigen::Success)
                throw Error(Errc::ConvergenceFailure, "restricted eigensolver did not converge");
            basis.middleCols(lo, width) = block * solver.eigenvectors();
        }
        lo = k;
    }

    std::vector<DispersionFreeValuation> valuations;
    valuations.reserve(static_cast<std::size_t>(n));
    for (Eigen::Index i = 0; i < n; ++i) {
        const CVector v = basis.col(i);
        DispersionFreeValuation val;
        val.v_a = spec_a.eigenvalues(i);
        val.v_b = std::real(v.dot(b.matrix() * v));
        val.v_diff = val.v_b - val.v_a;
        valuations.push_back(val);
    }
    return valuations;
}

}  // namespace vncrit::hv
