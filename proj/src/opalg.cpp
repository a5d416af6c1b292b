#include "vncrit/opalg.hpp"

#include <Eigen/Eigenvalues>
#include <algorithm>
#include <cmath>

namespace vncrit {

const char* errc_name(Errc code) {
    switch (code) {
        case Errc::NonSquare: return "NonSquare";
        case Errc::NotHermitian: return "NotHermitian";
        case Errc::NonFinite: return "NonFinite";
        case Errc::ConvergenceFailure: return "ConvergenceFailure";
        case Errc::DimensionMismatch: return "DimensionMismatch";
        case Errc::DimensionTooLarge: return "DimensionTooLarge";
        case Errc::ImaginaryResidue: return "ImaginaryResidue";
        case Errc::ZeroVector: return "ZeroVector";
        case Errc::NormTooFarFromUnit: return "NormTooFarFromUnit";
        case Errc::InvalidTriple: return "InvalidTriple";
        case Errc::UnknownTag: return "UnknownTag";
        case Errc::NotCommuting: return "NotCommuting";
        case Errc::WrongDimension: return "WrongDimension";
        case Errc::ZeroAmplitudes: return "ZeroAmplitudes";
        case Errc::BadResolution: return "BadResolution";
        case Errc::SolverFailure: return "SolverFailure";
        case Errc::UnknownCommand: return "UnknownCommand";
        case Errc::BadFlag: return "BadFlag";
        case Errc::FileNotFound: return "FileNotFound";
        case Errc::SchemaViolation: return "SchemaViolation";
        case Errc::InternalError: return "InternalError";
    }
    return "UnknownError";
}

const char* tag_name(ObservableTag tag) {
    switch (tag) {
        case ObservableTag::A: return "A";
        case ObservableTag::B: return "B";
        case ObservableTag::C: return "C";
    }
    return "?";
}

ObservableTag tag_from_name(const std::string& name) {
    if (name == "A" || name == "a") return ObservableTag::A;
    if (name == "B" || name == "b") return ObservableTag::B;
    if (name == "C" || name == "c") return ObservableTag::C;
    throw Error(Errc::UnknownTag, "no observable tagged '" + name + "'");
}

double max_abs_entry(const Matrix& m) {
    double best = 0.0;
    for (Eigen::Index j = 0; j < m.cols(); ++j)
        for (Eigen::Index i = 0; i < m.rows(); ++i)
            best = std::max(best, std::abs(m(i, j)));
    return best;
}

namespace {

bool all_finite(const Matrix& m) {
    for (Eigen::Index j = 0; j < m.cols(); ++j)
        for (Eigen::Index i = 0; i < m.rows(); ++i) {
            const Complex z = m(i, j);
            if (!std::isfinite(z.real()) || !std::isfinite(z.imag())) return false;
        }
    return true;
}

void require_same_dim(int a, int b) {
    if (a != b)
        throw Error(Errc::DimensionMismatch,
                    "operands are " + std::to_string(a) + "x" + std::to_string(a) + " vs " +
                        std::to_string(b) + "x" + std::to_string(b));
}

// Multiply each column by a unit phase so its first entry with magnitude
// above kPhaseCutoff comes out exactly real and nonnegative.
void apply_phase_convention(Matrix& vectors) {
    for (Eigen::Index k = 0; k < vectors.cols(); ++k) {
        for (Eigen::Index i = 0; i < vectors.rows(); ++i) {
            const Complex z = vectors(i, k);
            const double mag = std::abs(z);
            if (mag > kPhaseCutoff) {
                vectors.col(k) *= std::conj(z) / mag;
                break;
            }
        }
    }
}

// Re-orthonormalize columns [lo, hi) in index order. Within a degenerate
// cluster the solver's basis is arbitrary; this pins one deterministically.
void gram_schmidt_cluster(Matrix& vectors, Eigen::Index lo, Eigen::Index hi) {
    for (Eigen::Index k = lo; k < hi; ++k) {
        for (Eigen::Index j = lo; j < k; ++j) {
            const Complex overlap = vectors.col(j).dot(vectors.col(k));
            vectors.col(k) -= overlap * vectors.col(j);
        }
        vectors.col(k).normalize();
    }
}

}  // namespace

HermitianOperator make_hermitian(const Matrix& entries) {
    if (entries.rows() != entries.cols())
        throw Error(Errc::NonSquare, "matrix is " + std::to_string(entries.rows()) + "x" +
                                         std::to_string(entries.cols()));
    if (entries.rows() < 1) throw Error(Errc::NonSquare, "matrix is empty");
    if (entries.rows() > kMaxDim)
        throw Error(Errc::DimensionTooLarge, "dimension " + std::to_string(entries.rows()) +
                                                 " exceeds the supported maximum " +
                                                 std::to_string(kMaxDim));
    if (!all_finite(entries)) throw Error(Errc::NonFinite, "matrix has NaN or Inf entries");

    const double tol = kHermTolScale * std::max(1.0, max_abs_entry(entries));
    const double deviation = max_abs_entry(entries - entries.adjoint().eval());
    if (deviation > tol)
        throw Error(Errc::NotHermitian, "deviation from Hermitian symmetry " +
                                            std::to_string(deviation) + " exceeds tolerance");

    Matrix sym = 0.5 * (entries + entries.adjoint().eval());
    return HermitianOperator(std::move(sym));
}

DensityMatrix make_density(const Matrix& entries) {
    const HermitianOperator h = make_hermitian(entries);
    const double trace = h.matrix().trace().real();
    if (std::abs(trace - 1.0) > kTraceTol)
        throw Error(Errc::SchemaViolation,
                    "density matrix trace " + std::to_string(trace) + " is not 1");
    const PsdCheck check = is_psd(h);
    if (!check.psd)
        throw Error(Errc::SchemaViolation, "density matrix has negative eigenvalue " +
                                               std::to_string(check.min_eigenvalue));
    return DensityMatrix(h.matrix());
}

DensityMatrix make_pure_state(const CVector& amplitudes, PureStateInfo* info) {
    if (amplitudes.size() < 1) throw Error(Errc::ZeroVector, "empty amplitude vector");
    if (amplitudes.size() > kMaxDim)
        throw Error(Errc::DimensionTooLarge, "amplitude vector longer than " +
                                                 std::to_string(kMaxDim));
    for (Eigen::Index i = 0; i < amplitudes.size(); ++i) {
        const Complex z = amplitudes(i);
        if (!std::isfinite(z.real()) || !std::isfinite(z.imag()))
            throw Error(Errc::NonFinite, "amplitude vector has NaN or Inf entries");
    }

    const double norm = amplitudes.norm();
    if (norm == 0.0) throw Error(Errc::ZeroVector, "all amplitudes are zero");
    if (std::abs(norm - 1.0) > kStateNormTol)
        throw Error(Errc::NormTooFarFromUnit,
                    "amplitude norm " + std::to_string(norm) + " deviates from 1 by more than " +
                        std::to_string(kStateNormTol));

    if (info) {
        info->norm = norm;
        info->renormalized = std::abs(norm - 1.0) > 1e-12;
    }

    Matrix projector = (amplitudes * amplitudes.adjoint()) / (norm * norm);
    projector = 0.5 * (projector + projector.adjoint().eval());
    return DensityMatrix(std::move(projector));
}

Matrix SpectralDecomposition::reconstruct() const {
    Matrix sum = Matrix::Zero(eigenvectors.rows(), eigenvectors.rows());
    for (Eigen::Index k = 0; k < eigenvalues.size(); ++k)
        sum += eigenvalues(k) * (eigenvectors.col(k) * eigenvectors.col(k).adjoint());
    return sum;
}

SpectralDecomposition spectral_decompose(const HermitianOperator& h) {
    Eigen::SelfAdjointEigenSolver<Matrix> solver(h.matrix());
    if (solver.info() != Eigen::Success)
        throw Error(Errc::ConvergenceFailure, "eigensolver did not converge");

    SpectralDecomposition out;
    out.eigenvalues = solver.eigenvalues();
    out.eigenvectors = solver.eigenvectors();

    // Pin cluster bases first, then phases; both steps keep columns orthonormal.
    const Eigen::Index n = out.eigenvalues.size();
    Eigen::Index lo = 0;
    for (Eigen::Index k = 1; k <= n; ++k) {
        const bool split = (k == n) || (out.eigenvalues(k) - out.eigenvalues(k - 1) >= kDegenerateGap);
        if (split) {
            if (k - lo > 1) gram_schmidt_cluster(out.eigenvectors, lo, k);
            lo = k;
        }
    }
    apply_phase_convention(out.eigenvectors);

    const double tol = kReconstructTolScale * std::max(1.0, h.max_abs());
    const double err = max_abs_entry(out.reconstruct() - h.matrix());
    if (err > tol)
        throw Error(Errc::ConvergenceFailure,
                    "spectral reconstruction error " + std::to_string(err) + " exceeds tolerance");
    return out;
}

PsdCheck is_psd(const HermitianOperator& h) {
    const SpectralDecomposition spec = spectral_decompose(h);
    PsdCheck out;
    out.min_eigenvalue = spec.eigenvalues(0);
    out.psd = out.min_eigenvalue >= -psd_epsilon(h.max_abs());
    return out;
}

double expectation(const DensityMatrix& rho, const HermitianOperator& h) {
    require_same_dim(rho.dim(), h.dim());
    const Complex trace = (rho.matrix() * h.matrix()).trace();
    if (std::abs(trace.imag()) > kImagResidueTol)
        throw Error(Errc::ImaginaryResidue, "Tr(rho H) has imaginary residue " +
                                                std::to_string(trace.imag()));
    return trace.real();
}

HermitianOperator op_add(const HermitianOperator& a, const HermitianOperator& b) {
    require_same_dim(a.dim(), b.dim());
    return make_hermitian(a.matrix() + b.matrix());
}

HermitianOperator op_sub(const HermitianOperator& a, const HermitianOperator& b) {
    require_same_dim(a.dim(), b.dim());
    return make_hermitian(a.matrix() - b.matrix());
}

HermitianOperator op_square(const HermitianOperator& h) {
    return make_hermitian(h.matrix() * h.matrix());
}

double commutator_norm(const HermitianOperator& h1, const HermitianOperator& h2) {
    require_same_dim(h1.dim(), h2.dim());
    const Matrix commutator = h1.matrix() * h2.matrix() - h2.matrix() * h1.matrix();
    return max_abs_entry(commutator);
}

}  // namespace vncrit
