#pragma once

#include <Eigen/Dense>
#include <algorithm>
#include <complex>
#include <cstdint>
#include <string>

#include "vncrit/errors.hpp"

namespace vncrit {

using Complex = std::complex<double>;
using Matrix = Eigen::MatrixXcd;
using CVector = Eigen::VectorXcd;

// Numeric policy shared by all modules.
constexpr int kMaxDim = 64;
constexpr double kHermTolScale = 1e-12;   // hermiticity acceptance, relative
constexpr double kPsdTolScale = 1e-9;     // epsilon_psd, relative
constexpr double kTraceTol = 1e-10;       // density-matrix trace deviation
constexpr double kImagResidueTol = 1e-10; // traces must be real to here
constexpr double kDegenerateGap = 1e-8;   // eigenvalue cluster threshold
constexpr double kPhaseCutoff = 1e-8;     // first significant eigenvector entry
constexpr double kReconstructTolScale = 1e-10;
constexpr double kStateNormTol = 1e-2;    // pure-state input norm slack

enum class ObservableTag { A, B, C };

const char* tag_name(ObservableTag tag);
ObservableTag tag_from_name(const std::string& name);

// max-entry magnitude, the norm all relative tolerances scale with
double max_abs_entry(const Matrix& m);

inline double psd_epsilon(double max_abs) { return kPsdTolScale * std::max(1.0, max_abs); }

// d x d complex Hermitian matrix; stored form is exactly (M + M^dagger)/2.
class HermitianOperator {
  public:
    int dim() const { return static_cast<int>(m_.rows()); }
    const Matrix& matrix() const { return m_; }
    double max_abs() const { return max_abs_entry(m_); }

  private:
    friend HermitianOperator make_hermitian(const Matrix& entries);
    explicit HermitianOperator(Matrix m) : m_(std::move(m)) {}
    Matrix m_;
};

struct PureStateInfo {
    double norm = 0.0;
    bool renormalized = false;
};

// PSD, unit-trace state. Construct through make_density / make_pure_state.
class DensityMatrix {
  public:
    int dim() const { return static_cast<int>(m_.rows()); }
    const Matrix& matrix() const { return m_; }

  private:
    friend DensityMatrix make_density(const Matrix& entries);
    friend DensityMatrix make_pure_state(const CVector& amplitudes, PureStateInfo* info);
    explicit DensityMatrix(Matrix m) : m_(std::move(m)) {}
    Matrix m_;
};

// Eigenvalues ascending; eigenvectors orthonormal columns under a fixed
// phase convention (first entry with magnitude > kPhaseCutoff is real >= 0).
struct SpectralDecomposition {
    Eigen::VectorXd eigenvalues;
    Matrix eigenvectors;  // column k pairs with eigenvalues[k]

    Matrix reconstruct() const;
};

struct PsdCheck {
    bool psd = false;
    double min_eigenvalue = 0.0;
};

HermitianOperator make_hermitian(const Matrix& entries);
DensityMatrix make_density(const Matrix& entries);
DensityMatrix make_pure_state(const CVector& amplitudes, PureStateInfo* info = nullptr);

SpectralDecomposition spectral_decompose(const HermitianOperator& h);
PsdCheck is_psd(const HermitianOperator& h);
double expectation(const DensityMatrix& rho, const HermitianOperator& h);

HermitianOperator op_add(const HermitianOperator& a, const HermitianOperator& b);
HermitianOperator op_sub(const HermitianOperator& a, const HermitianOperator& b);
HermitianOperator op_square(const HermitianOperator& h);

// max-entry magnitude of the commutator [h1, h2]
double commutator_norm(const HermitianOperator& h1, const HermitianOperator& h2);

}  // namespace vncrit
