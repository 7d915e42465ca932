#pragma once

#include <Eigen/Dense>
#include <vector>

#include "pqclone/errors.hpp"

namespace pqclone {

/// Default relative tolerance for positive-semidefiniteness decisions.
inline constexpr double kPsdTol = 1e-10;

/// Absolute floor under every relative tolerance.
inline constexpr double kTolFloor = 1e-14;

/// Dense Hermitian matrix. Construction symmetrizes the input, so afterwards
/// entries(i,j) == conj(entries(j,i)) holds exactly and the diagonal is real.
class HermitianMatrix {
public:
    explicit HermitianMatrix(const Eigen::MatrixXcd& raw);

    int order() const { return static_cast<int>(entries_.rows()); }
    const Eigen::MatrixXcd& entries() const { return entries_; }
    std::complex<double> operator()(int i, int j) const { return entries_(i, j); }

private:
    Eigen::MatrixXcd entries_;
};

/// Smallest eigenvalue of a Hermitian matrix.
double min_eigenvalue(const HermitianMatrix& m);

/// Spectral norm (largest absolute eigenvalue).
double spectral_norm(const HermitianMatrix& m);

/// Positive semidefiniteness: min eigenvalue >= -tol * max(1, spectral norm).
bool is_psd(const HermitianMatrix& m, double tol = kPsdTol);

/// Real determinant via LU; the imaginary part of the complex determinant is
/// discarded (it is rounding noise for Hermitian input).
double determinant(const HermitianMatrix& m);

/// The discarded imaginary part, for the rounding-noise property check.
double determinant_imag_part(const HermitianMatrix& m);

struct PrincipalMinor {
    std::vector<int> indices; // ascending subset of {0..N-1}
    double value;
};

/// Determinants of every principal submatrix of order 1..max_order, in
/// ascending order of subset size, then lexicographic indices. Intended for
/// small matrices (2^N minors); orders above 20 are rejected.
std::vector<PrincipalMinor> principal_minors(const HermitianMatrix& m, int max_order);

/// Factor a PSD matrix as M = F F^dagger with F of size N x r, r = numerical
/// rank. Eigenvalues within tol of zero are clamped to zero, so semidefinite
/// boundary cases factor cleanly. Columns are ordered by ascending eigenvalue
/// (the solver's deterministic order). Throws NotPSD when min eigenvalue is
/// below -tol * max(1, spectral norm).
Eigen::MatrixXcd psd_factor(const HermitianMatrix& m, double tol = kPsdTol);

} // namespace pqclone
