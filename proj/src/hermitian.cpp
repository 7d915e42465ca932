#include "pqclone/hermitian.hpp"

#include <Eigen/Eigenvalues>
#include <algorithm>
#include <cmath>

namespace pqclone {

HermitianMatrix::HermitianMatrix(const Eigen::MatrixXcd& raw) {
    if (raw.rows() != raw.cols()) {
        fail("InvariantViolation", "matrix not square");
    }
    entries_ = 0.5 * (raw + raw.adjoint());
    for (Eigen::Index i = 0; i < entries_.rows(); ++i) {
        entries_(i, i) = std::complex<double>(entries_(i, i).real(), 0.0);
    }
}

namespace {

Eigen::VectorXd eigenvalues_of(const HermitianMatrix& m) {
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> solver(m.entries(),
                                                           Eigen::EigenvaluesOnly);
    return solver.eigenvalues(); // ascending
}

} // namespace

double min_eigenvalue(const HermitianMatrix& m) {
    return eigenvalues_of(m)(0);
}

double spectral_norm(const HermitianMatrix& m) {
    const Eigen::VectorXd ev = eigenvalues_of(m);
    return std::max(std::abs(ev(0)), std::abs(ev(ev.size() - 1)));
}

bool is_psd(const HermitianMatrix& m, double tol) {
    const Eigen::VectorXd ev = eigenvalues_of(m);
    const double norm = std::max(std::abs(ev(0)), std::abs(ev(ev.size() - 1)));
    return ev(0) >= -tol * std::max(1.0, norm);
}

double determinant(const HermitianMatrix& m) {
    if (m.order() == 1) return m(0, 0).real();
    return m.entries().partialPivLu().determinant().real();
}

double determinant_imag_part(const HermitianMatrix& m) {
    if (m.order() == 1) return 0.0;
    return m.entries().partialPivLu().determinant().imag();
}

std::vector<PrincipalMinor> principal_minors(const HermitianMatrix& m, int max_order) {
    const int n = m.order();
    if (n > 20) {
        fail("OrderOverflow", "principal minor enumeration limited to order 20");
    }
    if (max_order < 1 || max_order > n) {
        fail("InvariantViolation", "max_order must be in [1, order]");
    }

    std::vector<PrincipalMinor> result;
    for (int size = 1; size <= max_order; ++size) {
        // lexicographic combinations of the given size
        std::vector<int> idx(size);
        for (int i = 0; i < size; ++i) idx[i] = i;
        while (true) {
            Eigen::MatrixXcd sub(size, size);
            for (int r = 0; r < size; ++r) {
                for (int c = 0; c < size; ++c) {
                    sub(r, c) = m(idx[r], idx[c]);
                }
            }
            double value;
            if (size == 1) {
                value = sub(0, 0).real();
            } else if (size == 2) {
                value = (sub(0, 0) * sub(1, 1) - sub(0, 1) * sub(1, 0)).real();
            } else {
                value = sub.partialPivLu().determinant().real();
            }
            result.push_back({idx, value});

            int k = size - 1;
            while (k >= 0 && idx[k] == n - size + k) --k;
            if (k < 0) break;
            ++idx[k];
            for (int j = k + 1; j < size; ++j) idx[j] = idx[j - 1] + 1;
        }
    }
    return result;
}

Eigen::MatrixXcd psd_factor(const HermitianMatrix& m, double tol) {
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> solver(m.entries());
    const Eigen::VectorXd ev = solver.eigenvalues();
    const int n = m.order();
    const double norm = std::max(std::abs(ev(0)), std::abs(ev(n - 1)));
    const double cut = std::max(tol * std::max(1.0, norm), kTolFloor);
    if (ev(0) < -cut) {
        fail("NotPSD", "matrix has eigenvalue " + std::to_string(ev(0)) +
                           " below -" + std::to_string(cut));
    }

    int rank = 0;
    for (int i = 0; i < n; ++i) {
        if (ev(i) > cut) ++rank;
    }
    if (rank == 0) return Eigen::MatrixXcd::Zero(n, 0);

    Eigen::MatrixXcd factor(n, rank);
    int col = 0;
    for (int i = 0; i < n; ++i) {
        if (ev(i) > cut) {
            factor.col(col++) = solver.eigenvectors().col(i) * std::sqrt(ev(i));
        }
    }
    return factor;
}

} // namespace pqclone
