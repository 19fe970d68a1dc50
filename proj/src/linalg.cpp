#include "intdiff/linalg.hpp"

#include "intdiff/error.hpp"

#include <lapacke.h>

#include <sstream>

namespace intdiff::linalg {
namespace {

[[noreturn]] void fail(const char* routine, lapack_int info, const Eigen::MatrixXd& a) {
    std::ostringstream msg;
    msg << routine << " failed with info=" << info << " on a " << a.rows() << "x" << a.cols()
        << " matrix (max |a_ij| = " << a.cwiseAbs().maxCoeff() << ", finite = " << (a.allFinite() ? "yes" : "no")
        << ")";
    throw NumericalError(msg.str());
}

void require_square(const Eigen::MatrixXd& a, const char* routine) {
    if (a.rows() != a.cols() || a.rows() == 0) {
        throw SizeError(std::string(routine) + ": expected a non-empty square matrix");
    }
    if (!a.allFinite()) {
        fail(routine, -1, a);
    }
}

}  // namespace

SymmetricEigen symmetric_eigen(const Eigen::MatrixXd& a, bool with_vectors) {
    require_square(a, "dsyevd");
    const auto n = static_cast<lapack_int>(a.rows());
    Eigen::MatrixXd work = a;
    SymmetricEigen out;
    out.values.resize(n);
    const lapack_int info =
        LAPACKE_dsyevd(LAPACK_COL_MAJOR, with_vectors ? 'V' : 'N', 'U', n, work.data(), n, out.values.data());
    if (info != 0) {
        fail("dsyevd", info, a);
    }
    if (with_vectors) {
        out.vectors = std::move(work);
    }
    return out;
}

SymmetricEigen symmetric_eigen_top(const Eigen::MatrixXd& a, Eigen::Index count) {
    require_square(a, "dsyevr");
    const auto n = static_cast<lapack_int>(a.rows());
    if (count < 1 || count > n) {
        throw SizeError("dsyevr: requested eigenpair count out of range");
    }
    Eigen::MatrixXd work = a;
    Eigen::VectorXd w(n);
    Eigen::MatrixXd z(n, count);
    std::vector<lapack_int> support(2 * static_cast<std::size_t>(count));
    lapack_int found = 0;
    const lapack_int il = n - static_cast<lapack_int>(count) + 1;
    const lapack_int info = LAPACKE_dsyevr(LAPACK_COL_MAJOR, 'V', 'I', 'U', n, work.data(), n, 0.0, 0.0, il, n, 0.0,
                                           &found, w.data(), z.data(), n, support.data());
    if (info != 0) {
        fail("dsyevr", info, a);
    }
    if (found != count) {
        // dsyevr occasionally returns no pairs for (near-)diagonal input;
        // the full solver handles those reliably.
        SymmetricEigen full = symmetric_eigen(a, true);
        return {full.values.tail(count), full.vectors.rightCols(count)};
    }
    return {w.head(count), std::move(z)};
}

GeneralEigen general_eigen(const Eigen::MatrixXd& a) {
    require_square(a, "dgeev");
    const auto n = static_cast<lapack_int>(a.rows());
    Eigen::MatrixXd work = a;
    Eigen::VectorXd wr(n), wi(n);
    Eigen::MatrixXd vr(n, n);
    const lapack_int info = LAPACKE_dgeev(LAPACK_COL_MAJOR, 'N', 'V', n, work.data(), n, wr.data(), wi.data(), nullptr,
                                          n, vr.data(), n);
    if (info != 0) {
        fail("dgeev", info, a);
    }
    GeneralEigen out;
    out.values.resize(n);
    out.vectors.resize(n, n);
    // dgeev packs a conjugate pair as (re, im) in consecutive columns.
    for (lapack_int j = 0; j < n; ++j) {
        out.values(j) = {wr(j), wi(j)};
        if (wi(j) == 0.0) {
            out.vectors.col(j) = vr.col(j).cast<std::complex<double>>();
        } else if (j + 1 < n) {
            const Eigen::VectorXd re = vr.col(j);
            const Eigen::VectorXd im = vr.col(j + 1);
            out.vectors.col(j).real() = re;
            out.vectors.col(j).imag() = im;
            out.vectors.col(j + 1).real() = re;
            out.vectors.col(j + 1).imag() = -im;
            out.values(j + 1) = {wr(j + 1), wi(j + 1)};
            ++j;
        }
    }
    return out;
}

}  // namespace intdiff::linalg
