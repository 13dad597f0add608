#include "holonomy/linalg.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <sstream>
#include <stdexcept>

namespace holonomy {

namespace {

constexpr std::size_t kMaxEigDim = 32;

void require(bool cond, const char* what) {
    if (!cond) throw std::invalid_argument(what);
}

}  // namespace

ComplexMatrix ComplexMatrix::identity(std::size_t n) {
    ComplexMatrix m(n, n);
    for (std::size_t i = 0; i < n; ++i) m(i, i) = 1.0;
    return m;
}

ComplexMatrix ComplexMatrix::from_rows(std::initializer_list<std::initializer_list<cplx>> rows) {
    const std::size_t r = rows.size();
    const std::size_t c = r == 0 ? 0 : rows.begin()->size();
    ComplexMatrix m(r, c);
    std::size_t i = 0;
    for (const auto& row : rows) {
        require(row.size() == c, "from_rows: ragged rows");
        std::size_t j = 0;
        for (const auto& v : row) m(i, j++) = v;
        ++i;
    }
    return m;
}

ComplexMatrix ComplexMatrix::adjoint() const {
    ComplexMatrix out(cols_, rows_);
    for (std::size_t i = 0; i < rows_; ++i)
        for (std::size_t j = 0; j < cols_; ++j)
            out(j, i) = std::conj((*this)(i, j));
    return out;
}

cplx ComplexMatrix::trace() const {
    cplx t = 0.0;
    for (std::size_t i = 0; i < std::min(rows_, cols_); ++i) t += (*this)(i, i);
    return t;
}

double ComplexMatrix::max_abs() const {
    double m = 0.0;
    for (const auto& v : data_) m = std::max(m, std::abs(v));
    return m;
}

double ComplexMatrix::frobenius_norm() const {
    double s = 0.0;
    for (const auto& v : data_) s += std::norm(v);
    return std::sqrt(s);
}

void ComplexMatrix::set_zero() {
    std::fill(data_.begin(), data_.end(), cplx(0.0, 0.0));
}

void ComplexMatrix::scale(cplx factor) {
    for (auto& v : data_) v *= factor;
}

void ComplexMatrix::add_scaled(const ComplexMatrix& other, cplx factor) {
    require(rows_ == other.rows_ && cols_ == other.cols_, "add_scaled: shape mismatch");
    for (std::size_t i = 0; i < data_.size(); ++i) data_[i] += factor * other.data_[i];
}

double ComplexMatrix::hermiticity_deviation() const {
    if (!is_square()) return std::numeric_limits<double>::infinity();
    double dev = 0.0;
    for (std::size_t i = 0; i < rows_; ++i)
        for (std::size_t j = i; j < cols_; ++j)
            dev = std::max(dev, std::abs((*this)(i, j) - std::conj((*this)(j, i))));
    return dev;
}

double ComplexMatrix::unitarity_deviation() const {
    if (!is_square()) return std::numeric_limits<double>::infinity();
    const ComplexMatrix prod = matmul(adjoint(), *this);
    double dev = 0.0;
    for (std::size_t i = 0; i < rows_; ++i)
        for (std::size_t j = 0; j < cols_; ++j) {
            const cplx expect = (i == j) ? cplx(1.0, 0.0) : cplx(0.0, 0.0);
            dev = std::max(dev, std::abs(prod(i, j) - expect));
        }
    return dev;
}

bool ComplexMatrix::is_hermitian(double tol) const {
    return is_square() && hermiticity_deviation() <= tol;
}

bool ComplexMatrix::is_unitary(double tol) const {
    return is_square() && unitarity_deviation() <= tol;
}

ComplexMatrix matmul(const ComplexMatrix& a, const ComplexMatrix& b) {
    require(a.cols() == b.rows(), "matmul: inner dimensions differ");
    ComplexMatrix out(a.rows(), b.cols());
    const std::size_t n = a.rows(), k = a.cols(), m = b.cols();
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t p = 0; p < k; ++p) {
            const cplx aip = a(i, p);
            if (aip == cplx(0.0, 0.0)) continue;
            for (std::size_t j = 0; j < m; ++j) out(i, j) += aip * b(p, j);
        }
    }
    return out;
}

ComplexMatrix operator*(const ComplexMatrix& a, const ComplexMatrix& b) { return matmul(a, b); }

ComplexMatrix operator*(cplx s, const ComplexMatrix& a) {
    ComplexMatrix out = a;
    out.scale(s);
    return out;
}

ComplexMatrix operator+(const ComplexMatrix& a, const ComplexMatrix& b) {
    ComplexMatrix out = a;
    out.add_scaled(b, 1.0);
    return out;
}

ComplexMatrix operator-(const ComplexMatrix& a, const ComplexMatrix& b) {
    ComplexMatrix out = a;
    out.add_scaled(b, -1.0);
    return out;
}

ComplexMatrix tensor(const ComplexMatrix& a, const ComplexMatrix& b) {
    ComplexMatrix out(a.rows() * b.rows(), a.cols() * b.cols());
    for (std::size_t i = 0; i < a.rows(); ++i)
        for (std::size_t j = 0; j < a.cols(); ++j) {
            const cplx aij = a(i, j);
            if (aij == cplx(0.0, 0.0)) continue;
            for (std::size_t p = 0; p < b.rows(); ++p)
                for (std::size_t q = 0; q < b.cols(); ++q)
                    out(i * b.rows() + p, j * b.cols() + q) = aij * b(p, q);
        }
    return out;
}

double max_abs_diff(const ComplexMatrix& a, const ComplexMatrix& b) {
    require(a.rows() == b.rows() && a.cols() == b.cols(), "max_abs_diff: shape mismatch");
    double dev = 0.0;
    for (std::size_t i = 0; i < a.rows(); ++i)
        for (std::size_t j = 0; j < a.cols(); ++j)
            dev = std::max(dev, std::abs(a(i, j) - b(i, j)));
    return dev;
}

StateVector StateVector::basis(std::size_t dim, std::size_t index) {
    StateVector v(dim);
    v[index] = 1.0;
    return v;
}

double StateVector::norm() const {
    double s = 0.0;
    for (const auto& a : amps_) s += std::norm(a);
    return std::sqrt(s);
}

StateVector StateVector::normalized() const {
    StateVector out = *this;
    const double n = norm();
    if (n > 0.0)
        for (auto& a : out.amps_) a /= n;
    return out;
}

cplx inner(const StateVector& a, const StateVector& b) {
    require(a.dim() == b.dim(), "inner: dimension mismatch");
    cplx s = 0.0;
    for (std::size_t i = 0; i < a.dim(); ++i) s += std::conj(a[i]) * b[i];
    return s;
}

StateVector apply(const ComplexMatrix& m, const StateVector& v) {
    require(m.cols() == v.dim(), "apply: dimension mismatch");
    StateVector out(m.rows());
    for (std::size_t i = 0; i < m.rows(); ++i) {
        cplx s = 0.0;
        for (std::size_t j = 0; j < m.cols(); ++j) s += m(i, j) * v[j];
        out[i] = s;
    }
    return out;
}

ComplexMatrix outer(const StateVector& a, const StateVector& b) {
    ComplexMatrix out(a.dim(), b.dim());
    for (std::size_t i = 0; i < a.dim(); ++i)
        for (std::size_t j = 0; j < b.dim(); ++j)
            out(i, j) = a[i] * std::conj(b[j]);
    return out;
}

DensityMatrix::DensityMatrix(ComplexMatrix m) : mat_(std::move(m)) {
    require(mat_.is_square(), "DensityMatrix: matrix must be square");
}

DensityMatrix DensityMatrix::pure(const StateVector& psi) {
    return DensityMatrix(outer(psi, psi));
}

double DensityMatrix::trace_deviation() const {
    return std::abs(mat_.trace() - cplx(1.0, 0.0));
}

double DensityMatrix::hermiticity_deviation() const {
    return mat_.hermiticity_deviation();
}

double DensityMatrix::min_eigenvalue() const {
    ComplexMatrix h = mat_;
    // Work on the symmetrized matrix; the anti-Hermitian part is noise.
    for (std::size_t i = 0; i < h.rows(); ++i)
        for (std::size_t j = 0; j < h.cols(); ++j)
            h(i, j) = 0.5 * (mat_(i, j) + std::conj(mat_(j, i)));
    const EigResult eig = eig_hermitian(h);
    return eig.values.front();
}

void DensityMatrix::symmetrize() {
    const std::size_t n = mat_.rows();
    for (std::size_t i = 0; i < n; ++i) {
        mat_(i, i) = cplx(mat_(i, i).real(), 0.0);
        for (std::size_t j = i + 1; j < n; ++j) {
            const cplx avg = 0.5 * (mat_(i, j) + std::conj(mat_(j, i)));
            mat_(i, j) = avg;
            mat_(j, i) = std::conj(avg);
        }
    }
}

EigResult eig_hermitian(const ComplexMatrix& h) {
    require(h.is_square(), "eig_hermitian: matrix must be square");
    const std::size_t n = h.rows();
    require(n >= 1 && n <= kMaxEigDim, "eig_hermitian: dimension out of supported range");
    if (h.hermiticity_deviation() > 1e-10 * std::max(1.0, h.max_abs()))
        throw std::invalid_argument("eig_hermitian: input is not Hermitian within tolerance");

    ComplexMatrix a = h;
    // Jacobi works on the exactly-Hermitian part.
    for (std::size_t i = 0; i < n; ++i) {
        a(i, i) = cplx(a(i, i).real(), 0.0);
        for (std::size_t j = i + 1; j < n; ++j) {
            const cplx avg = 0.5 * (a(i, j) + std::conj(a(j, i)));
            a(i, j) = avg;
            a(j, i) = std::conj(avg);
        }
    }
    ComplexMatrix v = ComplexMatrix::identity(n);

    const double scale = std::max(a.max_abs(), 1e-300);
    const double tol = 1e-15 * scale;
    const int max_sweeps = 100;

    auto off_norm = [&]() {
        double s = 0.0;
        for (std::size_t i = 0; i < n; ++i)
            for (std::size_t j = i + 1; j < n; ++j) s += std::norm(a(i, j));
        return std::sqrt(2.0 * s);
    };

    int sweep = 0;
    for (; sweep < max_sweeps; ++sweep) {
        if (off_norm() <= tol * n) break;
        for (std::size_t p = 0; p < n; ++p) {
            for (std::size_t q = p + 1; q < n; ++q) {
                const cplx apq = a(p, q);
                const double r = std::abs(apq);
                if (r <= tol) continue;
                const cplx phase = apq / r;  // e^{i phi}
                const double app = a(p, p).real();
                const double aqq = a(q, q).real();
                const double tau = (aqq - app) / (2.0 * r);
                double t;
                if (tau >= 0.0)
                    t = 1.0 / (tau + std::sqrt(1.0 + tau * tau));
                else
                    t = -1.0 / (-tau + std::sqrt(1.0 + tau * tau));
                const double c = 1.0 / std::sqrt(1.0 + t * t);
                const double s = t * c;

                // Columns: A <- A * U with U = [[c, s*phase], [-s*conj(phase), c]]
                for (std::size_t i = 0; i < n; ++i) {
                    const cplx aip = a(i, p);
                    const cplx aiq = a(i, q);
                    a(i, p) = c * aip - s * std::conj(phase) * aiq;
                    a(i, q) = s * phase * aip + c * aiq;
                }
                // Rows: A <- U^dag * A
                for (std::size_t j = 0; j < n; ++j) {
                    const cplx apj = a(p, j);
                    const cplx aqj = a(q, j);
                    a(p, j) = c * apj - s * phase * aqj;
                    a(q, j) = s * std::conj(phase) * apj + c * aqj;
                }
                // Accumulate eigenvectors: V <- V * U
                for (std::size_t i = 0; i < n; ++i) {
                    const cplx vip = v(i, p);
                    const cplx viq = v(i, q);
                    v(i, p) = c * vip - s * std::conj(phase) * viq;
                    v(i, q) = s * phase * vip + c * viq;
                }
                a(p, q) = 0.0;
                a(q, p) = 0.0;
                a(p, p) = cplx(a(p, p).real(), 0.0);
                a(q, q) = cplx(a(q, q).real(), 0.0);
            }
        }
    }
    if (sweep == max_sweeps) {
        std::ostringstream msg;
        msg << "eig_hermitian: Jacobi failed to converge, off-diagonal residual "
            << off_norm() << " after " << max_sweeps << " sweeps";
        throw std::runtime_error(msg.str());
    }

    std::vector<std::size_t> order(n);
    std::iota(order.begin(), order.end(), std::size_t{0});
    std::sort(order.begin(), order.end(),
              [&](std::size_t i, std::size_t j) { return a(i, i).real() < a(j, j).real(); });

    EigResult result;
    result.values.resize(n);
    result.vectors = ComplexMatrix(n, n);
    for (std::size_t j = 0; j < n; ++j) {
        result.values[j] = a(order[j], order[j]).real();
        for (std::size_t i = 0; i < n; ++i) result.vectors(i, j) = v(i, order[j]);
    }
    return result;
}

ComplexMatrix expm_hermitian(const ComplexMatrix& h, double scale) {
    if (h.hermiticity_deviation() > 1e-10 * std::max(1.0, h.max_abs()))
        throw std::invalid_argument("expm_hermitian: input is not Hermitian within tolerance");
    const EigResult eig = eig_hermitian(h);
    const std::size_t n = h.rows();
    ComplexMatrix out(n, n);
    // V diag(e^{i s lambda}) V^dag without forming the diagonal matrix.
    for (std::size_t k = 0; k < n; ++k) {
        const cplx p = std::polar(1.0, scale * eig.values[k]);
        for (std::size_t i = 0; i < n; ++i) {
            const cplx vik = eig.vectors(i, k) * p;
            for (std::size_t j = 0; j < n; ++j)
                out(i, j) += vik * std::conj(eig.vectors(j, k));
        }
    }
    return out;
}

}  // namespace holonomy
