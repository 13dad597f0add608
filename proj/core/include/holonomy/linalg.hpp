#pragma once

#include <complex>
#include <cstddef>
#include <span>
#include <utility>
#include <vector>

namespace holonomy {

using cplx = std::complex<double>;

/// Dense complex matrix, row-major storage. Value type: copyable, immutable
/// by convention once handed to another module.
class ComplexMatrix {
public:
    ComplexMatrix() = default;
    ComplexMatrix(std::size_t rows, std::size_t cols)
        : rows_(rows), cols_(cols), data_(rows * cols, cplx(0.0, 0.0)) {}

    static ComplexMatrix identity(std::size_t n);
    static ComplexMatrix from_rows(std::initializer_list<std::initializer_list<cplx>> rows);

    std::size_t rows() const { return rows_; }
    std::size_t cols() const { return cols_; }
    bool is_square() const { return rows_ == cols_; }

    cplx& operator()(std::size_t i, std::size_t j) { return data_[i * cols_ + j]; }
    const cplx& operator()(std::size_t i, std::size_t j) const { return data_[i * cols_ + j]; }

    std::span<cplx> data() { return data_; }
    std::span<const cplx> data() const { return data_; }

    ComplexMatrix adjoint() const;
    cplx trace() const;
    double max_abs() const;
    double frobenius_norm() const;

    void set_zero();
    void scale(cplx factor);
    void add_scaled(const ComplexMatrix& other, cplx factor);  // *this += factor * other

    bool is_hermitian(double tol = 1e-12) const;
    bool is_unitary(double tol = 1e-10) const;
    double hermiticity_deviation() const;  // max |A - A^dag|
    double unitarity_deviation() const;    // max |A^dag A - I|

private:
    std::size_t rows_ = 0;
    std::size_t cols_ = 0;
    std::vector<cplx> data_;
};

ComplexMatrix matmul(const ComplexMatrix& a, const ComplexMatrix& b);
ComplexMatrix operator*(const ComplexMatrix& a, const ComplexMatrix& b);
ComplexMatrix operator*(cplx s, const ComplexMatrix& a);
ComplexMatrix operator+(const ComplexMatrix& a, const ComplexMatrix& b);
ComplexMatrix operator-(const ComplexMatrix& a, const ComplexMatrix& b);
ComplexMatrix tensor(const ComplexMatrix& a, const ComplexMatrix& b);
double max_abs_diff(const ComplexMatrix& a, const ComplexMatrix& b);

/// Normalized pure state with explicit dimension.
class StateVector {
public:
    StateVector() = default;
    explicit StateVector(std::size_t dim) : amps_(dim, cplx(0.0, 0.0)) {}
    StateVector(std::initializer_list<cplx> amps) : amps_(amps) {}

    static StateVector basis(std::size_t dim, std::size_t index);

    std::size_t dim() const { return amps_.size(); }
    cplx& operator[](std::size_t i) { return amps_[i]; }
    const cplx& operator[](std::size_t i) const { return amps_[i]; }
    std::span<cplx> data() { return amps_; }
    std::span<const cplx> data() const { return amps_; }

    double norm() const;
    StateVector normalized() const;

private:
    std::vector<cplx> amps_;
};

cplx inner(const StateVector& a, const StateVector& b);  // <a|b>
StateVector apply(const ComplexMatrix& m, const StateVector& v);
ComplexMatrix outer(const StateVector& a, const StateVector& b);  // |a><b|

/// Density matrix with the usual trace/Hermiticity/positivity diagnostics.
class DensityMatrix {
public:
    DensityMatrix() = default;
    explicit DensityMatrix(std::size_t dim) : mat_(dim, dim) {}
    explicit DensityMatrix(ComplexMatrix m);

    static DensityMatrix pure(const StateVector& psi);

    std::size_t dim() const { return mat_.rows(); }
    ComplexMatrix& matrix() { return mat_; }
    const ComplexMatrix& matrix() const { return mat_; }
    cplx& operator()(std::size_t i, std::size_t j) { return mat_(i, j); }
    const cplx& operator()(std::size_t i, std::size_t j) const { return mat_(i, j); }

    double trace_deviation() const;       // |Tr rho - 1|
    double hermiticity_deviation() const;
    double min_eigenvalue() const;
    void symmetrize();                    // rho <- (rho + rho^dag)/2

private:
    ComplexMatrix mat_;
};

struct EigResult {
    std::vector<double> values;  // ascending
    ComplexMatrix vectors;       // columns are eigenvectors, unitary
};

/// Eigen-decomposition of a Hermitian matrix by cyclic Jacobi rotations.
/// Intended for the small dimensions used here (dim <= 32).
EigResult eig_hermitian(const ComplexMatrix& h);

/// exp(i * scale * h) for Hermitian h, via eigen-decomposition. The result
/// is unitary up to the eigensolver tolerance.
ComplexMatrix expm_hermitian(const ComplexMatrix& h, double scale);

}  // namespace holonomy
