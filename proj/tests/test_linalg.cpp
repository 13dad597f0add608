#include <doctest.h>

#include <cmath>
#include <numbers>

#include "holonomy/linalg.hpp"
#include "holonomy/util.hpp"

using namespace holonomy;

namespace {

constexpr double kPi = std::numbers::pi;

ComplexMatrix pauli_x() {
    return ComplexMatrix::from_rows({{0.0, 1.0}, {1.0, 0.0}});
}

ComplexMatrix pauli_z() {
    return ComplexMatrix::from_rows({{1.0, 0.0}, {0.0, -1.0}});
}

ComplexMatrix random_matrix(std::size_t n, std::uint64_t& rng) {
    ComplexMatrix m(n, n);
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j)
            m(i, j) = cplx(2.0 * uniform01(rng) - 1.0, 2.0 * uniform01(rng) - 1.0);
    return m;
}

ComplexMatrix random_hermitian(std::size_t n, std::uint64_t& rng) {
    const ComplexMatrix m = random_matrix(n, rng);
    ComplexMatrix h(n, n);
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j)
            h(i, j) = 0.5 * (m(i, j) + std::conj(m(j, i)));
    return h;
}

// Independent expm oracle: scaling and squaring with a plain Taylor series.
ComplexMatrix expm_taylor(const ComplexMatrix& m) {
    const std::size_t n = m.rows();
    double norm = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        double row = 0.0;
        for (std::size_t j = 0; j < n; ++j) row += std::abs(m(i, j));
        norm = std::max(norm, row);
    }
    int squarings = 0;
    double scale = 1.0;
    while (norm * scale > 0.25) {
        scale *= 0.5;
        ++squarings;
    }
    ComplexMatrix scaled = m;
    scaled.scale(scale);

    ComplexMatrix result = ComplexMatrix::identity(n);
    ComplexMatrix term = ComplexMatrix::identity(n);
    for (int k = 1; k <= 30; ++k) {
        term = matmul(term, scaled);
        term.scale(1.0 / static_cast<double>(k));
        result.add_scaled(term, 1.0);
    }
    for (int s = 0; s < squarings; ++s) result = matmul(result, result);
    return result;
}

}  // namespace

TEST_CASE("matmul: identity and Pauli involution") {
    std::uint64_t rng = 7;
    const ComplexMatrix m = random_matrix(3, rng);
    CHECK(max_abs_diff(matmul(ComplexMatrix::identity(3), m), m) == 0.0);
    CHECK(max_abs_diff(matmul(pauli_x(), pauli_x()), ComplexMatrix::identity(2)) == 0.0);
}

TEST_CASE("matmul: random pair against the naive triple loop") {
    std::uint64_t rng = 11;
    const ComplexMatrix a = random_matrix(3, rng);
    const ComplexMatrix b = random_matrix(3, rng);
    ComplexMatrix expected(3, 3);
    for (std::size_t i = 0; i < 3; ++i)
        for (std::size_t j = 0; j < 3; ++j) {
            cplx s = 0.0;
            for (std::size_t k = 0; k < 3; ++k) s += a(i, k) * b(k, j);
            expected(i, j) = s;
        }
    CHECK(max_abs_diff(matmul(a, b), expected) <= 1e-13);
    CHECK_THROWS_AS(matmul(ComplexMatrix(2, 3), ComplexMatrix(2, 3)), std::invalid_argument);
}

TEST_CASE("expm_hermitian: trivial cases") {
    std::uint64_t rng = 13;
    const ComplexMatrix h = random_hermitian(4, rng);
    CHECK(max_abs_diff(expm_hermitian(h, 0.0), ComplexMatrix::identity(4)) <= 1e-12);

    // exp(-i (pi/2) sigma_x) = -i sigma_x
    const ComplexMatrix u = expm_hermitian(pauli_x(), -0.5 * kPi);
    ComplexMatrix expected = pauli_x();
    expected.scale(cplx(0.0, -1.0));
    CHECK(max_abs_diff(u, expected) <= 1e-12);
}

TEST_CASE("expm_hermitian: Taylor oracle, unitarity, semigroup") {
    std::uint64_t rng = 17;
    for (int rep = 0; rep < 5; ++rep) {
        const ComplexMatrix h = random_hermitian(3, rng);
        const double s = 2.0 * uniform01(rng) - 1.0;
        const ComplexMatrix u = expm_hermitian(h, s);

        ComplexMatrix ish = h;
        ish.scale(cplx(0.0, s));
        CHECK(max_abs_diff(u, expm_taylor(ish)) <= 1e-10);
        CHECK(u.unitarity_deviation() <= 1e-10);

        const double s2 = 2.0 * uniform01(rng) - 1.0;
        const ComplexMatrix lhs = matmul(expm_hermitian(h, s), expm_hermitian(h, s2));
        CHECK(max_abs_diff(lhs, expm_hermitian(h, s + s2)) <= 1e-10);
    }
}

TEST_CASE("expm_hermitian rejects non-Hermitian input") {
    ComplexMatrix m(2, 2);
    m(0, 1) = 1.0;  // strictly upper triangular
    CHECK_THROWS_AS(expm_hermitian(m, 1.0), std::invalid_argument);
}

TEST_CASE("eig_hermitian: diagonal and sigma_z") {
    const ComplexMatrix d = ComplexMatrix::from_rows({{1.0, 0.0, 0.0},
                                                      {0.0, 2.0, 0.0},
                                                      {0.0, 0.0, 3.0}});
    const EigResult e = eig_hermitian(d);
    CHECK(e.values[0] == doctest::Approx(1.0));
    CHECK(e.values[1] == doctest::Approx(2.0));
    CHECK(e.values[2] == doctest::Approx(3.0));
    for (std::size_t j = 0; j < 3; ++j)
        CHECK(std::abs(e.vectors(j, j)) == doctest::Approx(1.0));

    const EigResult ez = eig_hermitian(pauli_z());
    CHECK(ez.values[0] == doctest::Approx(-1.0));
    CHECK(ez.values[1] == doctest::Approx(1.0));
}

TEST_CASE("eig_hermitian: reconstruction and conjugation invariance") {
    std::uint64_t rng = 23;
    const ComplexMatrix h = random_hermitian(6, rng);
    const EigResult e = eig_hermitian(h);
    CHECK(e.vectors.unitarity_deviation() <= 1e-10);

    ComplexMatrix reconstructed(6, 6);
    for (std::size_t k = 0; k < 6; ++k)
        for (std::size_t i = 0; i < 6; ++i)
            for (std::size_t j = 0; j < 6; ++j)
                reconstructed(i, j) += e.values[k] * e.vectors(i, k) * std::conj(e.vectors(j, k));
    CHECK(max_abs_diff(reconstructed, h) <= 1e-10);

    for (std::size_t i = 1; i < e.values.size(); ++i) CHECK(e.values[i] >= e.values[i - 1]);

    const ComplexMatrix u = expm_hermitian(random_hermitian(6, rng), 0.7);
    const ComplexMatrix conj = matmul(u, matmul(h, u.adjoint()));
    const EigResult e2 = eig_hermitian(conj);
    for (std::size_t i = 0; i < e.values.size(); ++i)
        CHECK(std::abs(e.values[i] - e2.values[i]) <= 1e-10);
}

TEST_CASE("tensor product shapes and values") {
    const ComplexMatrix t = tensor(pauli_x(), ComplexMatrix::identity(2));
    CHECK(t.rows() == 4);
    CHECK(t(0, 2) == cplx(1.0, 0.0));
    CHECK(t(1, 3) == cplx(1.0, 0.0));
    CHECK(t(0, 1) == cplx(0.0, 0.0));
}

TEST_CASE("density matrix diagnostics") {
    StateVector psi(2);
    psi[0] = 1.0 / std::sqrt(2.0);
    psi[1] = cplx(0.0, 1.0) / std::sqrt(2.0);
    DensityMatrix rho = DensityMatrix::pure(psi);
    CHECK(rho.trace_deviation() <= 1e-15);
    CHECK(rho.hermiticity_deviation() <= 1e-15);
    CHECK(rho.min_eigenvalue() >= -1e-14);

    rho(0, 1) += cplx(0.0, 1e-3);  // break Hermiticity, then repair
    rho.symmetrize();
    CHECK(rho.hermiticity_deviation() <= 1e-15);
}

TEST_CASE("state vector norms and inner products") {
    StateVector a = StateVector::basis(3, 0);
    StateVector b = StateVector::basis(3, 2);
    CHECK(a.norm() == doctest::Approx(1.0));
    CHECK(std::abs(inner(a, b)) == doctest::Approx(0.0));
    const ComplexMatrix op = outer(a, b);
    CHECK(op(0, 2) == cplx(1.0, 0.0));
}
