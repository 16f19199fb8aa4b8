#include <doctest.h>

#include <cmath>

#include "rrcma/numerics.hpp"

using namespace rrcma;

namespace
{
    Matrix random_spd(int d, RngStream& rng)
    {
        Matrix A(d, d);
        for (int i = 0; i < d; ++i)
            for (int j = 0; j < d; ++j)
                A(i, j) = rng.normal();
        Matrix C = A.transpose() * A + 0.1 * Matrix::Identity(d, d);
        return 0.5 * (C + C.transpose());
    }
}

TEST_CASE("rng streams are reproducible and distinct")
{
    RngStream a(1234), b(1234), c(1235);
    bool identical = true, all_same_as_c = true;
    for (int i = 0; i < 100; ++i)
    {
        const std::uint64_t va = a.next_u64();
        identical &= va == b.next_u64();
        all_same_as_c &= va == c.next_u64();
    }
    CHECK(identical);
    CHECK_FALSE(all_same_as_c);

    RngStream d1 = RngStream::derive(7, 0);
    RngStream d2 = RngStream::derive(7, 1);
    CHECK(d1.next_u64() != d2.next_u64());
}

TEST_CASE("rng uniform stays in range, normal has sane moments")
{
    RngStream rng(99);
    double sum = 0.0, sum_sq = 0.0;
    const int n = 200000;
    for (int i = 0; i < n; ++i)
    {
        const double u = rng.uniform();
        REQUIRE(u >= 0.0);
        REQUIRE(u < 1.0);
        const double z = rng.normal();
        sum += z;
        sum_sq += z * z;
    }
    CHECK(std::abs(sum / n) < 0.01);
    CHECK(std::abs(sum_sq / n - 1.0) < 0.02);
}

TEST_CASE("eigendecompose identity and diagonal")
{
    const EigenDecomposition id = eigendecompose(Matrix::Identity(2, 2));
    CHECK(id.D[0] == doctest::Approx(1.0));
    CHECK(id.D[1] == doctest::Approx(1.0));

    Matrix diag = Matrix::Zero(2, 2);
    diag(0, 0) = 4.0;
    diag(1, 1) = 9.0;
    const EigenDecomposition dd = eigendecompose(diag);
    CHECK(dd.D[0] == doctest::Approx(4.0).epsilon(1e-12));
    CHECK(dd.D[1] == doctest::Approx(9.0).epsilon(1e-12));
    // axis-aligned eigenvectors
    CHECK(std::abs(dd.B.col(0)[0]) == doctest::Approx(1.0));
    CHECK(std::abs(dd.B.col(1)[1]) == doctest::Approx(1.0));
}

TEST_CASE("eigendecompose 2x2 with known spectrum")
{
    // [[2,1],[1,2]] has eigenvalues 1 and 3 with eigenvectors (1,-1)/sqrt(2)
    // and (1,1)/sqrt(2), from the characteristic polynomial by hand.
    Matrix C(2, 2);
    C << 2.0, 1.0, 1.0, 2.0;
    const EigenDecomposition eig = eigendecompose(C);
    CHECK(eig.D[0] == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(eig.D[1] == doctest::Approx(3.0).epsilon(1e-12));

    const double inv_sqrt2 = 1.0 / std::sqrt(2.0);
    CHECK(std::abs(eig.B.col(0)[0]) == doctest::Approx(inv_sqrt2));
    CHECK(std::abs(eig.B.col(0)[1]) == doctest::Approx(inv_sqrt2));
    CHECK(eig.B.col(0)[0] * eig.B.col(0)[1] < 0.0);
    CHECK(eig.B.col(1)[0] * eig.B.col(1)[1] > 0.0);
}

TEST_CASE("eigendecompose reconstructs random SPD matrices up to d=20")
{
    RngStream rng(4711);
    for (const int d : {2, 5, 10, 20})
    {
        const Matrix C = random_spd(d, rng);
        const EigenDecomposition eig = eigendecompose(C);
        const Matrix rebuilt = eig.B * eig.D.asDiagonal() * eig.B.transpose();
        const double err = (C - rebuilt).cwiseAbs().maxCoeff();
        CHECK(err <= 1e-9 * C.cwiseAbs().maxCoeff());
        for (int i = 1; i < d; ++i)
            CHECK(eig.D[i] >= eig.D[i - 1]);
    }
}

TEST_CASE("eigendecompose rejects bad input")
{
    Matrix nan2 = Matrix::Identity(2, 2);
    nan2(0, 1) = std::nan("");
    CHECK_THROWS_AS(eigendecompose(nan2), NumericalError);

    Matrix asym(2, 2);
    asym << 1.0, 5.0, -5.0, 1.0;
    CHECK_THROWS_AS(eigendecompose(asym), NumericalError);
}

TEST_CASE("sample_mvn degenerate scale and determinism")
{
    Vector m(2);
    m << 1.0, -2.0;
    const EigenDecomposition eig = eigendecompose(Matrix::Identity(2, 2));

    RngStream rng(5);
    const Vector at_zero_sigma = sample_mvn(m, 0.0, eig.B, eig.D, rng);
    CHECK(at_zero_sigma == m);

    RngStream r1(17), r2(17);
    const Vector s1 = sample_mvn(Vector::Zero(3), 1.0,
                                 Matrix::Identity(3, 3), Vector::Ones(3), r1);
    const Vector s2 = sample_mvn(Vector::Zero(3), 1.0,
                                 Matrix::Identity(3, 3), Vector::Ones(3), r2);
    CHECK(s1 == s2);
}

TEST_CASE("sample_mvn matches target covariance on 1e5 draws")
{
    Matrix C(2, 2);
    C << 2.0, 1.0, 1.0, 2.0;
    const EigenDecomposition eig = eigendecompose(C);

    RngStream rng(2024);
    const int n = 100000;
    Matrix sum_outer = Matrix::Zero(2, 2);
    Vector sum = Vector::Zero(2);
    for (int i = 0; i < n; ++i)
    {
        const Vector x = sample_mvn(Vector::Zero(2), 1.0, eig.B, eig.D, rng);
        sum += x;
        sum_outer += x * x.transpose();
    }
    const Vector mean = sum / n;
    const Matrix cov = sum_outer / n - mean * mean.transpose();
    for (int i = 0; i < 2; ++i)
        for (int j = 0; j < 2; ++j)
            CHECK(std::abs(cov(i, j) - C(i, j)) <= 0.05 * C(i, j));
}

TEST_CASE("mahalanobis basics")
{
    Vector x(2), y(2);
    x << 3.0, 4.0;
    y << 0.0, 0.0;
    CHECK(mahalanobis(x, x, Matrix::Identity(2, 2)) == 0.0);
    CHECK(mahalanobis(x, y, Matrix::Identity(2, 2)) == doctest::Approx(5.0).epsilon(1e-12));

    Matrix C_inv = Matrix::Zero(2, 2);
    C_inv(0, 0) = 4.0;
    C_inv(1, 1) = 1.0;
    Vector one(2);
    one << 1.0, 1.0;
    CHECK(mahalanobis(one, Vector::Zero(2), C_inv) ==
          doctest::Approx(std::sqrt(5.0)).epsilon(1e-12));

    CHECK_THROWS_AS(mahalanobis(Vector::Zero(3), Vector::Zero(2), Matrix::Identity(2, 2)),
                    DimensionError);
}

TEST_CASE("mahalanobis with identity equals the euclidean norm")
{
    RngStream rng(1);
    const Matrix I = Matrix::Identity(4, 4);
    const EigenDecomposition eig = eigendecompose(I);
    for (int i = 0; i < 200; ++i)
    {
        Vector x(4), y(4);
        for (int j = 0; j < 4; ++j)
        {
            x[j] = rng.uniform(-10.0, 10.0);
            y[j] = rng.uniform(-10.0, 10.0);
        }
        const double expected = (x - y).norm();
        CHECK(std::abs(mahalanobis(x, y, I) - expected) <= 1e-12 * std::max(1.0, expected));
        CHECK(std::abs(mahalanobis(x, y, eig) - expected) <= 1e-9 * std::max(1.0, expected));
    }
}

TEST_CASE("mahalanobis matrix route agrees with factored route")
{
    RngStream rng(77);
    const Matrix C = random_spd(3, rng);
    const EigenDecomposition eig = eigendecompose(C);
    const Matrix C_inv = eig.B * eig.D.cwiseInverse().asDiagonal() * eig.B.transpose();
    for (int i = 0; i < 100; ++i)
    {
        Vector x(3), y(3);
        for (int j = 0; j < 3; ++j)
        {
            x[j] = rng.normal();
            y[j] = rng.normal();
        }
        CHECK(mahalanobis(x, y, C_inv) == doctest::Approx(mahalanobis(x, y, eig)).epsilon(1e-9));
    }
}

TEST_CASE("gamma function identities")
{
    CHECK(gamma_function(1.0) == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(gamma_function(2.0) == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(gamma_function(0.5) == doctest::Approx(std::sqrt(M_PI)).epsilon(1e-12));
    // Gamma(5/2) = (3/2)(1/2) Gamma(1/2) by the recurrence
    CHECK(gamma_function(2.5) == doctest::Approx(0.75 * std::sqrt(M_PI)).epsilon(1e-12));
    CHECK_THROWS_AS(gamma_function(0.0), DomainError);
    CHECK_THROWS_AS(gamma_function(-1.5), DomainError);
}

TEST_CASE("gamma recurrence over half-integers")
{
    for (double z = 0.5; z <= 10.5; z += 1.0)
    {
        const double lhs = gamma_function(z + 1.0);
        const double rhs = z * gamma_function(z);
        CHECK(std::abs(lhs - rhs) <= 1e-10 * rhs);
    }
}
