#pragma once

#include <Eigen/Dense>
#include <cstdint>
#include <random>

#include "errors.hpp"

namespace rrcma
{
    using Vector = Eigen::VectorXd;
    using Matrix = Eigen::MatrixXd;

    /// Deterministic random stream. The engine (mt19937_64) and all variate
    /// transforms are fully specified, so identical seeds give identical
    /// sequences on every platform. Streams for individual runs are derived
    /// from a base seed with derive(), which never reuses a raw user seed.
    class RngStream
    {
    public:
        explicit RngStream(std::uint64_t seed);

        /// Independent stream for (base_seed, index), splitmix64-mixed.
        static RngStream derive(std::uint64_t base_seed, std::uint64_t index);

        std::uint64_t seed() const { return seed_; }

        std::uint64_t next_u64();

        /// Uniform on [0, 1), 53-bit resolution.
        double uniform();

        /// Uniform on [a, b).
        double uniform(double a, double b);

        /// Standard normal via Box-Muller (two uniforms per pair, second
        /// value cached).
        double normal();

    private:
        std::uint64_t seed_;
        std::mt19937_64 engine_;
        double cached_normal_ = 0.0;
        bool has_cached_ = false;
    };

    std::uint64_t splitmix64(std::uint64_t x);

    /// FNV-1a, used to fold strings into seed material.
    std::uint64_t hash_string(const std::string& s);

    struct EigenDecomposition
    {
        Matrix B;  // orthonormal eigenvectors, one per column
        Vector D;  // eigenvalues, ascending

        double condition_number() const;

        /// C^{-1} v as B diag(1/D) B^T v, no explicit inverse.
        Vector apply_inverse(const Vector& v) const;

        /// C^{-1/2} v as B diag(1/sqrt(D)) B^T v.
        Vector apply_inverse_sqrt(const Vector& v) const;
    };

    /// Symmetric eigendecomposition of a covariance matrix. The input is
    /// re-symmetrized as (C + C^T)/2 before factorization; asymmetry beyond
    /// 1e-8 * max|C| or non-finite entries raise NumericalError.
    EigenDecomposition eigendecompose(const Matrix& C);

    /// Draw from N(m, sigma^2 C) given the factorization C = B diag(D) B^T.
    /// Consumes exactly dim(m) normal variates in coordinate order.
    Vector sample_mvn(const Vector& m, double sigma, const Matrix& B, const Vector& D,
                      RngStream& rng);

    double mahalanobis(const Vector& x, const Vector& y, const Matrix& C_inv);

    /// Mahalanobis distance from the factorization of C itself (not C^{-1}).
    double mahalanobis(const Vector& x, const Vector& y, const EigenDecomposition& eig_of_C);

    /// Gamma function for z > 0; z <= 0 raises DomainError.
    double gamma_function(double z);
}
