#include "rrcma/numerics.hpp"

#include <cmath>
#include <limits>

namespace rrcma
{
    std::uint64_t splitmix64(std::uint64_t x)
    {
        x += 0x9E3779B97F4A7C15ULL;
        x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ULL;
        x = (x ^ (x >> 27)) * 0x94D049BB133111EBULL;
        return x ^ (x >> 31);
    }

    std::uint64_t hash_string(const std::string& s)
    {
        std::uint64_t h = 0xCBF29CE484222325ULL;
        for (const char c : s)
        {
            h ^= static_cast<unsigned char>(c);
            h *= 0x100000001B3ULL;
        }
        return h;
    }

    RngStream::RngStream(std::uint64_t seed) : seed_(seed), engine_(splitmix64(seed)) {}

    RngStream RngStream::derive(std::uint64_t base_seed, std::uint64_t index)
    {
        return RngStream(splitmix64(base_seed ^ splitmix64(index)));
    }

    std::uint64_t RngStream::next_u64()
    {
        return engine_();
    }

    double RngStream::uniform()
    {
        return static_cast<double>(next_u64() >> 11) * 0x1.0p-53;
    }

    double RngStream::uniform(double a, double b)
    {
        return a + (b - a) * uniform();
    }

    double RngStream::normal()
    {
        if (has_cached_)
        {
            has_cached_ = false;
            return cached_normal_;
        }
        // u1 in (0, 1] so the log is finite
        const double u1 = static_cast<double>((next_u64() >> 11) + 1) * 0x1.0p-53;
        const double u2 = uniform();
        const double r = std::sqrt(-2.0 * std::log(u1));
        const double theta = 2.0 * M_PI * u2;
        cached_normal_ = r * std::sin(theta);
        has_cached_ = true;
        return r * std::cos(theta);
    }

    double EigenDecomposition::condition_number() const
    {
        const double lo = D.minCoeff();
        const double hi = D.maxCoeff();
        if (lo <= 0.0)
            return std::numeric_limits<double>::infinity();
        return hi / lo;
    }

    Vector EigenDecomposition::apply_inverse(const Vector& v) const
    {
        return B * (B.transpose() * v).cwiseQuotient(D);
    }

    Vector EigenDecomposition::apply_inverse_sqrt(const Vector& v) const
    {
        return B * (B.transpose() * v).cwiseQuotient(D.cwiseSqrt());
    }

    EigenDecomposition eigendecompose(const Matrix& C)
    {
        if (C.rows() != C.cols())
            throw DimensionError("eigendecompose: matrix is not square");
        if (!C.allFinite())
            throw NumericalError("eigendecompose: non-finite entries");

        const double scale = C.cwiseAbs().maxCoeff();
        const double asym = (C - C.transpose()).cwiseAbs().maxCoeff();
        if (scale > 0.0 && asym > 1e-8 * scale)
            throw NumericalError("eigendecompose: matrix is not symmetric");

        const Matrix sym = 0.5 * (C + C.transpose());
        Eigen::SelfAdjointEigenSolver<Matrix> solver(sym);
        if (solver.info() != Eigen::Success)
            throw NumericalError("eigendecompose: factorization failed");

        return EigenDecomposition{solver.eigenvectors(), solver.eigenvalues()};
    }

    Vector sample_mvn(const Vector& m, double sigma, const Matrix& B, const Vector& D,
                      RngStream& rng)
    {
        if (B.rows() != m.size() || D.size() != m.size())
            throw DimensionError("sample_mvn: mismatched factor dimensions");
        if (D.minCoeff() <= 0.0)
            throw NumericalError("sample_mvn: non-positive eigenvalue");

        Vector z(m.size());
        for (Eigen::Index i = 0; i < z.size(); ++i)
            z[i] = rng.normal();
        return m + sigma * (B * D.cwiseSqrt().cwiseProduct(z));
    }

    double mahalanobis(const Vector& x, const Vector& y, const Matrix& C_inv)
    {
        if (x.size() != y.size() || C_inv.rows() != x.size() || C_inv.cols() != x.size())
            throw DimensionError("mahalanobis: mismatched dimensions");
        const Vector diff = x - y;
        const double q = diff.dot(C_inv * diff);
        return std::sqrt(std::max(q, 0.0));
    }

    double mahalanobis(const Vector& x, const Vector& y, const EigenDecomposition& eig_of_C)
    {
        if (x.size() != y.size() || eig_of_C.B.rows() != x.size())
            throw DimensionError("mahalanobis: mismatched dimensions");
        const Vector w = (eig_of_C.B.transpose() * (x - y)).cwiseQuotient(eig_of_C.D.cwiseSqrt());
        return w.norm();
    }

    double gamma_function(double z)
    {
        if (!(z > 0.0))
            throw DomainError("gamma_function: z must be positive");
        return std::tgamma(z);
    }
}
