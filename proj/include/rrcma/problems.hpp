#pragma once

#include <cstdint>
#include <memory>
#include <string>
#include <vector>

#include "cma.hpp"
#include "hill_valley.hpp"
#include "numerics.hpp"

namespace rrcma
{
    struct LocalOptimum
    {
        Vector x;
        double f;
    };

    struct InstanceTransform
    {
        Matrix rotation;     // orthogonal
        Vector translation;  // instance location of the optimum
        Vector anchor;       // base location of the optimum

        Vector to_base(const Vector& x) const
        {
            return anchor + rotation.transpose() * (x - translation);
        }
        Vector from_base(const Vector& y) const
        {
            return translation + rotation * (y - anchor);
        }
    };

    /// A benchmark instance: objective with box bounds, the location and
    /// value of the global optimum and, where feasible, a catalog of local
    /// optima. Immutable after construction, safe to evaluate concurrently.
    struct Problem
    {
        std::string name;
        int d = 0;
        Bounds bounds;
        ObjectiveFn evaluate;
        Vector x_star;
        double f_star = 0.0;
        std::vector<LocalOptimum> local_optima;
        std::uint64_t instance_seed = 0;
        std::shared_ptr<const InstanceTransform> transform;  // null for base problems
    };

    /// Modified Himmelblau objective: the classical polynomial plus a capped
    /// Euclidean distance penalty that singles out the minimizer closest to
    /// x_star. With `literal_first_term` the first polynomial term is left
    /// unsquared, which yields an asymmetric variant of the landscape.
    double modified_himmelblau(const Vector& x, const Vector& x_star,
                               bool literal_first_term = false);

    /// The four classical Himmelblau minimizers, refined to full precision.
    std::vector<Vector> himmelblau_minimizers();

    /// Turn a maximization problem with possibly several equally good maxima
    /// into a minimization problem with a unique global minimizer at x_star:
    /// f'(x) = -f(x) + min(0.01, ||x - x_star||^2). `maxima` lists known
    /// maxima of f (including x_star) and is carried over into the catalog.
    Problem globalize(const std::string& name, const ObjectiveFn& f_to_maximize,
                      const Bounds& bounds, const Vector& x_star,
                      const std::vector<LocalOptimum>& maxima = {});

    /// Seeded benchmark instance. Instance 0 is the base problem; any other
    /// seed applies a random rotation about the optimum and moves it to a
    /// uniform position in the central 80% of the box.
    Problem make_problem(const std::string& name, int d, std::uint64_t instance_seed);

    /// The untransformed problem an instance is built on (seeded generators
    /// and anchor choices still depend on instance_seed).
    Problem make_base_problem(const std::string& name, int d, std::uint64_t instance_seed);

    struct ProblemSpec
    {
        std::string name;
        int min_d;
        int max_d;
        std::string note;
    };

    const std::vector<ProblemSpec>& problem_catalog();

    /// f(x +- h e_i) >= f(x) for every in-bounds coordinate perturbation.
    bool is_local_minimum(const ObjectiveFn& f, const Vector& x, const Bounds& bounds,
                          double h = 1e-4);

    /// Newton refinement (finite-difference derivatives) of a nearby local
    /// minimum, used to pin catalog metadata to machine precision.
    Vector refine_local_minimum(const ObjectiveFn& f, Vector x, int iterations = 60);
}
