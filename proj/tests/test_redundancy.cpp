#include <doctest.h>

#include <algorithm>
#include <cmath>

#include "rrcma/problems.hpp"
#include "rrcma/redundancy.hpp"

using namespace rrcma;

namespace
{
    RestartRecord record_at(int index, const Vector& x, double f, long evals)
    {
        RestartRecord rec;
        rec.index = index;
        rec.x = x;
        rec.f = f;
        rec.evals_used = evals;
        return rec;
    }

    Vector vec1(double x)
    {
        Vector v(1);
        v << x;
        return v;
    }

    // three-well landscape: minima near -2, 0, 2 separated by tall hills
    double triple_well(double x)
    {
        return std::pow(x * x - 4.0, 2.0) * 0.1 + std::min((x - 0.0) * (x - 0.0), 1.5);
    }
}

TEST_CASE("first restart is never redundant")
{
    const Problem p = make_problem("himmelblau", 2, 0);
    RunLedger ledger;
    ledger.x_star = p.x_star;
    ledger.total_evals = 100;
    ledger.records.push_back(record_at(1, p.local_optima[0].x, p.local_optima[0].f, 100));
    CHECK_FALSE(is_redundant(1, ledger, p.evaluate, HvConfig{10}));
}

TEST_CASE("global-basin restarts are never redundant")
{
    const Problem p = make_problem("himmelblau", 2, 0);
    RunLedger ledger;
    ledger.x_star = p.x_star;
    ledger.total_evals = 300;
    // two earlier visits to the global basin, then a third one
    Vector near_star = p.x_star;
    near_star[0] += 1e-3;
    ledger.records.push_back(record_at(1, p.x_star, p.f_star, 100));
    ledger.records.push_back(record_at(2, near_star, p.evaluate(near_star), 100));
    ledger.records.push_back(record_at(3, p.x_star, p.f_star, 100));
    classify_redundancy(ledger, p.evaluate, HvConfig{10});
    CHECK_FALSE(*ledger.records[0].redundant);
    CHECK_FALSE(*ledger.records[1].redundant);
    CHECK_FALSE(*ledger.records[2].redundant);
    CHECK(rrf(ledger) == 0.0);
}

TEST_CASE("revisiting a non-global himmelblau basin is redundant")
{
    const Problem p = make_problem("himmelblau", 2, 0);
    const Vector minimizer_a = p.local_optima[0].x;  // not the global anchor

    RunLedger ledger;
    ledger.x_star = p.x_star;
    ledger.total_evals = 400;
    ledger.records.push_back(record_at(1, minimizer_a, p.evaluate(minimizer_a), 200));
    Vector nearby = minimizer_a;
    nearby[0] += 5e-3;
    ledger.records.push_back(record_at(2, nearby, p.evaluate(nearby), 200));

    classify_redundancy(ledger, p.evaluate, HvConfig{10});
    CHECK_FALSE(*ledger.records[0].redundant);
    CHECK(*ledger.records[1].redundant);
}

TEST_CASE("rrf fixture: 0.25 of the budget is redundant")
{
    RunLedger ledger;
    ledger.x_star = vec1(2.0);
    ledger.total_evals = 400;
    const ObjectiveFn f = [](const Vector& x) { return triple_well(x[0]); };

    ledger.records.push_back(record_at(1, vec1(-2.0), f(vec1(-2.0)), 100));
    ledger.records.push_back(record_at(2, vec1(-1.99), f(vec1(-1.99)), 100));
    ledger.records.push_back(record_at(3, vec1(2.0), f(vec1(2.0)), 100));
    classify_redundancy(ledger, f, HvConfig{10});

    CHECK_FALSE(*ledger.records[0].redundant);
    CHECK(*ledger.records[1].redundant);
    CHECK_FALSE(*ledger.records[2].redundant);
    CHECK(rrf(ledger) == 0.25);
}

TEST_CASE("rrf edge cases")
{
    RunLedger empty;
    empty.x_star = vec1(0.0);
    empty.total_evals = 500;
    CHECK(rrf(empty) == 0.0);

    RunLedger all_redundant;
    all_redundant.x_star = vec1(0.0);
    all_redundant.total_evals = 300;
    for (int r = 1; r <= 3; ++r)
    {
        RestartRecord rec = record_at(r, vec1(1.0), 1.0, 100);
        rec.redundant = true;
        all_redundant.records.push_back(rec);
    }
    CHECK(rrf(all_redundant) == 1.0);

    RunLedger no_budget;
    no_budget.x_star = vec1(0.0);
    no_budget.total_evals = 0;
    CHECK_THROWS_AS(rrf(no_budget), ConfigError);

    RunLedger unresolved;
    unresolved.x_star = vec1(0.0);
    unresolved.total_evals = 100;
    unresolved.records.push_back(record_at(1, vec1(1.0), 1.0, 100));
    CHECK_THROWS_AS(rrf(unresolved), ConfigError);
}

TEST_CASE("distinct basin count is arrival-order invariant")
{
    const ObjectiveFn f = [](const Vector& x) { return triple_well(x[0]); };
    const Vector global = vec1(2.0);

    // converged points: two visits to the well at -2, two to the well at 0,
    // one to the global well at +2
    const std::vector<double> points = {-2.0, 0.05, -1.98, 2.0, 0.0};

    std::vector<double> order(points);
    std::sort(order.begin(), order.end());
    int previous_distinct = -1;
    do
    {
        RunLedger ledger;
        ledger.x_star = global;
        ledger.total_evals = 1000;
        for (std::size_t i = 0; i < order.size(); ++i)
            ledger.records.push_back(
                record_at(static_cast<int>(i + 1), vec1(order[i]), f(vec1(order[i])), 200));
        classify_redundancy(ledger, f, HvConfig{10});

        int n_redundant = 0, n_global = 0;
        for (const RestartRecord& rec : ledger.records)
        {
            if (*rec.redundant)
                ++n_redundant;
            if (hv_test(global, rec.x, f(global), rec.f, f, HvConfig{10}).same_basin)
                ++n_global;
        }
        const int distinct =
            static_cast<int>(ledger.records.size()) - n_redundant - n_global;
        if (previous_distinct >= 0)
            CHECK(distinct == previous_distinct);
        previous_distinct = distinct;
    } while (std::next_permutation(order.begin(), order.end()));
    CHECK(previous_distinct == 2);  // wells at -2 and 0
}

TEST_CASE("sphere ledgers always give zero rrf")
{
    const Problem p = make_problem("sphere", 2, 0);
    RunLedger ledger;
    ledger.x_star = p.x_star;
    ledger.total_evals = 600;
    RngStream rng(13);
    for (int r = 1; r <= 6; ++r)
    {
        Vector x(2);
        x << rng.uniform(-1e-6, 1e-6), rng.uniform(-1e-6, 1e-6);
        ledger.records.push_back(record_at(r, x, p.evaluate(x), 100));
    }
    classify_redundancy(ledger, p.evaluate, HvConfig{10});
    CHECK(rrf(ledger) == 0.0);
}
