#include "catch2/catch_amalgamated.hpp"

#include "rapidsat/gen.hpp"
#include "rapidsat/unitwalk.hpp"

#include "oracles.hpp"

#include <algorithm>
#include <set>

using namespace rapidsat;

namespace {

Formula make_formula(Var num_vars, const std::vector<std::vector<int32_t>>& clauses) {
    Formula f;
    f.num_vars = num_vars;
    for (const auto& ints : clauses) {
        Clause c;
        for (int32_t l : ints) c.push_back(Lit(l));
        f.clauses.push_back(std::move(c));
    }
    return f;
}

FullAssignment assignment(std::initializer_list<bool> values) {
    FullAssignment a(static_cast<Var>(values.size()));
    Var v = 1;
    for (bool b : values) a.set(v++, b);
    return a;
}

} // namespace

TEST_CASE("a unit clause is forced and copied back into the full assignment") {
    Formula f = make_formula(1, {{1}});
    UnitWalker walker(f, 1);
    walker.set_full(assignment({false}));
    REQUIRE(walker.walk_period());
    REQUIRE(walker.full()[1] == true);
    REQUIRE(walker.last_copied() == std::vector<Var>{1});
}

TEST_CASE("an already-satisfying full assignment survives a period unchanged") {
    Formula f = make_formula(2, {{1, -2}, {-1, 2}});
    for (auto full : {assignment({true, true}), assignment({false, false})}) {
        UnitWalker walker(f, 9);
        walker.set_full(full);
        REQUIRE(walker.walk_period());
        REQUIRE(walker.full() == full);
        REQUIRE(walker.last_assignment() == full);
    }
}

TEST_CASE("implied values flow through a chain into the full assignment") {
    Formula f = make_formula(3, {{-1, 2}, {-2, 3}});
    UnitWalker walker(f, 1);
    walker.set_full(assignment({true, false, false}));
    const Var order[] = {1, 2, 3};
    REQUIRE(walker.walk_period(order));
    REQUIRE(walker.full() == assignment({true, true, true}));
    REQUIRE(evaluate(f, walker.last_assignment()));
    std::set<Var> copied(walker.last_copied().begin(), walker.last_copied().end());
    REQUIRE(copied == std::set<Var>{2, 3});
}

TEST_CASE("a conflicting decision flips the full-assignment value for the next period") {
    Formula f = make_formula(2, {{1, 2}, {1, -2}, {-1, 2}});
    UnitWalker walker(f, 1);
    walker.set_full(assignment({false, false}));
    const Var order[] = {1, 2};
    // Decide x1=false; propagate x2 from (1 2); (1 -2) empties: conflict.
    // full[1] flips to true; x2 keeps its implied partial value.
    bool satisfied = walker.walk_period(order);
    REQUIRE_FALSE(satisfied);
    REQUIRE(walker.full()[1] == true);
    REQUIRE(walker.last_flipped() == std::vector<Var>{1});
    // The next period starts from the improved full assignment and wins.
    REQUIRE(walker.walk_period(order));
    REQUIRE(evaluate(f, walker.last_assignment()));
}

TEST_CASE("walk_solve is incomplete: a contradiction yields UNKNOWN") {
    Formula f = make_formula(1, {{1}, {-1}});
    Outcome out = walk_solve(f, 3, 50);
    REQUIRE(out.status == Status::Unknown);
    REQUIRE_FALSE(out.model.has_value());
    REQUIRE(out.stats.restarts == 50); // every period ran
}

TEST_CASE("walk_solve finds and verifies models on satisfiable instances") {
    SplitMix64 rng(606);
    int solved = 0;
    for (int i = 0; i < 20; ++i) {
        Formula f = oracle::random_test_formula(rng, 10, 16, 2.0, 3.2);
        if (!oracle::brute_force_sat(f)) continue;
        Outcome out = walk_solve(f, 17, 10000);
        REQUIRE(out.status == Status::Sat);
        REQUIRE(evaluate(f, *out.model));
        ++solved;
    }
    REQUIRE(solved >= 10);
}

TEST_CASE("walk_solve is deterministic per seed") {
    SplitMix64 rng(42424242);
    Formula f = oracle::random_test_formula(rng, 14, 14, 2.8, 3.0);
    Outcome a = walk_solve(f, 5, 200);
    Outcome b = walk_solve(f, 5, 200);
    REQUIRE(a.status == b.status);
    REQUIRE(a.stats == b.stats);
    REQUIRE(a.model == b.model);
}

TEST_CASE("the full assignment stays total and changes only via copies and flips") {
    SplitMix64 rng(808);
    for (int i = 0; i < 25; ++i) {
        Formula f = oracle::random_test_formula(rng, 6, 14, 2.0, 5.0);
        UnitWalker walker(f, rng.next());
        for (int period = 0; period < 10; ++period) {
            FullAssignment before = walker.full();
            bool satisfied = walker.walk_period();
            const FullAssignment& after = walker.full();
            REQUIRE(after.num_vars() == f.num_vars);
            for (Var v = 1; v <= f.num_vars; ++v) {
                if (before[v] == after[v]) continue;
                bool copied = std::count(walker.last_copied().begin(),
                                         walker.last_copied().end(), v) > 0;
                bool flipped = std::count(walker.last_flipped().begin(),
                                          walker.last_flipped().end(), v) > 0;
                REQUIRE((copied || flipped));
            }
            if (satisfied) {
                REQUIRE(evaluate(f, walker.last_assignment()));
                break;
            }
        }
    }
}

TEST_CASE("decisions copy the value from the full assignment") {
    // One wide clause satisfied by the full assignment: nothing propagates,
    // every variable is a decision, and the completed assignment must
    // reproduce the full assignment exactly.
    Formula f = make_formula(4, {{1, 2, 3, 4}});
    UnitWalker walker(f, 2);
    FullAssignment start = assignment({true, false, true, false});
    walker.set_full(start);
    REQUIRE(walker.walk_period());
    REQUIRE(walker.last_copied().empty());
    REQUIRE(walker.last_flipped().empty());
    REQUIRE(walker.last_assignment() == start);
    REQUIRE(walker.full() == start);
}
