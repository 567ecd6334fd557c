#pragma once

#include <cassert>
#include <cstdint>
#include <numeric>
#include <span>
#include <vector>

#include "rapidsat/cnf.hpp"
#include "rapidsat/engine.hpp"
#include "rapidsat/lit.hpp"
#include "rapidsat/rng.hpp"

namespace rapidsat {

/// Local search in the UnitWalk style: keep a full assignment and improve
/// it one period at a time. A period draws a fresh random variable order,
/// then repeatedly assigns the highest-priority free variable its value
/// *from* the full assignment and runs unit propagation on the partial
/// assignment, copying every implied value back *to* the full assignment.
///
/// When propagation empties a clause, the pending propagation queue is
/// dropped, the full-assignment value of the variable whose decision
/// triggered the conflict is flipped, and the period carries on with the
/// next free variable, so every period ends with a total assignment. A
/// conflict reached before any decision (contradictory unit clauses) flips
/// nothing.
///
/// The procedure is incomplete: it can find models but never refutes.
class UnitWalker {
public:
    UnitWalker(const Formula& formula, uint64_t seed)
        : formula_(&formula),
          rng_(seed),
          full_(formula.num_vars),
          last_assignment_(formula.num_vars),
          values_(formula.num_vars + 1, LBool::Undef),
          occurrences_(2 * static_cast<size_t>(formula.num_vars)),
          count_true_(formula.clauses.size(), 0),
          count_unassigned_(formula.clauses.size(), 0) {
        for (size_t c = 0; c < formula.clauses.size(); ++c) {
            for (Lit l : formula.clauses[c]) occurrences_[l.index()].push_back(c);
        }
        for (Var v = 1; v <= formula.num_vars; ++v) full_.set(v, rng_.next_bool());
        order_.resize(formula.num_vars);
        std::iota(order_.begin(), order_.end(), Var{1});
    }

    const FullAssignment& full() const { return full_; }
    void set_full(FullAssignment assignment) {
        assert(assignment.num_vars() == formula_->num_vars);
        full_ = std::move(assignment);
    }

    /// The total assignment the most recent period ended with.
    const FullAssignment& last_assignment() const { return last_assignment_; }

    /// Variables whose values were copied into the full assignment by
    /// propagation during the most recent period.
    const std::vector<Var>& last_copied() const { return copied_; }
    /// Variables whose full-assignment values were flipped on conflicts
    /// during the most recent period.
    const std::vector<Var>& last_flipped() const { return flipped_; }

    /// stats().restarts counts completed periods.
    const SolverStats& stats() const { return stats_; }

    /// One period under a fresh random variable order.
    bool walk_period() {
        shuffle(order_, rng_);
        return walk_period(order_);
    }

    /// One period under the given decision order (a permutation of 1..n).
    bool walk_period(std::span<const Var> order) {
        assert(order.size() == formula_->num_vars);
        reset_period();

        // Unit clauses seed the first propagation; an empty input clause
        // just makes the period unsatisfiable.
        for (size_t c = 0; c < formula_->clauses.size(); ++c) {
            if (formula_->clauses[c].size() == 1) queue_.push_back(formula_->clauses[c][0]);
        }
        propagate(0);

        for (Var v : order) {
            if (values_[v] != LBool::Undef) continue;
            ++stats_.decisions;
            if (!assign(Lit(v, full_[v]), false)) {
                on_conflict(v);
                continue;
            }
            propagate(v);
        }

        ++stats_.restarts; // period counter
        bool satisfied = true;
        for (size_t c = 0; c < formula_->clauses.size(); ++c) {
            if (count_true_[c] == 0) { satisfied = false; break; }
        }
        for (Var v = 1; v <= formula_->num_vars; ++v)
            last_assignment_.set(v, values_[v] == LBool::True);
        return satisfied;
    }

private:
    void reset_period() {
        std::fill(values_.begin(), values_.end(), LBool::Undef);
        std::fill(count_true_.begin(), count_true_.end(), 0);
        for (size_t c = 0; c < formula_->clauses.size(); ++c)
            count_unassigned_[c] = static_cast<uint32_t>(formula_->clauses[c].size());
        queue_.clear();
        copied_.clear();
        flipped_.clear();
    }

    /// Make l true in the partial assignment; implied values are copied to
    /// the full assignment. Returns false if some clause became empty.
    bool assign(Lit l, bool implied) {
        Var v = l.var();
        assert(values_[v] == LBool::Undef);
        values_[v] = to_lbool(l.positive());
        if (implied) {
            full_.set(v, l.positive());
            copied_.push_back(v);
            ++stats_.propagations;
        }
        bool conflict = false;
        for (size_t c : occurrences_[l.index()]) {
            ++count_true_[c];
            --count_unassigned_[c];
        }
        for (size_t c : occurrences_[(-l).index()]) {
            --count_unassigned_[c];
            if (count_true_[c] > 0) continue;
            if (count_unassigned_[c] == 0) {
                conflict = true;
            } else if (count_unassigned_[c] == 1) {
                queue_.push_back(unassigned_literal(c));
            }
        }
        return !conflict;
    }

    Lit unassigned_literal(size_t c) const {
        for (Lit l : (*formula_).clauses[c])
            if (values_[l.var()] == LBool::Undef) return l;
        assert(false && "no unassigned literal left");
        return Lit();
    }

    /// Drain the queue; decision_var names the decision this propagation
    /// hangs off (0 for the initial unit-clause pass).
    void propagate(Var decision_var) {
        size_t head = 0;
        while (head < queue_.size()) {
            Lit l = queue_[head++];
            LBool v = values_[l.var()];
            if (v != LBool::Undef) {
                if (v == to_lbool(l.positive())) continue;
                on_conflict(decision_var);
                return;
            }
            if (!assign(l, true)) {
                on_conflict(decision_var);
                return;
            }
        }
        queue_.clear();
    }

    void on_conflict(Var decision_var) {
        ++stats_.conflicts;
        queue_.clear();
        if (decision_var != 0) {
            full_.flip(decision_var);
            flipped_.push_back(decision_var);
        }
    }

    const Formula* formula_;
    SplitMix64 rng_;
    FullAssignment full_;
    FullAssignment last_assignment_;
    std::vector<LBool> values_;
    std::vector<std::vector<size_t>> occurrences_;
    std::vector<uint32_t> count_true_;
    std::vector<uint32_t> count_unassigned_;
    std::vector<Lit> queue_;
    std::vector<Var> order_;
    std::vector<Var> copied_;
    std::vector<Var> flipped_;
    SolverStats stats_;
};

/// Run UnitWalk periods until a model is found or max_periods expire.
/// Returns SAT with the verified model, or UNKNOWN; never UNSAT. The
/// outcome's stats.restarts field carries the number of periods run.
inline Outcome walk_solve(const Formula& formula, uint64_t seed, uint64_t max_periods) {
    assert(max_periods >= 1);
    UnitWalker walker(formula, seed);
    Outcome out;
    for (uint64_t period = 0; period < max_periods; ++period) {
        if (walker.walk_period()) {
            out.status = Status::Sat;
            out.model = walker.last_assignment();
            out.stats = walker.stats();
            assert(evaluate(formula, *out.model));
            return out;
        }
    }
    out.status = Status::Unknown;
    out.stats = walker.stats();
    return out;
}

} // namespace rapidsat
