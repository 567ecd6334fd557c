#pragma once

#include <algorithm>
#include <cassert>
#include <chrono>
#include <cstdint>
#include <functional>
#include <memory>
#include <optional>
#include <utility>
#include <vector>

#include "rapidsat/cnf.hpp"
#include "rapidsat/heuristics.hpp"
#include "rapidsat/lit.hpp"
#include "rapidsat/restarts.hpp"

namespace rapidsat {

enum class Status { Sat, Unsat, Unknown };

inline const char* to_string(Status s) {
    switch (s) {
    case Status::Sat: return "SAT";
    case Status::Unsat: return "UNSAT";
    case Status::Unknown: return "UNKNOWN";
    }
    return "?";
}

struct SolverStats {
    uint64_t conflicts = 0;
    uint64_t decisions = 0;
    uint64_t propagations = 0;
    uint64_t restarts = 0;
    uint64_t learned_clauses = 0;
    uint64_t learned_literals_before_minimization = 0;
    uint64_t learned_literals_after_minimization = 0;
    uint64_t deleted_clauses = 0;
    uint64_t reductions = 0;

    friend bool operator==(const SolverStats&, const SolverStats&) = default;
};

/// Run limits. An absent bound means unlimited; the engine accepts a fully
/// unbounded budget (plain `solve` runs to completion), while the batch
/// harness insists on at least one finite bound. The conflict cap is
/// checked before the wall clock; the clock is polled every 1024 conflicts.
struct Budget {
    std::optional<double> timeout_seconds;
    std::optional<uint64_t> max_conflicts;

    bool bounded() const { return timeout_seconds.has_value() || max_conflicts.has_value(); }
};

struct SolverConfig {
    RestartPolicy restarts = RestartPolicy::luby(6);
    PolarityMode polarity = PolarityMode::PhaseSaving;
    double decay = 0.95;
    uint64_t seed = 1;
    bool reduce_learned = true;
    uint64_t learned_limit_floor = 1000;  // initial limit = max(floor, clauses/3)
    double learned_limit_growth = 1.1;
    uint32_t minimize_depth_limit = 1000;
};

struct Outcome {
    Status status = Status::Unknown;
    std::optional<FullAssignment> model; // present iff status == Sat
    SolverStats stats;
};

/// Optional observation points, used by tests and instrumentation. All
/// callbacks default to empty and cost nothing when unset.
struct SolverHooks {
    /// Literals met while analyzing a conflict, at most one per variable;
    /// exactly what feeds Heuristics::bump_and_decay.
    std::function<void(const std::vector<Lit>&)> on_conflict_literals;
    /// Learned clause before and after minimization (asserting literal first).
    std::function<void(const std::vector<Lit>&, const std::vector<Lit>&)> on_learned;
    std::function<void(Var, bool)> on_decision;
    /// Variable leaving the trail, with the value it held.
    std::function<void(Var, bool)> on_unassign;
    /// Learned-store reduction: deletable clause count before and after.
    std::function<void(size_t, size_t)> on_reduce;
    std::function<void()> on_restart;
};

/// CDCL solver: trail, two-watched-literal propagation, first-UIP conflict
/// analysis with recursive learned-clause minimization, backjumping, and
/// pluggable restart/polarity strategies.
///
/// A solver instance runs one formula once and is single-threaded; the
/// harness creates a fresh instance per run. Besides solve(), the stepping
/// interface (new_decision_level / enqueue / propagate / analyze / minimize
/// / backjump) exposes the same machinery for tests and embedding.
class Solver {
public:
    struct Clause {
        std::vector<Lit> lits; // lits[0] and lits[1] are the watched literals
        mutable double activity = 0.0;
        bool learned = false;
        uint64_t id = 0;
    };

    explicit Solver(const Formula& formula, SolverConfig config = {})
        : config_(std::move(config)),
          num_vars_(formula.num_vars),
          values_(num_vars_ + 1, LBool::Undef),
          level_(num_vars_ + 1, 0),
          reason_(num_vars_ + 1, nullptr),
          seen_(num_vars_ + 1, 0),
          minimize_mark_(num_vars_ + 1, 0),
          watches_(2 * static_cast<size_t>(num_vars_)),
          heuristics_(num_vars_, HeuristicsConfig{config_.polarity, config_.decay, 1.0, 1e100, 1e-100}),
          restart_policy_(config_.restarts) {
        learned_limit_ = std::max<uint64_t>(config_.learned_limit_floor, formula.clauses.size() / 3);
        for (const rapidsat::Clause& clause : formula.clauses) {
            if (!ok_) break;
            add_input_clause(clause);
        }
    }

    Solver(const Solver&) = delete;
    Solver& operator=(const Solver&) = delete;

    // ------------------------------------------------------------------
    // Stepping interface
    // ------------------------------------------------------------------

    /// False once unsatisfiability has been established at level 0.
    bool ok() const { return ok_; }

    uint32_t decision_level() const { return static_cast<uint32_t>(trail_lim_.size()); }

    void new_decision_level() { trail_lim_.push_back(trail_.size()); }

    LBool value(Var v) const { return values_[v]; }
    LBool value(Lit l) const {
        LBool v = values_[l.var()];
        if (v == LBool::Undef) return LBool::Undef;
        return to_lbool((v == LBool::True) == l.positive());
    }
    uint32_t level(Var v) const { return level_[v]; }
    const Clause* reason(Var v) const { return reason_[v]; }
    const std::vector<Lit>& trail() const { return trail_; }
    const SolverStats& stats() const { return stats_; }
    Heuristics& heuristics() { return heuristics_; }
    const Heuristics& heuristics() const { return heuristics_; }
    void set_hooks(SolverHooks hooks) { hooks_ = std::move(hooks); }
    size_t num_learned() const { return learned_.size(); }
    uint64_t learned_limit() const { return learned_limit_; }

    /// Append a literal to the trail at the current decision level.
    /// reason == nullptr marks a decision (or a level-0 fact).
    void enqueue(Lit l, const Clause* reason = nullptr) {
        Var v = l.var();
        assert(values_[v] == LBool::Undef && "enqueue on an assigned variable");
        values_[v] = to_lbool(l.positive());
        level_[v] = decision_level();
        reason_[v] = reason;
        trail_.push_back(l);
        heuristics_.save_phase(v, l.positive());
        if (reason != nullptr) ++stats_.propagations;
    }

    /// Propagate all queued assignments to fixpoint. Returns the first
    /// falsified clause, or nullptr when no conflict was found.
    const Clause* propagate() {
        while (qhead_ < trail_.size()) {
            Lit p = trail_[qhead_++];
            std::vector<Clause*>& ws = watches_[(-p).index()];
            size_t i = 0, j = 0;
            while (i < ws.size()) {
                Clause& c = *ws[i];
                Lit false_lit = -p;
                if (c.lits[0] == false_lit) std::swap(c.lits[0], c.lits[1]);
                assert(c.lits[1] == false_lit);
                ++i;

                Lit first = c.lits[0];
                if (value(first) == LBool::True) {
                    ws[j++] = &c;
                    continue;
                }
                bool moved = false;
                for (size_t k = 2; k < c.lits.size(); ++k) {
                    if (value(c.lits[k]) != LBool::False) {
                        std::swap(c.lits[1], c.lits[k]);
                        watches_[c.lits[1].index()].push_back(&c);
                        moved = true;
                        break;
                    }
                }
                if (moved) continue;

                // Unit or conflicting.
                ws[j++] = &c;
                if (value(first) == LBool::False) {
                    while (i < ws.size()) ws[j++] = ws[i++];
                    ws.resize(j);
                    qhead_ = trail_.size();
                    return &c;
                }
                enqueue(first, &c);
            }
            ws.resize(j);
        }
        return nullptr;
    }

    /// First-UIP conflict analysis. Returns the learned clause (asserting
    /// literal first, exactly one literal of the current level) and the
    /// backjump level: the second-highest level among its literals, 0 for
    /// a unit clause. Callers handle level-0 conflicts as UNSAT instead.
    std::pair<std::vector<Lit>, uint32_t> analyze(const Clause* conflict) {
        assert(conflict != nullptr && decision_level() > 0);
        std::vector<Lit> learned;
        learned.push_back(Lit()); // slot for the asserting literal
        conflict_lits_.clear();
        to_clear_.clear();

        uint32_t current = decision_level();
        size_t path = 0;
        size_t index = trail_.size();
        Lit pivot;
        const Clause* clause = conflict;

        for (;;) {
            assert(clause != nullptr);
            if (clause->learned) bump_clause_activity(*clause);
            size_t start = pivot.valid() ? 1 : 0; // lits[0] of a reason is the pivot itself
            for (size_t k = start; k < clause->lits.size(); ++k) {
                Lit q = clause->lits[k];
                Var v = q.var();
                if (seen_[v] || level_[v] == 0) continue;
                seen_[v] = 1;
                to_clear_.push_back(v);
                conflict_lits_.push_back(q);
                if (level_[v] >= current) {
                    ++path;
                } else {
                    learned.push_back(q);
                }
            }
            while (!seen_[trail_[index - 1].var()]) --index;
            pivot = trail_[index - 1];
            --index;
            seen_[pivot.var()] = 0;
            --path;
            if (path == 0) break;
            clause = reason_[pivot.var()];
        }
        learned[0] = -pivot;

        uint32_t backjump_level = 0;
        if (learned.size() > 1) {
            size_t best = 1;
            for (size_t k = 2; k < learned.size(); ++k) {
                if (level_[learned[k].var()] > level_[learned[best].var()]) best = k;
            }
            backjump_level = level_[learned[best].var()];
        }
        for (Var v : to_clear_) seen_[v] = 0;
        decay_clause_activity();
        if (hooks_.on_conflict_literals) hooks_.on_conflict_literals(conflict_lits_);
        return {std::move(learned), backjump_level};
    }

    /// Literals fed to the heuristics for the most recent analyze() call.
    const std::vector<Lit>& last_conflict_literals() const { return conflict_lits_; }

    /// Remove literals that are redundant with respect to reason clauses
    /// (recursive self-subsumption, depth-limited). The asserting literal
    /// learned[0] is always kept; the result is a subset of the input.
    std::vector<Lit> minimize(const std::vector<Lit>& learned) {
        assert(!learned.empty());
        mark_list_.clear();
        for (Lit l : learned) {
            minimize_mark_[l.var()] = 1;
            mark_list_.push_back(l.var());
        }
        std::vector<Lit> out;
        out.reserve(learned.size());
        out.push_back(learned[0]);
        for (size_t k = 1; k < learned.size(); ++k) {
            if (!literal_redundant(learned[k], 0)) out.push_back(learned[k]);
        }
        for (Var v : mark_list_) minimize_mark_[v] = 0;
        return out;
    }

    /// Undo all trail entries above `level`, saving each removed variable's
    /// phase.
    void backjump(uint32_t level) {
        assert(level < decision_level());
        size_t keep = trail_lim_[level];
        for (size_t k = trail_.size(); k-- > keep;) {
            Lit l = trail_[k];
            Var v = l.var();
            values_[v] = LBool::Undef;
            reason_[v] = nullptr;
            heuristics_.on_unassign(v, l.positive());
            if (hooks_.on_unassign) hooks_.on_unassign(v, l.positive());
        }
        trail_.resize(keep);
        trail_lim_.resize(level);
        qhead_ = trail_.size();
    }

    /// Drop the lowest-activity half of the deletable learned clauses
    /// (reasons and binary clauses are kept) once the store exceeds its
    /// limit, then grow the limit. No-op below the limit.
    void reduce_learned_store() {
        if (learned_.size() <= learned_limit_) return;
        std::vector<Clause*> deletable;
        deletable.reserve(learned_.size());
        for (const auto& c : learned_) {
            if (c->lits.size() > 2 && !is_reason(c.get())) deletable.push_back(c.get());
        }
        size_t before = deletable.size();
        std::sort(deletable.begin(), deletable.end(), [](const Clause* a, const Clause* b) {
            return a->activity != b->activity ? a->activity < b->activity : a->id < b->id;
        });
        size_t remove_count = (deletable.size() + 1) / 2;
        deletable.resize(remove_count);
        for (Clause* c : deletable) {
            detach(c);
            c->lits.clear(); // tombstone, erased below
        }
        std::erase_if(learned_, [](const std::unique_ptr<Clause>& c) { return c->lits.empty(); });
        stats_.deleted_clauses += remove_count;
        ++stats_.reductions;
        learned_limit_ = static_cast<uint64_t>(static_cast<double>(learned_limit_) * config_.learned_limit_growth);
        if (learned_.size() > learned_limit_) learned_limit_ = learned_.size();
        if (hooks_.on_reduce) hooks_.on_reduce(before, before - remove_count);
    }

    /// Run the CDCL loop until SAT, UNSAT, or budget exhaustion.
    Outcome solve(const Budget& budget = {}) {
        assert(!solve_called_ && "a Solver instance runs once");
        solve_called_ = true;
        auto start = std::chrono::steady_clock::now();
        heuristics_.seed_perturbation(config_.seed);

        if (!ok_) return finish(Status::Unsat);
        uint64_t restart_limit = restart_policy_.next_limit();
        uint64_t conflicts_since_restart = 0;

        for (;;) {
            const Clause* conflict = propagate();
#ifdef RAPIDSAT_EXPENSIVE_CHECKS
            assert(conflict != nullptr || check_watch_invariant());
#endif
            if (conflict != nullptr) {
                ++stats_.conflicts;
                if (decision_level() == 0) {
                    ok_ = false;
                    return finish(Status::Unsat);
                }
                ++conflicts_since_restart;

                auto [raw, raw_level] = analyze(conflict);
                (void)raw_level; // recomputed after minimization
                heuristics_.bump_and_decay(conflict_lits_);
                std::vector<Lit> learned = minimize(raw);
                stats_.learned_literals_before_minimization += raw.size();
                stats_.learned_literals_after_minimization += learned.size();
                if (hooks_.on_learned) hooks_.on_learned(raw, learned);

                uint32_t target = prepare_backjump(learned);
                backjump(target);
                install_learned(std::move(learned));
                if (config_.reduce_learned) reduce_learned_store();

                if (budget.max_conflicts && stats_.conflicts >= *budget.max_conflicts)
                    return finish(Status::Unknown);
                if (budget.timeout_seconds && stats_.conflicts % 1024 == 0) {
                    std::chrono::duration<double> elapsed = std::chrono::steady_clock::now() - start;
                    if (elapsed.count() >= *budget.timeout_seconds) return finish(Status::Unknown);
                }
            } else {
                if (should_restart(conflicts_since_restart, restart_limit)) {
                    ++stats_.restarts;
                    conflicts_since_restart = 0;
                    restart_limit = restart_policy_.next_limit();
                    if (hooks_.on_restart) hooks_.on_restart();
                    if (decision_level() > 0) backjump(0);
                    continue;
                }
                std::optional<Var> pick = heuristics_.pick_branch_variable(values_);
                if (!pick) {
                    Outcome out = finish(Status::Sat);
                    out.model = extract_model();
                    return out;
                }
                bool polarity = heuristics_.pick_polarity(*pick);
                if (hooks_.on_decision) hooks_.on_decision(*pick, polarity);
                ++stats_.decisions;
                new_decision_level();
                enqueue(Lit(*pick, polarity), nullptr);
            }
        }
    }

    /// Watched-literal invariant sweep, meaningful at propagation fixpoints:
    /// every clause of length >= 2 is watched by exactly its first two
    /// literals, and no watched literal is false unless the other watched
    /// literal is true.
    bool check_watch_invariant() const {
        auto watched_by = [&](const Clause* c, Lit l) {
            size_t count = 0;
            for (const Clause* w : watches_[l.index()])
                if (w == c) ++count;
            return count;
        };
        size_t total_watchers = 0;
        for (const auto& ws : watches_) total_watchers += ws.size();
        size_t expected_watchers = 0;
        auto check_clause = [&](const Clause* c) {
            if (c->lits.size() < 2) return c->lits.size() != 1; // unit clauses are never watched
            expected_watchers += 2;
            if (c->lits[0] == c->lits[1]) return false;
            if (watched_by(c, c->lits[0]) != 1 || watched_by(c, c->lits[1]) != 1) return false;
            LBool v0 = value(c->lits[0]), v1 = value(c->lits[1]);
            if (v0 == LBool::False && v1 != LBool::True) return false;
            if (v1 == LBool::False && v0 != LBool::True) return false;
            return true;
        };
        for (const auto& c : clauses_)
            if (!check_clause(c.get())) return false;
        for (const auto& c : learned_)
            if (!check_clause(c.get())) return false;
        return total_watchers == expected_watchers;
    }

private:
    void add_input_clause(const rapidsat::Clause& lits) {
#ifndef NDEBUG
        // The formula is expected normalized (parse_dimacs output).
        for (size_t a = 0; a < lits.size(); ++a)
            for (size_t b = a + 1; b < lits.size(); ++b)
                assert(lits[a].var() != lits[b].var());
#endif
        if (lits.empty()) {
            ok_ = false;
            return;
        }
        if (lits.size() == 1) {
            LBool v = value(lits[0]);
            if (v == LBool::False) ok_ = false;
            else if (v == LBool::Undef) enqueue(lits[0], nullptr);
            return;
        }
        auto c = std::make_unique<Clause>();
        c->lits = lits;
        c->id = next_clause_id_++;
        attach(c.get());
        clauses_.push_back(std::move(c));
    }

    void attach(Clause* c) {
        assert(c->lits.size() >= 2);
        watches_[c->lits[0].index()].push_back(c);
        watches_[c->lits[1].index()].push_back(c);
    }

    void detach(Clause* c) {
        for (int k = 0; k < 2; ++k) {
            std::vector<Clause*>& ws = watches_[c->lits[k].index()];
            std::erase_if(ws, [c](const Clause* w) { return w == c; });
        }
    }

    bool is_reason(const Clause* c) const {
        Lit head = c->lits[0];
        return value(head) == LBool::True && reason_[head.var()] == c;
    }

    /// True iff the learned literal is implied by the rest of the clause
    /// through reason chains.
    bool literal_redundant(Lit p, uint32_t depth) {
        const Clause* r = reason_[p.var()];
        if (r == nullptr || depth >= config_.minimize_depth_limit) return false;
        assert(r->lits[0] == -p);
        for (size_t k = 1; k < r->lits.size(); ++k) {
            Lit q = r->lits[k];
            Var v = q.var();
            if (level_[v] == 0 || minimize_mark_[v]) continue;
            if (!literal_redundant(q, depth + 1)) return false;
        }
        minimize_mark_[p.var()] = 1;
        mark_list_.push_back(p.var());
        return true;
    }

    /// Move the highest-level non-asserting literal to slot 1 and return
    /// its level (0 for a unit clause).
    uint32_t prepare_backjump(std::vector<Lit>& learned) {
        if (learned.size() == 1) return 0;
        size_t best = 1;
        for (size_t k = 2; k < learned.size(); ++k) {
            if (level_[learned[k].var()] > level_[learned[best].var()]) best = k;
        }
        std::swap(learned[1], learned[best]);
        return level_[learned[1].var()];
    }

    void install_learned(std::vector<Lit> lits) {
        ++stats_.learned_clauses;
        if (lits.size() == 1) {
            enqueue(lits[0], nullptr); // level-0 fact
            return;
        }
        auto c = std::make_unique<Clause>();
        c->lits = std::move(lits);
        c->learned = true;
        c->activity = clause_bump_;
        c->id = next_clause_id_++;
        attach(c.get());
        Clause* raw = c.get();
        learned_.push_back(std::move(c));
        enqueue(raw->lits[0], raw);
    }

    void bump_clause_activity(const Clause& c) {
        c.activity += clause_bump_;
        if (c.activity > 1e20) {
            for (auto& l : learned_) l->activity *= 1e-20;
            clause_bump_ *= 1e-20;
        }
    }

    void decay_clause_activity() { clause_bump_ /= 0.999; }

    FullAssignment extract_model() const {
        FullAssignment model(num_vars_);
        for (Var v = 1; v <= num_vars_; ++v) {
            assert(values_[v] != LBool::Undef);
            model.set(v, values_[v] == LBool::True);
        }
        return model;
    }

    Outcome finish(Status status) {
        Outcome out;
        out.status = status;
        out.stats = stats_;
        return out;
    }

    SolverConfig config_;
    Var num_vars_;
    bool ok_ = true;
    bool solve_called_ = false;

    std::vector<LBool> values_;
    std::vector<uint32_t> level_;
    std::vector<const Clause*> reason_;
    std::vector<uint8_t> seen_;
    std::vector<uint8_t> minimize_mark_;
    std::vector<Var> mark_list_;
    std::vector<Var> to_clear_;
    std::vector<Lit> conflict_lits_;
    std::vector<Lit> trail_;
    std::vector<size_t> trail_lim_;
    size_t qhead_ = 0;

    std::vector<std::vector<Clause*>> watches_;
    std::vector<std::unique_ptr<Clause>> clauses_;
    std::vector<std::unique_ptr<Clause>> learned_;
    uint64_t next_clause_id_ = 0;
    uint64_t learned_limit_ = 0;
    double clause_bump_ = 1.0;

    Heuristics heuristics_;
    RestartPolicy restart_policy_;
    SolverStats stats_;
    SolverHooks hooks_;
};

} // namespace rapidsat
