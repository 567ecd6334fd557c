#pragma once

#include <cassert>
#include <cstdint>
#include <limits>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "rapidsat/lit.hpp"
#include "rapidsat/rng.hpp"

namespace rapidsat {

/// How decision variables get their value.
///   Negative:     always false.
///   PhaseSaving:  the value the variable last held on the trail; false
///                 before its first assignment.
///   ActivitySign: the sign with the higher per-variable conflict counter;
///                 false on a tie.
enum class PolarityMode { Negative, PhaseSaving, ActivitySign };

inline const char* to_string(PolarityMode mode) {
    switch (mode) {
    case PolarityMode::Negative: return "negative";
    case PolarityMode::PhaseSaving: return "saving";
    case PolarityMode::ActivitySign: return "activity";
    }
    return "?";
}

inline PolarityMode parse_polarity_mode(std::string_view name) {
    if (name == "negative") return PolarityMode::Negative;
    if (name == "saving") return PolarityMode::PhaseSaving;
    if (name == "activity") return PolarityMode::ActivitySign;
    throw std::invalid_argument("bad polarity mode \"" + std::string(name) +
                                "\", expected negative|saving|activity");
}

struct HeuristicsConfig {
    PolarityMode polarity = PolarityMode::PhaseSaving;
    double decay = 0.95;               // bump amount grows by 1/decay per conflict
    double initial_bump = 1.0;
    double rescale_threshold = 1e100;
    double rescale_factor = 1e-100;
};

/// Conflict-driven branching state: per-variable activity scores with a
/// score-ordered heap, per-variable-per-polarity conflict counters, and
/// saved phases. Owned by a single solver instance.
class Heuristics {
public:
    explicit Heuristics(Var num_vars, HeuristicsConfig config = {})
        : config_(config),
          num_vars_(num_vars),
          score_(num_vars + 1, 0.0),
          counts_{std::vector<uint64_t>(num_vars + 1, 0), std::vector<uint64_t>(num_vars + 1, 0)},
          saved_(num_vars + 1, 0),
          has_saved_(num_vars + 1, 0),
          heap_pos_(num_vars + 1, npos),
          bump_(config.initial_bump) {
        assert(config.decay > 0.0 && config.decay < 1.0);
        rebuild_heap();
    }

    PolarityMode mode() const { return config_.polarity; }
    double activity(Var v) const { return score_[v]; }
    uint64_t polarity_count(Var v, bool positive) const { return counts_[positive ? 1 : 0][v]; }
    bool has_saved_phase(Var v) const { return has_saved_[v] != 0; }
    bool saved_phase(Var v) const { return saved_[v] != 0; }
    double bump_amount() const { return bump_; }

    /// Seed the initial activities with tiny distinct jitter in [0, 1e-6)
    /// so tie-breaking, and hence the whole run, varies with the seed.
    /// Call once, before solving.
    void seed_perturbation(uint64_t seed) {
        SplitMix64 rng(seed);
        for (Var v = 1; v <= num_vars_; ++v) score_[v] = rng.next_double() * 1e-6;
        rebuild_heap();
    }

    /// Called once per conflict with the literals met during its analysis,
    /// at most one per variable. Bumps each variable's score, then grows
    /// the bump amount by 1/decay; polarity counters record the sign each
    /// variable appeared with.
    void bump_and_decay(std::span<const Lit> conflict_lits) {
        for (Lit l : conflict_lits) {
            Var v = l.var();
            counts_[l.positive() ? 1 : 0][v] += 1;
            score_[v] += bump_;
            if (score_[v] > config_.rescale_threshold) rescale();
            if (heap_pos_[v] != npos) sift_up(heap_pos_[v]);
        }
        bump_ /= config_.decay;
    }

    /// Unassigned variable of maximal score, ties broken by lowest index;
    /// nullopt iff every variable is assigned. Pure in (scores, values).
    std::optional<Var> pick_branch_variable(const std::vector<LBool>& values) {
        while (!heap_.empty() && values[heap_[0]] != LBool::Undef) pop_top();
        if (heap_.empty()) return std::nullopt;
        return heap_[0];
    }

    /// Decision value for v under the configured polarity mode.
    bool pick_polarity(Var v) const {
        switch (config_.polarity) {
        case PolarityMode::Negative:
            return false;
        case PolarityMode::PhaseSaving:
            return has_saved_[v] ? saved_[v] != 0 : false;
        case PolarityMode::ActivitySign:
            return counts_[1][v] > counts_[0][v];
        }
        return false;
    }

    /// Record the value v last held; last write wins.
    void save_phase(Var v, bool value) {
        saved_[v] = value ? 1 : 0;
        has_saved_[v] = 1;
    }

    /// Trail removal notification: saves the phase and makes v pickable again.
    void on_unassign(Var v, bool value_on_trail) {
        save_phase(v, value_on_trail);
        if (heap_pos_[v] == npos) insert(v);
    }

private:
    static constexpr size_t npos = std::numeric_limits<size_t>::max();

    // Max-heap order: higher score first, lower index on equal scores.
    bool precedes(Var a, Var b) const {
        return score_[a] > score_[b] || (score_[a] == score_[b] && a < b);
    }

    void rescale() {
        for (Var v = 1; v <= num_vars_; ++v) score_[v] *= config_.rescale_factor;
        bump_ *= config_.rescale_factor;
        // Uniform positive scaling preserves the heap order.
    }

    void rebuild_heap() {
        heap_.clear();
        heap_.reserve(num_vars_);
        for (Var v = 1; v <= num_vars_; ++v) {
            heap_pos_[v] = heap_.size();
            heap_.push_back(v);
        }
        if (heap_.size() > 1) {
            for (size_t i = heap_.size() / 2; i-- > 0;) sift_down(i);
        }
    }

    void insert(Var v) {
        heap_pos_[v] = heap_.size();
        heap_.push_back(v);
        sift_up(heap_pos_[v]);
    }

    void pop_top() {
        Var top = heap_[0];
        heap_pos_[top] = npos;
        Var last = heap_.back();
        heap_.pop_back();
        if (!heap_.empty() && top != last) {
            heap_[0] = last;
            heap_pos_[last] = 0;
            sift_down(0);
        }
    }

    void sift_up(size_t i) {
        Var v = heap_[i];
        while (i > 0) {
            size_t parent = (i - 1) / 2;
            if (!precedes(v, heap_[parent])) break;
            heap_[i] = heap_[parent];
            heap_pos_[heap_[i]] = i;
            i = parent;
        }
        heap_[i] = v;
        heap_pos_[v] = i;
    }

    void sift_down(size_t i) {
        Var v = heap_[i];
        for (;;) {
            size_t child = 2 * i + 1;
            if (child >= heap_.size()) break;
            if (child + 1 < heap_.size() && precedes(heap_[child + 1], heap_[child])) ++child;
            if (!precedes(heap_[child], v)) break;
            heap_[i] = heap_[child];
            heap_pos_[heap_[i]] = i;
            i = child;
        }
        heap_[i] = v;
        heap_pos_[v] = i;
    }

    HeuristicsConfig config_;
    Var num_vars_;
    std::vector<double> score_;
    std::vector<uint64_t> counts_[2]; // [0] negative occurrences, [1] positive
    std::vector<uint8_t> saved_;
    std::vector<uint8_t> has_saved_;
    std::vector<Var> heap_;
    std::vector<size_t> heap_pos_;
    double bump_;
};

} // namespace rapidsat
