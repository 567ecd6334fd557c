#pragma once

#include <cassert>
#include <cstdint>
#include <cstdio>
#include <stdexcept>
#include <string>
#include <string_view>

namespace rapidsat {

enum class RestartKind { Fixed, Geometric, Luby, InnerOuter };

/// A restart policy: a tagged configuration plus the mutable position in
/// its limit sequence. next_limit() hands out the conflict allowance for
/// the upcoming run and advances the state.
///
/// Config grammar (CLI and files):
///   "fixed:<n>"                  constant limit
///   "geometric:<first>,<factor>" limit grows by <factor> after each restart
///   "luby:<u>"                   i-th limit is u * t_i of the Luby sequence
///   "inout:<base>,<factor>"      inner limit grows geometrically until it
///                                passes an outer bound, then resets while
///                                the bound grows
class RestartPolicy {
public:
    static RestartPolicy fixed(uint64_t size) {
        assert(size >= 1);
        RestartPolicy p(RestartKind::Fixed);
        p.size_ = size;
        return p;
    }

    static RestartPolicy geometric(double first = 100.0, double factor = 1.5) {
        assert(first >= 1.0 && factor > 1.0);
        RestartPolicy p(RestartKind::Geometric);
        p.first_ = first;
        p.factor_ = factor;
        p.current_ = first;
        return p;
    }

    static RestartPolicy luby(uint64_t unit_run = 6) {
        assert(unit_run >= 1);
        RestartPolicy p(RestartKind::Luby);
        p.unit_ = unit_run;
        return p;
    }

    static RestartPolicy inner_outer(double base = 100.0, double factor = 1.1) {
        assert(base >= 1.0 && factor > 1.0);
        RestartPolicy p(RestartKind::InnerOuter);
        p.base_ = base;
        p.factor_ = factor;
        p.inner_ = base;
        p.outer_ = base;
        return p;
    }

    /// Parse the config grammar above. Throws std::invalid_argument.
    static RestartPolicy parse(std::string_view spec);

    RestartKind kind() const { return kind_; }

    /// Conflict allowance for the upcoming run; advances the sequence.
    uint64_t next_limit() {
        switch (kind_) {
        case RestartKind::Fixed:
            return size_;
        case RestartKind::Geometric: {
            auto limit = static_cast<uint64_t>(current_);
            current_ *= factor_;
            return limit < 1 ? 1 : limit;
        }
        case RestartKind::Luby: {
            uint64_t limit = unit_ * luby_term(index_);
            ++index_;
            return limit;
        }
        case RestartKind::InnerOuter: {
            auto limit = static_cast<uint64_t>(inner_);
            inner_ *= factor_;
            if (inner_ > outer_) {
                inner_ = base_;
                outer_ *= factor_;
            }
            return limit < 1 ? 1 : limit;
        }
        }
        return 1; // unreachable
    }

    /// t_i of the Luby sequence (1,1,2,1,1,2,4,...), i >= 1. Evaluated
    /// iteratively by descending over complete prefixes of size 2^k - 1.
    static uint64_t luby_term(uint64_t i) {
        assert(i >= 1);
        uint64_t x = i - 1;
        uint64_t size = 1;
        uint64_t seq = 0;
        while (size < x + 1) {
            size = 2 * size + 1;
            ++seq;
        }
        while (size - 1 != x) {
            size = (size - 1) >> 1;
            --seq;
            x %= size;
        }
        return uint64_t{1} << seq;
    }

    /// Row label for result tables, e.g. "Luby-6" or "Fixed-700".
    std::string label() const {
        switch (kind_) {
        case RestartKind::Fixed: return "Fixed-" + std::to_string(size_);
        case RestartKind::Geometric: return "Geometric-" + format(first_) + "-" + format(factor_);
        case RestartKind::Luby: return "Luby-" + std::to_string(unit_);
        case RestartKind::InnerOuter: return "InOut-" + format(base_) + "-" + format(factor_);
        }
        return {};
    }

    /// Canonical config-grammar form of this policy.
    std::string spec() const {
        switch (kind_) {
        case RestartKind::Fixed: return "fixed:" + std::to_string(size_);
        case RestartKind::Geometric: return "geometric:" + format(first_) + "," + format(factor_);
        case RestartKind::Luby: return "luby:" + std::to_string(unit_);
        case RestartKind::InnerOuter: return "inout:" + format(base_) + "," + format(factor_);
        }
        return {};
    }

private:
    explicit RestartPolicy(RestartKind kind) : kind_(kind) {}

    static std::string format(double value) {
        char buf[32];
        std::snprintf(buf, sizeof(buf), "%g", value);
        return buf;
    }

    RestartKind kind_;
    uint64_t size_ = 0;           // fixed
    uint64_t unit_ = 0;           // luby
    uint64_t index_ = 1;          // luby: 1-based restart index
    double first_ = 0, current_ = 0; // geometric
    double base_ = 0, inner_ = 0, outer_ = 0; // inner/outer
    double factor_ = 0;           // geometric and inner/outer
};

/// A run is due for a restart once it has spent its conflict allowance.
inline bool should_restart(uint64_t conflicts_since_restart, uint64_t limit) {
    return conflicts_since_restart >= limit;
}

inline RestartPolicy RestartPolicy::parse(std::string_view spec) {
    auto fail = [&](const std::string& why) -> RestartPolicy {
        throw std::invalid_argument("bad restart spec \"" + std::string(spec) + "\": " + why);
    };
    size_t colon = spec.find(':');
    if (colon == std::string_view::npos) return fail("expected <kind>:<args>");
    std::string_view kind = spec.substr(0, colon);
    std::string args(spec.substr(colon + 1));

    auto parse_u64 = [&](const std::string& s) {
        size_t pos = 0;
        long long v = 0;
        try {
            v = std::stoll(s, &pos);
        } catch (const std::exception&) {
            fail("expected integer, got \"" + s + "\"");
        }
        if (pos != s.size() || v < 1) fail("expected positive integer, got \"" + s + "\"");
        return static_cast<uint64_t>(v);
    };
    auto parse_f64 = [&](const std::string& s) {
        size_t pos = 0;
        double v = 0;
        try {
            v = std::stod(s, &pos);
        } catch (const std::exception&) {
            fail("expected number, got \"" + s + "\"");
        }
        if (pos != s.size()) fail("expected number, got \"" + s + "\"");
        return v;
    };
    auto split_pair = [&](const std::string& s) {
        size_t comma = s.find(',');
        if (comma == std::string::npos) fail("expected two comma-separated arguments");
        return std::pair<std::string, std::string>(s.substr(0, comma), s.substr(comma + 1));
    };

    if (kind == "fixed") return RestartPolicy::fixed(parse_u64(args));
    if (kind == "luby") return RestartPolicy::luby(parse_u64(args));
    if (kind == "geometric") {
        auto [a, b] = split_pair(args);
        double first = parse_f64(a), factor = parse_f64(b);
        if (first < 1.0) fail("first limit must be >= 1");
        if (factor <= 1.0) fail("growth factor must be > 1");
        return RestartPolicy::geometric(first, factor);
    }
    if (kind == "inout") {
        auto [a, b] = split_pair(args);
        double base = parse_f64(a), factor = parse_f64(b);
        if (base < 1.0) fail("base must be >= 1");
        if (factor <= 1.0) fail("growth factor must be > 1");
        return RestartPolicy::inner_outer(base, factor);
    }
    return fail("unknown kind \"" + std::string(kind) + "\"");
}

} // namespace rapidsat
