#pragma once

#include <cassert>
#include <cstdint>
#include <cstdlib>
#include <functional>

namespace rapidsat {

/// Variable index, 1-based as in DIMACS. 0 is never a valid variable.
using Var = uint32_t;

/// Truth value of a variable during search.
enum class LBool : uint8_t { False = 0, True = 1, Undef = 2 };

inline LBool to_lbool(bool b) { return b ? LBool::True : LBool::False; }

/// A literal in DIMACS convention: a nonzero signed integer, negative
/// meaning the negated variable. Negation is an involution: -(-l) == l.
class Lit {
public:
    Lit() = default;
    explicit Lit(int32_t dimacs) : code_(dimacs) { assert(dimacs != 0); }
    Lit(Var v, bool positive) : code_(positive ? static_cast<int32_t>(v) : -static_cast<int32_t>(v)) {
        assert(v > 0);
    }

    Var var() const { return static_cast<Var>(std::abs(code_)); }
    bool positive() const { return code_ > 0; }
    int32_t dimacs() const { return code_; }
    bool valid() const { return code_ != 0; }

    Lit operator-() const { return Lit(-code_); }

    /// Dense index for literal-keyed arrays: positive literals at even
    /// slots, negative at odd, variables packed from 0.
    size_t index() const { return 2 * static_cast<size_t>(var() - 1) + (positive() ? 0 : 1); }

    friend bool operator==(Lit a, Lit b) { return a.code_ == b.code_; }
    friend bool operator!=(Lit a, Lit b) { return a.code_ != b.code_; }
    friend bool operator<(Lit a, Lit b) { return a.index() < b.index(); }

private:
    int32_t code_ = 0;
};

} // namespace rapidsat

template <> struct std::hash<rapidsat::Lit> {
    size_t operator()(rapidsat::Lit l) const noexcept { return std::hash<int32_t>()(l.dimacs()); }
};
