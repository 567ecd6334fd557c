#pragma once

#include <algorithm>
#include <cstdint>
#include <istream>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include "rapidsat/lit.hpp"

namespace rapidsat {

using Clause = std::vector<Lit>;

/// A total assignment: every variable 1..num_vars maps to a boolean.
class FullAssignment {
public:
    FullAssignment() = default;
    explicit FullAssignment(Var num_vars, bool init = false)
        : values_(num_vars + 1, init ? 1 : 0) {}

    Var num_vars() const { return values_.empty() ? 0 : static_cast<Var>(values_.size() - 1); }

    bool operator[](Var v) const {
        assert(v >= 1 && v <= num_vars());
        return values_[v] != 0;
    }
    void set(Var v, bool value) {
        assert(v >= 1 && v <= num_vars());
        values_[v] = value ? 1 : 0;
    }
    void flip(Var v) { set(v, !(*this)[v]); }

    /// True iff the literal holds under this assignment.
    bool satisfies(Lit l) const { return (*this)[l.var()] == l.positive(); }

    friend bool operator==(const FullAssignment&, const FullAssignment&) = default;

private:
    std::vector<uint8_t> values_;
};

/// An immutable CNF instance. Clauses are normalized: no duplicate literal
/// within a clause, no tautological clause. An empty clause is kept as-is
/// (the formula is then trivially unsatisfiable). Safe to share across
/// threads once constructed.
struct Formula {
    Var num_vars = 0;
    std::vector<Clause> clauses;

    friend bool operator==(const Formula&, const Formula&) = default;
};

/// Parse failure, carrying the 1-based input line it was detected on.
class DimacsError : public std::runtime_error {
public:
    DimacsError(size_t line, const std::string& message)
        : std::runtime_error("line " + std::to_string(line) + ": " + message), line_(line) {}
    size_t line() const { return line_; }

private:
    size_t line_;
};

namespace detail {

/// Deduplicate literals in place (first occurrence wins). Returns false if
/// the clause contains complementary literals and should be dropped.
inline bool normalize_clause(Clause& clause) {
    Clause out;
    out.reserve(clause.size());
    for (Lit l : clause) {
        bool duplicate = false;
        for (Lit k : out) {
            if (k == l) { duplicate = true; break; }
            if (k == -l) return false;
        }
        if (!duplicate) out.push_back(l);
    }
    clause = std::move(out);
    return true;
}

} // namespace detail

/// Parse a DIMACS CNF document. Comment lines start with 'c'; a header
/// "p cnf <vars> <clauses>" precedes the clauses; clauses are
/// zero-terminated integer lists and may span lines. The declared clause
/// count is advisory: a mismatch is reported through `warnings` (when
/// given), not an error. Malformed input throws DimacsError.
inline Formula parse_dimacs(std::istream& in, std::vector<std::string>* warnings = nullptr) {
    Formula formula;
    bool seen_header = false;
    size_t declared_clauses = 0;
    size_t clause_records = 0; // clauses as written, including dropped tautologies
    size_t line_no = 0;
    Clause current;
    bool clause_open = false;
    size_t last_token_line = 0;

    std::string line;
    while (std::getline(in, line)) {
        ++line_no;
        size_t first = line.find_first_not_of(" \t\r");
        if (first == std::string::npos) continue;
        if (line[first] == 'c') continue;

        if (!seen_header) {
            std::istringstream hs(line);
            std::string p, kind;
            long long vars = -1, clauses = -1;
            std::string rest;
            if (!(hs >> p >> kind >> vars >> clauses) || p != "p" || kind != "cnf" ||
                vars < 0 || clauses < 0 || (hs >> rest)) {
                throw DimacsError(line_no, "malformed header, expected \"p cnf <vars> <clauses>\"");
            }
            formula.num_vars = static_cast<Var>(vars);
            declared_clauses = static_cast<size_t>(clauses);
            seen_header = true;
            continue;
        }

        std::istringstream ls(line);
        std::string token;
        while (ls >> token) {
            size_t consumed = 0;
            long long value = 0;
            try {
                value = std::stoll(token, &consumed);
            } catch (const std::exception&) {
                throw DimacsError(line_no, "non-integer token \"" + token + "\"");
            }
            if (consumed != token.size())
                throw DimacsError(line_no, "non-integer token \"" + token + "\"");

            last_token_line = line_no;
            if (value == 0) {
                ++clause_records;
                if (detail::normalize_clause(current)) formula.clauses.push_back(current);
                current.clear();
                clause_open = false;
                continue;
            }
            Var v = static_cast<Var>(std::llabs(value));
            if (v > formula.num_vars)
                throw DimacsError(line_no, "literal " + std::to_string(value) + " exceeds declared " +
                                               std::to_string(formula.num_vars) + " variables");
            current.push_back(Lit(static_cast<int32_t>(value)));
            clause_open = true;
        }
    }

    if (!seen_header) throw DimacsError(line_no, "malformed header, no \"p cnf\" line found");
    if (clause_open)
        throw DimacsError(last_token_line, "unterminated final clause (missing trailing 0)");
    if (warnings && clause_records != declared_clauses) {
        warnings->push_back("header declares " + std::to_string(declared_clauses) +
                            " clauses but " + std::to_string(clause_records) + " were parsed");
    }
    return formula;
}

inline Formula parse_dimacs(const std::string& text, std::vector<std::string>* warnings = nullptr) {
    std::istringstream in(text);
    return parse_dimacs(in, warnings);
}

/// Serialize a formula in DIMACS format. parse_dimacs(write_dimacs(f)) == f
/// for any normalized formula f.
inline std::string write_dimacs(const Formula& formula) {
    std::ostringstream out;
    out << "p cnf " << formula.num_vars << ' ' << formula.clauses.size() << '\n';
    for (const Clause& clause : formula.clauses) {
        for (Lit l : clause) out << l.dimacs() << ' ';
        out << "0\n";
    }
    return out.str();
}

/// True iff every clause has at least one literal satisfied by the (total)
/// assignment.
inline bool evaluate(const Formula& formula, const FullAssignment& assignment) {
    assert(assignment.num_vars() >= formula.num_vars);
    for (const Clause& clause : formula.clauses) {
        bool sat = false;
        for (Lit l : clause) {
            if (assignment.satisfies(l)) { sat = true; break; }
        }
        if (!sat) return false;
    }
    return true;
}

} // namespace rapidsat
