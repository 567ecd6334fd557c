#pragma once

#include <cstdint>
#include <filesystem>
#include <fstream>
#include <string>
#include <vector>

#include "rapidsat/cnf.hpp"
#include "rapidsat/lit.hpp"
#include "rapidsat/rng.hpp"

namespace rapidsat {

/// Uniform random 3-SAT: each clause picks three distinct variables and
/// independent random signs. Clauses are normalized by construction.
inline Formula random_3sat(Var num_vars, size_t num_clauses, uint64_t seed) {
    assert(num_vars >= 3);
    Formula f;
    f.num_vars = num_vars;
    f.clauses.reserve(num_clauses);
    SplitMix64 rng(seed);
    for (size_t i = 0; i < num_clauses; ++i) {
        Var v[3];
        v[0] = static_cast<Var>(rng.next_below(num_vars)) + 1;
        do v[1] = static_cast<Var>(rng.next_below(num_vars)) + 1; while (v[1] == v[0]);
        do v[2] = static_cast<Var>(rng.next_below(num_vars)) + 1; while (v[2] == v[0] || v[2] == v[1]);
        Clause c;
        for (Var w : v) c.push_back(Lit(w, rng.next_bool()));
        f.clauses.push_back(std::move(c));
    }
    return f;
}

/// Pigeonhole principle PHP(pigeons, holes): every pigeon sits in some
/// hole, no two pigeons share a hole. Unsatisfiable iff pigeons > holes.
/// Variable (i, j) = (i - 1) * holes + j for pigeon i, hole j.
inline Formula pigeonhole(uint32_t pigeons, uint32_t holes) {
    Formula f;
    f.num_vars = pigeons * holes;
    auto var_at = [holes](uint32_t pigeon, uint32_t hole) {
        return static_cast<Var>((pigeon - 1) * holes + hole);
    };
    for (uint32_t i = 1; i <= pigeons; ++i) {
        Clause c;
        for (uint32_t j = 1; j <= holes; ++j) c.push_back(Lit(var_at(i, j), true));
        f.clauses.push_back(std::move(c));
    }
    for (uint32_t j = 1; j <= holes; ++j) {
        for (uint32_t a = 1; a <= pigeons; ++a) {
            for (uint32_t b = a + 1; b <= pigeons; ++b) {
                f.clauses.push_back({Lit(var_at(a, j), false), Lit(var_at(b, j), false)});
            }
        }
    }
    return f;
}

namespace detail {

/// Append clauses for out <-> (a XOR b).
inline void xor_gate(Formula& f, Var out, Var a, Var b) {
    f.clauses.push_back({Lit(out, false), Lit(a, true), Lit(b, true)});
    f.clauses.push_back({Lit(out, false), Lit(a, false), Lit(b, false)});
    f.clauses.push_back({Lit(out, true), Lit(a, true), Lit(b, false)});
    f.clauses.push_back({Lit(out, true), Lit(a, false), Lit(b, true)});
}

/// Chain t_i <-> x_1 XOR ... XOR x_i over auxiliary variables; returns the
/// variable holding the parity of x_1..x_n.
inline Var xor_chain(Formula& f, Var x_first, uint32_t n, Var aux_first) {
    if (n == 1) return x_first;
    Var prev = aux_first;
    xor_gate(f, prev, x_first, x_first + 1);
    for (uint32_t i = 2; i < n; ++i) {
        Var next = aux_first + (i - 1);
        xor_gate(f, next, prev, x_first + i);
        prev = next;
    }
    return prev;
}

} // namespace detail

/// Parity instance over n inputs. Satisfiable variant: one XOR chain
/// constrained to odd parity. Unsatisfiable variant: two chains over the
/// same inputs constrained to opposite parities.
inline Formula parity_instance(uint32_t n, bool satisfiable) {
    assert(n >= 2);
    Formula f;
    uint32_t aux_per_chain = n - 1;
    f.num_vars = n + (satisfiable ? aux_per_chain : 2 * aux_per_chain);
    Var t = detail::xor_chain(f, 1, n, n + 1);
    f.clauses.push_back({Lit(t, true)});
    if (!satisfiable) {
        Var s = detail::xor_chain(f, 1, n, n + 1 + aux_per_chain);
        f.clauses.push_back({Lit(s, false)});
    }
    return f;
}

/// Write the bundled desk-scale corpus into `dir`: random 3-SAT at the
/// phase-transition ratio 4.26 from 20 to 100 variables (a mix of SAT and
/// UNSAT instances), plus small crafted pigeonhole and parity instances.
/// Returns the written file names (relative to dir), sorted.
inline std::vector<std::string> write_bundled_corpus(const std::filesystem::path& dir,
                                                     uint64_t seed = 42) {
    namespace fs = std::filesystem;
    fs::create_directories(dir);
    std::vector<std::string> names;
    auto emit = [&](const std::string& name, const Formula& f) {
        std::ofstream out(dir / name);
        out << write_dimacs(f);
        names.push_back(name);
    };

    SplitMix64 rng(seed);
    uint32_t index = 0;
    for (Var vars : {20, 30, 40, 50, 75, 100}) {
        for (int k = 0; k < 3; ++k) {
            auto clauses = static_cast<size_t>(4.26 * vars + 0.5);
            char name[64];
            std::snprintf(name, sizeof(name), "r3sat_v%03u_%02u.cnf", vars, ++index);
            emit(name, random_3sat(vars, clauses, rng.next()));
        }
    }
    emit("php_4_3.cnf", pigeonhole(4, 3));
    emit("php_5_4.cnf", pigeonhole(5, 4));
    emit("php_6_5.cnf", pigeonhole(6, 5));
    emit("php_8_7.cnf", pigeonhole(8, 7));
    emit("php_9_8.cnf", pigeonhole(9, 8));
    emit("parity_sat_8.cnf", parity_instance(8, true));
    emit("parity_unsat_6.cnf", parity_instance(6, false));
    emit("parity_unsat_10.cnf", parity_instance(10, false));

    std::sort(names.begin(), names.end());
    return names;
}

} // namespace rapidsat
