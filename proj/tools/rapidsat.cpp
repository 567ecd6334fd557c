// Command-line front end: solve, bench, luby, unitwalk, gen.
// Exit codes follow the SAT-competition convention: 10 SAT, 20 UNSAT,
// 0 UNKNOWN/other.

#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>
#include <thread>
#include <vector>

#include "CLI11.hpp"
#include "rapidsat/rapidsat.hpp"

namespace {

using namespace rapidsat;

constexpr int kExitSat = 10;
constexpr int kExitUnsat = 20;
constexpr int kExitUnknown = 0;

int exit_code(Status status) {
    switch (status) {
    case Status::Sat: return kExitSat;
    case Status::Unsat: return kExitUnsat;
    case Status::Unknown: return kExitUnknown;
    }
    return kExitUnknown;
}

void print_stats(const SolverStats& stats) {
    std::cout << "c conflicts    " << stats.conflicts << "\n"
              << "c decisions    " << stats.decisions << "\n"
              << "c propagations " << stats.propagations << "\n"
              << "c restarts     " << stats.restarts << "\n"
              << "c learned      " << stats.learned_clauses << " (" << stats.deleted_clauses
              << " deleted)\n"
              << "c learned-lits " << stats.learned_literals_before_minimization << " -> "
              << stats.learned_literals_after_minimization << " after minimization\n";
}

void print_result(const Outcome& outcome) {
    switch (outcome.status) {
    case Status::Sat: std::cout << "s SATISFIABLE\n"; break;
    case Status::Unsat: std::cout << "s UNSATISFIABLE\n"; break;
    case Status::Unknown: std::cout << "s UNKNOWN\n"; break;
    }
    if (outcome.status == Status::Sat && outcome.model) {
        const FullAssignment& model = *outcome.model;
        std::cout << "v";
        int on_line = 0;
        for (Var v = 1; v <= model.num_vars(); ++v) {
            std::cout << ' ' << (model[v] ? static_cast<int64_t>(v) : -static_cast<int64_t>(v));
            if (++on_line == 32 && v != model.num_vars()) {
                std::cout << "\nv";
                on_line = 0;
            }
        }
        std::cout << " 0\n";
    }
}

std::optional<Formula> load_formula(const std::string& path) {
    std::ifstream in(path);
    if (!in) {
        std::cout << "c error: cannot open \"" << path << "\"\n";
        return std::nullopt;
    }
    std::vector<std::string> warnings;
    try {
        Formula f = parse_dimacs(in, &warnings);
        for (const std::string& w : warnings) std::cout << "c warning: " << w << "\n";
        return f;
    } catch (const DimacsError& e) {
        std::cout << "c error: " << path << ": " << e.what() << "\n";
        return std::nullopt;
    }
}

std::vector<std::string> split_list(const std::string& csv) {
    std::vector<std::string> out;
    size_t start = 0;
    while (start <= csv.size()) {
        size_t comma = csv.find(',', start);
        if (comma == std::string::npos) {
            out.push_back(csv.substr(start));
            break;
        }
        out.push_back(csv.substr(start, comma - start));
        start = comma + 1;
    }
    return out;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"rapidsat: a small CDCL SAT solver with pluggable restart strategies"};
    app.require_subcommand(1);

    // --- solve ---
    std::string solve_file;
    std::string solve_restart = "luby:6";
    std::string solve_polarity = "saving";
    uint64_t solve_seed = 1;
    double solve_decay = 0.95;
    double solve_timeout = 0.0;
    uint64_t solve_conflicts = 0;
    bool no_model = false;
    CLI::App* solve_cmd = app.add_subcommand("solve", "solve one DIMACS CNF file");
    solve_cmd->add_option("file", solve_file, "DIMACS CNF file")->required();
    solve_cmd->add_option("--restart", solve_restart,
                          "restart policy: fixed:<n> | geometric:<first>,<factor> | luby:<u> | "
                          "inout:<base>,<factor>");
    solve_cmd->add_option("--polarity", solve_polarity, "negative | saving | activity");
    solve_cmd->add_option("--seed", solve_seed, "seed for initial activity jitter");
    solve_cmd->add_option("--decay", solve_decay, "activity decay factor in (0,1)");
    solve_cmd->add_option("--timeout", solve_timeout, "wall-clock limit in seconds (0 = none)");
    solve_cmd->add_option("--conflicts", solve_conflicts, "conflict cap (0 = none)");
    solve_cmd->add_flag("--no-model", no_model, "suppress the v-lines for SAT results");

    // --- bench ---
    std::string bench_dir;
    std::string bench_restarts = "luby:1,luby:2,luby:4,luby:6,luby:8,luby:12,luby:16,luby:32,"
                                 "luby:64,luby:128,luby:256,luby:512";
    std::string bench_seeds = "1,2,3";
    std::string bench_polarity = "saving";
    double bench_timeout = 900.0;
    uint64_t bench_conflicts = 0;
    unsigned bench_workers = std::max(1u, std::thread::hardware_concurrency());
    uint64_t bench_baseline = 100;
    std::string bench_out = "table.csv";
    std::string bench_hist = "hist.csv";
    CLI::App* bench_cmd = app.add_subcommand("bench", "sweep a corpus directory of .cnf files");
    bench_cmd->add_option("dir", bench_dir, "corpus directory")->required();
    bench_cmd->add_option("--restarts", bench_restarts, "comma-separated restart specs");
    bench_cmd->add_option("--seeds", bench_seeds, "comma-separated seeds");
    bench_cmd->add_option("--polarity", bench_polarity, "negative | saving | activity");
    bench_cmd->add_option("--timeout", bench_timeout, "per-run wall-clock limit in seconds");
    bench_cmd->add_option("--conflicts", bench_conflicts, "per-run conflict cap (0 = none)");
    bench_cmd->add_option("--workers", bench_workers, "parallel runs");
    bench_cmd->add_option("--baseline", bench_baseline,
                          "reference solved count for the histogram baseline column");
    bench_cmd->add_option("--out", bench_out, "conflict-average table CSV path");
    bench_cmd->add_option("--hist", bench_hist, "solved-count histogram CSV path");

    // --- luby ---
    uint64_t luby_count = 0;
    uint64_t luby_unit = 1;
    CLI::App* luby_cmd = app.add_subcommand("luby", "print restart limits of the Luby sequence");
    luby_cmd->add_option("--print", luby_count, "how many limits to print")->required();
    luby_cmd->add_option("--unit", luby_unit, "unit run u (limit i = u * t_i)");

    // --- unitwalk ---
    std::string walk_file;
    uint64_t walk_seed = 1;
    uint64_t walk_periods = 10000;
    CLI::App* walk_cmd = app.add_subcommand("unitwalk", "UnitWalk-style local search");
    walk_cmd->add_option("file", walk_file, "DIMACS CNF file")->required();
    walk_cmd->add_option("--seed", walk_seed, "seed for the full assignment and variable orders");
    walk_cmd->add_option("--periods", walk_periods, "maximum periods before giving up");

    // --- gen ---
    std::string gen_dir;
    uint64_t gen_seed = 42;
    CLI::App* gen_cmd = app.add_subcommand("gen", "write the bundled benchmark corpus");
    gen_cmd->add_option("dir", gen_dir, "output directory")->required();
    gen_cmd->add_option("--seed", gen_seed, "corpus generator seed");

    CLI11_PARSE(app, argc, argv);

    try {
        if (*solve_cmd) {
            auto formula = load_formula(solve_file);
            if (!formula) {
                std::cout << "s UNKNOWN\n";
                return kExitUnknown;
            }
            SolverConfig config;
            config.restarts = RestartPolicy::parse(solve_restart);
            config.polarity = parse_polarity_mode(solve_polarity);
            config.seed = solve_seed;
            config.decay = solve_decay;
            Budget budget;
            if (solve_timeout > 0) budget.timeout_seconds = solve_timeout;
            if (solve_conflicts > 0) budget.max_conflicts = solve_conflicts;
            std::cout << "c solving " << solve_file << " with " << config.restarts.label()
                      << ", polarity " << to_string(config.polarity) << ", seed " << config.seed
                      << "\n";
            Solver solver(*formula, config);
            Outcome outcome = solver.solve(budget);
            print_stats(outcome.stats);
            if (no_model) outcome.model.reset();
            print_result(outcome);
            return exit_code(outcome.status);
        }

        if (*bench_cmd) {
            std::vector<SolverConfig> configs;
            for (const std::string& spec : split_list(bench_restarts)) {
                SolverConfig config;
                config.restarts = RestartPolicy::parse(spec);
                config.polarity = parse_polarity_mode(bench_polarity);
                configs.push_back(config);
            }
            std::vector<uint64_t> seeds;
            for (const std::string& s : split_list(bench_seeds)) seeds.push_back(std::stoull(s));
            Budget budget;
            if (bench_timeout > 0) budget.timeout_seconds = bench_timeout;
            if (bench_conflicts > 0) budget.max_conflicts = bench_conflicts;

            auto records = sweep(bench_dir, configs, seeds, budget, bench_workers);
            if (records.empty()) {
                std::cerr << "no .cnf files under " << bench_dir << "\n";
                return 1;
            }
            std::string table_csv = emit_table(aggregate(records));
            std::string hist_csv = emit_histogram(records, bench_baseline);
            std::ofstream(bench_out) << table_csv;
            std::ofstream(bench_hist) << hist_csv;
            std::cout << table_csv << "\n" << hist_csv;
            std::cout << "c " << records.size() << " runs -> " << bench_out << ", " << bench_hist
                      << "\n";
            return 0;
        }

        if (*luby_cmd) {
            RestartPolicy policy = RestartPolicy::luby(luby_unit);
            for (uint64_t i = 0; i < luby_count; ++i) std::cout << policy.next_limit() << "\n";
            return 0;
        }

        if (*walk_cmd) {
            auto formula = load_formula(walk_file);
            if (!formula) {
                std::cout << "s UNKNOWN\n";
                return kExitUnknown;
            }
            Outcome outcome = walk_solve(*formula, walk_seed, walk_periods);
            std::cout << "c periods      " << outcome.stats.restarts << "\n"
                      << "c decisions    " << outcome.stats.decisions << "\n"
                      << "c propagations " << outcome.stats.propagations << "\n"
                      << "c flips        " << outcome.stats.conflicts << "\n";
            print_result(outcome);
            return exit_code(outcome.status);
        }

        if (*gen_cmd) {
            auto names = write_bundled_corpus(gen_dir, gen_seed);
            std::cout << "c wrote " << names.size() << " instances to " << gen_dir << "\n";
            return 0;
        }
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
    return 0;
}
