#pragma once

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cmath>
#include <cstdint>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <stdexcept>
#include <string>
#include <thread>
#include <vector>

#include "rapidsat/cnf.hpp"
#include "rapidsat/engine.hpp"

namespace rapidsat {

/// One (instance, config, seed) execution.
struct RunRecord {
    std::string instance;     // file name within the corpus
    std::string config_label; // e.g. "Luby-6"
    size_t config_index = 0;  // position in the sweep's config list
    uint64_t seed = 0;
    Status status = Status::Unknown;
    uint64_t conflicts = 0;
    uint64_t decisions = 0;
    uint64_t restarts = 0;
    double wall_time = 0.0; // seconds
    std::string error;      // parse/IO failure note, empty otherwise
};

struct CategoryStats {
    uint64_t runs = 0;
    double mean_conflicts = 0.0; // meaningful only when runs > 0
};

/// Per-config conflict averages in the SAT / UNSAT / SOLVED / UNSOLVED /
/// ALL breakdown. SOLVED is by construction the run-count-weighted mean of
/// SAT and UNSAT, and ALL the weighted mean of SOLVED and UNSOLVED.
struct StatsRow {
    std::string label;
    size_t config_index = 0;
    CategoryStats sat, unsat, solved, unsolved, all;
};

using StatsTable = std::vector<StatsRow>;

namespace detail {

inline void require_bounded(const Budget& budget) {
    if (!budget.bounded())
        throw std::invalid_argument("harness budget needs a finite timeout or conflict cap");
}

/// Integer presentation of a mean, rounding half up.
inline uint64_t round_mean(double mean) {
    return static_cast<uint64_t>(std::floor(mean + 0.5));
}

inline std::string cell(const CategoryStats& s) {
    return s.runs == 0 ? std::string() : std::to_string(round_mean(s.mean_conflicts));
}

} // namespace detail

/// Run one instance with a fresh solver. A parse failure yields an UNKNOWN
/// record carrying the error note; it never throws for file content.
inline RunRecord run_instance(const std::filesystem::path& path, SolverConfig config,
                              uint64_t seed, const Budget& budget) {
    detail::require_bounded(budget);
    RunRecord record;
    record.instance = path.filename().string();
    record.config_label = config.restarts.label();
    record.seed = seed;
    config.seed = seed;

    Formula formula;
    try {
        std::ifstream in(path);
        if (!in) throw std::runtime_error("cannot open file");
        formula = parse_dimacs(in);
    } catch (const std::exception& e) {
        record.error = e.what();
        return record;
    }

    auto start = std::chrono::steady_clock::now();
    Solver solver(formula, config);
    Outcome outcome = solver.solve(budget);
    std::chrono::duration<double> elapsed = std::chrono::steady_clock::now() - start;

    record.status = outcome.status;
    record.conflicts = outcome.stats.conflicts;
    record.decisions = outcome.stats.decisions;
    record.restarts = outcome.stats.restarts;
    record.wall_time = elapsed.count();
    assert(outcome.status != Status::Sat ||
           (outcome.model.has_value() && evaluate(formula, *outcome.model)));
    return record;
}

/// Conflict averages per config label, rows in config order. Categories
/// with no runs are reported absent (runs == 0), not as zero.
inline StatsTable aggregate(const std::vector<RunRecord>& records) {
    assert(!records.empty());
    StatsTable table;
    auto row_for = [&table](const RunRecord& r) -> StatsRow& {
        for (StatsRow& row : table)
            if (row.label == r.config_label) return row;
        table.push_back(StatsRow{r.config_label, r.config_index, {}, {}, {}, {}, {}});
        return table.back();
    };

    struct Sums {
        uint64_t sat_runs = 0, unsat_runs = 0, unknown_runs = 0;
        double sat_conflicts = 0, unsat_conflicts = 0, unknown_conflicts = 0;
    };
    std::vector<Sums> sums;
    for (const RunRecord& r : records) {
        StatsRow& row = row_for(r);
        size_t idx = static_cast<size_t>(&row - table.data());
        if (sums.size() < table.size()) sums.resize(table.size());
        Sums& s = sums[idx];
        switch (r.status) {
        case Status::Sat: ++s.sat_runs; s.sat_conflicts += static_cast<double>(r.conflicts); break;
        case Status::Unsat: ++s.unsat_runs; s.unsat_conflicts += static_cast<double>(r.conflicts); break;
        case Status::Unknown: ++s.unknown_runs; s.unknown_conflicts += static_cast<double>(r.conflicts); break;
        }
    }
    for (size_t i = 0; i < table.size(); ++i) {
        const Sums& s = sums[i];
        StatsRow& row = table[i];
        auto fill = [](CategoryStats& c, uint64_t runs, double total) {
            c.runs = runs;
            if (runs > 0) c.mean_conflicts = total / static_cast<double>(runs);
        };
        fill(row.sat, s.sat_runs, s.sat_conflicts);
        fill(row.unsat, s.unsat_runs, s.unsat_conflicts);
        fill(row.solved, s.sat_runs + s.unsat_runs, s.sat_conflicts + s.unsat_conflicts);
        fill(row.unsolved, s.unknown_runs, s.unknown_conflicts);
        fill(row.all, s.sat_runs + s.unsat_runs + s.unknown_runs,
             s.sat_conflicts + s.unsat_conflicts + s.unknown_conflicts);
    }
    std::sort(table.begin(), table.end(), [](const StatsRow& a, const StatsRow& b) {
        return a.config_index != b.config_index ? a.config_index < b.config_index
                                                : a.label < b.label;
    });
    return table;
}

/// CSV with one row per config: means as integers (round half up), absent
/// categories as empty cells.
inline std::string emit_table(const StatsTable& table) {
    std::ostringstream out;
    out << "strategy,sat,unsat,solved,unsolved,all\n";
    for (const StatsRow& row : table) {
        out << row.label << ',' << detail::cell(row.sat) << ',' << detail::cell(row.unsat) << ','
            << detail::cell(row.solved) << ',' << detail::cell(row.unsolved) << ','
            << detail::cell(row.all) << '\n';
    }
    return out.str();
}

/// CSV of solved counts per config; the configured reference solved count
/// appears as a baseline column on every row.
inline std::string emit_histogram(const std::vector<RunRecord>& records, uint64_t baseline) {
    assert(!records.empty());
    struct Row {
        std::string label;
        size_t config_index = 0;
        uint64_t sat = 0, unsat = 0;
    };
    std::vector<Row> rows;
    for (const RunRecord& r : records) {
        Row* row = nullptr;
        for (Row& candidate : rows)
            if (candidate.label == r.config_label) { row = &candidate; break; }
        if (row == nullptr) {
            rows.push_back(Row{r.config_label, r.config_index, 0, 0});
            row = &rows.back();
        }
        if (r.status == Status::Sat) ++row->sat;
        if (r.status == Status::Unsat) ++row->unsat;
    }
    std::sort(rows.begin(), rows.end(), [](const Row& a, const Row& b) {
        return a.config_index != b.config_index ? a.config_index < b.config_index
                                                : a.label < b.label;
    });
    std::ostringstream out;
    out << "strategy,solved,sat_solved,unsat_solved,baseline\n";
    for (const Row& row : rows) {
        out << row.label << ',' << (row.sat + row.unsat) << ',' << row.sat << ',' << row.unsat
            << ',' << baseline << '\n';
    }
    return out.str();
}

/// All *.cnf files in a corpus directory, sorted by name.
inline std::vector<std::filesystem::path> corpus_files(const std::filesystem::path& dir) {
    std::vector<std::filesystem::path> files;
    for (const auto& entry : std::filesystem::directory_iterator(dir)) {
        if (!entry.is_regular_file()) continue;
        auto ext = entry.path().extension();
        if (ext == ".cnf" || ext == ".dimacs") files.push_back(entry.path());
    }
    std::sort(files.begin(), files.end(),
              [](const auto& a, const auto& b) { return a.filename() < b.filename(); });
    return files;
}

/// Run every (instance, config, seed) triple exactly once, fanning out over
/// `workers` threads. Each run gets a fresh solver; output order is the
/// sorted (instance, config, seed) order regardless of scheduling.
inline std::vector<RunRecord> sweep(const std::filesystem::path& corpus_dir,
                                    const std::vector<SolverConfig>& configs,
                                    const std::vector<uint64_t>& seeds, const Budget& budget,
                                    unsigned workers = 1) {
    detail::require_bounded(budget);
    if (workers < 1) workers = 1;
    std::vector<std::filesystem::path> files = corpus_files(corpus_dir);

    struct Task {
        size_t file, config, seed;
    };
    std::vector<Task> tasks;
    tasks.reserve(files.size() * configs.size() * seeds.size());
    for (size_t f = 0; f < files.size(); ++f)
        for (size_t c = 0; c < configs.size(); ++c)
            for (size_t s = 0; s < seeds.size(); ++s) tasks.push_back(Task{f, c, s});

    std::vector<RunRecord> records(tasks.size());
    auto run_task = [&](size_t t) {
        const Task& task = tasks[t];
        records[t] = run_instance(files[task.file], configs[task.config], seeds[task.seed], budget);
        records[t].config_index = task.config;
    };

    if (workers == 1 || tasks.size() <= 1) {
        for (size_t t = 0; t < tasks.size(); ++t) run_task(t);
    } else {
        std::atomic<size_t> next{0};
        auto worker = [&]() {
            for (;;) {
                size_t t = next.fetch_add(1);
                if (t >= tasks.size()) return;
                run_task(t);
            }
        };
        std::vector<std::thread> pool;
        for (unsigned w = 0; w < workers; ++w) pool.emplace_back(worker);
        for (std::thread& t : pool) t.join();
    }
    return records;
}

} // namespace rapidsat
