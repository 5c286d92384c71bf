#pragma once

#include <filesystem>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "fairmatch/engines.hpp"
#include "fairmatch/history.hpp"
#include "fairmatch/rational.hpp"

namespace fairmatch {

/// Per-timestep audit record, one JSON object per line in a trace file.
struct TraceRecord {
    int t = 0;
    std::vector<std::pair<int, int>> matches;  ///< (n_index, m_index)
    std::optional<Rat> weight;                 ///< null in time mode
    int iterations = 0;
    bool ef1 = true;
    std::optional<bool> envy_bounded;     ///< null where the engine makes no promise
    std::optional<bool> envy_cycle_free;  ///< likewise
};

/// A whole trace: header metadata plus one record per timestep with
/// strictly increasing t.
struct Trace {
    int format = 1;
    std::string engine;  ///< "sym-bin" | "asym-cycles" | "round-robin"
    std::string mode;    ///< "rounds" | "time"
    std::optional<Rat> a;
    std::vector<TraceRecord> records;

    static TraceRecord record_from(const engines::StepReport& report);

    void write(std::ostream& out) const;
    void save(const std::filesystem::path& path) const;
    static Trace read(std::istream& in);
    static Trace load(const std::filesystem::path& path);
};

/// The trace mode an engine produces.
std::string trace_mode_of(HistoryMode mode);

}  // namespace fairmatch
