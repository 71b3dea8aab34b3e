#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "roe/summarize.hpp"

namespace roe {

// The ordered decision-point records of one game, plus enough metadata to
// reproduce it. Serialized as line-delimited JSON: one header line, one
// line per FrameRecord, one result line.
struct EpisodeLog {
    std::uint64_t seed = 0;
    DifficultyLevel difficulty = DifficultyLevel::Hard;
    std::uint64_t config_hash = 0;
    int test_id = 0;
    int round = 0;
    std::vector<FrameRecord> frames;
    std::optional<MatchResult> result;

    std::string to_jsonl() const;
    static EpisodeLog from_jsonl(const std::string& text);
    void save_file(const std::string& path) const;
    static EpisodeLog load_file(const std::string& path);
};

void write_timeseries_csv(const std::string& path, const std::vector<TickSample>& series);

} // namespace roe
