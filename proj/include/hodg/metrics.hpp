#pragma once

#include <cstdint>
#include <filesystem>
#include <span>
#include <string>
#include <utility>
#include <vector>

namespace hodg {

/// Comment markers for SLOC counting, e.g. line {"//"}, block {{"/*", "*/"}}.
struct CommentRules {
    std::vector<std::string> line;
    std::vector<std::pair<std::string, std::string>> block;

    static CommentRules cpp() { return {{"//"}, {{"/*", "*/"}}}; }
    /// "line=//,block=/*:*/" (either part may repeat or be absent).
    static CommentRules parse(const std::string& spec);
};

/// Lines with at least one non-blank character outside comments. String
/// literals are not recognised. Throws Error for unreadable files.
std::int64_t count_sloc_text(const std::string& text, const CommentRules& rules);
std::int64_t count_sloc(std::span<const std::filesystem::path> paths, const CommentRules& rules);

struct VersionRecord {
    std::string label;
    std::int64_t sloc = 0;
    std::vector<std::filesystem::path> roots;
};

/// |sloc(a) - sloc(b)| / min(sloc(a), sloc(b)). Throws Error if the smaller
/// count is zero.
double pairwise_distance(const VersionRecord& a, const VersionRecord& b);

/// Mean of pairwise_distance over unordered pairs. Needs at least 2 versions.
double divergence(std::span<const VersionRecord> versions);

/// speedup / relative effort; throws Error for non-positive effort.
double rdtp(double speedup, double relative_effort);

}  // namespace hodg
