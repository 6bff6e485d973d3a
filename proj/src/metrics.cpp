#include "hodg/metrics.hpp"

#include <algorithm>
#include <cctype>
#include <cstdlib>
#include <fstream>
#include <sstream>

#include "hodg/error.hpp"

namespace hodg {

CommentRules CommentRules::parse(const std::string& spec) {
    CommentRules r;
    std::istringstream in(spec);
    std::string item;
    while (std::getline(in, item, ',')) {
        if (item.empty()) continue;
        const auto eq = item.find('=');
        if (eq == std::string::npos) throw Error("comment rule '" + item + "' lacks '='");
        const std::string kind = item.substr(0, eq), value = item.substr(eq + 1);
        if (value.empty()) throw Error("comment rule '" + item + "' has an empty marker");
        if (kind == "line") {
            r.line.push_back(value);
        } else if (kind == "block") {
            const auto colon = value.find(':');
            if (colon == std::string::npos || colon == 0 || colon + 1 == value.size())
                throw Error("block comment rule '" + value + "' is not open:close");
            r.block.emplace_back(value.substr(0, colon), value.substr(colon + 1));
        } else {
            throw Error("unknown comment rule kind '" + kind + "'");
        }
    }
    return r;
}

namespace {

bool starts_with_at(const std::string& s, std::size_t i, const std::string& m) {
    return s.compare(i, m.size(), m) == 0;
}

}  // namespace

std::int64_t count_sloc_text(const std::string& text, const CommentRules& rules) {
    std::int64_t count = 0;
    const std::string* close = nullptr;  // inside a block comment
    std::istringstream in(text);
    std::string line;
    while (std::getline(in, line)) {
        bool code = false;
        std::size_t i = 0;
        while (i < line.size()) {
            if (close) {
                const auto end = line.find(*close, i);
                if (end == std::string::npos) break;
                i = end + close->size();
                close = nullptr;
                continue;
            }
            bool comment = false;
            for (const auto& m : rules.line)
                if (starts_with_at(line, i, m)) comment = true;
            if (comment) break;
            for (const auto& [open, shut] : rules.block)
                if (starts_with_at(line, i, open)) {
                    close = &shut;
                    i += open.size();
                    break;
                }
            if (close) continue;
            if (!std::isspace(static_cast<unsigned char>(line[i]))) code = true;
            ++i;
        }
        if (code) ++count;
    }
    return count;
}

std::int64_t count_sloc(std::span<const std::filesystem::path> paths, const CommentRules& rules) {
    std::int64_t total = 0;
    for (const auto& root : paths) {
        std::vector<std::filesystem::path> files;
        if (std::filesystem::is_directory(root)) {
            for (const auto& e : std::filesystem::recursive_directory_iterator(root))
                if (e.is_regular_file()) files.push_back(e.path());
        } else {
            files.push_back(root);
        }
        for (const auto& p : files) {
            std::ifstream f(p);
            if (!f) throw Error("cannot read " + p.string());
            std::ostringstream os;
            os << f.rdbuf();
            total += count_sloc_text(os.str(), rules);
        }
    }
    return total;
}

double pairwise_distance(const VersionRecord& a, const VersionRecord& b) {
    if (a.sloc < 0 || b.sloc < 0) throw Error("SLOC counts must be non-negative");
    const std::int64_t lo = std::min(a.sloc, b.sloc);
    if (lo == 0)
        throw Error("pairwise distance undefined: '" + (a.sloc == 0 ? a.label : b.label) +
                    "' has zero SLOC");
    return static_cast<double>(std::llabs(a.sloc - b.sloc)) / static_cast<double>(lo);
}

double divergence(std::span<const VersionRecord> versions) {
    if (versions.size() < 2) throw Error("divergence needs at least two versions");
    double sum = 0.0;
    std::size_t pairs = 0;
    for (std::size_t i = 0; i < versions.size(); ++i)
        for (std::size_t j = i + 1; j < versions.size(); ++j) {
            sum += pairwise_distance(versions[i], versions[j]);
            ++pairs;
        }
    return sum / static_cast<double>(pairs);
}

double rdtp(double speedup, double relative_effort) {
    if (!(relative_effort > 0.0)) throw Error("relative effort must be positive");
    return speedup / relative_effort;
}

}  // namespace hodg
