#pragma once

#include <filesystem>
#include <optional>
#include <string>

namespace wtown::gateway {

struct CacheEntry {
    std::string key;
    std::string response_text;
    double latency_ms = 0.0;
    std::string timestamp;  // ISO-8601 UTC
    std::string model;
    std::string tag;
};

// Content-addressed response store: one JSON file per key under
// <dir>/<key[0:2]>/<key>.json. Writes go to a temp file first and are
// renamed into place, so readers never see a partial entry.
class ResponseCache {
public:
    explicit ResponseCache(std::filesystem::path dir);

    std::optional<CacheEntry> get(const std::string& key) const;
    void put(const CacheEntry& entry) const;
    bool contains(const std::string& key) const;

    const std::filesystem::path& dir() const { return dir_; }

private:
    std::filesystem::path path_for(const std::string& key) const;

    std::filesystem::path dir_;
};

std::string utc_timestamp();

}  // namespace wtown::gateway
