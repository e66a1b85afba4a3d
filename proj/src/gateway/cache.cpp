#include "wtown/gateway/cache.hpp"

#include <atomic>
#include <chrono>
#include <ctime>
#include <fstream>
#include <thread>

#include <fmt/format.h>
#include <json.hpp>

namespace wtown::gateway {

namespace fs = std::filesystem;

ResponseCache::ResponseCache(fs::path dir) : dir_(std::move(dir)) {
    fs::create_directories(dir_);
}

fs::path ResponseCache::path_for(const std::string& key) const {
    const std::string shard = key.size() >= 2 ? key.substr(0, 2) : "xx";
    return dir_ / shard / (key + ".json");
}

bool ResponseCache::contains(const std::string& key) const {
    return fs::exists(path_for(key));
}

std::optional<CacheEntry> ResponseCache::get(const std::string& key) const {
    std::ifstream in(path_for(key));
    if (!in) {
        return std::nullopt;
    }
    auto j = nlohmann::json::parse(in);
    CacheEntry e;
    e.key = j.at("key").get<std::string>();
    e.response_text = j.at("response_text").get<std::string>();
    e.latency_ms = j.value("latency_ms", 0.0);
    e.timestamp = j.value("timestamp", "");
    e.model = j.value("model", "");
    e.tag = j.value("tag", "");
    if (e.key != key) {
        throw std::runtime_error(fmt::format("cache entry {} holds key {}", key, e.key));
    }
    return e;
}

void ResponseCache::put(const CacheEntry& entry) const {
    static std::atomic<unsigned> counter{0};
    const auto target = path_for(entry.key);
    fs::create_directories(target.parent_path());
    nlohmann::json j = {{"key", entry.key},
                        {"response_text", entry.response_text},
                        {"latency_ms", entry.latency_ms},
                        {"timestamp", entry.timestamp},
                        {"model", entry.model},
                        {"tag", entry.tag}};
    const auto tmp = target.parent_path() /
                     fmt::format(".{}.{}.{}.tmp", entry.key,
                                 std::hash<std::thread::id>{}(std::this_thread::get_id()), counter++);
    {
        std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
        if (!out) {
            throw std::runtime_error(fmt::format("cannot write cache file {}", tmp.string()));
        }
        out << j.dump(2) << '\n';
    }
    fs::rename(tmp, target);
}

std::string utc_timestamp() {
    const auto now = std::chrono::system_clock::now();
    const std::time_t t = std::chrono::system_clock::to_time_t(now);
    std::tm tm{};
    gmtime_r(&t, &tm);
    return fmt::format("{:04}-{:02}-{:02}T{:02}:{:02}:{:02}Z", tm.tm_year + 1900, tm.tm_mon + 1, tm.tm_mday,
                       tm.tm_hour, tm.tm_min, tm.tm_sec);
}

}  // namespace wtown::gateway
