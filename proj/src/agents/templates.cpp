#include <fstream>
#include <sstream>

#include <fmt/format.h>

#include "wtown/agents/prompts.hpp"

namespace wtown::detail {
std::string_view embedded_prompt(std::string_view name);
}

namespace wtown::agents {

namespace {

std::string trim_trailing(std::string s) {
    while (!s.empty() && (s.back() == '\n' || s.back() == '\r' || s.back() == ' ')) {
        s.pop_back();
    }
    return s;
}

std::string load_embedded(std::string_view name) {
    auto text = detail::embedded_prompt(name);
    if (text.empty()) {
        throw ConfigError(fmt::format("no built-in prompt template '{}'", name));
    }
    return trim_trailing(std::string(text));
}

std::string read_file(const std::filesystem::path& p) {
    std::ifstream in(p, std::ios::binary);
    if (!in) {
        throw ConfigError(fmt::format("cannot read prompt template {}", p.string()));
    }
    std::ostringstream ss;
    ss << in.rdbuf();
    return trim_trailing(ss.str());
}

bool is_placeholder_char(char c) {
    return (c >= 'a' && c <= 'z') || (c >= 'A' && c <= 'Z') || (c >= '0' && c <= '9') || c == '_';
}

}  // namespace

std::string render_template(std::string_view tmpl, const std::map<std::string, std::string>& values) {
    std::string out;
    out.reserve(tmpl.size() + 256);
    std::size_t i = 0;
    while (i < tmpl.size()) {
        if (tmpl[i] == '{') {
            std::size_t j = i + 1;
            while (j < tmpl.size() && is_placeholder_char(tmpl[j])) {
                ++j;
            }
            if (j < tmpl.size() && tmpl[j] == '}' && j > i + 1) {
                const std::string name(tmpl.substr(i + 1, j - i - 1));
                auto it = values.find(name);
                if (it == values.end()) {
                    throw ConfigError(fmt::format("template placeholder {{{}}} has no value", name));
                }
                out += it->second;
                i = j + 1;
                continue;
            }
        }
        out += tmpl[i++];
    }
    return out;
}

const PromptSet& PromptSet::builtin() {
    static const PromptSet set = [] {
        PromptSet s;
        s.system_rules = load_embedded("system_rules");
        s.bid_call = load_embedded("bid_call");
        s.results_announcement = load_embedded("results_announcement");
        return s;
    }();
    return set;
}

PromptSet PromptSet::from_directory(const std::filesystem::path& dir) {
    PromptSet s = builtin();
    auto maybe = [&](const char* file, std::string& slot) {
        const auto p = dir / file;
        if (std::filesystem::exists(p)) {
            slot = read_file(p);
        }
    };
    maybe("system_rules.txt", s.system_rules);
    maybe("bid_call.txt", s.bid_call);
    maybe("results_announcement.txt", s.results_announcement);
    return s;
}

}  // namespace wtown::agents
