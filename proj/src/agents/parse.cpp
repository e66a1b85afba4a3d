#include "wtown/agents/parse.hpp"

#include <algorithm>
#include <cctype>
#include <limits>
#include <regex>

#include <fmt/format.h>

namespace wtown::agents {

namespace {

struct Candidate {
    std::size_t pos = 0;
    Money value = 0;
    bool dollar = false;
    bool anchored = false;
    bool fractional = false;
};

std::string lowercase(std::string_view s) {
    std::string out(s);
    std::transform(out.begin(), out.end(), out.begin(), [](unsigned char c) { return std::tolower(c); });
    return out;
}

std::string trim(std::string_view s) {
    const auto b = s.find_first_not_of(" \t\r\n");
    if (b == std::string_view::npos) return "";
    const auto e = s.find_last_not_of(" \t\r\n");
    return std::string(s.substr(b, e - b + 1));
}

Money to_money(const std::string& digits) {
    std::string clean;
    for (char c : digits) {
        if (c != ',') clean += c;
    }
    if (clean.size() > 18) {
        return std::numeric_limits<Money>::max();
    }
    return std::stoll(clean);
}

// Start of the sentence containing pos. A '.' only ends a sentence when it
// is followed by whitespace, so "$150.50" does not split.
std::size_t sentence_start(const std::string& text, std::size_t pos) {
    std::size_t i = pos;
    while (i > 0) {
        const char c = text[i - 1];
        if (c == '\n' || c == '!' || c == '?' || c == ';') break;
        if (c == '.' && i < text.size() && std::isspace(static_cast<unsigned char>(text[i]))) break;
        --i;
    }
    return i;
}

// True when a bid word appears shortly before pos in the same sentence with
// no other digit in between.
bool bid_anchored(const std::string& lower, std::size_t pos) {
    static const std::regex bid_word(R"(\b(bid|bids|bidding|offer|offering|pay|paying|go with|going with|settle on|final answer)\b)");
    const std::size_t start = sentence_start(lower, pos);
    const std::string window = lower.substr(start, pos - start);
    std::size_t last_end = std::string::npos;
    for (auto it = std::sregex_iterator(window.begin(), window.end(), bid_word); it != std::sregex_iterator(); ++it) {
        last_end = static_cast<std::size_t>(it->position() + it->length());
    }
    if (last_end == std::string::npos) return false;
    const std::string gap = window.substr(last_end);
    if (gap.size() > 40) return false;
    return std::none_of(gap.begin(), gap.end(), [](unsigned char c) { return std::isdigit(c); });
}

bool unit_suffix(const std::string& lower, std::size_t end) {
    static const std::regex suffix(
        R"(^\s*(units?\b|days?\b|points?\b|hp\b|health\b|%|percent\b|st\b|nd\b|rd\b|th\b|times\b|rounds?\b|residents?\b|players?\b))");
    return std::regex_search(lower.substr(end, 24), suffix);
}

bool day_prefix(const std::string& lower, std::size_t pos) {
    static const std::regex prefix(R"((\bday|\bround|\bdays|\bhp|health points|no-water days)\s*[:#]?\s*$)");
    const std::size_t from = pos > 24 ? pos - 24 : 0;
    return std::regex_search(lower.substr(from, pos - from), prefix);
}

bool refuses(const std::string& lower) {
    static const std::regex refusal(
        R"(\b(sit(ting)? out|not (to )?participate|won't participate|not going to participate|abstain(ing)?|skip(ping)? (today|this round|the auction|bidding)|pass(ing)? (today|on)|no bid|not (to )?bid|won't bid|not going to bid|refrain|decline|hold(ing)? off|stay(ing)? out)\b)");
    return std::regex_search(lower, refusal);
}

std::vector<Candidate> candidates(const std::string& text) {
    static const std::regex number(R"((\$\s*)?(\d{1,3}(?:,\d{3})+|\d+)(?:\.(\d+))?)");
    const std::string lower = lowercase(text);
    std::vector<Candidate> out;
    for (auto it = std::sregex_iterator(text.begin(), text.end(), number); it != std::sregex_iterator(); ++it) {
        const auto& m = *it;
        Candidate c;
        c.pos = static_cast<std::size_t>(m.position());
        c.dollar = m[1].matched;
        const std::size_t digits_pos = static_cast<std::size_t>(m.position(2));
        const std::size_t end = static_cast<std::size_t>(m.position() + m.length());
        // part of a word or identifier such as "GPT-4" or "A1"
        if (!c.dollar && digits_pos > 0 &&
            (std::isalpha(static_cast<unsigned char>(text[digits_pos - 1])) || text[digits_pos - 1] == '-')) {
            continue;
        }
        if (!c.dollar && (unit_suffix(lower, end) || day_prefix(lower, digits_pos))) {
            continue;
        }
        c.anchored = bid_anchored(lower, c.pos);
        if (!c.dollar && !c.anchored) {
            continue;
        }
        c.value = to_money(m[2].str());
        if (m[3].matched) {
            const std::string frac = m[3].str();
            c.fractional = frac.find_first_not_of('0') != std::string::npos;
        }
        out.push_back(c);
    }
    return out;
}

}  // namespace

ParseResult parse_decision(std::string_view raw_response, Money balance) {
    const std::string text(raw_response);
    const std::string reason = trim(text);
    const auto found = candidates(text);

    const Candidate* chosen = nullptr;
    for (const auto& c : found) {
        if (c.anchored) chosen = &c;
    }
    if (!chosen) {
        for (const auto& c : found) {
            if (c.dollar) chosen = &c;
        }
    }

    if (!chosen) {
        if (refuses(lowercase(text))) {
            return AgentDecision{std::nullopt, reason, text};
        }
        return ParseFailure{ParseFailure::Kind::no_amount, std::nullopt, "no bid amount found"};
    }
    if (chosen->fractional) {
        return ParseFailure{ParseFailure::Kind::fractional, chosen->value,
                            "bids must be whole dollar amounts"};
    }
    if (chosen->value == 0) {
        return AgentDecision{std::nullopt, reason, text};
    }
    if (chosen->value > balance) {
        return ParseFailure{ParseFailure::Kind::over_balance, chosen->value,
                            fmt::format("bid of ${} exceeds balance of ${}", chosen->value, balance)};
    }
    return AgentDecision{chosen->value, reason, text};
}

std::string retry_prompt(const ParseFailure& failure, Money balance) {
    switch (failure.kind) {
        case ParseFailure::Kind::over_balance:
            return fmt::format(
                "Your bid of ${} exceeds your current balance of ${}. Please submit a bid you can afford, "
                "written as $<amount>, or state that you will not participate today.",
                failure.amount.value_or(0), balance);
        case ParseFailure::Kind::fractional:
            return fmt::format(
                "Bids must be whole dollar amounts. Your current balance is ${}. Please restate your bid as "
                "$<amount>, or state that you will not participate today.",
                balance);
        case ParseFailure::Kind::no_amount:
            break;
    }
    return fmt::format(
        "I could not find a bid in your reply. Your current balance is ${}. Please state your bid as "
        "$<amount>, or state that you will not participate today.",
        balance);
}

}  // namespace wtown::agents
