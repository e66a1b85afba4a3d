#include "wtown/analysis/plot.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <map>

#include <fmt/format.h>

namespace wtown::analysis {

using nlohmann::json;

namespace {

constexpr double kWidth = 720, kHeight = 420, kLeft = 60, kRight = 20, kTop = 40, kBottom = 50;

struct Axis {
    double lo, hi, px_lo, px_hi;
    double operator()(double v) const {
        if (hi <= lo) return (px_lo + px_hi) / 2;
        return px_lo + (v - lo) / (hi - lo) * (px_hi - px_lo);
    }
};

double nice_ceiling(double v) {
    if (v <= 0) return 1;
    const double mag = std::pow(10.0, std::floor(std::log10(v)));
    for (double m : {1.0, 2.0, 2.5, 5.0, 10.0}) {
        if (m * mag >= v) return m * mag;
    }
    return 10 * mag;
}

std::string header(const std::string& title) {
    return fmt::format(
        "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"{0}\" height=\"{1}\" viewBox=\"0 0 {0} {1}\" "
        "font-family=\"sans-serif\" font-size=\"11\">\n"
        "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n"
        "<text x=\"{2}\" y=\"22\" font-size=\"14\" text-anchor=\"middle\">{3}</text>\n",
        kWidth, kHeight, kWidth / 2, title);
}

std::string y_axis(const Axis& y, const std::string& label) {
    std::string out;
    for (int i = 0; i <= 5; ++i) {
        const double v = y.lo + (y.hi - y.lo) * i / 5.0;
        const double py = y(v);
        out += fmt::format("<line x1=\"{}\" x2=\"{}\" y1=\"{:.1f}\" y2=\"{:.1f}\" stroke=\"#ddd\"/>\n", kLeft,
                           kWidth - kRight, py, py);
        out += fmt::format("<text x=\"{}\" y=\"{:.1f}\" text-anchor=\"end\">{:g}</text>\n", kLeft - 6, py + 4, v);
    }
    out += fmt::format(
        "<text x=\"14\" y=\"{:.1f}\" transform=\"rotate(-90 14 {:.1f})\" text-anchor=\"middle\">{}</text>\n",
        kHeight / 2, kHeight / 2, label);
    return out;
}

}  // namespace

std::string render_min_bid_svg(const json& setting) {
    const auto& days = setting.at("min_successful_bid");
    int max_day = 1;
    double max_bid = 0;
    for (const auto& d : days) {
        max_day = std::max(max_day, d.at("day").get<int>());
        max_bid = std::max(max_bid, d.at("max").get<double>());
    }
    const Axis x{0.5, max_day + 0.5, kLeft, kWidth - kRight};
    const Axis y{0, nice_ceiling(max_bid * 1.05), kHeight - kBottom, kTop};
    const double box_w = std::max(4.0, (kWidth - kLeft - kRight) / (max_day + 1) * 0.5);

    std::string out = header(fmt::format("Setting {}: minimum successful bid per day",
                                         setting.at("setting_id").get<int>()));
    out += y_axis(y, "price ($)");
    for (int d = 1; d <= max_day; ++d) {
        out += fmt::format("<text x=\"{:.1f}\" y=\"{}\" text-anchor=\"middle\">{}</text>\n", x(d),
                           kHeight - kBottom + 16, d);
    }
    out += fmt::format("<text x=\"{}\" y=\"{}\" text-anchor=\"middle\">day</text>\n", kWidth / 2, kHeight - 12);

    for (const auto& d : days) {
        const double cx = x(d.at("day").get<double>());
        const double q1 = y(d.at("q1").get<double>()), q3 = y(d.at("q3").get<double>());
        out += fmt::format("<line x1=\"{0:.1f}\" x2=\"{0:.1f}\" y1=\"{1:.1f}\" y2=\"{2:.1f}\" stroke=\"black\"/>\n",
                           cx, y(d.at("min").get<double>()), y(d.at("max").get<double>()));
        out += fmt::format(
            "<rect x=\"{:.1f}\" y=\"{:.1f}\" width=\"{:.1f}\" height=\"{:.1f}\" fill=\"#cfe0f3\" stroke=\"black\"/>\n",
            cx - box_w / 2, q3, box_w, std::max(0.5, q1 - q3));
        const double med = y(d.at("median").get<double>());
        out += fmt::format("<line x1=\"{:.1f}\" x2=\"{:.1f}\" y1=\"{:.1f}\" y2=\"{:.1f}\" stroke=\"black\"/>\n",
                           cx - box_w / 2, cx + box_w / 2, med, med);
    }

    std::string path;
    for (const auto& m : setting.at("daily_median")) {
        path += fmt::format("{}{:.1f},{:.1f}", path.empty() ? "" : " ", x(m.at("day").get<double>()),
                            y(m.at("median").get<double>()));
    }
    if (!path.empty()) {
        out += fmt::format("<polyline points=\"{}\" fill=\"none\" stroke=\"#1f5fbf\" stroke-width=\"2\"/>\n", path);
    }
    const auto& mom = setting.at("mean_of_daily_medians");
    if (!mom.is_null()) {
        const double py = y(mom.get<double>());
        out += fmt::format(
            "<line x1=\"{}\" x2=\"{}\" y1=\"{:.1f}\" y2=\"{:.1f}\" stroke=\"#c0392b\" stroke-dasharray=\"6 4\"/>\n",
            kLeft, kWidth - kRight, py, py);
    }
    out += "</svg>\n";
    return out;
}

std::string render_survivors_svg(const json& plot_data) {
    const auto& settings = plot_data.at("settings");
    int max_n = 1;
    for (const auto& s : settings) {
        for (const auto& v : s.at("n_survivor").at("values")) max_n = std::max(max_n, v.get<int>());
    }
    const Axis x{0.5, settings.size() + 0.5, kLeft, kWidth - kRight};
    const Axis y{0, static_cast<double>(max_n), kHeight - kBottom, kTop};
    std::string out = header("Survivors per run");
    out += y_axis(y, "survivors");
    for (std::size_t i = 0; i < settings.size(); ++i) {
        const auto& s = settings[i];
        const double cx = x(static_cast<double>(i + 1));
        out += fmt::format("<text x=\"{:.1f}\" y=\"{}\" text-anchor=\"middle\">setting {}</text>\n", cx,
                           kHeight - kBottom + 16, s.at("setting_id").get<int>());
        std::map<int, int> stack;
        for (const auto& v : s.at("n_survivor").at("values")) {
            const int n = v.get<int>();
            const double dx = (stack[n]++ - 4.5) * 5.0;
            out += fmt::format("<circle cx=\"{:.1f}\" cy=\"{:.1f}\" r=\"3\" fill=\"#1f5fbf\"/>\n", cx + dx, y(n));
        }
        const double mean = s.at("n_survivor").at("stats").at("mean").get<double>();
        out += fmt::format("<line x1=\"{:.1f}\" x2=\"{:.1f}\" y1=\"{:.1f}\" y2=\"{:.1f}\" stroke=\"#c0392b\"/>\n",
                           cx - 30, cx + 30, y(mean), y(mean));
    }
    out += "</svg>\n";
    return out;
}

std::vector<std::filesystem::path> render_plots(const json& plot_data, const std::filesystem::path& out_dir) {
    std::filesystem::create_directories(out_dir);
    std::vector<std::filesystem::path> files;
    auto write = [&](const std::filesystem::path& p, const std::string& svg) {
        std::ofstream out(p, std::ios::binary | std::ios::trunc);
        if (!out) throw std::runtime_error(fmt::format("cannot write {}", p.string()));
        out << svg;
        files.push_back(p);
    };
    for (const auto& s : plot_data.at("settings")) {
        write(out_dir / fmt::format("setting-{}-min-bid.svg", s.at("setting_id").get<int>()), render_min_bid_svg(s));
    }
    write(out_dir / "survivors.svg", render_survivors_svg(plot_data));
    return files;
}

}  // namespace wtown::analysis
