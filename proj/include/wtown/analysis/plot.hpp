#pragma once

#include <filesystem>
#include <string>
#include <vector>

#include <json.hpp>

namespace wtown::analysis {

// Box plot of the per-day lowest winning bid for one setting entry of the
// plot data, with the daily median as a solid line and the mean of the
// medians as a dashed line.
std::string render_min_bid_svg(const nlohmann::json& setting);

// Strip chart of survivor counts per setting.
std::string render_survivors_svg(const nlohmann::json& plot_data);

// Writes setting-<id>-min-bid.svg for every setting plus survivors.svg.
std::vector<std::filesystem::path> render_plots(const nlohmann::json& plot_data,
                                                const std::filesystem::path& out_dir);

}  // namespace wtown::analysis
