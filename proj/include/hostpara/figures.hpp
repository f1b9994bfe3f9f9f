#pragma once

// Plot-ready datasets for the stability-region, bifurcation and attractor
// figures. File layouts are listed in the README.

#include <filesystem>
#include <string>
#include <vector>

namespace hostpara {

/// Known ids: 3a 3b 3c 3d 4 5 6 7 8 9 10 11.
const std::vector<std::string>& figure_ids();

struct FigureOptions {
    unsigned threads = 1;
    /// Scales every point count and iteration budget (1 = documented defaults).
    double budget_scale = 1.0;
};

/// Writes the datasets of one figure into dir (created if missing) plus a
/// manifest.json, and returns the written paths. Throws DomainError for an
/// unknown id or an unwritable directory.
std::vector<std::filesystem::path> reproduce_figure(const std::string& id, const std::filesystem::path& dir,
                                                    const FigureOptions& options = {});

}  // namespace hostpara
