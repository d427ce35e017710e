#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "mcd/numerics/rational_map.hpp"

namespace mcd::num {

struct RenderOptions {
    Complex center{0, 0};
    Real width = 4;  // square window
    int px = 256;
    int max_iter = 10000;
    Real eps = 1e-6L;
    int threads = 1;
};

struct Image {
    int width = 0;
    int height = 0;
    std::vector<std::uint8_t> rgb;
};

struct RenderStats {
    long total = 0;
    long classified = 0;
    std::vector<long> basin_pixels;  // per attracting cycle
    double classified_fraction = 0;
};

struct RenderResult {
    Image image;
    RenderStats stats;
    std::vector<AttractingCycle> cycles;
    std::vector<int> labels;  // row-major basin index per pixel, -1 when unclassified
};

// Colour each pixel by the attracting cycle its orbit first comes within eps
// of (chordal metric); black when none is reached within max_iter.
RenderResult render_basins(const RationalMap& m, const std::vector<AttractingCycle>& cycles, const RenderOptions& opt);

std::string ppm_bytes(const Image& img);
void write_ppm(const Image& img, const std::string& path);

}  // namespace mcd::num
