#include "mcd/numerics/render.hpp"

#include <array>
#include <cmath>
#include <fstream>
#include <thread>

#include "mcd/error.hpp"

namespace mcd::num {

namespace {

constexpr std::array<std::array<int, 3>, 8> kPalette{{{230, 160, 40},
                                                      {60, 170, 80},
                                                      {70, 120, 220},
                                                      {200, 70, 70},
                                                      {160, 90, 200},
                                                      {60, 190, 190},
                                                      {220, 210, 90},
                                                      {150, 150, 150}}};

}  // namespace

RenderResult render_basins(const RationalMap& m, const std::vector<AttractingCycle>& cycles, const RenderOptions& opt) {
    if (opt.px < 1) throw ValidationError("resolution must be positive");
    if (cycles.empty()) throw ValidationError("no attracting cycles to render");
    RenderResult res;
    res.cycles = cycles;
    res.image.width = res.image.height = opt.px;
    res.image.rgb.assign(static_cast<std::size_t>(opt.px) * opt.px * 3, 0);
    res.labels.assign(static_cast<std::size_t>(opt.px) * opt.px, -1);

    struct Target {
        ExtPoint z;
        int basin;
    };
    std::vector<Target> targets;
    for (std::size_t b = 0; b < cycles.size(); ++b)
        for (const auto& p : cycles[b].points) targets.push_back({p, static_cast<int>(b)});

    const std::size_t nb = cycles.size();
    const int threads = std::max(1, opt.threads);
    std::vector<std::vector<long>> counts(threads, std::vector<long>(nb, 0));
    const Real step = opt.width / opt.px;

    auto work = [&](int t) {
        for (int row = t; row < opt.px; row += threads) {
            Real y = opt.center.imag() + opt.width / 2 - (row + 0.5L) * step;
            for (int col = 0; col < opt.px; ++col) {
                Real x = opt.center.real() - opt.width / 2 + (col + 0.5L) * step;
                ExtPoint z{Complex(x, y), false};
                int basin = -1, it = 0;
                for (; it <= opt.max_iter && basin < 0; ++it) {
                    for (const auto& tg : targets)
                        if (chordal(z, tg.z) < opt.eps) {
                            basin = tg.basin;
                            break;
                        }
                    if (basin < 0) z = m(z);
                }
                std::size_t off = (static_cast<std::size_t>(row) * opt.px + col) * 3;
                if (basin < 0) continue;
                res.labels[off / 3] = basin;
                ++counts[t][basin];
                const auto& c = kPalette[basin % kPalette.size()];
                double shade = 0.35 + 0.65 * std::exp(-it / 40.0);
                for (int k = 0; k < 3; ++k) res.image.rgb[off + k] = static_cast<std::uint8_t>(c[k] * shade);
            }
        }
    };
    if (threads == 1) {
        work(0);
    } else {
        std::vector<std::thread> pool;
        for (int t = 0; t < threads; ++t) pool.emplace_back(work, t);
        for (auto& th : pool) th.join();
    }

    res.stats.total = static_cast<long>(opt.px) * opt.px;
    res.stats.basin_pixels.assign(nb, 0);
    for (const auto& c : counts)
        for (std::size_t b = 0; b < nb; ++b) res.stats.basin_pixels[b] += c[b];
    for (long c : res.stats.basin_pixels) res.stats.classified += c;
    res.stats.classified_fraction = static_cast<double>(res.stats.classified) / static_cast<double>(res.stats.total);
    return res;
}

std::string ppm_bytes(const Image& img) {
    std::string header = "P6\n" + std::to_string(img.width) + " " + std::to_string(img.height) + "\n255\n";
    return header + std::string(img.rgb.begin(), img.rgb.end());
}

void write_ppm(const Image& img, const std::string& path) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw Error("cannot write '" + path + "'");
    auto bytes = ppm_bytes(img);
    out.write(bytes.data(), static_cast<std::streamsize>(bytes.size()));
}

}  // namespace mcd::num
