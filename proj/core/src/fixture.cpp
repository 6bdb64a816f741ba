#include "snowforge/fixture.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>

#include "json.hpp"
#include "snowforge/checksum.hpp"
#include "snowforge/frame_io.hpp"
#include "snowforge/parallel.hpp"

namespace snowforge {

namespace {

struct Octave {
    int cell;
    double weight;
};
constexpr Octave kOctaves[] = {{32, 0.25}, {16, 0.2}, {8, 0.25}, {4, 0.3}};

struct Particle {
    int x, y, vx, vy;
    double sigma;
    int peak;
};

// Noise in [0, 1] per pixel, row-major.
std::vector<double> value_noise(SplitMix64& rng, int w, int h) {
    std::vector<double> noise(static_cast<std::size_t>(w) * h, 0.0);
    for (const auto& oct : kOctaves) {
        const int gw = w / oct.cell + 2;
        const int gh = h / oct.cell + 2;
        std::vector<double> lattice(static_cast<std::size_t>(gw) * gh);
        for (auto& v : lattice) v = rng.uniform01();
        for (int y = 0; y < h; ++y) {
            const int gy = y / oct.cell;
            const double fy = static_cast<double>(y % oct.cell) / oct.cell;
            for (int x = 0; x < w; ++x) {
                const int gx = x / oct.cell;
                const double fx = static_cast<double>(x % oct.cell) / oct.cell;
                auto l = [&](int i, int j) { return lattice[static_cast<std::size_t>(j) * gw + i]; };
                const double top = l(gx, gy) * (1.0 - fx) + l(gx + 1, gy) * fx;
                const double bottom = l(gx, gy + 1) * (1.0 - fx) + l(gx + 1, gy + 1) * fx;
                noise[static_cast<std::size_t>(y) * w + x] += oct.weight * (top * (1.0 - fy) + bottom * fy);
            }
        }
    }
    return noise;
}

std::uint8_t level(double base, double range, double n) {
    return static_cast<std::uint8_t>(std::clamp(std::lround(base + range * n), 0L, 255L));
}

FrameSequence render_clean(const std::vector<double>& noise, const FixtureParams& p) {
    Frame background(Geometry{p.width, p.height, 3});
    for (int y = 0; y < p.height; ++y) {
        for (int x = 0; x < p.width; ++x) {
            const double n = noise[static_cast<std::size_t>(y) * p.width + x];
            background.at(x, y, 0) = level(10.0, 90.0, n);
            background.at(x, y, 1) = level(35.0, 150.0, n);
            background.at(x, y, 2) = level(45.0, 160.0, n);
        }
    }
    constexpr int kRectW = 60, kRectH = 40;
    constexpr std::uint8_t kRectColor[3] = {8, 22, 28};
    const int rect_y = p.height * 3 / 5;
    std::vector<Frame> frames(static_cast<std::size_t>(p.frames));
    for (int t = 0; t < p.frames; ++t) {
        Frame f = background;
        const int rect_x = 20 + t;
        for (int y = rect_y; y < std::min(rect_y + kRectH, p.height); ++y) {
            for (int x = rect_x; x < std::min(rect_x + kRectW, p.width); ++x) {
                for (int c = 0; c < 3; ++c) f.at(x, y, c) = kRectColor[c];
            }
        }
        frames[static_cast<std::size_t>(t)] = std::move(f);
    }
    return FrameSequence(std::move(frames), "fixture_gt");
}

std::vector<Particle> draw_particles(SplitMix64& rng, const FixtureParams& p) {
    std::vector<Particle> out;
    for (int i = 0; i < p.particles; ++i) {
        Particle q{};
        q.x = static_cast<int>(rng.uniform_int(0, p.mask_width - 1));
        q.y = static_cast<int>(rng.uniform_int(0, p.mask_height - 1));
        // Dominant axis moves 8..14 px per frame, the other -3..3.
        const int speed = static_cast<int>(rng.uniform_int(8, 14));
        const int major = rng.bounded(2) ? speed : -speed;
        const int minor = static_cast<int>(rng.uniform_int(-3, 3));
        const bool horizontal = rng.bounded(2) == 0;
        q.vx = horizontal ? major : minor;
        q.vy = horizontal ? minor : major;
        q.sigma = static_cast<double>(rng.uniform_int(10, 30)) / 10.0;
        q.peak = static_cast<int>(rng.uniform_int(80, 200));
        out.push_back(q);
    }
    return out;
}

MaskSequence render_masks(const std::vector<Particle>& particles, const FixtureParams& p) {
    const int w = p.mask_width;
    const int h = p.mask_height;
    MaskSequence seq;
    seq.source_id = "fixture_masks";
    seq.masks.resize(static_cast<std::size_t>(p.mask_frames));
    parallel_for(0, seq.masks.size(), [&](std::size_t ti) {
        const int t = static_cast<int>(ti);
        std::vector<int> acc(static_cast<std::size_t>(w) * h, 0);
        for (const auto& q : particles) {
            const int cx = ((q.x + q.vx * t) % w + w) % w;
            const int cy = ((q.y + q.vy * t) % h + h) % h;
            const int r = static_cast<int>(std::ceil(3.0 * q.sigma));
            for (int dy = -r; dy <= r; ++dy) {
                for (int dx = -r; dx <= r; ++dx) {
                    const double e = -static_cast<double>(dx * dx + dy * dy) / (2.0 * q.sigma * q.sigma);
                    const long v = std::lround(q.peak * std::exp(e));
                    if (v == 0) continue;
                    const int x = ((cx + dx) % w + w) % w;
                    const int y = ((cy + dy) % h + h) % h;
                    acc[static_cast<std::size_t>(y) * w + x] += static_cast<int>(v);
                }
            }
        }
        ResidualFrame m(Geometry{w, h, 3});
        auto s = m.samples();
        for (std::size_t i = 0; i < acc.size(); ++i) {
            const auto v = static_cast<std::int16_t>(std::min(acc[i], 255));
            s[3 * i] = s[3 * i + 1] = s[3 * i + 2] = v;
        }
        seq.masks[ti] = std::move(m);
    });
    return seq;
}

}  // namespace

Fixture generate_fixture(std::uint64_t seed, const FixtureParams& p) {
    if (p.mask_width > p.width || p.mask_height > p.height || p.frames < 1 || p.mask_frames < 1 || p.particles < 0) {
        throw Error(Errc::InvalidArgument, "inconsistent fixture parameters");
    }
    SplitMix64 rng(seed);
    const auto noise = value_noise(rng, p.width, p.height);
    const auto particles = draw_particles(rng, p);

    Fixture fx;
    fx.gt = render_clean(noise, p);
    fx.masks = render_masks(particles, p);
    fx.spec = draw_overlay_spec(rng, {p.width, p.height, p.frames}, {p.mask_width, p.mask_height, p.mask_frames},
                                p.frames);
    fx.spec.seed = seed;
    auto pair = compose_snowy(fx.gt, fx.masks, fx.spec);
    fx.snowy = std::move(pair.snowy);
    fx.clean = std::move(pair.clean);
    return fx;
}

Fixture make_fixture(const fs::path& out_dir, std::uint64_t seed, const FixtureParams& params) {
    Fixture fx = generate_fixture(seed, params);
    save_sequence(out_dir / "gt", fx.gt);
    save_mask_sequence(out_dir / "masks", fx.masks);
    save_sequence(out_dir / "snowy", fx.snowy);
    save_sequence(out_dir / "clean", fx.clean);

    nlohmann::ordered_json meta;
    meta["seed"] = seed;
    meta["gt"] = {{"width", params.width}, {"height", params.height}, {"frames", params.frames}};
    meta["masks"] = {{"width", params.mask_width},
                     {"height", params.mask_height},
                     {"frames", params.mask_frames},
                     {"particles", params.particles}};
    meta["overlay"] = {{"dx", fx.spec.dx},
                       {"dy", fx.spec.dy},
                       {"t_start", fx.spec.t_start},
                       {"mask_phase", fx.spec.mask_phase},
                       {"out_len", fx.spec.out_len},
                       {"seed", fx.spec.seed}};
    meta["checksums"] = {{"gt", to_hex(tree_checksum(out_dir / "gt"))},
                         {"masks", to_hex(tree_checksum(out_dir / "masks"))},
                         {"snowy", to_hex(tree_checksum(out_dir / "snowy"))},
                         {"clean", to_hex(tree_checksum(out_dir / "clean"))}};
    std::ofstream out(out_dir / "fixture.json", std::ios::binary | std::ios::trunc);
    if (!out) throw Error(Errc::IoError, "cannot write " + (out_dir / "fixture.json").string());
    out << meta.dump(2) << '\n';
    return fx;
}

}  // namespace snowforge
