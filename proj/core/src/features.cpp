#include "snowforge/features.hpp"

#include <algorithm>
#include <climits>

namespace snowforge {

namespace {

constexpr BriefPair kPattern[256] = {
#include "brief_pattern.inc"
};

// Radius-3 Bresenham circle, clockwise from 12 o'clock.
constexpr int kCircle[16][2] = {{0, -3}, {1, -3}, {2, -2}, {3, -1}, {3, 0},  {3, 1},  {2, 2},  {1, 3},
                                {0, 3},  {-1, 3}, {-2, 2}, {-3, 1}, {-3, 0}, {-3, -1}, {-2, -2}, {-1, -3}};

// Score of the winning arc at (x, y), or 0 if the segment test fails.
int segment_score(const std::uint8_t* img, int stride, int x, int y, int t) {
    const int p = img[y * stride + x];
    int diff[16];
    int kind[16];
    for (int k = 0; k < 16; ++k) {
        const int v = img[(y + kCircle[k][1]) * stride + x + kCircle[k][0]];
        diff[k] = v - p;
        kind[k] = v > p + t ? 1 : (v < p - t ? -1 : 0);
    }
    // Longest circular run of equal non-zero kind.
    int best_len = 0;
    int best_start = 0;
    for (int sign : {1, -1}) {
        int k0 = 0;
        while (k0 < 16 && kind[k0] == sign) ++k0;
        if (k0 == 16) {
            best_len = 16;
            best_start = 0;
            break;
        }
        // Start scanning right after a non-member so runs are never split.
        int run = 0;
        for (int step = 1; step <= 16; ++step) {
            const int k = (k0 + step) % 16;
            if (kind[k] == sign) {
                ++run;
                if (run > best_len) {
                    best_len = run;
                    best_start = (k - run + 1 + 16) % 16;
                }
            } else {
                run = 0;
            }
        }
    }
    if (best_len < kFastArc) return 0;
    int score = 0;
    for (int i = 0; i < best_len; ++i) {
        const int k = (best_start + i) % 16;
        score += std::abs(diff[k]) - t;
    }
    return score;
}

}  // namespace

std::span<const BriefPair, 256> brief_pattern() noexcept { return std::span<const BriefPair, 256>(kPattern); }

std::vector<int> fast_score_map(const Frame& luma, int threshold) {
    if (luma.channels() != 1) throw Error(Errc::InvalidArgument, "fast_score_map expects a luma frame");
    const int w = luma.width();
    const int h = luma.height();
    if (w < 7 || h < 7) {
        throw Error(Errc::FrameTooSmall, "segment test needs at least 7x7, got " + describe(luma.geometry()));
    }
    std::vector<int> scores(luma.geometry().pixel_count(), 0);
    const std::uint8_t* img = luma.samples().data();
    for (int y = 3; y < h - 3; ++y) {
        for (int x = 3; x < w - 3; ++x) {
            scores[static_cast<std::size_t>(y) * w + x] = segment_score(img, w, x, y, threshold);
        }
    }
    return scores;
}

std::vector<KeyPoint> detect_keypoints(const Frame& f, int threshold) {
    const Frame luma = to_luma(f);
    const int w = luma.width();
    const int h = luma.height();
    const auto scores = fast_score_map(luma, threshold);
    auto at = [&](int x, int y) { return scores[static_cast<std::size_t>(y) * w + x]; };

    std::vector<KeyPoint> out;
    for (int y = 3; y < h - 3; ++y) {
        for (int x = 3; x < w - 3; ++x) {
            const int s = at(x, y);
            if (s == 0) continue;
            bool keep = true;
            for (int dy = -1; dy <= 1 && keep; ++dy) {
                for (int dx = -1; dx <= 1; ++dx) {
                    if (dx == 0 && dy == 0) continue;
                    const int n = at(x + dx, y + dy);
                    // Equal neighbours earlier in raster order win the tie.
                    const bool earlier = dy < 0 || (dy == 0 && dx < 0);
                    if (n > s || (n == s && earlier)) {
                        keep = false;
                        break;
                    }
                }
            }
            if (keep) out.push_back({x, y, s});
        }
    }
    return out;
}

Features compute_descriptors(const Frame& f, std::span<const KeyPoint> keypoints) {
    return compute_descriptors(f, keypoints, brief_pattern());
}

Features compute_descriptors(const Frame& f, std::span<const KeyPoint> keypoints, std::span<const BriefPair> pattern) {
    if (pattern.size() > 256) throw Error(Errc::InvalidArgument, "descriptor pattern longer than 256 pairs");
    const Frame luma = to_luma(f);
    const int w = luma.width();
    const int h = luma.height();

    // Summed-area table with a zero border row/column.
    const int iw = w + 1;
    std::vector<std::int64_t> sat(static_cast<std::size_t>(iw) * (h + 1), 0);
    for (int y = 0; y < h; ++y) {
        std::int64_t row = 0;
        for (int x = 0; x < w; ++x) {
            row += luma.at(x, y);
            sat[static_cast<std::size_t>(y + 1) * iw + x + 1] = sat[static_cast<std::size_t>(y) * iw + x + 1] + row;
        }
    }
    auto box = [&](int cx, int cy) {
        const int x0 = cx - kBlurRadius, y0 = cy - kBlurRadius;
        const int x1 = cx + kBlurRadius + 1, y1 = cy + kBlurRadius + 1;
        return sat[static_cast<std::size_t>(y1) * iw + x1] - sat[static_cast<std::size_t>(y0) * iw + x1] -
               sat[static_cast<std::size_t>(y1) * iw + x0] + sat[static_cast<std::size_t>(y0) * iw + x0];
    };

    Features out;
    for (const auto& kp : keypoints) {
        if (kp.x < kDescriptorMargin || kp.y < kDescriptorMargin || kp.x >= w - kDescriptorMargin ||
            kp.y >= h - kDescriptorMargin) {
            continue;
        }
        Descriptor d;
        for (std::size_t i = 0; i < pattern.size(); ++i) {
            const auto& p = pattern[i];
            if (box(kp.x + p.ax, kp.y + p.ay) < box(kp.x + p.bx, kp.y + p.by)) d.set(static_cast<int>(i));
        }
        out.keypoints.push_back(kp);
        out.descriptors.push_back(d);
    }
    return out;
}

namespace {

struct Nearest {
    int index = -1;
    int best = INT_MAX;
    int second = INT_MAX;
};

std::vector<Nearest> nearest(std::span<const Descriptor> from, std::span<const Descriptor> to) {
    std::vector<Nearest> out(from.size());
    for (std::size_t i = 0; i < from.size(); ++i) {
        auto& n = out[i];
        for (std::size_t j = 0; j < to.size(); ++j) {
            const int d = hamming(from[i], to[j]);
            if (d < n.best) {
                n.second = n.best;
                n.best = d;
                n.index = static_cast<int>(j);
            } else if (d < n.second) {
                n.second = d;
            }
        }
    }
    return out;
}

// best < 0.8 * second, in integers; a lone candidate always passes.
bool passes_ratio(const Nearest& n) { return n.second == INT_MAX || 5LL * n.best < 4LL * n.second; }

}  // namespace

std::vector<Match> match_features(std::span<const Descriptor> a, std::span<const Descriptor> b) {
    std::vector<Match> out;
    if (a.empty() || b.empty()) return out;
    const auto ab = nearest(a, b);
    const auto ba = nearest(b, a);
    for (std::size_t i = 0; i < a.size(); ++i) {
        const int j = ab[i].index;
        if (ba[static_cast<std::size_t>(j)].index != static_cast<int>(i)) continue;
        if (!passes_ratio(ab[i]) || !passes_ratio(ba[static_cast<std::size_t>(j)])) continue;
        out.push_back({static_cast<int>(i), j, ab[i].best});
    }
    return out;
}

}  // namespace snowforge
