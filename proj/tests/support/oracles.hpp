#pragma once

// Straightforward scalar reimplementations used as test oracles. They share
// no code with the library.

#include <algorithm>
#include <cmath>
#include <vector>

#include "snowforge/frame.hpp"

namespace sforacle {

inline double psnr(const snowforge::Frame& a, const snowforge::Frame& b) {
    long double se = 0;
    const auto sa = a.samples(), sb = b.samples();
    for (std::size_t i = 0; i < sa.size(); ++i) {
        const long double d = static_cast<long double>(sa[i]) - static_cast<long double>(sb[i]);
        se += d * d;
    }
    if (se == 0) return 99.0;
    const long double mse = se / static_cast<long double>(sa.size());
    return static_cast<double>(10.0L * std::log10(255.0L * 255.0L / mse));
}

inline std::vector<double> luma_plane(const snowforge::Frame& f) {
    std::vector<double> out;
    for (int y = 0; y < f.height(); ++y)
        for (int x = 0; x < f.width(); ++x) {
            if (f.channels() == 1) {
                out.push_back(f.at(x, y));
            } else {
                const int r = f.at(x, y, 0), g = f.at(x, y, 1), b = f.at(x, y, 2);
                out.push_back(static_cast<double>((299 * r + 587 * g + 114 * b + 500) / 1000));
            }
        }
    return out;
}

// Direct 2-D windowed sums, 11x11 Gaussian (sigma 1.5) normalised over the
// whole window, mean over centres whose window fits.
inline double ssim(const snowforge::Frame& a, const snowforge::Frame& b) {
    const int w = a.width(), h = a.height(), r = 5;
    const auto pa = luma_plane(a), pb = luma_plane(b);
    double kernel[11][11];
    double total = 0;
    for (int j = -r; j <= r; ++j)
        for (int i = -r; i <= r; ++i) {
            kernel[j + r][i + r] = std::exp(-(i * i + j * j) / (2.0 * 1.5 * 1.5));
            total += kernel[j + r][i + r];
        }
    const double c1 = (0.01 * 255) * (0.01 * 255), c2 = (0.03 * 255) * (0.03 * 255);
    double sum = 0;
    int count = 0;
    for (int cy = r; cy < h - r; ++cy)
        for (int cx = r; cx < w - r; ++cx) {
            double ma = 0, mb = 0, aa = 0, bb = 0, ab = 0;
            for (int j = -r; j <= r; ++j)
                for (int i = -r; i <= r; ++i) {
                    const double k = kernel[j + r][i + r] / total;
                    const double va = pa[static_cast<std::size_t>((cy + j) * w + cx + i)];
                    const double vb = pb[static_cast<std::size_t>((cy + j) * w + cx + i)];
                    ma += k * va;
                    mb += k * vb;
                    aa += k * va * va;
                    bb += k * vb * vb;
                    ab += k * va * vb;
                }
            const double va = aa - ma * ma, vb = bb - mb * mb, cov = ab - ma * mb;
            sum += ((2 * ma * mb + c1) * (2 * cov + c2)) / ((ma * ma + mb * mb + c1) * (va + vb + c2));
            ++count;
        }
    return sum / count;
}

}  // namespace sforacle
