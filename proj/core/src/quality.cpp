#include "snowforge/quality.hpp"

#include <array>
#include <cmath>
#include <vector>

namespace snowforge {

namespace {

constexpr int kWindow = 11;
constexpr int kHalf = kWindow / 2;
constexpr double kSigma = 1.5;

void require_pair(const Frame& a, const Frame& b) {
    if (a.geometry() != b.geometry()) {
        throw Error(Errc::PairingMismatch, describe(a.geometry()) + " vs " + describe(b.geometry()));
    }
}

std::array<double, kWindow> gaussian_1d() {
    std::array<double, kWindow> g{};
    double sum = 0.0;
    for (int i = 0; i < kWindow; ++i) {
        const double d = i - kHalf;
        g[static_cast<std::size_t>(i)] = std::exp(-(d * d) / (2.0 * kSigma * kSigma));
        sum += g[static_cast<std::size_t>(i)];
    }
    for (auto& v : g) v /= sum;
    return g;
}

// Separable "valid" Gaussian filter: output is (w - 10) x (h - 10).
std::vector<double> filter_valid(const std::vector<double>& img, int w, int h, const std::array<double, kWindow>& g) {
    const int ow = w - 2 * kHalf;
    const int oh = h - 2 * kHalf;
    std::vector<double> tmp(static_cast<std::size_t>(ow) * h);
    for (int y = 0; y < h; ++y) {
        for (int x = 0; x < ow; ++x) {
            double acc = 0.0;
            for (int k = 0; k < kWindow; ++k) acc += g[static_cast<std::size_t>(k)] * img[static_cast<std::size_t>(y) * w + x + k];
            tmp[static_cast<std::size_t>(y) * ow + x] = acc;
        }
    }
    std::vector<double> out(static_cast<std::size_t>(ow) * oh);
    for (int y = 0; y < oh; ++y) {
        for (int x = 0; x < ow; ++x) {
            double acc = 0.0;
            for (int k = 0; k < kWindow; ++k) acc += g[static_cast<std::size_t>(k)] * tmp[static_cast<std::size_t>(y + k) * ow + x];
            out[static_cast<std::size_t>(y) * ow + x] = acc;
        }
    }
    return out;
}

}  // namespace

double psnr(const Frame& a, const Frame& b) {
    require_pair(a, b);
    auto sa = a.samples();
    auto sb = b.samples();
    std::uint64_t sse = 0;
    for (std::size_t i = 0; i < sa.size(); ++i) {
        const int d = static_cast<int>(sa[i]) - static_cast<int>(sb[i]);
        sse += static_cast<std::uint64_t>(d * d);
    }
    if (sse == 0) return kPsnrIdentical;
    const double mse = static_cast<double>(sse) / static_cast<double>(sa.size());
    return 10.0 * std::log10(255.0 * 255.0 / mse);
}

double ssim(const Frame& a, const Frame& b) {
    require_pair(a, b);
    if (a.width() < kWindow || a.height() < kWindow) {
        throw Error(Errc::FrameTooSmall, "SSIM needs at least 11x11, got " + describe(a.geometry()));
    }
    const Frame la = to_luma(a);
    const Frame lb = to_luma(b);
    const int w = la.width();
    const int h = la.height();
    const std::size_t n = la.geometry().pixel_count();
    std::vector<double> x(n), y(n), xx(n), yy(n), xy(n);
    for (std::size_t i = 0; i < n; ++i) {
        x[i] = la.samples()[i];
        y[i] = lb.samples()[i];
        xx[i] = x[i] * x[i];
        yy[i] = y[i] * y[i];
        xy[i] = x[i] * y[i];
    }
    const auto g = gaussian_1d();
    const auto mx = filter_valid(x, w, h, g);
    const auto my = filter_valid(y, w, h, g);
    const auto mxx = filter_valid(xx, w, h, g);
    const auto myy = filter_valid(yy, w, h, g);
    const auto mxy = filter_valid(xy, w, h, g);

    constexpr double c1 = (0.01 * 255.0) * (0.01 * 255.0);
    constexpr double c2 = (0.03 * 255.0) * (0.03 * 255.0);
    double total = 0.0;
    for (std::size_t i = 0; i < mx.size(); ++i) {
        const double vx = mxx[i] - mx[i] * mx[i];
        const double vy = myy[i] - my[i] * my[i];
        const double cov = mxy[i] - mx[i] * my[i];
        total += ((2.0 * mx[i] * my[i] + c1) * (2.0 * cov + c2)) /
                 ((mx[i] * mx[i] + my[i] * my[i] + c1) * (vx + vy + c2));
    }
    return total / static_cast<double>(mx.size());
}

}  // namespace snowforge
