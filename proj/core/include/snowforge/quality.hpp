#pragma once

#include "snowforge/frame.hpp"

namespace snowforge {

/// Returned by psnr() for identical frames.
inline constexpr double kPsnrIdentical = 99.0;

/// 10 log10(255^2 / MSE) over every sample. Throws PairingMismatch.
double psnr(const Frame& a, const Frame& b);

/// Mean SSIM on luma: 11x11 Gaussian window (sigma 1.5), K1 = 0.01,
/// K2 = 0.03, L = 255, averaged over window centres that keep the whole
/// window inside the frame. Throws PairingMismatch / FrameTooSmall.
double ssim(const Frame& a, const Frame& b);

}  // namespace snowforge
