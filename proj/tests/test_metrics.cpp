#include <gtest/gtest.h>

#include <cmath>
#include <random>

#include "fisheye/error.hpp"
#include "fisheye/metrics.hpp"

namespace fisheye {
namespace {

Image random_image(int h, int w, std::uint64_t seed) {
  std::mt19937_64 gen(seed);
  std::uniform_int_distribution<int> value(0, 255);
  Image img(h, w);
  for (auto& p : img.pixels()) p = static_cast<std::uint8_t>(value(gen));
  return img;
}

Image constant_image(int h, int w, std::uint8_t v) { return Image(h, w, v); }

Image add_noise(const Image& img, int amplitude, std::uint64_t seed) {
  std::mt19937_64 gen(seed);
  std::uniform_int_distribution<int> noise(-amplitude, amplitude);
  Image out = img;
  for (auto& p : out.pixels()) p = static_cast<std::uint8_t>(std::clamp(p + noise(gen), 0, 255));
  return out;
}

TEST(Psnr, Examples) {
  const Image a = random_image(20, 20, 1);
  EXPECT_EQ(psnr(a, a), kPsnrInfinite);
  EXPECT_DOUBLE_EQ(psnr(constant_image(8, 8, 0), constant_image(8, 8, 255)), 0.0);
  // 20 log10(255), evaluated independently of the implementation.
  EXPECT_NEAR(psnr(constant_image(8, 8, 100), constant_image(8, 8, 101)), 48.1308, 1e-3);
  EXPECT_NEAR(psnr(constant_image(8, 8, 100), constant_image(8, 8, 101)),
              20.0 * std::log10(255.0), 1e-12);
}

TEST(Psnr, DecreasesWithNoise) {
  const Image a = random_image(64, 64, 2);
  double previous = kPsnrInfinite;
  for (int amplitude : {2, 5, 10, 20, 40}) {
    const double p = psnr(a, add_noise(a, amplitude, 3));
    EXPECT_LT(p, previous);
    previous = p;
  }
}

TEST(Psnr, Errors) {
  const Image a = random_image(8, 8, 1);
  EXPECT_THROW(psnr(a, random_image(8, 9, 1)), Error);
  const Mask empty(8, 8, 1, 0);
  try {
    psnr(a, a, {}, &empty);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), Errc::kEmptyMask);
  }
}

TEST(Ssim, IdenticalIsExactlyOne) {
  for (std::uint64_t s = 0; s < 5; ++s) {
    const Image a = random_image(32, 40, s);
    EXPECT_EQ(ssim(a, a), 1.0);
  }
}

TEST(Ssim, ConstantImagesClosedForm) {
  const Image a = constant_image(16, 16, 0);
  const Image b = constant_image(16, 16, 255);
  const double c1 = std::pow(0.01 * 255, 2), c2 = std::pow(0.03 * 255, 2);
  const double mu_a = 0.0, mu_b = 255.0;
  const double expected = (2 * mu_a * mu_b + c1) * c2 / ((mu_a * mu_a + mu_b * mu_b + c1) * c2);
  EXPECT_NEAR(ssim(a, b), expected, 1e-10);
}

TEST(Ssim, SymmetricAndBounded) {
  for (std::uint64_t s = 0; s < 5; ++s) {
    const Image a = random_image(24, 24, s), b = random_image(24, 24, s + 100);
    EXPECT_DOUBLE_EQ(ssim(a, b), ssim(b, a));
    EXPECT_LE(std::abs(ssim(a, b)), 1.0);
  }
}

TEST(Ssim, Errors) {
  try {
    ssim(random_image(8, 8, 1), random_image(8, 8, 2));
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), Errc::kTooSmall);
  }
  EXPECT_THROW(ssim(random_image(16, 16, 1), random_image(16, 17, 2)), Error);
}

TEST(Metrics, FullMaskEqualsUnmasked) {
  const Image a = random_image(30, 30, 4), b = add_noise(a, 15, 5);
  const Mask full(30, 30, 1, 1);
  EXPECT_EQ(psnr(a, b, {}, &full), psnr(a, b));
  EXPECT_EQ(ssim(a, b, {}, &full), ssim(a, b));
}

TEST(Metrics, MaskRestrictsPsnr) {
  Image a = constant_image(16, 16, 50), b = a;
  b.at(0, 0, 0) = 255;
  Mask mask(16, 16, 1, 1);
  mask.at(0, 0) = 0;
  EXPECT_EQ(psnr(a, b, {}, &mask), kPsnrInfinite);
  EXPECT_LT(psnr(a, b), kPsnrInfinite);
}

}  // namespace
}  // namespace fisheye
