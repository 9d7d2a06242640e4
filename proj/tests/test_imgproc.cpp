#include <doctest.h>

#include <random>

#include "respicam/error.hpp"
#include "respicam/imgproc.hpp"

using namespace respicam;

namespace {

FloatImage impulse(int n) {
  FloatImage img = FloatImage::Zero(n, n);
  img(n / 2, n / 2) = 1.0;
  return img;
}

FloatImage random_image(int h, int w, std::uint32_t seed) {
  std::mt19937 rng(seed);
  std::uniform_real_distribution<double> u(-50.0, 50.0);
  FloatImage img(h, w);
  for (Eigen::Index i = 0; i < img.size(); ++i) img.data()[i] = u(rng);
  return img;
}

}  // namespace

TEST_CASE("zero-sum kernels vanish on constant images") {
  const GrayFrame flat = GrayFrame::Constant(7, 9, 42);
  for (const Kernel3x3& k : {laplacian_kernel(), sobel_x_kernel(), sobel_y_kernel()}) {
    CHECK((convolve2d(flat, k) == 0.0).all());
  }
  CHECK((laplacian_filter(flat) == 0.0).all());
  CHECK((sobel_magnitude(flat) == 0.0).all());
}

TEST_CASE("Laplacian of an impulse reproduces the kernel") {
  const FloatImage out = laplacian_filter(impulse(7));
  FloatImage expected = FloatImage::Zero(7, 7);
  expected.block(2, 2, 3, 3) = laplacian_kernel().array();
  CHECK((out == expected).all());
  CHECK(out(3, 3) == -4.0);
  CHECK(out.sum() == 0.0);
}

TEST_CASE("correlation places the kernel without flipping") {
  Kernel3x3 k;
  k << 1, 2, 3, 4, 5, 6, 7, 8, 9;
  const FloatImage out = convolve2d(impulse(5), k);
  // out(y, x) = sum k(dy, dx) * in(y + dy - 1, x + dx - 1), so the impulse
  // shows the kernel rotated by 180 degrees.
  CHECK(out(1, 1) == 9.0);
  CHECK(out(1, 3) == 7.0);
  CHECK(out(3, 1) == 3.0);
  CHECK(out(3, 3) == 1.0);
  CHECK(out(2, 2) == 5.0);
}

TEST_CASE("Laplacian of a linear ramp is zero everywhere") {
  GrayFrame ramp(6, 10);
  for (int y = 0; y < 6; ++y) {
    for (int x = 0; x < 10; ++x) ramp(y, x) = static_cast<std::uint8_t>(3 * x);
  }
  const FloatImage out = laplacian_filter(ramp);
  CHECK((out.block(0, 1, 6, 8) == 0.0).all());
}

TEST_CASE("Sobel on a vertical step edge") {
  GrayFrame step = GrayFrame::Zero(6, 8);
  step.rightCols(4).setOnes();
  const FloatImage gx = convolve2d(step, sobel_x_kernel());
  const FloatImage gy = convolve2d(step, sobel_y_kernel());
  const FloatImage g = sobel_magnitude(step);
  for (int y = 0; y < 6; ++y) {
    CHECK(gx(y, 3) == 4.0);
    CHECK(gx(y, 4) == 4.0);
    CHECK(gy(y, 3) == 0.0);
    CHECK(g(y, 3) == 4.0);
    CHECK(g(y, 4) == 4.0);
    CHECK(g(y, 0) == 0.0);
    CHECK(g(y, 7) == 0.0);
  }
  const GrayFrame transposed = step.transpose();
  const FloatImage gt = sobel_magnitude(transposed);
  CHECK((gt == g.transpose()).all());
  CHECK(convolve2d(transposed, sobel_y_kernel())(3, 0) == -4.0);
}

TEST_CASE("images smaller than 3x3 are rejected") {
  const FloatImage tiny = FloatImage::Zero(2, 2);
  try {
    convolve2d(tiny, laplacian_kernel());
    FAIL("expected ImageTooSmall");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::ImageTooSmall);
  }
  CHECK_THROWS_AS(sobel_magnitude(FloatImage::Zero(2, 5)), Error);
  CHECK_NOTHROW(laplacian_filter(FloatImage::Zero(3, 3)));
}

TEST_CASE("convolution is linear") {
  std::mt19937 rng(1);
  std::uniform_real_distribution<double> coef(-3.0, 3.0);
  for (int trial = 0; trial < 50; ++trial) {
    const FloatImage a = random_image(9, 11, 100 + trial);
    const FloatImage b = random_image(9, 11, 200 + trial);
    Kernel3x3 k;
    for (int i = 0; i < 9; ++i) k.data()[i] = coef(rng);
    const double s = coef(rng);
    const double t = coef(rng);
    const FloatImage lhs = convolve2d(FloatImage(s * a + t * b), k);
    const FloatImage rhs = s * convolve2d(a, k) + t * convolve2d(b, k);
    const double scale = std::max(1.0, rhs.abs().maxCoeff());
    REQUIRE((lhs - rhs).abs().maxCoeff() <= 1e-9 * scale);
  }
}

TEST_CASE("Sobel magnitude follows a 90 degree rotation") {
  const FloatImage img = random_image(12, 15, 9);
  const FloatImage rotated = img.transpose().colwise().reverse();
  const FloatImage g = sobel_magnitude(img);
  const FloatImage g_rot = sobel_magnitude(rotated);
  const FloatImage expected = g.transpose().colwise().reverse();
  CHECK((g_rot - expected).abs().maxCoeff() <= 1e-9);
}

TEST_CASE("Laplacian response of interior impulses sums to zero") {
  std::mt19937 rng(4);
  std::uniform_int_distribution<int> pos(2, 17);
  for (int trial = 0; trial < 20; ++trial) {
    FloatImage img = FloatImage::Zero(20, 20);
    for (int k = 0; k < 5; ++k) img(pos(rng), pos(rng)) += 1.0 + k;
    CHECK(std::abs(laplacian_filter(img).sum()) <= 1e-12);
  }
}

TEST_CASE("apply_filter dispatch and names") {
  GrayFrame f(3, 3);
  f << 1, 2, 3, 4, 5, 6, 7, 8, 9;
  CHECK((apply_filter(f, FilterKind::None) == f.cast<double>()).all());
  CHECK((apply_filter(f, FilterKind::Laplacian) == laplacian_filter(f)).all());
  CHECK((apply_filter(f, FilterKind::Sobel) == sobel_magnitude(f)).all());
  for (FilterKind k : {FilterKind::None, FilterKind::Laplacian, FilterKind::Sobel}) {
    CHECK(parse_filter_kind(to_string(k)) == k);
  }
  CHECK_FALSE(parse_filter_kind("Gaussian").has_value());
}

TEST_CASE("replicate_pad copies edge pixels outward") {
  GrayFrame f(2, 2);
  f << 1, 2, 3, 4;
  const FloatImage p = replicate_pad(f, 2);
  CHECK(p.rows() == 6);
  CHECK(p(0, 0) == 1.0);
  CHECK(p(0, 5) == 2.0);
  CHECK(p(5, 0) == 3.0);
  CHECK(p(5, 5) == 4.0);
  CHECK(p(2, 3) == 2.0);
}
