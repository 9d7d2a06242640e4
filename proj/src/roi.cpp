#include "respicam/roi.hpp"

#include <algorithm>
#include <cmath>

#include "respicam/error.hpp"

namespace respicam {

namespace {
constexpr int kMinRoiSide = 8;

int round_px(double v) { return static_cast<int>(std::lround(v)); }
}  // namespace

std::string_view to_string(SizeClass size) {
  switch (size) {
    case SizeClass::Small: return "Small";
    case SizeClass::Medium: return "Medium";
    case SizeClass::Large: return "Large";
  }
  return "?";
}

std::optional<SizeClass> parse_size_class(std::string_view name) {
  if (name == "small" || name == "Small") return SizeClass::Small;
  if (name == "medium" || name == "Medium") return SizeClass::Medium;
  if (name == "large" || name == "Large") return SizeClass::Large;
  return std::nullopt;
}

const RoiScale& RoiGeometry::operator[](SizeClass size) const {
  switch (size) {
    case SizeClass::Small: return small;
    case SizeClass::Large: return large;
    case SizeClass::Medium: break;
  }
  return medium;
}

RoiScale& RoiGeometry::operator[](SizeClass size) {
  return const_cast<RoiScale&>(static_cast<const RoiGeometry&>(*this)[size]);
}

BoundingBox chest_box_unclamped(const BoundingBox& face, SizeClass size,
                                const RoiGeometry& geometry) {
  const RoiScale& s = geometry[size];
  const double center_x = face.x + 0.5 * face.w;
  const double w = s.w_mul * face.w;
  const double h = s.h_mul * face.h;
  return {round_px(center_x - 0.5 * w), round_px(face.y + s.y_off_mul * face.h), round_px(w),
          round_px(h)};
}

BoundingBox chest_roi_from_face(const BoundingBox& face, SizeClass size, int frame_w, int frame_h,
                                const RoiGeometry& geometry) {
  if (face.w <= 0 || face.h <= 0) {
    throw Error(ErrorCode::PreconditionViolation, "face box must have positive size");
  }
  BoundingBox roi;
  try {
    roi = clamp_box(chest_box_unclamped(face, size, geometry), frame_w, frame_h);
  } catch (const Error&) {
    throw Error(ErrorCode::RoiTooSmall, "chest box falls outside the frame");
  }
  if (roi.w <= kMinRoiSide || roi.h <= kMinRoiSide) {
    throw Error(ErrorCode::RoiTooSmall, "clamped chest box is degenerate");
  }
  return roi;
}

BoundingBox clamp_box(const BoundingBox& box, int frame_w, int frame_h) {
  const int x0 = std::max(box.x, 0);
  const int y0 = std::max(box.y, 0);
  const int x1 = std::min(box.x + box.w, frame_w);
  const int y1 = std::min(box.y + box.h, frame_h);
  if (x1 <= x0 || y1 <= y0) {
    throw Error(ErrorCode::OutOfBounds, "box does not intersect the frame");
  }
  return {x0, y0, x1 - x0, y1 - y0};
}

BoundingBox expand_box(const BoundingBox& box, double mul, int frame_w, int frame_h) {
  const int dx = round_px(mul * box.w);
  const int dy = round_px(mul * box.h);
  return clamp_box({box.x - dx, box.y - dy, box.w + 2 * dx, box.h + 2 * dy}, frame_w, frame_h);
}

}  // namespace respicam
