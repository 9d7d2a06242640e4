#ifndef RESPICAM_ROI_HPP
#define RESPICAM_ROI_HPP

#include <array>
#include <optional>
#include <string_view>

namespace respicam {

/// Integer pixel rectangle; (x, y) is the top-left corner.
struct BoundingBox {
  int x = 0;
  int y = 0;
  int w = 0;
  int h = 0;

  long area() const { return static_cast<long>(w) * h; }
  bool contains(double px, double py) const {
    return px >= x && py >= y && px <= x + w - 1 && py <= y + h - 1;
  }
  friend bool operator==(const BoundingBox&, const BoundingBox&) = default;
};

enum class SizeClass { Small, Medium, Large };

inline constexpr std::array<SizeClass, 3> kAllSizeClasses = {SizeClass::Medium, SizeClass::Large,
                                                             SizeClass::Small};

std::string_view to_string(SizeClass size);
std::optional<SizeClass> parse_size_class(std::string_view name);

/// Chest box multipliers relative to the face box.
struct RoiScale {
  double w_mul;
  double h_mul;
  double y_off_mul;
};

struct RoiGeometry {
  RoiScale small{1.2, 0.8, 1.2};
  RoiScale medium{1.6, 1.0, 1.2};
  RoiScale large{2.0, 1.2, 1.2};

  const RoiScale& operator[](SizeClass size) const;
  RoiScale& operator[](SizeClass size);
};

/// Chest box below `face`, centered on it horizontally, before clamping.
BoundingBox chest_box_unclamped(const BoundingBox& face, SizeClass size,
                                const RoiGeometry& geometry = {});

/// Chest ROI derived from a face box and clamped into the frame.
/// Throws RoiTooSmall if the clamped box is 8 px or less on either side.
BoundingBox chest_roi_from_face(const BoundingBox& face, SizeClass size, int frame_w, int frame_h,
                                const RoiGeometry& geometry = {});

/// Intersection of `box` with the frame. Throws OutOfBounds when empty.
BoundingBox clamp_box(const BoundingBox& box, int frame_w, int frame_h);

/// `box` grown by `mul` times its own size on every side, clamped to the frame.
BoundingBox expand_box(const BoundingBox& box, double mul, int frame_w, int frame_h);

}  // namespace respicam

#endif  // RESPICAM_ROI_HPP
