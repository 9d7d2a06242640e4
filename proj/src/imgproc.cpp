#include "respicam/imgproc.hpp"

namespace respicam {

std::string_view to_string(FilterKind kind) {
  switch (kind) {
    case FilterKind::None: return "Filterless";
    case FilterKind::Laplacian: return "Laplacian";
    case FilterKind::Sobel: return "Sobel";
  }
  return "?";
}

std::optional<FilterKind> parse_filter_kind(std::string_view name) {
  if (name == "none" || name == "Filterless" || name == "filterless") return FilterKind::None;
  if (name == "laplacian" || name == "Laplacian") return FilterKind::Laplacian;
  if (name == "sobel" || name == "Sobel") return FilterKind::Sobel;
  return std::nullopt;
}

}  // namespace respicam
