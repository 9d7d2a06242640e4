#include "respicam/tracking.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "respicam/error.hpp"

namespace respicam {

void FlowParams::validate() const {
  if (window < 3 || window % 2 == 0) {
    throw Error(ErrorCode::PreconditionViolation, "flow window must be odd and >= 3");
  }
  if (pyramid_levels < 1 || max_iters < 1 || !(eps > 0.0) || !(min_eig_threshold > 0.0)) {
    throw Error(ErrorCode::PreconditionViolation, "flow parameters must be positive");
  }
}

FloatImage pyr_down(const FloatImage& img) {
  const Eigen::Index h = img.rows();
  const Eigen::Index w = img.cols();
  const Eigen::Index oh = (h + 1) / 2;
  const Eigen::Index ow = (w + 1) / 2;
  const FloatImage p = replicate_pad(img, 2);
  // Horizontal pass at even columns only.
  FloatImage horiz(h + 4, ow);
  for (Eigen::Index y = 0; y < h + 4; ++y) {
    const double* row = &p(y, 0);
    for (Eigen::Index x = 0; x < ow; ++x) {
      const double* c = row + 2 * x;
      horiz(y, x) = c[0] + 4.0 * c[1] + 6.0 * c[2] + 4.0 * c[3] + c[4];
    }
  }
  FloatImage out(oh, ow);
  for (Eigen::Index y = 0; y < oh; ++y) {
    out.row(y) = (horiz.row(2 * y) + 4.0 * horiz.row(2 * y + 1) + 6.0 * horiz.row(2 * y + 2) +
                  4.0 * horiz.row(2 * y + 3) + horiz.row(2 * y + 4)) /
                 256.0;
  }
  return out;
}

ImagePyramid::ImagePyramid(FloatImage base, int levels) {
  levels_.reserve(static_cast<std::size_t>(std::max(levels, 1)));
  levels_.push_back(std::move(base));
  for (int i = 1; i < levels; ++i) {
    const FloatImage& top = levels_.back();
    if ((top.rows() + 1) / 2 < 8 || (top.cols() + 1) / 2 < 8) break;
    levels_.push_back(pyr_down(top));
  }
}

namespace {

// Bilinear samples of `img` on an n x n unit grid starting at (x0, y0),
// coordinates clamped to the image. `out` holds n * n values row-major.
void sample_grid(const FloatImage& img, double x0, double y0, int n, double* out) {
  const double fx = std::floor(x0);
  const double fy = std::floor(y0);
  const double ax = x0 - fx;
  const double ay = y0 - fy;
  const double w00 = (1.0 - ax) * (1.0 - ay);
  const double w01 = ax * (1.0 - ay);
  const double w10 = (1.0 - ax) * ay;
  const double w11 = ax * ay;
  const Eigen::Index ix = static_cast<Eigen::Index>(fx);
  const Eigen::Index iy = static_cast<Eigen::Index>(fy);
  const Eigen::Index stride = img.cols();
  if (ix >= 0 && iy >= 0 && ix + n < img.cols() && iy + n < img.rows()) {
    for (int r = 0; r < n; ++r) {
      const double* a = img.data() + (iy + r) * stride + ix;
      const double* b = a + stride;
      double* o = out + r * n;
      for (int c = 0; c < n; ++c) o[c] = w00 * a[c] + w01 * a[c + 1] + w10 * b[c] + w11 * b[c + 1];
    }
    return;
  }
  const Eigen::Index max_x = img.cols() - 1;
  const Eigen::Index max_y = img.rows() - 1;
  for (int r = 0; r < n; ++r) {
    const Eigen::Index y_a = std::clamp<Eigen::Index>(iy + r, 0, max_y);
    const Eigen::Index y_b = std::clamp<Eigen::Index>(iy + r + 1, 0, max_y);
    for (int c = 0; c < n; ++c) {
      const Eigen::Index x_a = std::clamp<Eigen::Index>(ix + c, 0, max_x);
      const Eigen::Index x_b = std::clamp<Eigen::Index>(ix + c + 1, 0, max_x);
      out[r * n + c] = w00 * img(y_a, x_a) + w01 * img(y_a, x_b) + w10 * img(y_b, x_a) +
                       w11 * img(y_b, x_b);
    }
  }
}

struct LkWorkspace {
  std::vector<double> patch;
  std::vector<double> tmpl;
  std::vector<double> ix;
  std::vector<double> iy;
  std::vector<double> warped;

  void resize(int n) {
    const auto nn = static_cast<std::size_t>(n) * n;
    patch.resize(static_cast<std::size_t>(n + 2) * (n + 2));
    tmpl.resize(nn);
    ix.resize(nn);
    iy.resize(nn);
    warped.resize(nn);
  }
};

struct Residual {
  double bx = 0.0;
  double by = 0.0;
  double ssd = 0.0;
};

// Mismatch sums between the template and `img` sampled on the n x n grid at
// (x0, y0): b = sum(e * grad) and SSD = sum(e^2) with e = template - warped.
Residual residual_sums(const FloatImage& img, double x0, double y0, int n, LkWorkspace& ws) {
  double bx = 0.0;
  double by = 0.0;
  double ssd = 0.0;
  const double fx = std::floor(x0);
  const double fy = std::floor(y0);
  const auto ix = static_cast<Eigen::Index>(fx);
  const auto iy = static_cast<Eigen::Index>(fy);
  if (ix >= 0 && iy >= 0 && ix + n < img.cols() && iy + n < img.rows()) {
    const double ax = x0 - fx;
    const double ay = y0 - fy;
    const double w00 = (1.0 - ax) * (1.0 - ay);
    const double w01 = ax * (1.0 - ay);
    const double w10 = (1.0 - ax) * ay;
    const double w11 = ax * ay;
    const Eigen::Index stride = img.cols();
    for (int r = 0; r < n; ++r) {
      const double* a = img.data() + (iy + r) * stride + ix;
      const double* b = a + stride;
      const double* t = ws.tmpl.data() + r * n;
      const double* gx = ws.ix.data() + r * n;
      const double* gy = ws.iy.data() + r * n;
#pragma omp simd reduction(+ : bx, by, ssd)
      for (int c = 0; c < n; ++c) {
        const double e = t[c] - (w00 * a[c] + w01 * a[c + 1] + w10 * b[c] + w11 * b[c + 1]);
        bx += e * gx[c];
        by += e * gy[c];
        ssd += e * e;
      }
    }
    return {bx, by, ssd};
  }
  sample_grid(img, x0, y0, n, ws.warped.data());
  const auto nn = static_cast<std::size_t>(n) * n;
#pragma omp simd reduction(+ : bx, by, ssd)
  for (std::size_t k = 0; k < nn; ++k) {
    const double e = ws.tmpl[k] - ws.warped[k];
    bx += e * ws.ix[k];
    by += e * ws.iy[k];
    ssd += e * e;
  }
  return {bx, by, ssd};
}

}  // namespace

FlowResult lk_track_point(const ImagePyramid& prev, const ImagePyramid& next,
                          const Eigen::Vector2d& point, const FlowParams& params,
                          const Eigen::Vector2d& initial_flow) {
  thread_local LkWorkspace ws;
  const int n = params.window;
  const int half = n / 2;
  const int np = n + 2;
  const int levels = std::min(prev.levels(), next.levels());
  const double area = static_cast<double>(n) * n;
  ws.resize(n);

  Eigen::Vector2d guess = initial_flow / static_cast<double>(1 << (levels - 1));
  Eigen::Vector2d d = Eigen::Vector2d::Zero();
  for (int level = levels - 1; level >= 0; --level) {
    const FloatImage& img_i = prev.level(level);
    const FloatImage& img_j = next.level(level);
    const Eigen::Vector2d p = point / static_cast<double>(1 << level);

    sample_grid(img_i, p.x() - half - 1, p.y() - half - 1, np, ws.patch.data());
    // Sobel derivatives normalised to intensity per pixel; y grows downward.
    double gxx = 0.0;
    double gxy = 0.0;
    double gyy = 0.0;
    for (int r = 0; r < n; ++r) {
      const double* up = ws.patch.data() + r * np;
      const double* mid = up + np;
      const double* low = mid + np;
      double* t = ws.tmpl.data() + r * n;
      double* gx = ws.ix.data() + r * n;
      double* gy = ws.iy.data() + r * n;
#pragma omp simd reduction(+ : gxx, gxy, gyy)
      for (int c = 0; c < n; ++c) {
        const double dx = (up[c + 2] - up[c] + 2.0 * (mid[c + 2] - mid[c]) + low[c + 2] - low[c]) * 0.125;
        const double dy = (low[c] - up[c] + 2.0 * (low[c + 1] - up[c + 1]) + low[c + 2] - up[c + 2]) * 0.125;
        t[c] = mid[c + 1];
        gx[c] = dx;
        gy[c] = dy;
        gxx += dx * dx;
        gxy += dx * dy;
        gyy += dy * dy;
      }
    }
    const double min_eig =
        0.5 * ((gxx + gyy) - std::sqrt((gxx - gyy) * (gxx - gyy) + 4.0 * gxy * gxy)) / area;
    if (!(min_eig >= params.min_eig_threshold)) return {point, TrackStatus::Lost};
    const double det = gxx * gyy - gxy * gxy;

    // Gauss-Newton with backtracking: a step that raises the window SSD is
    // halved until it helps or falls below eps.
    d.setZero();
    Eigen::Vector2d step = Eigen::Vector2d::Zero();
    double best_ssd = std::numeric_limits<double>::infinity();
    for (int iter = 0; iter < params.max_iters; ++iter) {
      const Eigen::Vector2d q = p + guess + d;
      if (q.x() < -half || q.y() < -half || q.x() > img_j.cols() - 1 + half ||
          q.y() > img_j.rows() - 1 + half) {
        return {point + guess + d, TrackStatus::Lost};
      }
      const Residual res = residual_sums(img_j, q.x() - half, q.y() - half, n, ws);
      const double bx = res.bx;
      const double by = res.by;
      const double ssd = res.ssd;
      if (ssd > best_ssd) {
        step *= 0.5;
        d -= step;
        if (step.squaredNorm() < params.eps * params.eps) break;
        continue;
      }
      best_ssd = ssd;
      step = Eigen::Vector2d((gyy * bx - gxy * by) / det, (gxx * by - gxy * bx) / det);
      d += step;
      if (step.squaredNorm() < params.eps * params.eps) break;
    }
    if (level > 0) guess = 2.0 * (guess + d);
  }
  const Eigen::Vector2d result = point + guess + d;
  const FloatImage& base = next.level(0);
  if (result.x() < 0.0 || result.y() < 0.0 || result.x() > base.cols() - 1 ||
      result.y() > base.rows() - 1 || !result.allFinite()) {
    return {result, TrackStatus::Lost};
  }
  return {result, TrackStatus::Tracked};
}

std::vector<FlowResult> lk_flow_step(const FloatImage& prev, const FloatImage& next,
                                     std::span<const FeaturePoint> points,
                                     const FlowParams& params) {
  if (prev.rows() != next.rows() || prev.cols() != next.cols()) {
    throw Error(ErrorCode::DimensionMismatch, "flow images differ in size");
  }
  params.validate();
  const ImagePyramid prev_pyr(prev, params.pyramid_levels);
  const ImagePyramid next_pyr(next, params.pyramid_levels);
  std::vector<FlowResult> out;
  out.reserve(points.size());
  for (const FeaturePoint& pt : points) {
    out.push_back(lk_track_point(prev_pyr, next_pyr, {pt.x, pt.y}, params));
  }
  return out;
}

PointTracker::PointTracker(FloatImage first, std::span<const FeaturePoint> initial,
                           FlowParams params)
    : params_(params) {
  params_.validate();
  prev_ = ImagePyramid(std::move(first), params_.pyramid_levels);
  tracks_.reserve(initial.size());
  int id = 0;
  for (const FeaturePoint& pt : initial) {
    TrackSeries t;
    t.point_id = id++;
    t.x.push_back(pt.x);
    t.y.push_back(pt.y);
    tracks_.push_back(std::move(t));
  }
}

void PointTracker::advance(FloatImage next) {
  const FloatImage& base = prev_.level(0);
  if (next.rows() != base.rows() || next.cols() != base.cols()) {
    throw Error(ErrorCode::DimensionMismatch, "frame size changed during tracking");
  }
  ImagePyramid next_pyr(std::move(next), params_.pyramid_levels);
  for (TrackSeries& t : tracks_) {
    if (!t.alive) continue;
    const std::size_t k = t.length();
    const Eigen::Vector2d flow =
        k >= 2 ? Eigen::Vector2d(t.x[k - 1] - t.x[k - 2], t.y[k - 1] - t.y[k - 2]) : Eigen::Vector2d::Zero();
    const FlowResult r = lk_track_point(prev_, next_pyr, {t.x.back(), t.y.back()}, params_, flow);
    if (r.status == TrackStatus::Lost) {
      t.alive = false;
      continue;
    }
    t.x.push_back(r.position.x());
    t.y.push_back(r.position.y());
  }
  prev_ = std::move(next_pyr);
  ++frames_;
}

std::size_t PointTracker::alive_count() const {
  return static_cast<std::size_t>(
      std::count_if(tracks_.begin(), tracks_.end(), [](const TrackSeries& t) { return t.alive; }));
}

void check_collapse(std::span<const TrackSeries> tracks, std::size_t frame_count) {
  const std::size_t needed = (frame_count + 1) / 2;
  const bool survived = std::any_of(tracks.begin(), tracks.end(),
                                    [&](const TrackSeries& t) { return t.length() >= needed; });
  if (!survived) throw Error(ErrorCode::TrackingCollapse, "all points lost before half the clip");
}

std::vector<TrackSeries> track_points(const FrameSequence& seq,
                                      std::span<const FeaturePoint> initial,
                                      const FlowParams& params, FilterKind filter) {
  if (seq.size() < 2) throw Error(ErrorCode::PreconditionViolation, "need at least two frames");
  if (initial.empty()) throw Error(ErrorCode::PreconditionViolation, "no points to track");
  PointTracker tracker(apply_filter(seq.frames.front(), filter), initial, params);
  for (std::size_t i = 1; i < seq.size(); ++i) tracker.advance(apply_filter(seq.frames[i], filter));
  check_collapse(tracker.tracks(), seq.size());
  return tracker.tracks();
}

}  // namespace respicam
