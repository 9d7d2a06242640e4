#include "respicam/frame_io.hpp"

#include <png.h>

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <memory>
#include <regex>

namespace respicam {

namespace fs = std::filesystem;

GrayFrame to_grayscale(const RgbFrame& frame) {
  GrayFrame out(frame.height, frame.width);
  const auto rgb = frame.data.cast<double>();
  Eigen::ArrayXd luma = 0.299 * rgb.col(0) + 0.587 * rgb.col(1) + 0.114 * rgb.col(2);
  for (Eigen::Index i = 0; i < luma.size(); ++i) {
    out.data()[i] = static_cast<std::uint8_t>(std::clamp(std::lround(luma(i)), 0L, 255L));
  }
  return out;
}

namespace {

// Reads one whitespace/comment-delimited integer from a PNM header.
int read_pnm_int(std::istream& in, const fs::path& path) {
  int c = in.peek();
  while (c != EOF) {
    if (c == '#') {
      std::string line;
      std::getline(in, line);
    } else if (std::isspace(c)) {
      in.get();
    } else {
      break;
    }
    c = in.peek();
  }
  int value = -1;
  if (!(in >> value) || value < 0) {
    throw Error(ErrorCode::DecodeError, "malformed PNM header in " + path.string());
  }
  return value;
}

DecodedImage read_pnm(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorCode::DecodeError, "cannot open " + path.string());
  char magic[2] = {0, 0};
  in.read(magic, 2);
  if (magic[0] != 'P' || (magic[1] != '5' && magic[1] != '6')) {
    throw Error(ErrorCode::DecodeError, "unsupported PNM variant in " + path.string());
  }
  const int width = read_pnm_int(in, path);
  const int height = read_pnm_int(in, path);
  const int maxval = read_pnm_int(in, path);
  if (width <= 0 || height <= 0 || maxval <= 0 || maxval > 65535) {
    throw Error(ErrorCode::DecodeError, "bad PNM dimensions in " + path.string());
  }
  in.get();  // single whitespace before raster
  const int channels = magic[1] == '5' ? 1 : 3;
  const int bytes_per_sample = maxval > 255 ? 2 : 1;
  const std::size_t n = static_cast<std::size_t>(width) * height * channels;
  std::vector<unsigned char> raw(n * bytes_per_sample);
  in.read(reinterpret_cast<char*>(raw.data()), static_cast<std::streamsize>(raw.size()));
  if (in.gcount() != static_cast<std::streamsize>(raw.size())) {
    throw Error(ErrorCode::DecodeError, "truncated raster in " + path.string());
  }
  auto sample = [&](std::size_t i) -> std::uint8_t {
    int v = bytes_per_sample == 1 ? raw[i] : (raw[2 * i] << 8) | raw[2 * i + 1];
    if (maxval != 255) v = static_cast<int>(std::lround(255.0 * v / maxval));
    return static_cast<std::uint8_t>(std::min(v, 255));
  };
  if (channels == 1) {
    GrayFrame g(height, width);
    for (std::size_t i = 0; i < n; ++i) g.data()[i] = sample(i);
    return g;
  }
  RgbFrame rgb(width, height);
  for (std::size_t i = 0; i < n; ++i) rgb.data.data()[i] = sample(i);
  return rgb;
}

struct PngReadDeleter {
  png_structp png = nullptr;
  png_infop info = nullptr;
  ~PngReadDeleter() {
    if (png) png_destroy_read_struct(&png, info ? &info : nullptr, nullptr);
  }
};

struct FileCloser {
  void operator()(std::FILE* f) const { std::fclose(f); }
};

DecodedImage read_png(const fs::path& path) {
  std::unique_ptr<std::FILE, FileCloser> file(std::fopen(path.c_str(), "rb"));
  if (!file) throw Error(ErrorCode::DecodeError, "cannot open " + path.string());
  unsigned char sig[8];
  if (std::fread(sig, 1, 8, file.get()) != 8 || png_sig_cmp(sig, 0, 8) != 0) {
    throw Error(ErrorCode::DecodeError, "not a PNG file: " + path.string());
  }
  PngReadDeleter ctx;
  ctx.png = png_create_read_struct(PNG_LIBPNG_VER_STRING, nullptr, nullptr, nullptr);
  if (!ctx.png) throw Error(ErrorCode::DecodeError, "libpng init failed");
  ctx.info = png_create_info_struct(ctx.png);
  if (!ctx.info) throw Error(ErrorCode::DecodeError, "libpng init failed");

  int width = 0;
  int height = 0;
  int channels = 0;
  std::vector<unsigned char> pixels;
  std::vector<png_bytep> rows;
  // libpng reports errors via longjmp; nothing with a destructor is created below this point.
  if (setjmp(png_jmpbuf(ctx.png))) {
    throw Error(ErrorCode::DecodeError, "corrupt PNG: " + path.string());
  }
  png_init_io(ctx.png, file.get());
  png_set_sig_bytes(ctx.png, 8);
  png_read_info(ctx.png, ctx.info);
  const png_byte color = png_get_color_type(ctx.png, ctx.info);
  png_set_expand(ctx.png);
  png_set_strip_16(ctx.png);
  png_set_strip_alpha(ctx.png);
  if (color == PNG_COLOR_TYPE_PALETTE) png_set_palette_to_rgb(ctx.png);
  png_read_update_info(ctx.png, ctx.info);
  width = static_cast<int>(png_get_image_width(ctx.png, ctx.info));
  height = static_cast<int>(png_get_image_height(ctx.png, ctx.info));
  channels = png_get_channels(ctx.png, ctx.info);
  const std::size_t rowbytes = png_get_rowbytes(ctx.png, ctx.info);
  pixels.resize(rowbytes * static_cast<std::size_t>(height));
  rows.resize(static_cast<std::size_t>(height));
  for (int y = 0; y < height; ++y) rows[static_cast<std::size_t>(y)] = pixels.data() + y * rowbytes;
  png_read_image(ctx.png, rows.data());
  png_read_end(ctx.png, nullptr);

  if (channels == 1) {
    GrayFrame g(height, width);
    std::copy(pixels.begin(), pixels.end(), g.data());
    return g;
  }
  if (channels != 3) throw Error(ErrorCode::DecodeError, "unsupported PNG layout: " + path.string());
  RgbFrame rgb(width, height);
  std::copy(pixels.begin(), pixels.end(), rgb.data.data());
  return rgb;
}

std::string lower_ext(const fs::path& path) {
  std::string ext = path.extension().string();
  std::transform(ext.begin(), ext.end(), ext.begin(), [](unsigned char c) { return std::tolower(c); });
  return ext;
}

}  // namespace

DecodedImage read_image(const fs::path& path) {
  const std::string ext = lower_ext(path);
  if (ext == ".png") return read_png(path);
  return read_pnm(path);
}

GrayFrame read_gray(const fs::path& path) {
  DecodedImage img = read_image(path);
  if (auto* g = std::get_if<GrayFrame>(&img)) return std::move(*g);
  return to_grayscale(std::get<RgbFrame>(img));
}

void write_pgm(const fs::path& path, const GrayFrame& frame) {
  std::ofstream out(path, std::ios::binary);
  out << "P5\n" << frame.cols() << ' ' << frame.rows() << "\n255\n";
  out.write(reinterpret_cast<const char*>(frame.data()), static_cast<std::streamsize>(frame.size()));
  if (!out) throw Error(ErrorCode::WriteError, "cannot write " + path.string());
}

void write_ppm(const fs::path& path, const RgbFrame& frame) {
  std::ofstream out(path, std::ios::binary);
  out << "P6\n" << frame.width << ' ' << frame.height << "\n255\n";
  out.write(reinterpret_cast<const char*>(frame.data.data()),
            static_cast<std::streamsize>(frame.data.size()));
  if (!out) throw Error(ErrorCode::WriteError, "cannot write " + path.string());
}

std::vector<fs::path> list_frames(const fs::path& dir) {
  static const std::regex pattern(R"(frame_\d+\.(pgm|ppm|png))", std::regex::icase);
  std::error_code ec;
  if (!fs::is_directory(dir, ec)) {
    throw Error(ErrorCode::NoFrames, "not a directory: " + dir.string());
  }
  std::vector<fs::path> files;
  for (const auto& entry : fs::directory_iterator(dir)) {
    if (entry.is_regular_file() && std::regex_match(entry.path().filename().string(), pattern)) {
      files.push_back(entry.path());
    }
  }
  std::sort(files.begin(), files.end(),
            [](const fs::path& a, const fs::path& b) { return a.filename() < b.filename(); });
  return files;
}

FrameSequence load_sequence(const fs::path& dir, double fps) {
  if (!(fps > 0.0)) throw Error(ErrorCode::PreconditionViolation, "fps must be positive");
  const auto files = list_frames(dir);
  if (files.size() < 2) {
    throw Error(ErrorCode::NoFrames, "need at least two frames in " + dir.string());
  }
  FrameSequence seq;
  seq.fps = fps;
  seq.frames.reserve(files.size());
  for (const auto& file : files) {
    GrayFrame g = read_gray(file);
    if (!seq.frames.empty() &&
        (g.rows() != seq.frames.front().rows() || g.cols() != seq.frames.front().cols())) {
      throw Error(ErrorCode::DimensionMismatch, "frame size differs: " + file.string());
    }
    seq.frames.push_back(std::move(g));
  }
  return seq;
}

}  // namespace respicam
