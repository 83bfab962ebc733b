#include "roadrand/image_io.hpp"

#include <csetjmp>
#include <cstdio>
#include <cstdlib>
#include <cstring>

#include <png.h>

#include "roadrand/error.hpp"

namespace roadrand::image_io {
namespace {

// libpng reports errors with longjmp. The setjmp frames below only touch
// memory reachable through the state struct, never automatic C++ objects.
struct PngState {
  std::FILE* fp = nullptr;
  png_structp png = nullptr;
  png_infop info = nullptr;
  unsigned char* pixels = nullptr;
  png_bytep* rows = nullptr;
  png_uint_32 width = 0;
  png_uint_32 height = 0;
  char message[256] = {0};
};

void on_png_error(png_structp png, png_const_charp msg) {
  auto* state = static_cast<PngState*>(png_get_error_ptr(png));
  std::snprintf(state->message, sizeof(state->message), "%s", msg);
  png_longjmp(png, 1);
}

void on_png_warning(png_structp, png_const_charp) {}

bool read_indexed(PngState* s) {
  if (setjmp(png_jmpbuf(s->png))) return false;
  png_init_io(s->png, s->fp);
  png_read_info(s->png, s->info);
  int bit_depth = 0;
  int color_type = 0;
  png_get_IHDR(s->png, s->info, &s->width, &s->height, &bit_depth, &color_type,
               nullptr, nullptr, nullptr);
  if (color_type != PNG_COLOR_TYPE_PALETTE && color_type != PNG_COLOR_TYPE_GRAY) {
    std::snprintf(s->message, sizeof(s->message),
                  "label PNG must be palette or grayscale (color type %d)", color_type);
    return false;
  }
  if (bit_depth > 8) {
    std::snprintf(s->message, sizeof(s->message),
                  "label PNG must be at most 8 bits per pixel");
    return false;
  }
  png_set_packing(s->png);
  png_read_update_info(s->png, s->info);
  s->pixels = static_cast<unsigned char*>(std::malloc(std::size_t{s->width} * s->height));
  s->rows = static_cast<png_bytep*>(std::malloc(sizeof(png_bytep) * s->height));
  if (!s->pixels || !s->rows) {
    std::snprintf(s->message, sizeof(s->message), "out of memory");
    return false;
  }
  for (png_uint_32 y = 0; y < s->height; ++y) s->rows[y] = s->pixels + std::size_t{y} * s->width;
  png_read_image(s->png, s->rows);
  png_read_end(s->png, nullptr);
  return true;
}

bool write_indexed(PngState* s, const png_color* plte) {
  if (setjmp(png_jmpbuf(s->png))) return false;
  png_init_io(s->png, s->fp);
  png_set_IHDR(s->png, s->info, s->width, s->height, 8, PNG_COLOR_TYPE_PALETTE,
               PNG_INTERLACE_NONE, PNG_COMPRESSION_TYPE_DEFAULT,
               PNG_FILTER_TYPE_DEFAULT);
  png_set_PLTE(s->png, s->info, plte, 256);
  png_set_compression_level(s->png, 6);
  png_write_info(s->png, s->info);
  png_write_image(s->png, s->rows);
  png_write_end(s->png, nullptr);
  return true;
}

std::string path_string(const std::filesystem::path& p) { return p.string(); }

}  // namespace

void write_label_png(const std::filesystem::path& path,
                     const labelmap::LabelMap& label,
                     const std::vector<Rgb>& colors) {
  std::vector<png_color> plte(256, png_color{0, 0, 0});
  for (std::size_t i = 0; i < colors.size() && i < 256; ++i) {
    plte[i] = {colors[i][0], colors[i][1], colors[i][2]};
  }
  std::vector<png_bytep> rows(label.height());
  auto* base = const_cast<unsigned char*>(label.data().data());
  for (int y = 0; y < label.height(); ++y) {
    rows[y] = base + static_cast<std::size_t>(y) * label.width();
  }

  PngState s;
  s.fp = std::fopen(path_string(path).c_str(), "wb");
  if (!s.fp) throw Error(ErrorCode::kIo, "cannot open " + path_string(path) + " for writing");
  s.png = png_create_write_struct(PNG_LIBPNG_VER_STRING, &s, on_png_error, on_png_warning);
  s.info = s.png ? png_create_info_struct(s.png) : nullptr;
  s.width = static_cast<png_uint_32>(label.width());
  s.height = static_cast<png_uint_32>(label.height());
  s.rows = rows.data();
  const bool ok = s.png && s.info && write_indexed(&s, plte.data());
  png_destroy_write_struct(&s.png, &s.info);
  const bool closed = std::fclose(s.fp) == 0;
  if (!ok || !closed) {
    throw Error(ErrorCode::kIo, "failed to write " + path_string(path) + ": " + s.message);
  }
}

labelmap::LabelMap read_label_png(const std::filesystem::path& path) {
  PngState s;
  s.fp = std::fopen(path_string(path).c_str(), "rb");
  if (!s.fp) throw Error(ErrorCode::kIo, "cannot open " + path_string(path));
  s.png = png_create_read_struct(PNG_LIBPNG_VER_STRING, &s, on_png_error, on_png_warning);
  s.info = s.png ? png_create_info_struct(s.png) : nullptr;
  const bool ok = s.png && s.info && read_indexed(&s);
  png_destroy_read_struct(&s.png, &s.info, nullptr);
  std::fclose(s.fp);
  std::vector<ClassId> data;
  if (ok) data.assign(s.pixels, s.pixels + std::size_t{s.width} * s.height);
  std::free(s.pixels);
  std::free(s.rows);
  if (!ok) {
    throw Error(ErrorCode::kIo, "failed to read label " + path_string(path) + ": " + s.message);
  }
  return labelmap::LabelMap(static_cast<int>(s.width), static_cast<int>(s.height),
                            std::move(data));
}

void write_rgb_png(const std::filesystem::path& path, const labelmap::RgbImage& image) {
  png_image img;
  std::memset(&img, 0, sizeof(img));
  img.version = PNG_IMAGE_VERSION;
  img.width = static_cast<png_uint_32>(image.width());
  img.height = static_cast<png_uint_32>(image.height());
  img.format = PNG_FORMAT_RGB;
  if (!png_image_write_to_file(&img, path_string(path).c_str(), 0,
                               image.bytes().data(), 0, nullptr)) {
    const std::string msg = img.message;
    png_image_free(&img);
    throw Error(ErrorCode::kIo, "failed to write " + path_string(path) + ": " + msg);
  }
}

labelmap::RgbImage read_rgb_png(const std::filesystem::path& path) {
  png_image img;
  std::memset(&img, 0, sizeof(img));
  img.version = PNG_IMAGE_VERSION;
  if (!png_image_begin_read_from_file(&img, path_string(path).c_str())) {
    throw Error(ErrorCode::kIo, "cannot read " + path_string(path) + ": " + img.message);
  }
  img.format = PNG_FORMAT_RGB;
  labelmap::RgbImage out(static_cast<int>(img.width), static_cast<int>(img.height));
  if (!png_image_finish_read(&img, nullptr, out.bytes().data(), 0, nullptr)) {
    const std::string msg = img.message;
    png_image_free(&img);
    throw Error(ErrorCode::kIo, "failed to decode " + path_string(path) + ": " + msg);
  }
  return out;
}

}  // namespace roadrand::image_io
