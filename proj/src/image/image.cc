/*
 * Copyright 2026 The irkit Authors.
 *
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 *     https://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */

#include "irkit/image/image.h"

#include <png.h>

#include <algorithm>
#include <cmath>
#include <csetjmp>
#include <cstdio>
#include <fstream>
#include <memory>

#include "irkit/core/error.h"

namespace irkit::image {

Image::Image(int width, int height, Rgb fill) : width_(width), height_(height) {
  if (width < 1 || height < 1) {
    throw ParameterError("image dimensions must be at least 1x1");
  }
  pixels_.assign(static_cast<std::size_t>(width) * static_cast<std::size_t>(height),
                 fill);
}

Image resize(const Image& img, int width, int height) {
  if (img.width() == width && img.height() == height) return img;
  Image out(width, height);
  const bool nearest = img.width() % width == 0 && img.height() % height == 0;
  if (nearest) {
    const int fx = img.width() / width;
    const int fy = img.height() / height;
    for (int y = 0; y < height; ++y) {
      for (int x = 0; x < width; ++x) {
        out.at(x, y) = img.at(x * fx + fx / 2, y * fy + fy / 2);
      }
    }
    return out;
  }
  // Bilinear with pixel-centre alignment.
  const double sx = static_cast<double>(img.width()) / width;
  const double sy = static_cast<double>(img.height()) / height;
  for (int y = 0; y < height; ++y) {
    const double src_y = std::clamp((y + 0.5) * sy - 0.5, 0.0,
                                    static_cast<double>(img.height() - 1));
    const int y0 = static_cast<int>(std::floor(src_y));
    const int y1 = std::min(y0 + 1, img.height() - 1);
    const double wy = src_y - y0;
    for (int x = 0; x < width; ++x) {
      const double src_x = std::clamp((x + 0.5) * sx - 0.5, 0.0,
                                      static_cast<double>(img.width() - 1));
      const int x0 = static_cast<int>(std::floor(src_x));
      const int x1 = std::min(x0 + 1, img.width() - 1);
      const double wx = src_x - x0;
      auto lerp = [&](auto channel) {
        const double top = (1 - wx) * channel(img.at(x0, y0)) +
                           wx * channel(img.at(x1, y0));
        const double bottom = (1 - wx) * channel(img.at(x0, y1)) +
                              wx * channel(img.at(x1, y1));
        const double v = (1 - wy) * top + wy * bottom;
        return static_cast<std::uint8_t>(std::clamp(std::floor(v + 0.5), 0.0, 255.0));
      };
      out.at(x, y) = {lerp([](const Rgb& p) { return double(p.r); }),
                      lerp([](const Rgb& p) { return double(p.g); }),
                      lerp([](const Rgb& p) { return double(p.b); })};
    }
  }
  return out;
}

namespace {

Image from_png_image(png_image& info, const std::vector<std::uint8_t>& buffer) {
  Image out(static_cast<int>(info.width), static_cast<int>(info.height));
  for (std::size_t i = 0; i < out.pixel_count(); ++i) {
    out[i] = {buffer[3 * i], buffer[3 * i + 1], buffer[3 * i + 2]};
  }
  return out;
}

std::vector<std::uint8_t> to_buffer(const Image& img) {
  std::vector<std::uint8_t> buffer(img.pixel_count() * 3);
  for (std::size_t i = 0; i < img.pixel_count(); ++i) {
    buffer[3 * i] = img[i].r;
    buffer[3 * i + 1] = img[i].g;
    buffer[3 * i + 2] = img[i].b;
  }
  return buffer;
}

Image finish_read(png_image& info, const std::string& what) {
  info.format = PNG_FORMAT_RGB;
  std::vector<std::uint8_t> buffer(PNG_IMAGE_SIZE(info));
  if (!png_image_finish_read(&info, nullptr, buffer.data(), 0, nullptr)) {
    const std::string msg = info.message;
    png_image_free(&info);
    throw IoError("cannot decode PNG " + what + ": " + msg);
  }
  return from_png_image(info, buffer);
}

}  // namespace

Image read_png(const std::filesystem::path& path) {
  png_image info{};
  info.version = PNG_IMAGE_VERSION;
  if (!png_image_begin_read_from_file(&info, path.c_str())) {
    throw IoError("cannot read PNG '" + path.string() + "': " + info.message);
  }
  return finish_read(info, "'" + path.string() + "'");
}

Image decode_png(const std::vector<std::uint8_t>& bytes) {
  png_image info{};
  info.version = PNG_IMAGE_VERSION;
  if (!png_image_begin_read_from_memory(&info, bytes.data(), bytes.size())) {
    throw IoError(std::string("cannot decode PNG buffer: ") + info.message);
  }
  return finish_read(info, "buffer");
}

std::vector<std::uint8_t> encode_png(const Image& img) {
  png_image info{};
  info.version = PNG_IMAGE_VERSION;
  info.width = static_cast<png_uint_32>(img.width());
  info.height = static_cast<png_uint_32>(img.height());
  info.format = PNG_FORMAT_RGB;
  const auto buffer = to_buffer(img);
  png_alloc_size_t size = 0;
  if (!png_image_write_to_memory(&info, nullptr, &size, 0, buffer.data(), 0,
                                 nullptr)) {
    throw IoError(std::string("cannot size PNG: ") + info.message);
  }
  std::vector<std::uint8_t> out(size);
  if (!png_image_write_to_memory(&info, out.data(), &size, 0, buffer.data(), 0,
                                 nullptr)) {
    throw IoError(std::string("cannot encode PNG: ") + info.message);
  }
  out.resize(size);
  return out;
}

void write_png(const Image& img, const std::filesystem::path& path) {
  const auto bytes = encode_png(img);
  std::ofstream out(path, std::ios::binary);
  if (!out) throw IoError("cannot write '" + path.string() + "'");
  out.write(reinterpret_cast<const char*>(bytes.data()),
            static_cast<std::streamsize>(bytes.size()));
}

namespace {

struct FileCloser {
  void operator()(std::FILE* f) const {
    if (f) std::fclose(f);
  }
};

}  // namespace

void write_label_png(const std::vector<std::uint16_t>& labels, int width,
                     int height, const std::filesystem::path& path) {
  if (labels.size() != static_cast<std::size_t>(width) * height) {
    throw ShapeError("label map size differs from width*height");
  }
  std::unique_ptr<std::FILE, FileCloser> file(std::fopen(path.c_str(), "wb"));
  if (!file) throw IoError("cannot write '" + path.string() + "'");
  png_structp png =
      png_create_write_struct(PNG_LIBPNG_VER_STRING, nullptr, nullptr, nullptr);
  png_infop info = png ? png_create_info_struct(png) : nullptr;
  if (!png || !info) {
    png_destroy_write_struct(&png, &info);
    throw IoError("libpng initialisation failed");
  }
  std::vector<std::uint8_t> row(static_cast<std::size_t>(width) * 2);
  if (setjmp(png_jmpbuf(png))) {
    png_destroy_write_struct(&png, &info);
    throw IoError("cannot encode label map '" + path.string() + "'");
  }
  png_init_io(png, file.get());
  png_set_IHDR(png, info, static_cast<png_uint_32>(width),
               static_cast<png_uint_32>(height), 16, PNG_COLOR_TYPE_GRAY,
               PNG_INTERLACE_NONE, PNG_COMPRESSION_TYPE_DEFAULT,
               PNG_FILTER_TYPE_DEFAULT);
  png_write_info(png, info);
  for (int y = 0; y < height; ++y) {
    for (int x = 0; x < width; ++x) {
      const std::uint16_t v = labels[static_cast<std::size_t>(y) * width + x];
      row[2 * x] = static_cast<std::uint8_t>(v >> 8);
      row[2 * x + 1] = static_cast<std::uint8_t>(v & 0xFF);
    }
    png_write_row(png, row.data());
  }
  png_write_end(png, nullptr);
  png_destroy_write_struct(&png, &info);
}

std::vector<std::uint16_t> read_label_png(const std::filesystem::path& path,
                                          int* width, int* height) {
  std::unique_ptr<std::FILE, FileCloser> file(std::fopen(path.c_str(), "rb"));
  if (!file) throw IoError("cannot open '" + path.string() + "'");
  png_structp png =
      png_create_read_struct(PNG_LIBPNG_VER_STRING, nullptr, nullptr, nullptr);
  png_infop info = png ? png_create_info_struct(png) : nullptr;
  if (!png || !info) {
    png_destroy_read_struct(&png, &info, nullptr);
    throw IoError("libpng initialisation failed");
  }
  std::vector<std::uint16_t> labels;
  std::vector<std::uint8_t> row;
  if (setjmp(png_jmpbuf(png))) {
    png_destroy_read_struct(&png, &info, nullptr);
    throw IoError("cannot decode label map '" + path.string() + "'");
  }
  png_init_io(png, file.get());
  png_read_info(png, info);
  const auto w = png_get_image_width(png, info);
  const auto h = png_get_image_height(png, info);
  if (png_get_bit_depth(png, info) != 16 ||
      png_get_color_type(png, info) != PNG_COLOR_TYPE_GRAY) {
    png_destroy_read_struct(&png, &info, nullptr);
    throw IoError("'" + path.string() + "' is not a 16-bit label map");
  }
  labels.resize(static_cast<std::size_t>(w) * h);
  row.resize(static_cast<std::size_t>(w) * 2);
  for (png_uint_32 y = 0; y < h; ++y) {
    png_read_row(png, row.data(), nullptr);
    for (png_uint_32 x = 0; x < w; ++x) {
      labels[static_cast<std::size_t>(y) * w + x] =
          static_cast<std::uint16_t>((row[2 * x] << 8) | row[2 * x + 1]);
    }
  }
  png_destroy_read_struct(&png, &info, nullptr);
  *width = static_cast<int>(w);
  *height = static_cast<int>(h);
  return labels;
}

}  // namespace irkit::image
