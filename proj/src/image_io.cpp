#include <png.h>

#include <algorithm>
#include <cctype>
#include <cstring>
#include <fstream>
#include <sstream>
#include <string>

#include "fisheye/error.hpp"
#include "fisheye/io.hpp"

namespace fisheye {

namespace {

std::string lower_extension(const std::filesystem::path& path) {
  std::string ext = path.extension().string();
  std::transform(ext.begin(), ext.end(), ext.begin(),
                 [](unsigned char c) { return std::tolower(c); });
  return ext;
}

Image read_png(const std::filesystem::path& path) {
  png_image png;
  std::memset(&png, 0, sizeof(png));
  png.version = PNG_IMAGE_VERSION;
  if (!png_image_begin_read_from_file(&png, path.c_str())) {
    throw Error(Errc::kIo, path.string() + ": " + png.message);
  }
  png.format = PNG_FORMAT_RGB;
  if (png.width < 2 || png.height < 2) {
    png_image_free(&png);
    throw Error(Errc::kIo, path.string() + ": image smaller than 2x2");
  }
  Image img(static_cast<int>(png.height), static_cast<int>(png.width));
  if (!png_image_finish_read(&png, nullptr, img.data(), 0, nullptr)) {
    const std::string msg = png.message;
    png_image_free(&png);
    throw Error(Errc::kIo, path.string() + ": " + msg);
  }
  return img;
}

void write_png(const Image& img, const std::filesystem::path& path) {
  png_image png;
  std::memset(&png, 0, sizeof(png));
  png.version = PNG_IMAGE_VERSION;
  png.width = static_cast<png_uint_32>(img.width());
  png.height = static_cast<png_uint_32>(img.height());
  png.format = PNG_FORMAT_RGB;
  if (!png_image_write_to_file(&png, path.c_str(), 0, img.data(), 0, nullptr)) {
    throw Error(Errc::kIo, path.string() + ": " + png.message);
  }
}

// P6 with maxval 255; comments in the header are skipped.
Image read_ppm(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(Errc::kIo, "cannot open " + path.string());
  auto next_token = [&]() {
    std::string tok;
    while (in) {
      const int c = in.get();
      if (c == '#') {
        std::string skip;
        std::getline(in, skip);
      } else if (std::isspace(c)) {
        if (!tok.empty()) break;
      } else if (c != EOF) {
        tok.push_back(static_cast<char>(c));
      }
    }
    return tok;
  };
  if (next_token() != "P6") throw Error(Errc::kIo, path.string() + ": not a P6 PPM");
  int width = 0, height = 0, maxval = 0;
  try {
    width = std::stoi(next_token());
    height = std::stoi(next_token());
    maxval = std::stoi(next_token());
  } catch (const std::exception&) {
    throw Error(Errc::kIo, path.string() + ": malformed PPM header");
  }
  if (maxval != 255 || width < 2 || height < 2) {
    throw Error(Errc::kIo, path.string() + ": unsupported PPM");
  }
  Image img(height, width);
  in.read(reinterpret_cast<char*>(img.data()),
          static_cast<std::streamsize>(img.pixels().size()));
  if (in.gcount() != static_cast<std::streamsize>(img.pixels().size())) {
    throw Error(Errc::kIo, path.string() + ": truncated PPM");
  }
  return img;
}

void write_ppm(const Image& img, const std::filesystem::path& path) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw Error(Errc::kIo, "cannot create " + path.string());
  out << "P6\n" << img.width() << ' ' << img.height() << "\n255\n";
  out.write(reinterpret_cast<const char*>(img.data()),
            static_cast<std::streamsize>(img.pixels().size()));
  if (!out) throw Error(Errc::kIo, "write failed: " + path.string());
}

}  // namespace

Image read_image(const std::filesystem::path& path) {
  const std::string ext = lower_extension(path);
  if (ext == ".ppm") return read_ppm(path);
  return read_png(path);
}

void write_image(const Image& img, const std::filesystem::path& path) {
  const std::string ext = lower_extension(path);
  if (ext == ".ppm") {
    write_ppm(img, path);
  } else if (ext == ".png") {
    write_png(img, path);
  } else {
    throw Error(Errc::kIo, "unsupported image extension: " + path.string());
  }
}

Mask read_mask(const std::filesystem::path& path) {
  const Image img = read_image(path);
  Mask mask(img.height(), img.width(), 1);
  for (int y = 0; y < img.height(); ++y) {
    for (int x = 0; x < img.width(); ++x) {
      mask.at(y, x) = img.at(y, x, 0) || img.at(y, x, 1) || img.at(y, x, 2);
    }
  }
  return mask;
}

}  // namespace fisheye
