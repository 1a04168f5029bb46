#include "fixsearch/image_io.hpp"

#include <cmath>
#include <cstdint>
#include <cstring>
#include <fstream>
#include <sstream>

#include <png.h>

#include <json.hpp>

#include "fixsearch/errors.hpp"
#include "fixsearch/peaks.hpp"

namespace fixsearch {

namespace {

bool has_suffix(const std::string& s, const std::string& suffix) {
    return s.size() >= suffix.size() &&
           s.compare(s.size() - suffix.size(), suffix.size(), suffix) == 0;
}

std::string sidecar_path(const std::string& path) { return path + ".json"; }

// Skips PGM header whitespace and '#' comment lines.
int next_header_token(std::istream& in) {
    int c = in.get();
    while (c != EOF) {
        if (c == '#') {
            while (c != EOF && c != '\n') c = in.get();
        } else if (!std::isspace(c)) {
            break;
        }
        c = in.get();
    }
    return c;
}

long read_header_int(std::istream& in, const std::string& path) {
    int c = next_header_token(in);
    if (c == EOF || !std::isdigit(c)) throw DataError("malformed PGM header in " + path);
    long v = 0;
    while (c != EOF && std::isdigit(c)) {
        v = v * 10 + (c - '0');
        c = in.get();
    }
    if (c != EOF) in.unget();
    return v;
}

struct PgmHeader {
    int width = 0, height = 0;
    long maxval = 0;
};

PgmHeader read_pgm_header(std::ifstream& in, const std::string& path) {
    char magic[2] = {0, 0};
    in.read(magic, 2);
    if (!in || magic[0] != 'P' || magic[1] != '5')
        throw DataError("not a binary PGM (P5) file: " + path);
    PgmHeader h;
    h.width = static_cast<int>(read_header_int(in, path));
    h.height = static_cast<int>(read_header_int(in, path));
    h.maxval = read_header_int(in, path);
    if (h.width < 1 || h.height < 1 || h.maxval < 1 || h.maxval > 65535)
        throw DataError("malformed PGM header in " + path);
    int c = in.get(); // single whitespace before the raster
    if (c == EOF || !std::isspace(c)) throw DataError("malformed PGM header in " + path);
    return h;
}

GrayImage load_pgm(const std::string& path, int expected_bits) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw IoError("cannot open " + path);
    const PgmHeader h = read_pgm_header(in, path);
    const int bits = h.maxval > 255 ? 16 : 8;
    if (expected_bits != 0 && bits != expected_bits)
        throw DataError("PGM sample depth mismatch in " + path);

    GrayImage img(h.width, h.height);
    const size_t n = img.size();
    if (bits == 8) {
        std::vector<uint8_t> buf(n);
        in.read(reinterpret_cast<char*>(buf.data()), static_cast<std::streamsize>(n));
        if (static_cast<size_t>(in.gcount()) != n) throw DataError("payload size mismatch in " + path);
        for (size_t i = 0; i < n; ++i) img.data[i] = buf[i];
    } else {
        std::vector<uint8_t> buf(n * 2);
        in.read(reinterpret_cast<char*>(buf.data()), static_cast<std::streamsize>(n * 2));
        if (static_cast<size_t>(in.gcount()) != n * 2) throw DataError("payload size mismatch in " + path);
        for (size_t i = 0; i < n; ++i)
            img.data[i] = static_cast<double>((buf[2 * i] << 8) | buf[2 * i + 1]); // big-endian
    }
    return img;
}

GrayImage load_raw_f32(const std::string& path) {
    std::ifstream hs(sidecar_path(path));
    if (!hs) throw IoError("cannot open header " + sidecar_path(path));
    nlohmann::json j;
    try {
        hs >> j;
    } catch (const nlohmann::json::exception& e) {
        throw DataError("malformed raw-f32 header " + sidecar_path(path) + ": " + e.what());
    }
    if (!j.contains("width") || !j.contains("height"))
        throw DataError("raw-f32 header missing width/height: " + sidecar_path(path));
    const int w = j.at("width").get<int>();
    const int h = j.at("height").get<int>();
    const double pitch = j.value("pitch_mm", 1.0);
    if (w < 1 || h < 1) throw DataError("raw-f32 header has non-positive dimensions");

    std::ifstream in(path, std::ios::binary);
    if (!in) throw IoError("cannot open " + path);
    in.seekg(0, std::ios::end);
    const auto bytes = static_cast<size_t>(in.tellg());
    in.seekg(0, std::ios::beg);
    const size_t n = static_cast<size_t>(w) * static_cast<size_t>(h);
    if (bytes != n * sizeof(float)) throw DataError("payload size mismatch in " + path);

    std::vector<float> buf(n);
    in.read(reinterpret_cast<char*>(buf.data()), static_cast<std::streamsize>(bytes));
    if (!in) throw IoError("short read on " + path);

    GrayImage img(w, h, 0.0, pitch);
    for (size_t i = 0; i < n; ++i) {
        if (!std::isfinite(buf[i])) throw DataError("non-finite value in raw payload " + path);
        img.data[i] = buf[i];
    }
    return img;
}

void draw_cross(std::vector<uint8_t>& gray, int w, int h, int cx, int cy, int radius) {
    for (int d = -radius; d <= radius; ++d) {
        if (cx + d >= 0 && cx + d < w && cy >= 0 && cy < h)
            gray[static_cast<size_t>(cy) * w + (cx + d)] = 255;
        if (cy + d >= 0 && cy + d < h && cx >= 0 && cx < w)
            gray[static_cast<size_t>(cy + d) * w + cx] = 255;
    }
}

void save_pgm8_bytes(const std::vector<uint8_t>& gray, int w, int h, const std::string& path) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw IoError("cannot write " + path);
    out << "P5\n" << w << " " << h << "\n255\n";
    out.write(reinterpret_cast<const char*>(gray.data()), static_cast<std::streamsize>(gray.size()));
    if (!out) throw IoError("write failed on " + path);
}

} // namespace

ImageFormat detect_format(const std::string& path) {
    if (has_suffix(path, ".raw")) return ImageFormat::RawF32;
    if (has_suffix(path, ".pgm")) {
        std::ifstream in(path, std::ios::binary);
        if (!in) throw IoError("cannot open " + path);
        const PgmHeader h = read_pgm_header(in, path);
        return h.maxval > 255 ? ImageFormat::Pgm16 : ImageFormat::Pgm8;
    }
    throw DataError("unknown image format (expected .pgm or .raw): " + path);
}

GrayImage load_image(const std::string& path, ImageFormat format) {
    switch (format) {
        case ImageFormat::Pgm8: return load_pgm(path, 8);
        case ImageFormat::Pgm16: return load_pgm(path, 16);
        case ImageFormat::RawF32: return load_raw_f32(path);
    }
    throw ValidationError("unhandled image format");
}

GrayImage load_image(const std::string& path) { return load_image(path, detect_format(path)); }

void save_pgm(const GrayImage& img, const std::string& path, int bits) {
    validate(img);
    if (bits != 8 && bits != 16) throw ValidationError("PGM bits must be 8 or 16");
    const double maxval = bits == 8 ? 255.0 : 65535.0;
    for (double v : img.data)
        if (v < 0.0 || v > maxval || v != std::floor(v))
            throw ValidationError("PGM save requires integer values in [0, maxval]");

    std::ofstream out(path, std::ios::binary);
    if (!out) throw IoError("cannot write " + path);
    out << "P5\n" << img.width << " " << img.height << "\n"
        << (bits == 8 ? 255 : 65535) << "\n";
    if (bits == 8) {
        std::vector<uint8_t> buf(img.size());
        for (size_t i = 0; i < buf.size(); ++i) buf[i] = static_cast<uint8_t>(img.data[i]);
        out.write(reinterpret_cast<const char*>(buf.data()), static_cast<std::streamsize>(buf.size()));
    } else {
        std::vector<uint8_t> buf(img.size() * 2);
        for (size_t i = 0; i < img.size(); ++i) {
            const auto v = static_cast<uint16_t>(img.data[i]);
            buf[2 * i] = static_cast<uint8_t>(v >> 8);
            buf[2 * i + 1] = static_cast<uint8_t>(v & 0xFF);
        }
        out.write(reinterpret_cast<const char*>(buf.data()), static_cast<std::streamsize>(buf.size()));
    }
    if (!out) throw IoError("write failed on " + path);
}

void save_raw_f32(const GrayImage& img, const std::string& path) {
    validate(img);
    std::vector<float> buf(img.size());
    for (size_t i = 0; i < buf.size(); ++i) buf[i] = static_cast<float>(img.data[i]);

    std::ofstream out(path, std::ios::binary);
    if (!out) throw IoError("cannot write " + path);
    out.write(reinterpret_cast<const char*>(buf.data()),
              static_cast<std::streamsize>(buf.size() * sizeof(float)));
    if (!out) throw IoError("write failed on " + path);

    nlohmann::json j{{"width", img.width}, {"height", img.height}, {"pitch_mm", img.pitch_mm}};
    std::ofstream hs(sidecar_path(path));
    if (!hs) throw IoError("cannot write " + sidecar_path(path));
    hs << j.dump(2) << "\n";
    if (!hs) throw IoError("write failed on " + sidecar_path(path));
}

void save_feature_map(const FeatureMap& map, const std::string& path) {
    save_raw_f32(map, path);
}

void save_overlay(const GrayImage& img, const CandidateSet& candidates,
                  const std::string& path, int marker_radius) {
    if (marker_radius < 0) throw ValidationError("marker radius must be >= 0");
    std::vector<uint8_t> gray = normalize_to_u8(img);
    for (const Candidate& c : candidates.candidates)
        draw_cross(gray, img.width, img.height, c.x, c.y, marker_radius);
    if (has_suffix(path, ".png"))
        save_png8(gray, img.width, img.height, path);
    else
        save_pgm8_bytes(gray, img.width, img.height, path);
}

void save_png8(const std::vector<uint8_t>& gray, int w, int h, const std::string& path) {
    FILE* fp = std::fopen(path.c_str(), "wb");
    if (!fp) throw IoError("cannot write " + path);

    png_structp png = png_create_write_struct(PNG_LIBPNG_VER_STRING, nullptr, nullptr, nullptr);
    png_infop info = png ? png_create_info_struct(png) : nullptr;
    if (!png || !info) {
        if (png) png_destroy_write_struct(&png, &info);
        std::fclose(fp);
        throw IoError("libpng initialization failed");
    }
    if (setjmp(png_jmpbuf(png))) {
        png_destroy_write_struct(&png, &info);
        std::fclose(fp);
        throw IoError("libpng write failed on " + path);
    }

    png_init_io(png, fp);
    png_set_IHDR(png, info, static_cast<png_uint_32>(w), static_cast<png_uint_32>(h), 8,
                 PNG_COLOR_TYPE_GRAY, PNG_INTERLACE_NONE, PNG_COMPRESSION_TYPE_DEFAULT,
                 PNG_FILTER_TYPE_DEFAULT);
    png_write_info(png, info);
    std::vector<png_bytep> rows(static_cast<size_t>(h));
    for (int y = 0; y < h; ++y)
        rows[y] = const_cast<png_bytep>(gray.data() + static_cast<size_t>(y) * w);
    png_write_image(png, rows.data());
    png_write_end(png, nullptr);
    png_destroy_write_struct(&png, &info);
    std::fclose(fp);
}

} // namespace fixsearch
