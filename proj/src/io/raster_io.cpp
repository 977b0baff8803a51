#include "shipprior/raster_io.hpp"

#include <png.h>

#include <algorithm>
#include <bit>
#include <cmath>
#include <cstdio>
#include <cstring>
#include <fstream>
#include <memory>
#include <sstream>

namespace shipprior::io {

namespace {

namespace fs = std::filesystem;

std::string lower_ext(const fs::path& p) {
    std::string e = p.extension().string();
    std::transform(e.begin(), e.end(), e.begin(), [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
    return e;
}

std::vector<unsigned char> read_bytes(const fs::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw InputError("cannot open " + path.string());
    return {std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
}

// ---- PNM -------------------------------------------------------------------

class PnmCursor {
public:
    PnmCursor(const std::vector<unsigned char>& bytes, const fs::path& path) : bytes_(bytes), path_(path) {}

    void skip_space_and_comments() {
        while (pos_ < bytes_.size()) {
            if (bytes_[pos_] == '#') {
                while (pos_ < bytes_.size() && bytes_[pos_] != '\n') ++pos_;
            } else if (std::isspace(bytes_[pos_])) {
                ++pos_;
            } else {
                break;
            }
        }
    }

    long next_int() {
        skip_space_and_comments();
        long v = 0;
        std::size_t start = pos_;
        while (pos_ < bytes_.size() && std::isdigit(bytes_[pos_])) v = v * 10 + (bytes_[pos_++] - '0');
        if (pos_ == start) throw InputError("malformed PNM header in " + path_.string());
        return v;
    }

    std::size_t pos() const { return pos_; }
    void advance(std::size_t n) { pos_ += n; }

private:
    const std::vector<unsigned char>& bytes_;
    const fs::path& path_;
    std::size_t pos_ = 2;
};

Raster read_pnm(const std::vector<unsigned char>& bytes, const fs::path& path) {
    const char kind = static_cast<char>(bytes[1]);
    if (kind != '2' && kind != '5' && kind != '6') {
        throw InputError(path.string() + ": only P2, P5 and P6 PNM files are supported");
    }
    PnmCursor cur(bytes, path);
    Raster r;
    r.width = static_cast<int>(cur.next_int());
    r.height = static_cast<int>(cur.next_int());
    const long maxval = cur.next_int();
    if (r.width <= 0 || r.height <= 0 || maxval <= 0 || maxval > 65535) {
        throw InputError(path.string() + ": invalid PGM dimensions or maxval");
    }
    r.bit_depth = maxval > 255 ? 16 : 8;
    r.channels = kind == '6' ? 3 : 1;
    const std::size_t n = static_cast<std::size_t>(r.width) * r.height * r.channels;
    r.samples.resize(n);
    if (kind == '2') {
        for (std::size_t i = 0; i < n; ++i) r.samples[i] = static_cast<std::uint16_t>(cur.next_int());
        return r;
    }
    cur.advance(1);  // single whitespace after maxval
    const std::size_t bps = r.bit_depth == 16 ? 2 : 1;
    if (bytes.size() < cur.pos() + n * bps) throw InputError(path.string() + ": truncated PGM data");
    const unsigned char* p = bytes.data() + cur.pos();
    for (std::size_t i = 0; i < n; ++i) {
        r.samples[i] = bps == 2 ? static_cast<std::uint16_t>((p[2 * i] << 8) | p[2 * i + 1]) : p[i];
    }
    return r;
}

void write_pnm(const fs::path& path, const Raster& r) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw InputError("cannot write " + path.string());
    const int maxval = r.bit_depth == 16 ? 65535 : 255;
    out << (r.channels == 3 ? "P6" : "P5") << '\n' << r.width << ' ' << r.height << '\n' << maxval << '\n';
    std::vector<unsigned char> buf;
    buf.reserve(r.samples.size() * (r.bit_depth == 16 ? 2 : 1));
    for (auto s : r.samples) {
        if (r.bit_depth == 16) buf.push_back(static_cast<unsigned char>(s >> 8));
        buf.push_back(static_cast<unsigned char>(s & 0xff));
    }
    out.write(reinterpret_cast<const char*>(buf.data()), static_cast<std::streamsize>(buf.size()));
}

// ---- PNG -------------------------------------------------------------------

struct PngReadDeleter {
    png_structp png = nullptr;
    png_infop info = nullptr;
    ~PngReadDeleter() { png_destroy_read_struct(&png, info ? &info : nullptr, nullptr); }
};

struct MemoryReader {
    const std::vector<unsigned char>* bytes;
    std::size_t pos;
};

Raster read_png(const std::vector<unsigned char>& bytes, const fs::path& path) {
    PngReadDeleter guard;
    guard.png = png_create_read_struct(PNG_LIBPNG_VER_STRING, nullptr, nullptr, nullptr);
    if (!guard.png) throw InputError("libpng initialisation failed");
    guard.info = png_create_info_struct(guard.png);
    if (!guard.info) throw InputError("libpng initialisation failed");
    if (setjmp(png_jmpbuf(guard.png))) throw InputError(path.string() + ": corrupt PNG");

    MemoryReader src{&bytes, 0};
    png_set_read_fn(guard.png, &src, [](png_structp png, png_bytep out, png_size_t len) {
        auto* s = static_cast<MemoryReader*>(png_get_io_ptr(png));
        if (s->pos + len > s->bytes->size()) png_error(png, "truncated");
        std::memcpy(out, s->bytes->data() + s->pos, len);
        s->pos += len;
    });
    png_read_info(guard.png, guard.info);

    const auto color = png_get_color_type(guard.png, guard.info);
    int depth = png_get_bit_depth(guard.png, guard.info);
    if (color != PNG_COLOR_TYPE_GRAY && color != PNG_COLOR_TYPE_RGB && color != PNG_COLOR_TYPE_PALETTE) {
        throw InputError(path.string() + ": only grayscale or RGB PNG is supported");
    }
    if (color == PNG_COLOR_TYPE_PALETTE) {
        throw InputError(path.string() + ": palette PNG is not supported, store indices as grayscale");
    }
    if (depth < 8) {
        png_set_expand_gray_1_2_4_to_8(guard.png);
        depth = 8;
    }
    png_read_update_info(guard.png, guard.info);

    Raster r;
    r.width = static_cast<int>(png_get_image_width(guard.png, guard.info));
    r.height = static_cast<int>(png_get_image_height(guard.png, guard.info));
    r.bit_depth = depth;
    r.channels = color == PNG_COLOR_TYPE_RGB ? 3 : 1;
    const std::size_t rowbytes = png_get_rowbytes(guard.png, guard.info);
    std::vector<unsigned char> data(rowbytes * r.height);
    std::vector<png_bytep> rows(r.height);
    for (int y = 0; y < r.height; ++y) rows[y] = data.data() + rowbytes * y;
    png_read_image(guard.png, rows.data());

    const std::size_t per_row = static_cast<std::size_t>(r.width) * r.channels;
    r.samples.resize(per_row * r.height);
    for (int y = 0; y < r.height; ++y) {
        for (std::size_t i = 0; i < per_row; ++i) {
            const unsigned char* p = rows[y] + (depth == 16 ? 2 * i : i);
            r.samples[static_cast<std::size_t>(y) * per_row + i] =
                depth == 16 ? static_cast<std::uint16_t>((p[0] << 8) | p[1]) : p[0];
        }
    }
    return r;
}

void write_png(const fs::path& path, const Raster& r) {
    std::unique_ptr<FILE, int (*)(FILE*)> fp(std::fopen(path.string().c_str(), "wb"), &std::fclose);
    if (!fp) throw InputError("cannot write " + path.string());
    png_structp png = png_create_write_struct(PNG_LIBPNG_VER_STRING, nullptr, nullptr, nullptr);
    png_infop info = png ? png_create_info_struct(png) : nullptr;
    if (!png || !info) {
        png_destroy_write_struct(&png, nullptr);
        throw InputError("libpng initialisation failed");
    }
    if (setjmp(png_jmpbuf(png))) {
        png_destroy_write_struct(&png, &info);
        throw InputError("failed writing " + path.string());
    }
    png_init_io(png, fp.get());
    png_set_compression_level(png, 6);
    png_set_IHDR(png, info, static_cast<png_uint_32>(r.width), static_cast<png_uint_32>(r.height), r.bit_depth,
                 r.channels == 3 ? PNG_COLOR_TYPE_RGB : PNG_COLOR_TYPE_GRAY, PNG_INTERLACE_NONE,
                 PNG_COMPRESSION_TYPE_DEFAULT, PNG_FILTER_TYPE_DEFAULT);
    png_write_info(png, info);

    const std::size_t per_row = static_cast<std::size_t>(r.width) * r.channels;
    const std::size_t bps = r.bit_depth == 16 ? 2 : 1;
    std::vector<unsigned char> row(per_row * bps);
    for (int y = 0; y < r.height; ++y) {
        for (std::size_t i = 0; i < per_row; ++i) {
            const std::uint16_t s = r.samples[static_cast<std::size_t>(y) * per_row + i];
            if (bps == 2) {
                row[2 * i] = static_cast<unsigned char>(s >> 8);
                row[2 * i + 1] = static_cast<unsigned char>(s & 0xff);
            } else {
                row[i] = static_cast<unsigned char>(s);
            }
        }
        png_write_row(png, row.data());
    }
    png_write_end(png, nullptr);
    png_destroy_write_struct(&png, &info);
}

std::uint16_t to_sample(double v, int bit_depth) {
    const double top = bit_depth == 16 ? 65535.0 : 255.0;
    return static_cast<std::uint16_t>(std::lround(std::clamp(v, 0.0, top)));
}

}  // namespace

Raster read_raster(const fs::path& path) {
    const auto bytes = read_bytes(path);
    static constexpr unsigned char png_sig[8] = {0x89, 'P', 'N', 'G', '\r', '\n', 0x1a, '\n'};
    if (bytes.size() >= 8 && std::equal(png_sig, png_sig + 8, bytes.begin())) return read_png(bytes, path);
    if (bytes.size() >= 2 && bytes[0] == 'P') return read_pnm(bytes, path);
    throw InputError(path.string() + ": unrecognised raster format (expected PNG or PNM)");
}

void write_raster(const fs::path& path, const Raster& raster) {
    if (lower_ext(path) == ".png") {
        write_png(path, raster);
    } else {
        write_pnm(path, raster);
    }
}

GrayImage to_gray(const Raster& raster) {
    if (raster.channels != 1) throw InputError("expected a single-channel raster");
    std::vector<double> data(raster.samples.begin(), raster.samples.end());
    return GrayImage(raster.width, raster.height, std::move(data));
}

Raster from_gray(const GrayImage& img, int bit_depth) {
    Raster r{img.width(), img.height(), 1, bit_depth, {}};
    r.samples.reserve(img.size());
    for (double v : img.pixels()) r.samples.push_back(to_sample(v, bit_depth));
    return r;
}

GrayImage load_gray(const fs::path& path) {
    const Raster r = read_raster(path);
    if (r.channels != 1) throw InputError(path.string() + ": color images are not supported");
    return to_gray(r);
}

SceneMask load_scene_mask(const fs::path& path) {
    const Raster r = read_raster(path);
    if (r.channels != 1) throw InputError(path.string() + ": scene mask must be single-channel");
    std::vector<std::uint8_t> labels;
    labels.reserve(r.samples.size());
    for (auto s : r.samples) {
        if (s > 2) throw InputError(path.string() + ": scene mask value " + std::to_string(s) + " outside {0,1,2}");
        labels.push_back(static_cast<std::uint8_t>(s));
    }
    return SceneMask(r.width, r.height, std::move(labels));
}

Raster prior_raster(const PriorMap& prior) {
    Raster r{prior.width, prior.height, 1, 16, {}};
    r.samples.reserve(prior.values.size());
    for (double v : prior.values) r.samples.push_back(static_cast<std::uint16_t>(quantize_response(v, 65535)));
    return r;
}

Raster encoded_raster(const EncodedPrior& enc) {
    Raster r{enc.width, enc.height, 3, 8, {}};
    r.samples.reserve(enc.low.size() * 3);
    const auto intensity = enc.intensity.pixels();
    for (std::size_t k = 0; k < enc.low.size(); ++k) {
        r.samples.push_back(to_sample(intensity[k], 8));
        r.samples.push_back(static_cast<std::uint16_t>(std::min<std::uint32_t>(enc.low[k], 255)));
        r.samples.push_back(static_cast<std::uint16_t>(std::min<std::uint32_t>(enc.high[k], 255)));
    }
    return r;
}

Raster trimap_raster(const Trimap& t) {
    Raster r{t.width(), t.height(), 1, 8, {}};
    r.samples.assign(t.labels().begin(), t.labels().end());
    return r;
}

void write_pfm_frames(const fs::path& path, const std::vector<GrayImage>& frames) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw InputError("cannot write " + path.string());
    for (const auto& f : frames) {
        out << "Pf\n" << f.width() << ' ' << f.height() << "\n-1.0\n";
        std::vector<unsigned char> buf(static_cast<std::size_t>(f.width()) * 4);
        for (int y = f.height() - 1; y >= 0; --y) {
            for (int x = 0; x < f.width(); ++x) {
                const auto bits = std::bit_cast<std::uint32_t>(static_cast<float>(f.at(x, y)));
                for (int b = 0; b < 4; ++b) buf[4 * x + b] = static_cast<unsigned char>((bits >> (8 * b)) & 0xff);
            }
            out.write(reinterpret_cast<const char*>(buf.data()), static_cast<std::streamsize>(buf.size()));
        }
    }
}

std::vector<GrayImage> read_pfm_frames(const fs::path& path) {
    const auto bytes = read_bytes(path);
    std::vector<GrayImage> frames;
    std::size_t pos = 0;
    auto token = [&]() {
        while (pos < bytes.size() && std::isspace(bytes[pos])) ++pos;
        std::string t;
        while (pos < bytes.size() && !std::isspace(bytes[pos])) t.push_back(static_cast<char>(bytes[pos++]));
        return t;
    };
    while (true) {
        while (pos < bytes.size() && std::isspace(bytes[pos])) ++pos;
        if (pos >= bytes.size()) break;
        if (token() != "Pf") throw InputError(path.string() + ": expected a grayscale PFM frame");
        const int w = std::stoi(token());
        const int h = std::stoi(token());
        const double scale = std::stod(token());
        ++pos;
        if (scale >= 0.0) throw InputError(path.string() + ": big-endian PFM is not supported");
        if (bytes.size() < pos + static_cast<std::size_t>(w) * h * 4) throw InputError(path.string() + ": truncated PFM");
        GrayImage img(w, h);
        for (int y = h - 1; y >= 0; --y) {
            for (int x = 0; x < w; ++x) {
                std::uint32_t bits = 0;
                for (int b = 0; b < 4; ++b) bits |= static_cast<std::uint32_t>(bytes[pos++]) << (8 * b);
                img.at(x, y) = std::bit_cast<float>(bits);
            }
        }
        frames.push_back(std::move(img));
    }
    return frames;
}

bool is_raster_path(const fs::path& path) {
    const auto e = lower_ext(path);
    return e == ".png" || e == ".pgm";
}

}  // namespace shipprior::io
