#include "faceq/image_io.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <memory>
#include <stdexcept>
#include <vector>

#include <png.h>

namespace faceq {

namespace {

std::string lower_extension(const std::string& path)
{
    const std::size_t dot = path.find_last_of('.');
    if (dot == std::string::npos)
        return {};
    std::string ext = path.substr(dot);
    std::transform(ext.begin(), ext.end(), ext.begin(),
                   [](unsigned char ch) { return static_cast<char>(std::tolower(ch)); });
    return ext;
}

int pgm_next_token(std::istream& in)
{
    // Skips whitespace and '#' comment lines, then reads one decimal value.
    for (;;) {
        const int ch = in.peek();
        if (ch == EOF)
            throw std::runtime_error("pgm: truncated header");
        if (std::isspace(ch)) {
            in.get();
            continue;
        }
        if (ch == '#') {
            std::string line;
            std::getline(in, line);
            continue;
        }
        break;
    }
    int value = 0;
    if (!(in >> value))
        throw std::runtime_error("pgm: malformed header value");
    return value;
}

GrayImage read_pgm(const std::string& path)
{
    std::ifstream in(path, std::ios::binary);
    if (!in)
        throw std::runtime_error("cannot open " + path);
    char magic[2] = {0, 0};
    in.read(magic, 2);
    if (magic[0] != 'P' || (magic[1] != '5' && magic[1] != '2'))
        throw std::runtime_error("pgm: unsupported magic in " + path);
    const bool binary = magic[1] == '5';

    const int width = pgm_next_token(in);
    const int height = pgm_next_token(in);
    const int maxval = pgm_next_token(in);
    if (width < 1 || height < 1)
        throw std::runtime_error("pgm: bad dimensions in " + path);
    if (maxval < 1 || maxval > 255)
        throw std::runtime_error("pgm: only 8-bit files supported: " + path);

    GrayImage img(width, height);
    const std::size_t count = img.pixels.size();
    if (binary) {
        in.get();
        std::vector<unsigned char> raw(count);
        in.read(reinterpret_cast<char*>(raw.data()), static_cast<std::streamsize>(count));
        if (static_cast<std::size_t>(in.gcount()) != count)
            throw std::runtime_error("pgm: truncated pixel data in " + path);
        for (std::size_t i = 0; i < count; ++i)
            img.pixels[i] = static_cast<double>(raw[i]);
    } else {
        for (std::size_t i = 0; i < count; ++i) {
            int value = 0;
            if (!(in >> value))
                throw std::runtime_error("pgm: truncated pixel data in " + path);
            if (value < 0 || value > maxval)
                throw std::runtime_error("pgm: sample out of range in " + path);
            img.pixels[i] = static_cast<double>(value);
        }
    }
    return img;
}

// Buffers live in this context object so the error path (libpng longjmps back
// to the setjmp point, where we throw) unwinds them normally.
struct PngReadCtx {
    png_structp png = nullptr;
    png_infop info = nullptr;
    std::FILE* file = nullptr;
    std::vector<unsigned char> data;
    std::vector<png_bytep> rows;
    ~PngReadCtx()
    {
        if (png)
            png_destroy_read_struct(&png, info ? &info : nullptr, nullptr);
        if (file)
            std::fclose(file);
    }
};

GrayImage read_png(const std::string& path)
{
    PngReadCtx ctx;
    ctx.file = std::fopen(path.c_str(), "rb");
    if (!ctx.file)
        throw std::runtime_error("cannot open " + path);
    ctx.png = png_create_read_struct(PNG_LIBPNG_VER_STRING, nullptr, nullptr, nullptr);
    if (!ctx.png)
        throw std::runtime_error("png: allocation failure");
    ctx.info = png_create_info_struct(ctx.png);
    if (!ctx.info)
        throw std::runtime_error("png: allocation failure");
    if (setjmp(png_jmpbuf(ctx.png)))
        throw std::runtime_error("png: failed to decode " + path);

    png_init_io(ctx.png, ctx.file);
    png_read_info(ctx.png, ctx.info);

    const png_uint_32 width = png_get_image_width(ctx.png, ctx.info);
    const png_uint_32 height = png_get_image_height(ctx.png, ctx.info);
    const int color_type = png_get_color_type(ctx.png, ctx.info);
    const int bit_depth = png_get_bit_depth(ctx.png, ctx.info);

    if (bit_depth == 16)
        png_set_strip_16(ctx.png);
    if (color_type == PNG_COLOR_TYPE_PALETTE)
        png_set_palette_to_rgb(ctx.png);
    if (color_type == PNG_COLOR_TYPE_GRAY && bit_depth < 8)
        png_set_expand_gray_1_2_4_to_8(ctx.png);
    if (png_get_valid(ctx.png, ctx.info, PNG_INFO_tRNS))
        png_set_tRNS_to_alpha(ctx.png);
    png_set_strip_alpha(ctx.png);
    png_read_update_info(ctx.png, ctx.info);

    const int channels = png_get_channels(ctx.png, ctx.info);
    if (channels != 1 && channels != 3)
        throw std::runtime_error("png: unsupported channel layout in " + path);

    const std::size_t row_bytes = png_get_rowbytes(ctx.png, ctx.info);
    ctx.data.resize(row_bytes * height);
    ctx.rows.resize(height);
    for (png_uint_32 r = 0; r < height; ++r)
        ctx.rows[r] = ctx.data.data() + static_cast<std::size_t>(r) * row_bytes;
    png_read_image(ctx.png, ctx.rows.data());

    GrayImage img(static_cast<int>(width), static_cast<int>(height));
    for (png_uint_32 r = 0; r < height; ++r) {
        const unsigned char* row = ctx.rows[r];
        for (png_uint_32 c = 0; c < width; ++c) {
            double value = 0.0;
            if (channels == 1) {
                value = row[c];
            } else {
                const unsigned char* px = row + 3 * c;
                value = 0.299 * px[0] + 0.587 * px[1] + 0.114 * px[2];
            }
            img.at(static_cast<int>(r), static_cast<int>(c)) = value;
        }
    }
    return img;
}

unsigned char quantize(double v)
{
    const long q = std::lround(v);
    return static_cast<unsigned char>(std::clamp(q, 0L, 255L));
}

struct PngWriteCtx {
    png_structp png = nullptr;
    png_infop info = nullptr;
    std::FILE* file = nullptr;
    ~PngWriteCtx()
    {
        if (png)
            png_destroy_write_struct(&png, info ? &info : nullptr);
        if (file)
            std::fclose(file);
    }
};

} // namespace

GrayImage read_image(const std::string& path)
{
    const std::string ext = lower_extension(path);
    if (ext == ".pgm")
        return read_pgm(path);
    if (ext == ".png")
        return read_png(path);
    throw std::runtime_error("unsupported image format: " + path);
}

void write_pgm(const GrayImage& img, const std::string& path)
{
    std::ofstream out(path, std::ios::binary);
    if (!out)
        throw std::runtime_error("cannot write " + path);
    out << "P5\n" << img.width << " " << img.height << "\n255\n";
    std::vector<unsigned char> raw(img.pixels.size());
    for (std::size_t i = 0; i < raw.size(); ++i)
        raw[i] = quantize(img.pixels[i]);
    out.write(reinterpret_cast<const char*>(raw.data()), static_cast<std::streamsize>(raw.size()));
    if (!out)
        throw std::runtime_error("failed writing " + path);
}

void write_png(const GrayImage& img, const std::string& path)
{
    std::vector<unsigned char> raw(img.pixels.size());
    for (std::size_t i = 0; i < raw.size(); ++i)
        raw[i] = quantize(img.pixels[i]);
    std::vector<png_bytep> rows(static_cast<std::size_t>(img.height));
    for (int r = 0; r < img.height; ++r)
        rows[static_cast<std::size_t>(r)] = raw.data() + static_cast<std::size_t>(r) * img.width;

    PngWriteCtx ctx;
    ctx.file = std::fopen(path.c_str(), "wb");
    if (!ctx.file)
        throw std::runtime_error("cannot write " + path);
    ctx.png = png_create_write_struct(PNG_LIBPNG_VER_STRING, nullptr, nullptr, nullptr);
    if (!ctx.png)
        throw std::runtime_error("png: allocation failure");
    ctx.info = png_create_info_struct(ctx.png);
    if (!ctx.info)
        throw std::runtime_error("png: allocation failure");
    if (setjmp(png_jmpbuf(ctx.png)))
        throw std::runtime_error("png: failed to encode " + path);

    png_init_io(ctx.png, ctx.file);
    png_set_IHDR(ctx.png, ctx.info, static_cast<png_uint_32>(img.width),
                 static_cast<png_uint_32>(img.height), 8, PNG_COLOR_TYPE_GRAY,
                 PNG_INTERLACE_NONE, PNG_COMPRESSION_TYPE_DEFAULT, PNG_FILTER_TYPE_DEFAULT);
    png_write_info(ctx.png, ctx.info);
    png_write_image(ctx.png, rows.data());
    png_write_end(ctx.png, nullptr);
}

void save_image(const GrayImage& img, const std::string& path)
{
    const std::string ext = lower_extension(path);
    if (ext == ".pgm") {
        write_pgm(img, path);
    } else if (ext == ".png") {
        write_png(img, path);
    } else {
        throw std::runtime_error("unsupported output format: " + path);
    }
}

bool has_image_extension(const std::string& path)
{
    const std::string ext = lower_extension(path);
    return ext == ".pgm" || ext == ".png";
}

} // namespace faceq
