#include "gemcap/image_io.hpp"

#include <array>
#include <cmath>
#include <cstdint>
#include <cstring>
#include <fstream>
#include <vector>

#include <zlib.h>

#include "gemcap/error.hpp"

namespace gemcap {
namespace {

const std::array<unsigned char, 8> kSignature = {0x89, 'P', 'N', 'G', '\r', '\n', 0x1A, '\n'};

std::uint32_t crc32_of(const unsigned char* data, std::size_t len, std::uint32_t seed) {
    return static_cast<std::uint32_t>(::crc32(seed, data, static_cast<uInt>(len)));
}

void put_u32(std::vector<unsigned char>& out, std::uint32_t v) {
    out.push_back(static_cast<unsigned char>(v >> 24));
    out.push_back(static_cast<unsigned char>(v >> 16));
    out.push_back(static_cast<unsigned char>(v >> 8));
    out.push_back(static_cast<unsigned char>(v));
}

std::uint32_t get_u32(const unsigned char* p) {
    return (static_cast<std::uint32_t>(p[0]) << 24) | (static_cast<std::uint32_t>(p[1]) << 16) |
           (static_cast<std::uint32_t>(p[2]) << 8) | p[3];
}

void append_chunk(std::vector<unsigned char>& out, const char type[4],
                  const std::vector<unsigned char>& data) {
    put_u32(out, static_cast<std::uint32_t>(data.size()));
    const std::size_t type_at = out.size();
    out.insert(out.end(), type, type + 4);
    out.insert(out.end(), data.begin(), data.end());
    const std::uint32_t crc = crc32_of(out.data() + type_at, 4 + data.size(), ::crc32(0, nullptr, 0));
    put_u32(out, crc);
}

int paeth(int a, int b, int c) {
    const int p = a + b - c;
    const int pa = std::abs(p - a), pb = std::abs(p - b), pc = std::abs(p - c);
    if (pa <= pb && pa <= pc)
        return a;
    return pb <= pc ? b : c;
}

} // namespace

void write_png(const std::string& path, const Tensor& image) {
    if (image.rank() != 3 || image.dim(0) != 3)
        throw ImageIoError("write_png expects a [3,h,w] tensor, got " + image.shape_str());
    const int h = image.dim(1), w = image.dim(2);

    // scanlines with filter byte 0
    std::vector<unsigned char> raw(static_cast<std::size_t>(h) * (1 + 3 * static_cast<std::size_t>(w)));
    std::size_t at = 0;
    for (int y = 0; y < h; ++y) {
        raw[at++] = 0;
        for (int x = 0; x < w; ++x)
            for (int c = 0; c < 3; ++c) {
                double v = image[(static_cast<std::size_t>(c) * h + y) * w + x];
                v = std::min(1.0, std::max(0.0, v));
                raw[at++] = static_cast<unsigned char>(std::lround(v * 255.0));
            }
    }

    uLongf bound = compressBound(static_cast<uLong>(raw.size()));
    std::vector<unsigned char> compressed(bound);
    if (compress2(compressed.data(), &bound, raw.data(), static_cast<uLong>(raw.size()),
                  Z_BEST_SPEED) != Z_OK)
        throw ImageIoError("zlib compression failed for " + path);
    compressed.resize(bound);

    std::vector<unsigned char> file(kSignature.begin(), kSignature.end());
    std::vector<unsigned char> ihdr;
    put_u32(ihdr, static_cast<std::uint32_t>(w));
    put_u32(ihdr, static_cast<std::uint32_t>(h));
    ihdr.push_back(8); // bit depth
    ihdr.push_back(2); // color type: truecolor
    ihdr.push_back(0);
    ihdr.push_back(0);
    ihdr.push_back(0);
    append_chunk(file, "IHDR", ihdr);
    append_chunk(file, "IDAT", compressed);
    append_chunk(file, "IEND", {});

    std::ofstream out(path, std::ios::binary);
    if (!out)
        throw ImageIoError("cannot open for writing: " + path);
    out.write(reinterpret_cast<const char*>(file.data()), static_cast<std::streamsize>(file.size()));
    if (!out)
        throw ImageIoError("short write: " + path);
}

Tensor read_png(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in)
        throw ImageIoError("cannot open: " + path);
    std::vector<unsigned char> file((std::istreambuf_iterator<char>(in)),
                                    std::istreambuf_iterator<char>());
    if (file.size() < 8 || !std::equal(kSignature.begin(), kSignature.end(), file.begin()))
        throw ImageIoError("not a PNG file: " + path);

    int w = 0, h = 0, color_type = -1, bit_depth = 0;
    std::vector<unsigned char> idat;
    std::size_t at = 8;
    while (at + 8 <= file.size()) {
        const std::uint32_t len = get_u32(&file[at]);
        if (at + 12 + len > file.size())
            throw ImageIoError("truncated PNG chunk in " + path);
        const std::string type(reinterpret_cast<const char*>(&file[at + 4]), 4);
        const unsigned char* data = &file[at + 8];
        if (type == "IHDR") {
            w = static_cast<int>(get_u32(data));
            h = static_cast<int>(get_u32(data + 4));
            bit_depth = data[8];
            color_type = data[9];
            if (data[12] != 0)
                throw ImageIoError("interlaced PNG not supported: " + path);
        } else if (type == "IDAT") {
            idat.insert(idat.end(), data, data + len);
        } else if (type == "IEND") {
            break;
        }
        at += 12 + len;
    }
    if (w <= 0 || h <= 0 || bit_depth != 8)
        throw ImageIoError("unsupported PNG header in " + path);
    int channels;
    switch (color_type) {
    case 0: channels = 1; break;
    case 2: channels = 3; break;
    case 6: channels = 4; break;
    default: throw ImageIoError("unsupported PNG color type in " + path);
    }

    const std::size_t stride = 1 + static_cast<std::size_t>(w) * channels;
    std::vector<unsigned char> raw(static_cast<std::size_t>(h) * stride);
    uLongf raw_len = static_cast<uLongf>(raw.size());
    if (uncompress(raw.data(), &raw_len, idat.data(), static_cast<uLong>(idat.size())) != Z_OK ||
        raw_len != raw.size())
        throw ImageIoError("zlib decompression failed for " + path);

    // undo per-row filters in place
    const int bpp = channels;
    for (int y = 0; y < h; ++y) {
        unsigned char* row = &raw[static_cast<std::size_t>(y) * stride];
        const unsigned char* prev = y ? &raw[static_cast<std::size_t>(y - 1) * stride] : nullptr;
        const int filter = row[0];
        unsigned char* px = row + 1;
        const unsigned char* up = prev ? prev + 1 : nullptr;
        const int n = w * channels;
        for (int i = 0; i < n; ++i) {
            const int a = i >= bpp ? px[i - bpp] : 0;
            const int b = up ? up[i] : 0;
            const int c = (up && i >= bpp) ? up[i - bpp] : 0;
            int v = px[i];
            switch (filter) {
            case 0: break;
            case 1: v += a; break;
            case 2: v += b; break;
            case 3: v += (a + b) / 2; break;
            case 4: v += paeth(a, b, c); break;
            default: throw ImageIoError("unknown PNG filter in " + path);
            }
            px[i] = static_cast<unsigned char>(v & 0xFF);
        }
    }

    Tensor image = Tensor::zeros({3, h, w});
    for (int y = 0; y < h; ++y) {
        const unsigned char* px = &raw[static_cast<std::size_t>(y) * stride] + 1;
        for (int x = 0; x < w; ++x)
            for (int c = 0; c < 3; ++c) {
                const int src = channels == 1 ? 0 : c;
                image[(static_cast<std::size_t>(c) * h + y) * w + x] =
                    px[x * channels + src] / 255.0;
            }
    }
    return image;
}

} // namespace gemcap
