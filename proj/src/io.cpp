#include "pottsrec/io.hpp"

#include <zlib.h>

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <cstdio>
#include <fstream>
#include <sstream>
#include <stdexcept>

#include <json.hpp>

namespace pottsrec {

namespace {

using nlohmann::json;

void write_json(const std::string& path, const json& j) {
    std::ofstream f(path);
    if (!f) throw std::runtime_error("cannot write " + path);
    f << j.dump(2) << "\n";
}

json read_json(const std::string& path) {
    std::ifstream f(path);
    if (!f) throw std::runtime_error("cannot read " + path);
    return json::parse(f);
}

void write_csv_grid(const std::string& path, const std::vector<double>& data, size_t rows, size_t cols) {
    std::ofstream f(path);
    if (!f) throw std::runtime_error("cannot write " + path);
    char buf[40];
    for (size_t r = 0; r < rows; ++r) {
        for (size_t c = 0; c < cols; ++c) {
            std::snprintf(buf, sizeof(buf), "%.17g", data[r * cols + c]);
            f << buf << (c + 1 < cols ? "," : "");
        }
        f << "\n";
    }
}

std::vector<std::vector<double>> read_csv_grid(const std::string& path) {
    std::ifstream f(path);
    if (!f) throw std::runtime_error("cannot read " + path);
    std::vector<std::vector<double>> rows;
    std::string line;
    while (std::getline(f, line)) {
        if (line.empty()) continue;
        std::vector<double> row;
        std::stringstream ss(line);
        std::string cell;
        while (std::getline(ss, cell, ',')) row.push_back(std::stod(cell));
        rows.push_back(std::move(row));
    }
    return rows;
}

uint32_t update_crc_table(uint32_t c) {
    for (int k = 0; k < 8; ++k) c = (c & 1) ? 0xedb88320u ^ (c >> 1) : c >> 1;
    return c;
}

void png_chunk(std::ofstream& f, const char type[4], const std::vector<uint8_t>& payload) {
    auto be32 = [&](uint32_t v) {
        uint8_t b[4] = {static_cast<uint8_t>(v >> 24), static_cast<uint8_t>(v >> 16),
                        static_cast<uint8_t>(v >> 8), static_cast<uint8_t>(v)};
        f.write(reinterpret_cast<char*>(b), 4);
    };
    static uint32_t table[256];
    static bool have_table = false;
    if (!have_table) {
        for (uint32_t n = 0; n < 256; ++n) table[n] = update_crc_table(n);
        have_table = true;
    }
    be32(static_cast<uint32_t>(payload.size()));
    uint32_t crc = 0xffffffffu;
    for (int i = 0; i < 4; ++i) {
        f.put(type[i]);
        crc = table[(crc ^ static_cast<uint8_t>(type[i])) & 0xff] ^ (crc >> 8);
    }
    if (!payload.empty()) f.write(reinterpret_cast<const char*>(payload.data()), payload.size());
    for (uint8_t b : payload) crc = table[(crc ^ b) & 0xff] ^ (crc >> 8);
    be32(crc ^ 0xffffffffu);
}

void write_png_rgb8(const std::string& path, int width, int height, const std::vector<uint8_t>& rgb) {
    std::ofstream f(path, std::ios::binary);
    if (!f) throw std::runtime_error("cannot write " + path);
    static const uint8_t sig[8] = {0x89, 'P', 'N', 'G', '\r', '\n', 0x1a, '\n'};
    f.write(reinterpret_cast<const char*>(sig), 8);

    std::vector<uint8_t> ihdr(13);
    auto put32 = [](std::vector<uint8_t>& v, size_t at, uint32_t x) {
        v[at] = x >> 24; v[at + 1] = x >> 16; v[at + 2] = x >> 8; v[at + 3] = x;
    };
    put32(ihdr, 0, width);
    put32(ihdr, 4, height);
    ihdr[8] = 8;   // bit depth
    ihdr[9] = 2;   // truecolor
    png_chunk(f, "IHDR", ihdr);

    // scanlines with filter byte 0
    std::vector<uint8_t> raw;
    raw.reserve(static_cast<size_t>(height) * (1 + 3 * width));
    for (int y = 0; y < height; ++y) {
        raw.push_back(0);
        raw.insert(raw.end(), rgb.begin() + static_cast<size_t>(y) * width * 3,
                   rgb.begin() + static_cast<size_t>(y + 1) * width * 3);
    }
    uLongf comp_len = compressBound(static_cast<uLong>(raw.size()));
    std::vector<uint8_t> comp(comp_len);
    if (compress(comp.data(), &comp_len, raw.data(), static_cast<uLong>(raw.size())) != Z_OK)
        throw std::runtime_error("png deflate failed");
    comp.resize(comp_len);
    png_chunk(f, "IDAT", comp);
    png_chunk(f, "IEND", {});
}

// fixed palette: golden-angle hue walk keyed by label index
void label_color(int label, uint8_t rgb[3]) {
    if (label == 0) { rgb[0] = rgb[1] = rgb[2] = 0; return; }
    double hue = std::fmod(0.618033988749895 * label, 1.0) * 6.0;
    double x = 1.0 - std::abs(std::fmod(hue, 2.0) - 1.0);
    double r = 0, g = 0, b = 0;
    switch (static_cast<int>(hue)) {
        case 0: r = 1; g = x; break;
        case 1: r = x; g = 1; break;
        case 2: g = 1; b = x; break;
        case 3: g = x; b = 1; break;
        case 4: r = x; b = 1; break;
        default: r = 1; b = x; break;
    }
    rgb[0] = static_cast<uint8_t>(55 + 200 * r);
    rgb[1] = static_cast<uint8_t>(55 + 200 * g);
    rgb[2] = static_cast<uint8_t>(55 + 200 * b);
}

}  // namespace

void write_image_csv(const std::string& path, const Image& img) {
    write_csv_grid(path, img.data, img.height, static_cast<size_t>(img.width) * img.channels);
    write_json(path + ".json", json{{"width", img.width}, {"height", img.height}, {"channels", img.channels}});
}

Image read_image_csv(const std::string& path) {
    json meta = read_json(path + ".json");
    Image img(meta.at("width"), meta.at("height"), meta.at("channels"));
    auto rows = read_csv_grid(path);
    if (rows.size() != static_cast<size_t>(img.height))
        throw std::runtime_error(path + ": row count does not match sidecar");
    for (int y = 0; y < img.height; ++y) {
        if (rows[y].size() != static_cast<size_t>(img.width) * img.channels)
            throw std::runtime_error(path + ": column count does not match sidecar");
        std::copy(rows[y].begin(), rows[y].end(),
                  img.data.begin() + static_cast<size_t>(y) * img.width * img.channels);
    }
    return img;
}

void write_volume_csv(const std::string& path, const DataVolume& f) {
    write_csv_grid(path, f.data, f.rows, static_cast<size_t>(f.cols) * f.channels);
    const char* tag = f.tag == GeometryTag::radon ? "radon"
                      : f.tag == GeometryTag::spherical ? "spherical" : "image";
    write_json(path + ".json",
               json{{"tag", tag}, {"rows", f.rows}, {"cols", f.cols}, {"channels", f.channels}});
}

DataVolume read_volume_csv(const std::string& path) {
    json meta = read_json(path + ".json");
    std::string tag = meta.at("tag");
    GeometryTag t = tag == "radon" ? GeometryTag::radon
                    : tag == "spherical" ? GeometryTag::spherical : GeometryTag::image;
    DataVolume f(t, meta.at("rows"), meta.at("cols"), meta.at("channels"));
    auto rows = read_csv_grid(path);
    if (rows.size() != static_cast<size_t>(f.rows))
        throw std::runtime_error(path + ": row count does not match sidecar");
    for (int r = 0; r < f.rows; ++r) {
        if (rows[r].size() != static_cast<size_t>(f.cols) * f.channels)
            throw std::runtime_error(path + ": column count does not match sidecar");
        std::copy(rows[r].begin(), rows[r].end(),
                  f.data.begin() + static_cast<size_t>(r) * f.cols * f.channels);
    }
    return f;
}

void write_radon_geometry(const std::string& path, const RadonGeometry& g, int image_size) {
    write_json(path, json{{"type", "radon"},
                          {"angles", g.angles},
                          {"offsets", g.offsets},
                          {"image_size", image_size}});
}

RadonGeometry read_radon_geometry(const std::string& path, int* image_size) {
    json j = read_json(path);
    if (j.at("type") != "radon") throw std::runtime_error(path + ": not a radon geometry");
    RadonGeometry g;
    g.angles = j.at("angles").get<std::vector<double>>();
    g.offsets = j.at("offsets").get<std::vector<double>>();
    if (image_size) *image_size = j.at("image_size");
    return g;
}

void write_spherical_geometry(const std::string& path, const SphericalGeometry& g, int image_size) {
    write_json(path, json{{"type", "spherical"},
                          {"center_angles", g.center_angles},
                          {"radii", g.radii},
                          {"image_size", image_size}});
}

SphericalGeometry read_spherical_geometry(const std::string& path, int* image_size) {
    json j = read_json(path);
    if (j.at("type") != "spherical") throw std::runtime_error(path + ": not a spherical geometry");
    SphericalGeometry g;
    g.center_angles = j.at("center_angles").get<std::vector<double>>();
    g.radii = j.at("radii").get<std::vector<double>>();
    if (image_size) *image_size = j.at("image_size");
    return g;
}

void write_pgm(const std::string& path, const Image& img) {
    std::ofstream f(path, std::ios::binary);
    if (!f) throw std::runtime_error("cannot write " + path);
    auto [lo_it, hi_it] = std::minmax_element(img.data.begin(), img.data.end());
    double lo = *lo_it, hi = *hi_it;
    double sc = (hi > lo) ? 255.0 / (hi - lo) : 0.0;
    f << "P5\n" << img.width << " " << img.height << "\n255\n";
    for (int y = 0; y < img.height; ++y)
        for (int x = 0; x < img.width; ++x) {
            double v = 0.0;
            for (int c = 0; c < img.channels; ++c) v += img.at(x, y, c);
            v /= img.channels;
            f.put(static_cast<char>(std::lround((v - lo) * sc)));
        }
}

void write_png(const std::string& path, const Image& img) {
    auto [lo_it, hi_it] = std::minmax_element(img.data.begin(), img.data.end());
    double lo = *lo_it, hi = *hi_it;
    double sc = (hi > lo) ? 255.0 / (hi - lo) : 0.0;
    std::vector<uint8_t> rgb(static_cast<size_t>(img.width) * img.height * 3);
    for (int y = 0; y < img.height; ++y)
        for (int x = 0; x < img.width; ++x)
            for (int c = 0; c < 3; ++c) {
                int ch = img.channels >= 3 ? c : 0;
                double v = (img.at(x, y, ch) - lo) * sc;
                rgb[(static_cast<size_t>(y) * img.width + x) * 3 + c] =
                    static_cast<uint8_t>(std::clamp(std::lround(v), 0l, 255l));
            }
    write_png_rgb8(path, img.width, img.height, rgb);
}

void write_label_png(const std::string& path, const LabelMap& labels) {
    std::vector<uint8_t> rgb(static_cast<size_t>(labels.width) * labels.height * 3);
    for (size_t i = 0; i < labels.labels.size(); ++i) label_color(labels.labels[i], &rgb[i * 3]);
    write_png_rgb8(path, labels.width, labels.height, rgb);
}

void write_labels_csv(const std::string& path, const LabelMap& labels) {
    std::ofstream f(path);
    if (!f) throw std::runtime_error("cannot write " + path);
    for (int y = 0; y < labels.height; ++y) {
        for (int x = 0; x < labels.width; ++x)
            f << labels.labels[static_cast<size_t>(y) * labels.width + x]
              << (x + 1 < labels.width ? "," : "");
        f << "\n";
    }
}

LabelMap read_labels_csv(const std::string& path) {
    auto rows = read_csv_grid(path);
    LabelMap lm;
    lm.height = static_cast<int>(rows.size());
    lm.width = rows.empty() ? 0 : static_cast<int>(rows[0].size());
    int maxl = -1;
    for (const auto& r : rows)
        for (double v : r) {
            lm.labels.push_back(static_cast<int>(v));
            maxl = std::max(maxl, static_cast<int>(v));
        }
    lm.label_count = maxl + 1;
    return lm;
}

}  // namespace pottsrec
