#include "epo/io.hpp"

#include <png.h>

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <cstring>
#include <fstream>
#include <map>
#include <set>
#include <sstream>

#include <json.hpp>

namespace epo {

namespace {

using nlohmann::json;

std::string lowerExtension(const std::filesystem::path& path) {
    std::string ext = path.extension().string();
    std::transform(ext.begin(), ext.end(), ext.begin(),
                   [](unsigned char c) { return std::tolower(c); });
    return ext;
}

unsigned char quantizeByte(double v) {
    return static_cast<unsigned char>(std::lround(clamp01(v) * 255.0));
}

// ---- PNM (P5/P6 binary) ----

void skipPnmWhitespace(std::istream& in) {
    while (true) {
        int c = in.peek();
        if (c == '#') {
            std::string line;
            std::getline(in, line);
        } else if (std::isspace(c)) {
            in.get();
        } else {
            break;
        }
    }
}

LoadedImage readPnm(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw IoError(IoError::Kind::MissingFile, "cannot open " + path.string());
    char magic[2];
    in.read(magic, 2);
    if (!in || magic[0] != 'P' || (magic[1] != '5' && magic[1] != '6'))
        throw IoError(IoError::Kind::UnsupportedFormat,
                      "not a binary PGM/PPM: " + path.string());
    const bool color = magic[1] == '6';
    int width = 0, height = 0, maxval = 0;
    skipPnmWhitespace(in);
    in >> width;
    skipPnmWhitespace(in);
    in >> height;
    skipPnmWhitespace(in);
    in >> maxval;
    if (!in || width <= 0 || height <= 0)
        throw IoError(IoError::Kind::CorruptStream, "bad PNM header: " + path.string());
    if (maxval != 255)
        throw IoError(IoError::Kind::UnsupportedFormat,
                      "only maxval 255 PNM supported: " + path.string());
    in.get();  // single whitespace after maxval
    const std::size_t n = static_cast<std::size_t>(width) * height * (color ? 3 : 1);
    std::vector<unsigned char> bytes(n);
    in.read(reinterpret_cast<char*>(bytes.data()), static_cast<std::streamsize>(n));
    if (static_cast<std::size_t>(in.gcount()) != n)
        throw IoError(IoError::Kind::CorruptStream, "truncated PNM: " + path.string());
    if (color) {
        RgbImage img(width, height);
        for (std::size_t i = 0; i < img.size(); ++i)
            img.set(i, {bytes[3 * i] / 255.0, bytes[3 * i + 1] / 255.0,
                        bytes[3 * i + 2] / 255.0});
        return img;
    }
    ImagePlane plane(width, height);
    for (std::size_t i = 0; i < plane.size(); ++i) plane.set(i, bytes[i] / 255.0);
    return plane;
}

void writePnm(const std::filesystem::path& path, const ImagePlane& img) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw IoError(IoError::Kind::WriteFailure, "cannot write " + path.string());
    out << "P5\n" << img.width() << " " << img.height() << "\n255\n";
    for (std::size_t i = 0; i < img.size(); ++i) out.put(static_cast<char>(quantizeByte(img[i])));
    if (!out) throw IoError(IoError::Kind::WriteFailure, "write failed: " + path.string());
}

void writePnm(const std::filesystem::path& path, const RgbImage& img) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw IoError(IoError::Kind::WriteFailure, "cannot write " + path.string());
    out << "P6\n" << img.width() << " " << img.height() << "\n255\n";
    for (std::size_t i = 0; i < img.size(); ++i) {
        out.put(static_cast<char>(quantizeByte(img[i].r)));
        out.put(static_cast<char>(quantizeByte(img[i].g)));
        out.put(static_cast<char>(quantizeByte(img[i].b)));
    }
    if (!out) throw IoError(IoError::Kind::WriteFailure, "write failed: " + path.string());
}

// ---- PNG via the libpng simplified API ----

LoadedImage readPng(const std::filesystem::path& path) {
    png_image image;
    std::memset(&image, 0, sizeof(image));
    image.version = PNG_IMAGE_VERSION;
    if (!png_image_begin_read_from_file(&image, path.string().c_str()))
        throw IoError(IoError::Kind::CorruptStream,
                      "PNG read failed: " + path.string() + ": " + image.message);
    const bool gray = PNG_IMAGE_SAMPLE_CHANNELS(image.format) < 3;
    image.format = gray ? PNG_FORMAT_GRAY : PNG_FORMAT_RGB;
    std::vector<unsigned char> buffer(PNG_IMAGE_SIZE(image));
    if (!png_image_finish_read(&image, nullptr, buffer.data(), 0, nullptr)) {
        std::string msg = image.message;
        png_image_free(&image);
        throw IoError(IoError::Kind::CorruptStream,
                      "PNG decode failed: " + path.string() + ": " + msg);
    }
    const int w = static_cast<int>(image.width), h = static_cast<int>(image.height);
    if (gray) {
        ImagePlane plane(w, h);
        for (std::size_t i = 0; i < plane.size(); ++i) plane.set(i, buffer[i] / 255.0);
        return plane;
    }
    RgbImage img(w, h);
    for (std::size_t i = 0; i < img.size(); ++i)
        img.set(i, {buffer[3 * i] / 255.0, buffer[3 * i + 1] / 255.0,
                    buffer[3 * i + 2] / 255.0});
    return img;
}

void writePng(const std::filesystem::path& path, const std::vector<unsigned char>& bytes,
              int width, int height, bool color) {
    png_image image;
    std::memset(&image, 0, sizeof(image));
    image.version = PNG_IMAGE_VERSION;
    image.width = static_cast<png_uint_32>(width);
    image.height = static_cast<png_uint_32>(height);
    image.format = color ? PNG_FORMAT_RGB : PNG_FORMAT_GRAY;
    if (!png_image_write_to_file(&image, path.string().c_str(), 0, bytes.data(), 0,
                                 nullptr))
        throw IoError(IoError::Kind::WriteFailure,
                      "PNG write failed: " + path.string() + ": " + image.message);
}

}  // namespace

LoadedImage read_image(const std::filesystem::path& path) {
    if (!std::filesystem::exists(path))
        throw IoError(IoError::Kind::MissingFile, "no such file: " + path.string());
    std::string ext = lowerExtension(path);
    if (ext == ".png") return readPng(path);
    if (ext == ".pgm" || ext == ".ppm" || ext == ".pnm") return readPnm(path);
    throw IoError(IoError::Kind::UnsupportedFormat,
                  "unsupported image format: " + path.string());
}

ImagePlane read_plane(const std::filesystem::path& path) {
    LoadedImage img = read_image(path);
    if (std::holds_alternative<ImagePlane>(img)) return std::get<ImagePlane>(img);
    return rgb_to_ycbcr(std::get<RgbImage>(img)).y;
}

RgbImage read_rgb(const std::filesystem::path& path) {
    LoadedImage img = read_image(path);
    if (std::holds_alternative<RgbImage>(img)) return std::get<RgbImage>(img);
    const ImagePlane& p = std::get<ImagePlane>(img);
    RgbImage out(p.width(), p.height());
    for (std::size_t i = 0; i < p.size(); ++i) out.set(i, {p[i], p[i], p[i]});
    return out;
}

void write_image(const std::filesystem::path& path, const ImagePlane& img) {
    std::string ext = lowerExtension(path);
    if (ext == ".pgm") {
        writePnm(path, img);
        return;
    }
    if (ext == ".png") {
        std::vector<unsigned char> bytes(img.size());
        for (std::size_t i = 0; i < img.size(); ++i) bytes[i] = quantizeByte(img[i]);
        writePng(path, bytes, img.width(), img.height(), false);
        return;
    }
    throw IoError(IoError::Kind::UnsupportedFormat,
                  "unsupported output format: " + path.string());
}

void write_image(const std::filesystem::path& path, const RgbImage& img) {
    std::string ext = lowerExtension(path);
    if (ext == ".ppm") {
        writePnm(path, img);
        return;
    }
    if (ext == ".png") {
        std::vector<unsigned char> bytes(img.size() * 3);
        for (std::size_t i = 0; i < img.size(); ++i) {
            bytes[3 * i] = quantizeByte(img[i].r);
            bytes[3 * i + 1] = quantizeByte(img[i].g);
            bytes[3 * i + 2] = quantizeByte(img[i].b);
        }
        writePng(path, bytes, img.width(), img.height(), true);
        return;
    }
    throw IoError(IoError::Kind::UnsupportedFormat,
                  "unsupported output format: " + path.string());
}

void write_mask(const std::filesystem::path& path, const BinaryMask& mask) {
    ImagePlane plane(mask.width(), mask.height());
    for (std::size_t i = 0; i < mask.size(); ++i) plane.set(i, mask[i] ? 1.0 : 0.0);
    write_image(path, plane);
}

BinaryMask read_mask(const std::filesystem::path& path) {
    ImagePlane plane = read_plane(path);
    BinaryMask mask(plane.width(), plane.height());
    for (std::size_t i = 0; i < plane.size(); ++i) mask.set(i, plane[i] >= 0.5);
    return mask;
}

DatasetManifest load_manifest(const std::filesystem::path& path) {
    if (!std::filesystem::exists(path))
        throw IoError(IoError::Kind::MissingFile, "no such manifest: " + path.string());
    std::ifstream in(path);
    json doc;
    try {
        in >> doc;
    } catch (const json::parse_error& e) {
        throw IoError(IoError::Kind::CorruptStream,
                      "malformed manifest " + path.string() + ": " + e.what());
    }
    if (!doc.is_object() || !doc.contains("entries") || !doc["entries"].is_array())
        throw IoError(IoError::Kind::CorruptStream,
                      "manifest must contain an \"entries\" array: " + path.string());
    DatasetManifest m;
    std::set<std::string> seen;
    for (const json& e : doc["entries"]) {
        ManifestEntry entry;
        if (!e.contains("id") || !e.contains("visible") || !e.contains("infrared"))
            throw IoError(IoError::Kind::CorruptStream,
                          "manifest entry missing required field in " + path.string());
        entry.id = e["id"].get<std::string>();
        entry.visible_path = e["visible"].get<std::string>();
        entry.infrared_path = e["infrared"].get<std::string>();
        entry.mask_path = e.value("mask", "");
        entry.label_path = e.value("label", "");
        if (entry.id.empty() || entry.visible_path.empty() || entry.infrared_path.empty())
            throw IoError(IoError::Kind::CorruptStream,
                          "manifest entry has empty required field in " + path.string());
        if (!seen.insert(entry.id).second)
            throw IoError(IoError::Kind::CorruptStream,
                          "duplicate manifest id \"" + entry.id + "\" in " + path.string());
        m.entries.push_back(std::move(entry));
    }
    return m;
}

void write_manifest(const std::filesystem::path& path, const DatasetManifest& m) {
    json doc;
    doc["entries"] = json::array();
    for (const ManifestEntry& e : m.entries) {
        json je;
        je["id"] = e.id;
        je["visible"] = e.visible_path;
        je["infrared"] = e.infrared_path;
        if (!e.mask_path.empty()) je["mask"] = e.mask_path;
        if (!e.label_path.empty()) je["label"] = e.label_path;
        doc["entries"].push_back(je);
    }
    std::ofstream out(path);
    if (!out) throw IoError(IoError::Kind::WriteFailure, "cannot write " + path.string());
    out << doc.dump(2) << "\n";
}

namespace {

const char* kCanonicalOrder[] = {"EN", "MI", "VIF", "Qabf", "SSIM"};

std::vector<std::string> orderedColumns(const std::vector<ReportRow>& rows) {
    if (rows.empty()) return {};
    std::set<std::string> names;
    for (const auto& [name, value] : rows[0].columns) names.insert(name);
    for (const ReportRow& row : rows) {
        std::set<std::string> rowNames;
        for (const auto& [name, value] : row.columns) rowNames.insert(name);
        if (rowNames != names)
            throw std::invalid_argument("write_report: rows have differing column sets");
    }
    std::vector<std::string> ordered;
    for (const char* name : kCanonicalOrder)
        if (names.erase(name)) ordered.push_back(name);
    ordered.insert(ordered.end(), names.begin(), names.end());
    return ordered;
}

std::string csvQuote(const std::string& s) {
    if (s.find_first_of(",\"\n") == std::string::npos) return s;
    std::string out = "\"";
    for (char c : s) {
        if (c == '"') out += '"';
        out += c;
    }
    return out + "\"";
}

std::string formatValue(double v) {
    std::ostringstream ss;
    ss.precision(12);
    ss << v;
    return ss.str();
}

}  // namespace

void write_report(const std::filesystem::path& path,
                  const std::vector<ReportRow>& rows, ReportFormat format) {
    std::vector<std::string> columns = orderedColumns(rows);
    std::ofstream out(path);
    if (!out) throw IoError(IoError::Kind::WriteFailure, "cannot write " + path.string());
    if (format == ReportFormat::Csv) {
        out << "id";
        for (const std::string& c : columns) out << "," << csvQuote(c);
        out << "\n";
        for (const ReportRow& row : rows) {
            std::map<std::string, double> values(row.columns.begin(), row.columns.end());
            out << csvQuote(row.id);
            for (const std::string& c : columns) out << "," << formatValue(values.at(c));
            out << "\n";
        }
    } else {
        json doc = json::array();
        for (const ReportRow& row : rows) {
            std::map<std::string, double> values(row.columns.begin(), row.columns.end());
            json je;
            je["id"] = row.id;
            for (const std::string& c : columns) je[c] = values.at(c);
            doc.push_back(je);
        }
        out << doc.dump(2) << "\n";
    }
    if (!out) throw IoError(IoError::Kind::WriteFailure, "write failed: " + path.string());
}

}  // namespace epo
