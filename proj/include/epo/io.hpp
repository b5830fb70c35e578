#ifndef EPO_IO_HPP
#define EPO_IO_HPP

#include <filesystem>
#include <string>
#include <utility>
#include <variant>
#include <vector>

#include "epo/image.hpp"
#include "epo/maskgen.hpp"

namespace epo {

class IoError : public std::runtime_error {
public:
    enum class Kind { MissingFile, UnsupportedFormat, CorruptStream, WriteFailure };

    IoError(Kind kind, const std::string& message)
        : std::runtime_error(message), kind_(kind) {}
    Kind kind() const { return kind_; }

private:
    Kind kind_;
};

using LoadedImage = std::variant<ImagePlane, RgbImage>;

// 8-bit PNG / PGM / PPM, scaled to [0,1] by /255. Single-channel sources
// come back as an ImagePlane, color as an RgbImage.
LoadedImage read_image(const std::filesystem::path& path);
ImagePlane read_plane(const std::filesystem::path& path);  // collapses RGB via BT.601 luma
RgbImage read_rgb(const std::filesystem::path& path);      // replicates gray to RGB

// Quantizes with round(v * 255); identical input yields identical bytes.
// Format chosen by extension: .png, .pgm (gray), .ppm (color).
void write_image(const std::filesystem::path& path, const ImagePlane& img);
void write_image(const std::filesystem::path& path, const RgbImage& img);

// Masks persist as 0/255 gray images.
void write_mask(const std::filesystem::path& path, const BinaryMask& mask);
BinaryMask read_mask(const std::filesystem::path& path);

struct ManifestEntry {
    std::string id;
    std::string visible_path;
    std::string infrared_path;
    std::string mask_path;   // optional, empty when absent
    std::string label_path;  // optional, empty when absent
};

struct DatasetManifest {
    std::vector<ManifestEntry> entries;
};

// JSON document {"entries": [{"id", "visible", "infrared", "mask"?, "label"?}]}.
// Validates id uniqueness and path presence.
DatasetManifest load_manifest(const std::filesystem::path& path);
void write_manifest(const std::filesystem::path& path, const DatasetManifest& m);

struct ReportRow {
    std::string id;
    std::vector<std::pair<std::string, double>> columns;
};

enum class ReportFormat { Csv, Json };

// Columns are emitted in the canonical order EN, MI, VIF, Qabf, SSIM followed
// by any loss columns; every row must carry the same column set.
void write_report(const std::filesystem::path& path,
                  const std::vector<ReportRow>& rows, ReportFormat format);

}  // namespace epo

#endif
