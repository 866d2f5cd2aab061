#ifndef DOMAINSCOPE_DATASET_IO_HPP
#define DOMAINSCOPE_DATASET_IO_HPP

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "domainscope/boxes.hpp"
#include "domainscope/calibration.hpp"
#include "domainscope/image.hpp"
#include "domainscope/record.hpp"

namespace domainscope {

struct ImageEntry {
  std::int64_t id = 0;
  std::string file_name;
  int width = 0;
  int height = 0;
  std::vector<BoundingBox> boxes;  // clamped into bounds; zero-area dropped
};

/// Validated ground-truth index in annotation-file order.
struct DatasetIndex {
  std::vector<ImageEntry> images;
  std::map<std::int64_t, std::size_t> image_pos;                 // id -> images index
  std::vector<std::pair<std::int64_t, std::string>> categories;  // sorted by id
  std::string image_root;
  int clamped_box_count = 0;  // boxes adjusted to fit image bounds at load
  int dropped_box_count = 0;  // boxes with zero area after clamping

  bool has_category(std::int64_t id) const;
  const ImageEntry* find(std::int64_t image_id) const;  // nullptr when unknown
  std::size_t annotation_count() const;
};

/// Parse and validate a COCO-format annotation file (images / annotations /
/// categories arrays, bbox = [x, y, w, h]). Throws std::runtime_error with
/// file/line context on parse errors; dangling image or category references
/// are enumerated in the message.
DatasetIndex load_dataset(const std::string& ann_path, const std::string& image_root);

struct Detection {
  BoundingBox box;  // category in box.category_id
  double confidence = 0.0;
};

/// Model outputs grouped by image, file order preserved within each image.
struct DetectionSet {
  std::map<std::int64_t, std::vector<Detection>> by_image;
  std::size_t total = 0;
};

/// Parse a COCO results file (list of {image_id, category_id, bbox, score}).
/// Unknown image or category ids and scores outside [0, 1] are errors.
DetectionSet load_detections(const std::string& path, const DatasetIndex& index);

/// Load a depth raster: 16-bit grayscale PNG (depth = sample /
/// profile.depth_png_scale) or DMAP (magic "DMAP", u32 width, u32 height,
/// u32 reserved, width*height little-endian float32; non-finite samples
/// become invalid pixels). Values are multiplied by profile.depth_scale,
/// and the map is bilinearly resampled (corner-aligned) when its size
/// differs from target_w x target_h.
DepthMap load_depth(const std::string& path, int target_w, int target_h,
                    const CalibrationProfile& profile);

/// Depth lookup by convention: depth_root/<image_id>.png, then .dmap.
/// nullopt when neither exists.
std::optional<DepthMap> find_depth(const std::string& depth_root, std::int64_t image_id,
                                   int target_w, int target_h, const CalibrationProfile& profile);

/// Labels travel as JSON Lines, one record per line. Schema "v1", fixed
/// key order: schema, image_id, profile_id, labels (the eight categories,
/// each a label string or "unlabeled:<reason>"), metrics (visibility,
/// illumination, color, layout, then scale/background/geometry or null).
/// Non-finite metric values are encoded as the strings "inf"/"-inf"/"nan"
/// so records round-trip exactly.
std::string record_to_json_line(const DomainLabelRecord& r);
DomainLabelRecord record_from_json_line(const std::string& line);

void write_labels(const std::vector<DomainLabelRecord>& records, const std::string& path);
std::vector<DomainLabelRecord> read_labels(const std::string& path);

/// Flat single-file export of the same records for spreadsheet use.
void write_labels_csv(const std::vector<DomainLabelRecord>& records, const std::string& path);

}  // namespace domainscope

#endif  // DOMAINSCOPE_DATASET_IO_HPP
