#include "domainscope/dataset_io.hpp"
#include "domainscope/errors.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <cstring>
#include <filesystem>
#include <fstream>
#include <limits>
#include <sstream>
#include <stdexcept>

#include <nlohmann/json.hpp>

#include "domainscope/codecs.hpp"

namespace domainscope {

namespace {

using ojson = nlohmann::ordered_json;

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError(path + ": cannot open file");
  std::ostringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

// Parse with a line number in the message instead of nlohmann's byte offset.
ojson parse_json(const std::string& text, const std::string& path) {
  try {
    return ojson::parse(text);
  } catch (const nlohmann::json::parse_error& e) {
    std::size_t line = 1;
    const std::size_t upto = std::min(e.byte, text.size());
    for (std::size_t i = 0; i < upto; ++i) {
      if (text[i] == '\n') ++line;
    }
    throw std::runtime_error(path + ":" + std::to_string(line) + ": " + e.what());
  }
}

[[noreturn]] void field_error(const std::string& path, const std::string& context,
                              const std::string& what) {
  throw std::runtime_error(path + ": " + context + ": " + what);
}

std::int64_t require_int(const ojson& j, const char* key, const std::string& path,
                         const std::string& context) {
  if (!j.contains(key) || !j[key].is_number_integer()) {
    field_error(path, context, std::string("missing or non-integer '") + key + "'");
  }
  return j[key].get<std::int64_t>();
}

double require_number(const ojson& j, const char* key, const std::string& path,
                      const std::string& context) {
  if (!j.contains(key) || !j[key].is_number()) {
    field_error(path, context, std::string("missing or non-numeric '") + key + "'");
  }
  return j[key].get<double>();
}

BoundingBox parse_bbox(const ojson& j, const std::string& path, const std::string& context) {
  if (!j.contains("bbox") || !j["bbox"].is_array() || j["bbox"].size() != 4) {
    field_error(path, context, "'bbox' must be an array of 4 numbers");
  }
  const auto& a = j["bbox"];
  for (const auto& v : a) {
    if (!v.is_number()) field_error(path, context, "'bbox' must be an array of 4 numbers");
  }
  BoundingBox b;
  b.x = a[0].get<double>();
  b.y = a[1].get<double>();
  b.w = a[2].get<double>();
  b.h = a[3].get<double>();
  return b;
}

constexpr double kInf = std::numeric_limits<double>::infinity();

// Doubles that may be non-finite travel as strings so lines stay valid
// JSON and records round-trip exactly.
ojson jnum(double v) {
  if (std::isfinite(v)) return v;
  if (std::isnan(v)) return "nan";
  return v > 0 ? "inf" : "-inf";
}

double num_from(const ojson& j, const std::string& context) {
  if (j.is_number()) return j.get<double>();
  if (j.is_string()) {
    const auto& s = j.get_ref<const std::string&>();
    if (s == "inf") return kInf;
    if (s == "-inf") return -kInf;
    if (s == "nan") return std::numeric_limits<double>::quiet_NaN();
  }
  throw std::runtime_error(context + ": expected a number or inf/nan sentinel");
}

template <typename E>
std::string assignment_text(const Assignment<E>& a) {
  return a.label ? std::string(to_string(*a.label)) : "unlabeled:" + a.unlabeled_reason;
}

template <typename E>
Assignment<E> assignment_from_text(const std::string& s) {
  constexpr std::string_view prefix = "unlabeled:";
  if (s.rfind(prefix, 0) == 0) return Assignment<E>::unlabeled(s.substr(prefix.size()));
  return Assignment<E>::labeled(enum_from_string<E>(s));
}

ojson vis_json(const VisibilityMetrics& m) {
  ojson j;
  j["tenengrad"] = jnum(m.tenengrad);
  j["laplacian_var"] = jnum(m.laplacian_var);
  j["rms_contrast"] = jnum(m.rms_contrast);
  j["freq_energy"] = jnum(m.freq_energy);
  j["tenengrad_n"] = jnum(m.tenengrad_n);
  j["laplacian_var_n"] = jnum(m.laplacian_var_n);
  j["rms_contrast_n"] = jnum(m.rms_contrast_n);
  j["freq_energy_n"] = jnum(m.freq_energy_n);
  j["score"] = jnum(m.score);
  return j;
}

VisibilityMetrics vis_from(const ojson& j) {
  VisibilityMetrics m;
  m.tenengrad = num_from(j.at("tenengrad"), "visibility.tenengrad");
  m.laplacian_var = num_from(j.at("laplacian_var"), "visibility.laplacian_var");
  m.rms_contrast = num_from(j.at("rms_contrast"), "visibility.rms_contrast");
  m.freq_energy = num_from(j.at("freq_energy"), "visibility.freq_energy");
  m.tenengrad_n = num_from(j.at("tenengrad_n"), "visibility.tenengrad_n");
  m.laplacian_var_n = num_from(j.at("laplacian_var_n"), "visibility.laplacian_var_n");
  m.rms_contrast_n = num_from(j.at("rms_contrast_n"), "visibility.rms_contrast_n");
  m.freq_energy_n = num_from(j.at("freq_energy_n"), "visibility.freq_energy_n");
  m.score = num_from(j.at("score"), "visibility.score");
  return m;
}

ojson illum_json(const IlluminationMetrics& m) {
  ojson j;
  j["median_luminance"] = jnum(m.median_luminance);
  j["overexposed_ratio"] = jnum(m.overexposed_ratio);
  j["underexposed_ratio"] = jnum(m.underexposed_ratio);
  return j;
}

IlluminationMetrics illum_from(const ojson& j) {
  IlluminationMetrics m;
  m.median_luminance = num_from(j.at("median_luminance"), "illumination.median_luminance");
  m.overexposed_ratio = num_from(j.at("overexposed_ratio"), "illumination.overexposed_ratio");
  m.underexposed_ratio = num_from(j.at("underexposed_ratio"), "illumination.underexposed_ratio");
  return m;
}

ojson color_json(const ColorMetrics& m) {
  ojson j;
  j["mean_r"] = jnum(m.mean_r);
  j["mean_g"] = jnum(m.mean_g);
  j["mean_b"] = jnum(m.mean_b);
  j["distortion"] = jnum(m.distortion);
  j["blue_green_ratio"] = jnum(m.blue_green_ratio);
  return j;
}

ColorMetrics color_from(const ojson& j) {
  ColorMetrics m;
  m.mean_r = num_from(j.at("mean_r"), "color.mean_r");
  m.mean_g = num_from(j.at("mean_g"), "color.mean_g");
  m.mean_b = num_from(j.at("mean_b"), "color.mean_b");
  m.distortion = num_from(j.at("distortion"), "color.distortion");
  m.blue_green_ratio = num_from(j.at("blue_green_ratio"), "color.blue_green_ratio");
  return m;
}

ojson layout_json(const LayoutMetrics& m) {
  ojson j;
  j["object_count"] = m.object_count;
  j["coverage"] = jnum(m.coverage);
  j["overlap"] = jnum(m.overlap);
  return j;
}

LayoutMetrics layout_from(const ojson& j) {
  LayoutMetrics m;
  m.object_count = j.at("object_count").get<int>();
  m.coverage = num_from(j.at("coverage"), "layout.coverage");
  m.overlap = num_from(j.at("overlap"), "layout.overlap");
  return m;
}

ojson scale_json(const ScaleMetrics& m) {
  ojson j;
  j["mean_norm_area"] = jnum(m.mean_norm_area);
  j["small_ratio"] = jnum(m.small_ratio);
  j["large_ratio"] = jnum(m.large_ratio);
  return j;
}

ScaleMetrics scale_from(const ojson& j) {
  ScaleMetrics m;
  m.mean_norm_area = num_from(j.at("mean_norm_area"), "scale.mean_norm_area");
  m.small_ratio = num_from(j.at("small_ratio"), "scale.small_ratio");
  m.large_ratio = num_from(j.at("large_ratio"), "scale.large_ratio");
  return m;
}

ojson bg_json(const BackgroundMetrics& m) {
  ojson j;
  j["keypoint_density"] = jnum(m.keypoint_density);
  j["edge_density"] = jnum(m.edge_density);
  j["laplacian_mean"] = jnum(m.laplacian_mean);
  j["keypoint_density_n"] = jnum(m.keypoint_density_n);
  j["edge_density_n"] = jnum(m.edge_density_n);
  j["laplacian_mean_n"] = jnum(m.laplacian_mean_n);
  j["score"] = jnum(m.score);
  return j;
}

BackgroundMetrics bg_from(const ojson& j) {
  BackgroundMetrics m;
  m.keypoint_density = num_from(j.at("keypoint_density"), "background.keypoint_density");
  m.edge_density = num_from(j.at("edge_density"), "background.edge_density");
  m.laplacian_mean = num_from(j.at("laplacian_mean"), "background.laplacian_mean");
  m.keypoint_density_n = num_from(j.at("keypoint_density_n"), "background.keypoint_density_n");
  m.edge_density_n = num_from(j.at("edge_density_n"), "background.edge_density_n");
  m.laplacian_mean_n = num_from(j.at("laplacian_mean_n"), "background.laplacian_mean_n");
  m.score = num_from(j.at("score"), "background.score");
  return m;
}

ojson geom_json(const GeometryMetrics& m) {
  ojson j;
  j["delta_lr"] = jnum(m.delta_lr);
  j["delta_tb"] = jnum(m.delta_tb);
  j["depth_range"] = jnum(m.depth_range);
  j["brightness_gradient"] = jnum(m.brightness_gradient);
  return j;
}

GeometryMetrics geom_from(const ojson& j) {
  GeometryMetrics m;
  m.delta_lr = num_from(j.at("delta_lr"), "geometry.delta_lr");
  m.delta_tb = num_from(j.at("delta_tb"), "geometry.delta_tb");
  m.depth_range = num_from(j.at("depth_range"), "geometry.depth_range");
  m.brightness_gradient = num_from(j.at("brightness_gradient"), "geometry.brightness_gradient");
  return m;
}

DepthMap load_dmap(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError(path + ": cannot open file");
  char header[16];
  if (!in.read(header, 16)) throw std::runtime_error(path + ": truncated DMAP header");
  if (std::memcmp(header, "DMAP", 4) != 0) throw std::runtime_error(path + ": bad DMAP magic");
  auto read_u32 = [&](int off) {
    std::uint32_t v = 0;
    for (int i = 3; i >= 0; --i) v = (v << 8) | static_cast<unsigned char>(header[off + i]);
    return v;
  };
  const std::uint32_t w = read_u32(4);
  const std::uint32_t h = read_u32(8);
  if (w == 0 || h == 0) throw std::runtime_error(path + ": zero-sized DMAP");
  if (static_cast<std::uint64_t>(w) * h > (1u << 28)) {
    throw std::runtime_error(path + ": DMAP dimensions unreasonably large");
  }

  const std::size_t n = static_cast<std::size_t>(w) * h;
  std::vector<char> raw(n * 4);
  if (!in.read(raw.data(), static_cast<std::streamsize>(raw.size()))) {
    throw std::runtime_error(path + ": truncated DMAP payload");
  }

  DepthMap depth;
  depth.width = static_cast<int>(w);
  depth.height = static_cast<int>(h);
  depth.values.resize(n);
  // Payload is little-endian float32, which matches the host.
  static_assert(sizeof(float) == 4);
  for (std::size_t i = 0; i < n; ++i) {
    float f;
    std::memcpy(&f, raw.data() + i * 4, 4);
    if (std::isfinite(f)) {
      depth.values[i] = static_cast<double>(f);
    } else {
      // Lazily materialize the mask; earlier samples were all valid.
      depth.values[i] = 0.0;
      if (depth.valid.empty()) depth.valid.assign(n, 1);
      depth.valid[i] = 0;
    }
  }
  return depth;
}

// Corner-aligned bilinear resampling with validity renormalization: an
// output pixel is invalid only when all contributing neighbors are.
DepthMap resample_depth(const DepthMap& src, int tw, int th) {
  DepthMap dst;
  dst.width = tw;
  dst.height = th;
  dst.values.resize(static_cast<std::size_t>(tw) * th, 0.0);
  const bool masked = !src.valid.empty();
  if (masked) dst.valid.assign(dst.values.size(), 1);

  for (int y = 0; y < th; ++y) {
    const double sy = th > 1 ? static_cast<double>(y) * (src.height - 1) / (th - 1) : 0.0;
    const int y0 = static_cast<int>(sy);
    const int y1 = std::min(y0 + 1, src.height - 1);
    const double fy = sy - y0;
    for (int x = 0; x < tw; ++x) {
      const double sx = tw > 1 ? static_cast<double>(x) * (src.width - 1) / (tw - 1) : 0.0;
      const int x0 = static_cast<int>(sx);
      const int x1 = std::min(x0 + 1, src.width - 1);
      const double fx = sx - x0;

      const int nx[4] = {x0, x1, x0, x1};
      const int ny[4] = {y0, y0, y1, y1};
      const double wt[4] = {(1 - fx) * (1 - fy), fx * (1 - fy), (1 - fx) * fy, fx * fy};
      double acc = 0.0, wsum = 0.0;
      for (int k = 0; k < 4; ++k) {
        if (wt[k] == 0.0 || !src.is_valid(nx[k], ny[k])) continue;
        acc += wt[k] * src.at(nx[k], ny[k]);
        wsum += wt[k];
      }
      const std::size_t idx = static_cast<std::size_t>(y) * tw + x;
      if (wsum > 0.0) {
        dst.values[idx] = acc / wsum;
      } else {
        dst.values[idx] = 0.0;
        if (masked) dst.valid[idx] = 0;
      }
    }
  }
  return dst;
}

}  // namespace

bool DatasetIndex::has_category(std::int64_t id) const {
  return std::any_of(categories.begin(), categories.end(),
                     [id](const auto& c) { return c.first == id; });
}

const ImageEntry* DatasetIndex::find(std::int64_t image_id) const {
  const auto it = image_pos.find(image_id);
  return it == image_pos.end() ? nullptr : &images[it->second];
}

std::size_t DatasetIndex::annotation_count() const {
  std::size_t n = 0;
  for (const auto& img : images) n += img.boxes.size();
  return n;
}

DatasetIndex load_dataset(const std::string& ann_path, const std::string& image_root) {
  const ojson root = parse_json(read_file(ann_path), ann_path);
  if (!root.is_object()) field_error(ann_path, "document", "top level must be an object");
  for (const char* key : {"images", "annotations", "categories"}) {
    if (!root.contains(key) || !root[key].is_array()) {
      field_error(ann_path, "document", std::string("missing array '") + key + "'");
    }
  }

  DatasetIndex index;
  index.image_root = image_root;

  std::size_t i = 0;
  for (const auto& jimg : root["images"]) {
    const std::string ctx = "images[" + std::to_string(i++) + "]";
    ImageEntry e;
    e.id = require_int(jimg, "id", ann_path, ctx);
    if (!jimg.contains("file_name") || !jimg["file_name"].is_string()) {
      field_error(ann_path, ctx, "missing or non-string 'file_name'");
    }
    e.file_name = jimg["file_name"].get<std::string>();
    e.width = static_cast<int>(require_int(jimg, "width", ann_path, ctx));
    e.height = static_cast<int>(require_int(jimg, "height", ann_path, ctx));
    if (e.width <= 0 || e.height <= 0) field_error(ann_path, ctx, "non-positive dimensions");
    if (!index.image_pos.emplace(e.id, index.images.size()).second) {
      field_error(ann_path, ctx, "duplicate image id " + std::to_string(e.id));
    }
    index.images.push_back(std::move(e));
  }

  i = 0;
  for (const auto& jcat : root["categories"]) {
    const std::string ctx = "categories[" + std::to_string(i++) + "]";
    const std::int64_t id = require_int(jcat, "id", ann_path, ctx);
    if (!jcat.contains("name") || !jcat["name"].is_string()) {
      field_error(ann_path, ctx, "missing or non-string 'name'");
    }
    if (index.has_category(id)) {
      field_error(ann_path, ctx, "duplicate category id " + std::to_string(id));
    }
    index.categories.emplace_back(id, jcat["name"].get<std::string>());
  }
  std::sort(index.categories.begin(), index.categories.end());

  std::vector<std::string> dangling;
  i = 0;
  for (const auto& jann : root["annotations"]) {
    const std::string ctx = "annotations[" + std::to_string(i++) + "]";
    const std::int64_t image_id = require_int(jann, "image_id", ann_path, ctx);
    const std::int64_t category_id = require_int(jann, "category_id", ann_path, ctx);
    const auto pos = index.image_pos.find(image_id);
    if (pos == index.image_pos.end()) {
      dangling.push_back(ctx + ": unknown image_id " + std::to_string(image_id));
      continue;
    }
    if (!index.has_category(category_id)) {
      dangling.push_back(ctx + ": unknown category_id " + std::to_string(category_id));
      continue;
    }
    BoundingBox box = parse_bbox(jann, ann_path, ctx);
    box.category_id = category_id;
    ImageEntry& img = index.images[pos->second];
    const BoundingBox clamped = clamp_box(box, img.width, img.height);
    if (clamped.x != box.x || clamped.y != box.y || clamped.w != box.w || clamped.h != box.h) {
      ++index.clamped_box_count;
    }
    if (clamped.area() <= 0.0) {
      ++index.dropped_box_count;
      continue;
    }
    img.boxes.push_back(clamped);
  }

  if (!dangling.empty()) {
    std::string msg = ann_path + ": " + std::to_string(dangling.size()) + " dangling reference(s):";
    const std::size_t shown = std::min<std::size_t>(dangling.size(), 20);
    for (std::size_t k = 0; k < shown; ++k) msg += "\n  " + dangling[k];
    if (shown < dangling.size()) {
      msg += "\n  ... and " + std::to_string(dangling.size() - shown) + " more";
    }
    throw std::runtime_error(msg);
  }
  return index;
}

DetectionSet load_detections(const std::string& path, const DatasetIndex& index) {
  const ojson root = parse_json(read_file(path), path);
  if (!root.is_array()) field_error(path, "document", "COCO results must be a top-level array");

  DetectionSet set;
  std::size_t i = 0;
  for (const auto& jdet : root) {
    const std::string ctx = "detections[" + std::to_string(i++) + "]";
    const std::int64_t image_id = require_int(jdet, "image_id", path, ctx);
    const std::int64_t category_id = require_int(jdet, "category_id", path, ctx);
    if (index.find(image_id) == nullptr) {
      field_error(path, ctx, "unknown image_id " + std::to_string(image_id));
    }
    if (!index.has_category(category_id)) {
      field_error(path, ctx, "unknown category_id " + std::to_string(category_id));
    }
    Detection d;
    d.box = parse_bbox(jdet, path, ctx);
    d.box.category_id = category_id;
    d.confidence = require_number(jdet, "score", path, ctx);
    if (d.confidence < 0.0 || d.confidence > 1.0) {
      field_error(path, ctx, "score outside [0, 1]");
    }
    set.by_image[image_id].push_back(d);
    ++set.total;
  }
  return set;
}

DepthMap load_depth(const std::string& path, int target_w, int target_h,
                    const CalibrationProfile& profile) {
  if (target_w <= 0 || target_h <= 0) {
    throw std::invalid_argument("load_depth: target dimensions must be positive");
  }
  DepthMap depth;
  if (path.size() >= 5 && path.compare(path.size() - 5, 5, ".dmap") == 0) {
    depth = load_dmap(path);
  } else {
    int w = 0, h = 0;
    const auto samples = read_png_gray16(path, w, h);
    depth.width = w;
    depth.height = h;
    depth.values.resize(samples.size());
    for (std::size_t i = 0; i < samples.size(); ++i) {
      depth.values[i] = static_cast<double>(samples[i]) / profile.depth_png_scale;
    }
  }
  if (depth.width != target_w || depth.height != target_h) {
    depth = resample_depth(depth, target_w, target_h);
  }
  if (profile.depth_scale != 1.0) {
    for (auto& v : depth.values) v *= profile.depth_scale;
  }
  return depth;
}

std::optional<DepthMap> find_depth(const std::string& depth_root, std::int64_t image_id,
                                   int target_w, int target_h, const CalibrationProfile& profile) {
  namespace fs = std::filesystem;
  const std::string stem = (fs::path(depth_root) / std::to_string(image_id)).string();
  for (const char* ext : {".png", ".dmap"}) {
    const std::string candidate = stem + ext;
    if (fs::exists(candidate)) return load_depth(candidate, target_w, target_h, profile);
  }
  return std::nullopt;
}

std::string record_to_json_line(const DomainLabelRecord& r) {
  ojson j;
  j["schema"] = "v1";
  j["image_id"] = r.image_id;
  j["profile_id"] = r.profile_id;

  ojson labels;
  labels["visibility"] = assignment_text(r.visibility);
  labels["illumination"] = assignment_text(r.illumination);
  labels["color"] = assignment_text(r.color);
  labels["layout"] = assignment_text(r.layout);
  labels["scale"] = assignment_text(r.scale);
  labels["background"] = assignment_text(r.background);
  labels["orientation"] = assignment_text(r.orientation);
  labels["perspective"] = assignment_text(r.perspective);
  j["labels"] = std::move(labels);

  ojson metrics;
  metrics["visibility"] = vis_json(r.metrics.visibility);
  metrics["illumination"] = illum_json(r.metrics.illumination);
  metrics["color"] = color_json(r.metrics.color);
  metrics["layout"] = layout_json(r.metrics.layout);
  metrics["scale"] = r.metrics.scale ? scale_json(*r.metrics.scale) : ojson(nullptr);
  metrics["background"] = r.metrics.background ? bg_json(*r.metrics.background) : ojson(nullptr);
  metrics["geometry"] = r.metrics.geometry ? geom_json(*r.metrics.geometry) : ojson(nullptr);
  j["metrics"] = std::move(metrics);

  return j.dump();
}

DomainLabelRecord record_from_json_line(const std::string& line) {
  const ojson j = parse_json(line, "label record");
  if (j.value("schema", "") != "v1") {
    throw std::runtime_error("label record: unsupported schema (want \"v1\")");
  }
  DomainLabelRecord r;
  r.image_id = j.at("image_id").get<std::int64_t>();
  r.profile_id = j.at("profile_id").get<std::string>();

  const auto& labels = j.at("labels");
  r.visibility = assignment_from_text<Visibility>(labels.at("visibility").get<std::string>());
  r.illumination = assignment_from_text<Illumination>(labels.at("illumination").get<std::string>());
  r.color = assignment_from_text<ColorCast>(labels.at("color").get<std::string>());
  r.layout = assignment_from_text<LayoutClass>(labels.at("layout").get<std::string>());
  r.scale = assignment_from_text<ScaleClass>(labels.at("scale").get<std::string>());
  r.background = assignment_from_text<BackgroundClass>(labels.at("background").get<std::string>());
  r.orientation = assignment_from_text<Orientation>(labels.at("orientation").get<std::string>());
  r.perspective = assignment_from_text<Perspective>(labels.at("perspective").get<std::string>());

  const auto& metrics = j.at("metrics");
  r.metrics.visibility = vis_from(metrics.at("visibility"));
  r.metrics.illumination = illum_from(metrics.at("illumination"));
  r.metrics.color = color_from(metrics.at("color"));
  r.metrics.layout = layout_from(metrics.at("layout"));
  if (!metrics.at("scale").is_null()) r.metrics.scale = scale_from(metrics.at("scale"));
  if (!metrics.at("background").is_null()) r.metrics.background = bg_from(metrics.at("background"));
  if (!metrics.at("geometry").is_null()) r.metrics.geometry = geom_from(metrics.at("geometry"));
  return r;
}

void write_labels(const std::vector<DomainLabelRecord>& records, const std::string& path) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw IoError(path + ": cannot open for writing");
  for (const auto& r : records) out << record_to_json_line(r) << '\n';
  out.flush();
  if (!out) throw IoError(path + ": write failed");
}

std::vector<DomainLabelRecord> read_labels(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError(path + ": cannot open file");
  std::vector<DomainLabelRecord> records;
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (line.empty()) continue;
    try {
      records.push_back(record_from_json_line(line));
    } catch (const std::exception& e) {
      throw std::runtime_error(path + ":" + std::to_string(lineno) + ": " + e.what());
    }
  }
  return records;
}

void write_labels_csv(const std::vector<DomainLabelRecord>& records, const std::string& path) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw IoError(path + ": cannot open for writing");
  out << "image_id,visibility,illumination,color,layout,scale,background,orientation,"
         "perspective,visibility_score,median_luminance,overexposed_ratio,underexposed_ratio,"
         "color_distortion,blue_green_ratio,object_count,coverage,overlap,mean_norm_area,"
         "small_ratio,large_ratio,background_score,delta_lr,delta_tb,depth_range,"
         "brightness_gradient,profile_id\n";
  char buf[64];
  const auto num = [&buf](double v) {
    std::snprintf(buf, sizeof buf, "%.9g", v);
    return std::string(buf);
  };
  for (const auto& r : records) {
    out << r.image_id;
    for (const auto c : kAllCategories) out << ',' << r.label_text(c);
    out << ',' << num(r.metrics.visibility.score) << ',' << num(r.metrics.illumination.median_luminance)
        << ',' << num(r.metrics.illumination.overexposed_ratio) << ','
        << num(r.metrics.illumination.underexposed_ratio) << ',' << num(r.metrics.color.distortion)
        << ',' << num(r.metrics.color.blue_green_ratio) << ',' << r.metrics.layout.object_count
        << ',' << num(r.metrics.layout.coverage) << ',' << num(r.metrics.layout.overlap);
    if (r.metrics.scale) {
      out << ',' << num(r.metrics.scale->mean_norm_area) << ',' << num(r.metrics.scale->small_ratio)
          << ',' << num(r.metrics.scale->large_ratio);
    } else {
      out << ",,,";
    }
    out << ',' << (r.metrics.background ? num(r.metrics.background->score) : std::string());
    if (r.metrics.geometry) {
      out << ',' << num(r.metrics.geometry->delta_lr) << ',' << num(r.metrics.geometry->delta_tb)
          << ',' << num(r.metrics.geometry->depth_range) << ','
          << num(r.metrics.geometry->brightness_gradient);
    } else {
      out << ",,,,";
    }
    out << ',' << r.profile_id << '\n';
  }
  out.flush();
  if (!out) throw IoError(path + ": write failed");
}

}  // namespace domainscope
