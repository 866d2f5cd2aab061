#include "domainscope/calibration.hpp"
#include "domainscope/errors.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <random>
#include <sstream>
#include <unordered_map>

#include <nlohmann/json.hpp>

#include "domainscope/hash.hpp"
#include "domainscope/record.hpp"

namespace domainscope {

using json = nlohmann::ordered_json;

double apply_normalization(double raw, const NormalizationEntry& entry) {
  if (entry.degenerate) return 0.0;
  double x = entry.log_transform ? std::log1p(raw) : raw;
  x = std::clamp(x, entry.clip_lo, entry.clip_hi);
  return (x - entry.clip_lo) / (entry.clip_hi - entry.clip_lo);
}

const NormalizationEntry& CalibrationProfile::entry(std::string_view metric) const {
  auto it = normalization.find(std::string(metric));
  if (it == normalization.end()) {
    throw std::invalid_argument("profile missing normalization entry for metric: " +
                                std::string(metric));
  }
  return it->second;
}

void CalibrationProfile::validate() const {
  for (auto name : kNormalizedMetricNames) {
    const auto& e = entry(name);
    if (!e.degenerate && !(e.clip_lo < e.clip_hi)) {
      throw std::invalid_argument("normalization entry for " + std::string(name) +
                                  ": clip_lo must be < clip_hi");
    }
  }
  auto check_weights = [](const auto& ws, const char* what) {
    double sum = 0.0;
    for (double w : ws) {
      if (w < 0.0) throw std::invalid_argument(std::string(what) + ": negative weight");
      sum += w;
    }
    if (std::abs(sum - 1.0) > 1e-9) {
      throw std::invalid_argument(std::string(what) + ": weights must sum to 1");
    }
  };
  check_weights(visibility_weights, "visibility_weights");
  check_weights(background_weights, "background_weights");

  auto check_pair = [](double lo, double hi, const char* what) {
    if (!(lo < hi)) throw std::invalid_argument(std::string(what) + ": bounds out of order");
  };
  check_pair(visibility_low, visibility_high, "visibility thresholds");
  check_pair(illum_dark, illum_bright, "illumination thresholds");
  check_pair(luminance_under, luminance_over, "exposure luminance thresholds");
  check_pair(bgr_green_max, bgr_blue_min, "BGR thresholds");
  check_pair(layout_sparse_count, layout_crowded_count, "layout count thresholds");
  check_pair(layout_sparse_coverage, layout_crowded_coverage, "layout coverage thresholds");
  check_pair(layout_sparse_overlap, layout_crowded_overlap, "layout overlap thresholds");
  check_pair(scale_small_area, scale_large_area, "scale area cutoffs");
  check_pair(background_simple, background_complex, "background thresholds");
  check_pair(orient_upright, orient_rotated, "orientation thresholds");
  check_pair(persp_nadir_tb, persp_front_tb, "perspective delta thresholds");
  check_pair(persp_nadir_range, persp_front_range, "perspective range thresholds");
  check_pair(canny_low, canny_high, "canny thresholds");
  if (!(split_fraction > 0.0 && split_fraction < 1.0)) {
    throw std::invalid_argument("split_fraction must be in (0, 1)");
  }
  if (!(freq_cutoff > 0.0 && freq_cutoff < 1.0)) {
    throw std::invalid_argument("freq_cutoff must be in (0, 1)");
  }
}

CalibrationProfile CalibrationProfile::with_identity_normalization() {
  CalibrationProfile p;
  for (auto name : kNormalizedMetricNames) {
    p.normalization[std::string(name)] = NormalizationEntry{false, 0.0, 1.0, false};
  }
  return p;
}

namespace {

json entry_to_json(const NormalizationEntry& e) {
  return json{{"log_transform", e.log_transform},
              {"clip_lo", e.clip_lo},
              {"clip_hi", e.clip_hi},
              {"degenerate", e.degenerate}};
}

NormalizationEntry entry_from_json(const json& j) {
  NormalizationEntry e;
  e.log_transform = j.at("log_transform").get<bool>();
  e.clip_lo = j.at("clip_lo").get<double>();
  e.clip_hi = j.at("clip_hi").get<double>();
  e.degenerate = j.at("degenerate").get<bool>();
  return e;
}

// Fixed field order; the content hash is FNV-1a over this serialization.
json profile_body(const CalibrationProfile& p) {
  json j;
  j["schema"] = "v1";
  json norm;
  for (auto name : kNormalizedMetricNames) {
    norm[std::string(name)] = entry_to_json(p.entry(name));
  }
  j["normalization"] = norm;
  j["thresholds"] = json{{"visibility_low", p.visibility_low},
                         {"visibility_high", p.visibility_high},
                         {"illum_dark", p.illum_dark},
                         {"illum_bright", p.illum_bright},
                         {"luminance_over", p.luminance_over},
                         {"luminance_under", p.luminance_under},
                         {"extreme_under", p.extreme_under},
                         {"extreme_over", p.extreme_over},
                         {"color_distortion", p.color_distortion},
                         {"bgr_green_max", p.bgr_green_max},
                         {"bgr_blue_min", p.bgr_blue_min},
                         {"layout_sparse_count", p.layout_sparse_count},
                         {"layout_crowded_count", p.layout_crowded_count},
                         {"layout_sparse_coverage", p.layout_sparse_coverage},
                         {"layout_crowded_coverage", p.layout_crowded_coverage},
                         {"layout_sparse_overlap", p.layout_sparse_overlap},
                         {"layout_crowded_overlap", p.layout_crowded_overlap},
                         {"scale_small_area", p.scale_small_area},
                         {"scale_large_area", p.scale_large_area},
                         {"scale_ratio", p.scale_ratio},
                         {"background_simple", p.background_simple},
                         {"background_complex", p.background_complex},
                         {"orient_upright", p.orient_upright},
                         {"orient_rotated", p.orient_rotated},
                         {"persp_nadir_tb", p.persp_nadir_tb},
                         {"persp_nadir_range", p.persp_nadir_range},
                         {"persp_front_tb", p.persp_front_tb},
                         {"persp_front_range", p.persp_front_range},
                         {"persp_front_brightness", p.persp_front_brightness}};
  j["weights"] = json{{"visibility", p.visibility_weights}, {"background", p.background_weights}};
  j["depth_scale"] = p.depth_scale;
  j["depth_png_scale"] = p.depth_png_scale;
  j["split_fraction"] = p.split_fraction;
  j["min_region_pixels"] = p.min_region_pixels;
  j["depth_range_trim"] = p.depth_range_trim;
  j["canny"] = json{{"low", p.canny_low}, {"high", p.canny_high}, {"sigma", p.canny_sigma}};
  j["fast_threshold"] = p.fast_threshold;
  j["freq_cutoff"] = p.freq_cutoff;
  j["max_failure_fraction"] = p.max_failure_fraction;
  j["notes"] = p.notes;
  return j;
}

}  // namespace

std::string CalibrationProfile::profile_id() const {
  return fnv1a64_hex(profile_body(*this).dump());
}

std::string profile_to_json(const CalibrationProfile& p) {
  json j = profile_body(p);
  j["profile_id"] = p.profile_id();
  return j.dump(2) + "\n";
}

CalibrationProfile profile_from_json(const std::string& text) {
  json j;
  try {
    j = json::parse(text);
  } catch (const json::parse_error& e) {
    throw std::invalid_argument(std::string("profile parse error: ") + e.what());
  }
  if (j.at("schema").get<std::string>() != "v1") {
    throw std::invalid_argument("unsupported profile schema: " +
                                j.at("schema").get<std::string>());
  }
  CalibrationProfile p;
  for (auto name : kNormalizedMetricNames) {
    p.normalization[std::string(name)] = entry_from_json(j.at("normalization").at(std::string(name)));
  }
  const json& t = j.at("thresholds");
  p.visibility_low = t.at("visibility_low").get<double>();
  p.visibility_high = t.at("visibility_high").get<double>();
  p.illum_dark = t.at("illum_dark").get<double>();
  p.illum_bright = t.at("illum_bright").get<double>();
  p.luminance_over = t.at("luminance_over").get<double>();
  p.luminance_under = t.at("luminance_under").get<double>();
  p.extreme_under = t.at("extreme_under").get<double>();
  p.extreme_over = t.at("extreme_over").get<double>();
  p.color_distortion = t.at("color_distortion").get<double>();
  p.bgr_green_max = t.at("bgr_green_max").get<double>();
  p.bgr_blue_min = t.at("bgr_blue_min").get<double>();
  p.layout_sparse_count = t.at("layout_sparse_count").get<double>();
  p.layout_crowded_count = t.at("layout_crowded_count").get<double>();
  p.layout_sparse_coverage = t.at("layout_sparse_coverage").get<double>();
  p.layout_crowded_coverage = t.at("layout_crowded_coverage").get<double>();
  p.layout_sparse_overlap = t.at("layout_sparse_overlap").get<double>();
  p.layout_crowded_overlap = t.at("layout_crowded_overlap").get<double>();
  p.scale_small_area = t.at("scale_small_area").get<double>();
  p.scale_large_area = t.at("scale_large_area").get<double>();
  p.scale_ratio = t.at("scale_ratio").get<double>();
  p.background_simple = t.at("background_simple").get<double>();
  p.background_complex = t.at("background_complex").get<double>();
  p.orient_upright = t.at("orient_upright").get<double>();
  p.orient_rotated = t.at("orient_rotated").get<double>();
  p.persp_nadir_tb = t.at("persp_nadir_tb").get<double>();
  p.persp_nadir_range = t.at("persp_nadir_range").get<double>();
  p.persp_front_tb = t.at("persp_front_tb").get<double>();
  p.persp_front_range = t.at("persp_front_range").get<double>();
  p.persp_front_brightness = t.at("persp_front_brightness").get<double>();
  p.visibility_weights = j.at("weights").at("visibility").get<std::array<double, 4>>();
  p.background_weights = j.at("weights").at("background").get<std::array<double, 3>>();
  p.depth_scale = j.at("depth_scale").get<double>();
  p.depth_png_scale = j.at("depth_png_scale").get<double>();
  p.split_fraction = j.at("split_fraction").get<double>();
  p.min_region_pixels = j.at("min_region_pixels").get<int>();
  p.depth_range_trim = j.at("depth_range_trim").get<bool>();
  p.canny_low = j.at("canny").at("low").get<double>();
  p.canny_high = j.at("canny").at("high").get<double>();
  p.canny_sigma = j.at("canny").at("sigma").get<double>();
  p.fast_threshold = j.at("fast_threshold").get<double>();
  p.freq_cutoff = j.at("freq_cutoff").get<double>();
  p.max_failure_fraction = j.at("max_failure_fraction").get<double>();
  p.notes = j.value("notes", std::string());
  p.validate();
  return p;
}

CalibrationProfile load_profile(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open profile: " + path);
  std::stringstream ss;
  ss << in.rdbuf();
  return profile_from_json(ss.str());
}

void save_profile(const CalibrationProfile& p, const std::string& path) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw std::runtime_error("cannot write profile: " + path);
  out << profile_to_json(p);
  if (!out.good()) throw IoError("write failed: " + path);
}

void StatsAccumulator::add(double value) {
  if (count_ == 0) {
    min_ = max_ = value;
  } else {
    min_ = std::min(min_, value);
    max_ = std::max(max_, value);
  }
  sum_ += value;
  ++count_;
  if (retained_.size() < kRetentionCap) {
    retained_.push_back(value);
  } else {
    // Algorithm R with a counter-derived index; deterministic per sequence.
    std::mt19937_64 rng(count_ * 0x9e3779b97f4a7c15ull);
    const std::uint64_t j = rng() % count_;
    if (j < kRetentionCap) retained_[static_cast<std::size_t>(j)] = value;
  }
}

void StatsAccumulator::merge(const StatsAccumulator& other) {
  if (other.count_ == 0) return;
  if (count_ == 0) {
    *this = other;
    return;
  }
  min_ = std::min(min_, other.min_);
  max_ = std::max(max_, other.max_);
  sum_ += other.sum_;
  count_ += other.count_;
  retained_.insert(retained_.end(), other.retained_.begin(), other.retained_.end());
  if (retained_.size() > kRetentionCap) {
    std::mt19937_64 rng(count_ ^ (retained_.size() << 17));
    std::shuffle(retained_.begin(), retained_.end(), rng);
    retained_.resize(kRetentionCap);
  }
}

CorpusStats StatsAccumulator::finalize() const {
  if (count_ < 2) {
    throw std::invalid_argument("collect_stats: need at least 2 samples, got " +
                                std::to_string(count_));
  }
  CorpusStats s;
  s.count = count_;
  s.min = min_;
  s.max = max_;
  s.mean = sum_ / static_cast<double>(count_);

  std::vector<double> sorted = retained_;
  std::sort(sorted.begin(), sorted.end());

  // Nearest-rank percentile, lower median convention.
  auto pct = [&](double q) {
    const auto n = sorted.size();
    std::size_t rank = static_cast<std::size_t>(std::ceil(q / 100.0 * static_cast<double>(n)));
    if (rank > 0) --rank;
    return sorted[std::min(rank, n - 1)];
  };
  s.p1 = pct(1.0);
  s.p2 = pct(2.0);
  s.p25 = pct(25.0);
  s.p50 = pct(50.0);
  s.p75 = pct(75.0);
  s.p98 = pct(98.0);
  s.p99 = pct(99.0);

  const double span = s.max - s.min;
  for (double v : sorted) {
    std::size_t bin = 0;
    if (span > 0.0) {
      bin = static_cast<std::size_t>((v - s.min) / span * 256.0);
      if (bin > 255) bin = 255;
    }
    ++s.histogram[bin];
  }
  // Subsampled beyond the retention cap: rescale so counts sum to count.
  if (sorted.size() < count_) {
    const double scale = static_cast<double>(count_) / static_cast<double>(sorted.size());
    std::uint64_t total = 0;
    std::size_t largest = 0;
    for (std::size_t i = 0; i < s.histogram.size(); ++i) {
      s.histogram[i] = static_cast<std::uint64_t>(std::llround(s.histogram[i] * scale));
      total += s.histogram[i];
      if (s.histogram[i] > s.histogram[largest]) largest = i;
    }
    s.histogram[largest] += count_ - std::min(count_, total);
    if (total > count_) s.histogram[largest] -= std::min(s.histogram[largest], total - count_);
  }
  return s;
}

NormalizationEntry fit_normalization(const CorpusStats& stats, bool log_transform) {
  NormalizationEntry e;
  e.log_transform = log_transform;
  // log1p is monotone, so percentiles commute with the transform.
  e.clip_lo = log_transform ? std::log1p(stats.p1) : stats.p1;
  e.clip_hi = log_transform ? std::log1p(stats.p99) : stats.p99;
  if (!(e.clip_lo < e.clip_hi)) {
    e.degenerate = true;
    e.clip_hi = e.clip_lo;
  }
  return e;
}

namespace {


}  // namespace

AgreementReport agreement_report(const std::vector<DomainLabelRecord>& autos,
                                 const std::vector<ManualLabels>& manual) {
  if (manual.empty()) {
    throw std::invalid_argument("agreement_report: empty manual label set");
  }
  std::unordered_map<std::int64_t, const DomainLabelRecord*> by_id;
  for (const auto& r : autos) by_id[r.image_id] = &r;

  AgreementReport report;
  for (DomainCategory cat : kAllCategories) {
    const std::string cat_name{to_string(cat)};
    ConfusionMatrix cm;
    cm.classes = category_labels(cat);
    cm.counts.assign(cm.classes.size(), std::vector<std::uint64_t>(cm.classes.size(), 0));

    auto class_index = [&](const std::string& label) -> int {
      for (std::size_t i = 0; i < cm.classes.size(); ++i) {
        if (cm.classes[i] == label) return static_cast<int>(i);
      }
      return -1;
    };

    for (const auto& m : manual) {
      auto rec_it = by_id.find(m.image_id);
      if (rec_it == by_id.end()) {
        throw std::invalid_argument("agreement_report: unknown image_id " +
                                    std::to_string(m.image_id));
      }
      auto lab_it = m.labels.find(cat_name);
      if (lab_it == m.labels.end()) continue;
      const int mi = class_index(lab_it->second);
      if (mi < 0) {
        throw std::invalid_argument("agreement_report: unknown " + cat_name + " label '" +
                                    lab_it->second + "'");
      }
      const DomainLabelRecord& rec = *rec_it->second;
      if (!rec.is_labeled(cat)) continue;  // unlabeled excluded
      const int ai = class_index(rec.label_text(cat));
      cm.counts[static_cast<std::size_t>(mi)][static_cast<std::size_t>(ai)]++;
      cm.total++;
    }

    if (cm.total > 0) {
      std::uint64_t trace = 0;
      for (std::size_t i = 0; i < cm.classes.size(); ++i) trace += cm.counts[i][i];
      cm.accuracy = static_cast<double>(trace) / static_cast<double>(cm.total);
      report.per_category[cat_name] = std::move(cm);
    }
  }
  return report;
}

std::vector<ManualLabels> load_manual_labels(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open manual labels: " + path);
  std::stringstream buf;
  buf << in.rdbuf();

  json j;
  try {
    j = json::parse(buf.str());
  } catch (const json::parse_error& e) {
    throw std::invalid_argument(path + ": manual labels parse error: " + e.what());
  }
  if (!j.is_array()) {
    throw std::invalid_argument(path + ": manual labels must be a JSON array");
  }

  std::vector<ManualLabels> out;
  out.reserve(j.size());
  for (const auto& item : j) {
    ManualLabels m;
    if (!item.is_object() || !item.contains("image_id") || !item.contains("labels")) {
      throw std::invalid_argument(path + ": each entry needs image_id and labels");
    }
    if (!item.at("image_id").is_number_integer()) {
      throw std::invalid_argument(path + ": image_id must be an integer");
    }
    m.image_id = item.at("image_id").get<std::int64_t>();
    for (const auto& [key, value] : item.at("labels").items()) {
      enum_from_string<DomainCategory>(key);  // rejects unknown categories
      if (!value.is_string()) {
        throw std::invalid_argument(path + ": label for " + key + " must be a string");
      }
      m.labels[key] = value.get<std::string>();
    }
    out.push_back(std::move(m));
  }
  return out;
}

std::string agreement_to_json(const AgreementReport& report) {
  json j;
  j["schema"] = "v1";
  json cats = json::object();
  for (const auto& [name, cm] : report.per_category) {
    json entry;
    entry["classes"] = cm.classes;
    entry["counts"] = cm.counts;  // rows manual, columns automatic
    entry["total"] = cm.total;
    entry["accuracy"] = cm.accuracy;
    cats[name] = std::move(entry);
  }
  j["per_category"] = std::move(cats);
  return j.dump(2) + "\n";
}

std::vector<ThresholdSweepRow> threshold_sweep(const std::vector<double>& scores, double lo,
                                               double hi, int steps) {
  if (steps < 1 || !(lo < hi)) {
    throw std::invalid_argument("threshold_sweep: need lo < hi and steps >= 1");
  }
  std::vector<ThresholdSweepRow> rows;
  rows.reserve(static_cast<std::size_t>(steps) + 1);
  for (int i = 0; i <= steps; ++i) {
    ThresholdSweepRow row;
    row.threshold = lo + (hi - lo) * i / steps;
    for (double sc : scores) {
      if (sc < row.threshold) {
        ++row.below;
      } else {
        ++row.at_or_above;
      }
    }
    rows.push_back(row);
  }
  return rows;
}

}  // namespace domainscope
