#ifndef DOMAINSCOPE_CALIBRATION_HPP
#define DOMAINSCOPE_CALIBRATION_HPP

#include <array>
#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "domainscope/labels.hpp"

namespace domainscope {

/// Optional log1p followed by clipped min-max onto [0, 1].
struct NormalizationEntry {
  bool log_transform = false;
  double clip_lo = 0.0;
  double clip_hi = 1.0;
  bool degenerate = false;  // lo == hi at fit time; maps everything to 0

  bool operator==(const NormalizationEntry&) const = default;
};

/// Maps raw onto [0,1]: x = log1p(raw) when flagged, clamp to [lo, hi],
/// then (x - lo) / (hi - lo). A degenerate entry returns 0.
double apply_normalization(double raw, const NormalizationEntry& entry);

// Names of the raw metrics that carry normalization entries.
inline constexpr std::array<std::string_view, 7> kNormalizedMetricNames = {
    "tenengrad",           "laplacian_var",   "rms_contrast",     "freq_energy",
    "bg_keypoint_density", "bg_edge_density", "bg_laplacian_mean"};

/// Complete, versioned parameter set that makes labeling reproducible.
/// Category thresholds default to the framework's published values.
struct CalibrationProfile {
  // Per-raw-metric normalization, keyed by kNormalizedMetricNames entries.
  std::map<std::string, NormalizationEntry> normalization;

  // Visibility score thresholds.
  double visibility_low = 0.35;
  double visibility_high = 0.65;
  // Illumination.
  double illum_dark = 100.0;
  double illum_bright = 130.0;
  double luminance_over = 225.0;
  double luminance_under = 30.0;
  double extreme_under = 0.5;
  double extreme_over = 0.5;
  // Color.
  double color_distortion = 0.6;
  double bgr_green_max = 0.7;
  double bgr_blue_min = 0.8;
  // Layout.
  double layout_sparse_count = 4.0;
  double layout_crowded_count = 12.0;
  double layout_sparse_coverage = 0.05;
  double layout_crowded_coverage = 0.4;
  double layout_sparse_overlap = 0.05;
  double layout_crowded_overlap = 0.15;
  // Scale.
  double scale_small_area = 0.005;
  double scale_large_area = 0.025;
  double scale_ratio = 0.5;
  // Background score.
  double background_simple = 0.15;
  double background_complex = 0.4;
  // Orientation / perspective (depth-model native units).
  double orient_upright = 1.0;
  double orient_rotated = 2.5;
  double persp_nadir_tb = 2.0;
  double persp_nadir_range = 3.0;
  double persp_front_tb = 4.0;
  double persp_front_range = 5.0;
  double persp_front_brightness = 50.0;

  // Score weights (T, V_lap, R, F) and (K, E, M); each group sums to 1.
  std::array<double, 4> visibility_weights = {0.35, 0.30, 0.20, 0.15};
  std::array<double, 3> background_weights = {0.45, 0.35, 0.20};

  // Depth ingestion and geometry regions.
  double depth_scale = 1.0;
  double depth_png_scale = 256.0;
  double split_fraction = 0.5;
  int min_region_pixels = 100;
  bool depth_range_trim = true;  // p2/p98 trimming of R_D

  // Operator parameters.
  double canny_low = 50.0;
  double canny_high = 150.0;
  double canny_sigma = 1.4;
  double fast_threshold = 20.0;
  double freq_cutoff = 0.25;

  // Pipeline.
  double max_failure_fraction = 0.05;

  std::string notes;  // free-form provenance, e.g. "non-canonical"

  /// Content fingerprint over every field above (not the id itself).
  std::string profile_id() const;

  const NormalizationEntry& entry(std::string_view metric) const;

  /// Throws std::invalid_argument when an invariant is broken (clip_lo >=
  /// clip_hi on a non-degenerate entry, weight group not summing to 1,
  /// an unordered threshold pair, or a missing normalization entry).
  void validate() const;

  /// Published-rule default thresholds with identity normalization entries.
  static CalibrationProfile with_identity_normalization();

  bool operator==(const CalibrationProfile&) const = default;
};

std::string profile_to_json(const CalibrationProfile& p);
CalibrationProfile profile_from_json(const std::string& text);
CalibrationProfile load_profile(const std::string& path);
void save_profile(const CalibrationProfile& p, const std::string& path);

/// Corpus distribution snapshot for one raw metric.
struct CorpusStats {
  std::uint64_t count = 0;
  double min = 0.0;
  double max = 0.0;
  double mean = 0.0;
  std::array<std::uint64_t, 256> histogram{};  // fixed bins over [min, max]
  // Nearest-rank percentiles (lower median convention).
  double p1 = 0.0, p2 = 0.0, p25 = 0.0, p50 = 0.0, p75 = 0.0, p98 = 0.0, p99 = 0.0;

  double bin_width() const { return (max - min) / 256.0; }
};

/// Streaming accumulator: exact order statistics up to the retention cap,
/// deterministic reservoir sampling beyond. Merge is associative and
/// commutative for count/min/max/sum; percentiles are exact while both
/// sides are under the cap.
class StatsAccumulator {
 public:
  static constexpr std::size_t kRetentionCap = 1'000'000;

  void add(double value);
  void merge(const StatsAccumulator& other);

  std::uint64_t count() const { return count_; }

  /// Throws std::invalid_argument with fewer than 2 samples.
  CorpusStats finalize() const;

 private:
  std::uint64_t count_ = 0;
  double min_ = 0.0;
  double max_ = 0.0;
  double sum_ = 0.0;
  std::vector<double> retained_;
};

/// clip_lo = p1 and clip_hi = p99 of the (optionally log1p-transformed)
/// distribution; flags the entry degenerate when they coincide.
NormalizationEntry fit_normalization(const CorpusStats& stats, bool log_transform);

/// One manually labeled image: category -> label string.
struct ManualLabels {
  std::int64_t image_id = 0;
  std::map<std::string, std::string> labels;  // keyed by category name
};

struct ConfusionMatrix {
  std::vector<std::string> classes;            // row/column order
  std::vector<std::vector<std::uint64_t>> counts;  // [manual][auto]
  std::uint64_t total = 0;
  double accuracy = 0.0;  // trace / total
};

struct AgreementReport {
  std::map<std::string, ConfusionMatrix> per_category;  // keyed by category name
};

struct DomainLabelRecord;

/// Per-category confusion matrices of automatic vs manual labels,
/// unlabeled records excluded. Throws on an unknown image_id or an empty
/// manual set.
AgreementReport agreement_report(const std::vector<DomainLabelRecord>& autos,
                                 const std::vector<ManualLabels>& manual);

/// JSON array of {"image_id": N, "labels": {category: label, ...}}.
std::vector<ManualLabels> load_manual_labels(const std::string& path);

std::string agreement_to_json(const AgreementReport& report);

/// Category populations of a score list as one threshold moves across
/// [lo, hi] in `steps` even increments; recalibration aid, makes no choice.
struct ThresholdSweepRow {
  double threshold = 0.0;
  std::uint64_t below = 0;
  std::uint64_t at_or_above = 0;
};
std::vector<ThresholdSweepRow> threshold_sweep(const std::vector<double>& scores, double lo,
                                               double hi, int steps);

}  // namespace domainscope

#endif  // DOMAINSCOPE_CALIBRATION_HPP
