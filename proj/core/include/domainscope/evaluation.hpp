#ifndef DOMAINSCOPE_EVALUATION_HPP
#define DOMAINSCOPE_EVALUATION_HPP

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "domainscope/boxes.hpp"
#include "domainscope/dataset_io.hpp"
#include "domainscope/labels.hpp"
#include "domainscope/record.hpp"

namespace domainscope {

/// One image's ground truths and detections; the unit evaluation pools over.
struct ImageEval {
  std::int64_t image_id = 0;
  std::vector<BoundingBox> gts;
  std::vector<Detection> dets;
};

/// AP integration mode: exact area under the precision envelope, or the
/// 101-point recall sampling most tooling reports. interp_101 is the
/// default; all_points is kept for oracle comparisons.
enum class ApMode { all_points, interp_101 };

/// The ten COCO-style IoU thresholds 0.50:0.05:0.95.
std::vector<double> coco_iou_thresholds();

struct MatchResult {
  // Aligned with the input detection order; value = matched GT index.
  std::vector<std::optional<std::size_t>> det_to_gt;
  std::vector<std::uint8_t> gt_matched;
  std::size_t tp = 0;
  std::size_t fp = 0;
  std::size_t fn = 0;
};

/// Greedy class-consistent matching: detections in confidence-descending
/// order (ties by input order) each claim the unmatched same-class GT with
/// the highest IoU >= iou_thresh (IoU ties to the earliest GT).
MatchResult match_detections(const std::vector<BoundingBox>& gts,
                             const std::vector<Detection>& dets, double iou_thresh);

struct PRCurve {
  std::int64_t category_id = 0;
  std::vector<std::pair<double, double>> points;  // (recall, precision) per pooled detection
  std::optional<double> ap;        // absent when the class has no GT in the set
  std::size_t gt_count = 0;
  std::size_t detection_count = 0;  // scored dets; would-be-scored when no GT
};

/// Detections pooled over the image set for one class, matched per image
/// at iou_thresh; cumulative TP/FP in confidence order define the curve.
PRCurve compute_pr_curve(const std::vector<ImageEval>& images, std::int64_t category_id,
                         double iou_thresh, ApMode mode);

struct ClassAP {
  std::int64_t category_id = 0;
  std::optional<double> ap50;
  std::size_t gt_count = 0;
  std::size_t detection_count = 0;
};

struct MapResult {
  std::optional<double> map50;     // mean AP at iou_list.front() over classes with GT
  std::optional<double> map50_95;  // additionally averaged over all thresholds
  std::vector<ClassAP> per_class;  // at iou_list.front(), one entry per known class
};

/// Per-class AP at every threshold in iou_list; class means ignore classes
/// without ground truth in the set (their AP is absent, never zero).
MapResult compute_map(const std::vector<ImageEval>& images,
                      const std::vector<std::int64_t>& class_ids,
                      const std::vector<double>& iou_list, ApMode mode);

/// Dataset-level counts at a fixed operating point (detections below
/// conf_thresh dropped, matching at iou_thresh).
struct OperatingPointStats {
  std::size_t gt_count = 0;
  std::size_t kept_detections = 0;
  std::size_t tp = 0;
  std::size_t fp = 0;
  std::size_t fn = 0;
  std::optional<double> precision;  // absent when nothing was kept
  double recall = 0.0;
  double fp_per_object = 0.0;  // sum FP / sum GT objects
  double fn_per_object = 0.0;  // sum FN / sum GT objects
};

/// nullopt when the stratum holds no ground-truth objects (unscorable).
std::optional<OperatingPointStats> operating_point(const std::vector<ImageEval>& images,
                                                   double iou_thresh = 0.5,
                                                   double conf_thresh = 0.5);

/// (FP per object, FN per object) at the standard IoU 0.5 / confidence 0.5
/// operating point; nullopt when unscorable.
std::optional<std::pair<double, double>> failure_rates(const std::vector<ImageEval>& images,
                                                       double iou_thresh = 0.5,
                                                       double conf_thresh = 0.5);

/// Condition -> image ids (record order preserved). Ordered categories
/// yield their two endpoints; color yields blue/natural/green; unlabeled
/// records are excluded from that category's strata only.
std::vector<std::pair<std::string, std::vector<std::int64_t>>> stratify(
    const std::vector<DomainLabelRecord>& records, DomainCategory category);

/// Relative change vs the mixed row, bucketed |d| < 3% slight, 3..8%
/// moderate, > 8% strong; rendered as 1-3 ASCII arrows, "^" up / "v" down,
/// empty for an exact zero.
struct Change {
  double relative = 0.0;  // (stratum - mixed) / mixed
  std::string arrow;

  bool operator==(const Change&) const = default;
};

Change classify_change(double mixed, double stratum);

struct ReportRow {
  std::string axis;       // "mixed" or the category name
  std::string condition;  // "mixed" or the label text
  std::size_t image_count = 0;
  std::size_t object_count = 0;
  std::optional<double> map50, map50_95, precision, recall, fp_per_object, fn_per_object;
  std::vector<ClassAP> per_class;
  std::map<std::string, Change> changes;  // keyed by metric name, vs mixed
};

struct StratifiedReport {
  std::vector<std::pair<std::int64_t, std::string>> classes;  // id -> name
  ReportRow mixed;
  std::vector<ReportRow> rows;  // 17 condition rows in reporting order
  ApMode mode = ApMode::interp_101;
};

/// Mixed row over the full dataset, one row per stratum condition, change
/// buckets on every scorable metric. Throws when a label record references
/// an image the dataset does not know.
StratifiedReport build_report(const DatasetIndex& dataset, const DetectionSet& dets,
                              const std::vector<DomainLabelRecord>& labels,
                              ApMode mode = ApMode::interp_101);

// Renderings: machine CSV, aligned text with arrow notation, and a
// markdown table with conditions as columns grouped by axis.
std::string report_to_csv(const StratifiedReport& report);
std::string report_to_text(const StratifiedReport& report);
std::string report_to_markdown(const StratifiedReport& report);

// Loss-free persistence so stored runs can be re-rendered later.
std::string report_to_json(const StratifiedReport& report);
StratifiedReport report_from_json(const std::string& text);

/// One CSV per (axis, condition, class) with the raw curve and its
/// precision envelope; the header carries the GT-instance count. Classes
/// without ground truth in a stratum get a manifest note instead of a
/// file. Returns the manifest path.
std::string export_pr_curves(const DatasetIndex& dataset, const DetectionSet& dets,
                             const std::vector<DomainLabelRecord>& labels,
                             const std::string& out_dir, double iou_thresh = 0.5);

}  // namespace domainscope

#endif  // DOMAINSCOPE_EVALUATION_HPP
