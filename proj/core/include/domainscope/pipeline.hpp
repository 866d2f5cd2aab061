#ifndef DOMAINSCOPE_PIPELINE_HPP
#define DOMAINSCOPE_PIPELINE_HPP

#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "domainscope/calibration.hpp"
#include "domainscope/dataset_io.hpp"
#include "domainscope/record.hpp"

namespace domainscope {

/// Raised when more than profile.max_failure_fraction of a job's images
/// fail to decode or process; distinct so callers can map it to the
/// data-quality exit code.
struct DataQualityError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct LabelingJob {
  DatasetIndex dataset;
  std::optional<std::string> depth_root;  // depth_root/<image_id>.png|.dmap
  CalibrationProfile profile;
  int worker_count = 1;
};

/// One image end to end: grayscale computed once, appearance and scene
/// metrics always, geometry when depth is present. Per-category exclusions
/// (no objects, tiny background, underpopulated depth regions, no depth)
/// become unlabeled variants rather than failures. Deterministic for fixed
/// inputs and profile. Images must be at least 7x7 (the smallest raster
/// every operator accepts).
DomainLabelRecord label_image(const RasterImage& img, const std::vector<BoundingBox>& boxes,
                              const std::optional<DepthMap>& depth,
                              const CalibrationProfile& profile);

struct ImageFailure {
  std::int64_t image_id = 0;
  std::string file_name;
  std::string error;
};

struct SummaryRow {
  std::string category;
  std::string label;  // "low", ..., or "unlabeled(<reason>)"
  std::size_t count = 0;
  double percent = 0.0;  // of successfully labeled images
};

/// Per-axis population table plus the failure list; percentages within one
/// category sum to 100 (of labeled images) up to rounding.
struct LabelingSummary {
  std::size_t image_count = 0;  // records that were produced
  std::vector<SummaryRow> rows;
  std::vector<ImageFailure> failures;
};

struct JobResult {
  std::vector<DomainLabelRecord> records;  // dataset order, independent of workers
  LabelingSummary summary;
};

/// Label every dataset image with worker_count threads. Output order and
/// content are worker-count independent. Per-image errors are collected;
/// DataQualityError is thrown when the failure fraction exceeds the
/// profile's limit.
JobResult run_job(const LabelingJob& job);

/// The population table recomputed from records alone.
LabelingSummary summarize(const std::vector<DomainLabelRecord>& records,
                          std::vector<ImageFailure> failures = {});

void write_summary_csv(const LabelingSummary& summary, const std::string& path);
std::string summary_text(const LabelingSummary& summary);

}  // namespace domainscope

#endif  // DOMAINSCOPE_PIPELINE_HPP
