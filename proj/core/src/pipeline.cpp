#include "domainscope/pipeline.hpp"
#include "domainscope/errors.hpp"

#include <algorithm>
#include <atomic>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <map>
#include <sstream>
#include <thread>

#include "domainscope/appearance.hpp"
#include "domainscope/codecs.hpp"
#include "domainscope/geometry.hpp"
#include "domainscope/scene.hpp"
#include "domainscope/vision_ops.hpp"

namespace domainscope {

DomainLabelRecord label_image(const RasterImage& img, const std::vector<BoundingBox>& boxes,
                              const std::optional<DepthMap>& depth,
                              const CalibrationProfile& profile) {
  DomainLabelRecord rec;
  rec.profile_id = profile.profile_id();

  const GrayImage gray = to_grayscale(img);
  const double image_area = static_cast<double>(img.width) * img.height;

  rec.metrics.visibility = compute_visibility(gray, profile);
  rec.visibility = Assignment<Visibility>::labeled(
      classify_visibility(rec.metrics.visibility.score, profile));

  rec.metrics.illumination = compute_illumination(gray, profile);
  rec.illumination = Assignment<Illumination>::labeled(
      classify_illumination(rec.metrics.illumination, profile));

  rec.metrics.color = compute_color(img);
  rec.color = Assignment<ColorCast>::labeled(classify_color(rec.metrics.color, profile));

  rec.metrics.layout = compute_layout(boxes, image_area);
  rec.layout = Assignment<LayoutClass>::labeled(classify_layout(rec.metrics.layout, profile));

  rec.metrics.scale = compute_scale(boxes, image_area);
  rec.scale = rec.metrics.scale
                  ? Assignment<ScaleClass>::labeled(classify_scale(*rec.metrics.scale, profile))
                  : Assignment<ScaleClass>::unlabeled(std::string(kReasonNoObjects));

  const PixelMask bg_mask = background_mask(boxes, img.width, img.height);
  rec.metrics.background = compute_background(gray, bg_mask, profile);
  rec.background =
      rec.metrics.background
          ? Assignment<BackgroundClass>::labeled(
                classify_background(rec.metrics.background->score, profile))
          : Assignment<BackgroundClass>::unlabeled(std::string(kReasonBackgroundTooSmall));

  if (!depth) {
    rec.orientation = Assignment<Orientation>::unlabeled(std::string(kReasonNoDepth));
    rec.perspective = Assignment<Perspective>::unlabeled(std::string(kReasonNoDepth));
  } else {
    rec.metrics.geometry = compute_geometry(*depth, gray, bg_mask, profile);
    if (rec.metrics.geometry) {
      rec.orientation =
          Assignment<Orientation>::labeled(classify_orientation(*rec.metrics.geometry, profile));
      rec.perspective =
          Assignment<Perspective>::labeled(classify_perspective(*rec.metrics.geometry, profile));
    } else {
      rec.orientation =
          Assignment<Orientation>::unlabeled(std::string(kReasonRegionUnderpopulated));
      rec.perspective =
          Assignment<Perspective>::unlabeled(std::string(kReasonRegionUnderpopulated));
    }
  }
  return rec;
}

JobResult run_job(const LabelingJob& job) {
  if (job.worker_count < 1) throw std::invalid_argument("run_job: worker_count must be >= 1");
  job.profile.validate();
  const std::string profile_id = job.profile.profile_id();
  const std::size_t n = job.dataset.images.size();

  std::vector<std::optional<DomainLabelRecord>> slots(n);
  std::vector<std::optional<ImageFailure>> failures(n);
  std::atomic<std::size_t> next{0};

  const auto worker = [&]() {
    for (;;) {
      const std::size_t i = next.fetch_add(1);
      if (i >= n) return;
      const ImageEntry& entry = job.dataset.images[i];
      try {
        const std::filesystem::path path =
            std::filesystem::path(job.dataset.image_root) / entry.file_name;
        const RasterImage img = decode_image(path.string());
        if (img.width != entry.width || img.height != entry.height) {
          throw std::runtime_error(
              "decoded size " + std::to_string(img.width) + "x" + std::to_string(img.height) +
              " does not match annotation " + std::to_string(entry.width) + "x" +
              std::to_string(entry.height));
        }
        std::optional<DepthMap> depth;
        if (job.depth_root) {
          depth = find_depth(*job.depth_root, entry.id, entry.width, entry.height, job.profile);
        }
        DomainLabelRecord rec = label_image(img, entry.boxes, depth, job.profile);
        rec.image_id = entry.id;
        rec.profile_id = profile_id;
        slots[i] = std::move(rec);
      } catch (const std::exception& e) {
        failures[i] = ImageFailure{entry.id, entry.file_name, e.what()};
      }
    }
  };

  const int workers = std::min<int>(job.worker_count, static_cast<int>(std::max<std::size_t>(n, 1)));
  if (workers <= 1) {
    worker();
  } else {
    std::vector<std::thread> pool;
    pool.reserve(workers);
    for (int t = 0; t < workers; ++t) pool.emplace_back(worker);
    for (auto& t : pool) t.join();
  }

  JobResult result;
  std::vector<ImageFailure> failed;
  for (std::size_t i = 0; i < n; ++i) {
    if (slots[i]) {
      result.records.push_back(std::move(*slots[i]));
    } else if (failures[i]) {
      failed.push_back(std::move(*failures[i]));
    }
  }

  if (n > 0 &&
      static_cast<double>(failed.size()) > job.profile.max_failure_fraction * static_cast<double>(n)) {
    std::string msg = std::to_string(failed.size()) + " of " + std::to_string(n) +
                      " images failed (limit " +
                      std::to_string(job.profile.max_failure_fraction * 100.0) + "%)";
    if (!failed.empty()) msg += "; first: " + failed.front().file_name + ": " + failed.front().error;
    throw DataQualityError(msg);
  }

  result.summary = summarize(result.records, std::move(failed));
  return result;
}

LabelingSummary summarize(const std::vector<DomainLabelRecord>& records,
                          std::vector<ImageFailure> failures) {
  LabelingSummary summary;
  summary.image_count = records.size();
  summary.failures = std::move(failures);

  for (const DomainCategory category : kAllCategories) {
    const std::string cat_name(to_string(category));
    std::map<std::string, std::size_t> unlabeled;  // full "unlabeled(...)" text -> count
    std::map<std::string, std::size_t> counts;
    for (const auto& r : records) {
      const std::string text = r.label_text(category);
      (r.is_labeled(category) ? counts : unlabeled)[text] += 1;
    }
    const auto add_row = [&](const std::string& label, std::size_t count) {
      SummaryRow row;
      row.category = cat_name;
      row.label = label;
      row.count = count;
      row.percent =
          records.empty() ? 0.0 : 100.0 * static_cast<double>(count) / records.size();
      summary.rows.push_back(std::move(row));
    };
    for (const auto& label : category_labels(category)) add_row(label, counts[label]);
    for (const auto& [label, count] : unlabeled) add_row(label, count);
  }
  return summary;
}

void write_summary_csv(const LabelingSummary& summary, const std::string& path) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw IoError(path + ": cannot open for writing");
  out << "category,label,count,percent\n";
  char buf[32];
  for (const auto& row : summary.rows) {
    std::snprintf(buf, sizeof buf, "%.4f", row.percent);
    out << row.category << ',' << row.label << ',' << row.count << ',' << buf << '\n';
  }
  out.flush();
  if (!out) throw IoError(path + ": write failed");
}

std::string summary_text(const LabelingSummary& summary) {
  std::ostringstream out;
  out << "Labeled images: " << summary.image_count << "\n";
  if (!summary.failures.empty()) {
    out << "Failed images:  " << summary.failures.size() << "\n";
  }
  std::string last_category;
  char buf[64];
  for (const auto& row : summary.rows) {
    if (row.category != last_category) {
      out << "\n" << row.category << "\n";
      last_category = row.category;
    }
    std::snprintf(buf, sizeof buf, "  %-26s %8zu  %6.1f%%\n", row.label.c_str(), row.count,
                  row.percent);
    out << buf;
  }
  for (const auto& f : summary.failures) {
    out << "\nfailure: image " << f.image_id << " (" << f.file_name << "): " << f.error << "\n";
  }
  return out.str();
}

}  // namespace domainscope
