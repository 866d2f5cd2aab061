#include <doctest.h>

#include <filesystem>
#include <fstream>
#include <map>
#include <random>

#include "domainscope/dataset_io.hpp"
#include "domainscope/pipeline.hpp"
#include "support/fixtures.hpp"
#include "support/synthetic.hpp"

using namespace domainscope;
using namespace testsupport;

TEST_SUITE_BEGIN("pipeline");

namespace {

const CalibrationProfile& identity_profile() {
  static const CalibrationProfile p = CalibrationProfile::with_identity_normalization();
  return p;
}

BoundingBox box(double x, double y, double w, double h) {
  BoundingBox b;
  b.x = x;
  b.y = y;
  b.w = w;
  b.h = h;
  b.category_id = 1;
  return b;
}

}  // namespace

TEST_CASE("label_image: empty image gets the no-objects and no-depth reasons") {
  std::mt19937 rng(11);
  const RasterImage img = random_rgb(rng, 32, 32);
  DomainLabelRecord rec = label_image(img, {}, std::nullopt, identity_profile());

  CHECK(rec.visibility.is_labeled());
  CHECK(rec.illumination.is_labeled());
  CHECK(rec.color.is_labeled());
  CHECK(rec.layout.is_labeled());
  CHECK(rec.layout.label == LayoutClass::sparse);  // zero boxes satisfy every sparse bound
  CHECK_FALSE(rec.scale.is_labeled());
  CHECK(rec.scale.unlabeled_reason == kReasonNoObjects);
  CHECK(rec.background.is_labeled());  // the whole frame is background
  CHECK_FALSE(rec.orientation.is_labeled());
  CHECK(rec.orientation.unlabeled_reason == kReasonNoDepth);
  CHECK(rec.perspective.unlabeled_reason == kReasonNoDepth);
  CHECK(rec.profile_id == identity_profile().profile_id());
}

TEST_CASE("label_image: a frame-filling box starves the background estimate") {
  std::mt19937 rng(13);
  const RasterImage img = random_rgb(rng, 32, 32);
  DomainLabelRecord rec =
      label_image(img, {box(0, 0, 32, 32)}, std::nullopt, identity_profile());
  CHECK_FALSE(rec.background.is_labeled());
  CHECK(rec.background.unlabeled_reason == kReasonBackgroundTooSmall);
  CHECK(rec.scale.is_labeled());  // the box itself is still measurable
}

TEST_CASE("label_image: starved depth regions leave geometry unlabeled") {
  std::mt19937 rng(17);
  const RasterImage img = random_rgb(rng, 32, 32);
  DepthMap depth;
  depth.width = 32;
  depth.height = 32;
  depth.values.assign(32 * 32, 5.0);
  depth.valid.assign(32 * 32, 0);
  for (int i = 0; i < 50; ++i) depth.valid[i] = 1;  // below min_region_pixels

  DomainLabelRecord rec = label_image(img, {}, depth, identity_profile());
  CHECK_FALSE(rec.orientation.is_labeled());
  CHECK(rec.orientation.unlabeled_reason == kReasonRegionUnderpopulated);
  CHECK(rec.perspective.unlabeled_reason == kReasonRegionUnderpopulated);
}

TEST_CASE("label_image: fully valid depth labels both geometry categories") {
  std::mt19937 rng(19);
  const RasterImage img = random_rgb(rng, 32, 32);
  DepthMap depth;
  depth.width = 32;
  depth.height = 32;
  depth.values.assign(32 * 32, 5.0);  // flat: upright + nadir
  DomainLabelRecord rec = label_image(img, {}, depth, identity_profile());
  REQUIRE(rec.orientation.is_labeled());
  CHECK(rec.orientation.label == Orientation::upright);
  REQUIRE(rec.perspective.is_labeled());
  CHECK(rec.perspective.label == Perspective::nadir);
}

TEST_CASE("label_image is deterministic") {
  std::mt19937 rng(23);
  const RasterImage img = random_rgb(rng, 48, 32);
  const std::vector<BoundingBox> boxes = {box(2, 2, 10, 8), box(20, 12, 12, 12)};
  DomainLabelRecord a = label_image(img, boxes, std::nullopt, identity_profile());
  DomainLabelRecord b = label_image(img, boxes, std::nullopt, identity_profile());
  CHECK(a == b);
}

TEST_CASE("run_job output is identical for 1, 3, and 8 workers") {
  TempDir dir("job_workers");
  SynthCorpus corpus = make_corpus(dir.str(), 12, 42);
  LabelingJob job;
  job.dataset = load_dataset(corpus.annotations, corpus.images_dir);
  job.depth_root = corpus.depth_dir;
  job.profile = identity_profile();

  job.worker_count = 1;
  JobResult r1 = run_job(job);
  job.worker_count = 3;
  JobResult r3 = run_job(job);
  job.worker_count = 8;
  JobResult r8 = run_job(job);

  REQUIRE(r1.records.size() == 12);
  CHECK(r1.records == r3.records);
  CHECK(r1.records == r8.records);

  // Records come back in dataset order.
  for (std::size_t i = 0; i < r1.records.size(); ++i)
    CHECK(r1.records[i].image_id == job.dataset.images[i].id);
}

TEST_CASE("run_job tolerates a broken image only within the failure budget") {
  TempDir dir("job_failures");
  SynthCorpus corpus = make_corpus(dir.str(), 12, 43);
  {
    std::ofstream out(std::filesystem::path(corpus.images_dir) / "img_3.png",
                      std::ios::binary | std::ios::trunc);
    out << "this is not a png";
  }

  LabelingJob job;
  job.dataset = load_dataset(corpus.annotations, corpus.images_dir);
  job.depth_root = std::nullopt;
  job.profile = identity_profile();
  job.worker_count = 2;

  // Default budget is 5%; 1 of 12 is 8.3%.
  CHECK_THROWS_AS(run_job(job), DataQualityError);

  job.profile.max_failure_fraction = 0.25;
  JobResult r = run_job(job);
  CHECK(r.records.size() == 11);
  REQUIRE(r.summary.failures.size() == 1);
  CHECK(r.summary.failures[0].image_id == 3);
  for (const auto& rec : r.records) CHECK(rec.image_id != 3);
}

TEST_CASE("summarize: per-category percentages sum to 100") {
  TempDir dir("job_summary");
  SynthCorpus corpus = make_corpus(dir.str(), 16, 44);
  LabelingJob job;
  job.dataset = load_dataset(corpus.annotations, corpus.images_dir);
  job.depth_root = corpus.depth_dir;
  job.profile = identity_profile();
  job.worker_count = 2;
  JobResult r = run_job(job);

  CHECK(r.summary.image_count == 16);
  std::map<std::string, double> percent_by_category;
  std::map<std::string, std::size_t> count_by_category;
  for (const auto& row : r.summary.rows) {
    percent_by_category[row.category] += row.percent;
    count_by_category[row.category] += row.count;
  }
  REQUIRE(percent_by_category.size() == 8);
  for (const auto& [category, total] : percent_by_category) {
    INFO(category);
    CHECK(total == doctest::Approx(100.0).epsilon(1e-9));
  }
  for (const auto& [category, total] : count_by_category) {
    INFO(category);
    CHECK(total == 16);  // every record lands in exactly one row per axis
  }

  // Half the corpus has no boxes, so scale reports an unlabeled row.
  bool found_unlabeled_scale = false;
  for (const auto& row : r.summary.rows) {
    if (row.category == "scale" && row.label == "unlabeled(no_objects)" && row.count == 8)
      found_unlabeled_scale = true;
  }
  CHECK(found_unlabeled_scale);

  // summarize() on the records alone reproduces the job's own summary.
  LabelingSummary redo = summarize(r.records);
  REQUIRE(redo.rows.size() == r.summary.rows.size());
  for (std::size_t i = 0; i < redo.rows.size(); ++i) {
    CHECK(redo.rows[i].label == r.summary.rows[i].label);
    CHECK(redo.rows[i].count == r.summary.rows[i].count);
  }
}

TEST_CASE("summary csv and text renderings carry every row") {
  TempDir dir("summary_render");
  SynthCorpus corpus = make_corpus(dir.str(), 8, 45);
  LabelingJob job;
  job.dataset = load_dataset(corpus.annotations, corpus.images_dir);
  job.profile = identity_profile();
  JobResult r = run_job(job);

  const std::string csv_path = dir.file("summary.csv");
  write_summary_csv(r.summary, csv_path);
  std::ifstream in(csv_path);
  REQUIRE(in.good());
  std::string header;
  std::getline(in, header);
  CHECK(header == "category,label,count,percent");
  std::size_t lines = 0;
  std::string line;
  while (std::getline(in, line))
    if (!line.empty()) ++lines;
  CHECK(lines == r.summary.rows.size());

  const std::string text = summary_text(r.summary);
  CHECK(text.find("Labeled images: 8") != std::string::npos);
  for (const char* cat : {"visibility", "illumination", "color", "layout", "scale",
                          "background", "orientation", "perspective"}) {
    CHECK(text.find(cat) != std::string::npos);
  }
}

TEST_CASE("run_job rejects invalid worker counts and profiles") {
  TempDir dir("job_invalid");
  SynthCorpus corpus = make_corpus(dir.str(), 4, 46);
  LabelingJob job;
  job.dataset = load_dataset(corpus.annotations, corpus.images_dir);
  job.profile = identity_profile();
  job.worker_count = 0;
  CHECK_THROWS_AS(run_job(job), std::invalid_argument);

  job.worker_count = 1;
  job.profile.visibility_low = 0.9;  // above visibility_high
  CHECK_THROWS_AS(run_job(job), std::invalid_argument);
}

TEST_SUITE_END();
