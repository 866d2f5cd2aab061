// domainscope: derive per-image domain labels from a detection dataset and
// evaluate detector results stratified by those labels.
//
// Exit codes: 0 success, 2 usage/validation, 3 data-quality abort, 4 I/O.

#include <atomic>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>
#include <thread>
#include <vector>

#include <CLI11.hpp>

#include "domainscope/calibration.hpp"
#include "domainscope/codecs.hpp"
#include "domainscope/dataset_io.hpp"
#include "domainscope/errors.hpp"
#include "domainscope/evaluation.hpp"
#include "domainscope/hash.hpp"
#include "domainscope/manifest.hpp"
#include "domainscope/pipeline.hpp"
#include "domainscope/scene.hpp"
#include "domainscope/version.hpp"
#include "domainscope/vision_ops.hpp"

namespace fs = std::filesystem;
using namespace domainscope;

namespace {

// --workers beats the DOMAINSCOPE_WORKERS environment variable; both must
// be positive integers. Default is a single worker.
int resolve_workers(std::optional<int> flag_value) {
  if (flag_value) {
    if (*flag_value < 1) throw std::invalid_argument("--workers must be >= 1");
    return *flag_value;
  }
  const char* env = std::getenv("DOMAINSCOPE_WORKERS");
  if (env == nullptr || *env == '\0') return 1;
  char* end = nullptr;
  long v = std::strtol(env, &end, 10);
  if (end == env || *end != '\0' || v < 1 || v > 1024) {
    throw std::invalid_argument(std::string("DOMAINSCOPE_WORKERS is not a positive worker "
                                            "count: '") +
                                env + "'");
  }
  return static_cast<int>(v);
}

RunManifest start_manifest(const std::string& subcommand) {
  RunManifest m;
  m.tool_version = kVersionString;
  m.subcommand = subcommand;
  m.started_at = iso8601_utc_now();
  return m;
}

void finish_manifest(RunManifest& m, const std::string& path, int exit_status) {
  m.exit_status = exit_status;
  m.finished_at = iso8601_utc_now();
  write_manifest(m, path);
}

struct LabelArgs {
  std::string annotations;
  std::string images;
  std::string depth;
  std::string profile;
  std::string out;
  std::string summary;
  std::optional<int> workers;
};

int cmd_label(const LabelArgs& a) {
  RunManifest manifest = start_manifest("label");
  const int workers = resolve_workers(a.workers);
  manifest.flags = {{"annotations", a.annotations}, {"images", a.images},
                    {"profile", a.profile},         {"out", a.out},
                    {"workers", std::to_string(workers)}};
  if (!a.depth.empty()) manifest.flags["depth"] = a.depth;
  if (!a.summary.empty()) manifest.flags["summary"] = a.summary;
  manifest.input_hashes[a.annotations] = hash_file(a.annotations);
  manifest.input_hashes[a.profile] = hash_file(a.profile);

  LabelingJob job;
  job.profile = load_profile(a.profile);
  job.profile.validate();
  manifest.profile_id = job.profile.profile_id();
  job.dataset = load_dataset(a.annotations, a.images);
  if (!a.depth.empty()) job.depth_root = a.depth;
  job.worker_count = workers;

  const std::string manifest_path = a.out + ".manifest.json";
  JobResult result;
  try {
    result = run_job(job);
  } catch (const DataQualityError& e) {
    std::cerr << "error: " << e.what() << "\n";
    finish_manifest(manifest, manifest_path, 3);
    return 3;
  }

  write_labels(result.records, a.out);
  if (!a.summary.empty()) write_summary_csv(result.summary, a.summary);
  std::cout << summary_text(result.summary);
  std::cout << "wrote " << result.records.size() << " label records to " << a.out << "\n";

  finish_manifest(manifest, manifest_path, 0);
  return 0;
}

struct CalibrateArgs {
  std::string annotations;
  std::string images;
  std::string depth;
  std::string out_profile;
  std::string manual_labels;
  std::optional<int> workers;
};

// Raw metric samples from one image: the four visibility statistics always,
// the three background statistics when the background mask is usable.
struct RawSample {
  bool ok = false;
  std::string error;
  double vis[4] = {0, 0, 0, 0};
  bool has_bg = false;
  double bg[3] = {0, 0, 0};
};

int cmd_calibrate(const CalibrateArgs& a) {
  RunManifest manifest = start_manifest("calibrate");
  const int workers = resolve_workers(a.workers);
  manifest.flags = {{"annotations", a.annotations},
                    {"images", a.images},
                    {"out-profile", a.out_profile},
                    {"workers", std::to_string(workers)}};
  if (!a.depth.empty()) manifest.flags["depth"] = a.depth;
  if (!a.manual_labels.empty()) manifest.flags["manual-labels"] = a.manual_labels;
  manifest.input_hashes[a.annotations] = hash_file(a.annotations);
  if (!a.manual_labels.empty()) {
    manifest.input_hashes[a.manual_labels] = hash_file(a.manual_labels);
  }

  DatasetIndex dataset = load_dataset(a.annotations, a.images);
  const std::size_t n = dataset.images.size();
  if (n < 10) {
    std::cerr << "error: calibration needs at least 10 images, got " << n << "\n";
    return 2;
  }

  // Raw metrics are profile-independent, so measure them under identity
  // normalization; per-index slots keep the result order worker-independent.
  const CalibrationProfile identity = CalibrationProfile::with_identity_normalization();
  std::vector<RawSample> samples(n);
  std::atomic<std::size_t> next{0};
  auto work = [&]() {
    for (;;) {
      const std::size_t i = next.fetch_add(1);
      if (i >= n) return;
      const ImageEntry& entry = dataset.images[i];
      RawSample& s = samples[i];
      try {
        const fs::path path = fs::path(dataset.image_root) / entry.file_name;
        RasterImage img = decode_image(path.string());
        GrayImage gray = to_grayscale(img);
        VisibilityMetrics vm = compute_visibility(gray, identity);
        s.vis[0] = vm.tenengrad;
        s.vis[1] = vm.laplacian_var;
        s.vis[2] = vm.rms_contrast;
        s.vis[3] = vm.freq_energy;
        PixelMask mask = background_mask(entry.boxes, img.width, img.height);
        if (auto bm = compute_background(gray, mask, identity)) {
          s.has_bg = true;
          s.bg[0] = bm->keypoint_density;
          s.bg[1] = bm->edge_density;
          s.bg[2] = bm->laplacian_mean;
        }
        s.ok = true;
      } catch (const std::exception& e) {
        s.error = e.what();
      }
    }
  };
  std::vector<std::thread> pool;
  const int thread_count = std::min<int>(workers, static_cast<int>(n));
  for (int t = 1; t < thread_count; ++t) pool.emplace_back(work);
  work();
  for (auto& t : pool) t.join();

  StatsAccumulator acc[7];
  std::size_t failed = 0;
  std::string first_error;
  for (const RawSample& s : samples) {
    if (!s.ok) {
      if (failed == 0) first_error = s.error;
      ++failed;
      continue;
    }
    for (int k = 0; k < 4; ++k) acc[k].add(s.vis[k]);
    if (s.has_bg) {
      for (int k = 0; k < 3; ++k) acc[4 + k].add(s.bg[k]);
    }
  }
  if (static_cast<double>(failed) >
      identity.max_failure_fraction * static_cast<double>(n)) {
    throw DataQualityError("calibration: " + std::to_string(failed) + " of " +
                           std::to_string(n) + " images failed, first: " + first_error);
  }

  CalibrationProfile profile;  // framework-default thresholds
  // Heavy-tailed energy statistics get log1p before clipping; the bounded
  // contrast and edge-density ratios do not.
  const bool log_flags[7] = {true, true, false, true, true, false, true};
  for (std::size_t k = 0; k < kNormalizedMetricNames.size(); ++k) {
    const std::string name{kNormalizedMetricNames[k]};
    if (acc[k].count() >= 2) {
      profile.normalization[name] = fit_normalization(acc[k].finalize(), log_flags[k]);
    } else {
      NormalizationEntry e;
      e.log_transform = log_flags[k];
      e.degenerate = true;
      profile.normalization[name] = e;
    }
  }
  profile.notes = "fitted on " + std::to_string(n - failed) + " images";
  profile.validate();
  save_profile(profile, a.out_profile);
  manifest.profile_id = profile.profile_id();
  std::cout << "wrote profile " << profile.profile_id() << " to " << a.out_profile << "\n";

  if (!a.manual_labels.empty()) {
    std::vector<ManualLabels> manual = load_manual_labels(a.manual_labels);
    LabelingJob job;
    job.dataset = std::move(dataset);
    if (!a.depth.empty()) job.depth_root = a.depth;
    job.profile = profile;
    job.worker_count = workers;
    JobResult labeled = run_job(job);
    AgreementReport agreement = agreement_report(labeled.records, manual);
    const std::string agreement_path = a.out_profile + ".agreement.json";
    std::ofstream out(agreement_path, std::ios::binary);
    if (!out) throw IoError(agreement_path + ": cannot open for writing");
    out << agreement_to_json(agreement);
    if (!out) throw IoError(agreement_path + ": write failed");
    for (const auto& [cat, cm] : agreement.per_category) {
      std::cout << "agreement " << cat << ": " << cm.accuracy << " over " << cm.total
                << " images\n";
    }
    std::cout << "wrote agreement report to " << agreement_path << "\n";
  }

  finish_manifest(manifest, a.out_profile + ".manifest.json", 0);
  return 0;
}

struct EvaluateArgs {
  std::string annotations;
  std::string detections;
  std::string labels;
  std::string out_dir;
  bool pr_curves = false;
  bool force = false;
};

int cmd_evaluate(const EvaluateArgs& a) {
  RunManifest manifest = start_manifest("evaluate");
  manifest.flags = {{"annotations", a.annotations},
                    {"detections", a.detections},
                    {"labels", a.labels},
                    {"out-dir", a.out_dir},
                    {"pr-curves", a.pr_curves ? "true" : "false"},
                    {"force", a.force ? "true" : "false"}};
  manifest.input_hashes[a.annotations] = hash_file(a.annotations);
  manifest.input_hashes[a.detections] = hash_file(a.detections);
  manifest.input_hashes[a.labels] = hash_file(a.labels);

  std::vector<DomainLabelRecord> labels = read_labels(a.labels);
  if (labels.empty()) {
    std::cerr << "error: " << a.labels << " contains no label records\n";
    return 2;
  }
  for (const auto& r : labels) {
    if (r.profile_id != labels.front().profile_id) {
      if (!a.force) {
        std::cerr << "error: " << a.labels << " mixes profile ids " << labels.front().profile_id
                  << " and " << r.profile_id << " (use --force to evaluate anyway)\n";
        return 2;
      }
      break;
    }
  }
  manifest.profile_id = labels.front().profile_id;

  DatasetIndex dataset = load_dataset(a.annotations, "");
  DetectionSet dets = load_detections(a.detections, dataset);
  StratifiedReport report = build_report(dataset, dets, labels);

  std::error_code ec;
  fs::create_directories(a.out_dir, ec);
  if (ec) throw IoError(a.out_dir + ": cannot create directory: " + ec.message());
  auto write_text = [&](const std::string& name, const std::string& body) {
    const fs::path path = fs::path(a.out_dir) / name;
    std::ofstream out(path, std::ios::binary);
    if (!out) throw IoError(path.string() + ": cannot open for writing");
    out << body;
    if (!out) throw IoError(path.string() + ": write failed");
  };
  write_text("report.csv", report_to_csv(report));
  write_text("report.txt", report_to_text(report));
  write_text("report.md", report_to_markdown(report));
  write_text("report.json", report_to_json(report));
  if (a.pr_curves) {
    const fs::path pr_dir = fs::path(a.out_dir) / "pr";
    export_pr_curves(dataset, dets, labels, pr_dir.string());
  }

  std::cout << report_to_text(report);
  std::cout << "wrote evaluation artifacts to " << a.out_dir << "\n";

  finish_manifest(manifest, (fs::path(a.out_dir) / "run_manifest.json").string(), 0);
  return 0;
}

struct ReportArgs {
  std::string run_dir;
  std::string format = "text";
};

int cmd_report(const ReportArgs& a) {
  RunManifest manifest = start_manifest("report");
  manifest.flags = {{"run-dir", a.run_dir}, {"format", a.format}};

  const fs::path report_path = fs::path(a.run_dir) / "report.json";
  if (!fs::exists(report_path)) {
    std::cerr << "error: " << report_path.string() << " not found; run evaluate first\n";
    return 2;
  }
  manifest.input_hashes[report_path.string()] = hash_file(report_path.string());

  std::ifstream in(report_path, std::ios::binary);
  if (!in) throw IoError(report_path.string() + ": cannot open file");
  std::string body((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
  StratifiedReport report = report_from_json(body);

  if (a.format == "text") {
    std::cout << report_to_text(report);
  } else if (a.format == "csv") {
    std::cout << report_to_csv(report);
  } else {
    std::cout << report_to_markdown(report);
  }

  finish_manifest(manifest, (fs::path(a.run_dir) / "report_manifest.json").string(), 0);
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Domain labeling and domain-stratified detection evaluation"};
  app.set_version_flag("--version", std::string(kVersionString));
  app.require_subcommand(1);

  LabelArgs label_args;
  CLI::App* label = app.add_subcommand("label", "Assign domain labels to every dataset image");
  label->add_option("--annotations", label_args.annotations, "COCO annotation JSON")
      ->required()
      ->check(CLI::ExistingFile);
  label->add_option("--images", label_args.images, "Image root directory")
      ->required()
      ->check(CLI::ExistingDirectory);
  label->add_option("--depth", label_args.depth, "Depth map directory (<image_id>.png|.dmap)")
      ->check(CLI::ExistingDirectory);
  label->add_option("--profile", label_args.profile, "Calibration profile JSON")
      ->required()
      ->check(CLI::ExistingFile);
  label->add_option("--out", label_args.out, "Output labels JSONL path")->required();
  label->add_option("--workers", label_args.workers, "Worker thread count");
  label->add_option("--summary", label_args.summary, "Also write the summary table as CSV");

  CalibrateArgs cal_args;
  CLI::App* calibrate =
      app.add_subcommand("calibrate", "Fit normalization bounds from a corpus");
  calibrate->add_option("--annotations", cal_args.annotations, "COCO annotation JSON")
      ->required()
      ->check(CLI::ExistingFile);
  calibrate->add_option("--images", cal_args.images, "Image root directory")
      ->required()
      ->check(CLI::ExistingDirectory);
  calibrate->add_option("--depth", cal_args.depth, "Depth map directory")
      ->check(CLI::ExistingDirectory);
  calibrate->add_option("--out-profile", cal_args.out_profile, "Output profile JSON path")
      ->required();
  calibrate->add_option("--manual-labels", cal_args.manual_labels,
                        "Manual labels JSON for the agreement report")
      ->check(CLI::ExistingFile);
  calibrate->add_option("--workers", cal_args.workers, "Worker thread count");

  EvaluateArgs eval_args;
  CLI::App* evaluate =
      app.add_subcommand("evaluate", "Stratified detection evaluation against labels");
  evaluate->add_option("--annotations", eval_args.annotations, "COCO annotation JSON")
      ->required()
      ->check(CLI::ExistingFile);
  evaluate->add_option("--detections", eval_args.detections, "COCO results JSON")
      ->required()
      ->check(CLI::ExistingFile);
  evaluate->add_option("--labels", eval_args.labels, "Labels JSONL from the label step")
      ->required()
      ->check(CLI::ExistingFile);
  evaluate->add_option("--out-dir", eval_args.out_dir, "Run output directory")->required();
  evaluate->add_flag("--pr-curves", eval_args.pr_curves, "Also export per-class PR curve CSVs");
  evaluate->add_flag("--force", eval_args.force, "Allow labels with mixed profile ids");

  ReportArgs report_args;
  CLI::App* report = app.add_subcommand("report", "Re-render a stored evaluation run");
  report->add_option("--run-dir", report_args.run_dir, "Directory written by evaluate")
      ->required()
      ->check(CLI::ExistingDirectory);
  report->add_option("--format", report_args.format, "Output format")
      ->check(CLI::IsMember({"text", "csv", "markdown"}))
      ->default_val("text");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 2;
  }

  try {
    if (label->parsed()) return cmd_label(label_args);
    if (calibrate->parsed()) return cmd_calibrate(cal_args);
    if (evaluate->parsed()) return cmd_evaluate(eval_args);
    return cmd_report(report_args);
  } catch (const DataQualityError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 3;
  } catch (const IoError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 4;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  }
}
