#include "domainscope/evaluation.hpp"
#include "domainscope/errors.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <numeric>
#include <set>
#include <sstream>
#include <stdexcept>

#include <nlohmann/json.hpp>

namespace domainscope {

namespace {

using ojson = nlohmann::ordered_json;

std::string fmt(const char* spec, double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, spec, v);
  return buf;
}

// Exact area under the precision envelope (max precision at recall >= r),
// integrated between consecutive recall points.
double ap_all_points(const std::vector<std::pair<double, double>>& pts) {
  if (pts.empty()) return 0.0;
  const std::size_t n = pts.size();
  std::vector<double> env(n);
  double run = 0.0;
  for (std::size_t i = n; i-- > 0;) {
    run = std::max(run, pts[i].second);
    env[i] = run;
  }
  double ap = 0.0;
  double prev_recall = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    ap += (pts[i].first - prev_recall) * env[i];
    prev_recall = pts[i].first;
  }
  return ap;
}

// Envelope sampled at recall 0.00, 0.01, ..., 1.00 and averaged.
double ap_interp101(const std::vector<std::pair<double, double>>& pts) {
  if (pts.empty()) return 0.0;
  const std::size_t n = pts.size();
  std::vector<double> env(n);
  double run = 0.0;
  for (std::size_t i = n; i-- > 0;) {
    run = std::max(run, pts[i].second);
    env[i] = run;
  }
  double sum = 0.0;
  std::size_t i = 0;  // recalls are nondecreasing, so sweep once
  for (int k = 0; k <= 100; ++k) {
    const double r = k / 100.0;
    while (i < n && pts[i].first < r) ++i;
    if (i < n) sum += env[i];
  }
  return sum / 101.0;
}

struct PerClassScore {
  std::vector<std::pair<double, bool>> scored;  // (confidence, is_tp), pooled
  std::size_t gt_count = 0;
};

PerClassScore score_class(const std::vector<ImageEval>& images, std::int64_t category_id,
                          double iou_thresh) {
  PerClassScore out;
  for (const auto& img : images) {
    std::vector<BoundingBox> gts;
    for (const auto& g : img.gts) {
      if (g.category_id == category_id) gts.push_back(g);
    }
    out.gt_count += gts.size();
    std::vector<Detection> dets;
    for (const auto& d : img.dets) {
      if (d.box.category_id == category_id) dets.push_back(d);
    }
    if (dets.empty()) continue;
    const MatchResult m = match_detections(gts, dets, iou_thresh);
    for (std::size_t i = 0; i < dets.size(); ++i) {
      out.scored.emplace_back(dets[i].confidence, m.det_to_gt[i].has_value());
    }
  }
  // Stable, so confidence ties keep image order then input order.
  std::stable_sort(out.scored.begin(), out.scored.end(),
                   [](const auto& a, const auto& b) { return a.first > b.first; });
  return out;
}

std::string sanitize_name(const std::string& name) {
  std::string out;
  for (char c : name) {
    out += std::isalnum(static_cast<unsigned char>(c)) ? static_cast<char>(std::tolower(c)) : '_';
  }
  return out.empty() ? "class" : out;
}

std::string condition_title(const std::string& condition) {
  std::string t = condition;
  if (!t.empty()) t[0] = static_cast<char>(std::toupper(static_cast<unsigned char>(t[0])));
  return t;
}

// Metric key -> printable label, in reporting order.
const std::vector<std::pair<std::string, std::string>>& metric_columns() {
  static const std::vector<std::pair<std::string, std::string>> cols = {
      {"map50", "mAP50"},           {"map50_95", "mAP50-95"},
      {"precision", "Precision"},   {"recall", "Recall"},
      {"fp_per_object", "FP/object"}, {"fn_per_object", "FN/object"}};
  return cols;
}

const std::optional<double>& metric_value(const ReportRow& row, const std::string& key) {
  if (key == "map50") return row.map50;
  if (key == "map50_95") return row.map50_95;
  if (key == "precision") return row.precision;
  if (key == "recall") return row.recall;
  if (key == "fp_per_object") return row.fp_per_object;
  if (key == "fn_per_object") return row.fn_per_object;
  throw std::logic_error("unknown metric key: " + key);
}

std::string cell_text(const ReportRow& row, const std::string& key) {
  const auto& v = metric_value(row, key);
  if (!v) return "-";
  std::string s = fmt("%.3f", *v);
  const auto it = row.changes.find(key);
  if (it != row.changes.end() && !it->second.arrow.empty()) s += " " + it->second.arrow;
  return s;
}

ojson row_to_json(const ReportRow& row) {
  ojson j;
  j["axis"] = row.axis;
  j["condition"] = row.condition;
  j["image_count"] = row.image_count;
  j["object_count"] = row.object_count;
  ojson metrics;
  for (const auto& [key, label] : metric_columns()) {
    (void)label;
    const auto& v = metric_value(row, key);
    metrics[key] = v ? ojson(*v) : ojson(nullptr);
  }
  j["metrics"] = std::move(metrics);
  ojson per_class = ojson::array();
  for (const auto& c : row.per_class) {
    ojson jc;
    jc["category_id"] = c.category_id;
    jc["ap50"] = c.ap50 ? ojson(*c.ap50) : ojson(nullptr);
    jc["gt_count"] = c.gt_count;
    jc["detection_count"] = c.detection_count;
    per_class.push_back(std::move(jc));
  }
  j["per_class"] = std::move(per_class);
  ojson changes;
  for (const auto& [key, ch] : row.changes) {
    ojson jc;
    jc["relative"] = ch.relative;
    jc["arrow"] = ch.arrow;
    changes[key] = std::move(jc);
  }
  j["changes"] = std::move(changes);
  return j;
}

ReportRow row_from_json(const ojson& j) {
  ReportRow row;
  row.axis = j.at("axis").get<std::string>();
  row.condition = j.at("condition").get<std::string>();
  row.image_count = j.at("image_count").get<std::size_t>();
  row.object_count = j.at("object_count").get<std::size_t>();
  const auto& metrics = j.at("metrics");
  const auto opt = [&](const char* key) -> std::optional<double> {
    if (!metrics.contains(key) || metrics[key].is_null()) return std::nullopt;
    return metrics[key].get<double>();
  };
  row.map50 = opt("map50");
  row.map50_95 = opt("map50_95");
  row.precision = opt("precision");
  row.recall = opt("recall");
  row.fp_per_object = opt("fp_per_object");
  row.fn_per_object = opt("fn_per_object");
  for (const auto& jc : j.at("per_class")) {
    ClassAP c;
    c.category_id = jc.at("category_id").get<std::int64_t>();
    if (!jc.at("ap50").is_null()) c.ap50 = jc.at("ap50").get<double>();
    c.gt_count = jc.at("gt_count").get<std::size_t>();
    c.detection_count = jc.at("detection_count").get<std::size_t>();
    row.per_class.push_back(std::move(c));
  }
  for (const auto& [key, jc] : j.at("changes").items()) {
    Change ch;
    ch.relative = jc.at("relative").get<double>();
    ch.arrow = jc.at("arrow").get<std::string>();
    row.changes.emplace(key, std::move(ch));
  }
  return row;
}

}  // namespace

std::vector<double> coco_iou_thresholds() {
  std::vector<double> out;
  for (int i = 0; i < 10; ++i) out.push_back(0.5 + 0.05 * i);
  return out;
}

MatchResult match_detections(const std::vector<BoundingBox>& gts,
                             const std::vector<Detection>& dets, double iou_thresh) {
  MatchResult r;
  r.det_to_gt.assign(dets.size(), std::nullopt);
  r.gt_matched.assign(gts.size(), 0);

  std::vector<std::size_t> order(dets.size());
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(), [&dets](std::size_t a, std::size_t b) {
    return dets[a].confidence > dets[b].confidence;
  });

  for (const std::size_t di : order) {
    const Detection& d = dets[di];
    double best_iou = 0.0;
    std::size_t best_gt = gts.size();
    for (std::size_t gi = 0; gi < gts.size(); ++gi) {
      if (r.gt_matched[gi] || gts[gi].category_id != d.box.category_id) continue;
      const double v = iou(gts[gi], d.box);
      // Strict > keeps the earliest GT on an exact IoU tie.
      if (v >= iou_thresh && v > best_iou) {
        best_iou = v;
        best_gt = gi;
      }
    }
    if (best_gt < gts.size()) {
      r.gt_matched[best_gt] = 1;
      r.det_to_gt[di] = best_gt;
      ++r.tp;
    } else {
      ++r.fp;
    }
  }
  r.fn = gts.size() - r.tp;
  return r;
}

PRCurve compute_pr_curve(const std::vector<ImageEval>& images, std::int64_t category_id,
                         double iou_thresh, ApMode mode) {
  PRCurve curve;
  curve.category_id = category_id;
  const PerClassScore s = score_class(images, category_id, iou_thresh);
  curve.gt_count = s.gt_count;
  curve.detection_count = s.scored.size();
  if (s.gt_count == 0) return curve;  // AP absent, never zero

  std::size_t tp = 0, fp = 0;
  curve.points.reserve(s.scored.size());
  for (const auto& [conf, is_tp] : s.scored) {
    (void)conf;
    is_tp ? ++tp : ++fp;
    curve.points.emplace_back(static_cast<double>(tp) / static_cast<double>(s.gt_count),
                              static_cast<double>(tp) / static_cast<double>(tp + fp));
  }
  curve.ap = mode == ApMode::all_points ? ap_all_points(curve.points)
                                        : ap_interp101(curve.points);
  return curve;
}

MapResult compute_map(const std::vector<ImageEval>& images,
                      const std::vector<std::int64_t>& class_ids,
                      const std::vector<double>& iou_list, ApMode mode) {
  if (iou_list.empty()) throw std::invalid_argument("compute_map: empty IoU list");
  MapResult out;
  double sum_primary = 0.0;
  double sum_all = 0.0;
  std::size_t scored_classes = 0;

  for (const std::int64_t cid : class_ids) {
    ClassAP entry;
    entry.category_id = cid;
    const PRCurve primary = compute_pr_curve(images, cid, iou_list.front(), mode);
    entry.gt_count = primary.gt_count;
    entry.detection_count = primary.detection_count;
    entry.ap50 = primary.ap;
    out.per_class.push_back(entry);
    if (primary.gt_count == 0) continue;

    ++scored_classes;
    sum_primary += *primary.ap;
    sum_all += *primary.ap;
    for (std::size_t t = 1; t < iou_list.size(); ++t) {
      sum_all += *compute_pr_curve(images, cid, iou_list[t], mode).ap;
    }
  }

  if (scored_classes > 0) {
    out.map50 = sum_primary / static_cast<double>(scored_classes);
    out.map50_95 = sum_all / static_cast<double>(scored_classes * iou_list.size());
  }
  return out;
}

std::optional<OperatingPointStats> operating_point(const std::vector<ImageEval>& images,
                                                   double iou_thresh, double conf_thresh) {
  OperatingPointStats s;
  for (const auto& img : images) {
    s.gt_count += img.gts.size();
    std::vector<Detection> kept;
    for (const auto& d : img.dets) {
      if (d.confidence >= conf_thresh) kept.push_back(d);
    }
    s.kept_detections += kept.size();
    const MatchResult m = match_detections(img.gts, kept, iou_thresh);
    s.tp += m.tp;
    s.fp += m.fp;
    s.fn += m.fn;
  }
  if (s.gt_count == 0) return std::nullopt;
  if (s.tp + s.fp > 0) {
    s.precision = static_cast<double>(s.tp) / static_cast<double>(s.tp + s.fp);
  }
  s.recall = static_cast<double>(s.tp) / static_cast<double>(s.gt_count);
  s.fp_per_object = static_cast<double>(s.fp) / static_cast<double>(s.gt_count);
  s.fn_per_object = static_cast<double>(s.fn) / static_cast<double>(s.gt_count);
  return s;
}

std::optional<std::pair<double, double>> failure_rates(const std::vector<ImageEval>& images,
                                                       double iou_thresh, double conf_thresh) {
  const auto s = operating_point(images, iou_thresh, conf_thresh);
  if (!s) return std::nullopt;
  return std::make_pair(s->fp_per_object, s->fn_per_object);
}

std::vector<std::pair<std::string, std::vector<std::int64_t>>> stratify(
    const std::vector<DomainLabelRecord>& records, DomainCategory category) {
  std::vector<std::string> conditions;
  switch (category) {
    case DomainCategory::visibility: conditions = {"low", "high"}; break;
    case DomainCategory::illumination: conditions = {"dark", "bright"}; break;
    case DomainCategory::color: conditions = {"blue", "natural", "green"}; break;
    case DomainCategory::layout: conditions = {"sparse", "crowded"}; break;
    case DomainCategory::scale: conditions = {"small", "large"}; break;
    case DomainCategory::background: conditions = {"simple", "complex"}; break;
    case DomainCategory::orientation: conditions = {"upright", "rotated"}; break;
    case DomainCategory::perspective: conditions = {"nadir", "front"}; break;
  }
  std::vector<std::pair<std::string, std::vector<std::int64_t>>> out;
  out.reserve(conditions.size());
  for (const auto& c : conditions) out.emplace_back(c, std::vector<std::int64_t>{});
  for (const auto& r : records) {
    if (!r.is_labeled(category)) continue;
    const std::string text = r.label_text(category);
    for (auto& [condition, ids] : out) {
      if (condition == text) {
        ids.push_back(r.image_id);
        break;
      }
    }
  }
  return out;
}

Change classify_change(double mixed, double stratum) {
  Change ch;
  ch.relative = (stratum - mixed) / mixed;
  if (ch.relative == 0.0) return ch;  // zero-signed, no arrow
  const double pct = std::abs(ch.relative) * 100.0;
  const int count = pct < 3.0 ? 1 : (pct <= 8.0 ? 2 : 3);
  ch.arrow.assign(static_cast<std::size_t>(count), ch.relative > 0.0 ? '^' : 'v');
  return ch;
}

StratifiedReport build_report(const DatasetIndex& dataset, const DetectionSet& dets,
                              const std::vector<DomainLabelRecord>& labels, ApMode mode) {
  for (const auto& r : labels) {
    if (dataset.find(r.image_id) == nullptr) {
      throw std::runtime_error("build_report: label record for unknown image id " +
                               std::to_string(r.image_id));
    }
  }

  std::vector<std::int64_t> class_ids;
  class_ids.reserve(dataset.categories.size());
  for (const auto& [id, name] : dataset.categories) {
    (void)name;
    class_ids.push_back(id);
  }
  const std::vector<double> thresholds = coco_iou_thresholds();

  const auto evals_for = [&](const std::set<std::int64_t>* ids) {
    std::vector<ImageEval> evals;
    for (const auto& img : dataset.images) {
      if (ids != nullptr && ids->count(img.id) == 0) continue;
      ImageEval e;
      e.image_id = img.id;
      e.gts = img.boxes;
      const auto it = dets.by_image.find(img.id);
      if (it != dets.by_image.end()) e.dets = it->second;
      evals.push_back(std::move(e));
    }
    return evals;
  };

  const auto fill_row = [&](ReportRow& row, const std::vector<ImageEval>& evals) {
    row.image_count = evals.size();
    for (const auto& e : evals) row.object_count += e.gts.size();
    const MapResult m = compute_map(evals, class_ids, thresholds, mode);
    row.map50 = m.map50;
    row.map50_95 = m.map50_95;
    row.per_class = m.per_class;
    if (const auto op = operating_point(evals)) {
      row.precision = op->precision;
      row.recall = op->recall;
      row.fp_per_object = op->fp_per_object;
      row.fn_per_object = op->fn_per_object;
    }
  };

  StratifiedReport report;
  report.mode = mode;
  report.classes = dataset.categories;
  report.mixed.axis = "mixed";
  report.mixed.condition = "mixed";
  fill_row(report.mixed, evals_for(nullptr));

  for (const DomainCategory category : kAllCategories) {
    for (const auto& [condition, ids] : stratify(labels, category)) {
      ReportRow row;
      row.axis = std::string(to_string(category));
      row.condition = condition;
      const std::set<std::int64_t> id_set(ids.begin(), ids.end());
      fill_row(row, evals_for(&id_set));
      for (const auto& [key, label] : metric_columns()) {
        (void)label;
        const auto& mixed_v = metric_value(report.mixed, key);
        const auto& row_v = metric_value(row, key);
        if (mixed_v && row_v && *mixed_v > 0.0) {
          row.changes.emplace(key, classify_change(*mixed_v, *row_v));
        }
      }
      report.rows.push_back(std::move(row));
    }
  }
  return report;
}

std::string report_to_csv(const StratifiedReport& report) {
  std::ostringstream out;
  out << "axis,condition,image_count,object_count";
  for (const auto& [key, label] : metric_columns()) {
    (void)label;
    out << ',' << key << ',' << key << "_change_pct," << key << "_arrow";
  }
  for (const auto& [id, name] : report.classes) {
    (void)id;
    out << ",ap50_" << sanitize_name(name);
  }
  out << '\n';

  const auto emit = [&](const ReportRow& row) {
    out << row.axis << ',' << row.condition << ',' << row.image_count << ',' << row.object_count;
    for (const auto& [key, label] : metric_columns()) {
      (void)label;
      const auto& v = metric_value(row, key);
      out << ',' << (v ? fmt("%.9g", *v) : "");
      const auto it = row.changes.find(key);
      if (it != row.changes.end()) {
        out << ',' << fmt("%.9g", it->second.relative * 100.0) << ',' << it->second.arrow;
      } else {
        out << ",,";
      }
    }
    for (const auto& c : row.per_class) out << ',' << (c.ap50 ? fmt("%.9g", *c.ap50) : "");
    out << '\n';
  };
  emit(report.mixed);
  for (const auto& row : report.rows) emit(row);
  return out.str();
}

std::string report_to_text(const StratifiedReport& report) {
  constexpr int kLabelWidth = 14;
  constexpr int kCellWidth = 12;
  std::ostringstream out;
  const auto pad = [&](const std::string& s, int width) {
    out << s;
    for (int i = static_cast<int>(s.size()); i < width; ++i) out << ' ';
  };
  pad("axis", kLabelWidth);
  pad("condition", kLabelWidth);
  pad("images", 8);
  pad("objects", 9);
  for (const auto& [key, label] : metric_columns()) {
    (void)key;
    pad(label, kCellWidth);
  }
  out << '\n';

  const auto emit = [&](const ReportRow& row) {
    pad(row.axis, kLabelWidth);
    pad(row.condition, kLabelWidth);
    pad(std::to_string(row.image_count), 8);
    pad(std::to_string(row.object_count), 9);
    for (const auto& [key, label] : metric_columns()) {
      (void)label;
      pad(cell_text(row, key), kCellWidth);
    }
    out << '\n';
  };
  emit(report.mixed);
  for (const auto& row : report.rows) emit(row);
  return out.str();
}

std::string report_to_markdown(const StratifiedReport& report) {
  std::ostringstream out;
  out << "| Metric | Mixed |";
  for (const auto& row : report.rows) out << ' ' << condition_title(row.condition) << " |";
  out << "\n|---|---|";
  for (std::size_t i = 0; i < report.rows.size(); ++i) out << "---|";
  out << '\n';

  for (const auto& [key, label] : metric_columns()) {
    out << "| " << label << " | " << cell_text(report.mixed, key) << " |";
    for (const auto& row : report.rows) out << ' ' << cell_text(row, key) << " |";
    out << '\n';
  }
  for (std::size_t ci = 0; ci < report.classes.size(); ++ci) {
    out << "| AP50 (" << report.classes[ci].second << ") | ";
    const auto cell = [&](const ReportRow& row) {
      return ci < row.per_class.size() && row.per_class[ci].ap50
                 ? fmt("%.3f", *row.per_class[ci].ap50)
                 : std::string("-");
    };
    out << cell(report.mixed) << " |";
    for (const auto& row : report.rows) out << ' ' << cell(row) << " |";
    out << '\n';
  }
  out << "| Images | " << report.mixed.image_count << " |";
  for (const auto& row : report.rows) out << ' ' << row.image_count << " |";
  out << "\n| Objects | " << report.mixed.object_count << " |";
  for (const auto& row : report.rows) out << ' ' << row.object_count << " |";
  out << '\n';
  out << "\nArrows mark relative change vs the mixed column: one `^`/`v` below 3%, "
         "two for 3-8%, three above 8%.\n";
  return out.str();
}

std::string report_to_json(const StratifiedReport& report) {
  ojson j;
  j["schema"] = "v1";
  j["mode"] = report.mode == ApMode::all_points ? "all_points" : "interp_101";
  ojson classes = ojson::array();
  for (const auto& [id, name] : report.classes) {
    classes.push_back(ojson::array({id, name}));
  }
  j["classes"] = std::move(classes);
  j["mixed"] = row_to_json(report.mixed);
  ojson rows = ojson::array();
  for (const auto& row : report.rows) rows.push_back(row_to_json(row));
  j["rows"] = std::move(rows);
  return j.dump(2) + "\n";
}

StratifiedReport report_from_json(const std::string& text) {
  const ojson j = ojson::parse(text);
  if (j.value("schema", "") != "v1") {
    throw std::runtime_error("report: unsupported schema (want \"v1\")");
  }
  StratifiedReport report;
  const std::string mode = j.at("mode").get<std::string>();
  if (mode == "all_points") {
    report.mode = ApMode::all_points;
  } else if (mode == "interp_101") {
    report.mode = ApMode::interp_101;
  } else {
    throw std::runtime_error("report: unknown mode '" + mode + "'");
  }
  for (const auto& jc : j.at("classes")) {
    report.classes.emplace_back(jc.at(0).get<std::int64_t>(), jc.at(1).get<std::string>());
  }
  report.mixed = row_from_json(j.at("mixed"));
  for (const auto& jr : j.at("rows")) report.rows.push_back(row_from_json(jr));
  return report;
}

std::string export_pr_curves(const DatasetIndex& dataset, const DetectionSet& dets,
                             const std::vector<DomainLabelRecord>& labels,
                             const std::string& out_dir, double iou_thresh) {
  namespace fs = std::filesystem;
  fs::create_directories(out_dir);

  const auto evals_for = [&](const std::set<std::int64_t>* ids) {
    std::vector<ImageEval> evals;
    for (const auto& img : dataset.images) {
      if (ids != nullptr && ids->count(img.id) == 0) continue;
      ImageEval e;
      e.image_id = img.id;
      e.gts = img.boxes;
      const auto it = dets.by_image.find(img.id);
      if (it != dets.by_image.end()) e.dets = it->second;
      evals.push_back(std::move(e));
    }
    return evals;
  };

  ojson files = ojson::array();
  ojson absent = ojson::array();

  const auto export_stratum = [&](const std::string& axis, const std::string& condition,
                                  const std::vector<ImageEval>& evals) {
    for (const auto& [class_id, class_name] : dataset.categories) {
      const PRCurve curve = compute_pr_curve(evals, class_id, iou_thresh, ApMode::all_points);
      if (curve.gt_count == 0) {
        ojson note;
        note["axis"] = axis;
        note["condition"] = condition;
        note["class"] = class_name;
        note["reason"] = "no_ground_truth";
        note["would_be_scored"] = curve.detection_count;
        absent.push_back(std::move(note));
        continue;
      }
      const std::string file_name =
          "pr_" + sanitize_name(axis) + "_" + sanitize_name(condition) + "_" +
          sanitize_name(class_name) + ".csv";
      const fs::path path = fs::path(out_dir) / file_name;
      std::ofstream out(path, std::ios::binary | std::ios::trunc);
      if (!out) throw IoError(path.string() + ": cannot open for writing");
      out << "# axis=" << axis << " condition=" << condition << " class=" << class_name
          << " class_id=" << class_id << " gt_count=" << curve.gt_count
          << " detections=" << curve.detection_count << '\n';
      out << "recall,precision,envelope\n";
      std::vector<double> env(curve.points.size());
      double run = 0.0;
      for (std::size_t i = curve.points.size(); i-- > 0;) {
        run = std::max(run, curve.points[i].second);
        env[i] = run;
      }
      for (std::size_t i = 0; i < curve.points.size(); ++i) {
        out << fmt("%.9g", curve.points[i].first) << ',' << fmt("%.9g", curve.points[i].second)
            << ',' << fmt("%.9g", env[i]) << '\n';
      }
      out.flush();
      if (!out) throw IoError(path.string() + ": write failed");

      ojson entry;
      entry["file"] = file_name;
      entry["axis"] = axis;
      entry["condition"] = condition;
      entry["class"] = class_name;
      entry["gt_count"] = curve.gt_count;
      entry["detections"] = curve.detection_count;
      if (curve.ap) entry["ap"] = *curve.ap;
      files.push_back(std::move(entry));
    }
  };

  export_stratum("mixed", "mixed", evals_for(nullptr));
  for (const DomainCategory category : kAllCategories) {
    for (const auto& [condition, ids] : stratify(labels, category)) {
      const std::set<std::int64_t> id_set(ids.begin(), ids.end());
      export_stratum(std::string(to_string(category)), condition, evals_for(&id_set));
    }
  }

  ojson manifest;
  manifest["iou_threshold"] = iou_thresh;
  manifest["files"] = std::move(files);
  manifest["absent"] = std::move(absent);
  const fs::path manifest_path = fs::path(out_dir) / "pr_manifest.json";
  std::ofstream out(manifest_path, std::ios::binary | std::ios::trunc);
  if (!out) throw IoError(manifest_path.string() + ": cannot open for writing");
  out << manifest.dump(2) << '\n';
  out.flush();
  if (!out) throw IoError(manifest_path.string() + ": write failed");
  return manifest_path.string();
}

}  // namespace domainscope
