/**
 * @file eval.hpp
 * @brief IoU, greedy matching and COCO-style 101-point average precision.
 */
#pragma once

#include "shipprior/core.hpp"

#include <map>
#include <span>
#include <string>
#include <vector>

namespace shipprior {

double iou(const BBox& a, const BBox& b);

struct MatchResult {
    std::vector<bool> det_tp;       // per detection, input order
    std::vector<int> det_gt;        // matched GT index or -1
    std::vector<bool> gt_matched;   // per GT

    std::size_t tp_count() const;
};

/**
 * Detections are visited by descending score, ties by input index; each takes
 * the still unmatched GT of highest IoU (lowest index on ties) if that IoU
 * reaches the threshold, otherwise it is a false positive.
 */
MatchResult match_detections(std::span<const Detection> dets, std::span<const BBox> gts, double iou_threshold);

struct ScoredMatch {
    double score = 0.0;
    bool tp = false;
};

struct PrPoint {
    double recall = 0.0;
    double precision = 0.0;
    double score = 0.0;
};

struct ApResult {
    double ap = 0.0;
    bool defined = true;  // false when there is no ground truth
    std::vector<PrPoint> curve;
};

/// 101-point interpolated AP. Entries are ranked by descending score; equal
/// scores keep their given order.
ApResult average_precision(std::span<const ScoredMatch> matches, std::size_t n_gt);

enum class SizeStratum { Small, Medium, Large };
SizeStratum size_stratum(double area);  // < 32^2, [32^2, 96^2], > 96^2

struct EvalReport {
    double ap50 = 0.0;
    double ap75 = 0.0;
    double ap50_95 = 0.0;
    double ap_s = 0.0;
    double ap_m = 0.0;
    double ap_l = 0.0;
    std::map<std::string, std::vector<PrPoint>> pr_curves;  // keyed "0.50", "0.55", ...
    std::vector<std::string> undefined;                     // metrics with no ground truth
};

/// The ten COCO thresholds 0.50, 0.55, ..., 0.95.
std::vector<double> coco_iou_thresholds();

/// AP over all images at one IoU threshold, optionally against one size stratum's GT only.
ApResult evaluate_at(const AnnotationSet& gt, std::span<const Detection> dets, double iou_threshold,
                     const SizeStratum* stratum = nullptr);

EvalReport coco_metrics(const AnnotationSet& gt, std::span<const Detection> dets);

}  // namespace shipprior
