#include "shipprior/eval.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <numeric>

namespace shipprior {

double iou(const BBox& a, const BBox& b) {
    const double ix = std::max(0.0, std::min(a.x + a.w, b.x + b.w) - std::max(a.x, b.x));
    const double iy = std::max(0.0, std::min(a.y + a.h, b.y + b.h) - std::max(a.y, b.y));
    const double inter = ix * iy;
    // Areas from the same edge differences as the overlap, so iou(a, a) is exactly 1.
    const double area_a = std::max(0.0, (a.x + a.w) - a.x) * std::max(0.0, (a.y + a.h) - a.y);
    const double area_b = std::max(0.0, (b.x + b.w) - b.x) * std::max(0.0, (b.y + b.h) - b.y);
    const double uni = area_a + area_b - inter;
    return uni > 0.0 ? inter / uni : 0.0;
}

std::size_t MatchResult::tp_count() const {
    return static_cast<std::size_t>(std::count(det_tp.begin(), det_tp.end(), true));
}

namespace {

std::vector<std::size_t> by_descending_score(std::size_t n, auto score_of) {
    std::vector<std::size_t> order(n);
    std::iota(order.begin(), order.end(), std::size_t{0});
    std::stable_sort(order.begin(), order.end(),
                     [&](std::size_t a, std::size_t b) { return score_of(a) > score_of(b); });
    return order;
}

std::string threshold_key(double t) {
    char buf[16];
    std::snprintf(buf, sizeof buf, "%.2f", t);
    return buf;
}

}  // namespace

MatchResult match_detections(std::span<const Detection> dets, std::span<const BBox> gts, double iou_threshold) {
    MatchResult r;
    r.det_tp.assign(dets.size(), false);
    r.det_gt.assign(dets.size(), -1);
    r.gt_matched.assign(gts.size(), false);
    for (std::size_t di : by_descending_score(dets.size(), [&](std::size_t i) { return dets[i].score; })) {
        int best = -1;
        double best_iou = iou_threshold;
        for (std::size_t g = 0; g < gts.size(); ++g) {
            if (r.gt_matched[g]) continue;
            const double v = iou(dets[di].bbox, gts[g]);
            if (v >= best_iou && (best < 0 || v > best_iou)) {
                best = static_cast<int>(g);
                best_iou = v;
            }
        }
        if (best >= 0) {
            r.det_tp[di] = true;
            r.det_gt[di] = best;
            r.gt_matched[best] = true;
        }
    }
    return r;
}

ApResult average_precision(std::span<const ScoredMatch> matches, std::size_t n_gt) {
    ApResult out;
    if (n_gt == 0) {
        out.defined = false;
        return out;
    }
    std::size_t tp = 0, fp = 0;
    for (std::size_t i : by_descending_score(matches.size(), [&](std::size_t k) { return matches[k].score; })) {
        (matches[i].tp ? tp : fp) += 1;
        out.curve.push_back({static_cast<double>(tp) / static_cast<double>(n_gt),
                             static_cast<double>(tp) / static_cast<double>(tp + fp), matches[i].score});
    }

    // Precision envelope: best precision at any recall >= r, swept from the tail.
    std::vector<double> envelope(out.curve.size());
    double running = 0.0;
    for (std::size_t k = out.curve.size(); k-- > 0;) {
        running = std::max(running, out.curve[k].precision);
        envelope[k] = running;
    }
    double total = 0.0;
    std::size_t k = 0;
    for (int level = 0; level <= 100; ++level) {
        const double r = level / 100.0;
        while (k < out.curve.size() && out.curve[k].recall < r) ++k;
        if (k < out.curve.size()) total += envelope[k];
    }
    out.ap = total / 101.0;
    return out;
}

SizeStratum size_stratum(double area) {
    if (area < 32.0 * 32.0) return SizeStratum::Small;
    if (area <= 96.0 * 96.0) return SizeStratum::Medium;
    return SizeStratum::Large;
}

std::vector<double> coco_iou_thresholds() {
    std::vector<double> t;
    for (int k = 0; k < 10; ++k) t.push_back((50 + 5 * k) / 100.0);
    return t;
}

ApResult evaluate_at(const AnnotationSet& gt, std::span<const Detection> dets, double iou_threshold,
                     const SizeStratum* stratum) {
    for (const auto& d : dets) {
        if (!gt.find_image(d.image_id)) {
            throw Error(ErrorCode::UnknownImageId, "detection refers to image " + std::to_string(d.image_id));
        }
    }
    std::vector<ScoredMatch> scored(dets.size());
    std::size_t n_gt = 0;
    for (const auto& img : gt.images) {
        std::vector<BBox> boxes;
        for (const auto& a : gt.annotations) {
            if (a.image_id != img.id) continue;
            if (stratum && size_stratum(bbox_area(a.bbox)) != *stratum) continue;
            boxes.push_back(a.bbox);
        }
        n_gt += boxes.size();

        std::vector<Detection> local;
        std::vector<std::size_t> origin;
        for (std::size_t i = 0; i < dets.size(); ++i) {
            if (dets[i].image_id != img.id) continue;
            local.push_back(dets[i]);
            origin.push_back(i);
        }
        const MatchResult m = match_detections(local, boxes, iou_threshold);
        for (std::size_t j = 0; j < local.size(); ++j) scored[origin[j]] = {local[j].score, m.det_tp[j]};
    }
    return average_precision(scored, n_gt);
}

EvalReport coco_metrics(const AnnotationSet& gt, std::span<const Detection> dets) {
    gt.validate();
    EvalReport rep;
    auto note = [&](const char* name, const ApResult& r) {
        if (!r.defined) rep.undefined.emplace_back(name);
        return r.ap;
    };

    double sum = 0.0;
    bool all_defined = true;
    for (double t : coco_iou_thresholds()) {
        ApResult r = evaluate_at(gt, dets, t);
        all_defined = all_defined && r.defined;
        sum += r.ap;
        if (threshold_key(t) == "0.50") rep.ap50 = note("ap50", r);
        if (threshold_key(t) == "0.75") rep.ap75 = note("ap75", r);
        rep.pr_curves[threshold_key(t)] = std::move(r.curve);
    }
    rep.ap50_95 = sum / 10.0;
    if (!all_defined) rep.undefined.emplace_back("ap50_95");

    const SizeStratum s = SizeStratum::Small, m = SizeStratum::Medium, l = SizeStratum::Large;
    rep.ap_s = note("ap_s", evaluate_at(gt, dets, 0.5, &s));
    rep.ap_m = note("ap_m", evaluate_at(gt, dets, 0.5, &m));
    rep.ap_l = note("ap_l", evaluate_at(gt, dets, 0.5, &l));
    return rep;
}

}  // namespace shipprior
