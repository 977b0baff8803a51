#!/usr/bin/env python3
"""Slow COCO-style evaluator written straight from the metric definitions.

Shares nothing with the C++ library. Every quantity is recomputed from
scratch: IoU per pair, greedy matching per image, one precision/recall
point per ranked detection, and the interpolated precision at each recall
level as a max over all points at or beyond it.

    coco_slow.py ANNOTATIONS DETECTIONS            print the metrics
    coco_slow.py --check FIXTURE_DIR               compare with expected.json
"""
import json
import sys
from pathlib import Path

THRESHOLDS = [(50 + 5 * k) / 100 for k in range(10)]
LEVELS = [k / 100 for k in range(101)]


def iou(a, b):
    ax0, ay0, aw, ah = a
    bx0, by0, bw, bh = b
    iw = min(ax0 + aw, bx0 + bw) - max(ax0, bx0)
    ih = min(ay0 + ah, by0 + bh) - max(ay0, by0)
    if iw <= 0 or ih <= 0:
        return 0.0
    inter = iw * ih
    return inter / (aw * ah + bw * bh - inter)


def stratum(area):
    if area < 32 * 32:
        return "s"
    if area <= 96 * 96:
        return "m"
    return "l"


def match_image(dets, gts, thr):
    """dets: list of (global_index, score, box). Returns {global_index: is_tp}."""
    ranked = sorted(dets, key=lambda d: (-d[1], d[0]))
    used = [False] * len(gts)
    flags = {}
    for idx, _, box in ranked:
        best, best_iou = None, None
        for g, gbox in enumerate(gts):
            if used[g]:
                continue
            v = iou(box, gbox)
            if v >= thr and (best_iou is None or v > best_iou):
                best, best_iou = g, v
        if best is not None:
            used[best] = True
        flags[idx] = best is not None
    return flags


def ap_at(annotations, detections, thr, size=None):
    images = [img["id"] for img in annotations["images"]]
    gts_by_image = {i: [] for i in images}
    for a in annotations["annotations"]:
        if size is None or stratum(a["bbox"][2] * a["bbox"][3]) == size:
            gts_by_image[a["image_id"]].append(a["bbox"])
    n_gt = sum(len(v) for v in gts_by_image.values())
    if n_gt == 0:
        return None

    flags = {}
    for image in images:
        dets = [(k, d["score"], d["bbox"]) for k, d in enumerate(detections) if d["image_id"] == image]
        flags.update(match_image(dets, gts_by_image[image], thr))

    order = sorted(range(len(detections)), key=lambda k: (-detections[k]["score"], k))
    points = []
    tp = fp = 0
    for k in order:
        if flags[k]:
            tp += 1
        else:
            fp += 1
        points.append((tp / n_gt, tp / (tp + fp)))

    total = 0.0
    for r in LEVELS:
        candidates = [p for rec, p in points if rec >= r]
        total += max(candidates) if candidates else 0.0
    return total / 101


def metrics(annotations, detections):
    known = {img["id"] for img in annotations["images"]}
    for d in detections:
        if d["image_id"] not in known:
            raise ValueError(f"detection refers to unknown image {d['image_id']}")
    per_threshold = [ap_at(annotations, detections, t) for t in THRESHOLDS]
    value = lambda v: 0.0 if v is None else v
    return {
        "ap50": value(per_threshold[0]),
        "ap75": value(per_threshold[5]),
        "ap50_95": sum(value(v) for v in per_threshold) / 10,
        "ap_s": value(ap_at(annotations, detections, 0.5, "s")),
        "ap_m": value(ap_at(annotations, detections, 0.5, "m")),
        "ap_l": value(ap_at(annotations, detections, 0.5, "l")),
    }


def load(path):
    with open(path) as f:
        return json.load(f)


def main(argv):
    if len(argv) == 3 and argv[1] == "--check":
        fixture = Path(argv[2])
        got = metrics(load(fixture / "annotations.json"), load(fixture / "detections.json")["detections"])
        want = load(fixture / "expected.json")
        bad = [k for k in got if abs(got[k] - want[k]) > 1e-12]
        for k in bad:
            print(f"{k}: oracle {got[k]!r} vs committed {want[k]!r}")
        return 1 if bad else 0
    if len(argv) == 3:
        print(json.dumps(metrics(load(argv[1]), load(argv[2])["detections"]), indent=2))
        return 0
    print(__doc__)
    return 2


if __name__ == "__main__":
    sys.exit(main(sys.argv))
