#!/usr/bin/env python3
"""Regenerates the 10-image evaluation fixture and its expected metrics.

Each detection is built to hit a chosen IoU with its ground-truth box, kept
at least 0.01 away from every COCO threshold so rounding cannot flip a match.
"""
import json
import random
import sys
from pathlib import Path

import coco_slow

SIZE = 256


def shifted(box, target, rng):
    """A box of the same size shifted horizontally to reach IoU = target."""
    x, y, w, h = box
    # Equal boxes offset by dx along x: IoU = (w - dx) / (w + dx).
    dx = w * (1 - target) / (1 + target)
    x2 = x + dx if x + dx + w <= SIZE else x - dx
    return [round(x2, 6), y, w, h]


def pick_iou(rng):
    while True:
        v = rng.uniform(0.3, 0.99)
        if all(abs(v - t) > 0.01 for t in coco_slow.THRESHOLDS):
            return v


def build(seed=20240611):
    rng = random.Random(seed)
    images, annotations, detections = [], [], []
    edge_choices = [(6, 20), (20, 31), (35, 90), (100, 140)]
    for image_id in range(10):
        images.append({"id": image_id, "file": f"scene_{image_id:02d}.png", "width": SIZE, "height": SIZE})
        for _ in range(rng.randint(1, 4)):
            lo, hi = rng.choice(edge_choices)
            w, h = rng.randint(lo, hi), rng.randint(lo, hi)
            box = [rng.randint(0, SIZE - w), rng.randint(0, SIZE - h), w, h]
            annotations.append({"image_id": image_id, "bbox": box, "category": "ship"})
            roll = rng.random()
            if roll < 0.8:
                detections.append({"image_id": image_id, "bbox": shifted(box, pick_iou(rng), rng),
                                   "score": round(rng.uniform(0.05, 1.0), 6)})
            if roll > 0.6:
                # Duplicate hit on the same target.
                detections.append({"image_id": image_id, "bbox": shifted(box, pick_iou(rng), rng),
                                   "score": round(rng.uniform(0.05, 1.0), 6)})
        for _ in range(rng.randint(0, 2)):
            w, h = rng.randint(5, 40), rng.randint(5, 40)
            detections.append({"image_id": image_id,
                               "bbox": [rng.randint(0, SIZE - w), rng.randint(0, SIZE - h), w, h],
                               "score": round(rng.uniform(0.01, 0.9), 6)})
    scores = [d["score"] for d in detections]
    assert len(set(scores)) == len(scores), "scores must be distinct"
    return {"images": images, "annotations": annotations}, {"detections": detections}


def main(argv):
    out = Path(argv[1]) if len(argv) > 1 else Path(__file__).resolve().parents[1] / "fixtures" / "eval"
    out.mkdir(parents=True, exist_ok=True)
    annotations, detections = build()
    expected = coco_slow.metrics(annotations, detections["detections"])
    for name, doc in (("annotations.json", annotations), ("detections.json", detections),
                      ("expected.json", expected)):
        (out / name).write_text(json.dumps(doc, indent=2) + "\n")
    print(json.dumps(expected, indent=2))


if __name__ == "__main__":
    main(sys.argv)
