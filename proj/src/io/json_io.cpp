#include "shipprior/json_io.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>

namespace shipprior::io {

using nlohmann::json;

namespace {

namespace fs = std::filesystem;

std::string child(const std::string& ptr, const std::string& key) { return ptr + "/" + key; }
std::string child(const std::string& ptr, std::size_t index) { return ptr + "/" + std::to_string(index); }

const json& require(const json& obj, const std::string& ptr, const char* key) {
    if (!obj.is_object()) throw SchemaError(ptr.empty() ? "/" : ptr, "expected an object");
    auto it = obj.find(key);
    if (it == obj.end()) throw SchemaError(child(ptr, key), "missing required field");
    return *it;
}

const json& require_array(const json& obj, const std::string& ptr, const char* key) {
    const json& v = require(obj, ptr, key);
    if (!v.is_array()) throw SchemaError(child(ptr, key), "expected an array");
    return v;
}

double as_number(const json& v, const std::string& ptr) {
    if (!v.is_number()) throw SchemaError(ptr, "expected a number");
    const double d = v.get<double>();
    if (!std::isfinite(d)) throw SchemaError(ptr, "expected a finite number");
    return d;
}

std::int64_t as_integer(const json& v, const std::string& ptr) {
    if (!v.is_number_integer()) throw SchemaError(ptr, "expected an integer");
    return v.get<std::int64_t>();
}

std::string as_string(const json& v, const std::string& ptr) {
    if (!v.is_string()) throw SchemaError(ptr, "expected a string");
    return v.get<std::string>();
}

BBox as_bbox(const json& v, const std::string& ptr) {
    if (!v.is_array() || v.size() != 4) throw SchemaError(ptr, "expected 4 numbers [x, y, w, h]");
    BBox b{as_number(v[0], child(ptr, 0)), as_number(v[1], child(ptr, 1)), as_number(v[2], child(ptr, 2)),
           as_number(v[3], child(ptr, 3))};
    if (!b.valid()) throw SchemaError(ptr, "box extent must be positive");
    return b;
}

json bbox_json(const BBox& b) { return json::array({b.x, b.y, b.w, b.h}); }

}  // namespace

json read_json(const fs::path& path) {
    std::ifstream in(path);
    if (!in) throw InputError("cannot open " + path.string());
    try {
        return json::parse(in);
    } catch (const json::parse_error& e) {
        throw InputError(path.string() + ": " + e.what());
    }
}

void write_json(const fs::path& path, const json& doc) {
    std::ofstream out(path);
    if (!out) throw InputError("cannot write " + path.string());
    out << doc.dump(2) << '\n';
}

AnnotationSet parse_annotations(const json& doc) {
    AnnotationSet set;
    const json& images = require_array(doc, "", "images");
    for (std::size_t i = 0; i < images.size(); ++i) {
        const std::string p = child("/images", i);
        ImageRecord rec;
        rec.id = as_integer(require(images[i], p, "id"), child(p, "id"));
        rec.file = as_string(require(images[i], p, "file"), child(p, "file"));
        rec.width = static_cast<int>(as_integer(require(images[i], p, "width"), child(p, "width")));
        rec.height = static_cast<int>(as_integer(require(images[i], p, "height"), child(p, "height")));
        if (rec.width <= 0 || rec.height <= 0) throw SchemaError(p, "image dimensions must be positive");
        set.images.push_back(std::move(rec));
    }
    const json& anns = require_array(doc, "", "annotations");
    for (std::size_t i = 0; i < anns.size(); ++i) {
        const std::string p = child("/annotations", i);
        Annotation a;
        a.image_id = as_integer(require(anns[i], p, "image_id"), child(p, "image_id"));
        a.bbox = as_bbox(require(anns[i], p, "bbox"), child(p, "bbox"));
        if (anns[i].contains("category")) a.category = as_string(anns[i]["category"], child(p, "category"));
        if (!set.find_image(a.image_id)) throw SchemaError(child(p, "image_id"), "unknown image id");
        set.annotations.push_back(std::move(a));
    }
    set.validate();
    return set;
}

json annotations_to_json(const AnnotationSet& set) {
    json doc;
    doc["images"] = json::array();
    for (const auto& img : set.images) {
        doc["images"].push_back({{"id", img.id}, {"file", img.file}, {"width", img.width}, {"height", img.height}});
    }
    doc["annotations"] = json::array();
    for (const auto& a : set.annotations) {
        doc["annotations"].push_back({{"image_id", a.image_id}, {"bbox", bbox_json(a.bbox)}, {"category", a.category}});
    }
    return doc;
}

AnnotationSet load_annotations(const fs::path& path) {
    try {
        return parse_annotations(read_json(path));
    } catch (const SchemaError& e) {
        throw SchemaError(path.string(), e.what());
    }
}

json detections_to_json(const DetectionSet& dets) {
    json doc;
    doc["detections"] = json::array();
    if (dets.empty()) return doc;
    for (const auto& d : normalize_scores(dets)) {
        doc["detections"].push_back({{"image_id", d.image_id}, {"bbox", bbox_json(d.bbox)}, {"score", d.score}});
    }
    return doc;
}

DetectionSet parse_detections(const json& doc) {
    DetectionSet dets;
    const json& arr = require_array(doc, "", "detections");
    for (std::size_t i = 0; i < arr.size(); ++i) {
        const std::string p = child("/detections", i);
        Detection d;
        d.image_id = as_integer(require(arr[i], p, "image_id"), child(p, "image_id"));
        d.bbox = as_bbox(require(arr[i], p, "bbox"), child(p, "bbox"));
        d.score = as_number(require(arr[i], p, "score"), child(p, "score"));
        if (d.score < 0.0) throw SchemaError(child(p, "score"), "score must be >= 0");
        dets.push_back(d);
    }
    return dets;
}

DetectionSet load_detections(const fs::path& path) {
    try {
        return parse_detections(read_json(path));
    } catch (const SchemaError& e) {
        throw SchemaError(path.string(), e.what());
    }
}

json report_to_json(const EvalReport& rep) {
    json doc;
    doc["ap50"] = rep.ap50;
    doc["ap75"] = rep.ap75;
    doc["ap50_95"] = rep.ap50_95;
    doc["ap_s"] = rep.ap_s;
    doc["ap_m"] = rep.ap_m;
    doc["ap_l"] = rep.ap_l;
    doc["undefined"] = rep.undefined;
    json curves = json::object();
    for (const auto& [key, points] : rep.pr_curves) {
        json arr = json::array();
        for (const auto& p : points) arr.push_back({{"recall", p.recall}, {"precision", p.precision}, {"score", p.score}});
        curves[key] = std::move(arr);
    }
    doc["pr_curves"] = std::move(curves);
    return doc;
}

namespace {

const char* threshold_name(ThresholdMode::Kind k) {
    switch (k) {
        case ThresholdMode::Kind::Fixed: return "fixed";
        case ThresholdMode::Kind::Percentile: return "percentile";
        case ThresholdMode::Kind::Otsu: return "otsu";
    }
    return "fixed";
}

}  // namespace

RunConfig parse_config(const json& doc, RunConfig cfg) {
    if (!doc.is_object()) throw SchemaError("/", "expected an object");
    // "seed" and "command" appear in echoed configs and are ignored here.
    for (const auto& [key, value] : doc.items()) {
        static const char* known[] = {"sse", "grad", "detect", "schedule", "trimap", "augment", "seed", "command"};
        if (std::find(std::begin(known), std::end(known), key) == std::end(known)) {
            throw SchemaError("/" + key, "unknown configuration section");
        }
    }
    auto unsigned_field = [](const json& v, const std::string& ptr) {
        const auto n = as_integer(v, ptr);
        if (n < 0 || n > 0xffffffffLL) throw SchemaError(ptr, "expected a non-negative 32-bit integer");
        return static_cast<std::uint32_t>(n);
    };

    if (doc.contains("sse")) {
        const json& s = doc["sse"];
        if (!s.is_object()) throw SchemaError("/sse", "expected an object");
        if (s.contains("scales")) {
            if (!s["scales"].is_array()) throw SchemaError("/sse/scales", "expected an array");
            cfg.sse.scales.clear();
            for (std::size_t i = 0; i < s["scales"].size(); ++i) {
                cfg.sse.scales.push_back(static_cast<int>(as_integer(s["scales"][i], child("/sse/scales", i))));
            }
        }
        if (s.contains("alpha1")) cfg.sse.alpha1 = unsigned_field(s["alpha1"], "/sse/alpha1");
        if (s.contains("alpha2")) cfg.sse.alpha2 = unsigned_field(s["alpha2"], "/sse/alpha2");
        if (s.contains("epsilon")) cfg.sse.epsilon = as_number(s["epsilon"], "/sse/epsilon");
        if (s.contains("q_max")) cfg.sse.q_max = unsigned_field(s["q_max"], "/sse/q_max");
    }

    if (doc.contains("grad")) {
        const json& g = doc["grad"];
        if (!g.is_object()) throw SchemaError("/grad", "expected an object");
        if (g.contains("weights")) {
            if (!g["weights"].is_array() || g["weights"].size() != 8) throw SchemaError("/grad/weights", "expected 8 numbers");
            for (std::size_t i = 0; i < 8; ++i) cfg.grad.weights[i] = as_number(g["weights"][i], child("/grad/weights", i));
        }
        if (g.contains("dilation")) cfg.grad.dilation = static_cast<int>(as_integer(g["dilation"], "/grad/dilation"));
        if (g.contains("encodings")) {
            if (!g["encodings"].is_array()) throw SchemaError("/grad/encodings", "expected an array");
            cfg.grad.encodings.clear();
            for (std::size_t i = 0; i < g["encodings"].size(); ++i) {
                const std::string e = as_string(g["encodings"][i], child("/grad/encodings", i));
                if (e == "linear") {
                    cfg.grad.encodings.push_back(Encoding::Linear);
                } else if (e == "square") {
                    cfg.grad.encodings.push_back(Encoding::Square);
                } else {
                    throw SchemaError(child("/grad/encodings", i), "expected \"linear\" or \"square\"");
                }
            }
        }
    }

    if (doc.contains("detect")) {
        const json& d = doc["detect"];
        if (!d.is_object()) throw SchemaError("/detect", "expected an object");
        if (d.contains("threshold_mode")) {
            const std::string m = as_string(d["threshold_mode"], "/detect/threshold_mode");
            if (m == "fixed") {
                cfg.detect.threshold.kind = ThresholdMode::Kind::Fixed;
            } else if (m == "percentile") {
                cfg.detect.threshold.kind = ThresholdMode::Kind::Percentile;
            } else if (m == "otsu") {
                cfg.detect.threshold.kind = ThresholdMode::Kind::Otsu;
            } else {
                throw SchemaError("/detect/threshold_mode", "expected fixed, percentile or otsu");
            }
        }
        if (d.contains("threshold")) cfg.detect.threshold.value = as_number(d["threshold"], "/detect/threshold");
        if (d.contains("min_area")) cfg.detect.min_area = static_cast<int>(as_integer(d["min_area"], "/detect/min_area"));
        if (d.contains("connectivity")) {
            cfg.detect.connectivity = static_cast<int>(as_integer(d["connectivity"], "/detect/connectivity"));
        }
        if (d.contains("scene_filtering")) {
            if (!d["scene_filtering"].is_boolean()) throw SchemaError("/detect/scene_filtering", "expected a boolean");
            cfg.detect.scene_filtering = d["scene_filtering"].get<bool>();
        }
    }

    if (doc.contains("schedule")) {
        const json& s = doc["schedule"];
        if (!s.is_object()) throw SchemaError("/schedule", "expected an object");
        if (s.contains("beta")) cfg.schedule.beta = as_number(s["beta"], "/schedule/beta");
        if (s.contains("total_epochs")) {
            cfg.schedule.total_epochs = static_cast<int>(as_integer(s["total_epochs"], "/schedule/total_epochs"));
        }
    }

    if (doc.contains("trimap")) {
        const json& t = doc["trimap"];
        if (!t.is_object()) throw SchemaError("/trimap", "expected an object");
        if (t.contains("expand")) cfg.trimap_expand = as_number(t["expand"], "/trimap/expand");
    }

    if (doc.contains("augment")) {
        const json& a = doc["augment"];
        if (!a.is_object()) throw SchemaError("/augment", "expected an object");
        if (a.contains("sse_order")) {
            const std::string o = as_string(a["sse_order"], "/augment/sse_order");
            if (o != "after" && o != "before") throw SchemaError("/augment/sse_order", "expected \"after\" or \"before\"");
            cfg.augment.sse_after = o == "after";
        }
    }

    auto check = [](const char* ptr, auto&& validate) {
        try {
            validate();
        } catch (const Error& e) {
            throw SchemaError(ptr, e.what());
        }
    };
    check("/sse", [&] { cfg.sse.validate(); });
    check("/grad", [&] { cfg.grad.validate(); });
    check("/detect", [&] { cfg.detect.validate(); });
    check("/schedule", [&] { cfg.schedule.validate(); });
    if (!(cfg.trimap_expand > 0.0)) throw SchemaError("/trimap/expand", "expected a positive factor");
    return cfg;
}

json config_to_json(const RunConfig& cfg) {
    json encodings = json::array();
    for (Encoding e : cfg.grad.encodings) encodings.push_back(e == Encoding::Linear ? "linear" : "square");
    return {
        {"sse",
         {{"scales", cfg.sse.scales},
          {"alpha1", cfg.sse.alpha1},
          {"alpha2", cfg.sse.alpha2},
          {"epsilon", cfg.sse.epsilon},
          {"q_max", cfg.sse.q_max}}},
        {"grad", {{"weights", cfg.grad.weights}, {"dilation", cfg.grad.dilation}, {"encodings", encodings}}},
        {"detect",
         {{"threshold_mode", threshold_name(cfg.detect.threshold.kind)},
          {"threshold", cfg.detect.threshold.value},
          {"min_area", cfg.detect.min_area},
          {"connectivity", cfg.detect.connectivity},
          {"scene_filtering", cfg.detect.scene_filtering}}},
        {"schedule", {{"beta", cfg.schedule.beta}, {"total_epochs", cfg.schedule.total_epochs}}},
        {"trimap", {{"expand", cfg.trimap_expand}}},
        {"augment",
         {{"sse_order", cfg.augment.sse_after ? "after" : "before"}}},
    };
}

}  // namespace shipprior::io
