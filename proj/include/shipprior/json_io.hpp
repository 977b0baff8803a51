/**
 * @file json_io.hpp
 * @brief JSON files: annotations, detections, evaluation reports and run configuration.
 *
 * Loaders check the document shape and report the offending location as a
 * JSON pointer, e.g. "/annotations/3/bbox: expected 4 numbers".
 */
#pragma once

#include "shipprior/core.hpp"
#include "shipprior/detect.hpp"
#include "shipprior/eval.hpp"
#include "shipprior/raster_io.hpp"

#include <json.hpp>

#include <filesystem>

namespace shipprior::io {

/// Document does not follow the expected shape.
class SchemaError : public InputError {
public:
    SchemaError(const std::string& pointer, const std::string& message)
        : InputError(pointer + ": " + message) {}
};

nlohmann::json read_json(const std::filesystem::path& path);
/// Two-space indent, trailing newline.
void write_json(const std::filesystem::path& path, const nlohmann::json& doc);

AnnotationSet parse_annotations(const nlohmann::json& doc);
nlohmann::json annotations_to_json(const AnnotationSet& set);
AnnotationSet load_annotations(const std::filesystem::path& path);

/// Raw scores are divided by the set maximum on the way out.
nlohmann::json detections_to_json(const DetectionSet& dets);
DetectionSet parse_detections(const nlohmann::json& doc);
DetectionSet load_detections(const std::filesystem::path& path);

nlohmann::json report_to_json(const EvalReport& rep);

struct AugmentDefaults {
    bool sse_after = true;  // augment first, then run the SSE
};

/// Everything a run can configure; file values are overridden by flags.
struct RunConfig {
    SseConfig sse;
    GradConfig grad;
    DetectConfig detect;
    ScheduleConfig schedule;
    double trimap_expand = 2.0;
    AugmentDefaults augment;
};

RunConfig parse_config(const nlohmann::json& doc, RunConfig base = {});
nlohmann::json config_to_json(const RunConfig& cfg);

}  // namespace shipprior::io
