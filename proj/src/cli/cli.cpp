#include "shipprior/cli.hpp"

#include "shipprior/augment.hpp"
#include "shipprior/detect.hpp"
#include "shipprior/eval.hpp"
#include "shipprior/gradbank.hpp"
#include "shipprior/json_io.hpp"
#include "shipprior/raster_io.hpp"
#include "shipprior/sse.hpp"
#include "shipprior/trimap.hpp"

#include <CLI11.hpp>

#ifdef _OPENMP
#include <omp.h>
#endif

#include <algorithm>
#include <charconv>
#include <chrono>
#include <cstdlib>
#include <exception>
#include <filesystem>
#include <fstream>
#include <map>
#include <optional>
#include <ostream>
#include <sstream>

namespace shipprior::cli {

namespace {

namespace fs = std::filesystem;
using nlohmann::json;

struct Common {
    int workers = 0;
    std::uint64_t seed = 0;
    std::string config_path;
};

int resolve_workers(int requested) {
    if (requested > 0) return requested;
    if (const char* env = std::getenv(kWorkersEnv)) {
        int v = 0;
        const auto* end = env + std::char_traits<char>::length(env);
        if (std::from_chars(env, end, v).ec == std::errc{} && v > 0) return v;
    }
#ifdef _OPENMP
    return omp_get_max_threads();
#else
    return 1;
#endif
}

void set_workers(int workers) {
#ifdef _OPENMP
    omp_set_num_threads(workers);
#else
    (void)workers;
#endif
}

io::RunConfig load_config(const Common& common) {
    if (common.config_path.empty()) return {};
    try {
        return io::parse_config(io::read_json(common.config_path));
    } catch (const io::SchemaError& e) {
        throw io::SchemaError(common.config_path, e.what());
    }
}

std::vector<fs::path> expand_inputs(const std::vector<std::string>& inputs) {
    std::vector<fs::path> files;
    for (const auto& in : inputs) {
        const fs::path p(in);
        if (fs::is_directory(p)) {
            std::vector<fs::path> found;
            for (const auto& entry : fs::directory_iterator(p)) {
                if (entry.is_regular_file() && io::is_raster_path(entry.path())) found.push_back(entry.path());
            }
            std::sort(found.begin(), found.end());
            files.insert(files.end(), found.begin(), found.end());
        } else if (fs::is_regular_file(p)) {
            files.push_back(p);
        } else {
            throw io::InputError("no such input: " + in);
        }
    }
    if (files.empty()) throw io::InputError("no input rasters found");
    return files;
}

/**
 * Runs fn(i) for every item. Several items spread across the workers with
 * each kernel running serially inside its item; a single item gets the
 * workers for its row-parallel kernels instead. Per-item results never
 * depend on the schedule. The first failure in item order is rethrown.
 */
template <typename Fn>
void for_each_item(std::size_t count, int workers, Fn fn) {
    std::vector<std::exception_ptr> errors(count);
    if (count <= 1 || workers <= 1) {
        for (std::size_t i = 0; i < count; ++i) {
            try {
                fn(i);
            } catch (...) {
                errors[i] = std::current_exception();
            }
        }
    } else {
#pragma omp parallel for schedule(dynamic) num_threads(workers)
        for (std::ptrdiff_t i = 0; i < static_cast<std::ptrdiff_t>(count); ++i) {
            try {
                fn(static_cast<std::size_t>(i));
            } catch (...) {
                errors[i] = std::current_exception();
            }
        }
    }
    for (auto& e : errors) {
        if (e) std::rethrow_exception(e);
    }
}

std::vector<int> parse_int_list(const std::string& text) {
    std::vector<int> out;
    std::stringstream ss(text);
    std::string item;
    while (std::getline(ss, item, ',')) {
        int v = 0;
        const auto res = std::from_chars(item.data(), item.data() + item.size(), v);
        if (res.ec != std::errc{} || res.ptr != item.data() + item.size()) {
            throw io::InputError("expected a comma-separated integer list, got '" + text + "'");
        }
        out.push_back(v);
    }
    return out;
}

std::string format_double(double v) {
    char buf[32];
    const auto res = std::to_chars(buf, buf + sizeof buf, v);
    return std::string(buf, res.ptr);
}

void echo_config(const fs::path& path, const io::RunConfig& cfg, const Common& common, const json& extra = {}) {
    json doc = io::config_to_json(cfg);
    doc["seed"] = common.seed;
    if (!extra.is_null()) doc["command"] = extra;
    io::write_json(path, doc);
}

fs::path config_echo_for_file(const fs::path& output) {
    fs::path p = output;
    p.replace_extension(".config.json");
    return p;
}

void ensure_dir(const fs::path& dir) {
    std::error_code ec;
    fs::create_directories(dir, ec);
    if (ec) throw io::InputError("cannot create " + dir.string() + ": " + ec.message());
}

void ensure_parent(const fs::path& file) {
    if (file.has_parent_path()) ensure_dir(file.parent_path());
}

std::optional<fs::path> find_mask(const std::string& scene_dir, const fs::path& image_file) {
    if (scene_dir.empty()) return std::nullopt;
    for (const char* ext : {".png", ".pgm"}) {
        fs::path candidate = fs::path(scene_dir) / (image_file.stem().string() + ext);
        if (fs::is_regular_file(candidate)) return candidate;
    }
    return std::nullopt;
}

// ---- sse --------------------------------------------------------------------

struct SseArgs {
    std::vector<std::string> inputs;
    std::string out_dir;
    std::string scales;
    std::optional<std::uint32_t> alpha1, alpha2, q_max;
    std::optional<double> epsilon;
    std::string format = "png";
};

void apply_sse_flags(io::RunConfig& cfg, const std::string& scales, const std::optional<double>& epsilon) {
    if (!scales.empty()) cfg.sse.scales = parse_int_list(scales);
    if (epsilon) cfg.sse.epsilon = *epsilon;
}

int cmd_sse(const SseArgs& a, const Common& common, std::ostream& out) {
    io::RunConfig cfg = load_config(common);
    apply_sse_flags(cfg, a.scales, a.epsilon);
    if (a.alpha1) cfg.sse.alpha1 = *a.alpha1;
    if (a.alpha2) cfg.sse.alpha2 = *a.alpha2;
    if (a.q_max) cfg.sse.q_max = *a.q_max;
    cfg.sse.validate();

    const auto files = expand_inputs(a.inputs);
    const fs::path dir(a.out_dir);
    ensure_dir(dir);
    const bool png = a.format == "png";
    const int workers = resolve_workers(common.workers);
    set_workers(workers);

    std::vector<double> millis(files.size(), 0.0);
    for_each_item(files.size(), workers, [&](std::size_t i) {
        const auto t0 = std::chrono::steady_clock::now();
        const GrayImage img = io::load_gray(files[i]);
        const PriorMap prior = sse_multi_scale(img, cfg.sse.scales, cfg.sse.epsilon);
        const EncodedPrior enc = encode_prior(prior, img, cfg.sse);
        const std::string stem = files[i].stem().string();
        io::write_raster(dir / (stem + (png ? "_prior.png" : "_prior.pgm")), io::prior_raster(prior));
        io::write_raster(dir / (stem + (png ? "_encoded.png" : "_encoded.ppm")), io::encoded_raster(enc));
        millis[i] = std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - t0).count();
    });
    for (std::size_t i = 0; i < files.size(); ++i) {
        out << files[i].filename().string() << '\t' << format_double(millis[i]) << " ms\n";
    }
    echo_config(dir / "config.json", cfg, common);
    return kSuccess;
}

// ---- gradmap -----------------------------------------------------------------

struct GradArgs {
    std::vector<std::string> inputs;
    std::string out_dir;
    std::vector<double> weights;
    std::optional<int> dilation;
    std::string encodings;
};

int cmd_gradmap(const GradArgs& a, const Common& common, std::ostream& out) {
    io::RunConfig cfg = load_config(common);
    if (!a.weights.empty()) {
        if (a.weights.size() != 8) throw io::InputError("--weights takes exactly 8 values");
        std::copy(a.weights.begin(), a.weights.end(), cfg.grad.weights.begin());
    }
    if (a.dilation) cfg.grad.dilation = *a.dilation;
    if (!a.encodings.empty()) {
        cfg.grad.encodings.clear();
        std::stringstream ss(a.encodings);
        std::string item;
        while (std::getline(ss, item, ',')) {
            if (item == "linear") {
                cfg.grad.encodings.push_back(Encoding::Linear);
            } else if (item == "square") {
                cfg.grad.encodings.push_back(Encoding::Square);
            } else {
                throw io::InputError("unknown encoding '" + item + "'");
            }
        }
    }
    cfg.grad.validate();

    const auto files = expand_inputs(a.inputs);
    const fs::path dir(a.out_dir);
    ensure_dir(dir);
    const int workers = resolve_workers(common.workers);
    set_workers(workers);

    std::vector<std::vector<std::string>> names(files.size());
    for_each_item(files.size(), workers, [&](std::size_t i) {
        const GradientFeatures f = gradient_features(io::load_gray(files[i]), cfg.grad);
        std::vector<GrayImage> frames;
        for (const auto& c : f.channels) {
            frames.push_back(c.data);
            names[i].push_back(c.name);
        }
        io::write_pfm_frames(dir / (files[i].stem().string() + "_grad.pfm"), frames);
    });
    for (std::size_t i = 0; i < files.size(); ++i) {
        out << files[i].filename().string() << '\t';
        for (std::size_t k = 0; k < names[i].size(); ++k) out << (k ? "," : "") << names[i][k];
        out << '\n';
    }
    echo_config(dir / "config.json", cfg, common, {{"channels", names.empty() ? std::vector<std::string>{} : names[0]}});
    return kSuccess;
}

// ---- trimap ------------------------------------------------------------------

struct TrimapArgs {
    std::string annotations;
    std::string out_dir;
    std::string scene_dir;
    std::optional<double> expand;
    std::string format = "png";
};

int cmd_trimap(const TrimapArgs& a, const Common& common, std::ostream& out) {
    io::RunConfig cfg = load_config(common);
    if (a.expand) cfg.trimap_expand = *a.expand;
    const AnnotationSet set = io::load_annotations(a.annotations);
    const fs::path dir(a.out_dir);
    ensure_dir(dir);
    const int workers = resolve_workers(common.workers);
    set_workers(workers);

    std::vector<std::array<std::size_t, 3>> counts(set.images.size());
    for_each_item(set.images.size(), workers, [&](std::size_t i) {
        const ImageRecord& rec = set.images[i];
        SceneMask scene(rec.width, rec.height);
        if (auto mask = find_mask(a.scene_dir, rec.file)) scene = io::load_scene_mask(*mask);
        const auto anns = set.for_image(rec.id);
        const Trimap t = build_trimap(anns, scene, cfg.trimap_expand, rec.width, rec.height);
        const std::string name = fs::path(rec.file).stem().string() + (a.format == "png" ? "_trimap.png" : "_trimap.pgm");
        io::write_raster(dir / name, io::trimap_raster(t));
        counts[i] = {t.count(TrimapLabel::Unknown), t.count(TrimapLabel::Positive), t.count(TrimapLabel::Negative)};
    });
    for (std::size_t i = 0; i < set.images.size(); ++i) {
        out << set.images[i].file << "\tunknown=" << counts[i][0] << " positive=" << counts[i][1]
            << " negative=" << counts[i][2] << '\n';
    }
    echo_config(dir / "config.json", cfg, common);
    return kSuccess;
}

// ---- detect ------------------------------------------------------------------

struct DetectArgs {
    std::vector<std::string> inputs;
    std::string output;
    std::string annotations;
    std::string scene_dir;
    std::string scene;
    std::string threshold_mode;
    std::optional<double> threshold;
    std::optional<int> min_area, connectivity;
    bool no_scene_filter = false;
    std::string scales;
    std::optional<double> epsilon;
};

int cmd_detect(const DetectArgs& a, const Common& common, std::ostream& out) {
    io::RunConfig cfg = load_config(common);
    apply_sse_flags(cfg, a.scales, a.epsilon);
    if (!a.threshold_mode.empty()) {
        if (a.threshold_mode == "fixed") {
            cfg.detect.threshold.kind = ThresholdMode::Kind::Fixed;
        } else if (a.threshold_mode == "percentile") {
            cfg.detect.threshold.kind = ThresholdMode::Kind::Percentile;
        } else if (a.threshold_mode == "otsu") {
            cfg.detect.threshold.kind = ThresholdMode::Kind::Otsu;
        } else {
            throw io::InputError("unknown threshold mode '" + a.threshold_mode + "'");
        }
    }
    if (a.threshold) cfg.detect.threshold.value = *a.threshold;
    if (a.min_area) cfg.detect.min_area = *a.min_area;
    if (a.connectivity) cfg.detect.connectivity = *a.connectivity;
    if (a.no_scene_filter) cfg.detect.scene_filtering = false;
    cfg.sse.validate();
    cfg.detect.validate();

    const auto files = expand_inputs(a.inputs);
    if (!a.scene.empty() && files.size() != 1) throw io::InputError("--scene applies to a single input; use --scene-dir");
    std::optional<AnnotationSet> set;
    if (!a.annotations.empty()) set = io::load_annotations(a.annotations);

    std::vector<ImageId> ids(files.size());
    for (std::size_t i = 0; i < files.size(); ++i) {
        if (set) {
            const ImageRecord* rec = set->find_file(files[i].filename().string());
            if (!rec) rec = set->find_file(files[i].string());
            if (!rec) throw io::InputError(files[i].string() + " is not listed in " + a.annotations);
            ids[i] = rec->id;
        } else {
            ids[i] = static_cast<ImageId>(i);
        }
    }

    const int workers = resolve_workers(common.workers);
    set_workers(workers);
    std::vector<DetectionSet> per_image(files.size());
    for_each_item(files.size(), workers, [&](std::size_t i) {
        const GrayImage img = io::load_gray(files[i]);
        std::optional<SceneMask> scene;
        if (!a.scene.empty()) {
            scene = io::load_scene_mask(a.scene);
        } else if (auto mask = find_mask(a.scene_dir, files[i])) {
            scene = io::load_scene_mask(*mask);
        }
        if (scene && (scene->width() != img.width() || scene->height() != img.height())) {
            throw io::InputError("scene mask for " + files[i].string() + " does not match the image dimensions");
        }
        per_image[i] = detect_pipeline(img, cfg.sse, cfg.detect, scene ? &*scene : nullptr, ids[i]);
    });

    DetectionSet all;
    for (std::size_t i = 0; i < files.size(); ++i) {
        out << files[i].filename().string() << '\t' << per_image[i].size() << " detections\n";
        all.insert(all.end(), per_image[i].begin(), per_image[i].end());
    }
    const fs::path output(a.output);
    ensure_parent(output);
    io::write_json(output, io::detections_to_json(all));
    echo_config(config_echo_for_file(output), cfg, common);
    return kSuccess;
}

// ---- eval --------------------------------------------------------------------

struct EvalArgs {
    std::string detections;
    std::string annotations;
    std::string output;
    std::string pr_csv;
};

int cmd_eval(const EvalArgs& a, const Common& common, std::ostream& out) {
    const AnnotationSet gt = io::load_annotations(a.annotations);
    const DetectionSet dets = io::load_detections(a.detections);
    const EvalReport rep = coco_metrics(gt, dets);
    const json doc = io::report_to_json(rep);

    if (a.output.empty()) {
        out << doc.dump(2) << '\n';
    } else {
        const fs::path output(a.output);
        ensure_parent(output);
        io::write_json(output, doc);
        echo_config(config_echo_for_file(output), load_config(common), common);
        for (const char* key : {"ap50", "ap75", "ap50_95", "ap_s", "ap_m", "ap_l"}) {
            out << key << '\t' << format_double(doc[key].get<double>()) << '\n';
        }
    }
    if (!a.pr_csv.empty()) {
        std::ofstream csv(a.pr_csv);
        if (!csv) throw io::InputError("cannot write " + a.pr_csv);
        csv << "iou,rank,recall,precision,score\n";
        for (const auto& [key, points] : rep.pr_curves) {
            for (std::size_t k = 0; k < points.size(); ++k) {
                csv << key << ',' << k << ',' << format_double(points[k].recall) << ','
                    << format_double(points[k].precision) << ',' << format_double(points[k].score) << '\n';
            }
        }
    }
    return kSuccess;
}

// ---- schedule ----------------------------------------------------------------

struct ScheduleArgs {
    std::optional<double> beta;
    std::optional<int> epochs;
    std::size_t samples = 1000;
    std::string output;
};

int cmd_schedule(const ScheduleArgs& a, const Common& common, std::ostream& out) {
    io::RunConfig cfg = load_config(common);
    if (a.beta) cfg.schedule.beta = *a.beta;
    if (a.epochs) cfg.schedule.total_epochs = *a.epochs;
    cfg.schedule.validate();

    std::ostringstream table;
    table << "epoch,ratio,count\n";
    for (int m = 0; m <= cfg.schedule.total_epochs; ++m) {
        const EpochPlan plan = plan_epoch(m, a.samples, cfg.schedule, common.seed);
        table << m << ',' << format_double(plan.ratio) << ',' << plan.augmented() << '\n';
    }
    if (a.output.empty()) {
        out << table.str();
    } else {
        const fs::path output(a.output);
        ensure_parent(output);
        std::ofstream f(output);
        if (!f) throw io::InputError("cannot write " + a.output);
        f << table.str();
        echo_config(config_echo_for_file(output), cfg, common);
    }
    return kSuccess;
}

// ---- augment -----------------------------------------------------------------

struct AugmentArgs {
    std::string op;
    std::vector<std::string> inputs;
    std::string out_dir;
    std::string annotations;
    std::optional<double> lambda;
    std::optional<double> tx, ty, rot, shear_x, shear_y, scale;
    int count = 1;
    bool sse = false;
    std::string sse_order;
};

struct LoadedInput {
    GrayImage image;
    int bit_depth = 8;
    std::vector<Annotation> annotations;
};

// One augmentation draw applied to a list of aligned channels.
struct AugmentDraw {
    double lambda = 0.5;
    AffineParams affine;
    std::uint64_t mosaic_seed = 0;
};

std::vector<Sample> apply_draw(const std::string& op, const AugmentDraw& draw,
                               const std::vector<std::vector<GrayImage>>& channels_per_input,
                               const std::vector<LoadedInput>& inputs, ImageId out_id) {
    const std::size_t n_channels = channels_per_input[0].size();
    std::vector<Sample> out;
    for (std::size_t c = 0; c < n_channels; ++c) {
        // Annotations only ride along on channel 0.
        auto anns_of = [&](std::size_t k) {
            return c == 0 ? inputs[k].annotations : std::vector<Annotation>{};
        };
        Sample s;
        if (op == "mixup") {
            s = mixup(channels_per_input[0][c], channels_per_input[1][c], draw.lambda, anns_of(0), anns_of(1));
        } else if (op == "affine") {
            s = apply_affine(channels_per_input[0][c], anns_of(0), draw.affine);
        } else {
            std::vector<Sample> four;
            for (std::size_t k = 0; k < 4; ++k) four.push_back({channels_per_input[k][c], anns_of(k)});
            MosaicOptions opts;
            opts.image_id = out_id;
            s = mosaic(four, draw.mosaic_seed, opts);
        }
        for (auto& ann : s.annotations) ann.image_id = out_id;
        out.push_back(std::move(s));
    }
    return out;
}

int cmd_augment(const AugmentArgs& a, const Common& common, std::ostream& out) {
    io::RunConfig cfg = load_config(common);
    if (!a.sse_order.empty()) {
        if (a.sse_order != "after" && a.sse_order != "before") throw io::InputError("--sse-order takes after|before");
        cfg.augment.sse_after = a.sse_order == "after";
    }
    const std::size_t needed = a.op == "mixup" ? 2 : a.op == "mosaic" ? 4 : 1;
    if (a.op != "mixup" && a.op != "mosaic" && a.op != "affine") throw io::InputError("unknown --op '" + a.op + "'");
    if (a.inputs.size() != needed) {
        throw io::InputError("--op " + a.op + " takes exactly " + std::to_string(needed) + " input images");
    }
    if (a.count < 1) throw io::InputError("--count must be >= 1");
    if (a.sse) cfg.sse.validate();

    std::optional<AnnotationSet> set;
    if (!a.annotations.empty()) set = io::load_annotations(a.annotations);
    std::vector<LoadedInput> inputs;
    for (const auto& path : a.inputs) {
        const io::Raster r = io::read_raster(path);
        if (r.channels != 1) throw io::InputError(path + ": color images are not supported");
        LoadedInput in{io::to_gray(r), r.bit_depth, {}};
        if (set) {
            const ImageRecord* rec = set->find_file(fs::path(path).filename().string());
            if (!rec) rec = set->find_file(path);
            if (rec) in.annotations = set->for_image(rec->id);
        }
        inputs.push_back(std::move(in));
    }

    const bool fixed_affine = a.tx || a.ty || a.rot || a.shear_x || a.shear_y || a.scale;
    const fs::path dir(a.out_dir);
    ensure_dir(dir);
    const int workers = resolve_workers(common.workers);
    set_workers(workers);

    for_each_item(static_cast<std::size_t>(a.count), workers, [&](std::size_t k) {
        Rng rng(derive_seed(common.seed, k));
        AugmentDraw draw;
        draw.lambda = a.lambda ? *a.lambda : rng.uniform01();
        draw.affine = AffineParams::sample(rng);
        if (fixed_affine) {
            draw.affine = AffineParams{a.tx.value_or(0.0), a.ty.value_or(0.0), a.rot.value_or(0.0),
                                       a.shear_x.value_or(0.0), a.shear_y.value_or(0.0), a.scale.value_or(1.0)};
        }
        draw.mosaic_seed = rng.next();

        const auto out_id = static_cast<ImageId>(k);
        std::vector<std::vector<GrayImage>> channels;
        const bool sse_first = a.sse && !cfg.augment.sse_after;
        for (const auto& in : inputs) {
            if (sse_first) {
                const EncodedPrior enc = sse_extract(in.image, cfg.sse);
                GrayImage lo(enc.width, enc.height), hi(enc.width, enc.height);
                for (std::size_t p = 0; p < enc.low.size(); ++p) {
                    lo.pixels()[p] = enc.low[p];
                    hi.pixels()[p] = enc.high[p];
                }
                channels.push_back({in.image, std::move(lo), std::move(hi)});
            } else {
                channels.push_back({in.image});
            }
        }
        std::vector<Sample> result = apply_draw(a.op, draw, channels, inputs, out_id);

        const std::string stem = "aug_" + std::to_string(k);
        io::write_raster(dir / (stem + ".png"), io::from_gray(result[0].image, inputs[0].bit_depth));
        if (a.sse) {
            EncodedPrior enc;
            if (sse_first) {
                enc.width = result[0].image.width();
                enc.height = result[0].image.height();
                enc.intensity = result[0].image;
                for (double v : result[1].image.pixels()) enc.low.push_back(static_cast<std::uint32_t>(std::lround(v)));
                for (double v : result[2].image.pixels()) enc.high.push_back(static_cast<std::uint32_t>(std::lround(v)));
            } else {
                enc = sse_extract(result[0].image, cfg.sse);
            }
            io::write_raster(dir / (stem + "_encoded.png"), io::encoded_raster(enc));
        }
        AnnotationSet anns;
        anns.images.push_back({out_id, stem + ".png", result[0].image.width(), result[0].image.height()});
        anns.annotations = result[0].annotations;
        io::write_json(dir / (stem + ".json"), io::annotations_to_json(anns));
    });
    out << "wrote " << a.count << " " << a.op << " sample(s) to " << dir.string() << '\n';
    echo_config(dir / "config.json", cfg, common, {{"op", a.op}, {"count", a.count}});
    return kSuccess;
}

bool is_input_error(ErrorCode code) {
    switch (code) {
        case ErrorCode::DimensionMismatch:
        case ErrorCode::NonFiniteValue:
        case ErrorCode::EmptySet:
        case ErrorCode::EpochOutOfRange:
        case ErrorCode::ParamOutOfRange:
        case ErrorCode::UnknownImageId:
        case ErrorCode::InvalidConfig:
            return true;
        case ErrorCode::Ok:
            return false;
    }
    return false;
}

void add_common(CLI::App* sub, Common& common, bool seeded) {
    sub->add_option("--workers", common.workers, "Worker threads (default: $SHIPPRIOR_WORKERS or all cores)");
    sub->add_option("--config", common.config_path, "JSON configuration file; flags override it");
    sub->add_option("--seed", common.seed, seeded ? "Random seed" : "Random seed (unused by this command)");
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
    CLI::App app{"Scene-prior toolkit for infrared ship detection"};
    app.require_subcommand(1);
    Common common;

    SseArgs sse_args;
    auto* sse = app.add_subcommand("sse", "Compute the SSE prior and its encoded channels");
    sse->add_option("inputs", sse_args.inputs, "Input rasters or directories")->required();
    sse->add_option("-o,--out", sse_args.out_dir, "Output directory")->required();
    sse->add_option("--scales", sse_args.scales, "Comma-separated patch edges, e.g. 1,2,3");
    sse->add_option("--alpha1", sse_args.alpha1, "Low-channel modulus");
    sse->add_option("--alpha2", sse_args.alpha2, "High-channel divisor");
    sse->add_option("--epsilon", sse_args.epsilon, "Background weight denominator floor");
    sse->add_option("--q-max", sse_args.q_max, "Quantization ceiling");
    sse->add_option("--format", sse_args.format, "png or pnm")->check(CLI::IsMember({"png", "pnm"}));
    add_common(sse, common, false);

    GradArgs grad_args;
    auto* grad = app.add_subcommand("gradmap", "Eight-direction gradient features as multi-frame PFM");
    grad->add_option("inputs", grad_args.inputs, "Input rasters or directories")->required();
    grad->add_option("-o,--out", grad_args.out_dir, "Output directory")->required();
    grad->add_option("--weights", grad_args.weights, "Eight direction weights, clockwise from east")->delimiter(',');
    grad->add_option("--dilation", grad_args.dilation, "Neighbor distance in pixels");
    grad->add_option("--encodings", grad_args.encodings, "linear,square");
    add_common(grad, common, false);

    TrimapArgs tri_args;
    auto* tri = app.add_subcommand("trimap", "Positive/Negative/Unknown supervision masks");
    tri->add_option("--annotations", tri_args.annotations, "Annotation JSON")->required();
    tri->add_option("-o,--out", tri_args.out_dir, "Output directory")->required();
    tri->add_option("--scene-dir", tri_args.scene_dir, "Directory of scene masks named after the image stems");
    tri->add_option("--expand", tri_args.expand, "Box expansion factor");
    tri->add_option("--format", tri_args.format, "png or pnm")->check(CLI::IsMember({"png", "pnm"}));
    add_common(tri, common, false);

    DetectArgs det_args;
    auto* det = app.add_subcommand("detect", "Candidate detection over the SSE prior");
    det->add_option("inputs", det_args.inputs, "Input rasters or directories")->required();
    det->add_option("-o,--out", det_args.output, "Detections JSON")->required();
    det->add_option("--annotations", det_args.annotations, "Annotation JSON used to resolve image ids");
    det->add_option("--scene-dir", det_args.scene_dir, "Directory of scene masks named after the image stems");
    det->add_option("--scene", det_args.scene, "Scene mask for a single input");
    det->add_option("--threshold-mode", det_args.threshold_mode, "fixed, percentile or otsu");
    det->add_option("--threshold", det_args.threshold, "Fixed threshold or percentile");
    det->add_option("--min-area", det_args.min_area, "Smallest kept component, pixels");
    det->add_option("--connectivity", det_args.connectivity, "4 or 8");
    det->add_flag("--no-scene-filter", det_args.no_scene_filter, "Keep detections on land and cloud");
    det->add_option("--scales", det_args.scales, "Comma-separated patch edges");
    det->add_option("--epsilon", det_args.epsilon, "Background weight denominator floor");
    add_common(det, common, false);

    EvalArgs eval_args;
    auto* ev = app.add_subcommand("eval", "COCO-style AP metrics");
    ev->add_option("--detections", eval_args.detections, "Detections JSON")->required();
    ev->add_option("--annotations", eval_args.annotations, "Annotation JSON")->required();
    ev->add_option("-o,--out", eval_args.output, "Metrics JSON (stdout when omitted)");
    ev->add_option("--pr-csv", eval_args.pr_csv, "Also write PR curves as CSV");
    add_common(ev, common, false);

    ScheduleArgs sched_args;
    auto* sched = app.add_subcommand("schedule", "Per-epoch augmented-data ratio table");
    sched->add_option("--beta", sched_args.beta, "Decay strength in (0, 1)");
    sched->add_option("--epochs", sched_args.epochs, "Total epochs M");
    sched->add_option("--samples", sched_args.samples, "Dataset size used for the count column");
    sched->add_option("-o,--out", sched_args.output, "CSV file (stdout when omitted)");
    add_common(sched, common, true);

    AugmentArgs aug_args;
    auto* aug = app.add_subcommand("augment", "MixUp, Mosaic or affine augmentation");
    aug->add_option("--op", aug_args.op, "mixup, mosaic or affine")->required();
    aug->add_option("inputs", aug_args.inputs, "Input rasters (2 for mixup, 4 for mosaic, 1 for affine)")->required();
    aug->add_option("-o,--out", aug_args.out_dir, "Output directory")->required();
    aug->add_option("--annotations", aug_args.annotations, "Annotation JSON for the inputs");
    aug->add_option("--lambda", aug_args.lambda, "MixUp weight of the first image");
    aug->add_option("--tx", aug_args.tx);
    aug->add_option("--ty", aug_args.ty);
    aug->add_option("--rot", aug_args.rot, "Degrees");
    aug->add_option("--shear-x", aug_args.shear_x, "Degrees");
    aug->add_option("--shear-y", aug_args.shear_y, "Degrees");
    aug->add_option("--scale", aug_args.scale);
    aug->add_option("--count", aug_args.count, "Number of samples, each with its own derived seed");
    aug->add_flag("--sse", aug_args.sse, "Also write the encoded SSE channels");
    aug->add_option("--sse-order", aug_args.sse_order, "after (augment then SSE) or before");
    add_common(aug, common, true);

    std::vector<std::string> reversed(args.rbegin(), args.rend());
    try {
        app.parse(reversed);
    } catch (const CLI::CallForHelp&) {
        out << app.help();
        return kSuccess;
    } catch (const CLI::ParseError& e) {
        err << "error: " << e.what() << '\n';
        return kInputError;
    }

    try {
        if (sse->parsed()) return cmd_sse(sse_args, common, out);
        if (grad->parsed()) return cmd_gradmap(grad_args, common, out);
        if (tri->parsed()) return cmd_trimap(tri_args, common, out);
        if (det->parsed()) return cmd_detect(det_args, common, out);
        if (ev->parsed()) return cmd_eval(eval_args, common, out);
        if (sched->parsed()) return cmd_schedule(sched_args, common, out);
        if (aug->parsed()) return cmd_augment(aug_args, common, out);
    } catch (const io::InputError& e) {
        err << "error: " << e.what() << '\n';
        return kInputError;
    } catch (const Error& e) {
        err << "error: " << e.what() << '\n';
        return is_input_error(e.code()) ? kInputError : kInternalError;
    } catch (const std::exception& e) {
        err << "internal error: " << e.what() << '\n';
        return kInternalError;
    }
    return kInputError;
}

}  // namespace shipprior::cli
