// Copyright 2026-present the depthedge project
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.


#include <CLI11.hpp>

#include <algorithm>
#include <chrono>
#include <cmath>
#include <iomanip>
#include <map>
#include <ostream>
#include <random>
#include <string>

#include "depthedge/bokeh.hpp"
#include "depthedge/cli.hpp"
#include "depthedge/errors.hpp"
#include "depthedge/kernels.hpp"
#include "depthedge/metrics.hpp"
#include "depthedge/simd.hpp"
#include "depthedge/weights.hpp"

namespace depthedge::cli {

namespace fs = std::filesystem;

namespace {

struct NetOptions {
    std::string weights;
    std::size_t width = 640;
    std::size_t height = 384;
    std::size_t channel_divisor = 1;
};

void add_net_options(CLI::App* cmd, NetOptions& o, bool need_weights) {
    auto* w = cmd->add_option("--weights", o.weights, "Weight bundle (.ldwb)");
    if (need_weights) w->required();
    cmd->add_option("--width", o.width, "Network input width")->capture_default_str();
    cmd->add_option("--height", o.height, "Network input height")->capture_default_str();
    cmd->add_option("--channel-divisor", o.channel_divisor, "Divide every preset channel count by this")
        ->check(CLI::PositiveNumber)
        ->capture_default_str();
}

graph::GraphSpec preset_for(const NetOptions& o) {
    return graph::pydnet_preset(o.width, o.height, graph::PydnetConfig{}.scaled_down(o.channel_divisor));
}

graph::Network load_network(const NetOptions& o) {
    return graph::build(preset_for(o), weights::load_file(o.weights));
}

graph::DepthMap run_network(const graph::Network& net, const RgbImage& image) {
    const auto& spec = net.spec();
    return graph::infer(net, graph::preprocess(image, spec.input_w, spec.input_h));
}

bool has_extension(const fs::path& p, std::string_view ext) {
    std::string e = p.extension().string();
    std::transform(e.begin(), e.end(), e.begin(), [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
    return e == ext;
}

void write_image_by_extension(const fs::path& path, const RgbImage& image) {
    if (has_extension(path, ".ppm")) {
        write_ppm(path, image);
    } else {
        write_png(path, image);
    }
}

RgbImage synthetic_image(std::size_t w, std::size_t h, std::uint64_t seed) {
    RgbImage image(w, h);
    std::mt19937_64 rng(seed);
    for (auto& p : image.pixels) p = static_cast<std::uint8_t>(rng() >> 56);
    return image;
}

// ---------------------------------------------------------------- infer

struct InferArgs {
    NetOptions net;
    std::string input;
    std::string output;
    std::string raw;
};

int cmd_infer(const InferArgs& a, std::ostream& out) {
    const graph::Network net = load_network(a.net);
    const RgbImage image = read_image(a.input);
    const graph::DepthMap depth = run_network(net, image);
    write_png_gray16(a.output, quantize_depth(depth));
    if (!a.raw.empty()) write_raw_map_file(a.raw, depth.tensor());
    out << a.output << ',' << depth.width() << ',' << depth.height() << '\n';
    return kExitOk;
}

// ---------------------------------------------------------------- eval

enum class AlignMode { automatic, median, lsq, none };
enum class PredKind { inverse, depth };

struct EvalArgs {
    std::string pred_dir;
    std::string gt_dir;
    AlignMode align = AlignMode::automatic;
    PredKind kind = PredKind::inverse;
    double cap = metrics::kOutdoorCap;
    double gt_scale = 256.0;
};

Tensor load_prediction(const fs::path& path, PredKind kind, double gt_scale) {
    if (has_extension(path, ".ldrf")) return read_raw_map_file(path);
    const Gray16 g = read_png_gray16(path);
    const double divisor = kind == PredKind::inverse ? 65535.0 : gt_scale;
    Tensor t(Dims{1, 1, g.height, g.width});
    for (std::size_t i = 0; i < g.values.size(); ++i) t.data()[i] = static_cast<float>(g.values[i] / divisor);
    return t;
}

fs::path find_prediction(const fs::path& dir, const fs::path& stem) {
    for (const char* ext : {".ldrf", ".png"}) {
        fs::path p = dir / stem;
        p += ext;
        if (fs::exists(p)) return p;
    }
    throw IoError("no prediction for " + stem.string() + " in " + dir.string());
}

// Converts one prediction to metric depth aligned per the chosen mode.
std::vector<float> aligned_depth(const Tensor& pred, const std::vector<float>& gt, const std::vector<std::uint8_t>& valid,
                                 const EvalArgs& a) {
    const double cap = a.cap;
    auto p = pred.data();
    std::vector<float> depth(p.size());
    AlignMode mode = a.align;
    if (mode == AlignMode::automatic) mode = a.kind == PredKind::inverse ? AlignMode::lsq : AlignMode::median;

    const auto inverse_to_depth = [cap](double inv) { return static_cast<float>(inv > 1.0 / cap ? 1.0 / inv : cap); };
    if (mode == AlignMode::lsq) {
        std::vector<float> inv(p.begin(), p.end());
        if (a.kind == PredKind::depth) {
            for (auto& v : inv) v = v > 0.0f ? 1.0f / v : 0.0f;
        }
        const metrics::AffineFit fit = metrics::lsq_align_inverse(inv, gt, valid);
        for (std::size_t i = 0; i < depth.size(); ++i) depth[i] = inverse_to_depth(fit.scale * inv[i] + fit.shift);
        return depth;
    }
    for (std::size_t i = 0; i < depth.size(); ++i) {
        if (a.kind == PredKind::inverse) {
            depth[i] = inverse_to_depth(p[i]);
        } else {
            depth[i] = p[i] > 0.0f ? p[i] : static_cast<float>(cap);
        }
    }
    if (mode == AlignMode::median) return metrics::median_align(depth, gt, valid);
    return depth;
}

int cmd_eval(const EvalArgs& a, std::ostream& out) {
    const fs::path gt_dir(a.gt_dir);
    const fs::path pred_dir(a.pred_dir);
    if (!fs::is_directory(gt_dir)) throw IoError("not a directory: " + gt_dir.string());
    if (!fs::is_directory(pred_dir)) throw IoError("not a directory: " + pred_dir.string());
    if (!(a.gt_scale > 0.0)) throw ConfigError("--gt-scale must be positive");

    std::vector<fs::path> gt_files;
    for (const auto& entry : fs::directory_iterator(gt_dir)) {
        if (entry.is_regular_file() && has_extension(entry.path(), ".png")) gt_files.push_back(entry.path());
    }
    std::sort(gt_files.begin(), gt_files.end());
    if (gt_files.empty()) throw IoError("no ground-truth PNG files in " + gt_dir.string());

    metrics::MetricsReport sum;
    for (const auto& gt_path : gt_files) {
        const Gray16 g = read_png_gray16(gt_path);
        std::vector<float> gt(g.values.size());
        std::vector<std::uint8_t> valid(g.values.size());
        for (std::size_t i = 0; i < gt.size(); ++i) {
            gt[i] = static_cast<float>(g.values[i] / a.gt_scale);
            valid[i] = g.values[i] > 0 ? 1 : 0;
        }
        Tensor pred = load_prediction(find_prediction(pred_dir, gt_path.stem()), a.kind, a.gt_scale);
        if (pred.h() != g.height || pred.w() != g.width) pred = resize_bilinear(pred, g.height, g.width);
        const std::vector<float> depth = aligned_depth(pred, gt, valid, a);
        const metrics::MetricsReport r = metrics::compute_metrics(depth, gt, valid, a.cap);
        sum.abs_rel += r.abs_rel;
        sum.sq_rel += r.sq_rel;
        sum.rmse += r.rmse;
        sum.rmse_log += r.rmse_log;
        sum.a1 += r.a1;
        sum.a2 += r.a2;
        sum.a3 += r.a3;
    }
    const auto n = static_cast<double>(gt_files.size());
    out << "abs_rel,sq_rel,rmse,rmse_log,a1,a2,a3\n";
    out << std::fixed << std::setprecision(6) << sum.abs_rel / n << ',' << sum.sq_rel / n << ',' << sum.rmse / n << ','
        << sum.rmse_log / n << ',' << sum.a1 / n << ',' << sum.a2 / n << ',' << sum.a3 / n << '\n';
    return kExitOk;
}

// ---------------------------------------------------------------- bokeh

struct BokehArgs {
    NetOptions net;
    std::string input;
    std::string output;
    bokeh::BokehOptions options;
};

int cmd_bokeh(BokehArgs a, std::ostream& out) {
    const graph::Network net = load_network(a.net);
    const RgbImage image = read_image(a.input);
    const graph::DepthMap depth = run_network(net, image);
    write_image_by_extension(a.output, bokeh::apply_bokeh(image, depth, a.options));
    out << a.output << '\n';
    return kExitOk;
}

// ---------------------------------------------------------------- align

struct AlignArgs {
    std::string depth;
    std::string anchors;
    align::RansacOptions options;
};

int cmd_align(const AlignArgs& a, std::ostream& out) {
    const graph::DepthMap pred(read_raw_map_file(a.depth));
    const auto anchors = read_anchors_file(a.anchors);
    const align::ScaleModel m = align::ransac_scale(pred, anchors, a.options);
    out << "scale,shift,inliers\n";
    out << std::setprecision(10) << m.scale << ',' << m.shift << ',' << m.inlier_count << '\n';
    return kExitOk;
}

// ---------------------------------------------------------------- bench

struct BenchArgs {
    NetOptions net;
    std::string input;
    std::size_t iterations = 50;
    std::size_t warmup = 5;
    bool include_preprocess = false;
};

int cmd_bench(const BenchArgs& a, std::ostream& out) {
    const graph::Network net = load_network(a.net);
    const RgbImage image = a.input.empty() ? synthetic_image(a.net.width, a.net.height, 0) : read_image(a.input);
    const BenchResult r = bench(net, image, a.iterations, a.warmup, a.include_preprocess);
    out << "width,height,iterations,mean_ms,min_ms,max_ms,fps\n";
    out << a.net.width << ',' << a.net.height << ',' << r.iterations << std::fixed << std::setprecision(3) << ','
        << r.mean_ms << ',' << r.min_ms << ',' << r.max_ms << ',' << r.fps() << '\n';
    return kExitOk;
}

// ---------------------------------------------------------------- macs / random-weights

int cmd_macs(const NetOptions& o, std::ostream& out) {
    const graph::GraphSpec spec = preset_for(o);
    const std::uint64_t macs = graph::count_macs(spec);
    out << "width,height,params,macs,gmacs\n";
    out << o.width << ',' << o.height << ',' << graph::count_params(spec) << ',' << macs << ',' << std::fixed
        << std::setprecision(4) << static_cast<double>(macs) / 1e9 << '\n';
    return kExitOk;
}

struct RandomWeightsArgs {
    NetOptions net;
    std::string output;
    std::uint64_t seed = 0;
};

int cmd_random_weights(const RandomWeightsArgs& a, std::ostream& out) {
    const auto store = graph::random_weights(preset_for(a.net), a.seed);
    const std::size_t bytes = weights::save_file(store, a.output);
    out << a.output << ',' << store.size() << ',' << bytes << '\n';
    return kExitOk;
}

}  // namespace

BenchResult bench(const graph::Network& net, const RgbImage& image, std::size_t iterations, std::size_t warmup,
                  bool include_preprocess) {
    if (iterations == 0) throw ConfigError("bench needs at least one iteration");
    const auto& spec = net.spec();
    const Tensor input = graph::preprocess(image, spec.input_w, spec.input_h);
    const auto once = [&] {
        if (include_preprocess) {
            return graph::infer(net, graph::preprocess(image, spec.input_w, spec.input_h));
        }
        return graph::infer(net, input);
    };
    for (std::size_t i = 0; i < warmup; ++i) once();

    BenchResult r;
    r.iterations = iterations;
    r.min_ms = INFINITY;
    double total = 0.0;
    for (std::size_t i = 0; i < iterations; ++i) {
        const auto t0 = std::chrono::steady_clock::now();
        once();
        const double ms = std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - t0).count();
        total += ms;
        r.min_ms = std::min(r.min_ms, ms);
        r.max_ms = std::max(r.max_ms, ms);
    }
    r.mean_ms = total / static_cast<double>(iterations);
    // Guard the ordering against rounding in the running sum.
    r.mean_ms = std::clamp(r.mean_ms, r.min_ms, r.max_ms);
    return r;
}

int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
    CLI::App app{"depthedge: monocular depth inference, evaluation and tooling"};
    app.require_subcommand(1);
    int threads = 0;
    std::string isa;
    app.add_option("--threads", threads, "Worker threads (0 keeps the default)")->check(CLI::NonNegativeNumber);
    app.add_option("--isa", isa, "Kernel variant: scalar, avx2 or neon");

    InferArgs infer_args;
    auto* infer = app.add_subcommand("infer", "Predict relative inverse depth for one image");
    add_net_options(infer, infer_args.net, true);
    infer->add_option("--input", infer_args.input, "PNG or PPM image")->required();
    infer->add_option("--output", infer_args.output, "16-bit PNG output")->required();
    infer->add_option("--raw", infer_args.raw, "Optional raw float map output");

    EvalArgs eval_args;
    const std::map<std::string, AlignMode> align_modes{
        {"auto", AlignMode::automatic}, {"median", AlignMode::median}, {"lsq", AlignMode::lsq}, {"none", AlignMode::none}};
    const std::map<std::string, PredKind> pred_kinds{{"inverse", PredKind::inverse}, {"depth", PredKind::depth}};
    auto* eval = app.add_subcommand("eval", "Score predictions against ground truth");
    eval->add_option("--pred", eval_args.pred_dir, "Directory of predictions (.ldrf or .png)")->required();
    eval->add_option("--gt", eval_args.gt_dir, "Directory of 16-bit ground-truth PNGs")->required();
    eval->add_option("--align", eval_args.align, "auto, median, lsq or none")
        ->transform(CLI::CheckedTransformer(align_modes, CLI::ignore_case));
    eval->add_option("--pred-kind", eval_args.kind, "inverse or depth")
        ->transform(CLI::CheckedTransformer(pred_kinds, CLI::ignore_case));
    eval->add_option("--cap", eval_args.cap, "Maximum depth")->capture_default_str();
    eval->add_option("--gt-scale", eval_args.gt_scale, "Ground-truth PNG divisor")->capture_default_str();

    BokehArgs bokeh_args;
    auto* bokeh_cmd = app.add_subcommand("bokeh", "Blur pixels nearer than a relative inverse depth threshold");
    add_net_options(bokeh_cmd, bokeh_args.net, true);
    bokeh_cmd->add_option("--input", bokeh_args.input, "PNG or PPM image")->required();
    bokeh_cmd->add_option("--output", bokeh_args.output, "Output image (.png or .ppm)")->required();
    bokeh_cmd->add_option("--tau", bokeh_args.options.tau, "Inverse depth threshold")->capture_default_str();
    bokeh_cmd->add_option("--kernel", bokeh_args.options.kernel_size, "Odd Gaussian kernel size")->capture_default_str();
    bokeh_cmd->add_option("--sigma", bokeh_args.options.sigma, "Gaussian sigma (default kernel / 6)");
    bokeh_cmd->add_flag("--invert-selection", bokeh_args.options.invert_selection, "Blur pixels at or below tau");

    AlignArgs align_args;
    const std::map<std::string, align::FitMode> fit_modes{{"scale", align::FitMode::scale_only},
                                                          {"scale-shift", align::FitMode::scale_shift}};
    auto* align_cmd = app.add_subcommand("align", "Recover metric scale from sparse anchors");
    align_cmd->add_option("--depth", align_args.depth, "Raw float map of relative inverse depth")->required();
    align_cmd->add_option("--anchors", align_args.anchors, "CSV of u,v,z anchors")->required();
    align_cmd->add_option("--mode", align_args.options.mode, "scale or scale-shift")
        ->transform(CLI::CheckedTransformer(fit_modes, CLI::ignore_case));
    align_cmd->add_option("--iters", align_args.options.iterations, "RANSAC iterations")->capture_default_str();
    align_cmd->add_option("--tol", align_args.options.inlier_tol, "Relative inlier tolerance")->capture_default_str();
    align_cmd->add_option("--seed", align_args.options.seed, "Sampler seed")->capture_default_str();

    BenchArgs bench_args;
    auto* bench_cmd = app.add_subcommand("bench", "Time repeated inferences");
    add_net_options(bench_cmd, bench_args.net, true);
    bench_cmd->add_option("--input", bench_args.input, "Image to run on (default: seeded noise)");
    bench_cmd->add_option("--iters", bench_args.iterations, "Timed iterations")->capture_default_str();
    bench_cmd->add_option("--warmup", bench_args.warmup, "Untimed warm-up runs")->capture_default_str();
    bench_cmd->add_flag("--include-preprocess", bench_args.include_preprocess, "Time resizing and scaling too");

    NetOptions macs_args;
    auto* macs = app.add_subcommand("macs", "Count parameters and multiply-accumulates of the preset");
    add_net_options(macs, macs_args, false);

    RandomWeightsArgs rw_args;
    auto* rw = app.add_subcommand("random-weights", "Write a seeded random weight bundle for the preset");
    add_net_options(rw, rw_args.net, false);
    rw->add_option("--out", rw_args.output, "Output bundle")->required();
    rw->add_option("--seed", rw_args.seed, "Seed")->capture_default_str();

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e, out, err);
        return code == 0 ? kExitOk : kExitUsage;
    }

    try {
        if (threads > 0) set_num_threads(threads);
        if (!isa.empty()) {
            const auto parsed = parse_isa(isa);
            if (!parsed) {
                err << "unknown --isa value: " << isa << '\n';
                return kExitUsage;
            }
            set_active_isa(*parsed);
        }
        if (infer->parsed()) return cmd_infer(infer_args, out);
        if (eval->parsed()) return cmd_eval(eval_args, out);
        if (bokeh_cmd->parsed()) return cmd_bokeh(bokeh_args, out);
        if (align_cmd->parsed()) return cmd_align(align_args, out);
        if (bench_cmd->parsed()) return cmd_bench(bench_args, out);
        if (macs->parsed()) return cmd_macs(macs_args, out);
        if (rw->parsed()) return cmd_random_weights(rw_args, out);
    } catch (const std::exception& e) {
        err << "error: " << e.what() << '\n';
        return kExitData;
    }
    return kExitUsage;
}

}  // namespace depthedge::cli
