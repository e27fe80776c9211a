// Copyright 2026 The irstd Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

// irstd command line: synth, detect, eval, sweep.

#include <algorithm>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <map>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "irstd/error.hpp"
#include "irstd/io.hpp"
#include "irstd/pipeline.hpp"
#include "irstd/simd/kernels.hpp"
#include "irstd/synth.hpp"

namespace fs = std::filesystem;
using namespace irstd;

namespace {

struct CommonOpts {
  std::string backend = "mlcm";
  std::string reducer = "mean";
  std::string th2 = "0.15";
  std::string simd = "auto";
  bool no_tta = false;
  bool no_crf = false;
  std::vector<int> lcm_cells{3, 5, 7, 9};
  int crf_radius = 0;
  PipelineConfig cfg;
  DetectorParams det;
};

void add_pipeline_flags(CLI::App* app, CommonOpts& o, bool thresholds) {
  auto& c = o.cfg;
  app->add_option("--backend", o.backend, "tophat, maxmed, mlcm or fmap:DIR")->capture_default_str();
  app->add_option("--win", c.win, "tile window")->capture_default_str();
  app->add_option("--batch", c.batch, "patches per backend call")->capture_default_str();
  app->add_flag("--no-tta", o.no_tta, "identity pass only");
  app->add_option("--reducer", o.reducer, "TTA fusion: mean, max, median")->capture_default_str();
  app->add_flag("--no-crf", o.no_crf, "skip CRF refinement");
  app->add_option("--crf-w-smooth", c.crf.w_smooth)->capture_default_str();
  app->add_option("--crf-theta-gamma", c.crf.theta_gamma)->capture_default_str();
  app->add_option("--crf-w-app", c.crf.w_app)->capture_default_str();
  app->add_option("--crf-theta-alpha", c.crf.theta_alpha)->capture_default_str();
  app->add_option("--crf-theta-beta", c.crf.theta_beta)->capture_default_str();
  app->add_option("--crf-iters", c.crf.iters)->capture_default_str();
  app->add_option("--crf-radius", o.crf_radius, "0 = derived from bandwidths")->capture_default_str();
  app->add_option("--crf-eps", c.crf.clamp_eps)->capture_default_str();
  if (thresholds) {
    app->add_option("--th1", c.as_params.th1, "strong threshold on the refined map")->capture_default_str();
    app->add_option("--th2", o.th2, "weak threshold on the raw map, '-' for none")->capture_default_str();
  }
  app->add_option("--min-weak-area", c.as_params.min_weak_area)->capture_default_str();
  app->add_option("--tophat-size", o.det.tophat_size)->capture_default_str();
  app->add_option("--maxmed-len", o.det.maxmed_len)->capture_default_str();
  app->add_option("--lcm-cells", o.lcm_cells, "MLCM cell sizes")->delimiter(',')->capture_default_str();
  app->add_option("--threads", c.threads, "images processed concurrently")->capture_default_str();
  app->add_option("--simd", o.simd, "auto, scalar or avx2")->capture_default_str();
}

void finish(CommonOpts& o) {
  o.cfg.tta_enabled = !o.no_tta;
  o.cfg.crf_enabled = !o.no_crf;
  o.cfg.reducer = parse_reducer(o.reducer);
  if (o.crf_radius > 0) o.cfg.crf.radius = o.crf_radius;
  if (o.crf_radius < 0) throw ParameterError("--crf-radius must be >= 0");
  const auto th2 = parse_optional_threshold_list(o.th2);
  if (th2.size() != 1) throw ParameterError("--th2 takes a single value");
  o.cfg.as_params.th2 = th2[0];
  o.det.lcm_cell_sizes = o.lcm_cells;
  o.det.validate();
  if (o.simd != "auto") simd::set_active_isa(simd::parse_isa(o.simd));
  o.cfg.validate();
}

// Sorted "<stem> -> path" for the regular files with the given extension.
std::map<std::string, fs::path> list_files(const fs::path& dir, const std::string& ext) {
  if (!fs::is_directory(dir)) throw IoError("not a directory: " + dir.string());
  std::map<std::string, fs::path> out;
  for (const auto& e : fs::directory_iterator(dir)) {
    if (e.is_regular_file() && e.path().extension() == ext) out.emplace(e.path().stem().string(), e.path());
  }
  return out;
}

std::vector<EvalSample> load_samples(const fs::path& images, const fs::path& masks) {
  std::vector<EvalSample> out;
  const auto gts = list_files(masks, ".pgm");
  for (const auto& [id, path] : list_files(images, ".pgm")) {
    const auto it = gts.find(id);
    if (it == gts.end()) throw IoError("no ground-truth mask for " + id);
    out.push_back({id, load_pgm(path), load_pgm_mask(it->second)});
  }
  if (out.empty()) throw IoError("no .pgm images in " + images.string());
  return out;
}

int cmd_synth(const fs::path& out, const DatasetConfig& dc) {
  for (const char* sub : {"images", "masks", "points"}) fs::create_directories(out / sub);
  for (const auto& item : gen_dataset(dc)) {
    save_pgm(item.scene.image, out / "images" / (item.id + ".pgm"));
    save_pgm(item.scene.mask, out / "masks" / (item.id + ".pgm"));
    save_points(item.scene.points, out / "points" / (item.id + ".csv"));
  }
  std::printf("wrote %d scenes to %s\n", dc.count, out.string().c_str());
  return 0;
}

int cmd_detect(const fs::path& in, const fs::path& out, CommonOpts& o) {
  finish(o);
  const auto backend = make_backend(o.backend, o.det);
  const auto files = list_files(in, ".pgm");
  if (files.empty()) throw IoError("no .pgm images in " + in.string());
  fs::create_directories(out / "raw");
  fs::create_directories(out / "refined");
  std::vector<std::pair<std::string, fs::path>> jobs(files.begin(), files.end());
  parallel_for(static_cast<int>(jobs.size()), o.cfg.threads, [&](int i) {
    const auto& [id, path] = jobs[static_cast<std::size_t>(i)];
    const InferenceResult r = run_inference(load_pgm(path), *backend, o.cfg, id);
    save_pgm(r.final_mask, out / (id + ".pgm"));
    save_fmap(r.raw_fused, out / "raw" / (id + ".fmap"));
    save_fmap(r.refined, out / "refined" / (id + ".fmap"));
  });
  std::printf("%zu images, backend %s, simd %s\n", jobs.size(), backend->name().c_str(),
              simd::isa_name(simd::active_isa()).c_str());
  return 0;
}

int cmd_eval(const fs::path& pred, const fs::path& gt, const MatchParams& match, const std::string& json_path) {
  match.validate();
  const auto preds = list_files(pred, ".pgm");
  std::vector<ImageMetrics> per;
  for (const auto& [id, gpath] : list_files(gt, ".pgm")) {
    const auto it = preds.find(id);
    if (it == preds.end()) throw MissingPredictionError("no prediction for " + id);
    per.push_back(evaluate_image(load_pgm_mask(it->second), load_pgm_mask(gpath), match));
  }
  if (per.empty()) throw IoError("no ground-truth masks in " + gt.string());
  const EvalReport r = summarize(per);
  std::fputs(format_report(r).c_str(), stdout);
  if (!json_path.empty()) {
    std::ofstream f(json_path);
    if (!f) throw IoError("cannot write " + json_path);
    f << report_json(r) << "\n";
  }
  return 0;
}

int cmd_sweep(const fs::path& in, const fs::path& gt, const std::string& th1, const std::string& th2, CommonOpts& o,
              const MatchParams& match) {
  finish(o);
  const auto backend = make_backend(o.backend, o.det);
  const auto samples = load_samples(in, gt);
  const auto rows = sweep(samples, *backend, parse_threshold_list(th1), parse_optional_threshold_list(th2), o.cfg, match);
  std::fputs(format_sweep_table(rows).c_str(), stdout);
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Infrared small target detection pipeline"};
  app.require_subcommand(1);

  DatasetConfig dc;
  std::string synth_out;
  auto* synth = app.add_subcommand("synth", "generate a seeded synthetic dataset");
  synth->add_option("--out", synth_out)->required();
  synth->add_option("--n", dc.count)->capture_default_str();
  synth->add_option("--seed", dc.seed)->capture_default_str();
  synth->add_option("--width", dc.scene.width)->capture_default_str();
  synth->add_option("--height", dc.scene.height)->capture_default_str();
  synth->add_option("--min-targets", dc.min_targets)->capture_default_str();
  synth->add_option("--max-targets", dc.max_targets)->capture_default_str();
  synth->add_option("--amp-lo", dc.scene.amplitude_range.lo)->capture_default_str();
  synth->add_option("--amp-hi", dc.scene.amplitude_range.hi)->capture_default_str();
  synth->add_option("--sigma-lo", dc.scene.sigma_range.lo)->capture_default_str();
  synth->add_option("--sigma-hi", dc.scene.sigma_range.hi)->capture_default_str();
  synth->add_option("--noise", dc.scene.noise_sigma)->capture_default_str();
  synth->add_option("--bg-gain", dc.scene.background_gain)->capture_default_str();
  synth->add_option("--bg-scale", dc.scene.background_scale)->capture_default_str();
  synth->add_option("--bg-offset", dc.scene.background_offset)->capture_default_str();

  CommonOpts det_opts;
  std::string det_in, det_out;
  auto* detect = app.add_subcommand("detect", "run the pipeline over a directory of PGM images");
  detect->add_option("--in", det_in)->required();
  detect->add_option("--out", det_out)->required();
  add_pipeline_flags(detect, det_opts, true);

  MatchParams match;
  std::string eval_pred, eval_gt, eval_json;
  auto* eval = app.add_subcommand("eval", "score predicted masks against ground truth");
  eval->add_option("--pred", eval_pred)->required();
  eval->add_option("--gt", eval_gt)->required();
  eval->add_option("--match-dist", match.match_dist)->capture_default_str();
  eval->add_option("--json", eval_json, "also write the report as JSON");

  CommonOpts sw_opts;
  std::string sw_in, sw_gt, sw_th1 = "0.5,0.1,0.05,0.01", sw_th2 = "0.15";
  auto* sw = app.add_subcommand("sweep", "threshold sweep table over a labelled dataset");
  sw->add_option("--in", sw_in, "images directory")->required();
  sw->add_option("--gt", sw_gt, "masks directory")->required();
  sw->add_option("--th1", sw_th1, "comma-separated strong thresholds")->capture_default_str();
  sw->add_option("--th2", sw_th2, "comma-separated weak thresholds, '-' for none")->capture_default_str();
  sw->add_option("--match-dist", match.match_dist)->capture_default_str();
  add_pipeline_flags(sw, sw_opts, false);

  CLI11_PARSE(app, argc, argv);

  try {
    if (*synth) return cmd_synth(synth_out, dc);
    if (*detect) return cmd_detect(det_in, det_out, det_opts);
    if (*eval) return cmd_eval(eval_pred, eval_gt, match, eval_json);
    if (*sw) return cmd_sweep(sw_in, sw_gt, sw_th1, sw_th2, sw_opts, match);
  } catch (const StageError& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return 2;
  } catch (const std::exception& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return 1;
  }
  return 1;
}
