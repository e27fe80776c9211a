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

#include "irstd/pipeline.hpp"

#include <algorithm>
#include <atomic>
#include <charconv>
#include <cstdio>
#include <exception>
#include <thread>

namespace irstd {

namespace {

template <class F>
auto stage(const char* name, F&& f) -> decltype(f()) {
  try {
    return f();
  } catch (const StageError&) {
    throw;
  } catch (const std::exception& e) {
    throw StageError(name, e.what());
  }
}

// Backend output for one (already flipped) variant, cropped to the
// variant's own frame.
ProbMap infer_variant(const GrayImage& variant_img, TtaKind kind, const ModelBackend& backend,
                      const PipelineConfig& cfg, const std::string& image_id) {
  const TilePlan plan = stage("tiling", [&] { return plan_tiles(variant_img.width(), variant_img.height(), cfg.win); });
  const std::vector<GrayImage> tiles =
      stage("tiling", [&] { return extract_tiles(pad_black(variant_img, plan), plan); });

  std::vector<PatchKey> keys(tiles.size());
  for (std::size_t t = 0; t < tiles.size(); ++t) {
    keys[t] = {image_id, kind, static_cast<int>(t), plan.tiles[t].x0, plan.tiles[t].y0, variant_img.width(),
               variant_img.height()};
  }

  std::vector<ProbMap> outputs;
  outputs.reserve(tiles.size());
  stage("inference", [&] {
    const std::size_t chunk = static_cast<std::size_t>(cfg.batch);
    for (std::size_t b = 0; b < tiles.size(); b += chunk) {
      const std::size_t n = std::min(chunk, tiles.size() - b);
      auto part = checked_infer(backend, std::span<const GrayImage>(tiles).subspan(b, n),
                                std::span<const PatchKey>(keys).subspan(b, n));
      for (auto& m : part) outputs.push_back(std::move(m));
    }
    return 0;
  });
  return stage("stitch", [&] { return crop_valid(stitch(outputs, plan), plan); });
}

std::optional<float> parse_one(std::string_view tok, bool allow_none) {
  while (!tok.empty() && tok.front() == ' ') tok.remove_prefix(1);
  while (!tok.empty() && tok.back() == ' ') tok.remove_suffix(1);
  if (allow_none && tok == "-") return std::nullopt;
  float v = 0.0f;
  const auto [ptr, ec] = std::from_chars(tok.data(), tok.data() + tok.size(), v);
  if (ec != std::errc{} || ptr != tok.data() + tok.size()) {
    throw ParseError("bad threshold '" + std::string(tok) + "'");
  }
  if (!(v > 0.0f && v <= 1.0f)) throw ParameterError("threshold out of (0, 1]: " + std::string(tok));
  return v;
}

std::vector<std::optional<float>> split_thresholds(const std::string& text, bool allow_none) {
  std::vector<std::optional<float>> out;
  std::string_view rest(text);
  while (true) {
    const auto comma = rest.find(',');
    out.push_back(parse_one(rest.substr(0, comma), allow_none));
    if (comma == std::string_view::npos) break;
    rest.remove_prefix(comma + 1);
  }
  return out;
}

}  // namespace

void PipelineConfig::validate() const {
  if (win < 1) throw ParameterError("win must be >= 1");
  if (batch < 1) throw ParameterError("batch must be >= 1");
  if (threads < 1) throw ParameterError("threads must be >= 1");
  crf.validate();
  as_params.validate();
}

ProbMap infer_raw(const GrayImage& img, const ModelBackend& backend, const PipelineConfig& cfg,
                  const std::string& image_id) {
  cfg.validate();
  std::vector<std::pair<TtaKind, ProbMap>> maps;
  if (cfg.tta_enabled) {
    for (const auto& [kind, variant] : tta_variants(img)) {
      maps.emplace_back(kind, infer_variant(variant, kind, backend, cfg, image_id));
    }
  } else {
    maps.emplace_back(TtaKind::identity, infer_variant(img, TtaKind::identity, backend, cfg, image_id));
  }
  return stage("fusion", [&] { return tta_fuse(maps, cfg.reducer); });
}

InferenceResult run_inference(const GrayImage& img, const ModelBackend& backend, const PipelineConfig& cfg,
                              const std::string& image_id) {
  InferenceResult r{infer_raw(img, backend, cfg, image_id), {}, {}};
  r.refined = cfg.crf_enabled ? stage("crf", [&] { return crf_refine(r.raw_fused, img, cfg.crf); }) : r.raw_fused;
  r.final_mask = stage("as", [&] { return apply_as(r.refined, r.raw_fused, cfg.as_params); });
  return r;
}

void parallel_for(int n, int threads, const std::function<void(int)>& fn) {
  if (n <= 0) return;
  const int workers = std::clamp(threads, 1, n);
  std::vector<std::exception_ptr> errors(static_cast<std::size_t>(n));
  if (workers == 1) {
    for (int i = 0; i < n; ++i) {
      try {
        fn(i);
      } catch (...) {
        errors[static_cast<std::size_t>(i)] = std::current_exception();
        break;
      }
    }
  } else {
    std::atomic<int> next{0};
    std::vector<std::thread> pool;
    for (int t = 0; t < workers; ++t) {
      pool.emplace_back([&] {
        for (int i = next++; i < n; i = next++) {
          try {
            fn(i);
          } catch (...) {
            errors[static_cast<std::size_t>(i)] = std::current_exception();
          }
        }
      });
    }
    for (auto& th : pool) th.join();
  }
  for (auto& e : errors) {
    if (e) std::rethrow_exception(e);
  }
}

std::vector<CachedMaps> compute_maps(const std::vector<EvalSample>& samples, const ModelBackend& backend,
                                     const PipelineConfig& cfg) {
  cfg.validate();
  std::vector<CachedMaps> out(samples.size());
  parallel_for(static_cast<int>(samples.size()), cfg.threads, [&](int i) {
    const EvalSample& s = samples[static_cast<std::size_t>(i)];
    ProbMap raw = infer_raw(s.image, backend, cfg, s.id);
    ProbMap refined = cfg.crf_enabled ? stage("crf", [&] { return crf_refine(raw, s.image, cfg.crf); }) : raw;
    out[static_cast<std::size_t>(i)] = {std::move(raw), std::move(refined)};
  });
  return out;
}

std::vector<SweepRow> sweep(const std::vector<EvalSample>& samples, const std::vector<CachedMaps>& maps,
                            const std::vector<float>& th1_list, const std::vector<std::optional<float>>& th2_list,
                            const PipelineConfig& cfg, const MatchParams& match) {
  if (samples.empty()) throw ParameterError("sweep: empty dataset");
  if (th1_list.empty() || th2_list.empty()) throw ParameterError("sweep: empty threshold list");
  if (maps.size() != samples.size()) throw DimensionError("sweep: one cached map pair per sample expected");

  std::vector<SweepRow> rows;
  for (float th1 : th1_list) {
    for (const auto& th2 : th2_list) {
      AsParams as = cfg.as_params;
      as.th1 = th1;
      as.th2 = th2;
      as.validate();
      std::vector<ImageMetrics> per(samples.size());
      parallel_for(static_cast<int>(samples.size()), cfg.threads, [&](int i) {
        const auto& m = maps[static_cast<std::size_t>(i)];
        const BinaryMask pred = apply_as(m.refined, m.raw_fused, as);
        per[static_cast<std::size_t>(i)] = evaluate_image(pred, samples[static_cast<std::size_t>(i)].truth, match);
      });
      rows.push_back({th1, th2, summarize(per)});
    }
  }
  return rows;
}

std::vector<SweepRow> sweep(const std::vector<EvalSample>& samples, const ModelBackend& backend,
                            const std::vector<float>& th1_list, const std::vector<std::optional<float>>& th2_list,
                            const PipelineConfig& cfg, const MatchParams& match) {
  return sweep(samples, compute_maps(samples, backend, cfg), th1_list, th2_list, cfg, match);
}

DatasetRun evaluate_dataset(const std::vector<EvalSample>& samples, const ModelBackend& backend,
                            const PipelineConfig& cfg, const MatchParams& match) {
  cfg.validate();
  if (samples.empty()) throw ParameterError("evaluate_dataset: empty dataset");
  DatasetRun run;
  run.results.resize(samples.size());
  std::vector<ImageMetrics> per(samples.size());
  parallel_for(static_cast<int>(samples.size()), cfg.threads, [&](int i) {
    const EvalSample& s = samples[static_cast<std::size_t>(i)];
    auto& r = run.results[static_cast<std::size_t>(i)];
    r = run_inference(s.image, backend, cfg, s.id);
    per[static_cast<std::size_t>(i)] = stage("metrics", [&] { return evaluate_image(r.final_mask, s.truth, match); });
  });
  run.report = summarize(per);
  return run;
}

std::string format_sweep_table(const std::vector<SweepRow>& rows) {
  std::string out;
  char buf[160];
  std::snprintf(buf, sizeof buf, "%8s %8s %9s %9s %9s %12s %9s %6s\n", "th1", "th2", "IoU", "nIoU", "Pd",
                "Fa(x1e-6)", "Score", "valid");
  out += buf;
  for (const auto& r : rows) {
    char th2[32];
    if (r.th2) {
      std::snprintf(th2, sizeof th2, "%.4g", double{*r.th2});
    } else {
      std::snprintf(th2, sizeof th2, "-");
    }
    std::snprintf(buf, sizeof buf, "%8.4g %8s %9.2f %9.2f %9.2f %12.2f %9.2f %6s\n", double{r.th1}, th2,
                  r.report.iou, r.report.niou, r.report.pd, r.report.fa_e6(), r.report.score,
                  r.report.valid ? "yes" : "no");
    out += buf;
  }
  return out;
}

std::vector<float> parse_threshold_list(const std::string& text) {
  std::vector<float> out;
  for (const auto& v : split_thresholds(text, false)) out.push_back(*v);
  return out;
}

std::vector<std::optional<float>> parse_optional_threshold_list(const std::string& text) {
  return split_thresholds(text, true);
}

}  // namespace irstd
