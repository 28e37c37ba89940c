// Copyright 2026 The Panokit Authors.
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

#include "cli.h"

#include <filesystem>
#include <fstream>
#include <ostream>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "nlohmann/json.hpp"
#include "panokit/bench_eval.h"
#include "panokit/erp_geometry.h"
#include "panokit/erp_rope.h"
#include "panokit/errors.h"
#include "panokit/image.h"
#include "panokit/judge_client.h"
#include "panokit/mask_ops.h"

namespace panokit::cli {
namespace {

namespace fs = std::filesystem;
using nlohmann::json;

struct ProjectOptions {
  std::string in;
  std::string out;
  double center_lat = 0.0;
  double center_lon = 0.0;
  double fov = 90.0;
  int size = 512;
};

struct SliceOptions {
  std::string in;
  std::string out;
  int h = 0;
  int w = 0;
};

struct MergeOptions {
  std::string manifest;
  std::string out;
  double threshold = kDefaultMergeThreshold;
  int jobs = 4;
};

struct RopeGridOptions {
  int h = 0;
  int w = 0;
  std::string mode = "erp";
  std::string out;
};

struct RopeCheckOptions {
  int w = 0;
  std::string out;
};

struct EvalGroundingOptions {
  std::string samples;
  std::string out;
  int jobs = 4;
};

struct EvalCaptionOptions {
  std::string samples;
  std::string out;
  int jobs = 4;
  std::string judge = "mock";
  std::string endpoint;
  std::string model = "gpt-4o";
  std::string auth_env = "JUDGE_API_KEY";
  double timeout = 30.0;
  int max_retries = 2;
  int concurrency = 4;
};

std::string Fixed2(double v) {
  std::ostringstream s;
  s.setf(std::ios::fixed);
  s.precision(2);
  s << v;
  return s.str();
}

void WriteText(const fs::path& path, const std::string& text) {
  if (path.has_parent_path()) fs::create_directories(path.parent_path());
  std::ofstream file(path, std::ios::binary);
  if (!file) throw EnvironmentError("cannot write '" + path.string() + "'");
  file << text;
  if (!file) throw EnvironmentError("cannot write '" + path.string() + "'");
}

void WriteJson(const fs::path& path, const json& value) {
  WriteText(path, value.dump(2) + "\n");
}

// Parsed JSON lines, skipping blank ones. Errors name the file and line.
std::vector<json> ReadJsonLines(const fs::path& path) {
  std::ifstream file(path);
  if (!file) throw EnvironmentError("cannot read '" + path.string() + "'");
  std::vector<json> records;
  std::string line;
  int number = 0;
  while (std::getline(file, line)) {
    ++number;
    if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
    json record = json::parse(line, nullptr, false);
    if (!record.is_object()) {
      throw InputError(path.string() + ":" + std::to_string(number) +
                       ": expected a JSON object");
    }
    records.push_back(std::move(record));
  }
  return records;
}

template <typename T>
T Field(const json& record, const char* key, const fs::path& file) {
  if (!record.contains(key)) {
    throw InputError(file.string() + ": record is missing '" + key + "'");
  }
  try {
    return record.at(key).get<T>();
  } catch (const json::exception&) {
    throw InputError(file.string() + ": field '" + key + "' has the wrong type");
  }
}

fs::path Resolve(const fs::path& base_file, const std::string& path) {
  const fs::path p(path);
  return p.is_absolute() ? p : base_file.parent_path() / p;
}

int RunProject(const ProjectOptions& o, std::ostream& out) {
  const Image erp = ReadPng(o.in);
  const SphericalPoint center = SphericalPoint::Make(o.center_lat, o.center_lon);
  const Image view = ErpToPerspective(erp, center, o.fov, o.size);
  WritePng(o.out, view);
  out << "projected " << erp.rows << "x" << erp.cols << " ERP to a "
      << o.size << "x" << o.size << " view at (" << center.latitude << ", "
      << center.longitude << "), fov " << o.fov << " -> " << o.out << "\n";
  return kExitOk;
}

int RunSlice(const SliceOptions& o, std::ostream& out) {
  std::optional<Image> erp;
  ErpGrid grid;
  if (!o.in.empty()) {
    erp = ReadPng(o.in);
    grid = ErpGrid::Make(erp->rows, erp->cols);
  } else {
    if (o.h <= 0 || o.w <= 0) {
      throw InputError("slice needs --in or both --h and --w");
    }
    grid = ErpGrid::Make(o.h, o.w);
  }
  const auto views = SliceViews(grid);
  const fs::path dir(o.out);
  fs::create_directories(dir);
  json manifest = json::array();
  for (int k = 0; k < kNumSliceViews; ++k) {
    json record = views[k];
    record["index"] = k;
    if (erp) {
      const std::string name = "slice_" + std::to_string(k) + ".png";
      WritePng((dir / name).string(), ExtractSlice(*erp, grid, views[k]));
      record["path"] = name;
    }
    manifest.push_back(std::move(record));
  }
  WriteJson(dir / "views.json", manifest);
  out << "wrote " << kNumSliceViews << " slice views of side " << grid.height
      << " to " << dir.string() << "\n";
  return kExitOk;
}

int RunMergeMasks(const MergeOptions& o, std::ostream& out) {
  const fs::path manifest_path(o.manifest);
  const std::vector<json> records = ReadJsonLines(manifest_path);
  if (records.empty()) throw InputError("mask manifest is empty");

  struct Loaded {
    std::string id;
    Image image;
    std::optional<int> source_view;
  };
  std::vector<Loaded> loaded;
  std::optional<ErpGrid> grid;
  for (const json& r : records) {
    Loaded item;
    item.id = Field<std::string>(r, "id", manifest_path);
    item.image = ReadPng(
        Resolve(manifest_path, Field<std::string>(r, "path", manifest_path))
            .string());
    if (item.image.channels != 1) {
      throw InputError("mask '" + item.id + "' is not grayscale");
    }
    if (r.contains("source_view") && !r.at("source_view").is_null()) {
      const int view = Field<int>(r, "source_view", manifest_path);
      if (view < 0 || view >= kNumSliceViews) {
        throw InputError("mask '" + item.id + "' has source_view " +
                         std::to_string(view) + ", expected 0..3");
      }
      item.source_view = view;
    }
    const ErpGrid implied =
        item.source_view
            ? ErpGrid::Make(item.image.rows, 2 * item.image.rows)
            : ErpGrid::Make(item.image.rows, item.image.cols);
    if (grid && !(*grid == implied)) {
      throw InputError("mask '" + item.id +
                       "' does not match the ERP size of earlier masks");
    }
    grid = implied;
    loaded.push_back(std::move(item));
  }

  const auto views = SliceViews(*grid);
  std::vector<EntityMask> masks;
  for (auto& item : loaded) {
    EntityMask mask =
        item.source_view
            ? ProjectMaskToErp(item.image, views[*item.source_view], *grid,
                               item.id)
            : EntityMask::FromImage(item.image, item.id);
    mask.source_view = item.source_view;
    masks.push_back(std::move(mask));
  }

  const auto groups = MergeGroups(masks, o.threshold, o.jobs);
  const fs::path dir(o.out);
  fs::create_directories(dir);
  std::string manifest;
  for (std::size_t g = 0; g < groups.size(); ++g) {
    EntityMask merged = masks[groups[g].front()];
    json merged_from = json::array();
    for (std::size_t k : groups[g]) {
      merged_from.push_back(masks[k].id);
      for (std::size_t i = 0; i < merged.bits.size(); ++i) {
        merged.bits[i] |= masks[k].bits[i];
      }
    }
    const std::string name = "merged_" + std::to_string(g) + ".png";
    WritePng((dir / name).string(), merged.ToImage());
    json record = {{"id", merged.id}, {"path", name},
                   {"merged_from", merged_from}};
    if (groups[g].size() == 1 && merged.source_view) {
      record["source_view"] = *merged.source_view;
    }
    manifest += record.dump() + "\n";
  }
  WriteText(dir / "manifest.jsonl", manifest);
  out << "merged " << masks.size() << " masks into " << groups.size()
      << " (IoU > " << o.threshold << ") -> " << dir.string() << "\n";
  return kExitOk;
}

int RunRopeGrid(const RopeGridOptions& o, std::ostream& out) {
  const ErpGrid grid = ErpGrid::Make(o.h, o.w);
  PositionGrid positions;
  if (o.mode == "erp") {
    positions = ErpPositionGrid(grid);
  } else if (o.mode == "mrope") {
    positions = MRopePositionGrid(grid);
  } else {
    throw InputError("--mode must be erp or mrope, got '" + o.mode + "'");
  }
  WriteJson(o.out, json(positions));
  out << o.mode << " position grid " << o.h << "x" << o.w << ", gamma "
      << json(positions.gamma).dump() << " -> " << o.out << "\n";
  return kExitOk;
}

int RunRopeCheck(const RopeCheckOptions& o, std::ostream& out) {
  const auto report = CheckProperties(o.w);
  WriteJson(o.out, json(report));
  for (const auto& check : report) {
    out << (check.pass ? "PASS " : "FAIL ") << check.property << " (W=" << o.w
        << "): " << check.details << "\n";
  }
  return kExitOk;
}

void PrintReport(const EvalReport& report, std::ostream& out) {
  out << report.task << ":";
  for (std::size_t i = 0; i < 4; ++i) {
    out << " " << DirectionName(kLateralDirections[i]) << "="
        << (report.per_direction[i] ? Fixed2(ToPercent(*report.per_direction[i]))
                                    : std::string("n/a"));
  }
  out << " omnidirection="
      << (report.omnidirection ? Fixed2(ToPercent(*report.omnidirection))
                               : std::string("n/a"))
      << " scored=" << report.n_scored
      << " errored=" << report.errored_ids.size() << "\n";
}

std::optional<Direction> OptionalDirection(const json& r,
                                           const fs::path& file) {
  if (!r.contains("direction") || r.at("direction").is_null()) {
    return std::nullopt;
  }
  return ParseDirection(Field<std::string>(r, "direction", file));
}

int RunEvalGrounding(const EvalGroundingOptions& o, std::ostream& out) {
  const fs::path samples_path(o.samples);
  std::vector<GroundingSample> samples;
  for (const json& r : ReadJsonLines(samples_path)) {
    GroundingSample s;
    s.id = Field<std::string>(r, "id", samples_path);
    s.predicted_mask = EntityMask::FromImage(
        ReadPng(Resolve(samples_path,
                        Field<std::string>(r, "pred_mask_path", samples_path))
                    .string()),
        s.id + "/pred");
    s.gt_mask = EntityMask::FromImage(
        ReadPng(Resolve(samples_path,
                        Field<std::string>(r, "gt_mask_path", samples_path))
                    .string()),
        s.id + "/gt");
    s.direction = OptionalDirection(r, samples_path);
    samples.push_back(std::move(s));
  }
  const EvalReport report = EvalGrounding(samples, o.jobs);
  WriteJson(o.out, ReportToJson(report));
  PrintReport(report, out);
  return kExitOk;
}

int RunEvalCaption(const EvalCaptionOptions& o, std::ostream& out) {
  JudgeConfig config;
  if (o.judge == "mock") {
    config.mode = JudgeMode::kMock;
  } else if (o.judge == "http") {
    config.mode = JudgeMode::kHttp;
    if (o.endpoint.empty()) throw InputError("--judge http needs --endpoint");
  } else {
    throw InputError("--judge must be mock or http, got '" + o.judge + "'");
  }
  config.endpoint_url = o.endpoint;
  config.model_name = o.model;
  config.auth_token_env = o.auth_env;
  config.timeout_seconds = o.timeout;
  config.max_retries = o.max_retries;
  config.concurrency_limit = o.concurrency;
  const auto judge = MakeJudge(config);

  const fs::path samples_path(o.samples);
  std::vector<CaptionSample> samples;
  for (const json& r : ReadJsonLines(samples_path)) {
    CaptionSample s;
    s.id = Field<std::string>(r, "id", samples_path);
    s.key_phrases =
        Field<std::vector<std::string>>(r, "key_phrases", samples_path);
    s.predicted_caption =
        Field<std::string>(r, "predicted_caption", samples_path);
    s.direction = OptionalDirection(r, samples_path);
    samples.push_back(std::move(s));
  }
  const EvalReport report =
      EvalCaptioning(samples, *judge, o.jobs, config.question_template);
  WriteJson(o.out, ReportToJson(report));
  PrintReport(report, out);
  return kExitOk;
}

}  // namespace

int Run(int argc, const char* const* argv, std::ostream& out,
        std::ostream& err) {
  CLI::App app{"Panoramic ERP geometry, mask merging, ERP-RoPE positions and "
               "benchmark scoring",
               "panokit"};
  app.option_defaults()->always_capture_default();
  app.require_subcommand(1);
  // --h is the height flag, so help is long-form only.
  app.set_help_flag("--help", "Print this help message and exit");

  ProjectOptions project;
  auto* project_cmd =
      app.add_subcommand("project", "Gnomonic view of an ERP image");
  project_cmd->set_help_flag("--help", "Print this help message and exit");
  project_cmd->add_option("--in", project.in, "ERP PNG")
      ->required();
  project_cmd->add_option("--out", project.out, "Output PNG")->required();
  project_cmd->add_option("--center-lat", project.center_lat,
                          "View centre latitude (degrees)");
  project_cmd->add_option("--center-lon", project.center_lon,
                          "View centre longitude (degrees)");
  project_cmd->add_option("--fov", project.fov, "Field of view (degrees)");
  project_cmd->add_option("--size", project.size, "Output side (pixels)");

  SliceOptions slice;
  auto* slice_cmd =
      app.add_subcommand("slice", "Four 50%-stride square views of a 2:1 ERP");
  slice_cmd->set_help_flag("--help", "Print this help message and exit");
  slice_cmd->add_option("--in", slice.in, "ERP PNG (optional)");
  slice_cmd->add_option("--h", slice.h, "ERP height when --in is absent");
  slice_cmd->add_option("--w", slice.w, "ERP width when --in is absent");
  slice_cmd->add_option("--out", slice.out, "Output directory")->required();

  MergeOptions merge;
  auto* merge_cmd = app.add_subcommand(
      "merge-masks", "Reproject slice masks and union-merge by IoU");
  merge_cmd->set_help_flag("--help", "Print this help message and exit");
  merge_cmd->add_option("--manifest", merge.manifest,
                        "JSONL of {id, path, source_view?}")
      ->required();
  merge_cmd->add_option("--threshold", merge.threshold,
                        "Merge when IoU is strictly greater");
  merge_cmd->add_option("--jobs", merge.jobs, "Worker threads");
  merge_cmd->add_option("--out", merge.out, "Output directory")->required();

  RopeGridOptions rope_grid;
  auto* rope_grid_cmd =
      app.add_subcommand("rope-grid", "Encoded token positions as JSON");
  rope_grid_cmd->set_help_flag("--help", "Print this help message and exit");
  rope_grid_cmd->add_option("--h", rope_grid.h, "Token rows")->required();
  rope_grid_cmd->add_option("--w", rope_grid.w, "Token columns")->required();
  rope_grid_cmd->add_option("--mode", rope_grid.mode, "erp or mrope");
  rope_grid_cmd->add_option("--out", rope_grid.out, "Output JSON")->required();

  RopeCheckOptions rope_check;
  auto* rope_check_cmd = app.add_subcommand(
      "rope-check", "Check the circular horizontal index properties");
  rope_check_cmd->set_help_flag("--help", "Print this help message and exit");
  rope_check_cmd->add_option("--w", rope_check.w, "Token columns")->required();
  rope_check_cmd->add_option("--out", rope_check.out, "Output JSON")
      ->required();

  EvalGroundingOptions grounding;
  auto* grounding_cmd =
      app.add_subcommand("eval-grounding", "Mask-IoU grounding report");
  grounding_cmd->set_help_flag("--help", "Print this help message and exit");
  grounding_cmd->add_option("--samples", grounding.samples,
                            "JSONL of {id, pred_mask_path, gt_mask_path}")
      ->required();
  grounding_cmd->add_option("--jobs", grounding.jobs, "Worker threads");
  grounding_cmd->add_option("--out", grounding.out, "Report JSON")->required();

  EvalCaptionOptions caption;
  auto* caption_cmd =
      app.add_subcommand("eval-caption", "Key-phrase recall via a yes/no judge");
  caption_cmd->set_help_flag("--help", "Print this help message and exit");
  caption_cmd->add_option("--samples", caption.samples,
                          "JSONL of {id, key_phrases, predicted_caption}")
      ->required();
  caption_cmd->add_option("--judge", caption.judge, "mock or http");
  caption_cmd->add_option("--endpoint", caption.endpoint,
                          "Chat-completion URL (http judge)");
  caption_cmd->add_option("--model", caption.model, "Judge model name");
  caption_cmd->add_option("--auth-env", caption.auth_env,
                          "Environment variable holding the bearer token");
  caption_cmd->add_option("--timeout", caption.timeout,
                          "Per-request timeout (seconds)");
  caption_cmd->add_option("--max-retries", caption.max_retries,
                          "Retries after transport failures");
  caption_cmd->add_option("--concurrency", caption.concurrency,
                          "Maximum in-flight judge requests");
  caption_cmd->add_option("--jobs", caption.jobs, "Worker threads");
  caption_cmd->add_option("--out", caption.out, "Report JSON")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::Success& e) {
    return app.exit(e, out, err);
  } catch (const CLI::ParseError& e) {
    app.exit(e, out, err);
    return kExitInputError;
  }

  try {
    if (*project_cmd) return RunProject(project, out);
    if (*slice_cmd) return RunSlice(slice, out);
    if (*merge_cmd) return RunMergeMasks(merge, out);
    if (*rope_grid_cmd) return RunRopeGrid(rope_grid, out);
    if (*rope_check_cmd) return RunRopeCheck(rope_check, out);
    if (*grounding_cmd) return RunEvalGrounding(grounding, out);
    if (*caption_cmd) return RunEvalCaption(caption, out);
  } catch (const InputError& e) {
    err << "error: " << e.what() << "\n";
    return kExitInputError;
  } catch (const EnvironmentError& e) {
    err << "error: " << e.what() << "\n";
    return kExitEnvironmentError;
  } catch (const nlohmann::json::exception& e) {
    err << "error: malformed JSON input: " << e.what() << "\n";
    return kExitInputError;
  } catch (const fs::filesystem_error& e) {
    err << "error: " << e.what() << "\n";
    return kExitEnvironmentError;
  }
  return kExitInputError;
}

}  // namespace panokit::cli
