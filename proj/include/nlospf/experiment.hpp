#pragma once
#include <array>
#include <optional>
#include <string>
#include <vector>

#include "nlospf/mirrors.hpp"
#include "nlospf/render.hpp"
#include "nlospf/scene_io.hpp"
#include "nlospf/wavesim.hpp"

namespace nlos {

/// Wavesim experiment controls (Fig.-2-style sweeps).
struct WavesimParams {
  double lambda = 0.03;           // meters
  std::vector<double> tilts{0.0}; // degrees
  double surface_side = 0.15;
  double source_angle = -30.0;    // degrees from the surface normal axis
  double source_distance = 1.0;
  double arc_radius = 2.0;
  double arc_from = -40.0;
  double arc_to = 60.0;
  double arc_step = 1.0;
  std::size_t n_samples = 20000;
  std::string grid;               // optional scene grid for a 2D field image
};

/// Optional ground truth used only for reports.
struct TruthParams {
  std::optional<Point3> plane_center;
  std::optional<Vec3> plane_normal;
  std::string footprint_surface;  // scene surface whose footprint is scored
  std::vector<std::array<double, 4>> mask_rects;     // fractional grid coords
  std::vector<std::array<double, 4>> control_rects;  // fractional grid coords
  double mask_threshold = 0.35;
  double footprint_tol = 0.05;    // meters
};

struct ExperimentConfig {
  std::string name;
  std::string pipeline;
  std::string config_path;  // where this config was loaded from
  std::string scene_path;   // resolved
  SceneFile scene;

  RenderParams render;
  std::string h_file;  // optional external NLOSH1 dataset to ingest

  IlluminationPulse pulse{0.03, 0.03};
  double time = 0.0;
  std::vector<std::string> image_grids;
  std::string volume_grid;
  std::string target_grid;
  double threshold = 0.2;
  double suppression_radius = 0.0;  // 0 -> lambda_c
  double match_radius = 0.0;        // 0 -> lambda_c / 2
  bool log_png = false;

  std::string mirror_surface;  // two-corner: surface acting as the mirror
  std::string source_grid;     // two-corner: suspected region, reflected across it

  WavesimParams wavesim;
  TruthParams truth;

  std::uint64_t seed = 0;
  unsigned threads = 0;  // 0 = auto
  std::string output;    // subdirectory name (under --out or NLOSPF_OUT)
};

struct Overrides {
  std::optional<std::uint64_t> seed;
  std::optional<unsigned> threads;
  std::optional<std::string> out_dir;
  std::optional<std::string> scene;
  std::optional<double> lambda_c;
  std::optional<double> sigma;
  std::optional<double> dt;
  std::optional<std::size_t> paths;
};

ExperimentConfig load_experiment(const std::string& path, const Overrides& ov = {});

/// Directory that holds scenes/ and experiments/ (NLOSPF_CONFIG_DIR env
/// overrides the compiled-in default).
std::string config_dir();
std::vector<std::string> list_presets();
std::string preset_path(const std::string& name);

/// Executes the configured pipeline, writing all artifacts plus manifest.json
/// under out_dir. Returns the human-readable report that was also written.
std::string run_experiment(const ExperimentConfig& cfg, const std::string& out_dir);

/// Dry-run checks; never writes artifacts. Returns one line per issue
/// (empty = clean).
std::vector<std::string> validate_experiment(const ExperimentConfig& cfg);

void set_tool_version(const std::string& v);
const std::string& tool_version();

}  // namespace nlos
