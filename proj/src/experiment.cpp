#include "nlospf/experiment.hpp"

#include <json.hpp>

#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "nlospf/analysis.hpp"
#include "nlospf/image_io.hpp"
#include "nlospf/parallel.hpp"

namespace fs = std::filesystem;
using nlohmann::json;

namespace nlos {

namespace {
std::string g_version = "unknown";
}

void set_tool_version(const std::string& v) { g_version = v; }
const std::string& tool_version() { return g_version; }

std::string config_dir() {
  if (const char* env = std::getenv("NLOSPF_CONFIG_DIR")) return env;
#ifdef NLOSPF_CONFIG_DIR
  return NLOSPF_CONFIG_DIR;
#else
  return "configs";
#endif
}

std::vector<std::string> list_presets() {
  std::vector<std::string> out;
  const fs::path dir = fs::path(config_dir()) / "experiments";
  if (!fs::is_directory(dir)) return out;
  for (const auto& e : fs::directory_iterator(dir))
    if (e.path().extension() == ".toml") out.push_back(e.path().stem().string());
  std::sort(out.begin(), out.end());
  return out;
}

std::string preset_path(const std::string& name) {
  const fs::path p = fs::path(config_dir()) / "experiments" / (name + ".toml");
  if (!fs::exists(p)) {
    std::string known;
    for (const auto& n : list_presets()) known += "\n  " + n;
    throw ConfigError("unknown preset '" + name + "'; available presets:" + known);
  }
  return p.string();
}

namespace {

std::array<double, 4> to_rect(const std::vector<double>& v) {
  if (v.size() != 4) throw ConfigError("mask rectangles need four numbers");
  return {v[0], v[1], v[2], v[3]};
}

Vec3 to_vec(const std::vector<double>& t) { return {t[0], t[1], t[2]}; }

}  // namespace

ExperimentConfig load_experiment(const std::string& path, const Overrides& ov) {
  const ConfigDoc doc = load_config(path);
  ExperimentConfig cfg;
  cfg.config_path = fs::absolute(path).string();
  cfg.name = fs::path(path).stem().string();

  const ConfigTable& ex = doc.table("experiment");
  cfg.pipeline = get_string(ex, "pipeline");
  cfg.seed = std::uint64_t(get_number_or(ex, "seed", 0));
  cfg.threads = unsigned(get_number_or(ex, "threads", 0));
  cfg.output = get_string_or(ex, "output", cfg.name);

  std::string scene_rel = get_string(ex, "scene");
  if (ov.scene) scene_rel = *ov.scene;
  fs::path scene_path(scene_rel);
  if (scene_path.is_relative()) scene_path = fs::path(path).parent_path() / scene_path;
  cfg.scene_path = scene_path.lexically_normal().string();
  cfg.scene = load_scene_file(cfg.scene_path);

  if (doc.has("render")) {
    const ConfigTable& r = doc.table("render");
    cfg.render.n_paths = std::size_t(get_number_or(r, "paths", 1e6));
    cfg.render.dt = get_number_or(r, "dt", 1e-11);
    cfg.render.n_bins = std::size_t(get_number_or(r, "n_bins", 2048));
    cfg.render.min_bounces = int(get_number_or(r, "min_bounces", 3));
    cfg.render.max_bounces =
        int(get_number_or(r, "max_bounces", cfg.scene.scene.max_bounces));
    cfg.render.sensor_fwhm = get_number_or(r, "sensor_fwhm", 0.0);
    cfg.render.fail_on_late = get_bool_or(r, "fail_on_late", false);
    cfg.h_file = get_string_or(r, "h_file", "");
    if (!cfg.h_file.empty()) {
      fs::path hp(cfg.h_file);
      if (hp.is_relative()) hp = fs::path(path).parent_path() / hp;
      cfg.h_file = hp.lexically_normal().string();
    }
  }
  cfg.render.seed = cfg.seed;

  if (doc.has("pulse")) {
    const ConfigTable& p = doc.table("pulse");
    cfg.pulse.lambda_c = get_number_or(p, "lambda_c", 0.03);
    cfg.pulse.sigma = get_number_or(p, "sigma", 0.03);
  }

  if (doc.has("imaging")) {
    const ConfigTable& im = doc.table("imaging");
    cfg.time = get_number_or(im, "time", 0.0);
    cfg.image_grids = get_string_list_or(im, "grids");
    cfg.volume_grid = get_string_or(im, "volume_grid", "");
    cfg.target_grid = get_string_or(im, "target_grid", "");
    cfg.threshold = get_number_or(im, "threshold", 0.2);
    cfg.suppression_radius = get_number_or(im, "suppression_radius", 0.0);
    cfg.match_radius = get_number_or(im, "match_radius", 0.0);
    cfg.log_png = get_bool_or(im, "log_png", false);
  }

  if (doc.has("two_corner")) {
    const ConfigTable& tc = doc.table("two_corner");
    cfg.mirror_surface = get_string_or(tc, "mirror_surface", "");
    cfg.source_grid = get_string_or(tc, "source_grid", "");
  }

  if (doc.has("wavesim")) {
    const ConfigTable& w = doc.table("wavesim");
    WavesimParams& ws = cfg.wavesim;
    ws.lambda = get_number_or(w, "lambda", ws.lambda);
    if (w.count("tilts")) {
      const auto it = w.find("tilts");
      if (it->second.kind != ConfigValue::Kind::NumberList)
        throw ConfigError("wavesim tilts must be a number list");
      ws.tilts = it->second.num_list;
    }
    ws.surface_side = get_number_or(w, "surface_side", ws.surface_side);
    ws.source_angle = get_number_or(w, "source_angle", ws.source_angle);
    ws.source_distance = get_number_or(w, "source_distance", ws.source_distance);
    ws.arc_radius = get_number_or(w, "arc_radius", ws.arc_radius);
    ws.arc_from = get_number_or(w, "arc_from", ws.arc_from);
    ws.arc_to = get_number_or(w, "arc_to", ws.arc_to);
    ws.arc_step = get_number_or(w, "arc_step", ws.arc_step);
    ws.n_samples = std::size_t(get_number_or(w, "n_samples", double(ws.n_samples)));
    ws.grid = get_string_or(w, "grid", "");
  }

  if (doc.has("truth")) {
    const ConfigTable& t = doc.table("truth");
    if (t.count("plane_center")) cfg.truth.plane_center = to_vec(get_triplet(t, "plane_center"));
    if (t.count("plane_normal")) cfg.truth.plane_normal = to_vec(get_triplet(t, "plane_normal"));
    cfg.truth.footprint_surface = get_string_or(t, "footprint_surface", "");
    for (const auto& r : get_rect_list_or(t, "mask_rects"))
      cfg.truth.mask_rects.push_back(to_rect(r));
    for (const auto& r : get_rect_list_or(t, "control_rects"))
      cfg.truth.control_rects.push_back(to_rect(r));
    cfg.truth.mask_threshold = get_number_or(t, "mask_threshold", 0.35);
    cfg.truth.footprint_tol = get_number_or(t, "footprint_tol", 0.05);
  }

  if (ov.seed) {
    cfg.seed = *ov.seed;
    cfg.render.seed = *ov.seed;
  }
  if (ov.threads) cfg.threads = *ov.threads;
  if (ov.lambda_c) cfg.pulse.lambda_c = *ov.lambda_c;
  if (ov.sigma) cfg.pulse.sigma = *ov.sigma;
  if (ov.dt) cfg.render.dt = *ov.dt;
  if (ov.paths) cfg.render.n_paths = *ov.paths;
  return cfg;
}

namespace {

struct RunContext {
  const ExperimentConfig& cfg;
  fs::path out;
  std::vector<std::string> artifacts;
  std::ostringstream report;

  std::string file(const std::string& name) {
    artifacts.push_back(name);
    return (out / name).string();
  }
};

ImpulseResponse obtain_h(RunContext& ctx) {
  const ExperimentConfig& cfg = ctx.cfg;
  if (!cfg.h_file.empty()) {
    ctx.report << "H: ingested " << cfg.h_file << "\n";
    ImpulseResponse h = load_impulse_response(cfg.h_file);
    h.validate();
    return h;
  }
  RenderStats stats;
  ImpulseResponse h = render_impulse_response(cfg.scene.scene, cfg.render, &stats);
  save_impulse_response(h, ctx.file("h.nlosh"));
  ctx.report << "H: rendered " << cfg.render.n_paths << " paths, seed " << cfg.seed
             << ", energy " << h.total_energy() << "\n";
  if (stats.clamped_splats > 0)
    ctx.report << "H: " << stats.clamped_splats << " late splats clamped (energy "
               << stats.clamped_energy << ")\n";
  return h;
}

TimeSlice emit_images(RunContext& ctx, const std::string& stem,
                      const FocalStackImage& img, double t) {
  const TimeSlice slice = evaluate_at_time(img, t);
  if (img.grid.n_w == 1) {
    write_slice_png(ctx.file(stem + ".png"), slice, ctx.cfg.log_png);
  }
  write_raw_image(ctx.file(stem + ".raw"), img.grid.n_u, img.grid.n_v, img.grid.n_w,
                  slice.magnitude);
  write_slice_csv(ctx.file(stem + ".csv"), slice);
  return slice;
}

Peak brightest(const TimeSlice& slice) {
  Peak p;
  const auto& g = slice.grid;
  for (std::size_t i = 0; i < g.n_u; ++i)
    for (std::size_t j = 0; j < g.n_v; ++j)
      for (std::size_t k = 0; k < g.n_w; ++k)
        if (slice.magnitude[g.index(i, j, k)] > p.magnitude) {
          p.magnitude = slice.magnitude[g.index(i, j, k)];
          p.voxel = g.index(i, j, k);
          p.position = g.point(i, j, k);
        }
  return p;
}

double median_magnitude(const TimeSlice& slice) {
  std::vector<double> m = slice.magnitude;
  std::nth_element(m.begin(), m.begin() + std::ptrdiff_t(m.size() / 2), m.end());
  return m[m.size() / 2];
}

void pipeline_render(RunContext& ctx) {
  const ImpulseResponse h = obtain_h(ctx);
  if (ctx.cfg.render.sensor_fwhm > 0.0) {
    const ImpulseResponse blurred = convolve_sensor_response(h, ctx.cfg.render.sensor_fwhm);
    save_impulse_response(blurred, ctx.file("h_fwhm.nlosh"));
    ctx.report << "H: sensor response " << ctx.cfg.render.sensor_fwhm
               << " s FWHM applied to h_fwhm.nlosh (h.nlosh stays ideal)\n";
  }
}

void pipeline_image(RunContext& ctx, bool confocal) {
  const ExperimentConfig& cfg = ctx.cfg;
  const ImpulseResponse h = obtain_h(ctx);
  const FrequencyBand band = pulse_spectrum(cfg.pulse, h.dt, default_dft_len(h.n_bins));
  const PhasorField response = scene_response(h, band);
  ctx.report << "band: " << band.size() << " frequencies around "
             << kSpeedOfLight / cfg.pulse.lambda_c * 1e-9 << " GHz\n";
  for (const std::string& name : cfg.image_grids) {
    const VoxelGrid& grid = cfg.scene.grid(name);
    const FocalStackImage img =
        confocal ? confocal_camera(response, h.relay.laser_point, grid)
                 : transient_camera(response, grid);
    const std::string stem = (confocal ? "f_cc_" : "f_tc_") + name;
    const TimeSlice slice = emit_images(ctx, stem, img, cfg.time);
    const Peak p = brightest(slice);
    ctx.report << stem << ": t=" << cfg.time << " peak " << p.magnitude << " at ("
               << p.position.x << ", " << p.position.y << ", " << p.position.z
               << "), median " << median_magnitude(slice) << "\n";
  }
}

void pipeline_infinity_mirror(RunContext& ctx) {
  const ExperimentConfig& cfg = ctx.cfg;
  const PlanarSurface* m = cfg.scene.scene.find_surface("m");
  const ImpulseResponse h = obtain_h(ctx);
  const FrequencyBand band = pulse_spectrum(cfg.pulse, h.dt, default_dft_len(h.n_bins));
  const PhasorField response = scene_response(h, band);

  // Expected mirror images of the illuminated point: one reflection off the
  // hidden surface, then one more round trip via the relay wall.
  const Point3 xl = h.relay.laser_point;
  std::optional<Point3> first, second;
  if (m) {
    const Dir3 mn(m->geometric_normal());
    first = mirror_reflect_point(xl, m->center(), mn);
    const Point3 back =
        mirror_reflect_point(*first, h.relay.grid_origin, h.relay.normal);
    second = mirror_reflect_point(back, m->center(), mn);
  }

  std::size_t idx = 0;
  for (const std::string& name : cfg.image_grids) {
    const FocalStackImage img = transient_camera(response, cfg.scene.grid(name));
    const TimeSlice slice = emit_images(ctx, "f_tc_" + name, img, 0.0);
    const Peak p = brightest(slice);
    const double med = median_magnitude(slice);
    ctx.report << "f_tc_" << name << ": peak " << p.magnitude << " at (" << p.position.x
               << ", " << p.position.y << ", " << p.position.z << "), peak/median "
               << (med > 0 ? p.magnitude / med : 0.0) << "\n";
    const std::optional<Point3> expect = (idx == 0) ? first : second;
    if (expect)
      ctx.report << "  expected mirror image at (" << expect->x << ", " << expect->y
                 << ", " << expect->z << "), offset "
                 << distance(p.position, *expect) << " m\n";
    ++idx;
  }
}

void pipeline_missing_cone(RunContext& ctx) {
  const ExperimentConfig& cfg = ctx.cfg;
  const ImpulseResponse h = obtain_h(ctx);
  const FrequencyBand band = pulse_spectrum(cfg.pulse, h.dt, default_dft_len(h.n_bins));
  const PhasorField response = scene_response(h, band);
  std::vector<std::pair<std::string, double>> integrals;
  for (const std::string& name : cfg.image_grids) {
    const VoxelGrid& grid = cfg.scene.grid(name);
    const FocalStackImage img = confocal_camera(response, h.relay.laser_point, grid);
    const TimeSlice slice = emit_images(ctx, "f_cc_" + name, img, 0.0);
    double total = 0.0;
    for (double v : slice.magnitude) total += v;
    integrals.emplace_back(name, total * grid.cell_area());
  }
  for (std::size_t i = 0; i < integrals.size(); ++i) {
    ctx.report << "integrated |f_cc| over " << integrals[i].first << ": "
               << integrals[i].second;
    if (i > 0 && integrals.front().second > 0.0)
      ctx.report << " (" << 100.0 * integrals[i].second / integrals.front().second
                 << "% of " << integrals.front().first << ")";
    ctx.report << "\n";
  }
}

SecondaryAperture build_secondary(RunContext& ctx, const ImpulseResponse& h,
                                  const PhasorField& response) {
  const ExperimentConfig& cfg = ctx.cfg;
  if (cfg.volume_grid.empty())
    throw ConfigError("pipeline '" + cfg.pipeline + "' needs imaging.volume_grid");
  const VoxelGrid& vol = cfg.scene.grid(cfg.volume_grid);
  const FocalStackImage f_cc = confocal_camera(response, h.relay.laser_point, vol);
  const SecondaryAperture ap = extract_secondary_aperture(f_cc, cfg.threshold, response);
  ctx.report << "secondary aperture: " << ap.points.size() << " of " << vol.count()
             << " voxels above " << cfg.threshold << " of max\n";

  std::ofstream os(ctx.file("aperture.csv"));
  os << "x,y,z,weight\n";
  for (std::size_t i = 0; i < ap.points.size(); ++i)
    os << ap.points[i].x << ',' << ap.points[i].y << ',' << ap.points[i].z << ','
       << ap.weights[i] << '\n';
  return ap;
}

void pipeline_secondary(RunContext& ctx, bool infer_only) {
  const ExperimentConfig& cfg = ctx.cfg;
  if (cfg.target_grid.empty())
    throw ConfigError("pipeline '" + cfg.pipeline + "' needs imaging.target_grid");
  const ImpulseResponse h = obtain_h(ctx);
  const FrequencyBand band = pulse_spectrum(cfg.pulse, h.dt, default_dft_len(h.n_bins));
  const PhasorField response = scene_response(h, band);
  const SecondaryAperture ap = build_secondary(ctx, h, response);
  const VoxelGrid& target = cfg.scene.grid(cfg.target_grid);

  const FocalStackImage f_tcm = transient_camera_secondary(ap, target);
  const TimeSlice tcm = emit_images(ctx, "f_tcm_" + cfg.target_grid, f_tcm, 0.0);

  const double radius =
      cfg.suppression_radius > 0.0 ? cfg.suppression_radius : cfg.pulse.lambda_c;
  const double match =
      cfg.match_radius > 0.0 ? cfg.match_radius : 0.5 * cfg.pulse.lambda_c;
  const InferenceResult inf =
      infer_plane_from_slice(tcm, h.relay.laser_point, radius, cfg.threshold, match);
  for (std::size_t i = 0; i < std::min<std::size_t>(inf.peaks.size(), 6); ++i)
    ctx.report << "peak " << i << ": " << inf.peaks[i].magnitude << " at ("
               << inf.peaks[i].position.x << ", " << inf.peaks[i].position.y << ", "
               << inf.peaks[i].position.z << ")\n";
  ctx.report << "inference: " << inf.note << "\n";

  std::ofstream rec(ctx.file("plane_estimate.txt"));
  if (inf.estimate) {
    const PlaneEstimate& est = *inf.estimate;
    rec << "center " << est.center.x << ' ' << est.center.y << ' ' << est.center.z
        << "\nnormal " << est.normal.x() << ' ' << est.normal.y() << ' '
        << est.normal.z() << "\npeak_magnitude " << est.peak_magnitude << '\n';
    ctx.report << "estimate: center (" << est.center.x << ", " << est.center.y << ", "
               << est.center.z << "), normal (" << est.normal.x() << ", "
               << est.normal.y() << ", " << est.normal.z() << ")\n";
    if (cfg.truth.plane_center && cfg.truth.plane_normal) {
      const Vec3 tn = Dir3(*cfg.truth.plane_normal).vec();
      const double off_plane = std::abs(dot(est.center - *cfg.truth.plane_center, tn));
      const double pos_err = distance(est.center, *cfg.truth.plane_center);
      double ang = angle_between_deg(est.normal.vec(), tn);
      ang = std::min(ang, 180.0 - ang);
      rec << "truth_plane_distance " << off_plane << "\ntruth_center_distance "
          << pos_err << "\ntruth_normal_error_deg " << ang << '\n';
      ctx.report << "vs truth: plane distance " << off_plane << " m, center distance "
                 << pos_err << " m, normal error " << ang << " deg\n";
    }
  } else {
    rec << "ambiguous\n";
  }

  if (!infer_only) {
    const FocalStackImage f_ccm = confocal_camera_secondary(ap, h.relay.laser_point, target);
    const TimeSlice ccm = emit_images(ctx, "f_ccm_" + cfg.target_grid, f_ccm, 0.0);
    if (!cfg.truth.footprint_surface.empty()) {
      const PlanarSurface* g = cfg.scene.scene.find_surface(cfg.truth.footprint_surface);
      if (!g)
        throw ConfigError("truth.footprint_surface '" + cfg.truth.footprint_surface +
                          "' not in scene");
      const double on_g = footprint_magnitude(ccm, *g, cfg.truth.footprint_tol);
      ctx.report << "|f_ccm| on footprint of '" << g->name << "': " << on_g << "\n";
      if (!cfg.truth.control_rects.empty()) {
        const auto mask = rects_to_mask(target, cfg.truth.control_rects);
        double ctrl = 0.0;
        for (std::size_t i = 0; i < mask.size(); ++i)
          if (mask[i]) ctrl += ccm.magnitude[i] * target.cell_area();
        ctx.report << "|f_ccm| on control region: " << ctrl
                   << (ctrl > 0 ? ", footprint/control = " + std::to_string(on_g / ctrl)
                                : "")
                   << "\n";
      }
    }
  }
}

void pipeline_two_corner(RunContext& ctx) {
  const ExperimentConfig& cfg = ctx.cfg;
  const ImpulseResponse h = obtain_h(ctx);

  Point3 mirror_point{0, 0, 0};
  Dir3 mirror_normal;
  VoxelGrid target;
  if (!cfg.mirror_surface.empty()) {
    const PlanarSurface* m = cfg.scene.scene.find_surface(cfg.mirror_surface);
    if (!m) throw ConfigError("two_corner.mirror_surface not found in scene");
    mirror_point = m->center();
    mirror_normal = Dir3(m->geometric_normal());
    if (!cfg.source_grid.empty())
      target = mirror_reflect_grid(cfg.scene.grid(cfg.source_grid), mirror_point,
                                   mirror_normal);
    else if (!cfg.target_grid.empty())
      target = cfg.scene.grid(cfg.target_grid);
    else
      throw ConfigError("two-corner needs two_corner.source_grid or imaging.target_grid");
  } else if (!cfg.target_grid.empty()) {
    target = cfg.scene.grid(cfg.target_grid);
    mirror_normal = cfg.scene.scene.relay.normal;
  } else {
    throw ConfigError("two-corner needs a mirror surface or an explicit target grid");
  }

  const TwoCornerImage img =
      two_corner_image(h, cfg.pulse, mirror_point, mirror_normal, target);
  const TimeSlice slice = emit_images(ctx, "two_corner", img.image, 0.0);
  ctx.report << "mirror plane: point (" << img.mirror_point.x << ", "
             << img.mirror_point.y << ", " << img.mirror_point.z << "), normal ("
             << img.mirror_normal.x() << ", " << img.mirror_normal.y() << ", "
             << img.mirror_normal.z() << ")\n";

  if (!cfg.truth.mask_rects.empty()) {
    const auto mask = rects_to_mask(target, cfg.truth.mask_rects);
    const auto bin = binarize(slice.magnitude, cfg.truth.mask_threshold);
    const double ncc = normalized_cross_correlation(bin, mask);
    // 180-degree rotation of the mask inside the image plane.
    std::vector<std::uint8_t> flipped(mask.size());
    for (std::size_t i = 0; i < target.n_u; ++i)
      for (std::size_t j = 0; j < target.n_v; ++j)
        flipped[target.index(i, j, 0)] =
            mask[target.index(target.n_u - 1 - i, target.n_v - 1 - j, 0)];
    const double ncc_flipped = normalized_cross_correlation(bin, flipped);
    ctx.report << "mask correlation: " << ncc << " (180-degree flipped mask: "
               << ncc_flipped << ")\n";
  }
}

void pipeline_wavesim(RunContext& ctx) {
  const ExperimentConfig& cfg = ctx.cfg;
  const WavesimParams& ws = cfg.wavesim;
  const double omega = kSpeedOfLight / ws.lambda;

  const Point3 src{ws.source_distance * std::sin(deg2rad(ws.source_angle)), 0.0,
                   ws.source_distance * std::cos(deg2rad(ws.source_angle))};

  std::ofstream arcs(ctx.file("arc_profile.csv"));
  arcs << "tilt_deg,angle_deg,wave_mag,ray\n";
  for (double tilt : ws.tilts) {
    const double t = deg2rad(tilt);
    PlanarSurface s;
    s.name = "m";
    const Vec3 eu{ws.surface_side * std::cos(t), 0.0, ws.surface_side * std::sin(t)};
    const Vec3 ev{0.0, ws.surface_side, 0.0};
    s.origin = Point3{0, 0, 0} - 0.5 * eu - 0.5 * ev;
    s.edge_u = eu;
    s.edge_v = ev;

    std::vector<Point3> probes;
    std::vector<double> angles;
    for (double a = ws.arc_from; a <= ws.arc_to + 1e-9; a += ws.arc_step) {
      probes.push_back({ws.arc_radius * std::sin(deg2rad(a)), 0.0,
                        ws.arc_radius * std::cos(deg2rad(a))});
      angles.push_back(a);
    }
    const auto wave =
        simulate_wave_field_at(src, s, probes, omega, ws.n_samples, cfg.seed);
    const auto ray = simulate_ray_field_at(src, s, probes, ws.n_samples, cfg.seed);
    std::size_t arg = 0;
    for (std::size_t i = 0; i < wave.size(); ++i) {
      if (std::abs(wave[i]) > std::abs(wave[arg])) arg = i;
      arcs << tilt << ',' << angles[i] << ',' << std::abs(wave[i]) << ',' << ray[i]
           << '\n';
    }
    const Vec3 d = Dir3(s.center() - src).vec();
    const Vec3 r = mirror_reflect_vector(d, Dir3(s.geometric_normal()));
    const double expect = rad2deg(std::atan2(r.x, r.z));
    ctx.report << "tilt " << tilt << ": wave peak at " << angles[arg]
               << " deg, specular direction " << expect << " deg\n";
  }

  if (!ws.grid.empty()) {
    const double t = deg2rad(ws.tilts.front());
    PlanarSurface s;
    s.name = "m";
    const Vec3 eu{ws.surface_side * std::cos(t), 0.0, ws.surface_side * std::sin(t)};
    const Vec3 ev{0.0, ws.surface_side, 0.0};
    s.origin = Point3{0, 0, 0} - 0.5 * eu - 0.5 * ev;
    s.edge_u = eu;
    s.edge_v = ev;
    const VoxelGrid& grid = cfg.scene.grid(ws.grid);
    const FieldImage wave = simulate_wave_field(src, s, grid, omega, ws.n_samples, cfg.seed);
    const FieldImage ray = simulate_ray_field(src, s, grid, ws.n_samples, cfg.seed);
    std::vector<double> wm(wave.values.size()), rm(ray.values.size());
    for (std::size_t i = 0; i < wm.size(); ++i) wm[i] = std::abs(wave.values[i]);
    for (std::size_t i = 0; i < rm.size(); ++i) rm[i] = ray.values[i].real();
    write_png_gray(ctx.file("wave_field.png"), grid.n_v, grid.n_u, wm, cfg.log_png);
    write_png_gray(ctx.file("ray_field.png"), grid.n_v, grid.n_u, rm, cfg.log_png);
    write_raw_image(ctx.file("wave_field.raw"), grid.n_u, grid.n_v, 1, wm);
    write_raw_image(ctx.file("ray_field.raw"), grid.n_u, grid.n_v, 1, rm);
  }
}

json render_params_json(const RenderParams& r, const std::string& h_file) {
  return json{{"paths", r.n_paths},       {"seed", r.seed},
              {"dt", r.dt},               {"n_bins", r.n_bins},
              {"min_bounces", r.min_bounces}, {"max_bounces", r.max_bounces},
              {"sensor_fwhm", r.sensor_fwhm}, {"fail_on_late", r.fail_on_late},
              {"h_file", h_file}};
}

void write_manifest(RunContext& ctx) {
  const ExperimentConfig& cfg = ctx.cfg;
  json j;
  j["tool"] = "nlospf";
  j["version"] = tool_version();
  j["pipeline"] = cfg.pipeline;
  j["name"] = cfg.name;
  j["seed"] = cfg.seed;
  j["threads"] = cfg.threads;
  j["scene_path"] = cfg.scene_path;
  j["scene"] = format_config(scene_to_config(cfg.scene));
  j["render"] = render_params_json(cfg.render, cfg.h_file);
  j["pulse"] = {{"lambda_c", cfg.pulse.lambda_c}, {"sigma", cfg.pulse.sigma}};
  j["imaging"] = {{"time", cfg.time},
                  {"grids", cfg.image_grids},
                  {"volume_grid", cfg.volume_grid},
                  {"target_grid", cfg.target_grid},
                  {"threshold", cfg.threshold},
                  {"suppression_radius", cfg.suppression_radius},
                  {"match_radius", cfg.match_radius},
                  {"log_png", cfg.log_png}};
  if (!cfg.mirror_surface.empty() || !cfg.source_grid.empty())
    j["two_corner"] = {{"mirror_surface", cfg.mirror_surface},
                       {"source_grid", cfg.source_grid}};
  if (cfg.pipeline == "wavesim") {
    const WavesimParams& ws = cfg.wavesim;
    j["wavesim"] = {{"lambda", ws.lambda},
                    {"tilts", ws.tilts},
                    {"surface_side", ws.surface_side},
                    {"source_angle", ws.source_angle},
                    {"source_distance", ws.source_distance},
                    {"arc_radius", ws.arc_radius},
                    {"arc_from", ws.arc_from},
                    {"arc_to", ws.arc_to},
                    {"arc_step", ws.arc_step},
                    {"n_samples", ws.n_samples},
                    {"grid", ws.grid}};
  }
  j["artifacts"] = ctx.artifacts;
  std::ofstream os(ctx.out / "manifest.json");
  os << j.dump(2) << '\n';
}

}  // namespace

std::string run_experiment(const ExperimentConfig& cfg, const std::string& out_dir) {
  if (cfg.threads > 0) set_thread_count(cfg.threads);
  fs::create_directories(out_dir);
  RunContext ctx{cfg, fs::path(out_dir), {}, {}};
  ctx.report << "pipeline: " << cfg.pipeline << "\nscene: " << cfg.scene_path << "\n";

  if (cfg.pipeline == "render")
    pipeline_render(ctx);
  else if (cfg.pipeline == "image-transient")
    pipeline_image(ctx, false);
  else if (cfg.pipeline == "image-confocal")
    pipeline_image(ctx, true);
  else if (cfg.pipeline == "infinity-mirror")
    pipeline_infinity_mirror(ctx);
  else if (cfg.pipeline == "missing-cone")
    pipeline_missing_cone(ctx);
  else if (cfg.pipeline == "infer")
    pipeline_secondary(ctx, true);
  else if (cfg.pipeline == "secondary")
    pipeline_secondary(ctx, false);
  else if (cfg.pipeline == "two-corner")
    pipeline_two_corner(ctx);
  else if (cfg.pipeline == "wavesim")
    pipeline_wavesim(ctx);
  else
    throw ConfigError("unknown pipeline '" + cfg.pipeline + "'");

  const std::string report = ctx.report.str();
  {
    std::ofstream os(ctx.out / "report.txt");
    os << report;
    ctx.artifacts.push_back("report.txt");
  }
  write_manifest(ctx);
  return report;
}

std::vector<std::string> validate_experiment(const ExperimentConfig& cfg) {
  std::vector<std::string> issues;
  try {
    cfg.scene.scene.validate();
  } catch (const Error& e) {
    issues.push_back(std::string("scene: ") + e.what());
  }
  try {
    cfg.render.validate();
  } catch (const Error& e) {
    issues.push_back(std::string("render: ") + e.what());
  }

  if (cfg.pipeline != "wavesim") {
    try {
      pulse_spectrum(cfg.pulse, cfg.render.dt, default_dft_len(cfg.render.n_bins));
    } catch (const Error& e) {
      issues.push_back(std::string("pulse: ") + e.what());
    }
    if (kSpeedOfLight * cfg.render.dt > cfg.pulse.lambda_c / 10.0)
      issues.push_back("pulse: c*dt exceeds lambda_c/10; temporal quantization will "
                       "blur the imaging wavelength");
    const double window = double(cfg.render.n_bins) * cfg.render.dt * kSpeedOfLight;
    const double bound = max_path_length_bound(cfg.scene.scene, cfg.render.max_bounces);
    if (window < bound) {
      std::ostringstream os;
      os << "coverage: histogram window " << window
         << " m is below the analytic max path length " << bound << " m for "
         << cfg.render.max_bounces << " bounces";
      issues.push_back(os.str());
    }
  }

  auto need_grid = [&](const std::string& name, const std::string& role,
                       bool relay_camera) {
    if (name.empty()) return;
    if (!cfg.scene.grids.count(name)) {
      issues.push_back(role + ": scene file has no [grid." + name + "]");
      return;
    }
    if (!relay_camera) return;  // secondary-aperture targets may straddle
    const VoxelGrid& g = cfg.scene.grids.at(name);
    const Vec3 n = cfg.scene.scene.relay.normal.vec();
    bool pos = false, neg = false, on = false;
    for (const Point3& p : g.points()) {
      const double d = dot(p - cfg.scene.scene.relay.grid_origin, n);
      pos |= d > 1e-9;
      neg |= d < -1e-9;
      on |= std::abs(d) <= 1e-9;
    }
    if ((pos && neg) || on)
      issues.push_back(role + ": grid '" + name + "' touches the relay plane");
  };
  const bool target_is_relay_camera = cfg.pipeline == "two-corner";
  for (const auto& name : cfg.image_grids) need_grid(name, "imaging", true);
  need_grid(cfg.volume_grid, "volume", true);
  need_grid(cfg.target_grid, "target", target_is_relay_camera);
  if (!cfg.source_grid.empty() && !cfg.scene.grids.count(cfg.source_grid))
    issues.push_back("two-corner: scene file has no [grid." + cfg.source_grid + "]");
  if (!cfg.mirror_surface.empty() &&
      !cfg.scene.scene.find_surface(cfg.mirror_surface))
    issues.push_back("two-corner: mirror surface '" + cfg.mirror_surface +
                     "' not in scene");
  if (!cfg.truth.footprint_surface.empty() &&
      !cfg.scene.scene.find_surface(cfg.truth.footprint_surface))
    issues.push_back("truth: footprint surface '" + cfg.truth.footprint_surface +
                     "' not in scene");
  if (!cfg.h_file.empty() && !fs::exists(cfg.h_file))
    issues.push_back("render: h_file '" + cfg.h_file + "' does not exist");
  return issues;
}

}  // namespace nlos
