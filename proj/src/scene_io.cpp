#include "nlospf/scene_io.hpp"

#include <fstream>

namespace nlos {

namespace {

Vec3 to_vec(const std::vector<double>& t) { return {t[0], t[1], t[2]}; }

ConfigValue make_triplet(const Vec3& v) {
  ConfigValue cv;
  cv.kind = ConfigValue::Kind::NumberList;
  cv.num_list = {v.x, v.y, v.z};
  return cv;
}

ConfigValue make_num(double v) {
  ConfigValue cv;
  cv.kind = ConfigValue::Kind::Number;
  cv.num = v;
  return cv;
}

ConfigValue make_str(const std::string& s) {
  ConfigValue cv;
  cv.kind = ConfigValue::Kind::String;
  cv.str = s;
  return cv;
}

}  // namespace

const VoxelGrid& SceneFile::grid(const std::string& name) const {
  auto it = grids.find(name);
  if (it == grids.end()) throw ConfigError("scene file has no [grid." + name + "]");
  return it->second;
}

SceneFile scene_from_config(const ConfigDoc& doc) {
  SceneFile sf;

  const ConfigTable& relay = doc.table("relay");
  RelayAperture& r = sf.scene.relay;
  r.grid_origin = to_vec(get_triplet(relay, "grid_origin"));
  r.step_u = to_vec(get_triplet(relay, "step_u"));
  r.step_v = to_vec(get_triplet(relay, "step_v"));
  r.n_u = std::size_t(get_number(relay, "n_u"));
  r.n_v = std::size_t(get_number(relay, "n_v"));
  r.normal = Dir3(to_vec(get_triplet(relay, "normal")));
  r.laser_point = to_vec(get_triplet(relay, "laser_point"));

  if (doc.has("scene"))
    sf.scene.max_bounces = int(get_number_or(doc.table("scene"), "max_bounces", 3));

  auto surfaces = doc.table_arrays.find("surface");
  if (surfaces != doc.table_arrays.end()) {
    for (const ConfigTable& st : surfaces->second) {
      PlanarSurface s;
      s.name = get_string_or(st, "name", "");
      s.origin = to_vec(get_triplet(st, "origin"));
      s.edge_u = to_vec(get_triplet(st, "edge_u"));
      s.edge_v = to_vec(get_triplet(st, "edge_v"));
      const std::string kind = get_string_or(st, "kind", "diffuse");
      if (kind == "diffuse")
        s.kind = SurfaceKind::Diffuse;
      else if (kind == "absorber")
        s.kind = SurfaceKind::Absorber;
      else
        throw ConfigError("surface kind must be 'diffuse' or 'absorber'");
      s.albedo = get_number_or(st, "albedo", s.kind == SurfaceKind::Absorber ? 0.0 : 1.0);
      sf.scene.surfaces.push_back(std::move(s));
    }
  }

  for (const auto& [name, table] : doc.tables) {
    if (name.rfind("grid.", 0) != 0) continue;
    VoxelGrid g;
    g.origin = to_vec(get_triplet(table, "origin"));
    g.axis_u = to_vec(get_triplet(table, "axis_u"));
    g.axis_v = to_vec(get_triplet(table, "axis_v"));
    if (table.count("axis_w")) g.axis_w = to_vec(get_triplet(table, "axis_w"));
    g.n_u = std::size_t(get_number(table, "n_u"));
    g.n_v = std::size_t(get_number(table, "n_v"));
    g.n_w = std::size_t(get_number_or(table, "n_w", 1));
    g.validate();
    sf.grids.emplace(name.substr(5), std::move(g));
  }

  sf.scene.validate();
  return sf;
}

ConfigDoc scene_to_config(const SceneFile& sf) {
  ConfigDoc doc;
  ConfigTable& relay = doc.tables["relay"];
  const RelayAperture& r = sf.scene.relay;
  relay["grid_origin"] = make_triplet(r.grid_origin);
  relay["step_u"] = make_triplet(r.step_u);
  relay["step_v"] = make_triplet(r.step_v);
  relay["n_u"] = make_num(double(r.n_u));
  relay["n_v"] = make_num(double(r.n_v));
  relay["normal"] = make_triplet(r.normal.vec());
  relay["laser_point"] = make_triplet(r.laser_point);

  doc.tables["scene"]["max_bounces"] = make_num(double(sf.scene.max_bounces));

  for (const PlanarSurface& s : sf.scene.surfaces) {
    ConfigTable st;
    st["name"] = make_str(s.name);
    st["origin"] = make_triplet(s.origin);
    st["edge_u"] = make_triplet(s.edge_u);
    st["edge_v"] = make_triplet(s.edge_v);
    st["albedo"] = make_num(s.albedo);
    st["kind"] = make_str(s.kind == SurfaceKind::Diffuse ? "diffuse" : "absorber");
    doc.table_arrays["surface"].push_back(std::move(st));
  }

  for (const auto& [name, g] : sf.grids) {
    ConfigTable& gt = doc.tables["grid." + name];
    gt["origin"] = make_triplet(g.origin);
    gt["axis_u"] = make_triplet(g.axis_u);
    gt["axis_v"] = make_triplet(g.axis_v);
    gt["axis_w"] = make_triplet(g.axis_w);
    gt["n_u"] = make_num(double(g.n_u));
    gt["n_v"] = make_num(double(g.n_v));
    gt["n_w"] = make_num(double(g.n_w));
  }
  return doc;
}

SceneFile load_scene_file(const std::string& path) {
  return scene_from_config(load_config(path));
}

void save_scene_file(const SceneFile& sf, const std::string& path) {
  std::ofstream os(path);
  if (!os) throw IoError("cannot write scene file: " + path);
  os << format_config(scene_to_config(sf));
  if (!os) throw IoError("short write: " + path);
}

}  // namespace nlos
