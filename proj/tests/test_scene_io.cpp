#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cstdio>
#include <filesystem>

#include "nlospf/scene_io.hpp"

using namespace nlos;

namespace {

SceneFile sample_scene() {
  SceneFile sf;
  RelayAperture& r = sf.scene.relay;
  r.n_u = 8;
  r.n_v = 8;
  r.step_u = {0.2857142857142857, 0.0, 0.0};
  r.step_v = {0.0, 0.2857142857142857, 0.0};
  r.grid_origin = {-1.0, -1.0, 0.0};
  r.normal = Dir3(0.0, 0.0, 1.0);
  r.laser_point = {0.0, 0.0, 0.0};
  sf.scene.max_bounces = 5;

  PlanarSurface m;
  m.name = "mirror";
  m.origin = {-0.5, -0.5, 0.5};
  m.edge_u = {1.0, 0.0, 0.0};
  m.edge_v = {0.0, 1.0, 0.0};
  m.albedo = 0.75;
  sf.scene.surfaces.push_back(m);

  PlanarSurface occ;
  occ.name = "occluder";
  occ.origin = {0.3, -0.25, 0.1};
  occ.edge_u = {0.0, 0.5, 0.0};
  occ.edge_v = {0.0, 0.0, 0.4};
  occ.albedo = 0.0;
  occ.kind = SurfaceKind::Absorber;
  sf.scene.surfaces.push_back(occ);

  VoxelGrid g;
  g.origin = {-1.0, -1.0, 1.0};
  g.axis_u = {0.03125, 0.0, 0.0};
  g.axis_v = {0.0, 0.03125, 0.0};
  g.axis_w = {0.0, 0.0, 0.05};
  g.n_u = 64;
  g.n_v = 64;
  g.n_w = 1;
  sf.grids.emplace("sprime", g);
  return sf;
}

}  // namespace

TEST_CASE("scene file round-trips losslessly") {
  const SceneFile sf = sample_scene();
  const std::string path = (std::filesystem::temp_directory_path() / "rt_scene.toml").string();
  save_scene_file(sf, path);
  const SceneFile back = load_scene_file(path);

  CHECK(back.scene.relay.n_u == sf.scene.relay.n_u);
  CHECK(back.scene.relay.step_u.x == sf.scene.relay.step_u.x);  // exact
  CHECK(back.scene.max_bounces == 5);
  REQUIRE(back.scene.surfaces.size() == 2);
  CHECK(back.scene.surfaces[0].name == "mirror");
  CHECK(back.scene.surfaces[0].albedo == 0.75);
  CHECK(back.scene.surfaces[1].kind == SurfaceKind::Absorber);
  REQUIRE(back.grids.count("sprime") == 1);
  CHECK(back.grid("sprime").axis_u.x == sf.grid("sprime").axis_u.x);

  // Serialize again: the text form must be identical (fixed key order).
  CHECK(format_config(scene_to_config(back)) == format_config(scene_to_config(sf)));
  std::remove(path.c_str());
}

TEST_CASE("config parser accepts comments and rejects malformed input") {
  const char* good = R"(# scene
[relay]  # trailing comment
grid_origin = [0, 0, 0]
step_u = [0.1, 0, 0]
step_v = [0, 0.1, 0]
n_u = 2
n_v = 2
normal = [0, 0, 1]
laser_point = [0.05, 0.05, 0]
)";
  const ConfigDoc doc = parse_config(good);
  CHECK(doc.has("relay"));
  CHECK(get_number(doc.table("relay"), "n_u") == 2.0);

  CHECK_THROWS_AS(parse_config("key_outside = 1\n"), ConfigError);
  CHECK_THROWS_AS(parse_config("[relay]\nbroken line\n"), ConfigError);
  CHECK_THROWS_AS(parse_config("[relay]\nx = \"unterminated\n"), ConfigError);
  CHECK_THROWS_AS(parse_config("[relay]\nn_u = 2\nn_u = 3\n"), ConfigError);
  CHECK_THROWS_AS(parse_config("[relay]\nv = [1, oops]\n"), ConfigError);
}

TEST_CASE("scene_from_config validates the geometry") {
  const char* bad_laser = R"(
[relay]
grid_origin = [0, 0, 0]
step_u = [0.1, 0, 0]
step_v = [0, 0.1, 0]
n_u = 2
n_v = 2
normal = [0, 0, 1]
laser_point = [0, 0, 0.5]
)";
  CHECK_THROWS_AS(scene_from_config(parse_config(bad_laser)), ConfigError);

  const char* bad_kind = R"(
[relay]
grid_origin = [0, 0, 0]
step_u = [0.1, 0, 0]
step_v = [0, 0.1, 0]
n_u = 2
n_v = 2
normal = [0, 0, 1]
laser_point = [0, 0, 0]

[[surface]]
name = "s"
origin = [0, 0, 1]
edge_u = [1, 0, 0]
edge_v = [0, 1, 0]
kind = "shiny"
)";
  CHECK_THROWS_AS(scene_from_config(parse_config(bad_kind)), ConfigError);
}
