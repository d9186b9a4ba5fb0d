#pragma once
#include <map>
#include <string>

#include "nlospf/config.hpp"
#include "nlospf/scene.hpp"

namespace nlos {

/// One scene file: geometry, relay aperture, and the named sample grids the
/// experiments image onto. Sections: [relay], [scene], [[surface]],
/// [grid.<name>]. Lengths in meters; world frame has the relay plane at
/// z = 0 with normal +z.
struct SceneFile {
  Scene scene;
  std::map<std::string, VoxelGrid> grids;

  const VoxelGrid& grid(const std::string& name) const;
};

SceneFile scene_from_config(const ConfigDoc& doc);
ConfigDoc scene_to_config(const SceneFile& sf);

SceneFile load_scene_file(const std::string& path);
void save_scene_file(const SceneFile& sf, const std::string& path);

}  // namespace nlos
