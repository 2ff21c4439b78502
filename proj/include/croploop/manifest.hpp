#pragma once

#include <string>
#include <vector>

#include "croploop/sample.hpp"

namespace croploop {

// A benchmark manifest: JSON-lines of GroundingSample rows with image paths
// resolved relative to the manifest's directory.
struct Manifest {
  std::string root;  // directory image paths are relative to
  std::vector<GroundingSample> entries;

  std::string resolve_image(const GroundingSample& s) const;
};

// Loads and schema-validates a manifest. Rows must carry
//   {id, image, width, height, instruction, bbox:[x,y,w,h]}
// and may carry {click:[x,y], domain, element_type, step_hint}.
// Throws SchemaError (with line number) on malformed rows, duplicate ids or
// invariant violations, and MissingImageError listing unresolved paths when
// check_images is set.
Manifest load_manifest(const std::string& path, bool check_images = true);

void save_manifest(const Manifest& manifest, const std::string& path);

}  // namespace croploop
