#pragma once

#include <string>
#include <vector>

#include "croploop/geometry.hpp"
#include "croploop/policy.hpp"

namespace croploop {

// Pixel plumbing for policies that need real images (the remote adapter and
// the sim-screen writer). Geometry modules never touch pixels.
namespace image_io {

// Renders the innermost view of the chain from the root screenshot: composed
// crop in root coordinates, then resize to the presented extent. PNG bytes.
// Decoded root images are cached in-process; when the environment variable
// CROPLOOP_CACHE_DIR is set, rendered views are also cached on disk keyed by
// (path, chain, presented size).
std::vector<unsigned char> render_view_png(const View& view);

std::string base64_encode(const std::vector<unsigned char>& data);

void write_file(const std::string& path,
                const std::vector<unsigned char>& data);

bool file_exists(const std::string& path);

}  // namespace image_io
}  // namespace croploop
