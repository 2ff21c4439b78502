#include "croploop/image_io.hpp"

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <map>
#include <mutex>

#include <opencv2/core.hpp>
#include <opencv2/imgcodecs.hpp>
#include <opencv2/imgproc.hpp>

#include "croploop/errors.hpp"
#include "croploop/rng.hpp"

namespace croploop {
namespace image_io {

namespace {

std::mutex g_cache_mutex;
std::map<std::string, cv::Mat> g_root_cache;

cv::Mat load_root(const std::string& path) {
  {
    std::lock_guard<std::mutex> lock(g_cache_mutex);
    auto it = g_root_cache.find(path);
    if (it != g_root_cache.end()) return it->second;
  }
  cv::Mat img = cv::imread(path, cv::IMREAD_COLOR);
  if (img.empty()) {
    throw MissingImageError("cannot decode image: " + path);
  }
  std::lock_guard<std::mutex> lock(g_cache_mutex);
  if (g_root_cache.size() > 64) g_root_cache.clear();
  g_root_cache[path] = img;
  return img;
}

std::string view_cache_key(const View& view) {
  std::uint64_t h = rng::fnv1a(view.image);
  for (const auto& hop : view.chain.hops()) {
    h = rng::mix(h, static_cast<std::uint64_t>(hop.crop.x));
    h = rng::mix(h, static_cast<std::uint64_t>(hop.crop.y));
    h = rng::mix(h, static_cast<std::uint64_t>(hop.crop.w));
    h = rng::mix(h, static_cast<std::uint64_t>(hop.crop.h));
    h = rng::mix(h, static_cast<std::uint64_t>(hop.scale * 1e6));
  }
  h = rng::mix(h, static_cast<std::uint64_t>(view.presented.width));
  h = rng::mix(h, static_cast<std::uint64_t>(view.presented.height));
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%016llx",
                static_cast<unsigned long long>(h));
  return std::string(buf) + ".png";
}

}  // namespace

std::vector<unsigned char> render_view_png(const View& view) {
  const char* cache_dir = std::getenv("CROPLOOP_CACHE_DIR");
  std::filesystem::path cache_path;
  if (cache_dir && *cache_dir) {
    cache_path = std::filesystem::path(cache_dir) / view_cache_key(view);
    if (std::filesystem::exists(cache_path)) {
      std::ifstream in(cache_path, std::ios::binary);
      return {std::istreambuf_iterator<char>(in),
              std::istreambuf_iterator<char>()};
    }
  }

  cv::Mat root = load_root(view.image);
  const ImageSize actual{root.cols, root.rows};
  const Region region = view.chain.empty()
                            ? full_region(actual)
                            : clamp_to_frame(
                                  view_root_region(view.chain, view.root_size),
                                  actual);
  cv::Mat cropped = root(cv::Rect(static_cast<int>(region.x),
                                  static_cast<int>(region.y),
                                  static_cast<int>(region.w),
                                  static_cast<int>(region.h)));
  cv::Mat presented;
  if (region.w == view.presented.width && region.h == view.presented.height) {
    presented = cropped;
  } else {
    const int interp = view.presented.width > region.w ? cv::INTER_CUBIC
                                                       : cv::INTER_AREA;
    cv::resize(cropped, presented,
               cv::Size(static_cast<int>(view.presented.width),
                        static_cast<int>(view.presented.height)),
               0, 0, interp);
  }
  std::vector<unsigned char> buf;
  cv::imencode(".png", presented, buf, {cv::IMWRITE_PNG_COMPRESSION, 6});

  if (!cache_path.empty()) {
    std::error_code ec;
    std::filesystem::create_directories(cache_path.parent_path(), ec);
    if (!ec) write_file(cache_path.string(), buf);
  }
  return buf;
}

std::string base64_encode(const std::vector<unsigned char>& data) {
  static const char* table =
      "ABCDEFGHIJKLMNOPQRSTUVWXYZabcdefghijklmnopqrstuvwxyz0123456789+/";
  std::string out;
  out.reserve((data.size() + 2) / 3 * 4);
  std::size_t i = 0;
  for (; i + 2 < data.size(); i += 3) {
    const unsigned v = (data[i] << 16) | (data[i + 1] << 8) | data[i + 2];
    out.push_back(table[(v >> 18) & 63]);
    out.push_back(table[(v >> 12) & 63]);
    out.push_back(table[(v >> 6) & 63]);
    out.push_back(table[v & 63]);
  }
  if (i + 1 == data.size()) {
    const unsigned v = data[i] << 16;
    out.push_back(table[(v >> 18) & 63]);
    out.push_back(table[(v >> 12) & 63]);
    out += "==";
  } else if (i + 2 == data.size()) {
    const unsigned v = (data[i] << 16) | (data[i + 1] << 8);
    out.push_back(table[(v >> 18) & 63]);
    out.push_back(table[(v >> 12) & 63]);
    out.push_back(table[(v >> 6) & 63]);
    out.push_back('=');
  }
  return out;
}

void write_file(const std::string& path,
                const std::vector<unsigned char>& data) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw Error("cannot write file: " + path);
  out.write(reinterpret_cast<const char*>(data.data()),
            static_cast<std::streamsize>(data.size()));
}

bool file_exists(const std::string& path) {
  std::error_code ec;
  return std::filesystem::exists(path, ec);
}

}  // namespace image_io
}  // namespace croploop
