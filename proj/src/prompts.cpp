#include "croploop/prompts.hpp"

#include <fstream>
#include <sstream>

#include "croploop/errors.hpp"

namespace croploop {

namespace {

const char* kDefaultCrop =
    "You are locating a GUI element on a screenshot.\n"
    "Instruction: {instruction}\n"
    "The image shown is {view_width}x{view_height} pixels.\n"
    "Pick the smallest rectangular region that still contains the target "
    "element together with the nearby context needed to recognize it.\n"
    "First reason briefly, then answer on the last line with exactly:\n"
    "Crop(x, y, w, h)\n"
    "using integer pixel coordinates of this image.";

const char* kDefaultClick =
    "You are locating a GUI element on a screenshot.\n"
    "Instruction: {instruction}\n"
    "The image shown is {view_width}x{view_height} pixels.\n"
    "First reason briefly, then answer on the last line with exactly:\n"
    "Click(x, y)\n"
    "the integer pixel coordinate of this image where the target element "
    "should be clicked.";

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ConfigError("cannot read prompt template: " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void replace_all(std::string& s, const std::string& key,
                 const std::string& value) {
  std::size_t pos = 0;
  while ((pos = s.find(key, pos)) != std::string::npos) {
    s.replace(pos, key.size(), value);
    pos += value.size();
  }
}

}  // namespace

PromptTemplates PromptTemplates::defaults() {
  return {kDefaultCrop, kDefaultClick};
}

PromptTemplates PromptTemplates::from_files(const std::string& crop_path,
                                            const std::string& click_path) {
  return {read_file(crop_path), read_file(click_path)};
}

std::string PromptTemplates::render(ActionKind kind,
                                    const std::string& instruction,
                                    const ImageSize& view) const {
  std::string out = kind == ActionKind::Crop ? crop : click;
  replace_all(out, "{instruction}", instruction);
  replace_all(out, "{view_width}", std::to_string(view.width));
  replace_all(out, "{view_height}", std::to_string(view.height));
  return out;
}

}  // namespace croploop
