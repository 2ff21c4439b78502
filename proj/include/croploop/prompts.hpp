#pragma once

#include <string>

#include "croploop/action.hpp"
#include "croploop/geometry.hpp"

namespace croploop {

// The two prompt templates presented with every view. Placeholders
// {instruction}, {view_width} and {view_height} are substituted at render
// time. The shipped defaults can be replaced from files to match whatever a
// concrete endpoint expects.
struct PromptTemplates {
  std::string crop;
  std::string click;

  static PromptTemplates defaults();
  static PromptTemplates from_files(const std::string& crop_path,
                                    const std::string& click_path);

  std::string render(ActionKind kind, const std::string& instruction,
                     const ImageSize& view) const;
};

}  // namespace croploop
