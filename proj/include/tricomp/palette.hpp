#pragma once

#include "io.hpp"

#include <string>

namespace tricomp {

// Fixed regime colors shared by design and regime-map images.
inline io::Rgb label_color(const std::string& label) {
  if (label == "kappa1") return {0, 0, 0};
  if (label == "L(13,2,13)") return {0, 0, 255};
  if (label == "L(13,2,1)") return {0, 255, 0};
  if (label == "L(12,1)") return {255, 0, 0};
  if (label == "kappa2") return {128, 128, 128};
  if (label == "void") return {255, 255, 255};
  return {255, 165, 0};
}

}  // namespace tricomp
