#pragma once

#include <string>
#include <vector>

#include "dvlae/embedding.hpp"

namespace dvlae {

struct PlotSpec {
  bool color_by_tag = true;
  std::vector<std::string> highlight;  // ids drawn as diamonds
  int width = 800;
  int height = 600;
};

/// Standalone axes-free SVG scatter. Points are circles coloured by tag from
/// a fixed categorical palette (legend lists tags in sorted order);
/// highlighted ids are drawn last as red diamonds. Output bytes depend only
/// on the inputs. Throws Error if a highlight id is not in the embedding.
std::string render_scatter_svg(const Embedding& embedding, const PlotSpec& spec);

}  // namespace dvlae
