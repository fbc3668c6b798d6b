#pragma once

#include <string>
#include <vector>

namespace dvlae {

/// A real feature vector attached to a structure, e.g. the padded baseline
/// or the per-element mean descriptor.
struct LabeledVector {
  std::string id;
  std::string tag;
  std::vector<double> values;

  friend bool operator==(const LabeledVector&, const LabeledVector&) = default;
};

}  // namespace dvlae
