#pragma once

#include <string>

namespace refine {

// Labels are plain names. Fresh labels produced by the provers are w0, w1, ...
using Label = std::string;

// Natural order: names compare by alphabetic prefix, then by the numeric
// suffix as a number, so w2 < w10. Used wherever "creation order" matters.
bool label_less(const Label &a, const Label &b);

struct LabelLess {
  bool operator()(const Label &a, const Label &b) const { return label_less(a, b); }
};

bool is_label(const std::string &s);

} // namespace refine
