#include "refine/label.hpp"

#include <cctype>

namespace refine {

static std::size_t digit_start(const Label &s) {
  std::size_t i = s.size();
  while (i > 0 && std::isdigit(static_cast<unsigned char>(s[i - 1])))
    --i;
  return i;
}

bool label_less(const Label &a, const Label &b) {
  std::size_t da = digit_start(a), db = digit_start(b);
  int c = a.compare(0, da, b, 0, db);
  if (c != 0)
    return c < 0;
  std::string na = a.substr(da), nb = b.substr(db);
  // strip leading zeros before comparing numerically
  auto strip = [](std::string &s) {
    std::size_t z = 0;
    while (z + 1 < s.size() && s[z] == '0')
      ++z;
    s.erase(0, z);
  };
  std::string sa = na, sb = nb;
  strip(sa);
  strip(sb);
  if (sa.size() != sb.size())
    return sa.size() < sb.size();
  if (sa != sb)
    return sa < sb;
  return na < nb;
}

bool is_label(const std::string &s) {
  if (s.empty())
    return false;
  for (char c : s)
    if (!(std::isalnum(static_cast<unsigned char>(c)) || c == '_' || c == '.'))
      return false;
  return true;
}

} // namespace refine
