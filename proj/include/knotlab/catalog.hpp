#pragma once

#include <optional>
#include <string>
#include <vector>

#include "knotlab/diagram.hpp"
#include "knotlab/errors.hpp"
#include "knotlab/layout.hpp"

namespace knotlab {

struct CatalogEntry {
  std::string name;
  Diagram diagram;
  std::optional<Layout> preset_layout;
  std::string notes;
};

/// The built-in diagrams, in a fixed order. PD codes are stored in canonical
/// form so that emit_pd reproduces them exactly.
inline const std::vector<CatalogEntry> &catalog() {
  static const std::vector<CatalogEntry> entries = [] {
    struct Raw {
      const char *name, *pd, *notes;
    };
    const Raw raw[] = {
        {"unknot", "O", "A single loop with no crossings."},
        {"trefoil", "X(1,4,2,5) X(3,6,4,1) X(5,2,6,3)",
         "Right-handed trefoil: the simplest non-trivial knot, three crossings, writhe +3."},
        {"figure_eight", "X(1,6,2,7) X(3,1,4,8) X(5,2,6,3) X(7,5,8,4)",
         "Figure-eight knot: four crossings, writhe 0, not tricolorable."},
        {"hopf", "X(1,3,2,4) X(4,2,3,1)", "Hopf link: two circles linked once."},
        {"solomon", "X(1,5,2,6) X(6,4,7,1) X(8,2,5,3) X(3,7,4,8)",
         "Solomon's link: two components linked twice, linking number 2."},
    };
    std::vector<CatalogEntry> out;
    for (const auto &r : raw) {
      Diagram d = parse_pd(r.pd);
      out.push_back({r.name, d, compute_layout(d), r.notes});
    }
    return out;
  }();
  return entries;
}

inline std::vector<std::string> catalog_names() {
  std::vector<std::string> names;
  for (const auto &e : catalog())
    names.push_back(e.name);
  return names;
}

inline const CatalogEntry &catalog_get(const std::string &name) {
  for (const auto &e : catalog())
    if (e.name == name)
      return e;
  std::string valid;
  for (const auto &n : catalog_names())
    valid += (valid.empty() ? "" : ", ") + n;
  throw NotFound("no catalog entry named '" + name + "'; valid names: " + valid, valid);
}

} // namespace knotlab
