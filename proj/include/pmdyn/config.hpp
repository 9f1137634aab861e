#pragma once

#include "pmdyn/interval_map.hpp"

#include <string>
#include <string_view>
#include <vector>

namespace pmdyn {

/// Map spec files hold `key = "value"` lines; `#` starts a comment. Keys:
/// family (beta | linear_mod_one | tent | affine), beta, alpha, slope,
/// endpoints, slopes, intercepts, boundary_images. Lists are comma separated.
/// Throws Parse with the offending line number as index.
MapSpec parse_map_spec_text(std::string_view text);
MapSpec parse_map_spec_file(const std::string& path);

/// Canonical spec text; parsing it gives back the same spec.
std::string normalized_spec(const MapSpec& spec);

/// "0,1/2,1" -> [0,1/2], [1/2,1]; "0,1/4;1/2,1" -> [0,1/4], [1/2,1].
std::vector<Interval> parse_components(std::string_view text);

std::vector<Real> parse_real_list(std::string_view text);

}  // namespace pmdyn
