#include "pmdyn/config.hpp"

#include "pmdyn/errors.hpp"

#include <algorithm>
#include <fstream>
#include <map>
#include <sstream>

namespace pmdyn {

namespace {

std::string trim(std::string_view s) {
  auto b = s.find_first_not_of(" \t\r");
  if (b == std::string_view::npos) return {};
  auto e = s.find_last_not_of(" \t\r");
  return std::string(s.substr(b, e - b + 1));
}

std::string join(const std::vector<Real>& xs) {
  std::string out;
  for (std::size_t i = 0; i < xs.size(); ++i) out += (i ? ", " : "") + xs[i].str();
  return out;
}

}  // namespace

std::vector<Real> parse_real_list(std::string_view text) {
  std::vector<Real> out;
  std::stringstream ss{std::string(text)};
  std::string item;
  while (std::getline(ss, item, ',')) {
    item = trim(item);
    if (item.empty()) throw Error(ErrorCode::Parse, "empty entry in list '" + std::string(text) + "'");
    out.push_back(Real::parse(item));
  }
  return out;
}

MapSpec parse_map_spec_text(std::string_view text) {
  static const char* known[] = {"family", "beta", "alpha", "slope", "endpoints", "slopes", "intercepts",
                                "boundary_images"};
  std::map<std::string, std::pair<std::string, std::size_t>> kv;
  std::stringstream ss{std::string(text)};
  std::string line;
  for (std::size_t no = 1; std::getline(ss, line); ++no) {
    auto hash = line.find('#');
    if (hash != std::string::npos) line.erase(hash);
    if (trim(line).empty()) continue;
    auto eq = line.find('=');
    if (eq == std::string::npos)
      throw Error(ErrorCode::Parse, "line " + std::to_string(no) + ": expected key = \"value\"", no);
    std::string key = trim(std::string_view(line).substr(0, eq));
    std::string value = trim(std::string_view(line).substr(eq + 1));
    if (value.size() >= 2 && value.front() == '"' && value.back() == '"') value = value.substr(1, value.size() - 2);
    else if (value.find('"') != std::string::npos)
      throw Error(ErrorCode::Parse, "line " + std::to_string(no) + ": unbalanced quote", no);
    if (std::find(std::begin(known), std::end(known), key) == std::end(known))
      throw Error(ErrorCode::Parse, "line " + std::to_string(no) + ": unknown key '" + key + "'", no);
    if (kv.count(key)) throw Error(ErrorCode::Parse, "line " + std::to_string(no) + ": duplicate key '" + key + "'", no);
    kv[key] = {trim(value), no};
  }
  auto need = [&](const std::string& key) -> const std::pair<std::string, std::size_t>& {
    auto it = kv.find(key);
    if (it == kv.end()) throw Error(ErrorCode::Parse, "missing key '" + key + "'");
    return it->second;
  };
  auto real = [&](const std::string& key) {
    const auto& [v, no] = need(key);
    try {
      return Real::parse(v);
    } catch (const Error& e) {
      throw Error(ErrorCode::Parse, "line " + std::to_string(no) + ": " + e.what(), no);
    }
  };
  auto list = [&](const std::string& key) {
    const auto& [v, no] = need(key);
    try {
      return parse_real_list(v);
    } catch (const Error& e) {
      throw Error(ErrorCode::Parse, "line " + std::to_string(no) + ": " + e.what(), no);
    }
  };
  const std::string family = need("family").first;
  if (family == "beta") return BetaSpec{real("beta")};
  if (family == "linear_mod_one") return LinearModOneSpec{real("beta"), real("alpha")};
  if (family == "tent") return TentSpec{real("slope")};
  if (family == "affine") {
    AffinePiecesSpec s{list("endpoints"), list("slopes"), list("intercepts"), {}};
    if (kv.count("boundary_images")) s.boundary_images = list("boundary_images");
    return s;
  }
  throw Error(ErrorCode::Parse, "line " + std::to_string(kv["family"].second) + ": unknown family '" + family + "'",
              kv["family"].second);
}

MapSpec parse_map_spec_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorCode::InvalidArgument, "cannot open map spec '" + path + "'");
  std::stringstream buf;
  buf << in.rdbuf();
  return parse_map_spec_text(buf.str());
}

std::string normalized_spec(const MapSpec& spec) {
  std::ostringstream os;
  std::visit(
      [&](const auto& s) {
        using T = std::decay_t<decltype(s)>;
        if constexpr (std::is_same_v<T, BetaSpec>) {
          os << "family = \"beta\"\nbeta = \"" << s.beta << "\"\n";
        } else if constexpr (std::is_same_v<T, LinearModOneSpec>) {
          os << "family = \"linear_mod_one\"\nbeta = \"" << s.beta << "\"\nalpha = \"" << s.alpha << "\"\n";
        } else if constexpr (std::is_same_v<T, TentSpec>) {
          os << "family = \"tent\"\nslope = \"" << s.slope << "\"\n";
        } else {
          os << "family = \"affine\"\nendpoints = \"" << join(s.endpoints) << "\"\nslopes = \"" << join(s.slopes)
             << "\"\nintercepts = \"" << join(s.intercepts) << "\"\n";
          if (!s.boundary_images.empty()) os << "boundary_images = \"" << join(s.boundary_images) << "\"\n";
        }
      },
      spec);
  return os.str();
}

std::vector<Interval> parse_components(std::string_view text) {
  std::vector<Interval> out;
  std::stringstream ss{std::string(text)};
  std::string group;
  while (std::getline(ss, group, ';')) {
    auto pts = parse_real_list(group);
    if (pts.size() < 2) throw Error(ErrorCode::Parse, "component list needs at least two points");
    for (std::size_t i = 0; i + 1 < pts.size(); ++i) {
      if (!(pts[i] < pts[i + 1])) throw Error(ErrorCode::Parse, "component points must increase");
      out.push_back(Interval::closed(pts[i], pts[i + 1]));
    }
  }
  return out;
}

}  // namespace pmdyn
