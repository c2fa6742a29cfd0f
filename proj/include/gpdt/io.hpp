#pragma once

#include "gpdt/algebra.hpp"
#include "gpdt/builders.hpp"
#include "gpdt/coarse.hpp"
#include "json.hpp"

namespace gpdt {

using nlohmann::json;

// A parsed groupoid spec plus whatever construction metadata the type carries.
struct LoadedGroupoid {
  std::string type;
  GroupoidPtr groupoid;
  std::map<std::string, int> named_generators;  // name -> arrow index
  std::optional<HlsTruncation> hls;
  std::optional<CoarseBuild> coarse;
  std::vector<FiniteGraph> graphs;  // coarse input graphs
};

// Accepted spec types: pair, group, action, hls, coarse, disjoint_union,
// explicit.  Throws IoError on malformed JSON, Error on domain failures.
LoadedGroupoid load_groupoid(const json& spec, std::size_t closure_cap = kDefaultClosureCap);
LoadedGroupoid load_groupoid_file(const std::string& path,
                                  std::size_t closure_cap = kDefaultClosureCap);

json read_json_file(const std::string& path);

// {"coeffs": [["label", re, im], ...]}
AlgebraElement load_element(const json& j, const GroupoidPtr& g);
json element_to_json(const AlgebraElement& f);

// {"values": [["label", re] or ["label", re, im], ...]} (missing arrows are 0)
KernelFunction load_kernel(const json& j, const GroupoidPtr& g);

std::vector<FiniteGraph> load_graphs(const json& j);

json matrix_to_json(const Matrix& m);

// CSV-stable formatting: 9 significant digits, C locale
std::string format_g9(double v);

}  // namespace gpdt
