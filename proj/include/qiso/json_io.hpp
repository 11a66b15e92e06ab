#pragma once

#include <json.hpp>
#include <string>

#include "qiso/families.hpp"
#include "qiso/fraenkel.hpp"
#include "qiso/geometry.hpp"
#include "qiso/symmetrize.hpp"

namespace qiso {

using json = nlohmann::json;

// Shape schema: {"loops": [[edge, ...], ...]} with
//   {"type":"arc","center":[x,y],"radius":r,"start":a0,"end":a1,"ccw":true}
//   {"type":"segment","from":[x,y],"to":[x,y]}
json region_to_json(const ArcRegion& region);
ArcRegion region_from_json(const json& j);

ArcRegion load_region(const std::string& path);
void save_region(const ArcRegion& region, const std::string& path);

json to_json(const AsymmetryResult& r);
json to_json(const FunctionalResult& r);
json to_json(const FamilyReport& r);
json to_json(const Decomposition& d);
json to_json(const ScanReport& r);
json to_json(const SoakReport& r);

}  // namespace qiso
