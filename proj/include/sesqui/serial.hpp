#pragma once

#include "sesqui/pairings.hpp"

#include "json.hpp"

namespace sesqui {

using json = nlohmann::json;

// All integers serialize as decimal strings.
json int_to_json(const Int &v);
Int int_from_json(const json &j);

json field_to_json(const Field &f);
Field field_from_json(const json &j);

json felem_to_json(const FieldElement &x);
FieldElement felem_from_json(const json &j, const Field &f);

json curve_to_json(const Curve &E);
Curve curve_from_json(const json &j);

json point_to_json(const Point &P);
Point point_from_json(const json &j, const Curve &E);

json order_to_json(const QuadOrder &o);
QuadOrder order_from_json(const json &j);

json oelem_to_json(const OrderElem &e);
OrderElem oelem_from_json(const json &j);

json mat_to_json(const Mat2 &m);
Mat2 mat_from_json(const json &j);

json orientation_to_json(const Orientation &o);
Orientation orientation_from_json(const json &j, const Curve &E);

// {"m": ..., "g": ..., "logs": [lx, ly]} with g the canonical mu_m generator.
json reduced_value_to_json(const ReducedPairValue &v);

} // namespace sesqui
