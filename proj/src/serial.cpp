#include "sesqui/serial.hpp"

#include "sesqui/dlog.hpp"

namespace sesqui {

json int_to_json(const Int &v) { return v.get_str(); }

Int int_from_json(const json &j) {
    if (!j.is_string())
        fail(errc::parse_error, "expected a decimal string, got " + j.dump());
    try {
        return Int(j.get<std::string>());
    } catch (const std::invalid_argument &) {
        fail(errc::parse_error, "bad integer literal " + j.dump());
    }
}

namespace {

json coeffs_to_json(const std::vector<Int> &c) {
    json out = json::array();
    for (const Int &v : c)
        out.push_back(int_to_json(v));
    return out;
}

std::vector<Int> coeffs_from_json(const json &j) {
    if (!j.is_array())
        fail(errc::parse_error, "expected a coefficient array");
    std::vector<Int> out;
    for (const auto &v : j)
        out.push_back(int_from_json(v));
    return out;
}

} // namespace

json field_to_json(const Field &f) {
    return json{{"p", int_to_json(f->p)}, {"k", f->k}, {"modulus", coeffs_to_json(f->modulus)}};
}

Field field_from_json(const json &j) {
    return make_field(int_from_json(j.at("p")), j.at("k").get<unsigned>(),
                      coeffs_from_json(j.at("modulus")));
}

json felem_to_json(const FieldElement &x) { return coeffs_to_json(x.coeffs()); }

FieldElement felem_from_json(const json &j, const Field &f) {
    return FieldElement(f, coeffs_from_json(j));
}

json curve_to_json(const Curve &E) {
    json out{{"field", field_to_json(E->f)},
             {"a", felem_to_json(E->a)},
             {"b", felem_to_json(E->b)}};
    if (E->order_cache)
        out["order"] = int_to_json(*E->order_cache);
    return out;
}

Curve curve_from_json(const json &j) {
    Field f = field_from_json(j.at("field"));
    std::optional<Int> order;
    if (j.contains("order"))
        order = int_from_json(j.at("order"));
    return make_curve(f, felem_from_json(j.at("a"), f), felem_from_json(j.at("b"), f), order);
}

json point_to_json(const Point &P) {
    if (P.is_inf())
        return json{{"inf", true}};
    return json{{"inf", false}, {"x", felem_to_json(P.x())}, {"y", felem_to_json(P.y())}};
}

Point point_from_json(const json &j, const Curve &E) {
    if (j.at("inf").get<bool>())
        return Point(E);
    return Point(E, felem_from_json(j.at("x"), E->f), felem_from_json(j.at("y"), E->f));
}

json order_to_json(const QuadOrder &o) {
    return json{{"t", int_to_json(o.t)}, {"n", int_to_json(o.n)}};
}

QuadOrder order_from_json(const json &j) {
    return QuadOrder{int_from_json(j.at("t")), int_from_json(j.at("n"))};
}

json oelem_to_json(const OrderElem &e) {
    return json{{"a", int_to_json(e.a)}, {"b", int_to_json(e.b)}};
}

OrderElem oelem_from_json(const json &j) {
    return OrderElem{int_from_json(j.at("a")), int_from_json(j.at("b"))};
}

json mat_to_json(const Mat2 &m) {
    return json::array({json::array({int_to_json(m.a), int_to_json(m.b)}),
                        json::array({int_to_json(m.c), int_to_json(m.d)})});
}

Mat2 mat_from_json(const json &j) {
    return Mat2{int_from_json(j.at(0).at(0)), int_from_json(j.at(0).at(1)),
                int_from_json(j.at(1).at(0)), int_from_json(j.at(1).at(1))};
}

json orientation_to_json(const Orientation &o) {
    json out{{"m", int_to_json(o.m)},
             {"basis", json::array({point_to_json(o.P), point_to_json(o.Q)})},
             {"M_tau", mat_to_json(o.M)},
             {"order", order_to_json(o.ord)}};
    if (o.rel_conductor)
        out["conductor_meta"] = int_to_json(*o.rel_conductor);
    return out;
}

Orientation orientation_from_json(const json &j, const Curve &E) {
    Int m = int_from_json(j.at("m"));
    Point P = point_from_json(j.at("basis").at(0), E);
    Point Q = point_from_json(j.at("basis").at(1), E);
    std::optional<Int> cond;
    if (j.contains("conductor_meta"))
        cond = int_from_json(j.at("conductor_meta"));
    return orientation_from_matrix(E, m, P, Q, mat_from_json(j.at("M_tau")),
                                   order_from_json(j.at("order")), cond);
}

json reduced_value_to_json(const ReducedPairValue &v) {
    const Field &f = v.v.x.field();
    FieldElement g = mu_generator(f, v.m);
    Int lx = dlog_mu(g, v.v.x, v.m);
    Int ly = dlog_mu(g, v.v.y, v.m);
    return json{{"m", int_to_json(v.m)},
                {"g", felem_to_json(g)},
                {"logs", json::array({int_to_json(lx), int_to_json(ly)})}};
}

} // namespace sesqui
